#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include "choreduel/errors.hpp"

namespace choreduel {

// Exact nonnegative rational, always in canonical reduced form
// (gcd(num, den) = 1, den > 0, zero is 0/1). Every quantity in the system is
// a Rat; there is no floating point anywhere on a decision or certificate path.
//
// Subtraction is defined but throws if the result would be negative; the
// domain has no negative costs.
class Rat {
public:
    Rat() : v_(0) {}

    Rat(long value) : v_(value) {
        if (value < 0) throw std::invalid_argument("Rat: negative value");
    }

    Rat(long num, long den);

    static Rat from_mpq(mpq_class v);

    const mpz_class& numerator() const { return v_.get_num(); }
    const mpz_class& denominator() const { return v_.get_den(); }

    bool is_zero() const { return sgn(v_) == 0; }

    // Display only; never used in decisions or certificates.
    double to_double() const { return v_.get_d(); }

    // this^e, exact.
    Rat pow(std::uint64_t e) const;

    Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
    Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }

    friend Rat operator+(const Rat& a, const Rat& b) { return Rat(a.v_ + b.v_, Checked::no); }
    friend Rat operator*(const Rat& a, const Rat& b) { return Rat(a.v_ * b.v_, Checked::no); }
    friend Rat operator-(const Rat& a, const Rat& b);
    friend Rat operator/(const Rat& a, const Rat& b);

    friend bool operator==(const Rat& a, const Rat& b) { return mpq_equal(a.v_.get_mpq_t(), b.v_.get_mpq_t()) != 0; }
    friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
    friend bool operator<(const Rat& a, const Rat& b) { return cmp(a.v_, b.v_) < 0; }
    friend bool operator<=(const Rat& a, const Rat& b) { return cmp(a.v_, b.v_) <= 0; }
    friend bool operator>(const Rat& a, const Rat& b) { return cmp(a.v_, b.v_) > 0; }
    friend bool operator>=(const Rat& a, const Rat& b) { return cmp(a.v_, b.v_) >= 0; }

private:
    enum class Checked { no };
    Rat(mpq_class v, Checked) : v_(std::move(v)) {}

    mpq_class v_;
};

// Text format: "p" or "p/q", decimal digit strings, q != 0, no sign, no
// whitespace. format(parse(s)) == s whenever s is canonical.
Rat parse_rat(std::string_view text);
std::string format_rat(const Rat& r);

std::ostream& operator<<(std::ostream& os, const Rat& r);

}  // namespace choreduel
