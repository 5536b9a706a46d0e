#include "choreduel/rat.hpp"

#include <cctype>
#include <ostream>

namespace choreduel {

Rat::Rat(long num, long den) {
    if (den == 0) throw std::invalid_argument("Rat: zero denominator");
    if (num < 0 || den < 0) throw std::invalid_argument("Rat: negative value");
    v_ = mpq_class(num, den);
    v_.canonicalize();
}

Rat Rat::from_mpq(mpq_class v) {
    v.canonicalize();
    if (sgn(v) < 0) throw std::invalid_argument("Rat: negative value");
    Rat r;
    r.v_ = std::move(v);
    return r;
}

Rat Rat::pow(std::uint64_t e) const {
    mpq_class out;
    mpz_pow_ui(out.get_num_mpz_t(), v_.get_num_mpz_t(), e);
    mpz_pow_ui(out.get_den_mpz_t(), v_.get_den_mpz_t(), e);
    // num/den coprime implies num^e/den^e coprime; already canonical.
    return Rat(std::move(out), Checked::no);
}

Rat operator-(const Rat& a, const Rat& b) {
    if (b > a) throw std::invalid_argument("Rat: negative subtraction result");
    return Rat(mpq_class(a.v_ - b.v_), Rat::Checked::no);
}

Rat operator/(const Rat& a, const Rat& b) {
    if (b.is_zero()) throw std::invalid_argument("Rat: division by zero");
    return Rat(mpq_class(a.v_ / b.v_), Rat::Checked::no);
}

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

}  // namespace

Rat parse_rat(std::string_view text) {
    std::string_view num = text;
    std::string_view den = "1";
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        num = text.substr(0, slash);
        den = text.substr(slash + 1);
    }
    if (!all_digits(num) || !all_digits(den)) {
        throw ParseError("bad rational literal: \"" + std::string(text) + "\"");
    }
    mpq_class v;
    mpz_set_str(v.get_num_mpz_t(), std::string(num).c_str(), 10);
    mpz_set_str(v.get_den_mpz_t(), std::string(den).c_str(), 10);
    if (sgn(v.get_den()) == 0) {
        throw ParseError("zero denominator in rational literal: \"" + std::string(text) + "\"");
    }
    v.canonicalize();
    return Rat::from_mpq(std::move(v));
}

std::string format_rat(const Rat& r) {
    if (r.denominator() == 1) return r.numerator().get_str();
    return r.numerator().get_str() + "/" + r.denominator().get_str();
}

std::ostream& operator<<(std::ostream& os, const Rat& r) {
    return os << format_rat(r);
}

}  // namespace choreduel
