#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "choreduel/model.hpp"

namespace choreduel {

// Default item cap for exact solving; beyond it callers get a
// ResourceLimitError and must rely on witness certificates instead.
inline constexpr int kDefaultExactItemCap = 20;

struct MmsResult {
    Rat value;
    Partition partition;  // witnesses the value: its max bundle cost equals value
};

// Exact min-max n-partition value of the items, with a witnessing partition.
// Depth-first branch and bound: items in descending cost order (ties: lower
// index first), prune when the partial max reaches the incumbent, a new empty
// bundle may only be opened in the lowest-index position. Deterministic.
MmsResult mms_exact(const std::vector<Rat>& item_costs, int k, int max_items = kDefaultExactItemCap);

// Reference oracle: minimum over all k^m assignments of the max bundle cost.
// Test use only; refuses instances with more than max_assignments cases.
Rat mms_bruteforce(const std::vector<Rat>& item_costs, int k,
                   std::uint64_t max_assignments = 1u << 22);

// Longest-processing-time greedy: items by descending cost (ties: lower index
// first) into the currently lightest bundle (ties: lowest bundle index).
// Max bundle <= total/k + max item, exactly.
Partition lpt_partition(const std::vector<Rat>& item_costs, int k);

// Max over bundles of the bundle cost sum. The partition must cover exactly
// the item index set {1..m}; any such partition upper-bounds the MMS value.
Rat partition_max_bundle(const std::vector<Rat>& item_costs, const Partition& partition);

enum class VerifyStatus {
    valid,
    invalid,           // well-formed but a recomputation or the inequality failed
    structural_error,  // witness not an exact cover, missing verdict, bad indices
};

struct VerifyReport {
    VerifyStatus status = VerifyStatus::structural_error;
    std::string detail;

    bool ok() const { return status == VerifyStatus::valid; }
};

// Recomputes a Violation verdict from scratch: exact cover, mms_upper,
// assigned cost, ratio, and assigned >= (1-eps)*n*mms_upper. Since any
// partition upper-bounds MMS, a pass certifies assigned >= (1-eps)*n*MMS.
VerifyReport verify_violation(const Transcript& t);

}  // namespace choreduel
