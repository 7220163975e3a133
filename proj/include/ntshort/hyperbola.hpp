// Partition of the hyperbola neighborhood {(m,n): m in J, X < nm <= X+H}
// into arithmetic progressions of spacing (q,-a), with exact verification.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "ntshort/progressions.hpp"

namespace ntshort {

struct HyperbolaParams {
    i64 X{0};
    i64 H{0};
    i64 M{0};
    i64 J_lo{0}, J_hi{0};  // J = (J_lo, J_hi] subinterval of (M, 2M]
    i64 Q{1};
};

struct HyperbolaPartition {
    HyperbolaParams params;
    // families keyed by (q, a), gcd(a,q) = 1
    std::map<std::pair<i64, i64>, std::vector<Progression2D>> families;

    struct Stats {
        i64 total_points{0};
        i64 total_progressions{0};
        i64 max_length{0};
        double min_a_ratio{0.0}, max_a_ratio{0.0};  // observed a / ((X/M^2) q)
    } stats;

    // one progression per line: {"q":..,"a":..,"m0":..,"n0":..,"len":..}
    std::string dump_jsonl() const;
};

// Throws std::invalid_argument naming the violated inequality.
void check_hyperbola_params(const HyperbolaParams& p);

HyperbolaPartition partition_hyperbola(const HyperbolaParams& p);

struct VerifyReport {
    bool pass{false};
    std::string failure;           // empty on pass
    i64 set_size{0};
    double fitted_family_C{0.0};   // max over families of count / (M^3/(X Q^2 q))
    double fitted_total_C{0.0};    // total points / H
    bool exhaustive{true};         // false when the sampling fallback was used
};

// Checks exact disjoint cover against direct enumeration (when the set has
// at most `enumeration_budget` points; beyond that a fixed random sample of
// membership checks is used and the report is flagged partial), re-derives
// the defining constraints pointwise, and validates spacing/coprimality/
// length plus the per-family and total cardinality fits.
VerifyReport verify_partition(const HyperbolaPartition& part,
                              i64 enumeration_budget = 10'000'000,
                              u64 sample_seed = 1);

}  // namespace ntshort
