// Real-coefficient polynomials evaluated mod 1: smoothness norms over
// intervals, equidistribution searches, and dilation profiles.
//
// Two bases about an integer center c: monomial  sum_j a_j (n-c)^j  and
// binomial  sum_j a_j C(n-c, j).  An optional exact view carries the
// coefficients as nums[j]/den with a common denominator; mod-1 arithmetic
// on it is exact, which is what planted-rational tests rely on.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ntshort/common.hpp"

namespace ntshort {

inline constexpr int kMaxPolyDegree = 8;
inline constexpr i64 kMaxExactDen = 1'000'000;
inline constexpr i64 kExactEvalWindow = i64(1) << 16;

struct Interval {
    double lo{0.0};
    double hi{0.0};

    double length() const { return hi - lo; }
    i64 first_int() const { return static_cast<i64>(std::ceil(lo)); }
    i64 last_int() const { return static_cast<i64>(std::floor(hi)); }
    i64 int_count() const { return std::max<i64>(0, last_int() - first_int() + 1); }
};

struct PolyMod1 {
    enum class Basis { monomial, binomial };
    Basis basis{Basis::binomial};
    i64 center{0};
    std::vector<double> coeffs;  // degree = size-1, capped at kMaxPolyDegree

    // exact view (mod 1): coeffs[j] == nums[j]/den up to an integer
    bool exact{false};
    std::vector<i64> nums;  // reduced into [0, den)
    i64 den{1};

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    std::string json() const;
    static PolyMod1 from_json(const std::string& text);
};

PolyMod1 make_poly(PolyMod1::Basis basis, i64 center, std::vector<double> coeffs);
// Exact rational coefficients coeff[j] = nums[j]/den (den <= kMaxExactDen).
PolyMod1 make_poly_exact(PolyMod1::Basis basis, i64 center, std::vector<i64> nums, i64 den);

// Basis changes keep the center; recenter keeps the basis. All three keep
// the exact view when it survives the transform.
PolyMod1 to_binomial(const PolyMod1& p);
PolyMod1 to_monomial(const PolyMod1& p);
PolyMod1 recenter(const PolyMod1& p, i64 new_center);

// q * P mod 1.
PolyMod1 scale_int(const PolyMod1& p, i64 q);
// P(a * n), binomial basis about 0.
PolyMod1 dilate(const PolyMod1& p, i64 a);

// Distance of x to the nearest integer, in [0, 1/2].
inline double dist_R_over_Z(double x) { return dist_to_int(x); }

// P(n) mod 1 in [0,1). Exact for the stored double (or rational) coefficients.
double eval_mod1(const PolyMod1& p, i64 n);
inline double dist_eval(const PolyMod1& p, i64 n) { return dist_to_int(eval_mod1(p, n)); }

// sup_{0<=j<=deg} sup_{n in I} |I|^j ||D^j P(n)||  with D the backward
// difference. Exact over all integers of I when there are at most 2^16 of
// them, otherwise evaluated on a stride and flagged approximate.
double smoothness_norm(const PolyMod1& p, const Interval& I, bool* exact_out = nullptr);

struct VinogradovHit {
    i64 q;
    double norm;
};
// Smallest q <= q_max with smoothness_norm(qP, I) <= tol.
std::optional<VinogradovHit> vinogradov_search(const PolyMod1& p, const Interval& I,
                                               i64 q_max, double tol);

// Fraction of integers n in I with ||P(n)|| <= eps (relative to the integer count).
double fraction_small(const PolyMod1& p, const Interval& I, double eps);

// Fraction of a in [A, 2A] with smoothness_norm(P(a.), I/a) <= threshold.
double smooth_dilate_profile(const PolyMod1& p, i64 A, const Interval& I, double threshold);

}  // namespace ntshort
