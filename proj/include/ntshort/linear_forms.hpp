// Local and archimedean factors for systems of affine-linear forms over
// axis-aligned boxes, plus the exact weighted solution count.
#pragma once

#include <string>
#include <vector>

#include "ntshort/common.hpp"
#include "ntshort/interval_sieve.hpp"

namespace ntshort {

struct AffineForm {
    std::vector<i64> dot;  // length d
    i64 constant{0};

    i64 eval(const std::vector<i64>& n) const {
        i64 v = constant;
        for (size_t j = 0; j < dot.size(); ++j) v += dot[j] * n[j];
        return v;
    }
};

struct AffineLinearSystem {
    int d{1};
    std::vector<AffineForm> forms;

    int t() const { return static_cast<int>(forms.size()); }
    std::string json() const;
    static AffineLinearSystem from_json(const std::string& text);
};

// shape validation; duplicate forms rejected (constellation systems with
// proportional dotted parts are fine for the local computations)
void check_system(const AffineLinearSystem& sys);
// the main-term theorem's hypothesis, queryable separately
bool pairwise_independent(const AffineLinearSystem& sys);

struct Box {
    // coordinate j ranges over the integers (lo[j], lo[j] + len[j]]
    std::vector<i64> lo;
    std::vector<i64> len;

    double volume() const {
        double v = 1.0;
        for (i64 l : len) v *= static_cast<double>(l);
        return v;
    }
};

// beta_p = E_{n in (Z/p)^d} prod_i (p/(p-1)) 1_{psi_i(n) != 0 mod p},
// exact; guard p^d <= 1e8.
Rat local_factor_lambda(const AffineLinearSystem& sys, i64 p);

struct DkLocalFactor {
    Rat value;
    double tail_bound;  // truncation error bound for the J-level cutoff
};
// beta_p = E_{n mod p^J} prod_i ((p-1)/p)^{k-1} C(k-1+v_p(psi_i(n)), k-1),
// v_p truncated at J; guard p^{Jd} <= 1e8.
DkLocalFactor local_factor_dk(const AffineLinearSystem& sys, i64 p, int k, int J);

struct ArchimedeanWeight {
    enum Kind { lambda, dk } kind{lambda};
    int k{2};
};
struct ArchimedeanResult {
    double value;
    double refinement_delta;  // |value - coarser-grid value|
};
// lambda: vol(K cap Psi^{-1}(R_>0^t)); dk: the log_+^{k-1}/(k-1)! integral.
// Tensor midpoint quadrature, 2^10 nodes per axis for d <= 2 (fewer beyond).
ArchimedeanResult archimedean_factor(const AffineLinearSystem& sys, const Box& box,
                                     ArchimedeanWeight weight);

// sum over integer points of the box of prod_i w_i(psi_i(n)), with w_i given
// by slabs covering each form's value range (values extended by 0 outside
// and at nonpositive arguments). Budget: 1e9 points.
double count_weighted_solutions(const AffineLinearSystem& sys, const Box& box,
                                const std::vector<const IntervalSlab*>& weights);

// value range (min, max) of form i over the closed box corners
std::pair<i64, i64> form_range(const AffineLinearSystem& sys, const Box& box, int i);

}  // namespace ntshort
