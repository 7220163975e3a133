// Arithmetic progressions in Z and Z^2, maximal partial sums over
// subprogressions, and total-variation norms.
#pragma once

#include <complex>
#include <span>
#include <string>

#include "ntshort/common.hpp"

namespace ntshort {

using cd = std::complex<double>;

struct Progression1D {
    i64 start{0};
    i64 step{1};
    i64 length{0};

    i64 element(i64 j) const { return start + j * step; }
    std::string json() const;
};

// Progression in Z^2 with spacing (q, -a): points (m0 + j*q, n0 - j*a).
struct Progression2D {
    i64 m0{0}, n0{0};
    i64 q{1}, a{0};
    i64 length{1};

    std::pair<i64, i64> point(i64 j) const { return {m0 + j * q, n0 - j * a}; }
};

struct MaximalSumResult {
    double value{0.0};
    Progression1D witness;  // length 0 when the input is empty
};

// sup over all subprogressions of I (step <= q_max) of |sum of f on it|.
// f[i] sits at integer first + i. q_max = |I| recovers the full quantity.
// Ties resolved toward lexicographically smallest (step, start, length).
MaximalSumResult maximal_sum(std::span<const cd> f, i64 first, i64 q_max);
MaximalSumResult maximal_sum(std::span<const double> f, i64 first, i64 q_max);

// Total variation of the values of f along a progression listed in
// increasing order: sup|f| + sum of adjacent |differences|; 0 when empty.
double tv_norm(std::span<const cd> f);
double tv_norm(std::span<const double> f);

// TV(P;q): tv_norm summed over the residue classes of P's elements mod q.
// f[j] is the value at P.element(j).
double tv_norm_q(std::span<const cd> f, const Progression1D& P, i64 q);

}  // namespace ntshort
