// Exponential sums against polynomial phases, character/n^{iT} twists,
// Gowers uniformity norms over short intervals, and a Dirichlet-polynomial
// sup probe over a t-grid.
#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "ntshort/interval_sieve.hpp"
#include "ntshort/poly_mod1.hpp"

namespace ntshort {

struct DirichletCharacter {
    i64 q{1};
    std::vector<cd> table;  // table[n % q]

    cd operator()(i64 n) const { return table[static_cast<size_t>(((n % q) + q) % q)]; }

    static DirichletCharacter principal(i64 q);
    // nonprincipal character mod 4
    static DirichletCharacter chi4();
    // Legendre symbol character mod an odd prime
    static DirichletCharacter quadratic(i64 p);
    // validates: periodic by construction, completely multiplicative,
    // zero exactly on gcd(n, q) > 1, roots of unity elsewhere
    static DirichletCharacter from_table(i64 q, std::vector<cd> table);
};

// sum_{X < n <= X+H} f(n) e(P(n)); the polynomial range must contain the slab.
cd exp_sum(const IntervalSlab& f, const PolyMod1& P);

// sum f(n) chi(n) n^{iT}; chi omitted means no character factor.
cd twisted_sum(const IntervalSlab& f, double T,
               const std::optional<DirichletCharacter>& chi = std::nullopt);

struct GowersResult {
    int s{1};
    i64 X{0}, H{0};
    double unnormalized{0.0};  // || f 1_{(X,X+H]} ||_{U^s(Z)}
    double normalizer{0.0};    // || 1_{(X,X+H]} ||_{U^s(Z)}
    double normalized{0.0};
};

// U^s over the slab window via the multiplicative-derivative recursion.
// Cost guard: H <= 2^12 when s >= 3.
GowersResult gowers_norm(const IntervalSlab& f, int s);
GowersResult gowers_norm(std::span<const cd> values, i64 X, int s);

// ||g||_{U^s(Z)}^{2^s} for finitely supported g (exposed for cross-checks).
double gowers_pow(std::span<const cd> values, int s);
// Same norm on the cyclic group Z_N (values padded to length N).
double gowers_pow_cyclic(std::span<const cd> values, i64 N, int s);

struct DirichletSupResult {
    double sup{0.0};
    double argmax_t{0.0};
    i64 prefix_end{0};  // y with I = (L, y] attaining the sup at argmax_t
};

// sup over t in a uniform grid on [t_lo, t_hi] (plus 3 golden-section
// refinement rounds) and over prefixes (L, y] of
// |sum_{l in (L,y]} v_l chi(l) l^{-1/2 - it}|.  v[i] sits at l = L + 1 + i.
DirichletSupResult dirichlet_poly_sup(std::span<const double> v, i64 L,
                                      const DirichletCharacter& chi,
                                      double t_lo, double t_hi, i64 grid);

}  // namespace ntshort
