// A concrete degree-2, dimension-3 filtered nilmanifold: the upper-triangular
// unipotent group in coordinates (x, y, z) with lattice the integer triples.
// Group law (x,y,z)(x',y',z') = (x+x', y+y', z+z'+xy'); polynomial sequences
// g(n) = g0 g1^n g2^C(n,2) with central g2; reduction to [0,1)^3; nilsequence
// evaluation and correlation sums; horizontal-character pullbacks.
#pragma once

#include <complex>
#include <functional>
#include <string>

#include "ntshort/interval_sieve.hpp"
#include "ntshort/poly_mod1.hpp"

namespace ntshort {

using cd = std::complex<double>;

template <typename T>
struct HeisPointT {
    T x{}, y{}, z{};

    friend HeisPointT operator*(const HeisPointT& g, const HeisPointT& h) {
        return {g.x + h.x, g.y + h.y, g.z + h.z + g.x * h.y};
    }
    HeisPointT inverse() const { return {-x, -y, -z + x * y}; }
    static HeisPointT identity() { return {}; }
};

using HeisPoint = HeisPointT<double>;
using HeisPointQ = HeisPointT<Rat>;

// closed form g^n = (nx, ny, nz + C(n,2) x y), any integer n
template <typename T>
HeisPointT<T> heis_pow(const HeisPointT<T>& g, i64 n) {
    i64 c2i = static_cast<i64>(binom_i128(n, 2));
    T nn, c2;
    if constexpr (std::is_same_v<T, double>) {
        nn = static_cast<double>(n);
        c2 = static_cast<double>(c2i);
    } else {
        nn = T(n);
        c2 = T(c2i);
    }
    return {nn * g.x, nn * g.y, nn * g.z + c2 * (g.x * g.y)};
}

struct HeisReduced {
    HeisPoint rep;          // in [0,1)^3
    i64 gx{0}, gy{0}, gz{0};  // the lattice element applied on the right
};

// right-multiplies by a lattice element so the result lands in [0,1)^3;
// idempotent, and constant on cosets g Gamma.
HeisReduced heis_reduce(const HeisPoint& g);

struct HeisPolySeq {
    HeisPoint g0, g1;
    double g2z{0.0};  // central: g2 = (0, 0, g2z)

    HeisPoint at(i64 n) const;          // group element g(n) (unreduced)
    HeisPoint reduced_at(i64 n) const;  // representative of g(n) Gamma, stable
                                        // for n up to interval scales
    std::string json(int xi) const;
    static std::pair<HeisPolySeq, int> from_json(const std::string& text);
};

// Function on the quotient. Default: e(xi z) sin^2(pi x) sin^2(pi y), which
// vanishes at the x,y gluings and oscillates with central frequency xi.
struct NilFunction {
    int xi{1};
    std::function<cd(double, double, double)> custom;  // overrides the default

    cd operator()(const HeisPoint& rep) const;
};

// randomized gluing-continuity probe for user-supplied functions
bool quotient_continuous(const NilFunction& F, int pairs = 1000, double tol = 1e-6,
                         u64 seed = 1);

cd nilsequence_eval(const HeisPolySeq& seq, const NilFunction& F, i64 n);

// sum_{X < n <= X+H} f(n) conj(F(g(n) Gamma))
cd nil_corr(const IntervalSlab& f, const HeisPolySeq& seq, const NilFunction& F);

// the degree <= 2 polynomial n -> k1 x(g(n)) + k2 y(g(n)) in binomial basis
PolyMod1 horizontal_pullback(const HeisPolySeq& seq, i64 k1, i64 k2);

}  // namespace ntshort
