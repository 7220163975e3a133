// Combinatorial decompositions: the Heath-Brown identity expansion into
// dyadic convolution components, the Ramare identity with its divisor
// coefficients, and the exponent-range classifier with witnesses.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ntshort/common.hpp"
#include "ntshort/interval_sieve.hpp"

namespace ntshort {

struct ConvolutionFactor {
    enum Kind { unit, log, moebius };
    Kind kind{unit};
    double N{1.0};  // support (N, 2N], dyadic, N a power of two >= 1/2
};

struct ConvolutionComponent {
    i64 coeff{1};  // signed binomial weight times ordering multiplicity
    std::vector<ConvolutionFactor> factors;
};

struct HeathBrownDecomposition {
    std::vector<ConvolutionComponent> components;
    double z{0.0};          // cutoff actually used (power of two)
    double mu_support_max{0.0};  // largest dyadic start among moebius factors
};

// Components summing to the target on [X/2, 4X], K = L levels.
HeathBrownDecomposition heath_brown(FnKind::Tag target, i64 X, int L);

// sum over components evaluated at every n <= N_max (budget 2e6).
std::vector<double> evaluate_components(const std::vector<ConvolutionComponent>& comps, i64 N_max);
// Restriction to a window [lo, hi]; out[i] is the value at n = lo + i.
std::vector<double> evaluate_components_window(const std::vector<ConvolutionComponent>& comps,
                                               i64 lo, i64 hi);
// Integer-exact variant; throws if a log factor is present.
std::vector<i64> evaluate_components_exact_window(const std::vector<ConvolutionComponent>& comps,
                                                  i64 lo, i64 hi);

struct RamareDecomposition {
    std::vector<Rat> lhs;  // f(n) 1_{n has a prime factor in (P,Q]}
    std::vector<Rat> rhs;  // assembled over pairs pm = n, P < p <= Q
    // coefficients a_r, r with all prime factors in (P, Q], r <= r_cap
    std::vector<std::pair<u64, Rat>> a_r;
};

// f is an integer-valued multiplicative function given by its value on a
// factor list (so it can be evaluated both on the interval and on the small
// r arguments of the coefficients). lhs = f(n) 1_{(n, P(P,Q)) > 1}; rhs is
// the prime-times-cofactor double sum with the 1/omega weights; the two
// agree exactly in rational arithmetic.
using MultiplicativeFn = std::function<i64(const FactoredInterval::Factors&)>;

RamareDecomposition ramare_decompose(const FactoredInterval& fi, i64 P, i64 Q,
                                     const MultiplicativeFn& f, u64 r_cap = 10000);

// ready-made factor-list evaluators
i64 mu_of_factors(const FactoredInterval::Factors& f);
i64 dk_int_of_factors(const FactoredInterval::Factors& f, int k);

enum class SumLabel { I, I2maj, I2, IImaj, IImin };
std::string to_string(SumLabel l);

struct ExponentClassification {
    std::vector<double> alphas;
    double theta{0.0};
    bool holds[5]{false, false, false, false, false};  // indexed by SumLabel
    // witnesses: index sets as sorted index lists
    std::vector<int> w_I;                         // single index
    std::vector<int> w_I2maj, w_I2;               // pair {i, j}
    std::vector<int> w_IImaj_I, w_IImaj_J, w_IImaj_Jp;
    std::vector<int> w_IImin_J;

    bool has(SumLabel l) const { return holds[static_cast<int>(l)]; }
    std::string json() const;
};

// Decides each label exactly for k <= 12 (exhaustive subset scan); for
// larger k falls back to the constructive greedy that realizes the
// guaranteed cases (sound, possibly incomplete). Comparisons carry a 1e-9
// slack toward acceptance.
ExponentClassification classify_exponents(const std::vector<double>& alphas, double theta);

// Exact-rational variant for rational inputs; no slack.
ExponentClassification classify_exponents_exact(const std::vector<Rat>& alphas, const Rat& theta);

// The guaranteed conclusions: given (k, theta) matching one of the six
// cases, the returned label set must intersect the classification.
// (i) theta=5/8: I or IImaj            (ii) theta>=3/5: I, I2 or IImin
// (iii) theta=7/12: I, I2maj or IImaj  (iv) k=5, theta=11/20: I2maj or IImaj
// (v) k in {3,4}, theta>=1/2: I2maj    (vi) k=3 theta>=5/9 / k=2 theta>=1/3: I2
std::vector<SumLabel> guaranteed_conclusions(int case_index);

}  // namespace ntshort
