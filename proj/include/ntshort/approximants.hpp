// Explicit model functions for Lambda and d_k on short intervals: the
// sieve-weighted rough-number model, its divisor-truncated type-I form,
// the small-primorial W variant, and the divisor-function model built
// from the P_m polynomials.
#pragma once

#include <map>
#include <vector>

#include "ntshort/interval_sieve.hpp"

namespace ntshort {

struct ApproximantParams {
    double R{0.0};      // rough-number model level, >= 2; 0 = paper default exp((log X)^{1/10})
    double w{2.0};      // W-variant level, >= 2
    double eta{0.0};    // d_k model exponent, R_k = X^eta; 0 = default 1/(10k)
    double trunc{0.0};  // type-I divisor cutoff; 0 = default X^{0.3}

    static double default_R(double X) { return std::exp(std::pow(std::log(X), 0.1)); }
    static double default_eta(int k) { return 1.0 / (10.0 * k); }
    static double default_trunc(double X) { return std::pow(X, 0.3); }
};

// (P(R)/phi(P(R))) * 1_{(n, P(R)) = 1}, P(R) the product of primes < R.
double lambda_sharp(u64 n, double R);
IntervalSlab lambda_sharp_slab(i64 X, i64 H, double R);

// Type-I truncation: (P(R)/phi(P(R))) * sum_{d <= trunc, d | (n, P(R))} mu(d).
IntervalSlab lambda_sharp_I_slab(i64 X, i64 H, double R, double trunc);

// (W/phi(W)) * 1_{(n, W) = 1}, W the product of primes <= w.
double lambda_w(u64 n, double w);
IntervalSlab lambda_w_slab(i64 X, i64 H, double w);

// Coefficient vector (degree k-1, index = power of t) of the polynomial
// attached to the divisor m in the d_k model at level R_k.
std::vector<double> dk_model_poly(u64 m, int k, double R_k);

// Cache of the polynomials for one (k, R_k); safe for concurrent reads
// after build().
class DkModelTable {
  public:
    DkModelTable(int k, double R_k);
    // builds every P_m for m <= floor(R_k^{2k-2})
    void build();
    const std::vector<double>& poly(u64 m) const;
    u64 m_cap() const { return m_cap_; }
    int k() const { return k_; }
    double R_k() const { return rk_; }

  private:
    int k_;
    double rk_;
    u64 m_cap_;
    std::vector<std::vector<double>> polys_;  // index m, 1-based up to m_cap_
    std::vector<double> zero_;
};

// d_k model values over a factored interval: sum_{m | n, m <= R_k^{2k-2}} P_m(log n).
IntervalSlab dk_sharp(const FactoredInterval& fi, int k, double eta);

// Upper bound C(k, eta, X) with d_k_model(n) <= C * d_k(n) for n <= 2X,
// from term-by-term bounds on the P_m sum.
double dk_model_upper_constant(int k, double eta, double X);

}  // namespace ntshort
