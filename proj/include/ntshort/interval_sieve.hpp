// Segmented sieving of arithmetic functions on a short interval (X, X+H].
// Slabs carry values[i] for n = X + 1 + i; nothing of size X is allocated.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ntshort/common.hpp"

namespace ntshort {

// Which arithmetic function a slab holds. dk carries k; rough_ind carries (P, Q).
struct FnKind {
    enum Tag {
        mu, lambda_vm, dk, liouville, r2, prime_ind, rough_ind, one,
        lambda_sharp, lambda_sharp_I, lambda_w, dk_sharp
    };
    Tag tag{mu};
    int k{0};          // dk, dk_sharp
    i64 P{0}, Q{0};    // rough_ind

    static FnKind Mu() { return {mu}; }
    static FnKind LambdaVm() { return {lambda_vm}; }
    static FnKind Dk(int kk) { FnKind f{dk}; f.k = kk; return f; }
    static FnKind Liouville() { return {liouville}; }
    static FnKind R2() { return {r2}; }
    static FnKind PrimeInd() { return {prime_ind}; }
    static FnKind RoughInd(i64 p, i64 q) { FnKind f{rough_ind}; f.P = p; f.Q = q; return f; }
    static FnKind One() { return {one}; }

    std::string str() const;
    static std::optional<FnKind> parse(const std::string& s);
};

struct IntervalSlab {
    i64 X{0};
    i64 H{0};
    FnKind kind;
    std::vector<double> values;  // values[i] <-> n = X + 1 + i

    i64 n_at(i64 i) const { return X + 1 + i; }
    double at_n(i64 n) const { return values[static_cast<size_t>(n - X - 1)]; }
};

// Exact factorizations of every n in (X, X+H], flat CSR layout.
struct FactoredInterval {
    i64 X{0};
    i64 H{0};
    std::vector<u64> offsets;       // size H+1
    std::vector<u64> primes;        // factor primes, ascending per n
    std::vector<uint32_t> exps;

    struct Factors {
        const u64* p;
        const uint32_t* e;
        size_t count;
    };
    Factors factors_of_index(i64 i) const {
        size_t lo = offsets[static_cast<size_t>(i)], hi = offsets[static_cast<size_t>(i) + 1];
        return {primes.data() + lo, exps.data() + lo, hi - lo};
    }
    Factors factors_of(i64 n) const { return factors_of_index(n - X - 1); }

    // All divisors of n = X+1+i that are <= cap (unordered).
    std::vector<u64> divisors_upto(i64 i, u64 cap) const;
};

inline constexpr i64 kMaxRepresentable = i64(1) << 52;

// Segment size for sieving; kept cache-sized, overridable.
i64& sieve_segment_size();

void check_interval_args(i64 X, i64 H);

FactoredInterval factor_interval(i64 X, i64 H);

IntervalSlab sieve_slab(i64 X, i64 H, FnKind kind);

// 1 iff n has a prime factor in (P, Q].
IntervalSlab rough_indicator(const FactoredInterval& fi, i64 P, i64 Q);

// Divisor-function value from a factor list.
double dk_from_factors(const FactoredInterval::Factors& f, int k);
// Sum-of-two-squares representation count from a factor list.
double r2_from_factors(const FactoredInterval::Factors& f);

// CSV ("n,value" rows) plus a JSON sidecar {X,H,kind} at path + ".json".
void write_slab_csv(const IntervalSlab& s, const std::string& path);
IntervalSlab read_slab_csv(const std::string& path);

}  // namespace ntshort
