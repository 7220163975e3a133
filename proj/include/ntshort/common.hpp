// Shared small utilities: integer helpers, exact rationals on __int128,
// mod-1 arithmetic that survives large arguments, prime generation,
// deterministic parallel loops.
#pragma once

#include <cstdint>
#include <cmath>
#include <cassert>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>
#include <functional>

namespace ntshort {

using i64 = int64_t;
using u64 = uint64_t;
using i128 = __int128_t;
using u128 = __uint128_t;
using cd = std::complex<double>;

// Largest n with n*n <= x.
inline u64 isqrt(u64 x) {
    if (x == 0) return 0;
    u64 r = static_cast<u64>(std::sqrt(static_cast<double>(x)));
    while (r > 0 && r * r > x) --r;
    while ((r + 1) * (r + 1) <= x) ++r;
    return r;
}

inline std::string to_string_i128(i128 v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    u128 x = neg ? static_cast<u128>(-(v + 1)) + 1 : static_cast<u128>(v);
    std::string s;
    while (x) { s.push_back(static_cast<char>('0' + static_cast<int>(x % 10))); x /= 10; }
    if (neg) s.push_back('-');
    return std::string(s.rbegin(), s.rend());
}

inline i128 gcd_i128(i128 a, i128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b) { i128 t = a % b; a = b; b = t; }
    return a;
}

// Exact rational with __int128 numerator/denominator, always reduced, den > 0.
struct Rat {
    i128 num{0};
    i128 den{1};

    Rat() = default;
    Rat(i64 n) : num(n), den(1) {}
    Rat(i128 n, i128 d) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den == 0) throw std::domain_error("Rat: zero denominator");
        if (den < 0) { num = -num; den = -den; }
        i128 g = gcd_i128(num, den);
        if (g > 1) { num /= g; den /= g; }
    }
    double to_double() const {
        return static_cast<double>(num) / static_cast<double>(den);
    }
    bool is_zero() const { return num == 0; }
    std::string str() const {
        return den == 1 ? to_string_i128(num)
                        : to_string_i128(num) + "/" + to_string_i128(den);
    }

    friend Rat operator+(const Rat& a, const Rat& b) {
        i128 g = gcd_i128(a.den, b.den);
        return Rat(a.num * (b.den / g) + b.num * (a.den / g), (a.den / g) * b.den);
    }
    friend Rat operator-(const Rat& a, const Rat& b) {
        i128 g = gcd_i128(a.den, b.den);
        return Rat(a.num * (b.den / g) - b.num * (a.den / g), (a.den / g) * b.den);
    }
    friend Rat operator*(const Rat& a, const Rat& b) {
        i128 g1 = gcd_i128(a.num, b.den), g2 = gcd_i128(b.num, a.den);
        return Rat((a.num / g1) * (b.num / g2), (a.den / g2) * (b.den / g1));
    }
    friend Rat operator/(const Rat& a, const Rat& b) {
        if (b.num == 0) throw std::domain_error("Rat: division by zero");
        return a * Rat(b.den, b.num);
    }
    friend Rat operator-(const Rat& a) { Rat r; r.num = -a.num; r.den = a.den; return r; }
    friend bool operator==(const Rat& a, const Rat& b) { return a.num == b.num && a.den == b.den; }
    friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
    friend bool operator<(const Rat& a, const Rat& b) { return a.num * b.den < b.num * a.den; }
    friend bool operator<=(const Rat& a, const Rat& b) { return a.num * b.den <= b.num * a.den; }
    friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
    friend bool operator>=(const Rat& a, const Rat& b) { return b <= a; }
    Rat abs() const { Rat r = *this; if (r.num < 0) r.num = -r.num; return r; }
};

// x mod 1 in [0, 1).
inline double frac01(double x) {
    double f = x - std::floor(x);
    if (f >= 1.0) f = 0.0;   // floor rounding at negative epsilons
    return f;
}

// e(theta) = exp(2 pi i theta)
inline cd e_of(double theta) {
    double t = 2.0 * M_PI * frac01(theta);
    return {std::cos(t), std::sin(t)};
}

// Distance to the nearest integer, in [0, 1/2]; exact at half-integers.
inline double dist_to_int(double x) {
    double f = frac01(x);
    return f <= 0.5 ? f : 1.0 - f;
}

// Fractional part of a*b for integer b, |b| < 2^62, computed with an exact
// fma two-product so the only error is the representation of `a` itself.
inline double frac_mul(double a, i64 b) {
    // split b so each partial product is exactly representable
    if (b < 0) return frac01(-frac_mul(a, -b));
    constexpr i64 kSplit = i64(1) << 31;
    if (b >= (i64(1) << 53)) {
        i64 hi = b >> 31, lo = b & (kSplit - 1);
        return frac01(frac_mul(std::ldexp(a, 31), hi) + frac_mul(a, lo));
    }
    double bd = static_cast<double>(b);
    double p = a * bd;
    double e = std::fma(a, bd, -p);
    return frac01(std::fmod(p, 1.0) + e);
}

inline double frac_mul(double a, i128 b) {
    if (b < 0) return frac01(-frac_mul(a, -b));
    constexpr i64 kMask = (i64(1) << 62) - 1;
    if (b >= (i128(1) << 62)) {
        i128 hi = b >> 62;
        i64 lo = static_cast<i64>(b & kMask);
        return frac01(frac_mul(std::ldexp(a, 62), static_cast<i64>(hi)) + frac_mul(a, lo));
    }
    return frac_mul(a, static_cast<i64>(b));
}

// Generalized binomial C(n, k) for integer n (possibly negative), small k.
// Throws on overflow past ~1.7e38.
inline i128 binom_i128(i64 n, int k) {
    if (k < 0) return 0;
    if (k == 0) return 1;
    bool neg = false;
    i128 num = 1;
    i64 top = n;
    if (n < 0) {
        // C(n,k) = (-1)^k C(k-1-n, k)
        neg = (k % 2) != 0;
        top = static_cast<i64>(k) - 1 - n;
    }
    if (top < k) return 0;  // only reachable for 0 <= n < k
    for (int i = 0; i < k; ++i) {
        i128 next = num * (top - i);
        if (next / (top - i) != num) throw std::overflow_error("binom_i128 overflow");
        num = next / (i + 1);
    }
    return neg ? -num : num;
}

// C(n,k) as double when it fits in 2^53, else NaN (caller decides policy).
inline double binom_double_checked(i64 n, int k) {
    i128 b = binom_i128(n, k);
    i128 a = b < 0 ? -b : b;
    if (a >= (i128(1) << 53)) return std::nan("");
    return static_cast<double>(static_cast<i64>(b));
}

// Primes up to and including n (n expected <= 2^26 or so).
inline std::vector<u64> primes_upto(u64 n) {
    std::vector<u64> ps;
    if (n < 2) return ps;
    std::vector<bool> comp(n + 1, false);
    for (u64 i = 2; i * i <= n; ++i)
        if (!comp[i])
            for (u64 j = i * i; j <= n; j += i) comp[j] = true;
    for (u64 i = 2; i <= n; ++i)
        if (!comp[i]) ps.push_back(i);
    return ps;
}

inline u64 next_prime(u64 n) {
    auto is_prime = [](u64 m) {
        if (m < 2) return false;
        for (u64 d = 2; d * d <= m; ++d)
            if (m % d == 0) return false;
        return true;
    };
    u64 p = n + 1;
    while (!is_prime(p)) ++p;
    return p;
}

// Thread count used by parallel loops; settable from the CLI.
int& global_thread_count();

// Deterministic parallel map-reduce: results are produced per chunk and
// combined in chunk order, so output is independent of scheduling.
void parallel_chunks(i64 n_items, const std::function<void(i64 lo, i64 hi, int chunk_idx)>& work,
                     int n_chunks_hint = 0);

}  // namespace ntshort
