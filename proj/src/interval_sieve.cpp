#include "ntshort/interval_sieve.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace ntshort {

std::string FnKind::str() const {
    switch (tag) {
        case mu: return "mu";
        case lambda_vm: return "lambda_vm";
        case dk: return "d_k(" + std::to_string(k) + ")";
        case liouville: return "liouville";
        case r2: return "r2";
        case prime_ind: return "prime_ind";
        case rough_ind:
            return "rough_ind(" + std::to_string(P) + "," + std::to_string(Q) + ")";
        case one: return "one";
        case lambda_sharp: return "lambda_sharp";
        case lambda_sharp_I: return "lambda_sharp_I";
        case lambda_w: return "lambda_w";
        case dk_sharp: return "dk_sharp";
    }
    return "?";
}

std::optional<FnKind> FnKind::parse(const std::string& s) {
    if (s == "mu") return Mu();
    if (s == "lambda_vm") return LambdaVm();
    if (s == "liouville") return Liouville();
    if (s == "r2") return R2();
    if (s == "prime_ind") return PrimeInd();
    if (s == "one") return One();
    if (s == "lambda_sharp") return FnKind{lambda_sharp};
    if (s == "lambda_sharp_I") return FnKind{lambda_sharp_I};
    if (s == "lambda_w") return FnKind{lambda_w};
    if (s == "dk_sharp") return FnKind{dk_sharp};
    if (s.rfind("d_k(", 0) == 0 && s.back() == ')')
        return Dk(std::stoi(s.substr(4, s.size() - 5)));
    if (s.rfind("d", 0) == 0 && s.size() <= 3) {  // shorthand d2, d3, ...
        int k = std::stoi(s.substr(1));
        if (k >= 2) return Dk(k);
    }
    if (s.rfind("rough_ind(", 0) == 0 && s.back() == ')') {
        std::string inner = s.substr(10, s.size() - 11);
        auto comma = inner.find(',');
        if (comma == std::string::npos) return std::nullopt;
        return RoughInd(std::stoll(inner.substr(0, comma)), std::stoll(inner.substr(comma + 1)));
    }
    return std::nullopt;
}

i64& sieve_segment_size() {
    static i64 sz = i64(1) << 20;
    return sz;
}

void check_interval_args(i64 X, i64 H) {
    if (H < 1) throw std::invalid_argument("interval: H must be >= 1");
    if (X < 0) throw std::invalid_argument("interval: X must be >= 0");
    if (X > kMaxRepresentable - H)
        throw std::invalid_argument("interval: X+H exceeds 2^52 representability bound");
}

namespace {

// Factor one segment (lo, hi]; appends per-n factor lists through `emit`.
// `base` holds primes up to sqrt(overall upper bound).
template <typename Emit>
void factor_segment(i64 lo, i64 hi, const std::vector<u64>& base, Emit&& emit) {
    const i64 len = hi - lo;
    std::vector<u64> rem(static_cast<size_t>(len));
    for (i64 i = 0; i < len; ++i) rem[static_cast<size_t>(i)] = static_cast<u64>(lo + 1 + i);

    std::vector<std::pair<u64, uint32_t>> facs;
    std::vector<std::vector<std::pair<u64, uint32_t>>> lists(static_cast<size_t>(len));

    for (u64 p : base) {
        if (static_cast<i64>(p) > hi) break;
        u64 first = (static_cast<u64>(lo) / p + 1) * p;  // smallest multiple > lo
        for (u64 n = first; n <= static_cast<u64>(hi); n += p) {
            size_t idx = static_cast<size_t>(static_cast<i64>(n) - lo - 1);
            uint32_t e = 0;
            while (rem[idx] % p == 0) { rem[idx] /= p; ++e; }
            lists[idx].emplace_back(p, e);
        }
    }
    for (i64 i = 0; i < len; ++i) {
        size_t idx = static_cast<size_t>(i);
        if (rem[idx] > 1) lists[idx].emplace_back(rem[idx], 1);  // leftover prime > sqrt
        emit(lo + 1 + i, lists[idx]);
    }
}

}  // namespace

FactoredInterval factor_interval(i64 X, i64 H) {
    check_interval_args(X, H);
    FactoredInterval fi;
    fi.X = X;
    fi.H = H;
    fi.offsets.reserve(static_cast<size_t>(H) + 1);
    fi.offsets.push_back(0);

    const std::vector<u64> base = primes_upto(isqrt(static_cast<u64>(X + H)));
    const i64 seg = sieve_segment_size();
    for (i64 lo = X; lo < X + H; lo += seg) {
        i64 hi = std::min(X + H, lo + seg);
        factor_segment(lo, hi, base, [&](i64 /*n*/, const std::vector<std::pair<u64, uint32_t>>& fs) {
            for (auto& [p, e] : fs) {
                fi.primes.push_back(p);
                fi.exps.push_back(e);
            }
            fi.offsets.push_back(static_cast<u64>(fi.primes.size()));
        });
    }
    return fi;
}

std::vector<u64> FactoredInterval::divisors_upto(i64 i, u64 cap) const {
    std::vector<u64> divs{1};
    if (cap < 1) return {};
    auto f = factors_of_index(i);
    for (size_t j = 0; j < f.count; ++j) {
        size_t cur = divs.size();
        u64 pe = 1;
        for (uint32_t e = 1; e <= f.e[j]; ++e) {
            if (pe > cap / f.p[j]) break;
            pe *= f.p[j];
            for (size_t t = 0; t < cur; ++t) {
                if (divs[t] <= cap / pe) divs.push_back(divs[t] * pe);
            }
        }
    }
    std::sort(divs.begin(), divs.end());
    return divs;
}

double dk_from_factors(const FactoredInterval::Factors& f, int k) {
    double v = 1.0;
    for (size_t j = 0; j < f.count; ++j) {
        // multiplicity of p^e in d_k: C(k-1+e, k-1)
        v *= static_cast<double>(binom_i128(static_cast<i64>(k) - 1 + f.e[j], k - 1));
    }
    return v;
}

double r2_from_factors(const FactoredInterval::Factors& f) {
    // r2(n) = 4 * prod over p==1(4) of (e+1), zero if any p==3(4) has odd e
    double v = 4.0;
    for (size_t j = 0; j < f.count; ++j) {
        u64 p = f.p[j];
        if (p == 2) continue;
        if (p % 4 == 1) v *= static_cast<double>(f.e[j] + 1);
        else if (f.e[j] % 2 == 1) return 0.0;
    }
    return v;
}

IntervalSlab sieve_slab(i64 X, i64 H, FnKind kind) {
    check_interval_args(X, H);
    if (kind.tag == FnKind::dk && kind.k < 2)
        throw std::invalid_argument("sieve_slab: d_k needs k >= 2");
    if (kind.tag == FnKind::rough_ind && !(2 <= kind.P && kind.P < kind.Q))
        throw std::invalid_argument("sieve_slab: rough_ind needs 2 <= P < Q");

    IntervalSlab s;
    s.X = X;
    s.H = H;
    s.kind = kind;
    s.values.assign(static_cast<size_t>(H), 0.0);

    if (kind.tag == FnKind::one) {
        std::fill(s.values.begin(), s.values.end(), 1.0);
        return s;
    }

    const std::vector<u64> base = primes_upto(isqrt(static_cast<u64>(X + H)));
    const i64 seg = sieve_segment_size();
    for (i64 lo = X; lo < X + H; lo += seg) {
        i64 hi = std::min(X + H, lo + seg);
        factor_segment(lo, hi, base, [&](i64 n, const std::vector<std::pair<u64, uint32_t>>& fs) {
            size_t out = static_cast<size_t>(n - X - 1);
            double v = 0.0;
            switch (kind.tag) {
                case FnKind::mu: {
                    v = (fs.size() % 2 == 0) ? 1.0 : -1.0;
                    for (auto& [p, e] : fs)
                        if (e > 1) { v = 0.0; break; }
                    break;
                }
                case FnKind::liouville: {
                    u64 omega_total = 0;
                    for (auto& [p, e] : fs) omega_total += e;
                    v = (omega_total % 2 == 0) ? 1.0 : -1.0;
                    break;
                }
                case FnKind::lambda_vm:
                    v = (fs.size() == 1) ? std::log(static_cast<double>(fs[0].first)) : 0.0;
                    break;
                case FnKind::prime_ind:
                    v = (fs.size() == 1 && fs[0].second == 1) ? 1.0 : 0.0;
                    break;
                case FnKind::dk: {
                    FactoredInterval::Factors f{nullptr, nullptr, 0};
                    std::vector<u64> ps(fs.size());
                    std::vector<uint32_t> es(fs.size());
                    for (size_t j = 0; j < fs.size(); ++j) { ps[j] = fs[j].first; es[j] = fs[j].second; }
                    f = {ps.data(), es.data(), ps.size()};
                    v = dk_from_factors(f, kind.k);
                    break;
                }
                case FnKind::r2: {
                    std::vector<u64> ps(fs.size());
                    std::vector<uint32_t> es(fs.size());
                    for (size_t j = 0; j < fs.size(); ++j) { ps[j] = fs[j].first; es[j] = fs[j].second; }
                    FactoredInterval::Factors f{ps.data(), es.data(), ps.size()};
                    v = r2_from_factors(f);
                    break;
                }
                case FnKind::rough_ind: {
                    v = 0.0;
                    for (auto& [p, e] : fs)
                        if (static_cast<i64>(p) > kind.P && static_cast<i64>(p) <= kind.Q) { v = 1.0; break; }
                    break;
                }
                default:
                    throw std::invalid_argument("sieve_slab: kind " + kind.str() +
                                                " is not sieveable (approximant kinds live in approximants)");
            }
            s.values[out] = v;
        });
    }
    return s;
}

IntervalSlab rough_indicator(const FactoredInterval& fi, i64 P, i64 Q) {
    if (!(2 <= P && P < Q)) throw std::invalid_argument("rough_indicator: need 2 <= P < Q");
    IntervalSlab s;
    s.X = fi.X;
    s.H = fi.H;
    s.kind = FnKind::RoughInd(P, Q);
    s.values.assign(static_cast<size_t>(fi.H), 0.0);
    for (i64 i = 0; i < fi.H; ++i) {
        auto f = fi.factors_of_index(i);
        for (size_t j = 0; j < f.count; ++j)
            if (static_cast<i64>(f.p[j]) > P && static_cast<i64>(f.p[j]) <= Q) {
                s.values[static_cast<size_t>(i)] = 1.0;
                break;
            }
    }
    return s;
}

void write_slab_csv(const IntervalSlab& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "n,value\n";
    char buf[64];
    for (i64 i = 0; i < s.H; ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", s.values[static_cast<size_t>(i)]);
        out << s.n_at(i) << ',' << buf << '\n';
    }
    nlohmann::json meta{{"X", s.X}, {"H", s.H}, {"kind", s.kind.str()}};
    std::ofstream side(path + ".json");
    side << meta.dump(2) << '\n';
}

IntervalSlab read_slab_csv(const std::string& path) {
    std::ifstream side(path + ".json");
    if (!side) throw std::runtime_error("missing sidecar " + path + ".json");
    nlohmann::json meta = nlohmann::json::parse(side);
    IntervalSlab s;
    s.X = meta.at("X").get<i64>();
    s.H = meta.at("H").get<i64>();
    auto kind = FnKind::parse(meta.at("kind").get<std::string>());
    if (!kind) throw std::runtime_error("bad kind in sidecar");
    s.kind = *kind;
    s.values.assign(static_cast<size_t>(s.H), 0.0);

    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        auto comma = line.find(',');
        if (comma == std::string::npos) continue;
        i64 n = std::stoll(line.substr(0, comma));
        double v = std::stod(line.substr(comma + 1));
        s.values.at(static_cast<size_t>(n - s.X - 1)) = v;
    }
    return s;
}

}  // namespace ntshort
