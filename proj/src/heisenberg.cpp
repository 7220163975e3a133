#include "ntshort/heisenberg.hpp"

#include <cmath>
#include <random>

#include "json.hpp"

namespace ntshort {

HeisReduced heis_reduce(const HeisPoint& g) {
    HeisReduced r;
    double a = -std::floor(g.x);
    double b = -std::floor(g.y);
    double c = -std::floor(g.z + g.x * b);
    r.rep = g * HeisPoint{a, b, c};
    // guard against boundary rounding (frac hitting 1.0 exactly)
    if (r.rep.x >= 1.0) { r.rep.x -= 1.0; a -= 1.0; }
    if (r.rep.x < 0.0) { r.rep.x += 1.0; a += 1.0; }
    if (r.rep.y >= 1.0) { r.rep.y -= 1.0; b -= 1.0; }
    if (r.rep.y < 0.0) { r.rep.y += 1.0; b += 1.0; }
    if (r.rep.z >= 1.0) { r.rep.z -= 1.0; c -= 1.0; }
    if (r.rep.z < 0.0) { r.rep.z += 1.0; c += 1.0; }
    r.gx = static_cast<i64>(a);
    r.gy = static_cast<i64>(b);
    r.gz = static_cast<i64>(c);
    return r;
}

HeisPoint HeisPolySeq::at(i64 n) const {
    HeisPoint g2{0.0, 0.0, g2z};
    return g0 * heis_pow(g1, n) * heis_pow(g2, static_cast<i64>(binom_i128(n, 2)));
}

HeisPoint HeisPolySeq::reduced_at(i64 n) const {
    // coordinate polynomials of g(n):
    //   x(n) = x0 + n x1
    //   y(n) = y0 + n y1
    //   z(n) = z0 + n (z1 + x0 y1) + C(n,2) (x1 y1 + g2z)
    // reduced mod 1 with exact products so large n keeps full precision
    double xf = frac01(frac01(g0.x) + frac_mul(g1.x, n));
    double yf = frac01(frac01(g0.y) + frac_mul(g1.y, n));
    double zf = frac01(frac01(g0.z) + frac_mul(g1.z + g0.x * g1.y, n) +
                       frac_mul(g1.x * g1.y + g2z, binom_i128(n, 2)));
    // z-coordinate of the reduction: frac(z - frac(x) * floor(y))
    double yfloor = std::floor(g0.y + static_cast<double>(n) * g1.y);
    double zt = frac01(zf - frac_mul(xf, static_cast<i64>(yfloor)));
    return {xf, yf, zt};
}

cd NilFunction::operator()(const HeisPoint& rep) const {
    if (custom) return custom(rep.x, rep.y, rep.z);
    double sx = std::sin(M_PI * rep.x), sy = std::sin(M_PI * rep.y);
    return e_of(static_cast<double>(xi) * rep.z) * (sx * sx * sy * sy);
}

bool quotient_continuous(const NilFunction& F, int pairs, double tol, u64 seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double eps = 1e-9;
    for (int t = 0; t < pairs; ++t) {
        double y = u(rng), z = u(rng), x = u(rng);
        // x -> 1 glues to x = 0
        if (std::abs(F.operator()({1.0 - eps, y, z}) - F.operator()({0.0, y, z})) > tol) return false;
        // y -> 1 glues to (x, 0, z - x)
        if (std::abs(F.operator()({x, 1.0 - eps, z}) - F.operator()({x, 0.0, frac01(z - x)})) > tol)
            return false;
        // z is 1-periodic up to the central character; probe plain z-gluing
        if (std::abs(F.operator()({x, y, 1.0 - eps}) - F.operator()({x, y, 0.0})) > tol) return false;
    }
    return true;
}

cd nilsequence_eval(const HeisPolySeq& seq, const NilFunction& F, i64 n) {
    return F(seq.reduced_at(n));
}

cd nil_corr(const IntervalSlab& f, const HeisPolySeq& seq, const NilFunction& F) {
    cd acc{0.0, 0.0};
    for (i64 i = 0; i < f.H; ++i) {
        double v = f.values[static_cast<size_t>(i)];
        if (v == 0.0) continue;
        acc += v * std::conj(F(seq.reduced_at(f.n_at(i))));
    }
    return acc;
}

PolyMod1 horizontal_pullback(const HeisPolySeq& seq, i64 k1, i64 k2) {
    double c0 = static_cast<double>(k1) * seq.g0.x + static_cast<double>(k2) * seq.g0.y;
    double c1 = static_cast<double>(k1) * seq.g1.x + static_cast<double>(k2) * seq.g1.y;
    return make_poly(PolyMod1::Basis::binomial, 0, {c0, c1, 0.0});
}

std::string HeisPolySeq::json(int xi) const {
    nlohmann::json j{{"g0", {g0.x, g0.y, g0.z}},
                     {"g1", {g1.x, g1.y, g1.z}},
                     {"g2z", g2z},
                     {"xi", xi}};
    return j.dump();
}

std::pair<HeisPolySeq, int> HeisPolySeq::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    HeisPolySeq s;
    auto g0 = j.at("g0");
    auto g1 = j.at("g1");
    s.g0 = {g0[0].get<double>(), g0[1].get<double>(), g0[2].get<double>()};
    s.g1 = {g1[0].get<double>(), g1[1].get<double>(), g1[2].get<double>()};
    s.g2z = j.at("g2z").get<double>();
    return {s, j.at("xi").get<int>()};
}

}  // namespace ntshort
