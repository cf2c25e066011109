#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "nkconf/systematic.hpp"

namespace nk {

namespace {

Mat3 rotation(double th) {
    Mat3 r = Mat3::Identity();
    r(0, 0) = std::cos(th);
    r(0, 1) = -std::sin(th);
    r(1, 0) = std::sin(th);
    r(1, 1) = std::cos(th);
    return r;
}

// Union of the two nested copies with the Levi-graph cross incidences.
// Offsets for L2_1 - v1_3 follow from the construction; the two remaining
// offsets are read off the coordinates and left to the verifier.
Configuration nest(const Configuration& a, const Configuration& b, int m, int off_b1_a3) {
    Configuration c;
    c.k = 5;
    for (const auto& p : a.points) c.add_point(p);
    for (const auto& p : b.points) c.add_point(p);
    for (const auto& l : a.lines) c.add_line(l);
    for (const auto& l : b.lines) c.add_line(l);
    const int na = static_cast<int>(a.points.size());
    for (auto [p, l] : a.flags) c.flag(p, l);
    for (auto [p, l] : b.flags) c.flag(p + na, l + na);
    auto P = [&](char cp, int j, int i) { return (cp == 'b' ? na : 0) + j * m + ((i % m) + m) % m; };
    auto L = [&](char cl, int j, int i) { return (cl == 'b' ? na : 0) + j * m + ((i % m) + m) % m; };
    auto link = [&](char cl, int jl, char cp, int jp, int off) {
        for (int i = 0; i < m; ++i) c.flag(P(cp, jp, i + off), L(cl, jl, i));
    };
    auto best_offset = [&](char cl, int jl, char cp, int jp) {
        int best = 0;
        double bres = 1e300;
        for (int off = 0; off < m; ++off) {
            double worst = 0;
            for (int i = 0; i < m; ++i)
                worst = std::max(worst, residual(c.points[P(cp, jp, i + off)], c.lines[L(cl, jl, i)]));
            if (worst < bres) {
                bres = worst;
                best = off;
            }
        }
        return best;
    };
    for (int j = 0; j < 3; ++j) link('a', j, 'b', j, 0);
    link('b', 0, 'a', 2, off_b1_a3);
    link('b', 1, 'a', 0, best_offset('b', 1, 'a', 0));
    link('b', 2, 'a', 1, best_offset('b', 2, 'a', 1));
    c.tidy();
    return c;
}

}  // namespace

Configuration nprime_construct(std::optional<int> forced_d, NprimeChoice* used, const Tolerance& tol) {
    const int m = 9;
    const CelestialSymbol s1{m, {{4, 3}, {2, 3}, {1, 3}}};
    const CelestialSymbol s2{m, {{2, 3}, {1, 3}, {4, 3}}};
    const Configuration a = celestial_construct(s1, 1.0, tol);
    const HomLine base = a.lines[0];  // (L1_1)_0
    // parametrize base line as B + u*D
    Vec3 B, D;
    if (std::abs(base.b) > std::abs(base.a)) {
        B = Vec3(0, -base.c / base.b, 1);
        D = Vec3(1, -base.a / base.b, 0);
    } else {
        B = Vec3(-base.c / base.a, 0, 1);
        D = Vec3(-base.b / base.a, 1, 0);
    }
    const int s = s2.pairs[0].first;
    int d_lo = 0, d_hi = m - 1;
    if (forced_d) {
        if (*forced_d < 0 || *forced_d >= m) fail("ParameterOutOfRange", "d must lie in 0..8");
        d_lo = d_hi = *forced_d;
    }
    for (int d = d_lo; d <= d_hi; ++d) {
        const Vec3 A = a.points[2 * m + d].vec();  // (v1_3)_d
        for (int sign : {1, -1}) {
            const Mat3 R = rotation(sign * 2.0 * std::numbers::pi * s / m);
            // X(u) on the base line with A, X, R X collinear: a quadratic in u
            auto f = [&](double u) {
                Vec3 X = B + u * D;
                Mat3 M;
                M.row(0) = A.transpose();
                M.row(1) = X.transpose();
                M.row(2) = (R * X).transpose();
                return M.determinant();
            };
            double f0 = f(0), f1 = f(1), fm = f(-1);
            double qa = (f1 + fm) / 2 - f0, qb = (f1 - fm) / 2, qc = f0;
            double disc = qb * qb - 4 * qa * qc;
            if (disc < 0 || qa == 0) continue;
            const double roots[2] = {(-qb + std::sqrt(disc)) / (2 * qa), (-qb - std::sqrt(disc)) / (2 * qa)};
            for (int r = 0; r < 2; ++r) {
                Vec3 X = B + roots[r] * D;
                std::complex<double> x0(X[0] / X[2], X[1] / X[2]);
                Configuration b;
                try {
                    b = celestial_construct(s2, x0, tol);
                } catch (const Error&) {
                    continue;
                }
                Configuration c = nest(a, b, m, sign > 0 ? d : d + s);
                if (!verify(c, tol).passed) continue;
                if (used) *used = {d, sign, r};
                c.meta.expr = Expr::list({Expr::sym("Nprime9")}).to_string();
                c.meta.extra_json = fmt::format(R"({{"nprime_choice":{{"d":{},"root":{},"sign":{}}}}})", d, r, sign);
                return c;
            }
        }
    }
    fail("CircleLineMiss", forced_d ? fmt::format("no admissible placement for d = {}", *forced_d)
                                    : std::string("no admissible d in 0..8"));
}

}  // namespace nk
