#include <cmath>
#include <map>
#include <numbers>
#include <regex>

#include <fmt/format.h>

#include "nkconf/systematic.hpp"

namespace nk {

namespace {

int mod(long long a, long long m) { return static_cast<int>(((a % m) + m) % m); }

struct ClassFrame {
    int phi;   // angle offset in units of pi/m
    double R;  // radius relative to the start class
};

// Returns frames for classes 1..h plus the closing frame h+1.
std::vector<ClassFrame> frames(const CelestialSymbol& sym) {
    std::vector<ClassFrame> f;
    int phi = 0;
    double R = 1.0;
    for (auto [s, t] : sym.pairs) {
        f.push_back({phi, R});
        phi += s - t;
        R *= std::cos(std::numbers::pi * s / sym.m) / std::cos(std::numbers::pi * t / sym.m);
    }
    f.push_back({phi, R});
    return f;
}

std::string span_problem(const CelestialSymbol& sym) {
    if (sym.m < 3) return "m must be at least 3";
    if (sym.pairs.empty()) return "symbol has no span pairs";
    for (auto [s, t] : sym.pairs) {
        if (s <= 0 || t <= 0 || 2 * s >= sym.m || 2 * t >= sym.m)
            return fmt::format("span bound violated: need 0 < s, t < m/2 (got {},{})", s, t);
        if (s == t) return fmt::format("span pair ({},{}) has s = t", s, t);
    }
    int twist2 = 0;
    for (auto [s, t] : sym.pairs) twist2 += s - t;
    if (twist2 % 2 != 0) return "twist is not an integer";
    return {};
}

}  // namespace

std::string CelestialSymbol::to_string() const {
    std::string s = std::to_string(m) + "#(";
    for (std::size_t i = 0; i < pairs.size(); ++i)
        s += (i ? ";" : "") + std::to_string(pairs[i].first) + "," + std::to_string(pairs[i].second);
    return s + ")";
}

std::string MulticelestialSymbol::to_string() const {
    return fmt::format("{}#({},{},{})({},{})", m, t[0], t[1], t[2], s[0], s[1]);
}

CelestialSymbol parse_celestial(const std::string& text) {
    static const std::regex whole(R"(\s*(\d+)\s*#\s*\(\s*(\d+\s*,\s*\d+(\s*;\s*\d+\s*,\s*\d+)*)\s*\)\s*)");
    std::smatch m;
    if (!std::regex_match(text, m, whole)) fail("ParseError", "bad celestial symbol '" + text + "'");
    CelestialSymbol sym;
    sym.m = std::stoi(m[1]);
    static const std::regex pair(R"((\d+)\s*,\s*(\d+))");
    std::string body = m[2];
    for (std::sregex_iterator it(body.begin(), body.end(), pair), end; it != end; ++it)
        sym.pairs.emplace_back(std::stoi((*it)[1]), std::stoi((*it)[2]));
    return sym;
}

MulticelestialSymbol parse_multicelestial(const std::string& text) {
    static const std::regex whole(
        R"(\s*(\d+)\s*#\s*\(\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\)\s*\(\s*(\d+)\s*,\s*(\d+)\s*\)\s*)");
    std::smatch m;
    if (!std::regex_match(text, m, whole)) fail("ParseError", "bad multicelestial symbol '" + text + "'");
    MulticelestialSymbol sym;
    sym.m = std::stoi(m[1]);
    for (int i = 0; i < 3; ++i) sym.t[i] = std::stoi(m[2 + i]);
    for (int i = 0; i < 2; ++i) sym.s[i] = std::stoi(m[5 + i]);
    return sym;
}

Configuration celestial_construct(const CelestialSymbol& sym, std::complex<double> start, const Tolerance& tol) {
    if (auto why = span_problem(sym); !why.empty()) fail("InvalidSymbol", sym.to_string() + ": " + why);
    auto fr = frames(sym);
    const int m = sym.m, h = sym.h();
    if (std::abs(fr.back().R - 1.0) > tol.incidence_rel)
        fail("ClosureFailure", fmt::format("{}: radius does not close (ratio {:.12g})", sym.to_string(), fr.back().R));
    const int delta = fr.back().phi / 2;
    const double r0 = std::abs(start), a0 = std::arg(start);
    const double pi = std::numbers::pi;

    Configuration c;
    c.k = 4;
    for (int j = 0; j < h; ++j)
        for (int i = 0; i < m; ++i) {
            double a = a0 + (fr[j].phi + 2 * i) * pi / m;
            double r = r0 * fr[j].R;
            c.add_point(HomPoint(r * std::cos(a), r * std::sin(a), 1.0));
        }
    auto pid = [&](int j, long long i) { return j * m + mod(i, m); };
    for (int j = 0; j < h; ++j) {
        auto [s, t] = sym.pairs[j];
        for (int i = 0; i < m; ++i) {
            int l = c.add_line(join(c.points[pid(j, i)], c.points[pid(j, i + s)], tol));
            c.flag(pid(j, i), l);
            c.flag(pid(j, i + s), l);
            if (j + 1 < h) {
                c.flag(pid(j + 1, i), l);
                c.flag(pid(j + 1, i + t), l);
            } else {
                c.flag(pid(0, i + delta), l);
                c.flag(pid(0, i + t + delta), l);
            }
        }
    }
    for (auto [p, l] : c.flags)
        if (residual(c.points[p], c.lines[l]) > tol.incidence_rel)
            fail("ClosureFailure", sym.to_string() + ": closing incidences miss");
    c.meta.expr = Expr::list({Expr::sym("celestial"), Expr::str(sym.to_string())}).to_string();
    c.meta.extra_json = "{}";
    c.tidy();
    return c;
}

Validity celestial_validate(const CelestialSymbol& sym, const Tolerance& tol) {
    if (auto why = span_problem(sym); !why.empty()) return {false, why};
    auto fr = frames(sym);
    if (std::abs(fr.back().R - 1.0) > tol.incidence_rel)
        return {false, fmt::format("radius does not close (ratio {:.12g})", fr.back().R)};
    try {
        auto c = celestial_construct(sym, 1.0, tol);
        auto rep = verify(c, tol);
        if (!rep.passed) return {false, "degenerate: " + rep.summary()};
    } catch (const Error& e) {
        return {false, e.what()};
    }
    return {true, {}};
}

Configuration project_to_finite(const Configuration& cfg, const Tolerance& tol) {
    double rmax = 1.0;
    for (const auto& p : cfg.points)
        if (!p.ideal()) rmax = std::max(rmax, std::hypot(p.ex(), p.ey()));
    for (int t = 0; t < 64; ++t) {
        double th = 0.3 + 0.7 * t;
        double rho = (1.7 + 0.37 * t) * rmax;
        HomLine h(std::cos(th), std::sin(th), -rho);
        bool hits = false;
        for (const auto& p : cfg.points)
            if (residual(p, h) < 1e-3) hits = true;
        if (hits) continue;
        Mat3 M = Mat3::Identity();
        M.row(2) = h.vec().transpose();
        Configuration out = apply_map(cfg, ProjectiveMap(M));
        // rescale into a unit-size picture
        double r2 = 0;
        for (const auto& p : out.points) r2 = std::max(r2, std::hypot(p.ex(), p.ey()));
        Mat3 S = Mat3::Identity();
        S(2, 2) = r2;
        out = apply_map(out, ProjectiveMap(S));
        if (!verify(out, tol).passed) continue;
        bool parallel = false;
        for (auto& cl : parallel_classes(out, tol)) parallel |= cl.size() > 1;
        if (parallel) continue;
        out.meta.expr = Expr::list({Expr::sym("project"), parse_expr(cfg.meta.expr)}).to_string();
        return out;
    }
    fail("PlacementDegenerate", "no admissible line to send to infinity");
}

namespace {

// Celestial base plus diameters through base points and one ideal point per
// direction class with at least two lines. Angles are integers in units
// pi/(2m); directions are taken mod 2m.
Configuration augment(const CelestialSymbol& sym, const Tolerance& tol) {
    Configuration c = celestial_construct(sym, 1.0, tol);
    const int m = sym.m, h = sym.h(), M2 = 2 * m;
    auto fr = frames(sym);
    std::vector<int> pang(m * h), ldir;
    for (int j = 0; j < h; ++j)
        for (int i = 0; i < m; ++i) pang[j * m + i] = mod(2LL * (fr[j].phi + 2 * i), M2);
    for (int j = 0; j < h; ++j)
        for (int i = 0; i < m; ++i) ldir.push_back(mod(2LL * (fr[j].phi + 2 * i + sym.pairs[j].first) + m, M2));
    const double pi = std::numbers::pi;
    const int base_points = m * h;
    for (int K = 0; K < M2; K += 2) {
        std::vector<int> on;
        for (int p = 0; p < base_points; ++p)
            if (pang[p] == K) on.push_back(p);
        if (on.empty()) continue;
        double th = K * pi / M2;
        int l = c.add_line(HomLine(-std::sin(th), std::cos(th), 0.0));
        ldir.push_back(K);
        for (int p : on) c.flag(p, l);
    }
    std::map<int, std::vector<int>> by_dir;
    for (int l = 0; l < static_cast<int>(ldir.size()); ++l) by_dir[ldir[l]].push_back(l);
    for (auto& [dv, ls] : by_dir) {
        if (ls.size() < 2) continue;
        double th = dv * pi / M2;
        int p = c.add_point(HomPoint(std::cos(th), std::sin(th), 0.0));
        for (int l : ls) c.flag(p, l);
    }
    c.k = 5;
    c.tidy();
    return c;
}

}  // namespace

Configuration d4_construct(int ell, bool project, const Tolerance& tol) {
    if (ell < 5) fail("ParameterOutOfRange", "D4 needs l >= 5 (2l#(2,1;4,3;1,2;3,4) is only defined for l >= 5)");
    CelestialSymbol sym{2 * ell, {{2, 1}, {4, 3}, {1, 2}, {3, 4}}};
    Configuration c = augment(sym, tol);
    c.meta.expr = Expr::list({Expr::sym("D4"), Expr::integer(ell)}).to_string();
    return project ? project_to_finite(c, tol) : c;
}

Configuration d5_construct(int ell, bool project, const Tolerance& tol) {
    if (ell < 5) fail("ParameterOutOfRange", "D5 needs l >= 5");
    CelestialSymbol sym{2 * ell + 1, {{5, 1}, {2, 3}, {4, 5}, {1, 2}, {3, 4}}};
    Configuration c = augment(sym, tol);
    c.meta.expr = Expr::list({Expr::sym("D5"), Expr::integer(ell)}).to_string();
    return project ? project_to_finite(c, tol) : c;
}

}  // namespace nk
