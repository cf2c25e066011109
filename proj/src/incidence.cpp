#include "nkconf/incidence.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include <fmt/format.h>

namespace nk {

int Configuration::add_point(const HomPoint& p) {
    points.push_back(p);
    point_ids.push_back(static_cast<long long>(points.size()) - 1);
    return static_cast<int>(points.size()) - 1;
}

int Configuration::add_line(const HomLine& l) {
    lines.push_back(l);
    line_ids.push_back(static_cast<long long>(lines.size()) - 1);
    return static_cast<int>(lines.size()) - 1;
}

void Configuration::tidy() {
    std::sort(flags.begin(), flags.end(), [](auto& x, auto& y) {
        return x.second != y.second ? x.second < y.second : x.first < y.first;
    });
    flags.erase(std::unique(flags.begin(), flags.end()), flags.end());
    while (point_ids.size() < points.size()) point_ids.push_back(static_cast<long long>(point_ids.size()));
    while (line_ids.size() < lines.size()) line_ids.push_back(static_cast<long long>(line_ids.size()));
    std::sort(meta.flexible_lines.begin(), meta.flexible_lines.end());
    meta.flexible_lines.erase(std::unique(meta.flexible_lines.begin(), meta.flexible_lines.end()),
                              meta.flexible_lines.end());
}

std::vector<std::vector<int>> Configuration::points_on_lines() const {
    std::vector<std::vector<int>> r(lines.size());
    for (auto [p, l] : flags) r[l].push_back(p);
    for (auto& v : r) std::sort(v.begin(), v.end());
    return r;
}

std::vector<std::vector<int>> Configuration::lines_through_points() const {
    std::vector<std::vector<int>> r(points.size());
    for (auto [p, l] : flags) r[p].push_back(l);
    for (auto& v : r) std::sort(v.begin(), v.end());
    return r;
}

std::string VerificationReport::summary() const {
    if (passed) return fmt::format("verified ({}_{}), max residual {:.3g}", point_degree.size(), k, max_residual);
    std::string s = "verification failed:";
    for (const auto& p : problems) s += " " + p + ";";
    return s;
}

VerificationReport verify(const Configuration& cfg, const Tolerance& tol) {
    VerificationReport r;
    r.k = cfg.k;
    const int np = static_cast<int>(cfg.points.size()), nl = static_cast<int>(cfg.lines.size());
    r.point_degree.assign(np, 0);
    r.line_degree.assign(nl, 0);
    std::vector<char> flagged(static_cast<std::size_t>(np) * nl, 0);
    for (auto [p, l] : cfg.flags) {
        if (p < 0 || p >= np || l < 0 || l >= nl) {
            r.problems.push_back("flag refers to a missing element");
            continue;
        }
        char& f = flagged[static_cast<std::size_t>(p) * nl + l];
        if (f) {
            r.problems.push_back(fmt::format("duplicate flag ({}, {})", p, l));
            continue;
        }
        f = 1;
        r.point_degree[p]++;
        r.line_degree[l]++;
        r.max_residual = std::max(r.max_residual, residual(cfg.points[p], cfg.lines[l]));
    }
    for (int p = 0; p < np; ++p)
        for (int l = 0; l < nl; ++l) {
            if (flagged[static_cast<std::size_t>(p) * nl + l]) continue;
            double res = residual(cfg.points[p], cfg.lines[l]);
            if (res < tol.separation_rel) r.unexpected.push_back({p, l, res});
        }
    for (int a = 0; a < np; ++a)
        for (int b = a + 1; b < np; ++b)
            if (point_sep(cfg.points[a], cfg.points[b]) < tol.separation_rel) r.coincident_points.emplace_back(a, b);
    for (int a = 0; a < nl; ++a)
        for (int b = a + 1; b < nl; ++b)
            if (line_sep(cfg.lines[a], cfg.lines[b]) < tol.separation_rel) r.coincident_lines.emplace_back(a, b);

    if (np != nl) r.problems.push_back(fmt::format("{} points but {} lines", np, nl));
    int bad_p = 0, bad_l = 0;
    for (int d : r.point_degree) bad_p += d != cfg.k;
    for (int d : r.line_degree) bad_l += d != cfg.k;
    if (bad_p) r.problems.push_back(fmt::format("{} points with degree != {}", bad_p, cfg.k));
    if (bad_l) r.problems.push_back(fmt::format("{} lines with degree != {}", bad_l, cfg.k));
    if (r.max_residual > tol.incidence_rel)
        r.problems.push_back(fmt::format("max incidence residual {:.3g} above {:.3g}", r.max_residual,
                                         tol.incidence_rel));
    if (!r.unexpected.empty()) r.problems.push_back(fmt::format("{} unexpected incidences", r.unexpected.size()));
    if (!r.coincident_points.empty())
        r.problems.push_back(fmt::format("{} coincident point pairs", r.coincident_points.size()));
    if (!r.coincident_lines.empty())
        r.problems.push_back(fmt::format("{} coincident line pairs", r.coincident_lines.size()));
    if (np == 0) r.problems.push_back("empty configuration");
    r.passed = r.problems.empty();
    return r;
}

std::vector<std::vector<int>> parallel_classes(const Configuration& cfg, const Tolerance& tol) {
    const double pi = std::numbers::pi;
    std::vector<std::pair<double, int>> dirs;
    for (int l = 0; l < static_cast<int>(cfg.lines.size()); ++l) {
        const HomLine& L = cfg.lines[l];
        if (std::hypot(L.a, L.b) < tol.incidence_rel) continue;  // ideal line
        double th = std::atan2(-L.a, L.b);
        if (th < 0) th += pi;
        if (th >= pi) th -= pi;
        dirs.emplace_back(th, l);
    }
    std::sort(dirs.begin(), dirs.end());
    std::vector<std::vector<int>> cls;
    double prev = -10;
    for (auto [th, l] : dirs) {
        if (cls.empty() || th - prev > tol.incidence_rel) cls.emplace_back();
        cls.back().push_back(l);
        prev = th;
    }
    if (cls.size() > 1 && dirs.front().first + pi - dirs.back().first <= tol.incidence_rel) {
        cls.front().insert(cls.front().end(), cls.back().begin(), cls.back().end());
        cls.pop_back();
    }
    for (auto& c : cls) std::sort(c.begin(), c.end());
    return cls;
}

PencilReport detect_pencils(const Configuration& cfg, const Tolerance& tol) {
    PencilReport r;
    auto cls = parallel_classes(cfg, tol);
    if (cls.empty()) return r;
    auto on = cfg.points_on_lines();
    std::vector<std::set<int>> pts(cls.size());
    for (std::size_t i = 0; i < cls.size(); ++i)
        for (int l : cls[i]) pts[i].insert(on[l].begin(), on[l].end());
    std::size_t pmax = 0;
    for (auto& c : cls) pmax = std::max(pmax, c.size());
    const bool exhaustive = cls.size() <= 64;
    int bestA = -1, bestB = -1;
    std::size_t bestq = 0;
    for (std::size_t a = 0; a < cls.size(); ++a) {
        if (cls[a].size() != pmax) continue;
        if (bestA < 0) bestA = static_cast<int>(a);
        for (std::size_t b = 0; b < cls.size(); ++b) {
            if (b == a || cls[b].size() <= bestq) continue;
            bool disjoint = std::none_of(pts[b].begin(), pts[b].end(), [&](int p) { return pts[a].count(p) > 0; });
            if (disjoint) {
                bestq = cls[b].size();
                bestA = static_cast<int>(a);
                bestB = static_cast<int>(b);
            }
        }
        if (!exhaustive) break;
    }
    auto dir_of = [&](int l) { return HomPoint(cfg.lines[l].b, -cfg.lines[l].a, 0.0); };
    r.p = static_cast<int>(pmax);
    r.pencil1 = cls[bestA];
    r.dir1 = dir_of(cls[bestA][0]);
    if (bestB >= 0) {
        r.q = static_cast<int>(bestq);
        r.pencil2 = cls[bestB];
        r.dir2 = dir_of(cls[bestB][0]);
    }
    return r;
}

Configuration apply_map(const Configuration& cfg, const ProjectiveMap& m) {
    Configuration out = cfg;
    for (auto& p : out.points) p = m(p);
    for (auto& l : out.lines) l = m(l);
    if (out.meta.center) out.meta.center = m(*out.meta.center);
    return out;
}

Configuration dualize(const Configuration& cfg, const Polarity& pol, const Tolerance& tol) {
    for (const auto& p : cfg.points)
        if (point_sep(p, pol.center) < tol.separation_rel)
            fail("CenterIncidence", "a configuration point is the polarity center");
    for (const auto& l : cfg.lines)
        if (residual(pol.center, l) < tol.separation_rel)
            fail("CenterIncidence", "a configuration line passes through the polarity center");
    Configuration d;
    d.k = cfg.k;
    for (const auto& l : cfg.lines) d.points.push_back(pole(pol, l));
    for (const auto& p : cfg.points) d.lines.push_back(polar(pol, p));
    d.point_ids = cfg.line_ids;
    d.line_ids = cfg.point_ids;
    for (auto [p, l] : cfg.flags) d.flags.emplace_back(l, p);
    d.meta.expr = cfg.meta.expr;
    d.meta.extra_json = "{}";
    d.tidy();
    return d;
}

}  // namespace nk
