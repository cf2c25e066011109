#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <set>

#include <fmt/format.h>

#include "nkconf/ops.hpp"

namespace nk {

namespace {

constexpr int kRetries = 32;

std::mt19937_64 rng_for(std::uint64_t seed, int attempt) {
    return std::mt19937_64(seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(attempt));
}

double uni(std::mt19937_64& g, double a, double b) { return std::uniform_real_distribution<double>(a, b)(g); }

struct Frame {
    double cx = 0, cy = 0, r = 1;
};

Frame frame_of(const Configuration& c) {
    Frame f;
    int n = 0;
    for (const auto& p : c.points)
        if (!p.ideal()) {
            f.cx += p.ex();
            f.cy += p.ey();
            ++n;
        }
    if (n) {
        f.cx /= n;
        f.cy /= n;
    }
    f.r = 0;
    for (const auto& p : c.points)
        if (!p.ideal()) f.r = std::max(f.r, std::hypot(p.ex() - f.cx, p.ey() - f.cy));
    if (f.r == 0) f.r = 1;
    return f;
}

void require_finite(const Configuration& c, const std::string& op) {
    for (const auto& p : c.points)
        if (p.ideal()) fail("PlacementDegenerate", op + " needs every configuration point finite");
}

Expr expr_of(const Configuration& c) {
    if (c.meta.expr.empty()) return Expr::list({Expr::sym("fixture"), Expr::str("anonymous")});
    return parse_expr(c.meta.expr);
}

Expr node(const char* tag, std::vector<Expr> args) {
    std::vector<Expr> xs{Expr::sym(tag)};
    for (auto& a : args) xs.push_back(std::move(a));
    return Expr::list(std::move(xs));
}

HomPoint finite(double x, double y) { return HomPoint(x, y, 1.0); }

// Direction of a finite line as an ideal point.
HomPoint direction(const HomLine& l) { return HomPoint(l.b, -l.a, 0.0); }

bool parallel(const HomLine& l, const HomLine& m, double tol) {
    double s = std::abs(l.a * m.b - l.b * m.a) / (std::hypot(l.a, l.b) * std::hypot(m.a, m.b));
    return s < tol;
}

std::vector<int> lines_through(const Configuration& c, int p) {
    std::vector<int> r;
    for (auto [q, l] : c.flags)
        if (q == p) r.push_back(l);
    std::sort(r.begin(), r.end());
    return r;
}

std::vector<int> points_on(const Configuration& c, int l) {
    std::vector<int> r;
    for (auto [p, m] : c.flags)
        if (m == l) r.push_back(p);
    std::sort(r.begin(), r.end());
    return r;
}

void check_verified(const Configuration& c, const Tolerance& tol, const std::string& what) {
    auto rep = verify(c, tol);
    if (!rep.passed) fail("VerificationFailure", what + ": " + rep.summary());
}

Configuration finish(Configuration out, const Tolerance& tol, const std::string& what) {
    out.meta.extra_json = "{}";
    out.tidy();
    check_verified(out, tol, what);
    return out;
}

}  // namespace

Configuration quadrilateral(const HomPoint& c, double p0x, double p0y, double ux, double uy) {
    Configuration q;
    q.k = 2;
    double cx = c.ex(), cy = c.ey();
    q.add_point(finite(cx + p0x, cy + p0y));
    q.add_point(finite(cx + ux, cy + uy));
    q.add_point(finite(cx - p0x, cy - p0y));
    q.add_point(finite(cx - ux, cy - uy));
    for (int i = 0; i < 4; ++i) {
        int l = q.add_line(join(q.points[i], q.points[(i + 1) % 4]));
        q.flag(i, l);
        q.flag((i + 1) % 4, l);
    }
    q.meta.expr = R"((fixture "quadrilateral"))";
    q.meta.flexible = true;
    q.meta.central_symmetry = true;
    q.meta.center = c;
    q.meta.extra_json = "{}";
    q.tidy();
    return q;
}

// ---------------------------------------------------------------- AR

Configuration geo_AR(const Configuration& cfg, int k, const HomLine& axis, const std::vector<double>& ratios,
                     const Tolerance& tol) {
    if (cfg.k != k - 1) fail("DegreeMismatch", fmt::format("AR to degree {} needs a ({}-1)-configuration", k, k));
    check_verified(cfg, tol, "AR input");
    require_finite(cfg, "AR");
    if (axis.ideal()) fail("AxisHitsPoint", "axis must be a finite line");
    for (std::size_t i = 0; i < cfg.points.size(); ++i)
        if (residual(cfg.points[i], axis) < tol.separation_rel)
            fail("AxisHitsPoint", fmt::format("axis passes through point {}", cfg.point_ids[i]));
    if (static_cast<int>(ratios.size()) != k - 1)
        fail("DegenerateRatios", fmt::format("need {} image ratios, got {}", k - 1, ratios.size()));
    for (std::size_t i = 0; i < ratios.size(); ++i) {
        if (!std::isfinite(ratios[i]) || std::abs(ratios[i]) < 1e-9 || std::abs(ratios[i] - 1) < 1e-9)
            fail("DegenerateRatios", "ratios must be finite, nonzero and != 1");
        for (std::size_t j = 0; j < i; ++j)
            if (std::abs(ratios[i] - ratios[j]) < 1e-9) fail("DegenerateRatios", "ratios must be distinct");
    }
    const double nn = std::hypot(axis.a, axis.b);
    const Vec3 nh(axis.a / nn, axis.b / nn, 0.0);
    const Vec3 ax = axis.vec() / nn;
    std::vector<ProjectiveMap> maps{ProjectiveMap()};
    for (double lam : ratios) maps.emplace_back(Mat3(Mat3::Identity() + (lam - 1.0) * nh * ax.transpose()));

    const int np = static_cast<int>(cfg.points.size()), nl = static_cast<int>(cfg.lines.size());
    Configuration out;
    out.k = k;
    for (int c = 0; c < k; ++c)
        for (const auto& p : cfg.points) out.add_point(maps[c](p));
    for (int c = 0; c < k; ++c)
        for (const auto& l : cfg.lines) out.add_line(maps[c](l));
    for (int c = 0; c < k; ++c)
        for (auto [p, l] : cfg.flags) out.flag(c * np + p, c * nl + l);
    for (int l = 0; l < nl; ++l) {
        int x = out.add_point(meet(cfg.lines[l], axis, tol));
        for (int c = 0; c < k; ++c) out.flag(x, c * nl + l);
    }
    const HomPoint perp(axis.a, axis.b, 0.0);
    for (int p = 0; p < np; ++p) {
        int l = out.add_line(join(cfg.points[p], perp, tol));
        for (int c = 0; c < k; ++c) out.flag(c * np + p, l);
        out.meta.flexible_lines.push_back(l);
    }
    out.meta.flexible = true;
    out.meta.expr = node("AR", {expr_of(cfg)}).to_string();
    return finish(std::move(out), tol, "AR output");
}

Configuration geo_AR_auto(const Configuration& cfg, int k, std::uint64_t seed, const Tolerance& tol) {
    if (cfg.k != k - 1) fail("DegreeMismatch", fmt::format("AR to degree {} needs a ({}-1)-configuration", k, k));
    require_finite(cfg, "AR");
    Frame f = frame_of(cfg);
    std::string last;
    for (int attempt = 0; attempt < kRetries; ++attempt) {
        auto g = rng_for(seed, attempt);
        double th = uni(g, 0, std::numbers::pi);
        double off = uni(g, -0.4, 0.4) * f.r;
        // axis with unit normal (cos th, sin th) at signed offset from the centroid
        HomLine axis(std::cos(th), std::sin(th), -(std::cos(th) * f.cx + std::sin(th) * f.cy) - off);
        std::vector<double> ratios;
        while (static_cast<int>(ratios.size()) < k - 1) {
            double v = uni(g, 0, 1) < 0.5 ? uni(g, -2.5, -0.4) : uni(g, 1.3, 3.0);
            bool close = false;
            for (double w : ratios) close |= std::abs(v - w) < 0.08;
            if (!close) ratios.push_back(v);
        }
        try {
            return geo_AR(cfg, k, axis, ratios, tol);
        } catch (const Error& e) {
            if (e.kind() == "DegreeMismatch" || e.kind() == "PlacementDegenerate") throw;
            last = e.what();
        }
    }
    fail("VerificationFailure", "AR: no admissible axis after retries (" + last + ")");
}

// ---------------------------------------------------------------- PS

Configuration geo_PS(const Configuration& cfg, int deleted_line, const std::vector<Translation>& tr,
                     const Tolerance& tol) {
    const int k = cfg.k;
    check_verified(cfg, tol, "PS input");
    require_finite(cfg, "PS");
    const int np = static_cast<int>(cfg.points.size()), nl = static_cast<int>(cfg.lines.size());
    if (deleted_line < 0 || deleted_line >= nl) fail("BadLine", "deleted line out of range");
    if (static_cast<int>(tr.size()) != k - 1) fail("BadDirection", fmt::format("need {} translations", k - 1));
    double ux = tr[0].dx, uy = tr[0].dy, un = std::hypot(ux, uy);
    if (un == 0) fail("BadDirection", "zero translation");
    ux /= un;
    uy /= un;
    std::vector<double> mags{0.0};
    for (const auto& t : tr) {
        double len = std::hypot(t.dx, t.dy);
        if (len == 0 || std::abs(t.dx * uy - t.dy * ux) > 1e-9 * len)
            fail("BadDirection", "translations must share one direction");
        double s = t.dx * ux + t.dy * uy;
        for (double m : mags)
            if (std::abs(m - s) < 1e-9 * un) fail("BadDirection", "translation magnitudes must be distinct and nonzero");
        mags.push_back(s);
    }
    const HomLine dirline(uy, -ux, 0.0);  // any line with direction u
    for (int l = 0; l < nl; ++l)
        if (!cfg.lines[l].ideal() && parallel(cfg.lines[l], dirline, 1e-6))
            fail("BadDirection", fmt::format("translation is parallel to line {}", cfg.line_ids[l]));

    Configuration out;
    out.k = k;
    std::vector<int> lmap(nl, -1);
    for (int c = 0; c < k; ++c) {
        Mat3 T = Mat3::Identity();
        T(0, 2) = mags[c] * ux;
        T(1, 2) = mags[c] * uy;
        ProjectiveMap M(T);
        for (const auto& p : cfg.points) out.add_point(M(p));
        for (int l = 0; l < nl; ++l) {
            if (l == deleted_line) continue;
            int id = out.add_line(M(cfg.lines[l]));
            for (int p : points_on(cfg, l)) out.flag(c * np + p, id);
        }
    }
    const HomPoint uinf(ux, uy, 0.0);
    for (int p : points_on(cfg, deleted_line)) {
        int l = out.add_line(join(cfg.points[p], uinf, tol));
        for (int c = 0; c < k; ++c) out.flag(c * np + p, l);
        out.meta.flexible_lines.push_back(l);
    }
    out.meta.flexible = true;
    out.meta.expr = node("PS", {expr_of(cfg)}).to_string();
    return finish(std::move(out), tol, "PS output");
}

Configuration geo_PS_auto(const Configuration& cfg, int deleted_line, std::uint64_t seed, const Tolerance& tol) {
    Frame f = frame_of(cfg);
    std::string last;
    for (int attempt = 0; attempt < kRetries; ++attempt) {
        auto g = rng_for(seed, attempt);
        double th = uni(g, 0, std::numbers::pi);
        const HomLine dl(std::sin(th), -std::cos(th), 0.0);
        bool near = false;
        for (const auto& l : cfg.lines)
            if (!l.ideal() && parallel(l, dl, 0.02)) near = true;
        if (near) continue;
        std::vector<Translation> tr;
        for (int c = 1; c < cfg.k; ++c) {
            double s = f.r * (1.3 * c + uni(g, 0.2, 0.6));
            tr.push_back({s * std::cos(th), s * std::sin(th)});
        }
        try {
            return geo_PS(cfg, deleted_line, tr, tol);
        } catch (const Error& e) {
            if (e.kind() != "VerificationFailure") throw;
            last = e.what();
        }
    }
    fail("VerificationFailure", "PS: no admissible translation after retries (" + last + ")");
}

// ---------------------------------------------------------------- AS

Configuration geo_AS(const Configuration& cfg, const std::vector<int>& P, const std::vector<int>& Q, int r_p,
                     int r_q, std::uint64_t seed, const Tolerance& tol) {
    const int k = cfg.k;
    check_verified(cfg, tol, "AS input");
    require_finite(cfg, "AS");
    if (r_p < 1) fail("NoLineRemoved", "AS removes at least one line of the first pencil");
    if (r_q < 0) fail("NoLineRemoved", "r_q must be non-negative");
    if (r_p > static_cast<int>(P.size()) || r_q > static_cast<int>(Q.size()))
        fail("PencilExceeded", "removal count exceeds pencil size");
    const int nl = static_cast<int>(cfg.lines.size()), np = static_cast<int>(cfg.points.size());
    for (int l : P)
        if (l < 0 || l >= nl || !parallel(cfg.lines[l], cfg.lines[P[0]], tol.incidence_rel))
            fail("PencilsNotIndependent", "first pencil is not a parallel class");
    for (int l : Q)
        if (l < 0 || l >= nl || !parallel(cfg.lines[l], cfg.lines[Q[0]], tol.incidence_rel))
            fail("PencilsNotIndependent", "second pencil is not a parallel class");
    if (!Q.empty() && parallel(cfg.lines[P[0]], cfg.lines[Q[0]], tol.incidence_rel))
        fail("PencilsNotIndependent", "pencils share a direction");
    std::set<int> pp, qq;
    for (int l : P)
        for (int p : points_on(cfg, l)) pp.insert(p);
    for (int l : Q)
        for (int p : points_on(cfg, l)) qq.insert(p);
    for (int p : qq)
        if (pp.count(p)) fail("PencilsNotIndependent", "pencils share a configuration point");

    // step 1: affine frame with P horizontal and Q vertical
    const HomLine& lp = cfg.lines[P[0]];
    Eigen::Vector2d uP(lp.b, -lp.a);
    Eigen::Vector2d uQ;
    if (!Q.empty())
        uQ = Eigen::Vector2d(cfg.lines[Q[0]].b, -cfg.lines[Q[0]].a);
    else
        uQ = Eigen::Vector2d(lp.a, lp.b);
    Eigen::Matrix2d Bm;
    Bm.col(0) = uP.normalized();
    Bm.col(1) = uQ.normalized();
    const Eigen::Matrix2d Bi = Bm.inverse();
    const std::set<int> removed_p(P.begin(), P.begin() + r_p), removed_q(Q.begin(), Q.begin() + r_q);
    Frame f = frame_of(cfg);
    std::string last;
    for (int attempt = 0; attempt < kRetries; ++attempt) {
        auto g = rng_for(seed, attempt);
        try {
            Eigen::Vector2d o(f.cx + uni(g, -1.5, 1.5) * f.r, f.cy + uni(g, -1.5, 1.5) * f.r);
            Mat3 N = Mat3::Identity();
            N.block<2, 2>(0, 0) = Bi;
            N.block<2, 1>(0, 2) = -Bi * o;
            const ProjectiveMap Nm(N);
            Configuration w = apply_map(cfg, Nm);
            double scale = 0;
            for (const auto& p : w.points) scale = std::max({scale, std::abs(p.ex()), std::abs(p.ey())});
            bool on_axis = false;
            for (const auto& p : w.points)
                on_axis |= std::abs(p.ex()) < 1e-3 * scale || std::abs(p.ey()) < 1e-3 * scale;
            if (on_axis) throw Error("StepCollision", "a point lies on a normalized axis");

            // steps 2-4: orbit line of the first point fixes a, b
            const int P1 = points_on(w, *removed_p.begin())[0];
            const HomPoint& p1 = w.points[P1];
            double ang = uni(g, 0.15, std::numbers::pi / 2 - 0.15) + (uni(g, 0, 1) < 0.5 ? std::numbers::pi / 2 : 0);
            HomLine L1 = join(p1, HomPoint(std::cos(ang), std::sin(ang), 0.0), tol);
            if (std::abs(L1.c) < 1e-3 * std::hypot(L1.a, L1.b) * scale)
                throw Error("StepCollision", "L(P1) passes near the origin");
            auto [a, b] = affinity_from_line(L1, p1, tol);
            std::vector<ProjectiveMap> maps{ProjectiveMap()};
            std::vector<double> ts;
            int guard = 0;
            while (static_cast<int>(ts.size()) < k - 2) {
                if (++guard > 1000) throw Error("StepCollision", "no admissible t values");
                double m = std::max(std::abs(a), std::abs(b));
                double t = uni(g, -2 * m, 2 * m);
                if (std::abs((a + t) / a) < 0.25 || std::abs((b + t) / b) < 0.25 || std::abs(t) < 0.1 * m) continue;
                bool close = false;
                for (double u : ts) close |= std::abs(u - t) < 0.1 * m;
                if (close) continue;
                ts.push_back(t);
                maps.push_back(parametric_affinity(a, b, t));
            }
            // step 5: k-1 copies without the removed lines
            Configuration out;
            out.k = k;
            const int nc = k - 1;
            for (int c = 0; c < nc; ++c)
                for (const auto& p : w.points) out.add_point(maps[c](p));
            for (int c = 0; c < nc; ++c)
                for (int l = 0; l < nl; ++l) {
                    if (removed_p.count(l) || removed_q.count(l)) continue;
                    int id = out.add_line(maps[c](w.lines[l]));
                    for (int p : points_on(w, l)) out.flag(c * np + p, id);
                }
            // steps 6-8: orbit lines of the removed lines' points and their common point
            auto orbit_fan = [&](int l) {
                std::vector<HomLine> orbits;
                for (int p : points_on(w, l)) orbits.push_back(orbit_line(w.points[p], a, b));
                int y = out.add_point(meet(orbits[0], orbits[1], tol));
                auto pts = points_on(w, l);
                for (std::size_t i = 0; i < pts.size(); ++i) {
                    int id = out.add_line(orbits[i]);
                    for (int c = 0; c < nc; ++c) out.flag(c * np + pts[i], id);
                    out.flag(y, id);
                    out.meta.flexible_lines.push_back(id);
                }
            };
            for (int l : removed_p) orbit_fan(l);
            for (int l : removed_q) orbit_fan(l);
            out = apply_map(out, Nm.inverse());
            out.meta.flexible = true;
            out.meta.expr = node("AS", {Expr::integer(r_p), Expr::integer(r_q), expr_of(cfg)}).to_string();
            return finish(std::move(out), tol, "AS output");
        } catch (const Error& e) {
            last = e.what();
        }
    }
    fail("StepCollision", "AS: no admissible choice after retries (" + last + ")");
}

// ---------------------------------------------------------------- DU

namespace {

// Random transversal of the pencil at point p0; returns its section points.
std::vector<HomPoint> section(const Configuration& C, int p0, const std::vector<int>& pencil, std::mt19937_64& g,
                              const Tolerance& tol) {
    Frame f = frame_of(C);
    const HomPoint& P = C.points[p0];
    double ang = uni(g, 0, 2 * std::numbers::pi), rho = uni(g, 0.35, 0.9) * f.r;
    HomPoint Z = finite(P.ex() + rho * std::cos(ang), P.ey() + rho * std::sin(ang));
    double dirang = ang + uni(g, 0.6, 2.5);
    HomLine T = join(Z, HomPoint(std::cos(dirang), std::sin(dirang), 0.0), tol);
    if (residual(P, T) < 1e-3) throw Error("TransversalNotFound", "transversal passes near the pencil point");
    std::vector<HomPoint> xs;
    for (int l : pencil) {
        if (parallel(C.lines[l], T, 1e-3)) throw Error("TransversalNotFound", "transversal parallel to a pencil line");
        xs.push_back(meet(C.lines[l], T, tol));
    }
    for (const auto& x : xs)
        for (const auto& q : C.points)
            if (point_sep(x, q) < 1e-3) throw Error("TransversalNotFound", "section point near a configuration point");
    return xs;
}

HomPoint random_far_point(const Configuration& C, std::mt19937_64& g, double lo, double hi) {
    Frame f = frame_of(C);
    double ang = uni(g, 0, 2 * std::numbers::pi), rho = uni(g, lo, hi) * f.r;
    return finite(f.cx + rho * std::cos(ang), f.cy + rho * std::sin(ang));
}

HomPoint random_near_point(const Configuration& C, std::mt19937_64& g) {
    Frame f = frame_of(C);
    return finite(f.cx + uni(g, -0.3, 0.3) * f.r, f.cy + uni(g, -0.3, 0.3) * f.r);
}

HomPoint along(const HomPoint& a, const HomPoint& b, double s) {
    return finite(a.ex() + s * (b.ex() - a.ex()), a.ey() + s * (b.ey() - a.ey()));
}

}  // namespace

Configuration geo_DU(const Configuration& C, const Configuration& D, int pencil_point, int del_line, DuMode mode,
                     std::uint64_t seed, const Tolerance& tol) {
    if (C.k != D.k) fail("DegreeMismatch", "DU needs equal degrees");
    const int k = C.k;
    check_verified(C, tol, "DU first input");
    check_verified(D, tol, "DU second input");
    if (pencil_point < 0 || pencil_point >= static_cast<int>(C.points.size())) fail("BadPoint", "pencil point out of range");
    if (del_line < 0 || del_line >= static_cast<int>(D.lines.size())) fail("BadLine", "deleted line out of range");
    if (mode == DuMode::Flexible) {
        const auto& fl = D.meta.flexible_lines;
        if (!D.meta.flexible || std::find(fl.begin(), fl.end(), del_line) == fl.end())
            fail("ModeUnavailable", "flexible mode needs a flexible line of a flexible configuration");
    }
    const auto pencil = lines_through(C, pencil_point);
    const auto range = points_on(D, del_line);
    require_finite(D, "DU");
    std::string last;
    for (int attempt = 0; attempt < kRetries; ++attempt) {
        auto g = rng_for(seed, attempt);
        try {
            auto xs = section(C, pencil_point, pencil, g, tol);
            HomPoint x = random_near_point(D, g);
            if (residual(x, D.lines[del_line]) < 1e-3) throw Error("PlacementDegenerate", "extension point on line");
            HomPoint y = random_far_point(C, g, 1.2, 2.2);
            std::optional<ProjectiveMap> H;
            if (mode == DuMode::Flexible) {
                H = range_extension({PointPair{D.points[range[0]], xs[0]}, PointPair{D.points[range[1]], xs[1]},
                                     PointPair{D.points[range[2]], xs[2]}},
                                    x, y, tol);
            } else {
                // z on line x-Y3 and w on line y-X3 force Y3 -> X3
                double s = uni(g, 0.3, 0.7);
                HomPoint z = along(x, D.points[range[2]], s);
                HomPoint w = along(y, xs[2], s);
                H = collineation_through_constructive({PointPair{D.points[range[0]], xs[0]},
                                                       PointPair{D.points[range[1]], xs[1]}, PointPair{x, y},
                                                       PointPair{z, w}},
                                                      tol);
            }
            for (int j = 0; j < k; ++j)
                if (!incident((*H)(D.points[range[j]]), C.lines[pencil[j]], tol))
                    throw Error("PlacementDegenerate", "range is not projectively compatible with the pencil");
            Configuration Dm = apply_map(D, *H);

            Configuration out;
            out.k = k;
            const int nC = static_cast<int>(C.points.size());
            std::vector<int> pmap(nC, -1);
            for (int p = 0; p < nC; ++p)
                if (p != pencil_point) pmap[p] = out.add_point(C.points[p]);
            for (const auto& l : C.lines) out.add_line(l);
            for (auto [p, l] : C.flags)
                if (p != pencil_point) out.flag(pmap[p], l);
            const int base_p = static_cast<int>(out.points.size());
            for (const auto& p : Dm.points) out.add_point(p);
            std::vector<int> lmap(D.lines.size(), -1);
            for (int l = 0; l < static_cast<int>(D.lines.size()); ++l)
                if (l != del_line) lmap[l] = out.add_line(Dm.lines[l]);
            for (auto [p, l] : D.flags)
                if (l != del_line) out.flag(base_p + p, lmap[l]);
            for (int j = 0; j < k; ++j) out.flag(base_p + range[j], pencil[j]);
            out.meta.expr = node("DUflex", {expr_of(C), expr_of(D)}).to_string();
            return finish(std::move(out), tol, "DU output");
        } catch (const Error& e) {
            if (e.kind() == "PlacementDegenerate" && std::string(e.what()).find("compatible") != std::string::npos)
                throw;
            last = e.what();
        }
    }
    fail("VerificationFailure", "DU: no admissible placement after retries (" + last + ")");
}

// ---------------------------------------------------------------- DU(t)

Configuration geo_DUt(const Configuration& cfg, const std::vector<int>& chosen, const Polarity& pol, std::uint64_t seed,
                      const Tolerance& tol) {
    const int n = static_cast<int>(cfg.points.size());
    const int t = static_cast<int>(chosen.size());
    if (t < 1 || t > n) fail("BadT", fmt::format("DU(t) needs 1 <= t <= n = {} (got {})", n, t));
    std::set<int> cs(chosen.begin(), chosen.end());
    if (static_cast<int>(cs.size()) != t) fail("BadT", "chosen points must be distinct");
    for (int p : chosen)
        if (p < 0 || p >= n) fail("BadPoint", "chosen point out of range");
    check_verified(cfg, tol, "DU(t) input");
    const Configuration dual = dualize(cfg, pol, tol);
    std::string last;
    for (int attempt = 0; attempt < kRetries; ++attempt) {
        auto g = rng_for(seed, attempt);
        try {
            Configuration out;
            out.k = cfg.k;
            std::vector<int> pmap(n, -1);
            for (int p = 0; p < n; ++p)
                if (!cs.count(p)) pmap[p] = out.add_point(cfg.points[p]);
            for (const auto& l : cfg.lines) out.add_line(l);
            for (auto [p, l] : cfg.flags)
                if (!cs.count(p)) out.flag(pmap[p], l);
            int i = 0;
            for (int p : chosen) {
                const auto pencil = lines_through(cfg, p);
                std::vector<HomPoint> xs;
                for (int tries = 0;; ++tries) {
                    try {
                        xs = section(cfg, p, pencil, g, tol);
                        break;
                    } catch (const Error& e) {
                        if (tries > 64) fail("TransversalNotFound", "no transversal for the pencil");
                    }
                }
                // dual point j is the pole of line j; dual line p is the polar of point p
                HomPoint x = random_near_point(dual, g);
                if (residual(x, dual.lines[p]) < 1e-3) throw Error("PlacementDegenerate", "extension point on polar");
                HomPoint y = random_far_point(cfg, g, 1.6 + 0.9 * i, 2.4 + 0.9 * i);
                ProjectiveMap H = range_extension({PointPair{dual.points[pencil[0]], xs[0]},
                                                   PointPair{dual.points[pencil[1]], xs[1]},
                                                   PointPair{dual.points[pencil[2]], xs[2]}},
                                                  x, y, tol);
                Configuration cp = apply_map(dual, H);
                const int base_p = static_cast<int>(out.points.size());
                for (const auto& q : cp.points) out.add_point(q);
                std::vector<int> lmap(cp.lines.size(), -1);
                for (int l = 0; l < static_cast<int>(cp.lines.size()); ++l)
                    if (l != p) lmap[l] = out.add_line(cp.lines[l]);
                for (auto [q, l] : cp.flags)
                    if (l != p) out.flag(base_p + q, lmap[l]);
                for (int l : pencil) out.flag(base_p + l, l);
                ++i;
            }
            out.meta.expr = node("DU", {Expr::integer(t), expr_of(cfg)}).to_string();
            return finish(std::move(out), tol, "DU(t) output");
        } catch (const Error& e) {
            if (e.kind() == "TransversalNotFound") throw;
            last = e.what();
        }
    }
    fail("VerificationFailure", "DU(t): no admissible placement after retries (" + last + ")");
}

// ---------------------------------------------------------------- DU2

Configuration geo_DU2(const Configuration& C, const Configuration& D, const HomPoint& center, int D_point, int P0,
                      int P0_opposite, std::uint64_t seed, const Tolerance& tol) {
    const int k = C.k;
    if (!C.meta.central_symmetry) fail("SymmetryViolated", "first argument is not centrally symmetric");
    if (D.k != k - 1) fail("DegreeMismatch", "DU2 needs D of degree k - 1");
    check_verified(C, tol, "DU2 first input");
    check_verified(D, tol, "DU2 second input");
    require_finite(C, "DU2");
    require_finite(D, "DU2");
    const double ox = center.ex(), oy = center.ey();
    auto reflect = [&](const HomPoint& p) { return finite(2 * ox - p.ex(), 2 * oy - p.ey()); };
    auto find_point = [&](const Configuration& c, const HomPoint& q) {
        for (int i = 0; i < static_cast<int>(c.points.size()); ++i)
            if (point_sep(c.points[i], q) < tol.separation_rel) return i;
        return -1;
    };
    const int Dq = D_point;
    const int Dq2 = find_point(C, reflect(C.points[Dq]));
    if (Dq2 < 0 || Dq2 == Dq) fail("SymmetryViolated", "pencil point has no symmetric partner");
    const auto pencil = lines_through(C, Dq);
    const auto pencil2 = lines_through(C, Dq2);
    std::vector<int> partner;
    for (int l : pencil) {
        // reflected line through two reflected points
        auto pts = points_on(C, l);
        HomLine rl = join(reflect(C.points[pts[0]]), reflect(C.points[pts[1]]), tol);
        int found = -1;
        for (int m : pencil2)
            if (line_sep(C.lines[m], rl) < tol.separation_rel) found = m;
        if (found < 0) fail("SymmetryViolated", "pencils at D and D' are not symmetric");
        partner.push_back(found);
    }
    // D must be symmetric about the midpoint of its anchors
    const double mx = (D.points[P0].ex() + D.points[P0_opposite].ex()) / 2;
    const double my = (D.points[P0].ey() + D.points[P0_opposite].ey()) / 2;
    for (const auto& p : D.points)
        if (find_point(D, finite(2 * mx - p.ex(), 2 * my - p.ey())) < 0)
            fail("SymmetryViolated", "second argument is not symmetric about the anchor midpoint");

    Frame f = frame_of(C);
    const Eigen::Vector2d e1(D.points[P0].ex() - mx, D.points[P0].ey() - my);
    const Eigen::Vector2d e2(-e1.y(), e1.x());
    std::string last;
    for (int attempt = 0; attempt < kRetries; ++attempt) {
        auto g = rng_for(seed, attempt);
        try {
            const HomLine& l0 = C.lines[pencil[0]];
            double dx = l0.b, dy = -l0.a, dn = std::hypot(dx, dy);
            double s = (uni(g, 0, 1) < 0.5 ? -1 : 1) * uni(g, 0.25, 0.8) * f.r / dn;
            HomPoint P0hat = finite(C.points[Dq].ex() + s * dx, C.points[Dq].ey() + s * dy);
            Eigen::Vector2d fv(P0hat.ex() - ox, P0hat.ey() - oy);
            double beta = uni(g, 0.5, 2.6), stretch = uni(g, 0.4, 1.2);
            Eigen::Vector2d gv = stretch * (Eigen::Rotation2Dd(beta).toRotationMatrix() * fv);
            Eigen::Matrix2d E, F;
            E << e1, e2;
            F << fv, gv;
            Eigen::Matrix2d Lm = F * E.inverse();
            Mat3 A = Mat3::Identity();
            A.block<2, 2>(0, 0) = Lm;
            A.block<2, 1>(0, 2) = Eigen::Vector2d(ox, oy) - Lm * Eigen::Vector2d(mx, my);
            Configuration Dh = apply_map(D, ProjectiveMap(A));

            double th = uni(g, 0, std::numbers::pi);
            HomLine axis(std::cos(th), std::sin(th), -(std::cos(th) * ox + std::sin(th) * oy));
            if (residual(P0hat, axis) < 1e-3) throw Error("PlacementDegenerate", "anchor on the axis");
            HomLine d = join(P0hat, HomPoint(axis.a, axis.b, 0.0), tol);
            auto dist = [&](const HomPoint& q) { return (axis.a * q.ex() + axis.b * q.ey() + axis.c); };
            std::vector<double> ratios;
            for (int i = 1; i < k; ++i) ratios.push_back(dist(meet(C.lines[pencil[i]], d, tol)) / dist(P0hat));
            Configuration ar = geo_AR(Dh, k, axis, ratios, tol);

            const int npD = static_cast<int>(D.points.size()), nlD = static_cast<int>(D.lines.size());
            const int dline = k * nlD + P0, dline2 = k * nlD + P0_opposite;
            Configuration out;
            out.k = k;
            const int nC = static_cast<int>(C.points.size());
            std::vector<int> pmap(nC, -1);
            for (int p = 0; p < nC; ++p)
                if (p != Dq && p != Dq2) pmap[p] = out.add_point(C.points[p]);
            for (const auto& l : C.lines) out.add_line(l);
            for (auto [p, l] : C.flags)
                if (p != Dq && p != Dq2) out.flag(pmap[p], l);
            const int base_p = static_cast<int>(out.points.size());
            for (const auto& p : ar.points) out.add_point(p);
            std::vector<int> lmap(ar.lines.size(), -1);
            for (int l = 0; l < static_cast<int>(ar.lines.size()); ++l)
                if (l != dline && l != dline2) lmap[l] = out.add_line(ar.lines[l]);
            for (auto [p, l] : ar.flags)
                if (l != dline && l != dline2) out.flag(base_p + p, lmap[l]);
            for (int c = 0; c < k; ++c) {
                out.flag(base_p + c * npD + P0, pencil[c]);
                out.flag(base_p + c * npD + P0_opposite, partner[c]);
            }
            out.meta.central_symmetry = true;
            out.meta.center = center;
            out.meta.expr = node("DU2", {expr_of(C), node("AR", {expr_of(D)})}).to_string();
            return finish(std::move(out), tol, "DU2 output");
        } catch (const Error& e) {
            last = e.what();
        }
    }
    fail("VerificationFailure", "DU2: no admissible placement after retries (" + last + ")");
}

}  // namespace nk
