#include <fmt/format.h>

#include "nkconf/ops.hpp"
#include "nkconf/systematic.hpp"

namespace nk {

namespace {

bool any_ideal(const Configuration& c) {
    for (const auto& p : c.points)
        if (p.ideal()) return true;
    for (const auto& l : c.lines)
        if (l.ideal()) return true;
    return false;
}

Configuration finite_form(const Configuration& c, const Tolerance& tol) {
    return any_ideal(c) ? project_to_finite(c, tol) : c;
}

Polarity default_polarity(const Configuration& c, int attempt) {
    double cx = 0, cy = 0, r = 0;
    int n = 0;
    for (const auto& p : c.points)
        if (!p.ideal()) {
            cx += p.ex();
            cy += p.ey();
            ++n;
        }
    if (n) {
        cx /= n;
        cy /= n;
    }
    for (const auto& p : c.points)
        if (!p.ideal()) r = std::max(r, std::hypot(p.ex() - cx, p.ey() - cy));
    if (r == 0) r = 1;
    Polarity pol;
    pol.center = HomPoint(cx + r * (0.137 + 0.071 * attempt), cy + r * (0.291 - 0.053 * attempt), 1.0);
    pol.radius = r;
    return pol;
}

}  // namespace

Configuration construct(const Expr& e, std::uint64_t seed, const Tolerance& tol) {
    if (!e.is_list() || e.items.empty()) fail("BadExpr", "expected a parenthesized expression");
    const std::string& tag = e.head();
    if (tag == "D4") return d4_construct(static_cast<int>(e.int_arg(0)), false, tol);
    if (tag == "D5") return d5_construct(static_cast<int>(e.int_arg(0)), false, tol);
    if (tag == "Nprime9") return nprime_construct(std::nullopt, nullptr, tol);
    if (tag == "celestial") return celestial_construct(parse_celestial(e.str_arg(0)), 1.0, tol);
    if (tag == "fixture") return load_json_file(e.str_arg(0));
    if (tag == "project") return project_to_finite(construct(e.arg(0), seed, tol), tol);
    if (tag == "AR") {
        Configuration c = finite_form(construct(e.arg(0), seed, tol), tol);
        int k = e.nargs() > 1 ? static_cast<int>(e.int_arg(1)) : c.k + 1;
        return geo_AR_auto(c, k, seed, tol);
    }
    if (tag == "PS") return geo_PS_auto(finite_form(construct(e.arg(0), seed, tol), tol), 0, seed, tol);
    if (tag == "AS") {
        Configuration c = finite_form(construct(e.arg(2), seed, tol), tol);
        auto pr = detect_pencils(c, tol);
        return geo_AS(c, pr.pencil1, pr.pencil2, static_cast<int>(e.int_arg(0)), static_cast<int>(e.int_arg(1)), seed,
                      tol);
    }
    if (tag == "DU") {
        Configuration c = construct(e.arg(1), seed, tol);
        long long t = e.int_arg(0);
        if (t < 1 || t > static_cast<long long>(c.points.size()))
            fail("BadT", fmt::format("DU(t) needs 1 <= t <= n = {} (got {})", c.points.size(), t));
        std::vector<int> pts;
        for (int i = 0; i < t; ++i) pts.push_back(i);
        std::string last;
        for (int attempt = 0; attempt < 8; ++attempt) {
            try {
                return geo_DUt(c, pts, default_polarity(c, attempt), seed, tol);
            } catch (const Error& err) {
                if (err.kind() != "CenterIncidence") throw;
                last = err.what();
            }
        }
        fail("CenterIncidence", last);
    }
    if (tag == "DUflex") {
        Configuration C = construct(e.arg(0), seed, tol);
        Configuration D = finite_form(construct(e.arg(1), seed, tol), tol);
        if (D.meta.flexible && !D.meta.flexible_lines.empty())
            return geo_DU(C, D, 0, D.meta.flexible_lines.front(), DuMode::Flexible, seed, tol);
        return geo_DU(C, D, 0, 0, DuMode::Collineation, seed, tol);
    }
    if (tag == "DU2") fail("CatalogOnly", "DU2 needs explicit anchors; use the library call");
    fail("CatalogOnly", "'" + tag + "' has no coordinate construction (descriptor only)");
}

}  // namespace nk
