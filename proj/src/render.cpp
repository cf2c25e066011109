#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "nkconf/incidence.hpp"

namespace nk {

std::string render_svg(const Configuration& cfg, const SvgOptions& opt) {
    if (cfg.points.empty()) fail("EmptyConfiguration", "nothing to render");
    // bounding disc around the finite points
    double cx = 0, cy = 0;
    int nf = 0;
    for (const auto& p : cfg.points)
        if (!p.ideal()) {
            cx += p.ex();
            cy += p.ey();
            ++nf;
        }
    if (nf) {
        cx /= nf;
        cy /= nf;
    }
    double R = 0;
    for (const auto& p : cfg.points)
        if (!p.ideal()) R = std::max(R, std::hypot(p.ex() - cx, p.ey() - cy));
    if (R == 0) R = 1;
    const double disc = 1.1 * R;
    const bool any_ideal = std::any_of(cfg.points.begin(), cfg.points.end(), [](auto& p) { return p.ideal(); });
    const double ring = any_ideal ? 1.2 * R : disc;
    const double half = opt.size / 2.0;
    const double s = (half - 12) / ring;
    auto X = [&](double x) { return half + s * (x - cx); };
    auto Y = [&](double y) { return half - s * (y - cy); };

    std::set<int> hi1, hi2;
    if (opt.highlight_pencils) {
        auto pr = detect_pencils(cfg);
        hi1.insert(pr.pencil1.begin(), pr.pencil1.end());
        hi2.insert(pr.pencil2.begin(), pr.pencil2.end());
    }

    std::string o = fmt::format(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{0}\" height=\"{0}\" "
        "viewBox=\"0 0 {0} {0}\">\n"
        "<rect width=\"{0}\" height=\"{0}\" fill=\"white\"/>\n",
        opt.size);
    if (any_ideal)
        o += fmt::format("<circle class=\"ring\" cx=\"{:.3f}\" cy=\"{:.3f}\" r=\"{:.3f}\" fill=\"none\" "
                         "stroke=\"#bbbbbb\" stroke-dasharray=\"4 4\"/>\n",
                         X(cx), Y(cy), s * ring);
    for (std::size_t i = 0; i < cfg.lines.size(); ++i) {
        const HomLine& L = cfg.lines[i];
        std::string color = hi1.count(static_cast<int>(i)) ? "#d62728" : hi2.count(static_cast<int>(i)) ? "#1f77b4" : "#444444";
        if (L.ideal()) {
            o += fmt::format("<circle class=\"line ideal\" cx=\"{:.3f}\" cy=\"{:.3f}\" r=\"{:.3f}\" fill=\"none\" "
                             "stroke=\"{}\"/>\n",
                             X(cx), Y(cy), s * ring, color);
            continue;
        }
        // chord of the disc: foot of the perpendicular from the center, then +-half length
        double nn = std::hypot(L.a, L.b);
        double d = (L.a * cx + L.b * cy + L.c) / nn;
        double fx = cx - d * L.a / nn, fy = cy - d * L.b / nn;
        double h = std::sqrt(std::max(0.0, disc * disc - d * d));
        double ux = -L.b / nn, uy = L.a / nn;
        o += fmt::format("<line class=\"line\" x1=\"{:.3f}\" y1=\"{:.3f}\" x2=\"{:.3f}\" y2=\"{:.3f}\" "
                         "stroke=\"{}\" stroke-width=\"1\"/>\n",
                         X(fx - h * ux), Y(fy - h * uy), X(fx + h * ux), Y(fy + h * uy), color);
    }
    for (std::size_t i = 0; i < cfg.points.size(); ++i) {
        const HomPoint& p = cfg.points[i];
        double px, py;
        std::string cls = "point";
        if (p.ideal()) {
            double a = std::atan2(p.y, p.x);
            px = cx + ring * std::cos(a);
            py = cy + ring * std::sin(a);
            cls = "point ideal";
        } else {
            px = p.ex();
            py = p.ey();
        }
        o += fmt::format("<circle class=\"{}\" cx=\"{:.3f}\" cy=\"{:.3f}\" r=\"3\" fill=\"{}\"/>\n", cls, X(px), Y(py),
                         p.ideal() ? "#9467bd" : "black");
        if (opt.labels)
            o += fmt::format("<text x=\"{:.3f}\" y=\"{:.3f}\" font-size=\"9\">{}</text>\n", X(px) + 4, Y(py) - 4,
                             cfg.point_ids[i]);
    }
    o += "</svg>\n";
    return o;
}

}  // namespace nk
