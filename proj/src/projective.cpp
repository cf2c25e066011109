#include "nkconf/projective.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <limits>

namespace nk {

void Tolerance::check() const {
    if (!(0 < incidence_rel && incidence_rel < separation_rel && separation_rel < 1))
        fail("BadTolerance", "need 0 < incidence_rel < separation_rel < 1");
}

Vec3 normalize3(const Vec3& v) {
    double s = v.cwiseAbs().maxCoeff();
    if (!(s > 0) || !std::isfinite(s)) fail("ZeroVector", "homogeneous vector is zero or not finite");
    Vec3 r = v / s;
    for (int i = 0; i < 3; ++i) {
        if (r[i] != 0.0) {
            if (r[i] < 0) r = -r;
            break;
        }
    }
    // exact 1 for the dominant entry keeps serialization stable
    for (int i = 0; i < 3; ++i)
        if (std::abs(std::abs(r[i]) - 1.0) < 4 * std::numeric_limits<double>::epsilon())
            r[i] = r[i] > 0 ? 1.0 : -1.0;
    for (int i = 0; i < 3; ++i)
        if (r[i] == 0.0) r[i] = 0.0;  // drop negative zero
    return r;
}

HomPoint::HomPoint(double x_, double y_, double w_) : HomPoint(Vec3(x_, y_, w_)) {}
HomPoint::HomPoint(const Vec3& v) {
    Vec3 n = normalize3(v);
    x = n[0];
    y = n[1];
    w = n[2];
}

HomLine::HomLine(double a_, double b_, double c_) : HomLine(Vec3(a_, b_, c_)) {}
HomLine::HomLine(const Vec3& v) {
    Vec3 n = normalize3(v);
    a = n[0];
    b = n[1];
    c = n[2];
}

static double normalized_det(Mat3 m) {
    double s = m.cwiseAbs().maxCoeff();
    if (!(s > 0)) return 0.0;
    m /= s;
    return m.determinant();
}

ProjectiveMap::ProjectiveMap() : m_(Mat3::Identity()), inv_t_(Mat3::Identity()) {}

ProjectiveMap::ProjectiveMap(const Mat3& m) : m_(m) {
    if (!m.allFinite() || std::abs(normalized_det(m)) < 1e-12)
        fail("SingularSystem", "projective map has vanishing determinant");
    m_ /= m.cwiseAbs().maxCoeff();
    inv_t_ = m_.inverse().transpose();
}

HomPoint ProjectiveMap::operator()(const HomPoint& p) const { return HomPoint(Vec3(m_ * p.vec())); }
HomLine ProjectiveMap::operator()(const HomLine& l) const { return HomLine(Vec3(inv_t_ * l.vec())); }
ProjectiveMap ProjectiveMap::operator*(const ProjectiveMap& o) const { return ProjectiveMap(Mat3(m_ * o.m_)); }
ProjectiveMap ProjectiveMap::inverse() const { return ProjectiveMap(Mat3(m_.inverse())); }

Mat3 Polarity::conic() const {
    if (center.ideal()) fail("BadPolarity", "center must be finite");
    if (!(radius > 0)) fail("BadPolarity", "radius must be positive");
    double cx = center.ex(), cy = center.ey();
    Mat3 C;
    C << 1, 0, -cx, 0, 1, -cy, -cx, -cy, cx * cx + cy * cy - radius * radius;
    return C;
}

double point_sep(const HomPoint& p, const HomPoint& q) {
    return p.vec().normalized().cross(q.vec().normalized()).norm();
}
double line_sep(const HomLine& l, const HomLine& m) {
    return l.vec().normalized().cross(m.vec().normalized()).norm();
}
double residual(const HomPoint& p, const HomLine& l) { return std::abs(p.vec().dot(l.vec())); }

HomLine join(const HomPoint& p, const HomPoint& q, const Tolerance& tol) {
    if (point_sep(p, q) < tol.separation_rel) fail("CoincidentPoints", "cannot join coincident points");
    return HomLine(Vec3(p.vec().cross(q.vec())));
}

HomPoint meet(const HomLine& l1, const HomLine& l2, const Tolerance& tol) {
    if (line_sep(l1, l2) < tol.separation_rel) fail("CoincidentLines", "cannot meet coincident lines");
    return HomPoint(Vec3(l1.vec().cross(l2.vec())));
}

bool incident(const HomPoint& p, const HomLine& l, const Tolerance& tol) {
    return residual(p, l) <= tol.incidence_rel;
}

double cross_ratio(const HomPoint& p1, const HomPoint& p2, const HomPoint& p3, const HomPoint& p4,
                   const Tolerance& tol) {
    const HomPoint* ps[4] = {&p1, &p2, &p3, &p4};
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (point_sep(*ps[i], *ps[j]) < tol.separation_rel)
                fail("RepeatedPoint", "cross ratio needs four distinct points");
    HomLine l = join(p1, p2, tol);
    if (!incident(p3, l, tol) || !incident(p4, l, tol))
        fail("NotCollinear", "cross ratio needs collinear points");
    // orthonormal basis of the plane spanned by the line's points
    Vec3 n = l.vec().normalized();
    Vec3 e1 = p1.vec().normalized();
    e1 -= n * n.dot(e1);
    e1.normalize();
    Vec3 e2 = n.cross(e1);
    auto det = [&](const HomPoint& a, const HomPoint& b) {
        Vec3 u = a.vec(), v = b.vec();
        return u.dot(e1) * v.dot(e2) - u.dot(e2) * v.dot(e1);
    };
    double num = det(p1, p3) * det(p2, p4);
    double den = det(p2, p3) * det(p1, p4);
    if (den == 0.0) return std::numeric_limits<double>::infinity();
    return num / den;
}

ProjectiveMap parametric_affinity(double a, double b, double t) {
    if (a == 0.0 || b == 0.0 || t == -a || t == -b)
        fail("ZeroAxisScale", "need a, b nonzero and t not in {-a, -b}");
    if (a == b) fail("EqualScales", "need a != b");
    Mat3 m = Mat3::Identity();
    m(0, 0) = (a + t) / a;
    m(1, 1) = (b + t) / b;
    return ProjectiveMap(m);
}

HomLine orbit_line(const HomPoint& p0, double a, double b) {
    if (p0.ideal()) fail("PointOnAxis", "orbit needs a finite point");
    double x0 = p0.ex(), y0 = p0.ey();
    if (x0 == 0.0 || y0 == 0.0) fail("PointOnAxis", "orbit point lies on a coordinate axis");
    if (a == 0.0 || b == 0.0) fail("ZeroAxisScale", "need a, b nonzero");
    if (a == b) fail("EqualScales", "need a != b");
    double X = (a - b) * x0 / a;
    double Y = (b - a) * y0 / b;
    return HomLine(1.0 / X, 1.0 / Y, -1.0);
}

std::pair<double, double> affinity_from_line(const HomLine& L, const HomPoint& p0, const Tolerance& tol) {
    if (L.a == 0.0 || L.b == 0.0 || L.c == 0.0)
        fail("BadLine", "line must miss the origin and not be parallel to an axis");
    if (!incident(p0, L, tol)) fail("PointNotOnLine", "p0 is not on L");
    if (p0.ideal() || p0.x == 0.0 || p0.y == 0.0) fail("PointOnAxis", "p0 lies on a coordinate axis");
    double abar = -L.c / L.a, bbar = -L.c / L.b;
    double a = -p0.ex() / abar, b = p0.ey() / bbar;
    if (a == b) fail("EqualScales", "line yields a == b");
    return {a, b};
}

ProjectiveMap axial_affinity(const HomLine& axis, const HomPoint& p, const HomPoint& p_image,
                             const Tolerance& tol) {
    if (axis.ideal()) fail("BadLine", "axis must be a finite line");
    if (p.ideal() || p_image.ideal()) fail("PointOnAxis", "points must be finite");
    if (incident(p, axis, tol)) fail("PointOnAxis", "p lies on the axis");
    double nn = std::hypot(axis.a, axis.b);
    double dx = p_image.ex() - p.ex(), dy = p_image.ey() - p.ey();
    double scale = std::max({1.0, std::abs(p.ex()), std::abs(p.ey())});
    if (std::abs(dx * axis.b - dy * axis.a) / nn > tol.incidence_rel * scale)
        fail("NonPerpendicularPair", "p -> p_image must be perpendicular to the axis");
    auto dist = [&](const HomPoint& q) { return (axis.a * q.ex() + axis.b * q.ey() + axis.c) / nn; };
    double lambda = dist(p_image) / dist(p);
    Vec3 nh(axis.a / nn, axis.b / nn, 0.0);
    Mat3 m = Mat3::Identity() + (lambda - 1.0) * nh * (axis.vec() / nn).transpose();
    return ProjectiveMap(m);
}

static bool collinear3(const HomPoint& a, const HomPoint& b, const HomPoint& c, const Tolerance& tol) {
    Mat3 m;
    m.col(0) = a.vec().normalized();
    m.col(1) = b.vec().normalized();
    m.col(2) = c.vec().normalized();
    return std::abs(m.determinant()) < tol.separation_rel;
}

static void check_general(const std::array<PointPair, 4>& pr, const Tolerance& tol) {
    for (int side = 0; side < 2; ++side) {
        for (int i = 0; i < 4; ++i) {
            std::array<HomPoint, 3> t;
            int k = 0;
            for (int j = 0; j < 4; ++j)
                if (j != i) t[k++] = side ? pr[j].dst : pr[j].src;
            if (collinear3(t[0], t[1], t[2], tol))
                fail("DegeneratePosition", "three of the four points are collinear");
        }
    }
}

// columns scaled so p4 = p1 + p2 + p3
static Mat3 frame(const HomPoint& p1, const HomPoint& p2, const HomPoint& p3, const HomPoint& p4) {
    Mat3 b;
    b.col(0) = p1.vec();
    b.col(1) = p2.vec();
    b.col(2) = p3.vec();
    Vec3 lam = b.partialPivLu().solve(p4.vec());
    return b * lam.asDiagonal();
}

ProjectiveMap collineation_through(const std::array<PointPair, 4>& pr, const Tolerance& tol) {
    check_general(pr, tol);
    Mat3 fs = frame(pr[0].src, pr[1].src, pr[2].src, pr[3].src);
    Mat3 fd = frame(pr[0].dst, pr[1].dst, pr[2].dst, pr[3].dst);
    return ProjectiveMap(Mat3(fd * fs.inverse()));
}

ProjectiveMap perspective_collineation(const HomPoint& c, const HomLine& ax, const HomPoint& p,
                                       const HomPoint& p_image) {
    // H = I + kappa c ax^T; solve p_image = alpha p + beta c
    Eigen::Matrix<double, 3, 2> A;
    A.col(0) = p.vec();
    A.col(1) = c.vec();
    Eigen::Vector2d ab = A.colPivHouseholderQr().solve(p_image.vec());
    if ((A * ab - p_image.vec()).norm() > 1e-9 * p_image.vec().norm())
        fail("DegeneratePosition", "center, point and image are not collinear");
    double s = ax.vec().dot(p.vec());
    if (ab[0] == 0.0 || s == 0.0) fail("DegeneratePosition", "point lies on the axis");
    double kappa = ab[1] / (ab[0] * s);
    return ProjectiveMap(Mat3(Mat3::Identity() + kappa * c.vec() * ax.vec().transpose()));
}

namespace {

// Second points for axis lines: ideal points in 12 directions and a few finite points.
const std::vector<Vec3>& axis_candidates() {
    static const std::vector<Vec3> c = [] {
        std::vector<Vec3> v;
        for (int i = 0; i < 12; ++i) v.emplace_back(std::cos(i * M_PI / 12), std::sin(i * M_PI / 12), 0.0);
        v.emplace_back(0, 0, 1);
        v.emplace_back(1, 1, 1);
        v.emplace_back(-1, 1, 1);
        return v;
    }();
    return c;
}

ProjectiveMap constructive_once(const std::array<PointPair, 4>& pr, const Tolerance& tol) {
    const HomPoint &A = pr[0].src, &B = pr[1].src, &C = pr[2].src, &D = pr[3].src;
    const HomPoint &A2 = pr[0].dst, &B2 = pr[1].dst, &C2 = pr[2].dst, &D2 = pr[3].dst;
    HomLine ell = join(A, B, tol), ell2 = join(A2, B2, tol);
    HomPoint E = meet(ell, join(C, D, tol), tol);
    HomPoint E2 = meet(ell2, join(C2, D2, tol), tol);

    // first: A -> A2, B -> B2 (hence ell -> ell2) by a perspectivity from AA2 ^ BB2
    ProjectiveMap H1;
    if (point_sep(A, A2) > tol.separation_rel || point_sep(B, B2) > tol.separation_rel) {
        HomPoint c = meet(join(A, A2, tol), join(B, B2, tol), tol);
        HomPoint S = meet(ell, ell2, tol);
        double best = 1e-3;
        std::optional<HomLine> pick;
        for (const Vec3& r : axis_candidates()) {
            HomPoint R(r);
            if (point_sep(R, S) < tol.separation_rel) continue;
            HomLine ax = join(S, R, tol);
            double m = std::min({residual(c, ax), residual(A, ax), residual(A2, ax)});
            if (m > best) {
                best = m;
                pick = ax;
            }
        }
        bool done = pick.has_value();
        if (done) H1 = perspective_collineation(c, *pick, A, A2);
        if (!done) fail("DegeneratePosition", "no admissible axis for the first perspectivity");
    }
    // second: fix A2, B2 and slide H1(E) to E2 along ell2 (center A2, axis through B2)
    HomPoint E1 = H1(E);
    ProjectiveMap H2;
    if (point_sep(E1, E2) > tol.separation_rel) {
        double best = 1e-3;
        std::optional<HomLine> pick;
        for (const Vec3& r : axis_candidates()) {
            HomPoint R(r);
            if (point_sep(R, B2) < tol.separation_rel) continue;
            HomLine ax = join(B2, R, tol);
            double m = std::min(residual(A2, ax), residual(E1, ax));
            if (m > best) {
                best = m;
                pick = ax;
            }
        }
        bool done = pick.has_value();
        if (done) H2 = perspective_collineation(A2, *pick, E1, E2);
        if (!done) fail("DegeneratePosition", "no admissible axis for the second perspectivity");
    }
    ProjectiveMap G = H2 * H1;
    // third: axis ell2 fixed pointwise; center XC2 ^ YD2
    HomPoint X = G(C), Y = G(D);
    ProjectiveMap H3;
    if (point_sep(X, C2) > tol.separation_rel || point_sep(Y, D2) > tol.separation_rel) {
        HomPoint o = meet(join(X, C2, tol), join(Y, D2, tol), tol);
        H3 = perspective_collineation(o, ell2, X, C2);
    }
    return H3 * G;
}

}  // namespace

// Tries every labeling of the pairs and keeps the best-conditioned product.
ProjectiveMap collineation_through_constructive(const std::array<PointPair, 4>& pr, const Tolerance& tol) {
    check_general(pr, tol);
    std::array<int, 4> idx{0, 1, 2, 3};
    std::optional<ProjectiveMap> best;
    double best_err = std::numeric_limits<double>::infinity();
    do {
        std::array<PointPair, 4> q{pr[idx[0]], pr[idx[1]], pr[idx[2]], pr[idx[3]]};
        try {
            ProjectiveMap h = constructive_once(q, tol);
            double err = 0;
            for (const auto& p : pr) err = std::max(err, point_sep(h(p.src), p.dst));
            if (err < best_err) {
                best_err = err;
                best = h;
            }
        } catch (const Error& e) {
            if (e.kind() != "DegeneratePosition" && e.kind() != "CoincidentPoints" && e.kind() != "CoincidentLines")
                throw;
        }
    } while (std::next_permutation(idx.begin(), idx.end()));
    if (!best) fail("DegeneratePosition", "no labeling admits the perspectivity chain");
    return *best;
}

ProjectiveMap range_extension(const std::array<PointPair, 3>& r, const HomPoint& x, const HomPoint& y,
                              const Tolerance& tol) {
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (point_sep(r[i].src, r[j].src) < tol.separation_rel ||
                point_sep(r[i].dst, r[j].dst) < tol.separation_rel)
                fail("DegeneratePosition", "range points must be distinct");
    HomLine ls = join(r[0].src, r[1].src, tol), ld = join(r[0].dst, r[1].dst, tol);
    if (!incident(r[2].src, ls, tol) || !incident(r[2].dst, ld, tol))
        fail("NotCollinear", "range points must be collinear");
    if (residual(x, ls) < tol.separation_rel || residual(y, ld) < tol.separation_rel)
        fail("DegeneratePosition", "extension point lies on the range line");
    auto coords = [](const HomPoint& b0, const HomPoint& b1, const HomPoint& p) {
        Eigen::Matrix<double, 3, 2> A;
        A.col(0) = b0.vec();
        A.col(1) = b1.vec();
        return Eigen::Vector2d(A.colPivHouseholderQr().solve(p.vec()));
    };
    Eigen::Vector2d s = coords(r[0].src, r[1].src, r[2].src);
    Eigen::Vector2d d = coords(r[0].dst, r[1].dst, r[2].dst);
    Mat3 S, T;
    S.col(0) = r[0].src.vec();
    S.col(1) = r[1].src.vec();
    S.col(2) = x.vec();
    T.col(0) = r[0].dst.vec() * (d[0] / s[0]);
    T.col(1) = r[1].dst.vec() * (d[1] / s[1]);
    T.col(2) = y.vec();
    return ProjectiveMap(Mat3(T * S.inverse()));
}

HomLine polar(const Polarity& pol, const HomPoint& p) { return HomLine(Vec3(pol.conic() * p.vec())); }

HomPoint pole(const Polarity& pol, const HomLine& l) {
    return HomPoint(Vec3(pol.conic().inverse() * l.vec()));
}

}  // namespace nk
