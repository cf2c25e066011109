#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nkconf/incidence.hpp"

inline std::string fixture(const std::string& name) { return std::string(NKCONF_FIXTURES) + "/" + name; }

// Brute-force incidence oracle: recomputes every point-line residual from raw
// coordinates and checks the (n_k) conditions without touching the library verifier.
struct Brute {
    bool ok = true;
    int n_points = 0, n_lines = 0;
    double max_flag_residual = 0;
    double min_unflagged_residual = 1e300;
    std::vector<int> pdeg, ldeg;
};

inline double raw_residual(const nk::HomPoint& p, const nk::HomLine& l) {
    double pn = std::sqrt(p.x * p.x + p.y * p.y + p.w * p.w);
    double ln = std::sqrt(l.a * l.a + l.b * l.b + l.c * l.c);
    return std::abs(p.x * l.a + p.y * l.b + p.w * l.c) / (pn * ln);
}

inline Brute brute_check(const nk::Configuration& c, int k, double inc = 1e-8, double sep = 1e-5) {
    Brute b;
    b.n_points = static_cast<int>(c.points.size());
    b.n_lines = static_cast<int>(c.lines.size());
    b.pdeg.assign(b.n_points, 0);
    b.ldeg.assign(b.n_lines, 0);
    std::vector<std::vector<char>> flagged(b.n_points, std::vector<char>(b.n_lines, 0));
    for (auto [p, l] : c.flags) {
        if (flagged[p][l]) b.ok = false;
        flagged[p][l] = 1;
        ++b.pdeg[p];
        ++b.ldeg[l];
    }
    for (int p = 0; p < b.n_points; ++p)
        for (int l = 0; l < b.n_lines; ++l) {
            double r = raw_residual(c.points[p], c.lines[l]);
            if (flagged[p][l])
                b.max_flag_residual = std::max(b.max_flag_residual, r);
            else
                b.min_unflagged_residual = std::min(b.min_unflagged_residual, r);
        }
    for (int d : b.pdeg) b.ok &= d == k;
    for (int d : b.ldeg) b.ok &= d == k;
    b.ok &= b.n_points == b.n_lines;
    b.ok &= b.max_flag_residual <= inc;
    b.ok &= b.min_unflagged_residual >= sep;
    return b;
}

// Direct 8x8 DLT solve for the homography with h33 = 1.
inline Eigen::Matrix3d dlt(const std::vector<Eigen::Vector2d>& src, const std::vector<Eigen::Vector2d>& dst) {
    Eigen::Matrix<double, 8, 8> A;
    Eigen::Matrix<double, 8, 1> rhs;
    for (int i = 0; i < 4; ++i) {
        double x = src[i].x(), y = src[i].y(), u = dst[i].x(), v = dst[i].y();
        A.row(2 * i) << x, y, 1, 0, 0, 0, -u * x, -u * y;
        A.row(2 * i + 1) << 0, 0, 0, x, y, 1, -v * x, -v * y;
        rhs(2 * i) = u;
        rhs(2 * i + 1) = v;
    }
    Eigen::Matrix<double, 8, 1> h = A.fullPivLu().solve(rhs);
    Eigen::Matrix3d H;
    H << h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), 1.0;
    return H;
}

inline Eigen::Vector2d apply_h(const Eigen::Matrix3d& H, const Eigen::Vector2d& p) {
    Eigen::Vector3d v = H * Eigen::Vector3d(p.x(), p.y(), 1.0);
    return {v.x() / v.z(), v.y() / v.z()};
}

// Same line up to scale.
inline bool same_line(const nk::HomLine& l, double a, double b, double c, double tol = 1e-9) {
    Eigen::Vector3d u(l.a, l.b, l.c), v(a, b, c);
    return u.normalized().cross(v.normalized()).norm() < tol;
}

inline bool same_point(const nk::HomPoint& p, double x, double y, double w, double tol = 1e-9) {
    Eigen::Vector3d u(p.x, p.y, p.w), v(x, y, w);
    return u.normalized().cross(v.normalized()).norm() < tol;
}

inline Eigen::Matrix3d random_projective(std::mt19937_64& g) {
    std::uniform_real_distribution<double> U(-1, 1);
    for (;;) {
        Eigen::Matrix3d M;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) M(i, j) = U(g);
        M += Eigen::Matrix3d::Identity() * 1.5;
        if (std::abs(M.determinant()) > 0.1) return M;
    }
}
