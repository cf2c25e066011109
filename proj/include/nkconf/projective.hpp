#pragma once

#include <array>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "nkconf/errors.hpp"

namespace nk {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

struct Tolerance {
    double incidence_rel = 1e-8;
    double separation_rel = 1e-5;

    void check() const;
};

// Scale so max-abs is 1 and the first nonzero entry is positive.
Vec3 normalize3(const Vec3& v);

struct HomPoint {
    double x = 0, y = 0, w = 1;

    HomPoint() = default;
    HomPoint(double x_, double y_, double w_ = 1.0);
    explicit HomPoint(const Vec3& v);

    Vec3 vec() const { return {x, y, w}; }
    bool ideal() const { return w == 0.0; }
    // Euclidean coordinates; only meaningful when finite.
    double ex() const { return x / w; }
    double ey() const { return y / w; }
};

struct HomLine {
    double a = 0, b = 0, c = 1;

    HomLine() = default;
    HomLine(double a_, double b_, double c_);
    explicit HomLine(const Vec3& v);

    Vec3 vec() const { return {a, b, c}; }
    bool ideal() const { return a == 0.0 && b == 0.0; }
    static HomLine ideal_line() { return {0, 0, 1}; }
};

// 3x3 matrix acting on point columns; lines go through the inverse transpose.
class ProjectiveMap {
public:
    ProjectiveMap();
    explicit ProjectiveMap(const Mat3& m);

    static ProjectiveMap identity() { return ProjectiveMap(); }

    const Mat3& matrix() const { return m_; }
    HomPoint operator()(const HomPoint& p) const;
    HomLine operator()(const HomLine& l) const;
    ProjectiveMap operator*(const ProjectiveMap& o) const;
    ProjectiveMap inverse() const;
    double det() const { return m_.determinant(); }

private:
    Mat3 m_;
    Mat3 inv_t_;
};

struct Polarity {
    HomPoint center{0, 0, 1};
    double radius = 1.0;

    Mat3 conic() const;
};

// Small vector helpers shared by the construction code.
double point_sep(const HomPoint& p, const HomPoint& q);
double line_sep(const HomLine& l, const HomLine& m);
double residual(const HomPoint& p, const HomLine& l);

HomLine join(const HomPoint& p, const HomPoint& q, const Tolerance& tol = {});
HomPoint meet(const HomLine& l1, const HomLine& l2, const Tolerance& tol = {});
bool incident(const HomPoint& p, const HomLine& l, const Tolerance& tol = {});

// (p1,p2;p3,p4); returns +inf when the denominator vanishes.
double cross_ratio(const HomPoint& p1, const HomPoint& p2, const HomPoint& p3,
                   const HomPoint& p4, const Tolerance& tol = {});

ProjectiveMap parametric_affinity(double a, double b, double t);
HomLine orbit_line(const HomPoint& p0, double a, double b);
std::pair<double, double> affinity_from_line(const HomLine& L, const HomPoint& p0,
                                             const Tolerance& tol = {});
ProjectiveMap axial_affinity(const HomLine& axis, const HomPoint& p, const HomPoint& p_image,
                             const Tolerance& tol = {});

struct PointPair {
    HomPoint src, dst;
};

// Four correspondences, no three collinear on either side.
ProjectiveMap collineation_through(const std::array<PointPair, 4>& pairs,
                                   const Tolerance& tol = {});
// Same map built from perspective collineations.
ProjectiveMap collineation_through_constructive(const std::array<PointPair, 4>& pairs,
                                                const Tolerance& tol = {});
// Perspective collineation with center c, axis ax, sending p to p_image.
ProjectiveMap perspective_collineation(const HomPoint& c, const HomLine& ax,
                                       const HomPoint& p, const HomPoint& p_image);

// Collineation extending the 1D projectivity fixed by three collinear pairs
// src_i -> dst_i, and sending off-line point x to off-line point y.
ProjectiveMap range_extension(const std::array<PointPair, 3>& range, const HomPoint& x,
                              const HomPoint& y, const Tolerance& tol = {});

HomLine polar(const Polarity& pol, const HomPoint& p);
HomPoint pole(const Polarity& pol, const HomLine& l);

}  // namespace nk
