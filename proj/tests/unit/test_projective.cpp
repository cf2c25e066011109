#include <doctest.h>

#include <limits>

#include "nkconf/projective.hpp"
#include "support.hpp"

using namespace nk;

TEST_CASE("join through two finite points and through an ideal point") {
    CHECK(same_line(join(HomPoint(0, 0, 1), HomPoint(1, 0, 1)), 0, 1, 0));
    CHECK(same_line(join(HomPoint(1, 0, 1), HomPoint(0, 1, 0)), 1, 0, -1));
    CHECK_THROWS_WITH_AS(join(HomPoint(1, 1, 1), HomPoint(1, 1, 1)), doctest::Contains("CoincidentPoints"), Error);
}

TEST_CASE("meet of axes, of parallels, of equal lines") {
    CHECK(same_point(meet(HomLine(1, 0, 0), HomLine(0, 1, 0)), 0, 0, 1));
    HomPoint m = meet(HomLine(0, 1, 0), HomLine(0, 1, -1));
    CHECK(m.ideal());
    CHECK(same_point(m, 1, 0, 0));
    CHECK_THROWS_WITH_AS(meet(HomLine(1, 0, 0), HomLine(1, 0, 0)), doctest::Contains("CoincidentLines"), Error);
}

TEST_CASE("incidence is a relative residual test") {
    Tolerance tol;
    CHECK(incident(HomPoint(1, 1, 1), HomLine(1, -1, 0), tol));
    CHECK_FALSE(incident(HomPoint(1, 1 + 2 * tol.incidence_rel, 1), HomLine(1, -1, 0), tol));
    CHECK(incident(HomPoint(1, 0, 0), HomLine(0, 1, -3), tol));
}

TEST_CASE("stored coordinates are normalized") {
    HomPoint p(-2, 4, -1);
    CHECK(std::max({std::abs(p.x), std::abs(p.y), std::abs(p.w)}) == doctest::Approx(1.0));
    CHECK(p.x > 0);
    CHECK_THROWS_AS(HomPoint(0, 0, 0), Error);
}

TEST_CASE("cross ratio examples") {
    const HomPoint inf(1, 0, 0);
    CHECK(cross_ratio(HomPoint(0, 0, 1), inf, HomPoint(1, 0, 1), HomPoint(-1, 0, 1)) == doctest::Approx(-1.0));
    // oracle: ((x1-x3)/(x2-x3)) * ((x2-x4)/(x1-x4))
    double x1 = 0, x2 = 1, x3 = 2, x4 = 3;
    double expect = ((x1 - x3) / (x2 - x3)) * ((x2 - x4) / (x1 - x4));
    CHECK(cross_ratio(HomPoint(x1, 0, 1), HomPoint(x2, 0, 1), HomPoint(x3, 0, 1), HomPoint(x4, 0, 1)) ==
          doctest::Approx(expect));
    CHECK(expect == doctest::Approx(4.0 / 3.0));
    CHECK_THROWS_WITH_AS(cross_ratio(HomPoint(0, 0, 1), HomPoint(0, 0, 1), HomPoint(1, 0, 1), HomPoint(2, 0, 1)),
                         doctest::Contains("RepeatedPoint"), Error);
    CHECK_THROWS_WITH_AS(cross_ratio(HomPoint(0, 0, 1), HomPoint(1, 0, 1), HomPoint(2, 0, 1), HomPoint(2, 1, 1)),
                         doctest::Contains("NotCollinear"), Error);
}

TEST_CASE("parametric affinity examples") {
    CHECK(parametric_affinity(2, -3, 0).matrix().isApprox(Mat3::Identity() * parametric_affinity(2, -3, 0).matrix()(2, 2)));
    HomPoint img = parametric_affinity(2, -3, 1)(HomPoint(90, 40, 1));
    CHECK(img.ex() == doctest::Approx(90 + 90.0 / 2));
    CHECK(img.ey() == doctest::Approx(40 - 40.0 / 3));
    CHECK(img.ey() == doctest::Approx(80.0 / 3));
    CHECK_THROWS_WITH_AS(parametric_affinity(0, 1, 1), doctest::Contains("ZeroAxisScale"), Error);
    CHECK_THROWS_WITH_AS(parametric_affinity(1, 2, -1), doctest::Contains("ZeroAxisScale"), Error);
    CHECK_THROWS_WITH_AS(parametric_affinity(2, 2, 1), doctest::Contains("EqualScales"), Error);
}

TEST_CASE("orbit line intercepts and inverse") {
    HomLine L = orbit_line(HomPoint(1, 1, 1), 2, 1);
    CHECK(incident(HomPoint(1, 1, 1), L));
    CHECK(incident(HomPoint(0.5, 0, 1), L));
    CHECK(incident(HomPoint(0, -1, 1), L));
    CHECK_THROWS_WITH_AS(orbit_line(HomPoint(0, 3, 1), 2, 1), doctest::Contains("PointOnAxis"), Error);

    // intercepts (2, 3): x/2 + y/3 = 1
    HomLine M(3, 2, -6);
    auto [a, b] = affinity_from_line(M, HomPoint(1, 1.5, 1));
    CHECK(a == doctest::Approx(-0.5));
    CHECK(b == doctest::Approx(0.5));
    HomLine back = orbit_line(HomPoint(1, 1.5, 1), a, b);
    CHECK(same_line(back, M.a, M.b, M.c));
    CHECK_THROWS_WITH_AS(affinity_from_line(HomLine(0, 1, 0), HomPoint(1, 0, 1)), doctest::Contains("BadLine"), Error);
    CHECK_THROWS_WITH_AS(affinity_from_line(M, HomPoint(1, 1, 1)), doctest::Contains("PointNotOnLine"), Error);
}

TEST_CASE("axial affinity examples") {
    ProjectiveMap s = axial_affinity(HomLine(0, 1, 0), HomPoint(1, 1, 1), HomPoint(1, 2, 1));
    Mat3 m = s.matrix() / s.matrix()(2, 2);
    Mat3 expect = Mat3::Identity();
    expect(1, 1) = 2;
    CHECK(m.isApprox(expect, 1e-12));
    ProjectiveMap id = axial_affinity(HomLine(0, 1, 0), HomPoint(1, 1, 1), HomPoint(1, 1, 1));
    CHECK((id.matrix() / id.matrix()(2, 2)).isApprox(Mat3::Identity(), 1e-12));
    CHECK_THROWS_WITH_AS(axial_affinity(HomLine(0, 1, 0), HomPoint(1, 0, 1), HomPoint(1, 2, 1)),
                         doctest::Contains("PointOnAxis"), Error);
    CHECK_THROWS_WITH_AS(axial_affinity(HomLine(0, 1, 0), HomPoint(1, 1, 1), HomPoint(2, 2, 1)),
                         doctest::Contains("NonPerpendicularPair"), Error);
}

TEST_CASE("axial components compose to the parametric affinity") {
    double a = 2, b = -3, t = 1;
    // stretch along x fixing the y-axis, stretch along y fixing the x-axis
    ProjectiveMap sx = axial_affinity(HomLine(1, 0, 0), HomPoint(1, 1, 1), HomPoint((a + t) / a, 1, 1));
    ProjectiveMap sy = axial_affinity(HomLine(0, 1, 0), HomPoint(1, 1, 1), HomPoint(1, (b + t) / b, 1));
    Mat3 A = parametric_affinity(a, b, t).matrix();
    A /= A(2, 2);
    Mat3 xy = (sx * sy).matrix(), yx = (sy * sx).matrix();
    CHECK((xy / xy(2, 2)).isApprox(A, 1e-12));
    CHECK((yx / yx(2, 2)).isApprox(A, 1e-12));
}

TEST_CASE("collineation through four pairs") {
    std::array<PointPair, 4> same{PointPair{HomPoint(0, 0, 1), HomPoint(0, 0, 1)},
                                  PointPair{HomPoint(1, 0, 1), HomPoint(1, 0, 1)},
                                  PointPair{HomPoint(0, 1, 1), HomPoint(0, 1, 1)},
                                  PointPair{HomPoint(1, 1, 1), HomPoint(1, 1, 1)}};
    Mat3 I = collineation_through(same).matrix();
    CHECK((I / I(2, 2)).isApprox(Mat3::Identity(), 1e-12));

    std::vector<Eigen::Vector2d> src{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    std::vector<Eigen::Vector2d> dst{{0.2, -0.1}, {2.1, 0.3}, {1.7, 1.9}, {-0.4, 1.2}};
    std::array<PointPair, 4> pairs;
    for (int i = 0; i < 4; ++i)
        pairs[i] = {HomPoint(src[i].x(), src[i].y(), 1), HomPoint(dst[i].x(), dst[i].y(), 1)};
    ProjectiveMap H = collineation_through(pairs);
    Eigen::Matrix3d oracle = dlt(src, dst);
    Mat3 h = H.matrix() / H.matrix()(2, 2);
    CHECK(h.isApprox(oracle, 1e-10));
    for (int i = 0; i < 4; ++i) {
        HomPoint img = H(pairs[i].src);
        CHECK(img.ex() == doctest::Approx(dst[i].x()));
        CHECK(img.ey() == doctest::Approx(dst[i].y()));
    }
    std::array<PointPair, 4> bad = pairs;
    bad[2].src = HomPoint(2, 0, 1);
    CHECK_THROWS_WITH_AS(collineation_through(bad), doctest::Contains("DegeneratePosition"), Error);
}

TEST_CASE("constructive collineation agrees with the linear solve") {
    std::mt19937_64 g(7);
    std::uniform_real_distribution<double> U(-1, 1);
    int agreed = 0;
    for (int trial = 0; trial < 200; ++trial) {
        std::array<PointPair, 4> pairs;
        std::vector<Eigen::Vector2d> src, dst;
        for (int i = 0; i < 4; ++i) {
            src.emplace_back(U(g), U(g));
            dst.emplace_back(U(g), U(g));
            pairs[i] = {HomPoint(src[i].x(), src[i].y(), 1), HomPoint(dst[i].x(), dst[i].y(), 1)};
        }
        try {
            Mat3 a = collineation_through(pairs).matrix();
            Mat3 b = collineation_through_constructive(pairs).matrix();
            a /= a.norm();
            b /= b.norm();
            if (a(0, 0) * b(0, 0) < 0) b = -b;
            CHECK((a - b).cwiseAbs().maxCoeff() < 1e-9);
            ++agreed;
        } catch (const Error& e) {
            CHECK(e.kind() == "DegeneratePosition");
        }
    }
    CHECK(agreed > 150);
}

TEST_CASE("range extension sends the range and the extra point") {
    std::array<PointPair, 3> r{PointPair{HomPoint(0, 0, 1), HomPoint(1, 1, 1)},
                               PointPair{HomPoint(1, 0, 1), HomPoint(2, 3, 1)},
                               PointPair{HomPoint(3, 0, 1), HomPoint(3.5, 6, 1)}};
    ProjectiveMap H = range_extension(r, HomPoint(0, 1, 1), HomPoint(-2, 5, 1));
    for (const auto& pr : r) CHECK(point_sep(H(pr.src), pr.dst) < 1e-9);
    CHECK(point_sep(H(HomPoint(0, 1, 1)), HomPoint(-2, 5, 1)) < 1e-9);
}

TEST_CASE("polarity examples") {
    Polarity pol;
    CHECK(same_line(polar(pol, HomPoint(2, 0, 1)), 1, 0, -0.5));
    CHECK(same_line(polar(pol, HomPoint(1, 0, 1)), 1, 0, -1));
    HomLine l = polar(pol, HomPoint(0, 0, 1));
    CHECK(l.ideal());
    CHECK(same_point(pole(pol, HomLine::ideal_line()), 0, 0, 1));
}

TEST_CASE("pole of a join is the meet of polars") {
    Polarity pol{HomPoint(0.3, -0.2, 1), 1.7};
    std::mt19937_64 g(3);
    std::uniform_real_distribution<double> U(-3, 3);
    for (int i = 0; i < 100; ++i) {
        HomPoint p(U(g), U(g), 1), q(U(g), U(g), 1);
        CHECK(point_sep(pole(pol, join(p, q)), meet(polar(pol, p), polar(pol, q))) < 1e-9);
    }
}

TEST_CASE("tolerance ordering is validated") {
    CHECK_NOTHROW(Tolerance{}.check());
    CHECK_THROWS_AS((Tolerance{1e-3, 1e-5}.check()), Error);
}

TEST_CASE("singular maps are rejected") {
    Mat3 m = Mat3::Zero();
    m(0, 0) = 1;
    m(1, 1) = 1;
    CHECK_THROWS_WITH_AS(ProjectiveMap{m}, doctest::Contains("SingularSystem"), Error);
}
