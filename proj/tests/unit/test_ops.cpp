#include <doctest.h>

#include "nkconf/ops.hpp"
#include "nkconf/systematic.hpp"
#include "support.hpp"

using namespace nk;

namespace {

Descriptor D(long long n, int k, int p, int q, bool flex = false, bool central = false) {
    Descriptor d;
    d.n = n;
    d.k = k;
    d.p = p;
    d.q = q;
    d.flexible = flex;
    d.central_sym = central;
    d.expr = Expr::list({Expr::sym("fixture"), Expr::str("x")});
    return d;
}

Descriptor observed(const Configuration& c) {
    auto pr = detect_pencils(c);
    Descriptor d = D(static_cast<long long>(c.points.size()), c.k, pr.p, pr.q, c.meta.flexible, c.meta.central_symmetry);
    return d;
}

void same_symbol(const Configuration& out, const Descriptor& predicted) {
    REQUIRE(verify(out).passed);
    CHECK(brute_check(out, predicted.k).ok);
    auto o = observed(out);
    CHECK(o.n == predicted.n);
    CHECK(o.k == predicted.k);
    CHECK(o.p == predicted.p);
    CHECK(o.q == predicted.q);
}

}  // namespace

TEST_CASE("symbolic AR") {
    auto r = sym_AR(D(18, 4, 0, 0), 5);
    CHECK(r.n == 108);
    CHECK(r.p == 18);
    CHECK(r.q == 0);
    CHECK(r.flexible);
    CHECK(sym_AR(D(48, 5, 2, 2), 6).n == 336);
    CHECK(sym_AR(D(48, 5, 2, 2), 6).p == 48);
    CHECK_THROWS_WITH_AS(sym_AR(D(18, 4, 0, 0), 6), doctest::Contains("DegreeMismatch"), Error);
}

TEST_CASE("symbolic AS") {
    CHECK(sym_AS(D(24, 4, 2, 2), 1, 1).n == 3 * 24 + 2);
    CHECK(sym_AS(D(24, 4, 2, 2), 1, 1).n == 74);
    CHECK_THROWS_WITH_AS(sym_AS(D(24, 4, 2, 2), 0, 0), doctest::Contains("NoLineRemoved"), Error);
    CHECK_THROWS_WITH_AS(sym_AS(D(24, 4, 2, 2), 3, 0), doctest::Contains("PencilExceeded"), Error);
    auto r = sym_AS(D(48, 5, 2, 2), 1, 0);
    CHECK(r.n == 4 * 48 + 1);
    CHECK(r.p == 8);
    CHECK(r.q == 4);
}

TEST_CASE("symbolic PS") {
    auto r = sym_PS(D(21, 4, 3, 0));
    CHECK(r.n == 84);
    CHECK(r.p == 12);
    auto s = sym_PS(D(48, 5, 2, 2));
    CHECK(s.n == 240);
    CHECK(s.p == 10);
    CHECK(s.q == 10);
    CHECK(sym_PS(D(60, 5, 0, 0)).p == 5);
}

TEST_CASE("symbolic DU") {
    CHECK(sym_DU_flex(D(10, 3, 1, 1), D(9, 3, 1, 1, true)).n == 18);
    CHECK_THROWS_WITH_AS(sym_DU_flex(D(10, 3, 1, 1), D(9, 3, 1, 1)), doctest::Contains("NotFlexible"), Error);
    CHECK_THROWS_WITH_AS(sym_DU_flex(D(10, 3, 1, 1), D(21, 4, 1, 1, true)), doctest::Contains("DegreeMismatch"),
                         Error);
    auto f = sym_DU_flex(D(60, 5, 4, 1), D(70, 5, 3, 2, true));
    CHECK(f.p == 4);
    CHECK(f.q == 3);
    CHECK(sym_DUt(D(9, 3, 1, 1), 3).n == 33);
    CHECK(sym_DUt(D(50, 5, 1, 1), 1).n == 99);
    CHECK_THROWS_WITH_AS(sym_DUt(D(9, 3, 1, 1), 10), doctest::Contains("BadT"), Error);
}

TEST_CASE("symbolic DU2") {
    auto r = sym_DU2(D(48, 5, 2, 2, false, true), D(18, 4, 0, 0));
    CHECK(r.n == 154);
    CHECK(r.p == 16);
    CHECK(r.q == 2);
    CHECK(sym_DU2(D(200, 6, 20, 0, false, true), D(60, 5, 1, 1)).n == 618);
    CHECK_THROWS_WITH_AS(sym_DU2(D(48, 5, 2, 2), D(18, 4, 0, 0)), doctest::Contains("NoCentralSymmetry"), Error);
    CHECK_THROWS_WITH_AS(sym_DU2(D(48, 5, 2, 2, false, true), D(18, 3, 0, 0)), doctest::Contains("DegreeMismatch"),
                         Error);
}

TEST_CASE("evaluate re-derives n bottom-up") {
    CHECK(evaluate(parse_expr("(DU 1 (PS (A 7)))"), 5).n == 2 * (5 * 56) - 1);
    CHECK(evaluate(parse_expr("(AR (ground 18))"), 5).n == 108);
    CHECK(evaluate(parse_expr("(DU2 (N 2 6 2) (AR (ground 18)))"), 5).n == 154);
    CHECK(evaluate(parse_expr("(AS 1 1 (N 2 6 2))"), 5).n == 4 * 48 + 2);
}

TEST_CASE("geo_AR on the (21_4) fixture") {
    Configuration c = load_json_file(fixture("celestial_21_4.json"));
    Configuration out = geo_AR_auto(c, 5, 0);
    auto pred = sym_AR(observed(c), 5);
    same_symbol(out, pred);
    CHECK(out.points.size() == 126);
    // the 21 new lines are parallel and each holds the five copies of one point
    auto lines_of = out.points_on_lines();
    REQUIRE(out.meta.flexible_lines.size() == 21);
    const HomLine& l0 = out.lines[out.meta.flexible_lines[0]];
    for (int l : out.meta.flexible_lines) {
        const HomLine& m = out.lines[l];
        CHECK(std::abs(l0.a * m.b - l0.b * m.a) < 1e-9);
        int copies = 0;
        for (int p : lines_of[l]) copies += p < 5 * 21;
        CHECK(copies == 5);
    }
    CHECK(to_json(geo_AR_auto(c, 5, 0)) == to_json(out));
}

TEST_CASE("geo_AR errors") {
    Configuration c = load_json_file(fixture("celestial_21_4.json"));
    HomLine axis(0, 1, 5);
    CHECK_THROWS_WITH_AS(geo_AR(c, 5, axis, {2.0, 2.0, 3.0, -1.0}), doctest::Contains("DegenerateRatios"), Error);
    HomLine through = join(c.points[0], HomPoint(1, 0, 0));
    CHECK_THROWS_WITH_AS(geo_AR(c, 5, through, {2.0, 2.5, 3.0, -1.0}), doctest::Contains("AxisHitsPoint"), Error);
    CHECK_THROWS_WITH_AS(geo_AR(c, 6, axis, {2.0, 2.5, 3.0, -1.0, 4.0}), doctest::Contains("DegreeMismatch"), Error);
}

TEST_CASE("geo_PS on the (21_4) fixture gives (84_4) with a 12-line pencil") {
    Configuration c = load_json_file(fixture("celestial_21_4.json"));
    Configuration out = geo_PS_auto(c, 0, 0);
    same_symbol(out, sym_PS(observed(c)));
    CHECK(detect_pencils(out).p == 12);
    const HomLine& l = c.lines[1];
    CHECK_THROWS_WITH_AS(geo_PS(c, 0, {{l.b, -l.a}, {2 * l.b, -2 * l.a}, {3 * l.b, -3 * l.a}}),
                         doctest::Contains("BadDirection"), Error);
}

TEST_CASE("geo_AS on the (24_4) fixture gives (74_4)") {
    Configuration c = load_json_file(fixture("celestial_24_4.json"));
    auto pr = detect_pencils(c);
    Configuration out = geo_AS(c, pr.pencil1, pr.pencil2, 1, 1, 0);
    same_symbol(out, sym_AS(observed(c), 1, 1));
    CHECK(out.points.size() == 74);
    // one new point and k new lines per removed line
    CHECK(out.points.size() == 3 * c.points.size() + 2);
    CHECK(out.meta.flexible_lines.size() == 2 * 4);
    auto both = pr.pencil1;
    both.insert(both.end(), pr.pencil2.begin(), pr.pencil2.end());
    CHECK_THROWS_WITH_AS(geo_AS(c, both, pr.pencil2, 1, 1, 0), doctest::Contains("PencilsNotIndependent"), Error);
}

TEST_CASE("geo_DU of cyclic (10_3) and Pappus (9_3)") {
    Configuration C = load_json_file(fixture("cyclic_10_3.json"));
    Configuration P = load_json_file(fixture("pappus_9_3.json"));
    Configuration flex = geo_DU(C, P, 0, 0, DuMode::Flexible, 0);
    same_symbol(flex, sym_DU_flex(observed(C), observed(P)));
    CHECK(flex.points.size() == 18);
    Configuration col = geo_DU(C, P, 0, 0, DuMode::Collineation, 0);
    REQUIRE(verify(col).passed);
    CHECK(col.points.size() == flex.points.size());
    CHECK(col.lines.size() == flex.lines.size());
    Configuration rigid = P;
    rigid.meta.flexible = false;
    CHECK_THROWS_WITH_AS(geo_DU(C, rigid, 0, 0, DuMode::Flexible, 0), doctest::Contains("ModeUnavailable"), Error);
}

TEST_CASE("geo_DUt on the non-Pappus (9_3)") {
    Configuration c = load_json_file(fixture("nonpappus_9_3.json"));
    Polarity pol{HomPoint(0.137, 0.291, 1), 1.0};
    Configuration one = geo_DUt(c, {0}, pol, 0);
    same_symbol(one, sym_DUt(observed(c), 1));
    CHECK(one.points.size() == 17);
    Configuration three = geo_DUt(c, {0, 1, 2}, pol, 0);
    same_symbol(three, sym_DUt(observed(c), 3));
    CHECK(three.points.size() == 33);
    CHECK_THROWS_WITH_AS(geo_DUt(c, {}, pol, 0), doctest::Contains("BadT"), Error);
}

TEST_CASE("geo_DU2 of the symmetric (12_3) and a quadrilateral") {
    Configuration C = load_json_file(fixture("symmetric_12_3.json"));
    Configuration Q = quadrilateral(HomPoint(0, 0, 1), 1.0, 0.0, 0.3, 0.8);
    Descriptor q = D(4, 2, 0, 0);
    Configuration out = geo_DU2(C, Q, *C.meta.center, 0, 0, 2, 0);
    same_symbol(out, sym_DU2(observed(C), q));
    CHECK(out.points.size() == 26);
    CHECK(out.points.size() == C.points.size() + 4 * Q.points.size() - 2);
    Configuration asym = C;
    asym.meta.central_symmetry = false;
    CHECK_THROWS_WITH_AS(geo_DU2(asym, Q, *C.meta.center, 0, 0, 2, 0), doctest::Contains("SymmetryViolated"), Error);
}

TEST_CASE("geometric ops are deterministic under a seed") {
    Configuration c = load_json_file(fixture("nonpappus_9_3.json"));
    Polarity pol{HomPoint(0.137, 0.291, 1), 1.0};
    CHECK(to_json(geo_DUt(c, {0, 1, 2}, pol, 5)) == to_json(geo_DUt(c, {0, 1, 2}, pol, 5)));
    Configuration f = load_json_file(fixture("celestial_21_4.json"));
    CHECK(to_json(geo_PS_auto(f, 0, 9)) == to_json(geo_PS_auto(f, 0, 9)));
}
