#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include <fmt/format.h>

#include "nkconf/systematic.hpp"
#include "support.hpp"

using namespace nk;

namespace {

Descriptor leaf(const std::string& text, int k) { return catalog_descriptor(parse_expr(text), k); }

}  // namespace

TEST_CASE("celestial symbol validation") {
    CHECK(celestial_validate(parse_celestial("10#(1,2;3,4;2,1;4,3)")).valid);
    CHECK(celestial_validate(parse_celestial("10#(2,1;4,3;1,2;3,4)")).valid);
    auto deg = celestial_validate(parse_celestial("12#(5,3;3,4;1,4)"));
    CHECK_FALSE(deg.valid);
    auto span = celestial_validate(parse_celestial("8#(4,1;1,4)"));
    CHECK_FALSE(span.valid);
    CHECK(span.reason.find("span") != std::string::npos);
    CHECK_THROWS_WITH_AS(celestial_construct(parse_celestial("10#(2,1;3,1)")), doctest::Contains("InvalidSymbol"),
                         Error);
}

TEST_CASE("celestial 10#(2,1;4,3;1,2;3,4) is a (40_4) under brute force") {
    auto sym = parse_celestial("10#(2,1;4,3;1,2;3,4)");
    Configuration c = celestial_construct(sym);
    CHECK(c.points.size() == 40);
    CHECK(verify(c).passed);
    CHECK(brute_check(c, 4).ok);
}

TEST_CASE("celestial output is Z_m symmetric by index shift") {
    auto sym = parse_celestial("7#(3,1;2,3;1,2)");
    Configuration c = celestial_construct(sym);
    const int m = sym.m;
    const double a = 2 * std::numbers::pi / m;
    Mat3 R;
    R << std::cos(a), -std::sin(a), 0, std::sin(a), std::cos(a), 0, 0, 0, 1;
    Configuration r = apply_map(c, ProjectiveMap(R));
    auto shift = [m](int idx) { return (idx / m) * m + (idx % m + 1) % m; };
    for (std::size_t i = 0; i < c.points.size(); ++i)
        CHECK(point_sep(r.points[i], c.points[shift(static_cast<int>(i))]) < 1e-9);
    for (std::size_t i = 0; i < c.lines.size(); ++i)
        CHECK(line_sep(r.lines[i], c.lines[shift(static_cast<int>(i))]) < 1e-9);
    std::set<std::pair<int, int>> fl(c.flags.begin(), c.flags.end());
    for (auto [p, l] : c.flags) CHECK(fl.count({shift(p), shift(l)}) == 1);
    for (int j = 0; j < sym.h(); ++j) {
        int count = 0;
        for (std::size_t i = 0; i < c.points.size(); ++i) count += static_cast<int>(i) / m == j;
        CHECK(count == m);
    }
}

TEST_CASE("D4 and D5 realizations") {
    Configuration d4 = d4_construct(5);
    CHECK(d4.points.size() == 50);
    CHECK(verify(d4).passed);
    CHECK(brute_check(d4, 5).ok);
    Configuration d46 = d4_construct(6);
    CHECK(d46.points.size() == 5 * 2 * 6);
    CHECK(d46.lines.size() == 5 * 2 * 6);
    CHECK(verify(d46).passed);
    CHECK_THROWS_WITH_AS(d4_construct(4), doctest::Contains("ParameterOutOfRange"), Error);

    Configuration d5 = d5_construct(5);
    CHECK(d5.points.size() == 66);
    CHECK(verify(d5).passed);
    CHECK(brute_check(d5, 5).ok);
    CHECK_THROWS_WITH_AS(d5_construct(4), doctest::Contains("ParameterOutOfRange"), Error);
    auto pr = detect_pencils(d5_construct(5, true));
    CHECK(pr.p == 1);
    CHECK(pr.q == 1);
}

TEST_CASE("D4 and D5 ideal points and diameters have degree 5") {
    for (const Configuration& c : {d4_construct(5), d5_construct(5), d4_construct(7)}) {
        auto rep = verify(c);
        REQUIRE(rep.passed);
        for (std::size_t i = 0; i < c.points.size(); ++i)
            if (c.points[i].ideal()) CHECK(rep.point_degree[i] == 5);
        for (std::size_t i = 0; i < c.lines.size(); ++i)
            if (!c.lines[i].ideal() && std::abs(c.lines[i].c) < 1e-12) CHECK(rep.line_degree[i] == 5);
    }
}

TEST_CASE("realized families match the catalog counts") {
    CHECK(d4_construct(5).points.size() == static_cast<std::size_t>(leaf("(D4 5)", 5).n));
    CHECK(d5_construct(5).points.size() == static_cast<std::size_t>(leaf("(D5 5)", 5).n));
    CHECK(nprime_construct().points.size() == static_cast<std::size_t>(leaf("(Nprime9)", 5).n));
    auto pr4 = detect_pencils(d4_construct(5, true));
    CHECK(pr4.p == leaf("(D4 5)", 5).p);
    CHECK(pr4.q == leaf("(D4 5)", 5).q);
}

TEST_CASE("N'(9) realization") {
    NprimeChoice used;
    Configuration c = nprime_construct(std::nullopt, &used);
    CHECK(c.points.size() == 54);
    CHECK(verify(c).passed);
    CHECK(brute_check(c, 5).ok);
    CHECK(used.d >= 0);
    CHECK_THROWS_WITH_AS(nprime_construct(6), doctest::Contains("CircleLineMiss"), Error);
}

TEST_CASE("catalog descriptors") {
    auto a10 = leaf("(A 10)", 5);
    CHECK(a10.n == 80);
    CHECK(a10.p == 4);
    CHECK(a10.q == 4);
    CHECK(a10.central_sym);
    auto mc = catalog_descriptor(Expr::list({Expr::sym("MC"), Expr::str("11#(3,2,1)(4,5)")}), 6);
    CHECK(mc.n == 110);
    CHECK(mc.p == 10);
    CHECK(mc.q == 0);
    CHECK_THROWS_WITH_AS(leaf("(N 3 2 9)", 5), doctest::Contains("3 ∤ s"), Error);
    CHECK_THROWS_WITH_AS(leaf("(MC 12)", 6), doctest::Contains("m = 12"), Error);
    CHECK(leaf("(N 2 6 2)", 5).n == 48);
    CHECK(leaf("(N 2 6 2)", 5).central_sym);
}

TEST_CASE("catalog arithmetic at validity boundaries") {
    for (long long s : {4, 5, 7, 8}) CHECK(leaf(fmt::format("(A {})", 2 * s), 6).n == 32 * s);
    for (long long s : {4, 5, 7}) CHECK(leaf(fmt::format("(A {})", 2 * s), 5).n == 16 * s);
    CHECK_THROWS_AS(leaf("(A 12)", 5), Error);
    CHECK_THROWS_AS(leaf("(A 6)", 5), Error);
    CHECK(leaf("(A 7)", 5).n == 56);
    CHECK(leaf("(N 2 6 2)", 5).n == 24 * 2);
    CHECK_THROWS_AS(leaf("(N 2 6 1)", 5), Error);
    CHECK(leaf("(N 3 3 3)", 5).n == 27 * 3);
    CHECK(leaf("(N 3 3 5)", 5).n == 27 * 5);
    CHECK_THROWS_AS(leaf("(N 3 3 4)", 5), Error);
    CHECK(leaf("(N 3 2 5)", 5).n == 18 * 5);
    CHECK_THROWS_AS(leaf("(N 3 2 4)", 5), Error);
    CHECK(leaf("(MC 11)", 6).n == 110);
    CHECK(leaf("(MC 13)", 6).n == 130);
    CHECK_THROWS_AS(leaf("(MC 10)", 6), Error);
    CHECK(leaf("(D4 5)", 5).n == 50);
    CHECK(leaf("(D5 5)", 5).n == 66);
    for (long long n : {96, 120, 192}) CHECK(leaf(fmt::format("(sporadic {})", n), 6).n == n);
}
