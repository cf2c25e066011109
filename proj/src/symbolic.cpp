#include <algorithm>
#include <array>

#include <fmt/format.h>

#include "nkconf/ops.hpp"
#include "nkconf/systematic.hpp"

namespace nk {

namespace {

Expr node(const char* tag, std::vector<Expr> args) {
    std::vector<Expr> xs{Expr::sym(tag)};
    for (auto& a : args) xs.push_back(std::move(a));
    return Expr::list(std::move(xs));
}

}  // namespace

Descriptor sym_AR(const Descriptor& d, int k) {
    if (d.k != k - 1)
        fail("DegreeMismatch", fmt::format("AR to degree {} needs a {}-configuration, got k = {}", k, k - 1, d.k));
    Descriptor r;
    r.n = (k + 1) * d.n;
    r.k = k;
    r.p = static_cast<int>(d.n);
    r.q = 0;
    r.flexible = true;
    r.expr = node("AR", {d.expr});
    return r;
}

Descriptor sym_AS(const Descriptor& d, int r_p, int r_q) {
    if (r_p < 1) fail("NoLineRemoved", "AS removes at least one line of the first pencil (r_p >= 1)");
    if (r_q < 0) fail("NoLineRemoved", "r_q must be non-negative");
    if (r_p > d.p || r_q > d.q)
        fail("PencilExceeded", fmt::format("removal ({},{}) exceeds pencils ({},{})", r_p, r_q, d.p, d.q));
    const int k = d.k;
    std::array<int, 3> v{(k - 1) * (d.p - r_p), (k - 1) * (d.q - r_q), 1};
    std::sort(v.begin(), v.end(), std::greater<>());
    Descriptor r;
    r.n = (k - 1) * d.n + r_p + r_q;
    r.k = k;
    r.p = v[0];
    r.q = v[1];
    r.flexible = true;
    r.expr = node("AS", {Expr::integer(r_p), Expr::integer(r_q), d.expr});
    return r;
}

Descriptor sym_PS(const Descriptor& d) {
    if (d.n < 1) fail("BadDescriptor", "PS needs n >= 1");
    Descriptor r;
    r.n = d.k * d.n;
    r.k = d.k;
    r.p = std::max(d.k * d.p, d.k);
    r.q = d.k * d.q;
    r.flexible = true;
    r.expr = node("PS", {d.expr});
    return r;
}

Descriptor sym_DU_flex(const Descriptor& d1, const Descriptor& d2) {
    if (d1.k != d2.k) fail("DegreeMismatch", "DU needs equal degrees");
    if (!d2.flexible) fail("NotFlexible", "second DU argument must be line-flexible");
    std::array<int, 4> v{d1.p, d1.q, d2.p, d2.q};
    std::sort(v.begin(), v.end(), std::greater<>());
    Descriptor r;
    r.n = d1.n + d2.n - 1;
    r.k = d1.k;
    r.p = v[0];
    r.q = v[1];
    r.expr = node("DUflex", {d1.expr, d2.expr});
    return r;
}

Descriptor sym_DUt(const Descriptor& d, long long t) {
    if (t < 1 || t > d.n) fail("BadT", fmt::format("DU(t) needs 1 <= t <= n = {} (got {})", d.n, t));
    Descriptor r;
    r.n = (t + 1) * d.n - t;
    r.k = d.k;
    r.p = d.p;
    r.q = d.q;
    r.expr = node("DU", {Expr::integer(t), d.expr});
    return r;
}

Descriptor sym_DU2(const Descriptor& dC, const Descriptor& dD) {
    if (!dC.central_sym) fail("NoCentralSymmetry", "DU2 needs a centrally symmetric first argument");
    if (dD.k != dC.k - 1) fail("DegreeMismatch", "DU2 needs D of degree k - 1");
    const int k = dC.k;
    Descriptor r;
    r.n = dC.n + (k + 1) * dD.n - 2;
    r.k = k;
    int a = static_cast<int>(dD.n) - 2, b = std::max(dC.p, dC.q);
    r.p = std::max(a, b);
    r.q = std::min(a, b);
    r.expr = node("DU2", {dC.expr, node("AR", {dD.expr})});
    return r;
}

Descriptor evaluate(const Expr& e, int k) {
    const std::string& tag = e.head();
    if (tag == "AR") return sym_AR(evaluate(e.arg(0), k - 1), k);
    if (tag == "AS")
        return sym_AS(evaluate(e.arg(2), k), static_cast<int>(e.int_arg(0)), static_cast<int>(e.int_arg(1)));
    if (tag == "PS") return sym_PS(evaluate(e.arg(0), k));
    if (tag == "DU") return sym_DUt(evaluate(e.arg(1), k), e.int_arg(0));
    if (tag == "DUflex") return sym_DU_flex(evaluate(e.arg(0), k), evaluate(e.arg(1), k));
    if (tag == "DU2") {
        const Expr& ar = e.arg(1);
        if (!ar.is_list() || ar.head() != "AR") fail("BadExpr", "DU2 expects (DU2 C (AR D))");
        return sym_DU2(evaluate(e.arg(0), k), evaluate(ar.arg(0), k - 1));
    }
    if (tag == "project") {
        Descriptor d = evaluate(e.arg(0), k);
        d.expr = e;
        return d;
    }
    if (tag == "fixture") fail("BadExpr", "fixtures carry no arithmetic");
    return catalog_descriptor(e, k);
}

}  // namespace nk
