#include <algorithm>
#include <set>

#include <fmt/format.h>

#include "nkconf/systematic.hpp"

namespace nk {

std::string Descriptor::to_string() const {
    return fmt::format("({}_{}) p={} q={}{}{} {}", n, k, p, q, flexible ? " flexible" : "",
                       central_sym ? " central" : "", expr.to_string());
}

bool four_config_exists(long long n) { return n == 18 || n == 20 || n == 21 || n == 22 || n >= 24; }

namespace {

struct McRow {
    int m;
    MulticelestialSymbol sym;
    int p, q;
};

MulticelestialSymbol mc(int m, int t0, int t1, int t2, int s0, int s1) { return {m, {t0, t1, t2}, {s0, s1}}; }

// Table of maximal independent parallel pencils; rows past the end repeat the last one.
std::pair<int, int> mc_pencils(int m) {
    if (m % 2) {
        switch (m) {
            case 11: return {10, 0};
            case 13: return {10, 1};
            case 15: return {10, 1};
            case 17: return {10, 2};
            case 19: return {10, 4};
            default: return {10, 10};
        }
    }
    switch (m) {
        case 14: return {12, 0};
        case 16: return {12, 4};
        case 18: return {12, 4};
        case 20: return {20, 0};
        case 22: return {20, 0};
        case 24: return {20, 2};
        case 26: return {20, 2};
        case 28: return {20, 4};
        case 30: return {20, 2};
        case 32: return {20, 8};
        case 34: return {20, 4};
        case 36: return {20, 8};
        case 38: return {20, 8};
        default: return {20, 20};
    }
}

Descriptor make(long long n, int k, int p, int q, bool central, Expr e) {
    Descriptor d;
    d.n = n;
    d.k = k;
    d.p = p;
    d.q = q;
    d.central_sym = central;
    d.expr = std::move(e);
    return d;
}

[[noreturn]] void out_of_range(const std::string& why) { fail("OutOfRange", why); }

}  // namespace

MulticelestialSymbol multicelestial_default(int m) {
    if (m <= 15 || m == 17 || (m % 2 == 0 && m <= 14)) return mc(m, 3, 2, 1, 4, 5);
    if (m == 16) return mc(m, 5, 4, 2, 6, 7);
    if (m == 18) return mc(m, 5, 4, 1, 6, 7);
    return mc(m, 5, 3, 1, 7, 9);
}

Validity multicelestial_validate(const MulticelestialSymbol& sym) {
    if (sym.m < 11) return {false, "need m >= 11"};
    if (sym.m == 12) return {false, "m = 12 is excluded"};
    std::set<int> T(sym.t.begin(), sym.t.end()), S(sym.s.begin(), sym.s.end());
    for (int x : sym.t)
        if (x <= 0 || 2 * x >= sym.m) return {false, "need 0 < t_j < m/2"};
    for (int x : sym.s)
        if (x <= 0 || 2 * x >= sym.m) return {false, "need 0 < s_r < m/2"};
    if (T.size() != 3 || S.size() != 2) return {false, "spans must be distinct"};
    for (int x : S)
        if (T.count(x)) return {false, "S and T must be disjoint"};
    return {true, {}};
}

Descriptor catalog_descriptor(const Expr& leaf, int k) {
    const std::string& tag = leaf.head();
    auto nargs = leaf.nargs();
    if (tag == "A") {
        long long m = leaf.int_arg(0);
        if (k != 5 && k != 6) fail("DegreeMismatch", "A-series is catalogued for k = 5, 6");
        if (m < 7) out_of_range("A(m) needs m >= 7");
        if (m == 12) out_of_range("A(12) has extra incidences (m != 12)");
        bool even = m % 2 == 0;
        int p = even ? 4 : 2, q = even ? 4 : 2;
        if (k == 6 && m == 7) q = 1;
        return make((k == 5 ? 8 : 16) * m, k, p, q, even, leaf);
    }
    if (tag == "Aspecial") {
        if (leaf.int_arg(0) != 12 || k != 5) out_of_range("only the k = 5 special A(12) is catalogued");
        return make(96, 5, 4, 4, true, leaf);
    }
    if (tag == "D4" || tag == "D5") {
        if (k != 5) fail("DegreeMismatch", tag + " is a 5-configuration");
        long long l = leaf.int_arg(0);
        if (l < 5) out_of_range(tag + " needs l >= 5");
        return make(tag == "D4" ? 10 * l : 12 * l + 6, 5, 1, 1, false, leaf);
    }
    if (tag == "N") {
        if (k != 5) fail("DegreeMismatch", "nesting families are 5-configurations");
        if (nargs != 3) fail("BadExpr", "N takes three integers");
        long long h = leaf.int_arg(0), c = leaf.int_arg(1), s = leaf.int_arg(2);
        if (h == 2 && c == 6) {
            if (s < 2) out_of_range("N(2,6,s) needs s >= 2");
            return make(24 * s, 5, 2, 2, s == 2, leaf);
        }
        if (h == 3 && c == 2) {
            if (s % 3 == 0) out_of_range("N(3,2,s) needs 3 ∤ s");
            if (s < 5) out_of_range("N(3,2,s) needs s >= 5");
            int pq = s % 2 ? 6 : 4;
            return make(18 * s, 5, pq, pq, false, leaf);
        }
        if (h == 3 && c == 3) {
            if (s < 3 || s == 4) out_of_range("N(3,3,s) needs s >= 3, s != 4");
            int pq = s % 2 ? 3 : 4;
            return make(27 * s, 5, pq, pq, false, leaf);
        }
        out_of_range(fmt::format("no nesting family N({},{},s)", h, c));
    }
    if (tag == "Nprime9") {
        if (k != 5) fail("DegreeMismatch", "N'(9) is a 5-configuration");
        return make(54, 5, 3, 3, false, leaf);
    }
    if (tag == "MC") {
        if (k != 6) fail("DegreeMismatch", "multicelestial configurations are 6-configurations");
        MulticelestialSymbol sym = leaf.arg(0).kind == Expr::Kind::Int
                                       ? multicelestial_default(static_cast<int>(leaf.int_arg(0)))
                                       : parse_multicelestial(leaf.str_arg(0));
        auto v = multicelestial_validate(sym);
        if (!v.valid) out_of_range(v.reason);
        auto [p, q] = mc_pencils(sym.m);
        auto def = multicelestial_default(sym.m);
        if (def.t != sym.t || def.s != sym.s) p = q = 0;  // pencil data only known for the tabulated symbols
        return make(10LL * sym.m, 6, p, q, sym.m % 2 == 0, leaf);
    }
    if (tag == "sporadic") {
        long long n = leaf.int_arg(0);
        if (k != 6 || (n != 96 && n != 120 && n != 192)) out_of_range("sporadic 6-configurations are 96, 120, 192");
        return make(n, 6, 4, 4, true, leaf);
    }
    if (tag == "ground") {
        long long n = leaf.int_arg(0);
        if (k != 4) fail("DegreeMismatch", "ground entries are 4-configurations");
        if (!four_config_exists(n)) out_of_range(fmt::format("no ({}_4) configuration is known", n));
        return make(n, 4, 0, 0, false, leaf);
    }
    if (tag == "celestial") {
        if (k != 4) fail("DegreeMismatch", "celestial configurations are 4-configurations");
        CelestialSymbol sym = parse_celestial(leaf.str_arg(0));
        return make(static_cast<long long>(sym.m) * sym.h(), 4, 0, 0, false, leaf);
    }
    fail("BadExpr", "'" + tag + "' is not a catalog family");
}

std::vector<Descriptor> catalog_all(int k, long long n_max) {
    std::vector<Descriptor> out;
    auto add = [&](Expr e) {
        Descriptor d = catalog_descriptor(e, k);
        if (d.n <= n_max) out.push_back(std::move(d));
    };
    auto I = [](long long v) { return Expr::integer(v); };
    auto S = [](const char* s) { return Expr::sym(s); };
    if (k == 5) {
        for (long long m = 7; 8 * m <= n_max; ++m)
            if (m != 12) add(Expr::list({S("A"), I(m)}));
        for (long long l = 5; 10 * l <= n_max; ++l) add(Expr::list({S("D4"), I(l)}));
        for (long long l = 5; 12 * l + 6 <= n_max; ++l) add(Expr::list({S("D5"), I(l)}));
        for (long long s = 2; 24 * s <= n_max; ++s) add(Expr::list({S("N"), I(2), I(6), I(s)}));
        for (long long s = 5; 18 * s <= n_max; ++s)
            if (s % 3) add(Expr::list({S("N"), I(3), I(2), I(s)}));
        for (long long s = 3; 27 * s <= n_max; ++s)
            if (s != 4) add(Expr::list({S("N"), I(3), I(3), I(s)}));
        add(Expr::list({S("Nprime9")}));
        add(Expr::list({S("Aspecial"), I(12)}));
    } else if (k == 6) {
        for (long long m = 7; 16 * m <= n_max; ++m)
            if (m != 12) add(Expr::list({S("A"), I(m)}));
        for (long long m = 11; 10 * m <= n_max; ++m)
            if (m != 12) add(Expr::list({S("MC"), I(m)}));
        for (long long n : {96, 192, 120}) add(Expr::list({S("sporadic"), I(n)}));
    } else {
        fail("UnsupportedK", "catalog covers k = 5 and k = 6");
    }
    return out;
}

}  // namespace nk
