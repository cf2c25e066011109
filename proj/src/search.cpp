#include <algorithm>
#include <functional>

#include <fmt/format.h>
#include <json.hpp>

#include "nkconf/errors.hpp"
#include "nkconf/ops.hpp"
#include "nkconf/search.hpp"
#include "nkconf/systematic.hpp"

namespace nk {

namespace {

Expr node(const char* tag, std::vector<Expr> args) {
    std::vector<Expr> xs{Expr::sym(tag)};
    for (auto& a : args) xs.push_back(std::move(a));
    return Expr::list(std::move(xs));
}

struct Cand {
    long long n;
    int p, q;
    bool flexible, central;
};

// (p + q, flexible) ordering; 1 = a better, -1 = b better, 0 = tie
int compare_rank(const Cand& a, const Descriptor& b) {
    auto ka = std::make_pair(a.p + a.q, a.flexible ? 1 : 0);
    auto kb = std::make_pair(b.p + b.q, b.flexible ? 1 : 0);
    return ka > kb ? 1 : (ka < kb ? -1 : 0);
}

bool place(std::optional<Descriptor>& slot, const Cand& c, const std::function<Expr()>& make, bool tiebreak) {
    bool fresh = !slot.has_value();
    bool take = fresh;
    std::optional<Expr> built;
    if (!fresh) {
        int r = compare_rank(c, *slot);
        if (r > 0)
            take = true;
        else if (r == 0 && tiebreak) {
            built = make();
            take = *built < slot->expr;
        }
    }
    if (take) {
        Descriptor d;
        d.n = c.n;
        d.k = 0;
        d.p = c.p;
        d.q = c.q;
        d.flexible = c.flexible;
        d.central_sym = c.central;
        d.expr = built ? std::move(*built) : make();
        slot = std::move(d);
    }
    return fresh;
}

bool offer_lazy(SearchState& s, const Cand& c, const std::function<Expr()>& make) {
    if (c.n < 1 || c.n > s.n_max) return false;
    bool fresh = place(s.achieved[c.n], c, make, s.expr_tiebreak);
    s.achieved[c.n]->k = s.k;
    if (c.flexible) {
        std::optional<Descriptor> slot;
        auto it = s.flexible_pool.find(c.n);
        if (it != s.flexible_pool.end()) slot = it->second;
        place(slot, c, make, s.expr_tiebreak);
        slot->k = s.k;
        s.flexible_pool[c.n] = std::move(*slot);
    }
    return fresh;
}

}  // namespace

SearchState::SearchState(int k_, long long n_max_) : k(k_), n_max(n_max_), achieved(n_max_ + 1) {}

const Descriptor& SearchState::get(long long n) const {
    if (!has(n)) fail("Unreachable", fmt::format("({}_{}) is not reached by the search", n, k));
    return *achieved[n];
}

long long SearchState::count() const {
    long long c = 0;
    for (const auto& d : achieved) c += d.has_value();
    return c;
}

std::vector<Descriptor> SearchState::snapshot() const {
    std::vector<Descriptor> v;
    for (const auto& d : achieved)
        if (d) v.push_back(*d);
    return v;
}

bool SearchState::offer(const Descriptor& d) {
    return offer_lazy(*this, Cand{d.n, d.p, d.q, d.flexible, d.central_sym}, [&] { return d.expr; });
}

void SearchState::log(const std::string& stage, long long before) {
    long long now = count();
    stage_log.push_back({stage, now - before, now});
}

std::vector<Descriptor> four_config_ground(long long up_to) {
    std::vector<Descriptor> g;
    for (long long n = 18; n <= up_to; ++n) {
        if (!four_config_exists(n)) continue;
        g.push_back(catalog_descriptor(Expr::list({Expr::sym("ground"), Expr::integer(n)}), 4));
    }
    return g;
}

SearchState seed_systematic(int k, long long n_max, bool expr_tiebreak) {
    if (k != 5 && k != 6) fail("UnsupportedK", fmt::format("search supports k = 5 and k = 6 (got {})", k));
    SearchState s(k, n_max);
    s.expr_tiebreak = expr_tiebreak;
    for (const auto& d : catalog_all(k, n_max)) s.offer(d);
    s.log("seed_systematic", 0);
    return s;
}

void seed_AR(SearchState& s, const std::vector<Descriptor>& ground) {
    long long before = s.count();
    for (const auto& g : ground) {
        if (g.k != s.k - 1) continue;
        offer_lazy(s, Cand{(s.k + 1) * g.n, static_cast<int>(g.n), 0, true, false},
                   [&] { return node("AR", {g.expr}); });
    }
    s.log("AR", before);
}

void stage_PS(SearchState& s) {
    long long before = s.count();
    const int k = s.k;
    for (const auto& d : s.snapshot()) {
        if (k * d.n > s.n_max) continue;
        offer_lazy(s, Cand{k * d.n, std::max(k * d.p, k), k * d.q, true, false}, [&] { return node("PS", {d.expr}); });
    }
    s.log("PS", before);
}

void stage_DU(SearchState& s) {
    long long before = s.count();
    for (const auto& d : s.snapshot()) {
        for (long long t = 1; t <= s.t_max && t <= d.n; ++t) {
            long long n = (t + 1) * d.n - t;
            if (n > s.n_max) break;
            offer_lazy(s, Cand{n, d.p, d.q, false, false},
                       [&] { return node("DU", {Expr::integer(t), d.expr}); });
        }
    }
    s.log(fmt::format("DU(t<={})", s.t_max), before);
}

void stage_AS(SearchState& s) {
    long long before = s.count();
    const int k = s.k;
    for (const auto& d : s.snapshot()) {
        for (int rp = 1; rp <= d.p; ++rp) {
            if ((k - 1) * d.n + rp > s.n_max) break;
            for (int rq = 0; rq <= d.q; ++rq) {
                long long n = (k - 1) * d.n + rp + rq;
                if (n > s.n_max) break;
                std::array<int, 3> v{(k - 1) * (d.p - rp), (k - 1) * (d.q - rq), 1};
                std::sort(v.begin(), v.end(), std::greater<>());
                offer_lazy(s, Cand{n, v[0], v[1], true, false}, [&] {
                    return node("AS", {Expr::integer(rp), Expr::integer(rq), d.expr});
                });
            }
        }
    }
    s.log("AS", before);
}

namespace {

void run_stage(SearchState& s, const std::string& name) {
    if (name == "PS")
        stage_PS(s);
    else if (name == "DU")
        stage_DU(s);
    else if (name == "AS")
        stage_AS(s);
    else
        fail("BadStage", "unknown stage '" + name + "'");
}

}  // namespace

void run_closure(SearchState& s, const std::vector<std::string>& prefix, const std::vector<std::string>& loop) {
    for (const auto& st : prefix) run_stage(s, st);
    if (loop.empty()) return;
    for (;;) {
        long long before = s.count();
        for (const auto& st : loop) run_stage(s, st);
        if (s.count() == before) break;
    }
}

void pair_flexible_DU(SearchState& s) {
    long long before = s.count();
    std::vector<long long> missing;
    for (long long n = 1; n <= s.n_max; ++n)
        if (!s.has(n)) missing.push_back(n);
    const auto snap = s.snapshot();
    std::vector<std::pair<Cand, std::function<Expr()>>> found;
    for (long long n : missing) {
        for (const auto& c : snap) {
            auto it = s.flexible_pool.find(n - c.n + 1);
            if (it == s.flexible_pool.end()) continue;
            const Descriptor& d = it->second;
            std::array<int, 4> v{c.p, c.q, d.p, d.q};
            std::sort(v.begin(), v.end(), std::greater<>());
            found.emplace_back(Cand{n, v[0], v[1], false, false},
                               [&c, &d] { return node("DUflex", {c.expr, d.expr}); });
        }
    }
    for (auto& [cand, make] : found) offer_lazy(s, cand, make);
    s.log("DUflex", before);
}

const std::vector<Du2Entry>& du2_table(int k) {
    static const std::vector<Du2Entry> five{{182, 64, 20}, {172, 48, 21}, {154, 48, 18}};
    static const std::vector<Du2Entry> six{{618, 200, 60}, {586, 140, 64}, {566, 120, 64}, {548, 200, 50},
                                           {542, 96, 64},  {536, 160, 54}, {534, 200, 48}, {516, 140, 54},
                                           {514, 180, 48}, {494, 160, 48}, {474, 140, 48}, {472, 96, 54},
                                           {468, 120, 50}, {454, 120, 48}, {444, 96, 50}};
    if (k == 5) return five;
    if (k == 6) return six;
    fail("UnsupportedK", "DU2 table exists for k = 5 and k = 6");
}

namespace {

Descriptor central_input(const SearchState& s, long long n) {
    if (!s.has(n)) fail("MissingPrerequisite", fmt::format("DU2 needs ({}_{}) in the search state", n, s.k));
    if (s.get(n).central_sym) return s.get(n);
    for (const auto& d : catalog_all(s.k, n))
        if (d.n == n && d.central_sym) return d;
    fail("MissingPrerequisite", fmt::format("no centrally symmetric ({}_{}) is known", n, s.k));
}

Descriptor lower_input(const SearchState& s, long long m) {
    if (s.k == 5) {
        if (!four_config_exists(m)) fail("MissingPrerequisite", fmt::format("no ({}_4) configuration is known", m));
        return catalog_descriptor(Expr::list({Expr::sym("ground"), Expr::integer(m)}), 4);
    }
    if (!s.lower || !s.lower->has(m))
        fail("MissingPrerequisite", fmt::format("DU2 needs ({}_{}) from the lower search", m, s.k - 1));
    return s.lower->get(m);
}

}  // namespace

void apply_DU2_adhoc(SearchState& s) {
    long long before = s.count();
    for (const auto& e : du2_table(s.k)) {
        Descriptor r = sym_DU2(central_input(s, e.n_C), lower_input(s, e.n_D));
        if (r.n != e.n) fail("MissingPrerequisite", fmt::format("DU2 table entry {} evaluates to {}", e.n, r.n));
        r.k = s.k;
        s.offer(r);
    }
    s.log("DU2", before);
}

SearchState run_search(const SearchOptions& opt) {
    if (opt.k != 5 && opt.k != 6) fail("UnsupportedK", fmt::format("search supports k = 5 and k = 6 (got {})", opt.k));
    if (opt.n_max < 1) fail("BadParameter", "n_max must be positive");
    if (opt.k == 5) {
        SearchState s = seed_systematic(5, opt.n_max, opt.expr_tiebreak);
        s.t_max = opt.t_max;
        seed_AR(s, four_config_ground(opt.n_max / 6));
        run_closure(s, {"PS", "DU", "AS", "PS", "DU"}, {"PS", "DU", "AS"});
        if (opt.flex_du) pair_flexible_DU(s);
        if (opt.du2) apply_DU2_adhoc(s);
        return s;
    }
    SearchOptions lo = opt;
    lo.k = 5;
    lo.n_max = 1050;
    auto five = std::make_shared<SearchState>(run_search(lo));
    SearchState s = seed_systematic(6, opt.n_max, opt.expr_tiebreak);
    s.t_max = opt.t_max;
    s.lower = five;
    seed_AR(s, five->snapshot());
    run_closure(s, {}, {"PS", "DU", "AS"});
    if (opt.flex_du) pair_flexible_DU(s);
    if (opt.du2) apply_DU2_adhoc(s);
    return s;
}

long long search_floor(int k) { return k == 5 ? 48 : 96; }

std::vector<long long> missing_report(const SearchState& s, long long lo, long long hi) {
    std::vector<long long> m;
    for (long long n = lo; n <= hi; ++n)
        if (!s.has(n)) m.push_back(n);
    return m;
}

long long bound(const SearchState& s, long long lo, long long hi) {
    auto m = missing_report(s, lo, hi);
    return m.empty() ? lo : m.back() + 1;
}

Expr certificate(const SearchState& s, long long n) { return s.get(n).expr; }

AuditResult audit(const SearchState& s, long long lo, long long hi) {
    AuditResult a;
    for (long long n = lo; n <= std::min(hi, s.n_max); ++n) {
        if (!s.has(n)) continue;
        ++a.checked;
        const Descriptor& d = s.get(n);
        try {
            Descriptor e = evaluate(d.expr, s.k);
            if (e.n != n)
                a.failures.push_back(fmt::format("{}: {} evaluates to {}", n, d.expr.to_string(), e.n));
            else if (e.p != d.p || e.q != d.q || e.flexible != d.flexible)
                a.failures.push_back(fmt::format("{}: pencil data ({},{},{}) re-evaluates to ({},{},{})", n, d.p, d.q,
                                                 d.flexible, e.p, e.q, e.flexible));
        } catch (const Error& e) {
            a.failures.push_back(fmt::format("{}: {}", n, e.what()));
        }
    }
    return a;
}

IdentityCheck check_identity(const std::string& expr, int k, long long claimed) {
    IdentityCheck c;
    c.expr = expr;
    c.claimed = claimed;
    c.evaluated = evaluate(parse_expr(expr), k).n;
    return c;
}

std::string search_json(const SearchState& s, long long lo, long long hi, const AuditResult& a) {
    nlohmann::ordered_json j;
    j["k"] = s.k;
    j["n_max"] = s.n_max;
    j["range"] = {lo, hi};
    j["bound"] = bound(s, lo, hi);
    j["missing"] = missing_report(s, lo, hi);
    auto stages = nlohmann::ordered_json::array();
    for (const auto& r : s.stage_log) stages.push_back({{"stage", r.stage}, {"added", r.added}, {"total", r.total}});
    j["stage_log"] = stages;
    j["audit"] = {{"checked", a.checked}, {"failures", a.failures}};
    auto ach = nlohmann::ordered_json::array();
    for (const auto& d : s.achieved) {
        if (!d) continue;
        ach.push_back({{"n", d->n},
                       {"p", d->p},
                       {"q", d->q},
                       {"flexible", d->flexible},
                       {"central_sym", d->central_sym},
                       {"expr", d->expr.to_string()}});
    }
    j["achieved"] = ach;
    return j.dump(1) + "\n";
}

std::string search_summary(const SearchState& s, long long lo, long long hi, const AuditResult& a) {
    auto m = missing_report(s, lo, hi);
    std::string out = fmt::format("k = {}, n_max = {}\n", s.k, s.n_max);
    for (const auto& r : s.stage_log) out += fmt::format("  stage {:<12} +{:<6} total {}\n", r.stage, r.added, r.total);
    out += fmt::format("missing in [{}, {}]: {} values\n", lo, hi, m.size());
    std::string line;
    for (std::size_t i = 0; i < m.size(); ++i) line += (i ? ", " : "") + std::to_string(m[i]);
    out += "  {" + line + "}\n";
    out += fmt::format("bound: N_{} <= {}\n", s.k, bound(s, lo, hi));
    out += fmt::format("audit: {} checked, {} failures\n", a.checked, a.failures.size());
    return out;
}

}  // namespace nk
