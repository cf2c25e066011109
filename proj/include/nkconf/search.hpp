#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nkconf/descriptor.hpp"

namespace nk {

struct StageRecord {
    std::string stage;
    long long added = 0;  // new n values
    long long total = 0;  // achieved n values after the stage
};

struct SearchState {
    int k = 5;
    long long n_max = 0;
    int t_max = 11;
    bool expr_tiebreak = true;
    std::vector<std::optional<Descriptor>> achieved;  // indexed by n
    std::map<long long, Descriptor> flexible_pool;
    std::vector<StageRecord> stage_log;
    std::shared_ptr<const SearchState> lower;  // the (k-1) run feeding AR and DU2

    SearchState() = default;
    SearchState(int k, long long n_max);

    bool has(long long n) const { return n >= 0 && n <= n_max && achieved[n].has_value(); }
    const Descriptor& get(long long n) const;
    long long count() const;
    std::vector<Descriptor> snapshot() const;
    // Inserts under the tie-break rule; returns true when n is new.
    bool offer(const Descriptor& d);
    void log(const std::string& stage, long long before);
};

struct SearchOptions {
    int k = 5;
    long long n_max = 576;
    int t_max = 11;
    bool du2 = true;
    bool flex_du = true;
    bool expr_tiebreak = true;
};

// The (n_4) existence set {18, 20, 21, 22} and every n >= 24, up to up_to.
std::vector<Descriptor> four_config_ground(long long up_to);

SearchState seed_systematic(int k, long long n_max, bool expr_tiebreak = true);
void seed_AR(SearchState& s, const std::vector<Descriptor>& ground);

void stage_PS(SearchState& s);
void stage_DU(SearchState& s);
void stage_AS(SearchState& s);
// Applies the prefix stages once, then the loop block until no new n appears.
void run_closure(SearchState& s, const std::vector<std::string>& prefix, const std::vector<std::string>& loop);
void pair_flexible_DU(SearchState& s);

struct Du2Entry {
    long long n, n_C, n_D;
};
const std::vector<Du2Entry>& du2_table(int k);
void apply_DU2_adhoc(SearchState& s);

SearchState run_search(const SearchOptions& opt);

// Default missing-range floor: 48 for k = 5, 96 for k = 6.
long long search_floor(int k);
std::vector<long long> missing_report(const SearchState& s, long long lo, long long hi);
long long bound(const SearchState& s, long long lo, long long hi);

Expr certificate(const SearchState& s, long long n);

struct AuditResult {
    long long checked = 0;
    std::vector<std::string> failures;
    bool ok() const { return failures.empty(); }
};
// Re-evaluates every achieved expression in [lo, hi] bottom-up.
AuditResult audit(const SearchState& s, long long lo, long long hi);

struct IdentityCheck {
    std::string expr;
    long long claimed = 0;
    long long evaluated = 0;
    bool consistent() const { return claimed == evaluated; }
};
IdentityCheck check_identity(const std::string& expr, int k, long long claimed);

std::string search_json(const SearchState& s, long long lo, long long hi, const AuditResult& a);
std::string search_summary(const SearchState& s, long long lo, long long hi, const AuditResult& a);

}  // namespace nk
