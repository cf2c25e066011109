#pragma once

#include <string>
#include <variant>
#include <vector>

namespace nk {

// Construction expression: an s-expression whose head names a family leaf
// or a calculus operator, e.g. (DU 1 (PS (A 7))).
struct Expr {
    enum class Kind { List, Symbol, Int, String };

    Kind kind = Kind::List;
    std::string text;  // symbol name or string payload
    long long num = 0;
    std::vector<Expr> items;

    static Expr sym(std::string s);
    static Expr integer(long long v);
    static Expr str(std::string s);
    static Expr list(std::vector<Expr> xs);

    bool is_list() const { return kind == Kind::List; }
    const std::string& head() const;  // symbol at position 0 of a list
    const Expr& arg(std::size_t i) const;  // items[i + 1]
    long long int_arg(std::size_t i) const;
    const std::string& str_arg(std::size_t i) const;
    std::size_t nargs() const { return items.empty() ? 0 : items.size() - 1; }

    std::string to_string() const;
    // node count, used for the tie-break ordering
    std::size_t size() const;

    bool operator==(const Expr& o) const;
    bool operator<(const Expr& o) const;
};

// Leaf tags: A, Aspecial, D4, D5, N, Nprime9, MC, sporadic, ground, celestial, fixture.
// Operator tags: AR, AS, PS, DU, DUflex, DU2, project.
bool known_tag(const std::string& tag);

// Throws ParseError; unknown heads are rejected by name.
Expr parse_expr(const std::string& text);

}  // namespace nk
