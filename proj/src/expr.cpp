#include "nkconf/expr.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "nkconf/errors.hpp"

namespace nk {

Expr Expr::sym(std::string s) {
    Expr e;
    e.kind = Kind::Symbol;
    e.text = std::move(s);
    return e;
}
Expr Expr::integer(long long v) {
    Expr e;
    e.kind = Kind::Int;
    e.num = v;
    return e;
}
Expr Expr::str(std::string s) {
    Expr e;
    e.kind = Kind::String;
    e.text = std::move(s);
    return e;
}
Expr Expr::list(std::vector<Expr> xs) {
    Expr e;
    e.kind = Kind::List;
    e.items = std::move(xs);
    return e;
}

const std::string& Expr::head() const {
    if (!is_list() || items.empty() || items[0].kind != Kind::Symbol)
        fail("BadExpr", "expression has no head symbol");
    return items[0].text;
}

const Expr& Expr::arg(std::size_t i) const {
    if (!is_list() || i + 1 >= items.size()) fail("BadExpr", "missing argument in " + to_string());
    return items[i + 1];
}

long long Expr::int_arg(std::size_t i) const {
    const Expr& a = arg(i);
    if (a.kind != Kind::Int) fail("BadExpr", "expected integer argument in " + to_string());
    return a.num;
}

const std::string& Expr::str_arg(std::size_t i) const {
    const Expr& a = arg(i);
    if (a.kind != Kind::String) fail("BadExpr", "expected string argument in " + to_string());
    return a.text;
}

std::string Expr::to_string() const {
    switch (kind) {
        case Kind::Symbol: return text;
        case Kind::Int: return std::to_string(num);
        case Kind::String: {
            std::string s = "\"";
            for (char c : text) {
                if (c == '"' || c == '\\') s += '\\';
                s += c;
            }
            return s + "\"";
        }
        case Kind::List: break;
    }
    std::string s = "(";
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) s += ' ';
        s += items[i].to_string();
    }
    return s + ")";
}

std::size_t Expr::size() const {
    std::size_t n = 1;
    for (const auto& x : items) n += x.size();
    return n;
}

bool Expr::operator==(const Expr& o) const {
    return kind == o.kind && text == o.text && num == o.num && items == o.items;
}

bool Expr::operator<(const Expr& o) const {
    std::size_t a = size(), b = o.size();
    if (a != b) return a < b;
    return to_string() < o.to_string();
}

static const std::array<const char*, 18> kTags = {
    "A", "Aspecial", "D4", "D5", "N", "Nprime9", "MC", "sporadic", "ground", "celestial", "fixture",
    "AR", "AS", "PS", "DU", "DUflex", "DU2", "project"};

bool known_tag(const std::string& tag) {
    return std::any_of(kTags.begin(), kTags.end(), [&](const char* t) { return tag == t; });
}

namespace {

struct Parser {
    const std::string& s;
    std::size_t i = 0;

    [[noreturn]] void error(const std::string& what) const {
        fail("ParseError", what + " at offset " + std::to_string(i));
    }
    void skip() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    Expr parse() {
        skip();
        if (i >= s.size()) error("unexpected end of expression");
        char c = s[i];
        if (c == '(') {
            ++i;
            std::vector<Expr> xs;
            for (;;) {
                skip();
                if (i >= s.size()) error("unterminated list");
                if (s[i] == ')') {
                    ++i;
                    break;
                }
                xs.push_back(parse());
            }
            if (xs.empty() || xs[0].kind != Expr::Kind::Symbol) error("list must start with a tag");
            if (!known_tag(xs[0].text)) fail("ParseError", "unknown construction tag '" + xs[0].text + "'");
            return Expr::list(std::move(xs));
        }
        if (c == ')') error("unexpected ')'");
        if (c == '"') {
            ++i;
            std::string out;
            while (i < s.size() && s[i] != '"') {
                if (s[i] == '\\' && i + 1 < s.size()) ++i;
                out += s[i++];
            }
            if (i >= s.size()) error("unterminated string");
            ++i;
            return Expr::str(std::move(out));
        }
        std::size_t b = i;
        while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i])) && s[i] != '(' && s[i] != ')' &&
               s[i] != '"')
            ++i;
        std::string tok = s.substr(b, i - b);
        bool numeric = !tok.empty() && (std::isdigit(static_cast<unsigned char>(tok[0])) ||
                                        (tok.size() > 1 && tok[0] == '-'));
        if (numeric) {
            std::size_t used = 0;
            long long v = 0;
            try {
                v = std::stoll(tok, &used);
            } catch (...) {
                used = 0;
            }
            if (used != tok.size()) error("bad integer '" + tok + "'");
            return Expr::integer(v);
        }
        return Expr::sym(tok);
    }
};

}  // namespace

Expr parse_expr(const std::string& text) {
    Parser p{text};
    Expr e = p.parse();
    p.skip();
    if (p.i != text.size()) p.error("trailing characters");
    if (!e.is_list()) fail("ParseError", "expression must be a parenthesized list");
    return e;
}

}  // namespace nk
