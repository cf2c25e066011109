#pragma once

#include <string>

#include "nkconf/expr.hpp"

namespace nk {

// Symbolic record of an (n_k) configuration for the calculus.
struct Descriptor {
    long long n = 0;
    int k = 0;
    int p = 0, q = 0;
    bool flexible = false;
    bool central_sym = false;
    Expr expr;

    std::string to_string() const;
};

}  // namespace nk
