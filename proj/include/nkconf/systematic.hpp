#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nkconf/descriptor.hpp"
#include "nkconf/incidence.hpp"

namespace nk {

struct CelestialSymbol {
    int m = 0;
    std::vector<std::pair<int, int>> pairs;  // (s_j, t_j)

    int h() const { return static_cast<int>(pairs.size()); }
    std::string to_string() const;
};

struct MulticelestialSymbol {
    int m = 0;
    std::array<int, 3> t{};
    std::array<int, 2> s{};

    std::string to_string() const;
};

// "m#(s1,t1;s2,t2;...)"
CelestialSymbol parse_celestial(const std::string& text);
// "m#(t0,t1,t2)(s0,s1)"
MulticelestialSymbol parse_multicelestial(const std::string& text);

struct Validity {
    bool valid = false;
    std::string reason;
};

Validity celestial_validate(const CelestialSymbol& sym, const Tolerance& tol = {});

// Point (v_j)_i has index j*m + i, line (L_j)_i has index j*m + i.
// start is the complex position of (v_1)_0.
Configuration celestial_construct(const CelestialSymbol& sym, std::complex<double> start = 1.0,
                                  const Tolerance& tol = {});

// Send a generic line to infinity so every element is finite.
Configuration project_to_finite(const Configuration& cfg, const Tolerance& tol = {});

Configuration d4_construct(int ell, bool project = false, const Tolerance& tol = {});
Configuration d5_construct(int ell, bool project = false, const Tolerance& tol = {});

struct NprimeChoice {
    int d = 0;
    int sign = 1;
    int root = 0;
};

// forced_d restricts the scan to a single d.
Configuration nprime_construct(std::optional<int> forced_d = std::nullopt, NprimeChoice* used = nullptr,
                               const Tolerance& tol = {});

Validity multicelestial_validate(const MulticelestialSymbol& sym);

// Leaf expressions: (A m) (Aspecial 12) (D4 l) (D5 l) (N 2 6 s) (N 3 2 s) (N 3 3 s)
// (Nprime9) (MC "sym") (sporadic n) (ground n) (celestial "sym").
Descriptor catalog_descriptor(const Expr& leaf, int k);

// Every catalog leaf for degree k with n <= n_max, in a fixed order.
std::vector<Descriptor> catalog_all(int k, long long n_max);

// Default Table 2 symbol for a given m.
MulticelestialSymbol multicelestial_default(int m);

bool four_config_exists(long long n);

}  // namespace nk
