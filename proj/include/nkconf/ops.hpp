#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "nkconf/descriptor.hpp"
#include "nkconf/incidence.hpp"

namespace nk {

// Symbolic calculus on descriptors.
Descriptor sym_AR(const Descriptor& d, int k);
Descriptor sym_AS(const Descriptor& d, int r_p, int r_q);
Descriptor sym_PS(const Descriptor& d);
Descriptor sym_DU_flex(const Descriptor& d1, const Descriptor& d2);
Descriptor sym_DUt(const Descriptor& d, long long t);
Descriptor sym_DU2(const Descriptor& dC, const Descriptor& dD);

// Bottom-up re-evaluation of a construction expression at degree k.
Descriptor evaluate(const Expr& e, int k);

// Geometric calculus. Random free choices come from the seed; each op
// retries up to 32 derived seeds before giving up.
Configuration geo_AR(const Configuration& cfg, int k, const HomLine& axis, const std::vector<double>& ratios,
                     const Tolerance& tol = {});
// Picks an axis and ratios from the seed.
Configuration geo_AR_auto(const Configuration& cfg, int k, std::uint64_t seed = 0, const Tolerance& tol = {});

Configuration geo_AS(const Configuration& cfg, const std::vector<int>& pencil_P, const std::vector<int>& pencil_Q,
                     int r_p, int r_q, std::uint64_t seed = 0, const Tolerance& tol = {});

struct Translation {
    double dx, dy;
};
Configuration geo_PS(const Configuration& cfg, int deleted_line, const std::vector<Translation>& translations,
                     const Tolerance& tol = {});
Configuration geo_PS_auto(const Configuration& cfg, int deleted_line, std::uint64_t seed = 0,
                          const Tolerance& tol = {});

enum class DuMode { Flexible, Collineation };
Configuration geo_DU(const Configuration& C, const Configuration& D, int pencil_point, int del_line, DuMode mode,
                     std::uint64_t seed = 0, const Tolerance& tol = {});

Configuration geo_DUt(const Configuration& cfg, const std::vector<int>& points, const Polarity& pol,
                      std::uint64_t seed = 0, const Tolerance& tol = {});

// D must be centrally symmetric about center with anchors P0, P0' = -P0 (relative to center).
Configuration geo_DU2(const Configuration& C, const Configuration& D, const HomPoint& center, int D_point,
                      int P0, int P0_opposite, std::uint64_t seed = 0, const Tolerance& tol = {});

// Quadrilateral (4_2) centred at c: vertices p0, u, -p0, -u (relative to c), cyclically joined.
Configuration quadrilateral(const HomPoint& c, double p0x, double p0y, double ux, double uy);

// Geometric realization of an expression: (D4 l), (D5 l), (Nprime9), (celestial "sym"),
// (fixture "file.json"), (project X), (AR X [k]), (PS X), (AS rp rq X), (DU t X), (DUflex C D).
// Catalog-only families raise CatalogOnly.
Configuration construct(const Expr& e, std::uint64_t seed = 0, const Tolerance& tol = {});

}  // namespace nk
