#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nkconf/expr.hpp"
#include "nkconf/projective.hpp"

namespace nk {

struct Metadata {
    std::string expr;  // construction expression, checked by parse_expr on load
    bool flexible = false;
    std::vector<int> flexible_lines;  // line indices
    bool central_symmetry = false;
    std::optional<HomPoint> center;
    std::string extra_json;  // unrecognized metadata keys, kept verbatim ("{}" when empty)
};

// Points and lines are addressed by index; ids are what gets serialized.
struct Configuration {
    int k = 0;
    std::vector<HomPoint> points;
    std::vector<HomLine> lines;
    std::vector<long long> point_ids;
    std::vector<long long> line_ids;
    std::vector<std::pair<int, int>> flags;  // (point index, line index)
    Metadata meta;

    int add_point(const HomPoint& p);
    int add_line(const HomLine& l);
    void flag(int p, int l) { flags.emplace_back(p, l); }
    // Sorts flags, drops duplicates, and gives default ids where missing.
    void tidy();

    std::vector<std::vector<int>> points_on_lines() const;
    std::vector<std::vector<int>> lines_through_points() const;
};

struct Near {
    int point, line;
    double residual;
};

struct VerificationReport {
    bool passed = false;
    int k = 0;
    std::vector<int> point_degree, line_degree;
    double max_residual = 0;
    std::vector<Near> unexpected;
    std::vector<std::pair<int, int>> coincident_points, coincident_lines;
    std::vector<std::string> problems;

    std::string summary() const;
};

VerificationReport verify(const Configuration& cfg, const Tolerance& tol = {});

struct PencilReport {
    int p = 0, q = 0;
    std::vector<int> pencil1, pencil2;
    std::optional<HomPoint> dir1, dir2;
};

// Parallel classes of finite lines, as index lists sorted by direction angle.
std::vector<std::vector<int>> parallel_classes(const Configuration& cfg, const Tolerance& tol = {});
PencilReport detect_pencils(const Configuration& cfg, const Tolerance& tol = {});

Configuration apply_map(const Configuration& cfg, const ProjectiveMap& m);
Configuration dualize(const Configuration& cfg, const Polarity& pol, const Tolerance& tol = {});

std::string to_json(const Configuration& cfg);
Configuration from_json(const std::string& text);
Configuration load_json_file(const std::string& path);

struct SvgOptions {
    int size = 800;
    bool labels = false;
    bool highlight_pencils = false;
};

std::string render_svg(const Configuration& cfg, const SvgOptions& opt = {});

}  // namespace nk
