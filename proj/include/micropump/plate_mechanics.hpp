#pragma once

// Clamped thin-plate (Kirchhoff) bending: closed-form center deflection and
// limiting force for a circular plate under a central disc load, plus
// finite-difference solvers for circular and rectangular plates.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "micropump/core_model.hpp"

namespace micropump::plate {

enum class LoadKind { central_disc, uniform };

struct LoadPatch {
    LoadKind kind = LoadKind::central_disc;
    double radius = 0.0;       // disc radius; unused for uniform loads
    double total_force = 0.0;  // [N]

    static LoadPatch central_disc(double radius, double force) { return {LoadKind::central_disc, radius, force}; }
    static LoadPatch uniform(double force) { return {LoadKind::uniform, 0.0, force}; }
};

enum class Shape { circle, square, rectangle };

const char* to_string(Shape shape) noexcept;

struct PlateGeometry {
    Shape shape = Shape::circle;
    double lx = 0.0;  // circle: radius; square/rectangle: side along x
    double ly = 0.0;  // circle: radius; square/rectangle: side along y
    double thickness = 0.0;

    static PlateGeometry circle(double radius, double thickness);
    static PlateGeometry square(double side, double thickness);
    static PlateGeometry rectangle(double lx, double ly, double thickness);

    /// Square with the area of a circle of radius `radius`.
    static PlateGeometry equal_area_square(double radius, double thickness);
    /// Rectangle with lx/ly = aspect and lx·ly = π·radius².
    static PlateGeometry equal_area_rectangle(double radius, double thickness, double aspect = 2.0);

    [[nodiscard]] double area() const;
    [[nodiscard]] double in_radius() const;
};

/// Center deflection of a clamped circular plate of radius a under a total
/// force F spread uniformly over a central disc of radius c:
///   w = F c² / (16πD) · (κ² − ln κ − 3/4),  κ = a/c.
/// Throws Error(geometry) unless κ > 1.
double center_deflection(double force, double plate_radius, double load_radius, double rigidity);

/// Exact inverse of center_deflection in F.
double force_for_deflection(double deflection, double plate_radius, double load_radius, double rigidity);

enum class LimitBranch { moderate_ratio, large_ratio };  // k < 4.5, k ≥ 4.5

struct LimitingForce {
    double force = 0.0;
    LimitBranch branch = LimitBranch::moderate_ratio;
    std::string note;
};

inline constexpr double kLimitBranchRatio = 4.5;

/// Collapse load of the clamped plate, piecewise in k = a/c:
///   k < 4.5:  h² σ_y · 4πk² / (6k² − 3)
///   k ≥ 4.5:  h² σ_y · 8πk² / ((1 + ν)(12k² ln k + 3))
/// The two pieces do not meet at k = 4.5.
LimitingForce limiting_force(double thickness, double yield_strength, double k, double poisson_ratio);

/// F_lim / (h² σ_y) for an explicitly chosen branch.
double limiting_force_coefficient(double k, double poisson_ratio, LimitBranch branch);

struct RadialProfile {
    std::vector<double> r;
    std::vector<double> w;  // deflection toward the load, ≥ 0 for a downward load

    [[nodiscard]] double center() const { return w.front(); }
};

/// Axisymmetric D∇⁴w = q on a uniform radial grid of `n_nodes` nodes
/// (r = 0 … a), clamped rim, second-order finite volumes. Disc loads are
/// cell-averaged so the discrete total equals F.
RadialProfile solve_circular_plate(double plate_radius, const LoadPatch& load, double rigidity, int n_nodes = 512);

struct PlateField {
    int nx = 0;
    int ny = 0;
    double hx = 0.0;
    double hy = 0.0;
    std::vector<double> w;  // row-major, index j*nx + i, (0,0) at a corner

    [[nodiscard]] double at(int i, int j) const { return w[static_cast<std::size_t>(j) * nx + i]; }
    [[nodiscard]] double center() const { return at(nx / 2, ny / 2); }
    /// Coordinates relative to the plate centroid.
    [[nodiscard]] double x(int i) const { return (i - 0.5 * (nx - 1)) * hx; }
    [[nodiscard]] double y(int j) const { return (j - 0.5 * (ny - 1)) * hy; }
};

/// Node counts of the grid used for `n` nodes on the shorter side (always odd
/// so that a node sits on the centroid).
std::pair<int, int> rect_grid_size(const PlateGeometry& geom, int n);

/// Nodal forces [N] of `load` on the nx×ny grid of `geom`. A disc load is
/// rasterized by cell overlap area and renormalized so the sum equals F.
std::vector<double> rasterize_load(const PlateGeometry& geom, const LoadPatch& load, int nx, int ny);

/// 13-point biharmonic stencil, clamped edges (w = 0, ghost-node reflection
/// for zero normal slope). `n` ≥ 65 nodes on the shorter side.
PlateField solve_rect_plate(const PlateGeometry& geom, const LoadPatch& load, double rigidity, int n);

struct ConvergedCenter {
    double center = 0.0;         // at the fine resolution
    double coarse_center = 0.0;
    double relative_change = 0.0;
    int coarse_nodes = 0;
    int fine_nodes = 0;
    std::optional<std::string> warning;
};

/// Solves at n and 2n − 1 nodes and reports the refinement change. A change
/// above 2 % with n ≥ 257 raises a discretization warning.
ConvergedCenter converged_rect_center(const PlateGeometry& geom, const LoadPatch& load, double rigidity, int n);

/// Same refinement check for the axisymmetric solver.
ConvergedCenter converged_circular_center(double plate_radius, const LoadPatch& load, double rigidity, int n);

struct ShapeFixture {
    DiaphragmSpec diaphragm;
    double load_radius = 0.0;
    double rectangle_aspect = 2.0;
    int circle_nodes = 512;
    int rect_nodes = 129;
};

struct ShapeRow {
    double force = 0.0;
    double w_circle = 0.0;
    double w_square = 0.0;
    double w_rectangle = 0.0;
    bool ordered = false;  // circle > square > rectangle
};

struct ShapeComparison {
    std::vector<ShapeRow> rows;
    ConvergedCenter circle_per_newton;
    ConvergedCenter square_per_newton;
    ConvergedCenter rectangle_per_newton;
    PlateGeometry square;
    PlateGeometry rectangle;
    std::vector<std::string> warnings;
};

/// Equal-area, equal-thickness circle / square / rectangle under the same
/// central disc load. Each shape is solved once per unit force (the problem
/// is linear) and scaled to every entry of `forces`.
ShapeComparison compare_shapes(const ShapeFixture& fixture, std::span<const double> forces);

}  // namespace micropump::plate
