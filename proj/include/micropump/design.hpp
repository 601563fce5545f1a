#pragma once

// Inverse design: target deflection -> required force -> magnet height ->
// coil current, plus the coil-parameter sweeps.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "micropump/core_model.hpp"

namespace micropump::design {

enum class ForceModel { point, volume };
enum class GapObjective { on_axis_gradient, volume_force };

const char* to_string(ForceModel model) noexcept;
const char* to_string(GapObjective objective) noexcept;

struct Numerics {
    int quadrature_order = 16;
    int fd_nodes = 512;
    int fidelity = 1;
};

/// Golden-section maximization of f on [lo, hi] to an interval width `tol`.
double golden_section_argmax(const std::function<double(double)>& f, double lo, double hi, double tol);

struct GapSearch {
    double z_min = 0.0;          // 0 selects just above the magnet half-thickness
    double z_max = 0.0;          // 0 selects 5 × coil outer radius
    double coarse_step = 10e-6;  // scan spacing before refinement
    double resolution = 1e-9;    // final bracket width (must be <= 1 µm)
};

struct GapResult {
    double gap = 0.0;
    double force = 0.0;  // signed force at the optimum for the given current
    GapObjective objective = GapObjective::on_axis_gradient;
};

/// Height maximizing |force| (volume objective) or |on-axis ∂B_z/∂z| (point
/// objective). Throws Error(range) when the coarse argmax sits on a range end.
GapResult optimal_gap(const CoilSpec& coil, const MagnetSpec& magnet, double current, const GapSearch& search = {},
                      GapObjective objective = GapObjective::on_axis_gradient, const Numerics& numerics = {});

/// Signed force at `gap` for the given current.
double coil_force(const CoilSpec& coil, const MagnetSpec& magnet, double current, double gap, ForceModel model,
                  const Numerics& numerics = {});

struct CurrentSolution {
    double current = 0.0;
    double force_per_ampere = 0.0;  // signed
    bool within_ceiling = true;
};

/// I = F_target / |F(1 A)|. Throws Error(no_solution) if F(1 A) is zero.
CurrentSolution solve_current(const CoilSpec& coil, const MagnetSpec& magnet, double gap, double target_force,
                              double current_ceiling = 1.0, ForceModel model = ForceModel::volume,
                              const Numerics& numerics = {});

struct SafetyMargin {
    double margin = 0.0;  // F_lim / F_applied, +inf at zero load
    bool safe = false;
    double limiting_force = 0.0;
    std::string branch_note;
};

SafetyMargin safety_margin(double applied_force, const DiaphragmSpec& diaphragm, double kappa,
                           double user_safety_factor = 2.0);

/// Same predicate against an externally supplied limit (e.g. a tabulated one).
SafetyMargin safety_margin_against(double applied_force, double limiting_force, double user_safety_factor = 2.0);

enum class SweepParameter { turns, conductor_width, turn_spacing, current, gap };
enum class SweepResponse { force, gradient, deflection };

const char* to_string(SweepParameter p) noexcept;
const char* to_string(SweepResponse r) noexcept;
SweepParameter parse_sweep_parameter(const std::string& name);
SweepResponse parse_sweep_response(const std::string& name);

struct SweepFixture {
    CoilSpec coil;
    MagnetSpec magnet;
    DiaphragmSpec diaphragm;
    double current = 1.0;
    double gap = 200e-6;
    ForceModel model = ForceModel::point;
    Numerics numerics;
};

struct SweepSpec {
    SweepParameter parameter = SweepParameter::current;
    std::vector<double> values;  // SI; turns given as whole numbers
    SweepFixture held_constant;
    SweepResponse response = SweepResponse::force;
};

enum class Trend { strictly_increasing, strictly_decreasing, non_monotone };

const char* to_string(Trend t) noexcept;

struct SweepRow {
    double value = 0.0;
    double response = 0.0;  // magnitude: |F| [N], |∂B_z/∂z| [T/m] or w [m]
};

struct SweepResult {
    SweepSpec spec;
    std::vector<SweepRow> rows;
    Trend trend = Trend::non_monotone;
};

/// Evaluates the response at every value (independently, in parallel) and
/// classifies the trend. Requires at least three strictly monotone values.
SweepResult run_sweep(const SweepSpec& spec);

struct TrendStudy {
    SweepFixture fixture;                      // defaults: study coil, reference magnet, gap 200 µm, 1 A, point force
    std::vector<double> turns = {10, 20, 40};
    std::vector<double> widths = {15e-6, 25e-6, 35e-6};
    std::vector<double> spacings = {10e-6, 20e-6, 40e-6};
    double plateau_threshold = 0.15;

    static TrendStudy defaults();
};

struct TrendVerdicts {
    SweepResult turns;
    SweepResult widths;
    SweepResult spacings;
    double turns_doubling_gain = 0.0;  // gain over the largest n -> 2n pair in the grid
    bool turns_plateau = false;        // gain <= threshold
    bool width_decreasing = false;
    bool spacing_decreasing = false;

    [[nodiscard]] bool all() const { return turns_plateau && width_decreasing && spacing_decreasing; }
};

TrendVerdicts evaluate_coil_trends(const TrendStudy& study);

/// Fully resolved pipeline input (SI).
struct DesignConfig {
    CoilSpec coil;
    double operating_current = 0.9;
    MagnetSpec magnet;
    DiaphragmSpec diaphragm;
    double target_deflection = 15e-6;
    double safety_factor = 2.0;
    double current_ceiling = 1.0;
    Numerics numerics;
    GapObjective gap_objective = GapObjective::on_axis_gradient;
    ForceModel force_model = ForceModel::volume;
};

DesignConfig reference_design_config();

/// target deflection -> force_for_deflection -> optimal_gap -> solve_current
/// -> safety_margin. An infeasible design is reported, not thrown; stage
/// failures are rethrown as StageError.
DesignReport design_pipeline(const DesignConfig& config);

}  // namespace micropump::design
