#pragma once

// Domain types shared by every module. All quantities are strict SI; the
// micrometer / micronewton conveniences live in the units namespace and are
// only used at the config and report boundary.

#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace micropump {

/// Vacuum permeability [T·m/A].
inline constexpr double kMu0 = 4.0e-7 * std::numbers::pi;

/// Copper resistivity at 20 °C [Ω·m].
inline constexpr double kCopperResistivity = 1.68e-8;

namespace units {

inline constexpr double kMicro = 1e-6;

constexpr double from_um(double um) noexcept { return um * kMicro; }
constexpr double to_um(double m) noexcept { return m / kMicro; }
constexpr double from_uN(double uN) noexcept { return uN * kMicro; }
constexpr double to_uN(double N) noexcept { return N / kMicro; }
constexpr double to_mN(double N) noexcept { return N * 1e3; }

}  // namespace units

/// Planar spiral coil, represented downstream as concentric loops.
struct CoilSpec {
    int turns = 1;
    double inner_radius = 0.0;
    double conductor_width = 0.0;
    double turn_spacing = 0.0;
    double conductor_thickness = 20e-6;

    /// Throws Error(invalid_input) naming the offending field.
    void validate() const;
};

struct MagnetSpec {
    double radius = 0.0;     // loaded-area radius of the diaphragm
    double thickness = 0.0;
    double remanence = 0.0;  // [T]
    double coercivity = 0.0; // [A/m], informational only

    void validate() const;
};

/// Edge-clamped circular diaphragm.
struct DiaphragmSpec {
    double radius = 0.0;
    double thickness = 0.0;
    double youngs_modulus = 0.0;
    double poisson_ratio = 0.0;
    double yield_strength = 0.0;

    void validate() const;
};

/// One point of a field profile.
struct FieldSample {
    double r = 0.0;
    double z = 0.0;
    double bz = 0.0;
    double dbz_dz = 0.0;
};

/// Result of the inverse design pipeline.
struct DesignReport {
    double target_deflection = 0.0;
    double required_force = 0.0;
    double required_current = 0.0;
    double optimal_gap = 0.0;
    double limiting_force = 0.0;
    double safety_factor_achieved = 0.0;  // +inf when the required force is zero
    bool feasible = true;

    // Supporting detail carried into the serialized report.
    bool attraction = true;
    double force_per_ampere = 0.0;     // signed, at optimal_gap
    double user_safety_factor = 2.0;
    double current_ceiling = 1.0;
    double kappa = 0.0;
    double flexural_rigidity = 0.0;
    std::string gap_objective;
    std::string force_model;
    std::string limiting_force_branch;
    std::optional<std::string> infeasible_stage;
    std::vector<std::string> provenance;
    std::string config_hash;
};

/// Center-to-center distance of adjacent turns.
double derive_pitch(const CoilSpec& coil);

/// Radial envelope of the winding: inner_radius + turns·pitch.
double outer_radius(const CoilSpec& coil);

/// Outer edge of the last conductor: inner_radius + turns·pitch − spacing.
double outermost_conductor_edge(const CoilSpec& coil);

/// Centerline radii of each turn, innermost first.
std::vector<double> turn_centerline_radii(const CoilSpec& coil);

/// Kirchhoff bending stiffness E·h³ / (12(1 − ν²)).
/// Throws Error(invalid_material) when ν ≥ 1.
double flexural_rigidity(const DiaphragmSpec& d);

/// Rigid-magnet magnetization B_r / µ0 [A/m].
double magnetization(const MagnetSpec& m);

double magnet_volume(const MagnetSpec& m);

/// Ratio of diaphragm radius to loaded (magnet) radius.
double kappa(const DiaphragmSpec& d, const MagnetSpec& m);

namespace fixtures {

// Published design point: 10-turn Cu coil, PDMS diaphragm, CoNiMnP magnet.
CoilSpec reference_coil();
MagnetSpec reference_magnet();
DiaphragmSpec reference_diaphragm();

/// Coil-parameter study geometry (constant inner radius of 400 µm).
CoilSpec study_coil();

inline constexpr double kReferenceOuterRadius = 1725e-6;
inline constexpr double kReferenceResistance = 3.23;
inline constexpr double kReferenceLimitingForce = 377e-6;
inline constexpr double kReferenceOptimalGap = 620e-6;
inline constexpr double kReferenceTargetDeflection = 15e-6;
inline constexpr double kReferenceDesignForce = 16e-6;

}  // namespace fixtures

}  // namespace micropump
