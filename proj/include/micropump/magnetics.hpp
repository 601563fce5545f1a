#pragma once

// Magnetostatics of the planar coil (as concentric circular filaments) and the
// axial force on a coaxial cylindrical magnet. Conventions: +z up, coil
// centerline in the z = 0 plane, positive current gives B_z > 0 on the axis.

#include <span>
#include <vector>

#include "micropump/core_model.hpp"

namespace micropump::magnetics {

struct Filament {
    double radius = 0.0;
    double z = 0.0;
};

/// Discretized coil. Every filament carries the same current; filaments are
/// sorted by (radius, z) with no duplicates. With fidelity 1 all filaments
/// lie in the coil plane and the radii are strictly increasing.
struct LoopSet {
    std::vector<Filament> filaments;
    double current = 0.0;  // per filament [A]
    double plane_z = 0.0;

    [[nodiscard]] std::vector<double> radii() const;
    [[nodiscard]] double total_current() const { return current * static_cast<double>(filaments.size()); }
    void validate() const;
};

/// One loop per turn at the conductor centerline. `fidelity` f > 1 replaces
/// each conductor cross-section by an f×f grid of filaments carrying I/f².
LoopSet spiral_to_loops(const CoilSpec& coil, double current, int fidelity = 1);

/// Single loop of radius R at z = 0, evaluated on its axis.
double loop_bz_onaxis(double loop_radius, double current, double z);

struct FieldRZ {
    double br = 0.0;
    double bz = 0.0;
};

/// Exact field of a circular loop (complete elliptic integrals). Throws
/// Error(singular_point) within 1e-9 m of the filament.
FieldRZ loop_field_offaxis(double loop_radius, double current, double r, double z);

/// Superposed field of every filament.
FieldRZ coil_field(const LoopSet& loops, double r, double z);
double coil_bz(const LoopSet& loops, double r, double z);

/// ∂B_z/∂z by central differences with one Richardson step. The base step
/// is min(1 µm, |z|/100, distance-to-nearest-filament/100).
double coil_dbz_dz(const LoopSet& loops, double r, double z);

FieldSample field_sample(const LoopSet& loops, double r, double z);

/// Samples in the order of `heights`.
std::vector<FieldSample> axial_profile(const LoopSet& loops, double r, std::span<const double> heights);

/// Point-dipole force M_z·V_m·∂B_z/∂z on the axis at the magnet mid-plane
/// height `gap`. Negative means attraction toward the coil.
double force_point(const LoopSet& loops, const MagnetSpec& magnet, double gap);

struct VolumeForce {
    double force = 0.0;
    int order = 0;                 // Gauss–Legendre nodes per dimension actually used
    double relative_change = 0.0;  // |F(order) − F(order/2)| / |F(order)|
};

/// M_z ∫ 2πr ∂B_z/∂z dr dz over the magnet cylinder. Starts at
/// `quadrature_order` and doubles until successive results differ by less
/// than 0.1 %; throws Error(convergence) past order 64.
VolumeForce force_volavg(const LoopSet& loops, const MagnetSpec& magnet, double gap,
                         int quadrature_order = 16);

/// Fixed-order evaluation of the volume integral (no convergence loop).
double force_volavg_fixed(const LoopSet& loops, const MagnetSpec& magnet, double gap, int order);

/// ρ·L/(width·thickness), L summed over turn centerlines.
double coil_resistance(const CoilSpec& coil, double resistivity = kCopperResistivity);

/// Total conductor length Σ 2π r_n.
double coil_length(const CoilSpec& coil);

}  // namespace micropump::magnetics
