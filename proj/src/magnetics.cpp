#include "micropump/magnetics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "micropump/error.hpp"
#include "micropump/quadrature.hpp"

namespace micropump::magnetics {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSingularDistance = 1e-9;
// Below this r/ρ the first-order series for B_r replaces the elliptic form,
// which loses digits to cancellation near the axis.
constexpr double kNearAxis = 1e-5;

double nearest_filament_distance(const LoopSet& loops, double r, double z) {
    double d = std::numeric_limits<double>::infinity();
    for (const Filament& f : loops.filaments) {
        d = std::min(d, std::hypot(r - f.radius, z - f.z));
    }
    return d;
}

}  // namespace

std::vector<double> LoopSet::radii() const {
    std::vector<double> out;
    out.reserve(filaments.size());
    for (const Filament& f : filaments) out.push_back(f.radius);
    return out;
}

void LoopSet::validate() const {
    if (!std::isfinite(current)) throw Error(ErrorKind::invalid_input, "loop current must be finite");
    for (std::size_t i = 0; i < filaments.size(); ++i) {
        if (!(filaments[i].radius > 0.0)) throw Error(ErrorKind::invalid_input, "filament radius must be > 0");
        if (i == 0) continue;
        const Filament& a = filaments[i - 1];
        const Filament& b = filaments[i];
        if (b.radius < a.radius || (b.radius == a.radius && b.z <= a.z)) {
            throw Error(ErrorKind::invalid_input, "filaments must be sorted by (radius, z) without duplicates");
        }
    }
}

LoopSet spiral_to_loops(const CoilSpec& coil, double current, int fidelity) {
    coil.validate();
    if (fidelity < 1) throw Error(ErrorKind::invalid_input, "fidelity must be >= 1");

    LoopSet loops;
    loops.current = current / (static_cast<double>(fidelity) * fidelity);
    const double dr = coil.conductor_width / fidelity;
    const double dz = coil.conductor_thickness / fidelity;
    for (double centre : turn_centerline_radii(coil)) {
        for (int i = 0; i < fidelity; ++i) {
            const double radius = fidelity == 1
                                      ? centre
                                      : centre - 0.5 * coil.conductor_width + (i + 0.5) * dr;
            for (int j = 0; j < fidelity; ++j) {
                const double z = fidelity == 1 ? 0.0 : -0.5 * coil.conductor_thickness + (j + 0.5) * dz;
                loops.filaments.push_back({radius, z});
            }
        }
    }
    return loops;
}

double loop_bz_onaxis(double loop_radius, double current, double z) {
    const double r2 = loop_radius * loop_radius;
    const double s = r2 + z * z;
    return kMu0 * current * r2 / (2.0 * s * std::sqrt(s));
}

FieldRZ loop_field_offaxis(double loop_radius, double current, double r, double z) {
    if (r < 0.0) throw Error(ErrorKind::invalid_input, "radial coordinate must be >= 0");
    const double R = loop_radius;
    const double alpha2 = (R - r) * (R - r) + z * z;
    if (std::sqrt(alpha2) < kSingularDistance) {
        throw Error(ErrorKind::singular_point, "field evaluated on the current filament");
    }
    if (r == 0.0) return {0.0, loop_bz_onaxis(R, current, z)};

    const double beta2 = (R + r) * (R + r) + z * z;
    const double beta = std::sqrt(beta2);
    const double k = std::sqrt(4.0 * R * r / beta2);
    const double K = std::comp_ellint_1(k);
    const double E = std::comp_ellint_2(k);
    const double c = kMu0 * current / kPi;

    FieldRZ out;
    out.bz = c / (2.0 * alpha2 * beta) * ((R * R - r * r - z * z) * E + alpha2 * K);

    const double rho2 = R * R + z * z;
    if (r < kNearAxis * std::sqrt(rho2)) {
        // B_r ≈ −(r/2)·∂B_z/∂z on the axis.
        out.br = 3.0 * kMu0 * current * R * R * z * r / (4.0 * rho2 * rho2 * std::sqrt(rho2));
    } else {
        out.br = c * z / (2.0 * alpha2 * beta * r) * ((R * R + r * r + z * z) * E - alpha2 * K);
    }
    return out;
}

FieldRZ coil_field(const LoopSet& loops, double r, double z) {
    FieldRZ sum;
    for (const Filament& f : loops.filaments) {
        const FieldRZ b = loop_field_offaxis(f.radius, loops.current, r, z - f.z);
        sum.br += b.br;
        sum.bz += b.bz;
    }
    return sum;
}

double coil_bz(const LoopSet& loops, double r, double z) {
    double sum = 0.0;
    for (const Filament& f : loops.filaments) {
        sum += loop_field_offaxis(f.radius, loops.current, r, z - f.z).bz;
    }
    return sum;
}

double coil_dbz_dz(const LoopSet& loops, double r, double z) {
    const double dist = nearest_filament_distance(loops, r, z);
    if (dist < kSingularDistance) {
        throw Error(ErrorKind::singular_point, "gradient evaluated on the current filament");
    }
    double step = std::min(1e-6, dist / 100.0);
    if (z != 0.0) step = std::min(step, std::abs(z) / 100.0);

    auto central = [&](double h) { return (coil_bz(loops, r, z + h) - coil_bz(loops, r, z - h)) / (2.0 * h); };
    const double coarse = central(step);
    const double fine = central(0.5 * step);
    return (4.0 * fine - coarse) / 3.0;
}

FieldSample field_sample(const LoopSet& loops, double r, double z) {
    return FieldSample{r, z, coil_bz(loops, r, z), coil_dbz_dz(loops, r, z)};
}

std::vector<FieldSample> axial_profile(const LoopSet& loops, double r, std::span<const double> heights) {
    std::vector<FieldSample> out;
    out.reserve(heights.size());
    for (double z : heights) out.push_back(field_sample(loops, r, z));
    return out;
}

double force_point(const LoopSet& loops, const MagnetSpec& magnet, double gap) {
    if (!(gap > 0.0)) throw Error(ErrorKind::invalid_input, "gap must be > 0");
    return magnetization(magnet) * magnet_volume(magnet) * coil_dbz_dz(loops, 0.0, gap);
}

double force_volavg_fixed(const LoopSet& loops, const MagnetSpec& magnet, double gap, int order) {
    const double half_t = 0.5 * magnet.thickness;
    if (!(gap - half_t > 0.0)) {
        throw Error(ErrorKind::geometry, "magnet bottom face must lie above the coil plane");
    }
    const quadrature::Rule rule = quadrature::gauss_legendre(order);
    const double half_c = 0.5 * magnet.radius;

    double integral = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double r = half_c * (rule.nodes[i] + 1.0);
        double column = 0.0;
        for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
            const double z = gap + half_t * rule.nodes[j];
            column += rule.weights[j] * coil_dbz_dz(loops, r, z);
        }
        integral += rule.weights[i] * 2.0 * kPi * r * column;
    }
    return magnetization(magnet) * integral * half_c * half_t;
}

VolumeForce force_volavg(const LoopSet& loops, const MagnetSpec& magnet, double gap, int quadrature_order) {
    constexpr int kMaxOrder = 64;
    constexpr double kTolerance = 1e-3;
    if (quadrature_order < 1) throw Error(ErrorKind::invalid_input, "quadrature_order must be >= 1");

    int order = std::min(quadrature_order, kMaxOrder / 2);
    double previous = force_volavg_fixed(loops, magnet, gap, order);
    double change = std::numeric_limits<double>::infinity();
    while (order < kMaxOrder) {
        order = std::min(2 * order, kMaxOrder);
        const double current = force_volavg_fixed(loops, magnet, gap, order);
        const double diff = std::abs(current - previous);
        change = current == 0.0 ? (diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity())
                                : diff / std::abs(current);
        previous = current;
        if (change < kTolerance) return VolumeForce{current, order, change};
    }
    throw Error(ErrorKind::convergence,
                "volume-averaged force did not converge by quadrature order 64 (last change " +
                    std::to_string(change) + ")");
}

double coil_length(const CoilSpec& coil) {
    double sum = 0.0;
    for (double r : turn_centerline_radii(coil)) sum += 2.0 * kPi * r;
    return sum;
}

double coil_resistance(const CoilSpec& coil, double resistivity) {
    const double area = coil.conductor_width * coil.conductor_thickness;
    if (!(area > 0.0)) throw Error(ErrorKind::invalid_input, "conductor cross-section must be > 0");
    return resistivity * coil_length(coil) / area;
}

}  // namespace micropump::magnetics
