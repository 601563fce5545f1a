#include "micropump/core_model.hpp"

#include <cmath>
#include <string>

#include "micropump/error.hpp"

namespace micropump {

namespace {

void require_positive(double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw Error(ErrorKind::invalid_input, std::string(name) + " must be a finite value > 0");
    }
}

}  // namespace

void CoilSpec::validate() const {
    if (turns < 1) throw Error(ErrorKind::invalid_input, "coil.turns must be >= 1");
    require_positive(inner_radius, "coil.inner_radius");
    require_positive(conductor_width, "coil.conductor_width");
    require_positive(conductor_thickness, "coil.conductor_thickness");
    if (!(turn_spacing >= 0.0) || !std::isfinite(turn_spacing)) {
        throw Error(ErrorKind::invalid_input, "coil.turn_spacing must be >= 0");
    }
}

void MagnetSpec::validate() const {
    require_positive(radius, "magnet.radius");
    require_positive(thickness, "magnet.thickness");
    require_positive(remanence, "magnet.remanence");
    if (remanence > 1.5) throw Error(ErrorKind::invalid_input, "magnet.remanence must be <= 1.5 T");
    if (coercivity < 0.0) throw Error(ErrorKind::invalid_input, "magnet.coercivity must be >= 0");
}

void DiaphragmSpec::validate() const {
    require_positive(radius, "diaphragm.radius");
    require_positive(thickness, "diaphragm.thickness");
    require_positive(youngs_modulus, "diaphragm.youngs_modulus");
    require_positive(yield_strength, "diaphragm.yield_strength");
    if (!(poisson_ratio > 0.0) || poisson_ratio > 0.5 + 1e-9) {
        throw Error(ErrorKind::invalid_input, "diaphragm.poisson_ratio must lie in (0, 0.5]");
    }
}

double derive_pitch(const CoilSpec& coil) { return coil.conductor_width + coil.turn_spacing; }

double outer_radius(const CoilSpec& coil) {
    return coil.inner_radius + coil.turns * derive_pitch(coil);
}

double outermost_conductor_edge(const CoilSpec& coil) {
    return outer_radius(coil) - coil.turn_spacing;
}

std::vector<double> turn_centerline_radii(const CoilSpec& coil) {
    std::vector<double> radii;
    radii.reserve(static_cast<std::size_t>(coil.turns));
    const double pitch = derive_pitch(coil);
    for (int n = 0; n < coil.turns; ++n) {
        radii.push_back(coil.inner_radius + 0.5 * coil.conductor_width + n * pitch);
    }
    return radii;
}

double flexural_rigidity(const DiaphragmSpec& d) {
    if (d.poisson_ratio >= 1.0 || d.poisson_ratio < 0.0) {
        throw Error(ErrorKind::invalid_material, "poisson_ratio must lie in [0, 1)");
    }
    if (!(d.youngs_modulus > 0.0) || !(d.thickness > 0.0)) {
        throw Error(ErrorKind::invalid_input, "youngs_modulus and thickness must be > 0");
    }
    const double h = d.thickness;
    return d.youngs_modulus * h * h * h / (12.0 * (1.0 - d.poisson_ratio * d.poisson_ratio));
}

double magnetization(const MagnetSpec& m) { return m.remanence / kMu0; }

double magnet_volume(const MagnetSpec& m) {
    return std::numbers::pi * m.radius * m.radius * m.thickness;
}

double kappa(const DiaphragmSpec& d, const MagnetSpec& m) { return d.radius / m.radius; }

namespace fixtures {

CoilSpec reference_coil() {
    return CoilSpec{.turns = 10,
                    .inner_radius = 1250e-6,
                    .conductor_width = 25e-6,
                    .turn_spacing = 20e-6,
                    .conductor_thickness = 20e-6};
}

MagnetSpec reference_magnet() {
    return MagnetSpec{.radius = 1222e-6, .thickness = 20e-6, .remanence = 0.3, .coercivity = 47.7e3};
}

DiaphragmSpec reference_diaphragm() {
    return DiaphragmSpec{.radius = 1955e-6,
                         .thickness = 80e-6,
                         .youngs_modulus = 750e3,
                         .poisson_ratio = 0.5,
                         .yield_strength = 130e3};
}

CoilSpec study_coil() {
    CoilSpec coil = reference_coil();
    coil.inner_radius = 400e-6;
    return coil;
}

}  // namespace fixtures

}  // namespace micropump
