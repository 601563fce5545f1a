#include "micropump/plate_mechanics.hpp"

#include <cmath>
#include <numbers>

#include "micropump/error.hpp"

namespace micropump::plate {

namespace {

constexpr double kPi = std::numbers::pi;

void require_kappa(double plate_radius, double load_radius, double rigidity) {
    if (!(load_radius > 0.0) || !(plate_radius / load_radius > 1.0)) {
        throw Error(ErrorKind::geometry, "plate radius must exceed the loaded radius (kappa > 1)");
    }
    if (!(rigidity > 0.0)) throw Error(ErrorKind::invalid_input, "flexural rigidity must be > 0");
}

// (κ² − ln κ − 3/4) c² / (16πD): deflection per newton.
double compliance(double plate_radius, double load_radius, double rigidity) {
    require_kappa(plate_radius, load_radius, rigidity);
    const double k = plate_radius / load_radius;
    return load_radius * load_radius / (16.0 * kPi * rigidity) * (k * k - std::log(k) - 0.75);
}

}  // namespace

const char* to_string(Shape shape) noexcept {
    switch (shape) {
        case Shape::circle: return "circle";
        case Shape::square: return "square";
        case Shape::rectangle: return "rectangle";
    }
    return "unknown";
}

PlateGeometry PlateGeometry::circle(double radius, double thickness) {
    return {Shape::circle, radius, radius, thickness};
}

PlateGeometry PlateGeometry::square(double side, double thickness) {
    return {Shape::square, side, side, thickness};
}

PlateGeometry PlateGeometry::rectangle(double lx, double ly, double thickness) {
    return {Shape::rectangle, lx, ly, thickness};
}

PlateGeometry PlateGeometry::equal_area_square(double radius, double thickness) {
    return square(std::sqrt(kPi * radius * radius), thickness);
}

PlateGeometry PlateGeometry::equal_area_rectangle(double radius, double thickness, double aspect) {
    if (!(aspect > 0.0)) throw Error(ErrorKind::invalid_input, "rectangle aspect ratio must be > 0");
    const double area = kPi * radius * radius;
    const double ly = std::sqrt(area / aspect);
    return rectangle(aspect * ly, ly, thickness);
}

double PlateGeometry::area() const {
    return shape == Shape::circle ? kPi * lx * lx : lx * ly;
}

double PlateGeometry::in_radius() const {
    return shape == Shape::circle ? lx : 0.5 * std::min(lx, ly);
}

double center_deflection(double force, double plate_radius, double load_radius, double rigidity) {
    return force * compliance(plate_radius, load_radius, rigidity);
}

double force_for_deflection(double deflection, double plate_radius, double load_radius, double rigidity) {
    return deflection / compliance(plate_radius, load_radius, rigidity);
}

double limiting_force_coefficient(double k, double poisson_ratio, LimitBranch branch) {
    if (branch == LimitBranch::moderate_ratio) {
        const double denom = 6.0 * k * k - 3.0;
        if (!(denom > 0.0)) throw Error(ErrorKind::geometry, "limiting force undefined for k <= sqrt(1/2)");
        return 4.0 * kPi * k * k / denom;
    }
    const double denom = (1.0 + poisson_ratio) * (12.0 * k * k * std::log(k) + 3.0);
    if (!(denom > 0.0)) throw Error(ErrorKind::geometry, "limiting force undefined for this k");
    return 8.0 * kPi * k * k / denom;
}

LimitingForce limiting_force(double thickness, double yield_strength, double k, double poisson_ratio) {
    if (!(k > 1.0)) throw Error(ErrorKind::geometry, "limiting force requires k = a/c > 1");
    if (!(thickness > 0.0) || !(yield_strength > 0.0)) {
        throw Error(ErrorKind::invalid_input, "thickness and yield strength must be > 0");
    }
    LimitingForce out;
    out.branch = k < kLimitBranchRatio ? LimitBranch::moderate_ratio : LimitBranch::large_ratio;
    out.force = thickness * thickness * yield_strength * limiting_force_coefficient(k, poisson_ratio, out.branch);
    out.note = out.branch == LimitBranch::moderate_ratio
                   ? "k < 4.5 branch: h^2*sigma_y*4*pi*k^2/(6k^2-3)"
                   : "k >= 4.5 branch: h^2*sigma_y*8*pi*k^2/((1+nu)(12k^2 ln k+3)), natural log";
    return out;
}

}  // namespace micropump::plate
