#include "micropump/error.hpp"

namespace micropump {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::invalid_input: return "invalid-input";
        case ErrorKind::invalid_material: return "invalid-material";
        case ErrorKind::geometry: return "geometry";
        case ErrorKind::singular_point: return "singular-point";
        case ErrorKind::convergence: return "numerical-convergence";
        case ErrorKind::solver: return "solver";
        case ErrorKind::no_solution: return "no-solution";
        case ErrorKind::range: return "range-too-narrow";
        case ErrorKind::io: return "io";
    }
    return "unknown";
}

bool Error::is_numerical() const noexcept {
    switch (kind()) {
        case ErrorKind::singular_point:
        case ErrorKind::convergence:
        case ErrorKind::solver:
        case ErrorKind::no_solution:
        case ErrorKind::range:
            return true;
        default:
            return false;
    }
}

}  // namespace micropump
