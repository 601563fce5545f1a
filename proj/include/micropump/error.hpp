#pragma once

#include <stdexcept>
#include <string>

namespace micropump {

enum class ErrorKind {
    invalid_input,     // schema violation, non-positive physical value
    invalid_material,  // Poisson ratio out of range
    geometry,          // magnet as large as plate, load patch outside plate
    singular_point,    // field evaluated on a filament
    convergence,       // quadrature or refinement did not converge
    solver,            // linear system could not be factored
    no_solution,       // degenerate geometry, e.g. zero force per ampere
    range,             // search optimum sits on the range boundary
    io,                // missing / unreadable / unwritable file
};

const char* to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a kind so the CLI can map it
/// to an exit code without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

    /// True for failures of the numerics rather than of the inputs.
    [[nodiscard]] bool is_numerical() const noexcept;

private:
    ErrorKind kind_;
};

/// Wraps an error raised inside a named pipeline stage.
class StageError : public Error {
public:
    StageError(std::string stage, const Error& inner)
        : Error(inner.kind(), stage + ": " + inner.what()), stage_(std::move(stage)) {}

    [[nodiscard]] const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

}  // namespace micropump
