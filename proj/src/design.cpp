#include "micropump/design.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <sstream>

#include "micropump/error.hpp"
#include "micropump/magnetics.hpp"
#include "micropump/plate_mechanics.hpp"

namespace micropump::design {

namespace {

template <typename F>
auto run_stage(const char* stage, F&& body) -> decltype(body()) {
    try {
        return body();
    } catch (const StageError&) {
        throw;
    } catch (const Error& e) {
        throw StageError(stage, e);
    }
}

std::string format_uN(double newtons) {
    std::ostringstream s;
    s.precision(6);
    s << units::to_uN(newtons) << " uN";
    return s.str();
}

bool strictly_monotone(const std::vector<double>& v) {
    bool up = true;
    bool down = true;
    for (std::size_t i = 1; i < v.size(); ++i) {
        up = up && v[i] > v[i - 1];
        down = down && v[i] < v[i - 1];
    }
    return up || down;
}

}  // namespace

const char* to_string(ForceModel model) noexcept {
    return model == ForceModel::point ? "point" : "volume";
}

const char* to_string(GapObjective objective) noexcept {
    return objective == GapObjective::on_axis_gradient ? "on_axis_gradient" : "volume_force";
}

double golden_section_argmax(const std::function<double(double)>& f, double lo, double hi, double tol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - inv_phi * (hi - lo);
    double d = lo + inv_phi * (hi - lo);
    double fc = f(c);
    double fd = f(d);
    while (hi - lo > tol) {
        if (fc > fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d);
        }
    }
    return 0.5 * (lo + hi);
}

double coil_force(const CoilSpec& coil, const MagnetSpec& magnet, double current, double gap, ForceModel model,
                  const Numerics& numerics) {
    const magnetics::LoopSet loops = magnetics::spiral_to_loops(coil, current, numerics.fidelity);
    if (model == ForceModel::point) return magnetics::force_point(loops, magnet, gap);
    return magnetics::force_volavg(loops, magnet, gap, numerics.quadrature_order).force;
}

GapResult optimal_gap(const CoilSpec& coil, const MagnetSpec& magnet, double current, const GapSearch& search,
                      GapObjective objective, const Numerics& numerics) {
    coil.validate();
    magnet.validate();
    const double half_t = 0.5 * magnet.thickness;
    const double z_ceiling = 5.0 * outer_radius(coil);
    const double z_min = search.z_min > 0.0 ? search.z_min : half_t + 1e-6;
    const double z_max = search.z_max > 0.0 ? search.z_max : z_ceiling;
    if (!(z_min > half_t) || z_max > z_ceiling * (1.0 + 1e-12) || !(z_max > z_min)) {
        throw Error(ErrorKind::invalid_input, "gap search range must lie within (magnet thickness/2, 5 x outer radius)");
    }
    if (!(search.coarse_step > 0.0) || !(search.resolution > 0.0) || search.resolution > 1e-6) {
        throw Error(ErrorKind::invalid_input, "gap search needs coarse_step > 0 and 0 < resolution <= 1 um");
    }

    // Unit current: the argmax does not depend on the current magnitude.
    const magnetics::LoopSet unit = magnetics::spiral_to_loops(coil, 1.0, numerics.fidelity);
    std::function<double(double)> objective_fn;
    if (objective == GapObjective::on_axis_gradient) {
        objective_fn = [&](double z) { return std::abs(magnetics::coil_dbz_dz(unit, 0.0, z)); };
    } else {
        objective_fn = [&](double z) {
            return std::abs(magnetics::force_volavg_fixed(unit, magnet, z, numerics.quadrature_order));
        };
    }

    const int steps = std::max(2, static_cast<int>(std::ceil((z_max - z_min) / search.coarse_step)));
    const double dz = (z_max - z_min) / steps;
    int best = 0;
    double best_value = -1.0;
    for (int i = 0; i <= steps; ++i) {
        const double value = objective_fn(z_min + i * dz);
        if (value > best_value) {
            best_value = value;
            best = i;
        }
    }
    if (best == 0 || best == steps) {
        std::ostringstream msg;
        msg << "objective maximum at the range boundary z = " << units::to_um(z_min + best * dz)
            << " um; widen the gap search range";
        throw Error(ErrorKind::range, msg.str());
    }

    GapResult out;
    out.objective = objective;
    out.gap = golden_section_argmax(objective_fn, z_min + (best - 1) * dz, z_min + (best + 1) * dz, search.resolution);
    out.force = coil_force(coil, magnet, current, out.gap,
                           objective == GapObjective::on_axis_gradient ? ForceModel::point : ForceModel::volume,
                           numerics);
    return out;
}

CurrentSolution solve_current(const CoilSpec& coil, const MagnetSpec& magnet, double gap, double target_force,
                              double current_ceiling, ForceModel model, const Numerics& numerics) {
    if (!(target_force >= 0.0)) throw Error(ErrorKind::invalid_input, "target force must be >= 0");
    CurrentSolution out;
    out.force_per_ampere = coil_force(coil, magnet, 1.0, gap, model, numerics);
    if (out.force_per_ampere == 0.0 || !std::isfinite(out.force_per_ampere)) {
        throw Error(ErrorKind::no_solution, "coil produces no force on the magnet at 1 A");
    }
    out.current = target_force / std::abs(out.force_per_ampere);
    out.within_ceiling = out.current <= current_ceiling;
    return out;
}

SafetyMargin safety_margin_against(double applied_force, double limiting_force, double user_safety_factor) {
    if (!(applied_force >= 0.0)) throw Error(ErrorKind::invalid_input, "applied force must be >= 0");
    SafetyMargin out;
    out.limiting_force = limiting_force;
    out.margin = applied_force == 0.0 ? std::numeric_limits<double>::infinity() : limiting_force / applied_force;
    out.safe = out.margin >= user_safety_factor;
    return out;
}

SafetyMargin safety_margin(double applied_force, const DiaphragmSpec& diaphragm, double kappa,
                           double user_safety_factor) {
    const plate::LimitingForce limit =
        plate::limiting_force(diaphragm.thickness, diaphragm.yield_strength, kappa, diaphragm.poisson_ratio);
    SafetyMargin out = safety_margin_against(applied_force, limit.force, user_safety_factor);
    out.branch_note = limit.note;
    return out;
}

const char* to_string(SweepParameter p) noexcept {
    switch (p) {
        case SweepParameter::turns: return "turns";
        case SweepParameter::conductor_width: return "width";
        case SweepParameter::turn_spacing: return "spacing";
        case SweepParameter::current: return "current";
        case SweepParameter::gap: return "gap";
    }
    return "unknown";
}

const char* to_string(SweepResponse r) noexcept {
    switch (r) {
        case SweepResponse::force: return "force";
        case SweepResponse::gradient: return "gradient";
        case SweepResponse::deflection: return "deflection";
    }
    return "unknown";
}

SweepParameter parse_sweep_parameter(const std::string& name) {
    for (SweepParameter p : {SweepParameter::turns, SweepParameter::conductor_width, SweepParameter::turn_spacing,
                             SweepParameter::current, SweepParameter::gap}) {
        if (name == to_string(p)) return p;
    }
    throw Error(ErrorKind::invalid_input, "unknown sweep parameter '" + name + "'");
}

SweepResponse parse_sweep_response(const std::string& name) {
    for (SweepResponse r : {SweepResponse::force, SweepResponse::gradient, SweepResponse::deflection}) {
        if (name == to_string(r)) return r;
    }
    throw Error(ErrorKind::invalid_input, "unknown sweep response '" + name + "'");
}

const char* to_string(Trend t) noexcept {
    switch (t) {
        case Trend::strictly_increasing: return "strictly_increasing";
        case Trend::strictly_decreasing: return "strictly_decreasing";
        case Trend::non_monotone: return "non_monotone";
    }
    return "unknown";
}

namespace {

double evaluate_point(const SweepSpec& spec, double value) {
    SweepFixture f = spec.held_constant;
    switch (spec.parameter) {
        case SweepParameter::turns:
            if (value < 1.0 || value != std::round(value)) {
                throw Error(ErrorKind::invalid_input, "turn counts must be whole numbers >= 1");
            }
            f.coil.turns = static_cast<int>(value);
            break;
        case SweepParameter::conductor_width: f.coil.conductor_width = value; break;
        case SweepParameter::turn_spacing: f.coil.turn_spacing = value; break;
        case SweepParameter::current: f.current = value; break;
        case SweepParameter::gap: f.gap = value; break;
    }

    switch (spec.response) {
        case SweepResponse::gradient: {
            const magnetics::LoopSet loops = magnetics::spiral_to_loops(f.coil, f.current, f.numerics.fidelity);
            return std::abs(magnetics::coil_dbz_dz(loops, 0.0, f.gap));
        }
        case SweepResponse::force:
            return std::abs(coil_force(f.coil, f.magnet, f.current, f.gap, f.model, f.numerics));
        case SweepResponse::deflection: {
            const double force = std::abs(coil_force(f.coil, f.magnet, f.current, f.gap, f.model, f.numerics));
            return plate::center_deflection(force, f.diaphragm.radius, f.magnet.radius,
                                            flexural_rigidity(f.diaphragm));
        }
    }
    return 0.0;
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec) {
    if (spec.values.size() < 3) throw Error(ErrorKind::invalid_input, "a sweep needs at least three values");
    if (!strictly_monotone(spec.values)) throw Error(ErrorKind::invalid_input, "sweep values must be strictly monotone");

    std::vector<std::future<double>> pending;
    pending.reserve(spec.values.size());
    for (double v : spec.values) {
        pending.push_back(std::async(std::launch::async, [&spec, v] { return evaluate_point(spec, v); }));
    }

    SweepResult out;
    out.spec = spec;
    for (std::size_t i = 0; i < spec.values.size(); ++i) out.rows.push_back({spec.values[i], pending[i].get()});

    std::vector<double> responses;
    for (const SweepRow& row : out.rows) responses.push_back(row.response);
    bool up = true;
    bool down = true;
    for (std::size_t i = 1; i < out.rows.size(); ++i) {
        const bool forward = out.rows[i].value > out.rows[i - 1].value;
        const bool rises = forward ? responses[i] > responses[i - 1] : responses[i] < responses[i - 1];
        const bool falls = forward ? responses[i] < responses[i - 1] : responses[i] > responses[i - 1];
        up = up && rises;
        down = down && falls;
    }
    out.trend = up ? Trend::strictly_increasing : down ? Trend::strictly_decreasing : Trend::non_monotone;
    return out;
}

TrendStudy TrendStudy::defaults() {
    TrendStudy study;
    study.fixture.coil = fixtures::study_coil();
    study.fixture.magnet = fixtures::reference_magnet();
    study.fixture.diaphragm = fixtures::reference_diaphragm();
    study.fixture.current = 1.0;
    study.fixture.gap = 0.5 * study.fixture.coil.inner_radius;
    study.fixture.model = ForceModel::point;
    return study;
}

TrendVerdicts evaluate_coil_trends(const TrendStudy& study) {
    auto sweep = [&](SweepParameter p, const std::vector<double>& values) {
        SweepSpec spec;
        spec.parameter = p;
        spec.values = values;
        spec.held_constant = study.fixture;
        spec.response = SweepResponse::force;
        return run_sweep(spec);
    };

    TrendVerdicts out;
    out.turns = sweep(SweepParameter::turns, study.turns);
    out.widths = sweep(SweepParameter::conductor_width, study.widths);
    out.spacings = sweep(SweepParameter::turn_spacing, study.spacings);

    double best_n = -1.0;
    for (const SweepRow& a : out.turns.rows) {
        for (const SweepRow& b : out.turns.rows) {
            if (b.value == 2.0 * a.value && a.value > best_n) {
                best_n = a.value;
                out.turns_doubling_gain = b.response / a.response - 1.0;
            }
        }
    }
    if (best_n < 0.0) throw Error(ErrorKind::invalid_input, "turns grid must contain a pair n, 2n");
    out.turns_plateau = out.turns_doubling_gain <= study.plateau_threshold;
    out.width_decreasing = out.widths.trend == Trend::strictly_decreasing;
    out.spacing_decreasing = out.spacings.trend == Trend::strictly_decreasing;
    return out;
}

DesignConfig reference_design_config() {
    DesignConfig config;
    config.coil = fixtures::reference_coil();
    config.magnet = fixtures::reference_magnet();
    config.diaphragm = fixtures::reference_diaphragm();
    return config;
}

DesignReport design_pipeline(const DesignConfig& config) {
    run_stage("validate", [&] {
        config.coil.validate();
        config.magnet.validate();
        config.diaphragm.validate();
        if (!(config.target_deflection >= 0.0)) throw Error(ErrorKind::invalid_input, "target deflection must be >= 0");
        if (!(config.safety_factor > 0.0)) throw Error(ErrorKind::invalid_input, "safety factor must be > 0");
        if (!(config.current_ceiling > 0.0)) throw Error(ErrorKind::invalid_input, "current ceiling must be > 0");
        return 0;
    });

    DesignReport report;
    report.target_deflection = config.target_deflection;
    report.user_safety_factor = config.safety_factor;
    report.current_ceiling = config.current_ceiling;
    report.gap_objective = to_string(config.gap_objective);
    report.force_model = to_string(config.force_model);
    report.flexural_rigidity = flexural_rigidity(config.diaphragm);
    report.kappa = kappa(config.diaphragm, config.magnet);

    report.required_force = run_stage("force_for_deflection", [&] {
        return plate::force_for_deflection(config.target_deflection, config.diaphragm.radius, config.magnet.radius,
                                           report.flexural_rigidity);
    });

    report.optimal_gap = run_stage("optimal_gap", [&] {
        return optimal_gap(config.coil, config.magnet, 1.0, GapSearch{}, config.gap_objective, config.numerics).gap;
    });

    const CurrentSolution current = run_stage("solve_current", [&] {
        return solve_current(config.coil, config.magnet, report.optimal_gap, report.required_force,
                             config.current_ceiling, config.force_model, config.numerics);
    });
    report.required_current = current.current;
    report.force_per_ampere = current.force_per_ampere;
    report.attraction = current.force_per_ampere < 0.0;

    const SafetyMargin margin = run_stage("safety_margin", [&] {
        return safety_margin(report.required_force, config.diaphragm, report.kappa, config.safety_factor);
    });
    report.limiting_force = margin.limiting_force;
    report.safety_factor_achieved = margin.margin;
    report.limiting_force_branch = margin.branch_note;

    report.feasible = margin.safe && current.within_ceiling;
    if (!current.within_ceiling) {
        report.infeasible_stage = "solve_current";
    } else if (!margin.safe) {
        report.infeasible_stage = "safety_margin";
    }

    auto& notes = report.provenance;
    notes.push_back(std::string("force model: ") + report.force_model +
                    " (rigid magnet, M_z = B_r/mu0; coil as concentric filament loops, fidelity " +
                    std::to_string(config.numerics.fidelity) + ")");
    notes.push_back(std::string("gap objective: ") + report.gap_objective + "; gap measured to the magnet mid-plane");
    notes.push_back("limiting force: " + margin.branch_note);
    notes.push_back("plate model: small-deflection Kirchhoff theory, no membrane correction");
    const SafetyMargin tabulated =
        safety_margin_against(report.required_force, fixtures::kReferenceLimitingForce, config.safety_factor);
    std::ostringstream conflict;
    conflict << "tabulated limiting force 377 uN disagrees with the closed-form value "
             << format_uN(report.limiting_force) << "; margin against 377 uN is " << tabulated.margin
             << (tabulated.safe ? " (safe)" : " (unsafe)");
    notes.push_back(conflict.str());
    if (!current.within_ceiling) {
        std::ostringstream s;
        s << "required current " << current.current << " A exceeds the ceiling " << config.current_ceiling << " A";
        notes.push_back(s.str());
    }
    return report;
}

}  // namespace micropump::design
