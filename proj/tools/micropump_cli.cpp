// Command-line front end: field / force / deflect / shapes / limit / resist /
// sweep / design. Exit codes: 0 ok, 1 infeasible design, 2 input error,
// 3 numerical error.

#include <cmath>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "micropump/cli_io.hpp"
#include "micropump/design.hpp"
#include "micropump/error.hpp"
#include "micropump/magnetics.hpp"
#include "micropump/plate_mechanics.hpp"

namespace mp = micropump;
namespace units = micropump::units;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 1;
constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

struct Common {
    std::string config = MICROPUMP_DEFAULT_CONFIG;
    std::string out = "-";
    std::string format = "csv";
};

void add_common(CLI::App* cmd, Common& common, std::vector<std::string> formats) {
    cmd->add_option("--config", common.config, "JSON design config")->capture_default_str();
    cmd->add_option("--out", common.out, "output path ('-' for stdout)")->capture_default_str();
    cmd->add_option("--format", common.format, "output format")
        ->check(CLI::IsMember(std::move(formats)))
        ->capture_default_str();
}

std::string table_as(const mp::io::Table& table, const std::string& format) {
    if (format != "json") return mp::io::to_csv(table);
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        nlohmann::ordered_json obj;
        for (std::size_t i = 0; i < row.size(); ++i) obj[table.header[i]] = row[i];
        rows.push_back(obj);
    }
    return rows.dump(2) + "\n";
}

void emit_table(const mp::io::Table& table, const Common& common) {
    if (table.rows.empty()) throw mp::Error(mp::ErrorKind::invalid_input, "nothing to emit");
    mp::io::write_output(common.out, table_as(table, common.format));
}

void emit_json(const nlohmann::ordered_json& j, const Common& common) {
    mp::io::write_output(common.out, j.dump(2) + "\n");
}

std::string text_of(const nlohmann::ordered_json& j) {
    std::ostringstream s;
    for (const auto& [key, value] : j.items()) s << key << ": " << value.dump() << "\n";
    return s.str();
}

mp::design::ForceModel parse_model(const std::string& name) {
    return name == "point" ? mp::design::ForceModel::point : mp::design::ForceModel::volume;
}

std::vector<double> linspace(double lo, double hi, int count) {
    std::vector<double> v;
    for (int i = 0; i < count; ++i) v.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
    return v;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Electromagnetic diaphragm micropump design toolkit"};
    app.require_subcommand(1);

    // field
    Common field_opts;
    double field_r_um = 0.0, z_min_um = 10.0, z_max_um = 3000.0, z_step_um = 10.0;
    double field_current = std::nan("");
    auto* field = app.add_subcommand("field", "B_z and dB_z/dz profile along z");
    add_common(field, field_opts, {"csv", "json"});
    field->add_option("--r-um", field_r_um, "radial offset")->capture_default_str();
    field->add_option("--z-min-um", z_min_um)->capture_default_str();
    field->add_option("--z-max-um", z_max_um)->capture_default_str();
    field->add_option("--z-step-um", z_step_um)->capture_default_str();
    field->add_option("--current-a", field_current, "coil current (default: config coil.current_a)");

    // force
    Common force_opts;
    double force_gap_um = 620.0;
    std::string force_model = "volume";
    auto* force = app.add_subcommand("force", "force magnitude vs current, 0.2 to 1.0 A");
    add_common(force, force_opts, {"csv", "json"});
    force->add_option("--gap-um", force_gap_um, "magnet mid-plane height")->capture_default_str();
    force->add_option("--model", force_model)->check(CLI::IsMember({"point", "volume"}))->capture_default_str();

    // deflect
    Common deflect_opts;
    std::vector<double> deflect_forces_uN;
    double profile_force_uN = std::nan("");
    auto* deflect = app.add_subcommand("deflect", "closed-form vs finite-difference center deflection");
    add_common(deflect, deflect_opts, {"csv", "json"});
    deflect->add_option("--forces-uN", deflect_forces_uN, "forces (default 4.58 .. 18.4 uN, 9 points)")->delimiter(',');
    deflect->add_option("--profile-force-uN", profile_force_uN, "emit the radial profile r_um,w_um at this force");

    // shapes
    Common shapes_opts;
    std::vector<double> shape_forces_uN;
    double aspect = 2.0;
    int rect_nodes = 129;
    std::string field_shape;
    auto* shapes = app.add_subcommand("shapes", "circle / square / rectangle comparison at equal area");
    add_common(shapes, shapes_opts, {"csv", "json"});
    shapes->add_option("--forces-uN", shape_forces_uN, "forces (default 4.58 .. 18.4 uN, 9 points)")->delimiter(',');
    shapes->add_option("--aspect", aspect, "rectangle aspect ratio")->capture_default_str();
    shapes->add_option("--rect-nodes", rect_nodes, "coarse nodes on the shorter side")->capture_default_str();
    shapes->add_option("--field", field_shape, "emit x_um,y_um,w_um for this shape at 18.4 uN")
        ->check(CLI::IsMember({"square", "rectangle"}));

    // limit
    Common limit_opts;
    limit_opts.format = "text";
    auto* limit = app.add_subcommand("limit", "limiting force and safety margin");
    add_common(limit, limit_opts, {"json", "text"});

    // resist
    Common resist_opts;
    resist_opts.format = "text";
    double resistivity = mp::kCopperResistivity;
    auto* resist = app.add_subcommand("resist", "coil DC resistance");
    add_common(resist, resist_opts, {"json", "text"});
    resist->add_option("--resistivity", resistivity, "conductor resistivity [ohm m]")->capture_default_str();

    // sweep
    Common sweep_opts;
    std::string sweep_parameter = "width";
    std::string sweep_response = "force";
    std::vector<double> sweep_values;
    double sweep_gap_um = std::nan("");
    std::string sweep_model = "point";
    bool trends = false;
    auto* sweep = app.add_subcommand("sweep", "coil-parameter sweep (study geometry) and trend verdicts");
    add_common(sweep, sweep_opts, {"csv", "json"});
    sweep->add_option("--parameter", sweep_parameter)
        ->check(CLI::IsMember({"turns", "width", "spacing", "current", "gap"}))
        ->capture_default_str();
    sweep->add_option("--values", sweep_values, "values in um (width/spacing/gap), A (current) or turns")
        ->delimiter(',');
    sweep->add_option("--response", sweep_response)
        ->check(CLI::IsMember({"force", "gradient", "deflection"}))
        ->capture_default_str();
    sweep->add_option("--gap-um", sweep_gap_um, "fixed gap (default inner radius / 2)");
    sweep->add_option("--model", sweep_model)->check(CLI::IsMember({"point", "volume"}))->capture_default_str();
    sweep->add_flag("--trends", trends, "run the turns/width/spacing trend verdicts");

    // design
    Common design_opts;
    design_opts.format = "text";
    std::string gap_objective = "on_axis_gradient";
    auto* design = app.add_subcommand("design", "full inverse-design pipeline");
    add_common(design, design_opts, {"json", "text"});
    design->add_option("--gap-objective", gap_objective)
        ->check(CLI::IsMember({"on_axis_gradient", "volume_force"}))
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (*field) {
            const auto parsed = mp::io::parse_config(field_opts.config);
            const double current = std::isnan(field_current) ? parsed.config.operating_current : field_current;
            const auto loops = mp::magnetics::spiral_to_loops(parsed.config.coil, current,
                                                              parsed.config.numerics.fidelity);
            std::vector<double> heights;
            for (double z = z_min_um; z <= z_max_um + 1e-9; z += z_step_um) heights.push_back(units::from_um(z));
            const auto samples = mp::magnetics::axial_profile(loops, units::from_um(field_r_um), heights);
            emit_table(mp::io::field_profile_table(samples), field_opts);
        } else if (*force) {
            const auto parsed = mp::io::parse_config(force_opts.config);
            const auto& c = parsed.config;
            const double per_amp = mp::design::coil_force(c.coil, c.magnet, 1.0, units::from_um(force_gap_um),
                                                          parse_model(force_model), c.numerics);
            mp::io::Table t{{"current_a", "force_uN"}, {}};
            for (int i = 2; i <= 10; ++i) {
                const double amps = i / 10.0;
                t.rows.push_back({amps, units::to_uN(std::abs(per_amp * amps))});
            }
            emit_table(t, force_opts);
        } else if (*deflect) {
            const auto parsed = mp::io::parse_config(deflect_opts.config);
            const auto& c = parsed.config;
            const double rigidity = mp::flexural_rigidity(c.diaphragm);
            if (!std::isnan(profile_force_uN)) {
                const auto profile = mp::plate::solve_circular_plate(
                    c.diaphragm.radius, mp::plate::LoadPatch::central_disc(c.magnet.radius, units::from_uN(profile_force_uN)),
                    rigidity, c.numerics.fd_nodes);
                emit_table(mp::io::radial_profile_table(profile), deflect_opts);
            } else {
                if (deflect_forces_uN.empty()) deflect_forces_uN = linspace(4.58, 18.4, 9);
                const double fd_per_newton =
                    mp::plate::solve_circular_plate(c.diaphragm.radius,
                                                    mp::plate::LoadPatch::central_disc(c.magnet.radius, 1.0), rigidity,
                                                    c.numerics.fd_nodes)
                        .center();
                mp::io::Table t{{"force_uN", "w_closed_um", "w_fd_um"}, {}};
                for (double f_uN : deflect_forces_uN) {
                    const double f = units::from_uN(f_uN);
                    t.rows.push_back({f_uN,
                                      units::to_um(mp::plate::center_deflection(f, c.diaphragm.radius, c.magnet.radius,
                                                                                rigidity)),
                                      units::to_um(f * fd_per_newton)});
                }
                emit_table(t, deflect_opts);
            }
        } else if (*shapes) {
            const auto parsed = mp::io::parse_config(shapes_opts.config);
            const auto& c = parsed.config;
            if (!field_shape.empty()) {
                const auto geom = field_shape == "square"
                                      ? mp::plate::PlateGeometry::equal_area_square(c.diaphragm.radius,
                                                                                    c.diaphragm.thickness)
                                      : mp::plate::PlateGeometry::equal_area_rectangle(
                                            c.diaphragm.radius, c.diaphragm.thickness, aspect);
                const auto w = mp::plate::solve_rect_plate(
                    geom, mp::plate::LoadPatch::central_disc(c.magnet.radius, units::from_uN(18.4)),
                    mp::flexural_rigidity(c.diaphragm), rect_nodes);
                emit_table(mp::io::plate_field_table(w), shapes_opts);
            } else {
                if (shape_forces_uN.empty()) shape_forces_uN = linspace(4.58, 18.4, 9);
                std::vector<double> forces;
                for (double f : shape_forces_uN) forces.push_back(units::from_uN(f));
                mp::plate::ShapeFixture fixture{c.diaphragm, c.magnet.radius, aspect, c.numerics.fd_nodes, rect_nodes};
                const auto cmp = mp::plate::compare_shapes(fixture, forces);
                for (const auto& w : cmp.warnings) std::cerr << "warning: " << w << "\n";
                mp::io::Table t{{"force_uN", "w_circle_um", "w_square_um", "w_rectangle_um"}, {}};
                for (const auto& row : cmp.rows) {
                    t.rows.push_back({units::to_uN(row.force), units::to_um(row.w_circle), units::to_um(row.w_square),
                                      units::to_um(row.w_rectangle)});
                }
                emit_table(t, shapes_opts);
            }
        } else if (*limit) {
            const auto parsed = mp::io::parse_config(limit_opts.config);
            const auto& c = parsed.config;
            const double k = mp::kappa(c.diaphragm, c.magnet);
            const double rigidity = mp::flexural_rigidity(c.diaphragm);
            const double required =
                mp::plate::force_for_deflection(c.target_deflection, c.diaphragm.radius, c.magnet.radius, rigidity);
            const auto margin = mp::design::safety_margin(required, c.diaphragm, k, c.safety_factor);
            const auto tabulated =
                mp::design::safety_margin_against(required, mp::fixtures::kReferenceLimitingForce, c.safety_factor);
            nlohmann::ordered_json j;
            j["k"] = k;
            j["branch"] = margin.branch_note;
            j["limiting_force_uN"] = units::to_uN(margin.limiting_force);
            j["required_force_uN"] = units::to_uN(required);
            j["margin"] = std::isfinite(margin.margin) ? nlohmann::json(margin.margin) : nlohmann::json(nullptr);
            j["safe"] = margin.safe;
            j["reference_limiting_force_uN"] = 377.0;
            j["margin_vs_reference"] =
                std::isfinite(tabulated.margin) ? nlohmann::json(tabulated.margin) : nlohmann::json(nullptr);
            j["safe_vs_reference"] = tabulated.safe;
            if (limit_opts.format == "json") {
                emit_json(j, limit_opts);
            } else {
                mp::io::write_output(limit_opts.out, text_of(j));
            }
        } else if (*resist) {
            const auto parsed = mp::io::parse_config(resist_opts.config);
            const auto& coil = parsed.config.coil;
            nlohmann::ordered_json j;
            j["resistance_ohm"] = mp::magnetics::coil_resistance(coil, resistivity);
            j["conductor_length_mm"] = mp::magnetics::coil_length(coil) * 1e3;
            j["resistivity_ohm_m"] = resistivity;
            j["pitch_um"] = units::to_um(mp::derive_pitch(coil));
            j["outer_radius_um"] = units::to_um(mp::outer_radius(coil));
            j["reference_resistance_ohm"] = mp::fixtures::kReferenceResistance;
            if (resist_opts.format == "json") {
                emit_json(j, resist_opts);
            } else {
                mp::io::write_output(resist_opts.out, text_of(j));
            }
        } else if (*sweep) {
            mp::design::TrendStudy study = mp::design::TrendStudy::defaults();
            if (!std::isnan(sweep_gap_um)) study.fixture.gap = units::from_um(sweep_gap_um);
            study.fixture.model = parse_model(sweep_model);
            if (trends) {
                const auto verdicts = mp::design::evaluate_coil_trends(study);
                nlohmann::ordered_json j;
                j["gap_um"] = units::to_um(study.fixture.gap);
                j["turns_doubling_gain"] = verdicts.turns_doubling_gain;
                j["turns_plateau"] = verdicts.turns_plateau;
                j["width_decreasing"] = verdicts.width_decreasing;
                j["spacing_decreasing"] = verdicts.spacing_decreasing;
                auto rows = [](const mp::design::SweepResult& r, double scale) {
                    nlohmann::ordered_json a = nlohmann::ordered_json::array();
                    for (const auto& row : r.rows) a.push_back({row.value / scale, units::to_uN(row.response)});
                    return a;
                };
                j["turns_force_uN"] = rows(verdicts.turns, 1.0);
                j["width_um_force_uN"] = rows(verdicts.widths, units::kMicro);
                j["spacing_um_force_uN"] = rows(verdicts.spacings, units::kMicro);
                emit_json(j, sweep_opts);
                return verdicts.all() ? kExitOk : kExitInfeasible;
            }
            mp::design::SweepSpec spec;
            spec.parameter = mp::design::parse_sweep_parameter(sweep_parameter);
            spec.response = mp::design::parse_sweep_response(sweep_response);
            spec.held_constant = study.fixture;
            const bool micro = spec.parameter == mp::design::SweepParameter::conductor_width ||
                               spec.parameter == mp::design::SweepParameter::turn_spacing ||
                               spec.parameter == mp::design::SweepParameter::gap;
            if (sweep_values.empty()) {
                throw mp::Error(mp::ErrorKind::invalid_input, "--values is required unless --trends is given");
            }
            for (double v : sweep_values) spec.values.push_back(micro ? units::from_um(v) : v);
            const auto result = mp::design::run_sweep(spec);
            const std::string unit = spec.response == mp::design::SweepResponse::force      ? "_uN"
                                     : spec.response == mp::design::SweepResponse::gradient ? "_T_per_m"
                                                                                            : "_um";
            mp::io::Table t{{sweep_parameter + (micro ? "_um" : ""), sweep_response + unit}, {}};
            for (const auto& row : result.rows) {
                const double resp = spec.response == mp::design::SweepResponse::gradient ? row.response
                                                                                         : row.response / units::kMicro;
                t.rows.push_back({micro ? units::to_um(row.value) : row.value, resp});
            }
            emit_table(t, sweep_opts);
            std::cerr << "trend: " << mp::design::to_string(result.trend) << "\n";
        } else if (*design) {
            auto parsed = mp::io::parse_config(design_opts.config);
            parsed.config.gap_objective = gap_objective == "volume_force" ? mp::design::GapObjective::volume_force
                                                                          : mp::design::GapObjective::on_axis_gradient;
            const auto report = mp::io::run_design(parsed);
            mp::io::emit_report(report, design_opts.out,
                                design_opts.format == "json" ? mp::io::ReportFormat::json : mp::io::ReportFormat::text);
            return report.feasible ? kExitOk : kExitInfeasible;
        }
    } catch (const mp::Error& e) {
        std::cerr << "error [" << mp::to_string(e.kind()) << "]: " << e.what() << "\n";
        return e.is_numerical() ? kExitNumerical : kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitOk;
}
