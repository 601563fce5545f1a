#include "micropump/cli_io.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>

#include "json.hpp"
#include "micropump/error.hpp"

namespace micropump::io {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

[[noreturn]] void schema_error(const std::string& key, const std::string& constraint) {
    throw Error(ErrorKind::invalid_input, "config: " + key + " " + constraint);
}

std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
        throw Error(ErrorKind::io, "sha256 digest failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * length);
    for (unsigned int i = 0; i < length; ++i) {
        out.push_back(kHex[digest[i] >> 4]);
        out.push_back(kHex[digest[i] & 0x0f]);
    }
    return out;
}

// Reads one object section, rejecting keys outside `allowed`.
class Section {
public:
    Section(const json& root, std::string name, std::set<std::string> allowed, bool required,
            std::vector<std::string>& defaults)
        : name_(std::move(name)), defaults_(defaults) {
        if (!root.contains(name_)) {
            if (required) schema_error(name_, "is required");
            node_ = json::object();
        } else {
            node_ = root.at(name_);
            if (!node_.is_object()) schema_error(name_, "must be an object");
        }
        for (const auto& [key, value] : node_.items()) {
            if (!allowed.contains(key)) schema_error(name_ + "." + key, "is not a recognized key");
        }
    }

    double number(const std::string& key, std::optional<double> fallback = std::nullopt) {
        const std::string path = name_ + "." + key;
        if (!node_.contains(key)) {
            if (!fallback) schema_error(path, "is required");
            std::ostringstream s;
            s << path << " = " << *fallback;
            defaults_.push_back(s.str());
            return *fallback;
        }
        const json& v = node_.at(key);
        if (!v.is_number()) schema_error(path, "must be a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) schema_error(path, "must be finite");
        return d;
    }

    double positive(const std::string& key, std::optional<double> fallback = std::nullopt) {
        const double d = number(key, fallback);
        if (!(d > 0.0)) schema_error(name_ + "." + key, "must be > 0");
        return d;
    }

    int integer(const std::string& key, std::optional<int> fallback = std::nullopt) {
        const std::string path = name_ + "." + key;
        if (!node_.contains(key)) {
            if (!fallback) schema_error(path, "is required");
            defaults_.push_back(path + " = " + std::to_string(*fallback));
            return *fallback;
        }
        const json& v = node_.at(key);
        if (!v.is_number_integer()) schema_error(path, "must be an integer");
        return v.get<int>();
    }

private:
    std::string name_;
    json node_;
    std::vector<std::string>& defaults_;
};

ParsedConfig parse_document(const json& root) {
    if (!root.is_object()) schema_error("<root>", "must be a JSON object");
    static const std::set<std::string> kTop = {"schema_version", "coil", "magnet", "diaphragm", "target", "numerics"};
    for (const auto& [key, value] : root.items()) {
        if (!kTop.contains(key)) schema_error(key, "is not a recognized key");
    }
    if (!root.contains("schema_version")) schema_error("schema_version", "is required");
    if (!root.at("schema_version").is_number_integer() || root.at("schema_version").get<int>() != kSchemaVersion) {
        schema_error("schema_version", "must be " + std::to_string(kSchemaVersion));
    }

    ParsedConfig out;
    auto& defaults = out.defaults_applied;
    design::DesignConfig& c = out.config;

    Section coil(root, "coil", {"inner_radius_um", "turns", "width_um", "spacing_um", "thickness_um", "current_a"},
                 true, defaults);
    c.coil.inner_radius = units::from_um(coil.positive("inner_radius_um"));
    c.coil.turns = coil.integer("turns");
    if (c.coil.turns < 1) schema_error("coil.turns", "must be >= 1");
    c.coil.conductor_width = units::from_um(coil.positive("width_um"));
    const double spacing = coil.number("spacing_um");
    if (!(spacing >= 0.0)) schema_error("coil.spacing_um", "must be >= 0");
    c.coil.turn_spacing = units::from_um(spacing);
    c.coil.conductor_thickness = units::from_um(coil.positive("thickness_um", 20.0));
    c.operating_current = coil.positive("current_a");

    Section magnet(root, "magnet", {"radius_um", "thickness_um", "remanence_t"}, true, defaults);
    c.magnet.radius = units::from_um(magnet.positive("radius_um"));
    c.magnet.thickness = units::from_um(magnet.positive("thickness_um"));
    c.magnet.remanence = magnet.positive("remanence_t");
    if (c.magnet.remanence > 1.5) schema_error("magnet.remanence_t", "must be <= 1.5");

    Section diaphragm(root, "diaphragm",
                      {"radius_um", "thickness_um", "youngs_modulus_pa", "poisson_ratio", "yield_strength_pa"}, true,
                      defaults);
    c.diaphragm.radius = units::from_um(diaphragm.positive("radius_um"));
    c.diaphragm.thickness = units::from_um(diaphragm.positive("thickness_um"));
    c.diaphragm.youngs_modulus = diaphragm.positive("youngs_modulus_pa");
    c.diaphragm.poisson_ratio = diaphragm.positive("poisson_ratio");
    if (c.diaphragm.poisson_ratio > 0.5 + 1e-9) schema_error("diaphragm.poisson_ratio", "must lie in (0, 0.5]");
    c.diaphragm.yield_strength = diaphragm.positive("yield_strength_pa");
    if (!(c.diaphragm.radius > c.magnet.radius)) {
        schema_error("diaphragm.radius_um", "must exceed magnet.radius_um (kappa > 1)");
    }

    Section target(root, "target", {"deflection_um", "safety_factor", "current_ceiling_a"}, true, defaults);
    const double deflection = target.number("deflection_um");
    if (!(deflection >= 0.0)) schema_error("target.deflection_um", "must be >= 0");
    c.target_deflection = units::from_um(deflection);
    c.safety_factor = target.positive("safety_factor", 2.0);
    c.current_ceiling = target.positive("current_ceiling_a", 1.0);

    Section numerics(root, "numerics", {"quadrature_order", "fd_nodes", "fidelity"}, false, defaults);
    c.numerics.quadrature_order = numerics.integer("quadrature_order", 16);
    if (c.numerics.quadrature_order < 1 || c.numerics.quadrature_order > 64) {
        schema_error("numerics.quadrature_order", "must lie in [1, 64]");
    }
    c.numerics.fd_nodes = numerics.integer("fd_nodes", 512);
    if (c.numerics.fd_nodes < 64) schema_error("numerics.fd_nodes", "must be >= 64");
    c.numerics.fidelity = numerics.integer("fidelity", 1);
    if (c.numerics.fidelity < 1) schema_error("numerics.fidelity", "must be >= 1");

    out.sha256 = sha256_hex(root.dump());
    return out;
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

ParsedConfig parse_config_text(std::string_view text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::invalid_input, std::string("config: malformed JSON: ") + e.what());
    }
    try {
        return parse_document(root);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::invalid_input, std::string("config: ") + e.what());
    }
}

ParsedConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::io, "cannot open config file '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw Error(ErrorKind::io, "cannot read config file '" + path.string() + "'");
    return parse_config_text(buffer.str());
}

Table field_profile_table(std::span<const FieldSample> samples) {
    Table t{{"z_um", "bz_T", "dbz_dz_T_per_m"}, {}};
    for (const FieldSample& s : samples) t.rows.push_back({units::to_um(s.z), s.bz, s.dbz_dz});
    return t;
}

Table radial_profile_table(const plate::RadialProfile& profile) {
    Table t{{"r_um", "w_um"}, {}};
    for (std::size_t i = 0; i < profile.r.size(); ++i) {
        t.rows.push_back({units::to_um(profile.r[i]), units::to_um(profile.w[i])});
    }
    return t;
}

Table plate_field_table(const plate::PlateField& field) {
    Table t{{"x_um", "y_um", "w_um"}, {}};
    for (int j = 0; j < field.ny; ++j) {
        for (int i = 0; i < field.nx; ++i) {
            t.rows.push_back({units::to_um(field.x(i)), units::to_um(field.y(j)), units::to_um(field.at(i, j))});
        }
    }
    return t;
}

std::string to_csv(const Table& table) {
    std::string out;
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        if (i) out += ',';
        out += table.header[i];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format_number(row[i]);
        }
        out += '\n';
    }
    return out;
}

Table parse_csv(std::string_view text) {
    Table t;
    std::size_t pos = 0;
    bool header = true;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        const std::string line(text.substr(pos, end - pos));
        pos = end + 1;
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
        if (header) {
            t.header = cells;
            header = false;
            continue;
        }
        std::vector<double> row;
        for (const std::string& cell : cells) {
            char* stop = nullptr;
            const double v = std::strtod(cell.c_str(), &stop);
            if (stop == cell.c_str()) throw Error(ErrorKind::invalid_input, "csv: non-numeric cell '" + cell + "'");
            row.push_back(v);
        }
        if (row.size() != t.header.size()) throw Error(ErrorKind::invalid_input, "csv: row width mismatch");
        t.rows.push_back(std::move(row));
    }
    return t;
}

void write_output(const std::filesystem::path& path, std::string_view content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::io, "cannot write '" + path.string() + "'");
    out << content;
    if (!out) throw Error(ErrorKind::io, "write to '" + path.string() + "' failed");
}

void emit_profile_csv(const Table& table, const std::filesystem::path& path) {
    if (table.rows.empty()) throw Error(ErrorKind::invalid_input, "refusing to emit an empty profile");
    write_output(path, to_csv(table));
}

std::string report_to_json(const DesignReport& r) {
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["config_sha256"] = r.config_hash;
    j["feasible"] = r.feasible;
    j["infeasible_stage"] = r.infeasible_stage ? json(*r.infeasible_stage) : json(nullptr);
    j["target_deflection_um"] = units::to_um(r.target_deflection);
    j["required_force_uN"] = units::to_uN(r.required_force);
    j["required_current_a"] = r.required_current;
    j["current_ceiling_a"] = r.current_ceiling;
    j["optimal_gap_um"] = units::to_um(r.optimal_gap);
    j["force_per_ampere_uN"] = units::to_uN(std::abs(r.force_per_ampere));
    j["attraction"] = r.attraction;
    j["limiting_force_uN"] = units::to_uN(r.limiting_force);
    j["safety_factor_achieved"] = number_or_null(r.safety_factor_achieved);
    j["user_safety_factor"] = r.user_safety_factor;
    j["kappa"] = r.kappa;
    j["flexural_rigidity_Nm"] = r.flexural_rigidity;
    j["gap_objective"] = r.gap_objective;
    j["force_model"] = r.force_model;
    j["limiting_force_branch"] = r.limiting_force_branch;
    j["provenance"] = r.provenance;
    return j.dump(2) + "\n";
}

std::string report_to_text(const DesignReport& r) {
    std::ostringstream s;
    s.precision(6);
    s << "Micropump actuator design report\n"
      << "  config sha256        : " << (r.config_hash.empty() ? "-" : r.config_hash) << "\n"
      << "  target deflection    : " << units::to_um(r.target_deflection) << " um\n"
      << "  required force       : " << units::to_uN(r.required_force) << " uN\n"
      << "  optimal gap          : " << units::to_um(r.optimal_gap) << " um (" << r.gap_objective << ")\n"
      << "  force at 1 A         : " << units::to_uN(std::abs(r.force_per_ampere)) << " uN ("
      << (r.attraction ? "attraction" : "repulsion") << ", " << r.force_model << " model)\n"
      << "  required current     : " << r.required_current << " A (ceiling " << r.current_ceiling << " A)\n"
      << "  limiting force       : " << units::to_uN(r.limiting_force) << " uN\n"
      << "  safety factor        : ";
    if (std::isfinite(r.safety_factor_achieved)) {
        s << r.safety_factor_achieved;
    } else {
        s << "inf";
    }
    s << " (required " << r.user_safety_factor << ")\n"
      << "  feasible             : " << (r.feasible ? "yes" : "no");
    if (r.infeasible_stage) s << " (failed at " << *r.infeasible_stage << ")";
    s << "\n  notes:\n";
    for (const std::string& note : r.provenance) s << "    - " << note << "\n";
    return s.str();
}

void emit_report(const DesignReport& report, const std::filesystem::path& path, ReportFormat format) {
    write_output(path, format == ReportFormat::json ? report_to_json(report) : report_to_text(report));
}

DesignReport run_design(const ParsedConfig& parsed) {
    DesignReport report = design::design_pipeline(parsed.config);
    report.config_hash = parsed.sha256;
    for (const std::string& d : parsed.defaults_applied) report.provenance.push_back("default applied: " + d);
    return report;
}

}  // namespace micropump::io
