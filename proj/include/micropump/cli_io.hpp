#pragma once

// Config ingestion and result serialization. Boundary units are
// micrometers, amperes, micronewtons and tesla; everything returned from
// here is SI.

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "micropump/core_model.hpp"
#include "micropump/design.hpp"
#include "micropump/plate_mechanics.hpp"

namespace micropump::io {

inline constexpr int kSchemaVersion = 1;

struct ParsedConfig {
    design::DesignConfig config;
    std::vector<std::string> defaults_applied;  // e.g. "coil.thickness_um = 20"
    std::string sha256;                         // of the canonical (sorted, compact) input document
};

/// Throws Error(io) for missing/unreadable files and Error(invalid_input)
/// for malformed documents or schema violations; messages name the key.
ParsedConfig parse_config(const std::filesystem::path& path);
ParsedConfig parse_config_text(std::string_view text);

/// Column-labelled numeric table.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

Table field_profile_table(std::span<const FieldSample> samples);   // z_um,bz_T,dbz_dz_T_per_m
Table radial_profile_table(const plate::RadialProfile& profile);   // r_um,w_um
Table plate_field_table(const plate::PlateField& field);           // x_um,y_um,w_um

/// Header + rows, full-precision scientific numbers, LF endings.
std::string to_csv(const Table& table);
/// Inverse of to_csv; used by tests and tools that re-read emitted data.
Table parse_csv(std::string_view text);

/// Writes to `path`, or stdout when path is empty or "-". Throws Error(io).
void write_output(const std::filesystem::path& path, std::string_view content);

/// Rejects empty tables, then writes CSV.
void emit_profile_csv(const Table& table, const std::filesystem::path& path);

enum class ReportFormat { json, text };

std::string report_to_json(const DesignReport& report);
std::string report_to_text(const DesignReport& report);
void emit_report(const DesignReport& report, const std::filesystem::path& path, ReportFormat format);

/// Runs the pipeline on a parsed config and folds the config hash and any
/// applied defaults into the report's provenance.
DesignReport run_design(const ParsedConfig& parsed);

}  // namespace micropump::io
