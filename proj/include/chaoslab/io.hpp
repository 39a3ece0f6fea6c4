#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace chaoslab {

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

using Cell = std::variant<double, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

// %.17g — the shortest form that round-trips IEEE-754 doubles bit-exactly.
std::string format_double(double v);

// Header line of column names, then one record per line; doubles with 17
// significant digits. Throws IoError on unwritable paths.
void emit_csv(const Table& table, const std::filesystem::path& path);

// Reads back a CSV written by emit_csv: every cell as a string.
struct RawCsv {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};
RawCsv read_csv(const std::filesystem::path& path);

// Column by name parsed as doubles; throws DomainError on unknown column or
// non-numeric cell.
std::vector<double> numeric_column(const RawCsv& csv, const std::string& name);

// ---------------------------------------------------------------------------
// SVG line plots (standalone SVG 1.1, one polyline per series, axis box with
// min/max labels)
// ---------------------------------------------------------------------------

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

void emit_svg_plot(std::span<const Series> series, const std::filesystem::path& path,
                   const std::string& title = "");

// ---------------------------------------------------------------------------
// Run manifest
// ---------------------------------------------------------------------------

struct RunManifest {
    std::string artifact_version;
    std::string subcommand;
    std::uint64_t seed = 0;
    std::string config_text;             // canonical serialized spec snapshot
    std::vector<std::string> outputs;    // file names relative to the run dir
    double duration_seconds = 0.0;
    std::map<std::string, double> metrics;     // headline numbers (e.g. suppression_ratio)
    std::map<std::string, std::string> notes;  // headline strings (e.g. verdicts)
};

// Written atomically (temp file + rename) next to the outputs it describes.
void write_manifest(const RunManifest& manifest, const std::filesystem::path& path);
RunManifest read_manifest(const std::filesystem::path& path);

void atomic_write_text(const std::string& text, const std::filesystem::path& path);

}  // namespace chaoslab
