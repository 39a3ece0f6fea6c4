#include "chaoslab/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "chaoslab/errors.hpp"
#include "chaoslab/version.hpp"

namespace chaoslab {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void atomic_write_text(const std::string& text, const std::filesystem::path& path) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out)
            throw IoError("cannot open " + tmp.string() + " for writing");
        out << text;
        if (!out)
            throw IoError("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec)
        throw IoError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

void emit_csv(const Table& table, const std::filesystem::path& path) {
    if (table.columns.empty())
        throw DomainError("emit_csv: table has no columns");
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw IoError("emit_csv: cannot open " + path.string());
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i > 0) out << ',';
        out << table.columns[i];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        if (row.size() != table.columns.size())
            throw DomainError("emit_csv: row width does not match the header");
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i > 0) out << ',';
            if (const double* d = std::get_if<double>(&row[i]))
                out << format_double(*d);
            else
                out << std::get<std::string>(row[i]);
        }
        out << '\n';
    }
    if (!out)
        throw IoError("emit_csv: write failed for " + path.string());
}

RawCsv read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("read_csv: cannot open " + path.string());
    RawCsv csv;
    std::string line;
    const auto split = [](const std::string& s) {
        std::vector<std::string> fields;
        std::string field;
        for (char c : s) {
            if (c == ',') {
                fields.push_back(field);
                field.clear();
            } else {
                field.push_back(c);
            }
        }
        fields.push_back(field);
        return fields;
    };
    if (!std::getline(in, line))
        throw DomainError("read_csv: empty file " + path.string());
    csv.columns = split(line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        csv.rows.push_back(split(line));
        if (csv.rows.back().size() != csv.columns.size())
            throw DomainError("read_csv: ragged row in " + path.string());
    }
    return csv;
}

std::vector<double> numeric_column(const RawCsv& csv, const std::string& name) {
    const auto it = std::find(csv.columns.begin(), csv.columns.end(), name);
    if (it == csv.columns.end())
        throw DomainError("numeric_column: no column named '" + name + "'");
    const std::size_t idx = static_cast<std::size_t>(it - csv.columns.begin());
    std::vector<double> values;
    values.reserve(csv.rows.size());
    for (const auto& row : csv.rows) {
        const std::string& cell = row[idx];
        char* end = nullptr;
        const double v = std::strtod(cell.c_str(), &end);
        if (end == cell.c_str() || *end != '\0')
            throw DomainError("numeric_column: non-numeric cell '" + cell + "' in column " + name);
        values.push_back(v);
    }
    return values;
}

namespace {

constexpr double kWidth = 800.0, kHeight = 560.0;
constexpr double kMarginL = 70.0, kMarginR = 20.0, kMarginT = 30.0, kMarginB = 50.0;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#17becf"};

std::string fmt_coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

void emit_svg_plot(std::span<const Series> series, const std::filesystem::path& path,
                   const std::string& title) {
    if (series.empty())
        throw DomainError("emit_svg_plot: no series");
    double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
    bool first = true;
    for (const Series& s : series) {
        if (s.x.size() != s.y.size())
            throw DomainError("emit_svg_plot: series '" + s.name + "' has mismatched x/y lengths");
        if (s.x.empty())
            throw DomainError("emit_svg_plot: series '" + s.name + "' is empty");
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]))
                throw DomainError("emit_svg_plot: non-finite point in series '" + s.name + "'");
            if (first) {
                xmin = xmax = s.x[i];
                ymin = ymax = s.y[i];
                first = false;
            } else {
                xmin = std::min(xmin, s.x[i]);
                xmax = std::max(xmax, s.x[i]);
                ymin = std::min(ymin, s.y[i]);
                ymax = std::max(ymax, s.y[i]);
            }
        }
    }
    if (xmax == xmin) {
        xmin -= 0.5;
        xmax += 0.5;
    }
    if (ymax == ymin) {
        ymin -= 0.5;
        ymax += 0.5;
    }
    const double plot_w = kWidth - kMarginL - kMarginR;
    const double plot_h = kHeight - kMarginT - kMarginB;
    const auto sx = [&](double x) { return kMarginL + (x - xmin) / (xmax - xmin) * plot_w; };
    const auto sy = [&](double y) { return kMarginT + (ymax - y) / (ymax - ymin) * plot_h; };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << kWidth
        << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
        << "<rect x=\"" << kMarginL << "\" y=\"" << kMarginT << "\" width=\"" << plot_w
        << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"#444\"/>\n";
    if (!title.empty())
        svg << "<text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
            << title << "</text>\n";

    // min/max labels on both axes
    svg << "<text x=\"" << kMarginL << "\" y=\"" << kHeight - kMarginB + 18
        << "\" font-size=\"12\">" << fmt_coord(xmin) << "</text>\n"
        << "<text x=\"" << kWidth - kMarginR << "\" y=\"" << kHeight - kMarginB + 18
        << "\" text-anchor=\"end\" font-size=\"12\">" << fmt_coord(xmax) << "</text>\n"
        << "<text x=\"" << kMarginL - 6 << "\" y=\"" << kHeight - kMarginB
        << "\" text-anchor=\"end\" font-size=\"12\">" << fmt_coord(ymin) << "</text>\n"
        << "<text x=\"" << kMarginL - 6 << "\" y=\"" << kMarginT + 12
        << "\" text-anchor=\"end\" font-size=\"12\">" << fmt_coord(ymax) << "</text>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const Series& s = series[si];
        const char* color = kPalette[si % std::size(kPalette)];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (i > 0) svg << ' ';
            svg << fmt_coord(sx(s.x[i])) << ',' << fmt_coord(sy(s.y[i]));
        }
        svg << "\"/>\n";
        if (!s.name.empty())
            svg << "<text x=\"" << kWidth - kMarginR - 6 << "\" y=\""
                << kMarginT + 16 + 14 * static_cast<double>(si)
                << "\" text-anchor=\"end\" font-size=\"12\" fill=\"" << color << "\">" << s.name
                << "</text>\n";
    }
    svg << "</svg>\n";

    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw IoError("emit_svg_plot: cannot open " + path.string());
    out << svg.str();
    if (!out)
        throw IoError("emit_svg_plot: write failed for " + path.string());
}

void write_manifest(const RunManifest& manifest, const std::filesystem::path& path) {
    nlohmann::json j;
    j["artifact_version"] = manifest.artifact_version;
    j["subcommand"] = manifest.subcommand;
    j["seed"] = manifest.seed;
    j["config"] = manifest.config_text;
    j["outputs"] = manifest.outputs;
    j["duration_seconds"] = manifest.duration_seconds;
    j["metrics"] = manifest.metrics;
    j["notes"] = manifest.notes;
    atomic_write_text(j.dump(2) + "\n", path);
}

RunManifest read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("read_manifest: cannot open " + path.string());
    nlohmann::json j;
    try {
        in >> j;
        RunManifest m;
        m.artifact_version = j.at("artifact_version").get<std::string>();
        m.subcommand = j.at("subcommand").get<std::string>();
        m.seed = j.at("seed").get<std::uint64_t>();
        m.config_text = j.at("config").get<std::string>();
        m.outputs = j.at("outputs").get<std::vector<std::string>>();
        m.duration_seconds = j.at("duration_seconds").get<double>();
        if (j.contains("metrics")) m.metrics = j.at("metrics").get<std::map<std::string, double>>();
        if (j.contains("notes")) m.notes = j.at("notes").get<std::map<std::string, std::string>>();
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("read_manifest: malformed manifest " + path.string() + ": " + e.what());
    }
}

}  // namespace chaoslab
