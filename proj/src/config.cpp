#include "chaoslab/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>
#include <sstream>

#include "chaoslab/errors.hpp"

namespace chaoslab {

namespace {

const std::vector<std::string> kSectionOrder = {"system", "integrator", "ann", "control",
                                                "objective"};

// Union of keys any subcommand accepts, per section; parse-time rejection.
const std::map<std::string, std::set<std::string>> kKnownKeys = {
    {"system",
     {"kind",   "sigma", "rho",    "beta",   "mu",     "x0",    "y0",        "z0",
      "c1",     "c2",    "l",      "r",      "r_inductor",     "ga",        "gb",
      "bp",     "v1",    "v2",     "i_l",    "u",      "mu_min", "mu_max",   "n_mu",
      "n_samples",       "transient",        "r_min",  "r_max", "c1_min",    "c1_max",
      "n_r",    "n_c1",  "input",  "x",      "y"}},
    {"integrator",
     {"dt", "n_steps", "transient_steps", "stride", "divergence_bound", "renorm_interval",
      "delta0"}},
    {"ann", {"shape", "seed", "init_range", "learning_rate", "epochs"}},
    {"control",
     {"control_interval", "learning_rate", "r_mult_lo", "r_mult_hi", "u_max", "sensitivity_eps",
      "duration", "snapshot_stride", "v1_scale", "v2_scale", "i_scale", "err_scale"}},
    {"objective", {"type", "v1_star", "amplitude", "frequency", "equilibrium_index"}},
};

struct SectionSchema {
    std::set<std::string> required;
    std::set<std::string> optional;
};
using SubcommandSchema = std::map<std::string, SectionSchema>;

const std::set<std::string> kChuaKeys = {"c1", "c2", "l",  "r",  "r_inductor",
                                         "ga", "gb", "bp", "v1", "v2", "i_l", "u"};
const std::set<std::string> kLorenzKeys = {"sigma", "rho", "beta", "x0", "y0", "z0"};

std::set<std::string> merge(std::initializer_list<std::set<std::string>> sets) {
    std::set<std::string> out;
    for (const auto& s : sets) out.insert(s.begin(), s.end());
    return out;
}

const std::map<std::string, SubcommandSchema>& schemas() {
    static const std::map<std::string, SubcommandSchema> kSchemas = {
        {"simulate",
         {{"system", {{"kind"}, merge({kChuaKeys, kLorenzKeys, {"mu"}})}},
          {"integrator",
           {{"dt", "n_steps"}, {"transient_steps", "stride", "divergence_bound"}}}}},
        {"bifurcate",
         {{"system",
           {{"kind", "mu_min", "mu_max", "n_mu", "n_samples", "transient"}, {"x0"}}}}},
        {"lyapunov",
         {{"system", {{"kind"}, merge({kChuaKeys, kLorenzKeys, {"mu"}})}},
          {"integrator",
           {{"dt", "n_steps"},
            {"transient_steps", "divergence_bound", "renorm_interval", "delta0"}}}}},
        {"sweep",
         {{"system",
           {{"kind", "r_min", "r_max", "c1_min", "c1_max", "n_r", "n_c1"}, kChuaKeys}},
          {"integrator",
           {{"dt", "n_steps"}, {"transient_steps", "stride", "divergence_bound"}}}}},
        {"control",
         {{"system", {{"kind"}, kChuaKeys}},
          {"integrator", {{"dt"}, {"divergence_bound"}}},
          {"ann", {{}, {"shape", "seed", "init_range"}}},
          {"control",
           {{"duration"},
            {"control_interval", "learning_rate", "r_mult_lo", "r_mult_hi", "u_max",
             "sensitivity_eps", "snapshot_stride", "v1_scale", "v2_scale", "i_scale",
             "err_scale"}}},
          {"objective",
           {{"type"}, {"v1_star", "amplitude", "frequency", "equilibrium_index"}}}}},
        {"plot", {{"system", {{"input", "x", "y"}, {}}}}},
    };
    return kSchemas;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

bool ExperimentSpec::has(const std::string& section, const std::string& key) const {
    const auto sit = sections.find(section);
    return sit != sections.end() && sit->second.count(key) > 0;
}

const std::string& ExperimentSpec::get_string(const std::string& section,
                                              const std::string& key) const {
    const auto sit = sections.find(section);
    if (sit == sections.end() || !sit->second.count(key))
        throw ConfigError("missing key '" + key + "' in section [" + section + "]");
    return sit->second.at(key).value;
}

std::string ExperimentSpec::get_string_or(const std::string& section, const std::string& key,
                                          const std::string& fallback) const {
    return has(section, key) ? get_string(section, key) : fallback;
}

double ExperimentSpec::get_double(const std::string& section, const std::string& key) const {
    const std::string& raw = get_string(section, key);
    char* end = nullptr;
    const double v = std::strtod(raw.c_str(), &end);
    if (end == raw.c_str() || *end != '\0')
        throw ConfigError("[" + section + "] " + key + " = '" + raw + "' is not a number (line " +
                          std::to_string(sections.at(section).at(key).line) + ")");
    return v;
}

double ExperimentSpec::get_double_or(const std::string& section, const std::string& key,
                                     double fallback) const {
    return has(section, key) ? get_double(section, key) : fallback;
}

std::int64_t ExperimentSpec::get_int(const std::string& section, const std::string& key) const {
    const std::string& raw = get_string(section, key);
    char* end = nullptr;
    const long long v = std::strtoll(raw.c_str(), &end, 10);
    if (end == raw.c_str() || *end != '\0')
        throw ConfigError("[" + section + "] " + key + " = '" + raw + "' is not an integer (line " +
                          std::to_string(sections.at(section).at(key).line) + ")");
    return v;
}

std::int64_t ExperimentSpec::get_int_or(const std::string& section, const std::string& key,
                                        std::int64_t fallback) const {
    return has(section, key) ? get_int(section, key) : fallback;
}

std::uint64_t ExperimentSpec::get_uint(const std::string& section, const std::string& key) const {
    const std::string& raw = get_string(section, key);
    char* end = nullptr;
    const unsigned long long v = std::strtoull(raw.c_str(), &end, 10);
    if (end == raw.c_str() || *end != '\0' || raw.find('-') != std::string::npos)
        throw ConfigError("[" + section + "] " + key + " = '" + raw +
                          "' is not an unsigned integer (line " +
                          std::to_string(sections.at(section).at(key).line) + ")");
    return v;
}

bool ExperimentSpec::operator==(const ExperimentSpec& other) const {
    if (sections.size() != other.sections.size()) return false;
    for (const auto& [name, keys] : sections) {
        const auto oit = other.sections.find(name);
        if (oit == other.sections.end() || oit->second.size() != keys.size()) return false;
        for (const auto& [key, entry] : keys) {
            const auto kit = oit->second.find(key);
            if (kit == oit->second.end() || kit->second.value != entry.value) return false;
        }
    }
    return true;
}

ExperimentSpec parse_config(const std::string& text) {
    ExperimentSpec spec;
    std::vector<std::string> errors;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;

    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') {
                errors.push_back("line " + std::to_string(lineno) + ": unterminated section header");
                continue;
            }
            section = trim(line.substr(1, line.size() - 2));
            if (!kKnownKeys.count(section)) {
                errors.push_back("line " + std::to_string(lineno) + ": unknown section [" + section +
                                 "]");
                section.clear();
            } else {
                spec.sections[section];  // record even if empty
            }
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            errors.push_back("line " + std::to_string(lineno) + ": expected key = value");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            errors.push_back("line " + std::to_string(lineno) + ": empty key");
            continue;
        }
        if (section.empty()) {
            errors.push_back("line " + std::to_string(lineno) + ": key '" + key +
                             "' outside any section");
            continue;
        }
        if (!kKnownKeys.at(section).count(key)) {
            errors.push_back("line " + std::to_string(lineno) + ": unknown key '" + key +
                             "' in section [" + section + "]");
            continue;
        }
        if (spec.sections[section].count(key)) {
            errors.push_back("line " + std::to_string(lineno) + ": duplicate key '" + key +
                             "' in section [" + section + "]");
            continue;
        }
        spec.sections[section][key] = ConfigEntry{value, lineno};
    }

    if (!errors.empty()) {
        std::string msg = "config has " + std::to_string(errors.size()) + " problem(s):";
        for (const std::string& e : errors) msg += "\n  " + e;
        throw ConfigError(msg);
    }
    return spec;
}

std::string serialize_config(const ExperimentSpec& spec) {
    std::ostringstream out;
    bool first = true;
    for (const std::string& section : kSectionOrder) {
        const auto sit = spec.sections.find(section);
        if (sit == spec.sections.end()) continue;
        if (!first) out << '\n';
        first = false;
        out << '[' << section << "]\n";
        for (const auto& [key, entry] : sit->second) out << key << " = " << entry.value << '\n';
    }
    return out.str();
}

std::vector<std::string> validate_spec(const ExperimentSpec& spec, const std::string& subcommand) {
    std::vector<std::string> problems;
    const auto scit = schemas().find(subcommand);
    if (scit == schemas().end()) {
        problems.push_back("unknown subcommand '" + subcommand + "'");
        return problems;
    }
    const SubcommandSchema& schema = scit->second;

    for (const auto& [section, section_schema] : schema) {
        const auto sit = spec.sections.find(section);
        for (const std::string& key : section_schema.required)
            if (sit == spec.sections.end() || !sit->second.count(key))
                problems.push_back("[" + section + "] missing required key '" + key + "'");
        if (sit == spec.sections.end()) continue;
        for (const auto& [key, entry] : sit->second)
            if (!section_schema.required.count(key) && !section_schema.optional.count(key))
                problems.push_back("[" + section + "] key '" + key + "' (line " +
                                   std::to_string(entry.line) + ") is not used by subcommand '" +
                                   subcommand + "'");
    }
    for (const auto& [section, keys] : spec.sections) {
        if (schema.count(section)) continue;
        if (!keys.empty())
            problems.push_back("section [" + section + "] is not used by subcommand '" +
                               subcommand + "'");
    }
    return problems;
}

}  // namespace chaoslab
