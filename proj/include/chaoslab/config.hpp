#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace chaoslab {

// INI-style experiment description: sections [system], [integrator], [ann],
// [control], [objective] of flat key = value lines, '#' starting a comment.
// Unknown sections and keys are rejected at parse time with line numbers.

struct ConfigEntry {
    std::string value;
    int line = 0;
};

struct ExperimentSpec {
    std::map<std::string, std::map<std::string, ConfigEntry>> sections;

    bool has(const std::string& section, const std::string& key) const;
    const std::string& get_string(const std::string& section, const std::string& key) const;
    std::string get_string_or(const std::string& section, const std::string& key,
                              const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key) const;
    double get_double_or(const std::string& section, const std::string& key, double fallback) const;
    std::int64_t get_int(const std::string& section, const std::string& key) const;
    std::int64_t get_int_or(const std::string& section, const std::string& key,
                            std::int64_t fallback) const;
    std::uint64_t get_uint(const std::string& section, const std::string& key) const;

    // Value-level equality; line numbers are bookkeeping, not content.
    bool operator==(const ExperimentSpec& other) const;
};

// Parses or throws ConfigError whose message carries one line per problem,
// each naming the offending line number.
ExperimentSpec parse_config(const std::string& text);

// Canonical rendering: fixed section order, keys sorted; reparses equal.
std::string serialize_config(const ExperimentSpec& spec);

// Per-subcommand schema check: every required key present, every present key
// known for that subcommand. Returns human-readable problems (empty = valid).
std::vector<std::string> validate_spec(const ExperimentSpec& spec, const std::string& subcommand);

}  // namespace chaoslab
