#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "chaoslab/config.hpp"
#include "chaoslab/io.hpp"

namespace chaoslab {

// Runs one named experiment (simulate | bifurcate | lyapunov | sweep |
// control | plot) from a validated spec, writing CSV/SVG outputs and a
// manifest.json into out_dir (created if absent; nothing is written outside
// it). `seed_override` takes precedence over any seed in the spec and is the
// seed recorded in the manifest. Re-running a manifest's config snapshot with
// its recorded seed reproduces every CSV byte for byte.
RunManifest run_subcommand(const std::string& name, const ExperimentSpec& spec,
                           const std::filesystem::path& out_dir,
                           std::optional<std::uint64_t> seed_override = std::nullopt);

}  // namespace chaoslab
