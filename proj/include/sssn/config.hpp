#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "sssn/dgp.hpp"
#include "sssn/mc.hpp"
#include "sssn/null_dist.hpp"

namespace sssn {

/// An experiment plus where its calibration comes from ("builtin" or a
/// null-sample file path, resolved against the config's directory).
struct ExperimentConfig {
    McExperiment experiment;
    std::string null_g = "builtin";
    std::string null_gm = "builtin";
};

/// YAML experiment config. Required: seed, alpha, replicates, dgp (with n
/// and p), tests. Optional: shift {preset, c}, size_adjust, threads, null
/// {G, GM}. Unknown keys and bad values raise ConfigError naming the field.
[[nodiscard]] ExperimentConfig parse_experiment(std::string_view yaml, const std::filesystem::path& base_dir = {});
[[nodiscard]] ExperimentConfig load_experiment(const std::filesystem::path& path);

/// A dgp mapping, either at the top level or under a `dgp` key.
[[nodiscard]] DgpSpec parse_dgp(std::string_view yaml);
[[nodiscard]] DgpSpec load_dgp(const std::filesystem::path& path);

/// "builtin" gives the published table of `kind`; anything else is loaded
/// as a null-sample file and must be of that kind.
[[nodiscard]] NullSample resolve_null(std::string_view source, NullKind kind);
[[nodiscard]] NullTables resolve_nulls(const ExperimentConfig& config);

}  // namespace sssn
