#pragma once

// Experiment configuration: an INI-style key/value file whose sections mirror
// the scenario fields. Every default is written back out by to_ini().

#include "infoplan/environment.hpp"
#include "infoplan/errors.hpp"
#include "infoplan/gp.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace infoplan::harness {

/// Lists every violated field, one message per entry.
class ConfigError : public Error {
public:
    explicit ConfigError(std::vector<std::string> issues);
    const std::vector<std::string>& issues() const noexcept { return issues_; }

private:
    std::vector<std::string> issues_;
};

struct RunConfig {
    // [run]
    std::uint64_t seed = 1;
    std::size_t trials = 20;
    std::size_t horizon = 60;
    std::string planner = "both";  // greedy-edg | random | both
    unsigned workers = 1;
    int quadrature_nodes = 64;

    // [scenario]
    double noise_sd = 1.0;
    std::size_t n_targets = 61;
    std::size_t n_candidates = 60;
    std::size_t n_shared = 5;
    std::optional<std::vector<Location>> targets;     // explicit placement
    std::optional<std::vector<Location>> candidates;  // explicit placement

    // [region] polygon vertices; used by analytic and gp-sample fields
    std::vector<Location> region{{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}};

    // [field]
    std::string field_kind = "gp-sample";  // grid | analytic | gp-sample
    std::string function = "sinusoid";
    std::vector<double> params{1.0, 6.0, 6.0, 0.0};
    std::filesystem::path path;  // grid CSV; relative paths resolve against base_dir
    std::size_t lattice = 16;    // gp-sample nodes per side of the region's bounding box

    // [kernel]
    KernelSpec kernel{25.0, 0.15, 0.0};

    // [mean] "auto" = grid sample mean for grid fields, 0 otherwise
    std::optional<double> mean_constant;

    std::filesystem::path base_dir;

    std::filesystem::path resolved_path() const;
    std::vector<std::string> planners() const;
};

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::optional<std::size_t> horizon;
    std::optional<std::string> planner;
    std::optional<unsigned> workers;
};

/// Parses INI text. Throws ConfigError listing every problem found.
RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir);

/// Reads an INI file, or the config echo stored in a run.json.
RunConfig load_config(const std::filesystem::path& path);

void apply_overrides(RunConfig& cfg, const Overrides& o);

/// Semantic checks that do not touch data files.
std::vector<std::string> validate_config(const RunConfig& cfg);

/// Canonical INI text with every value spelled out.
std::string to_ini(const RunConfig& cfg);
nlohmann::ordered_json to_json(const RunConfig& cfg);

std::vector<Location> parse_locations(const std::string& text);
std::string format_locations(const std::vector<Location>& pts);
std::string format_real(double v);

}  // namespace infoplan::harness
