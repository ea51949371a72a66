#pragma once

#include "harness/config.hpp"

#include <filesystem>
#include <iosfwd>

namespace infoplan::harness {

enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 2,
    kExitData = 3,
    kExitNumerical = 4,
};

/// Runs paired episodes and writes run.json and series.csv into out_dir.
int cmd_run(const std::filesystem::path& config, const Overrides& overrides,
            const std::filesystem::path& out_dir, std::ostream& err);

/// EDG table over all candidates of trial 0 given a fixed measurement log.
int cmd_score(const std::filesystem::path& config, const std::filesystem::path& log_csv,
              const Overrides& overrides, std::ostream& out, std::ostream& err);

/// Prints one line per problem; nothing when the config is valid.
int cmd_validate(const std::filesystem::path& config, std::ostream& out);

}  // namespace infoplan::harness
