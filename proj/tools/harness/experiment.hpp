#pragma once

#include "harness/config.hpp"

#include "infoplan/environment.hpp"
#include "infoplan/metrics.hpp"
#include "infoplan/planner.hpp"

#include <json.hpp>

#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace infoplan::harness {

inline constexpr const char* kArtifactVersion = "infoplan 0.3.0";

/// How the master seed expands into named substreams. Recorded in run.json.
inline constexpr const char* kSeedDerivation =
    "stream(label, i) = splitmix64(splitmix64(master ^ fnv1a64(label)) + i); "
    "labels: 'placement' and 'field-sample' indexed by trial, "
    "'episode/<planner>' indexed by trial; each episode seed e then yields "
    "stream(e, 'planner', 0) for selection and stream(e, 'noise', 0) for measurement noise";

struct TrialSetup {
    std::size_t trial = 0;
    Placement placement;
    GroundTruthField field;
};

/// A validated configuration plus any loaded data, ready to instantiate trials.
class Experiment {
public:
    explicit Experiment(RunConfig cfg);

    const RunConfig& config() const noexcept { return cfg_; }
    /// The region every location must fall in.
    const RoIMask& mask() const noexcept { return *mask_; }
    MeanSpec mean() const noexcept { return MeanSpec{resolved_mean_}; }

    TrialSetup setup_trial(std::size_t trial) const;
    ScenarioConfig scenario(const TrialSetup& setup, PlannerKind planner) const;

private:
    RunConfig cfg_;
    std::shared_ptr<const GridData> grid_;
    std::optional<RoIMask> mask_;
    double resolved_mean_ = 0.0;
};

struct TrialOutcome {
    TrialSetup setup;
    /// One per planner, in RunConfig::planners() order.
    std::vector<EpisodeTrace> episodes;
    double seconds = 0.0;
};

struct RunResult {
    RunConfig config;
    double resolved_mean = 0.0;
    std::vector<TrialOutcome> trials;
    std::map<std::string, AggregateSummary> summaries;
    double seconds = 0.0;
};

/// Runs every trial; trials are spread over cfg.workers threads. Output does
/// not depend on the worker count. Exceptions from the lowest failing trial
/// are rethrown.
RunResult run_experiment(const Experiment& experiment);

/// Long format: trial,planner,step,metric,value.
void write_series_csv(std::ostream& out, const RunResult& result);

nlohmann::ordered_json run_record(const RunResult& result);
nlohmann::ordered_json trace_to_json(const EpisodeTrace& trace);

/// Reads `x,y,value` rows into a log with the given noise level.
MeasurementLog read_log_csv(const std::filesystem::path& path, double noise_sd);

}  // namespace infoplan::harness
