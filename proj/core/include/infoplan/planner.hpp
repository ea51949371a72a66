#pragma once

// Sequential selection of sensing locations: greedy EDG maximization and the
// uniform-random baseline, run against a ground-truth field.

#include "infoplan/environment.hpp"
#include "infoplan/errors.hpp"
#include "infoplan/gp.hpp"
#include "infoplan/info_value.hpp"
#include "infoplan/rng.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace infoplan {

enum class PlannerKind { greedy_edg, random };

std::string to_string(PlannerKind kind);
PlannerKind planner_kind_from_string(const std::string& name);

struct ScenarioConfig {
    std::vector<Location> targets;
    std::vector<Location> candidates;
    double noise_sd = 1.0;
    std::size_t horizon = 1;
    KernelSpec kernel;
    MeanSpec mean;
    PlannerKind planner_kind = PlannerKind::greedy_edg;
    /// Episode seed; the planner and noise streams are derived from it.
    std::uint64_t seed = 0;
    /// When set, every target and candidate must lie inside it.
    std::optional<RoIMask> mask;

    void validate() const;
};

struct Selection {
    std::size_t index = 0;
    Location where;
    /// EDG of the chosen candidate; NaN for random selection.
    double score = std::numeric_limits<double>::quiet_NaN();
};

struct StepRecord {
    std::size_t step = 0;  // 1-based
    std::size_t chosen_index = 0;
    Location chosen;
    double score = std::numeric_limits<double>::quiet_NaN();
    double measurement = 0.0;
    double error = 0.0;     // over the targets
    double variance = 0.0;  // over the targets
    double error_shared = std::numeric_limits<double>::quiet_NaN();     // over targets that are also candidates
    double variance_shared = std::numeric_limits<double>::quiet_NaN();  // same
    double rmse = 0.0;      // auxiliary, over the targets
};

struct EpisodeTrace {
    PlannerKind planner = PlannerKind::greedy_edg;
    std::vector<StepRecord> steps;
    std::optional<GaussianBelief> final_belief;
    /// Noise-free field values at the targets.
    std::vector<double> truth;
};

/// Carries whatever steps completed before a step failed.
class EpisodeAborted : public Error {
public:
    EpisodeAborted(const std::string& what, EpisodeTrace partial, bool degeneracy)
        : Error(what), partial_(std::move(partial)), degeneracy_(degeneracy) {}

    const EpisodeTrace& partial_trace() const noexcept { return partial_; }
    /// True when the cause was a numerical degeneracy or planning failure.
    bool numerical() const noexcept { return degeneracy_; }

private:
    EpisodeTrace partial_;
    bool degeneracy_;
};

/// Candidate maximizing edg_exact; ties go to the lowest index. Candidates that
/// fail with DegeneracyError are skipped; if all fail, PlanningError lists
/// them. Scoring fans out over `workers` threads; the result does not depend
/// on the worker count.
Selection greedy_select(const MeanSpec& mean, const KernelSpec& kernel, const MeasurementLog& log,
                        std::span<const Location> candidates, std::span<const Location> targets,
                        unsigned workers = 1);

/// Uniform draw over the candidates.
Selection random_select(std::span<const Location> candidates, Rng& rng);

EpisodeTrace run_episode(const ScenarioConfig& config, const GroundTruthField& field,
                         unsigned workers = 1);

}  // namespace infoplan
