#pragma once

#include "infoplan/gp.hpp"
#include "infoplan/planner.hpp"

#include <array>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace infoplan {

/// |mu - truth| / n: the Euclidean residual norm divided by the target count.
/// Not an RMSE; see rmse() for that.
double estimating_error(const GaussianBelief& belief, std::span<const double> truth);

/// tr(cov) / n.
double estimating_variance(const GaussianBelief& belief);

double rmse(const GaussianBelief& belief, std::span<const double> truth);

/// Indices into `targets` of points that also appear (bitwise) in `candidates`.
std::vector<std::size_t> intersection_indices(std::span<const Location> targets,
                                              std::span<const Location> candidates);

/// Sub-belief at the targets that are also candidates. The belief must be
/// over `targets`. Throws InvalidInput if the intersection is empty.
GaussianBelief restrict_to_intersection(const GaussianBelief& belief, std::span<const Location> targets,
                                        std::span<const Location> candidates);

enum class Metric { error_targets, variance_targets, error_shared, variance_shared };

inline constexpr std::array<Metric, 4> kAllMetrics{Metric::error_targets, Metric::variance_targets,
                                                   Metric::error_shared, Metric::variance_shared};

/// "error-V", "variance-V", "error-I", "variance-I".
std::string to_string(Metric m);

std::vector<double> metric_series(const EpisodeTrace& trace, Metric m);

struct AggregateSummary {
    std::size_t trials = 0;
    std::size_t horizon = 0;
    std::map<Metric, std::vector<double>> mean;
    /// Sample standard deviation (n - 1 denominator); zero for one trial.
    std::map<Metric, std::vector<double>> sd;
};

AggregateSummary aggregate(std::span<const EpisodeTrace> traces);

}  // namespace infoplan
