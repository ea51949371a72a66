#include "infoplan/metrics.hpp"

#include "infoplan/errors.hpp"

#include <algorithm>
#include <cmath>

namespace infoplan {

namespace {

void require_truth(const GaussianBelief& belief, std::span<const double> truth) {
    if (truth.size() != belief.dim()) throw InvalidInput("truth length does not match belief dimension");
    if (belief.dim() == 0) throw InvalidInput("belief is empty");
}

double residual_sq(const GaussianBelief& belief, std::span<const double> truth) {
    double s = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const double r = belief.mean()(static_cast<Eigen::Index>(i)) - truth[i];
        s += r * r;
    }
    return s;
}

}  // namespace

double estimating_error(const GaussianBelief& belief, std::span<const double> truth) {
    require_truth(belief, truth);
    return std::sqrt(residual_sq(belief, truth)) / static_cast<double>(belief.dim());
}

double estimating_variance(const GaussianBelief& belief) {
    if (belief.dim() == 0) throw InvalidInput("belief is empty");
    return belief.cov().trace() / static_cast<double>(belief.dim());
}

double rmse(const GaussianBelief& belief, std::span<const double> truth) {
    require_truth(belief, truth);
    return std::sqrt(residual_sq(belief, truth) / static_cast<double>(belief.dim()));
}

std::vector<std::size_t> intersection_indices(std::span<const Location> targets,
                                              std::span<const Location> candidates) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < targets.size(); ++i)
        if (std::find(candidates.begin(), candidates.end(), targets[i]) != candidates.end())
            out.push_back(i);
    return out;
}

GaussianBelief restrict_to_intersection(const GaussianBelief& belief, std::span<const Location> targets,
                                        std::span<const Location> candidates) {
    if (!std::equal(targets.begin(), targets.end(), belief.query().begin(), belief.query().end()))
        throw InvalidInput("belief is not over the given target list");
    const auto idx = intersection_indices(targets, candidates);
    if (idx.empty()) throw InvalidInput("targets and candidates do not intersect");
    return belief.restrict(idx);
}

std::string to_string(Metric m) {
    switch (m) {
        case Metric::error_targets: return "error-V";
        case Metric::variance_targets: return "variance-V";
        case Metric::error_shared: return "error-I";
        case Metric::variance_shared: return "variance-I";
    }
    return "?";
}

std::vector<double> metric_series(const EpisodeTrace& trace, Metric m) {
    std::vector<double> out;
    out.reserve(trace.steps.size());
    for (const auto& s : trace.steps) {
        switch (m) {
            case Metric::error_targets: out.push_back(s.error); break;
            case Metric::variance_targets: out.push_back(s.variance); break;
            case Metric::error_shared: out.push_back(s.error_shared); break;
            case Metric::variance_shared: out.push_back(s.variance_shared); break;
        }
    }
    return out;
}

AggregateSummary aggregate(std::span<const EpisodeTrace> traces) {
    if (traces.empty()) throw InvalidInput("aggregate: no traces");
    const std::size_t horizon = traces.front().steps.size();
    for (const auto& t : traces)
        if (t.steps.size() != horizon) throw InvalidInput("aggregate: traces have different horizons");

    AggregateSummary out;
    out.trials = traces.size();
    out.horizon = horizon;
    const auto n = static_cast<double>(traces.size());
    for (Metric m : kAllMetrics) {
        std::vector<std::vector<double>> series;
        series.reserve(traces.size());
        for (const auto& t : traces) series.push_back(metric_series(t, m));

        std::vector<double> mean(horizon, 0.0), sd(horizon, 0.0);
        for (std::size_t k = 0; k < horizon; ++k) {
            double s = 0.0;
            for (const auto& v : series) s += v[k];
            mean[k] = s / n;
            if (traces.size() > 1) {
                double ss = 0.0;
                for (const auto& v : series) ss += (v[k] - mean[k]) * (v[k] - mean[k]);
                sd[k] = std::sqrt(ss / (n - 1.0));
            }
        }
        out.mean.emplace(m, std::move(mean));
        out.sd.emplace(m, std::move(sd));
    }
    return out;
}

}  // namespace infoplan
