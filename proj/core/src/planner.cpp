#include "infoplan/planner.hpp"

#include "infoplan/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <sstream>
#include <thread>

namespace infoplan {

std::string to_string(PlannerKind kind) {
    return kind == PlannerKind::greedy_edg ? "greedy-edg" : "random";
}

PlannerKind planner_kind_from_string(const std::string& name) {
    if (name == "greedy-edg") return PlannerKind::greedy_edg;
    if (name == "random") return PlannerKind::random;
    throw InvalidInput("unknown planner '" + name + "' (expected greedy-edg or random)");
}

void ScenarioConfig::validate() const {
    if (targets.empty()) throw InvalidInput("scenario has no targets");
    if (candidates.empty()) throw InvalidInput("scenario has no candidates");
    if (horizon < 1) throw InvalidInput("horizon must be >= 1");
    if (!(noise_sd >= 0.0) || !std::isfinite(noise_sd)) throw InvalidInput("noise_sd must be finite and >= 0");
    kernel.validate();
    mean.validate();
    for (std::size_t i = 0; i < targets.size(); ++i) {
        if (!is_finite(targets[i])) throw InvalidInput("target " + std::to_string(i) + " is not finite");
        if (mask && !mask->contains(targets[i]))
            throw InvalidInput("target " + std::to_string(i) + " is outside the RoI");
    }
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (!is_finite(candidates[i])) throw InvalidInput("candidate " + std::to_string(i) + " is not finite");
        if (mask && !mask->contains(candidates[i]))
            throw InvalidInput("candidate " + std::to_string(i) + " is outside the RoI");
    }
}

// ---------------------------------------------------------------------------

Selection greedy_select(const MeanSpec& mean, const KernelSpec& kernel, const MeasurementLog& log,
                        std::span<const Location> candidates, std::span<const Location> targets,
                        unsigned workers) {
    if (candidates.empty()) throw InvalidInput("greedy_select: no candidates");
    const std::size_t n = candidates.size();

    std::optional<EdgScorer> scorer;
    try {
        scorer.emplace(mean, kernel, log, targets);
    } catch (const DegeneracyError& e) {
        std::vector<std::size_t> all(n);
        for (std::size_t i = 0; i < n; ++i) all[i] = i;
        throw PlanningError(std::string("no candidate could be scored: ") + e.what(), std::move(all));
    }

    std::vector<double> scores(n, std::numeric_limits<double>::quiet_NaN());
    std::vector<char> failed(n, 0);

    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            try {
                scores[i] = scorer->score(candidates[i]).value;
            } catch (const DegeneracyError&) {
                failed[i] = 1;
            }
        }
    };

    const unsigned w = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n)));
    if (w == 1) {
        work(0, n);
    } else {
        std::vector<std::exception_ptr> errors(w);
        std::vector<std::thread> pool;
        const std::size_t chunk = (n + w - 1) / w;
        for (unsigned t = 0; t < w; ++t) {
            const std::size_t b = t * chunk;
            const std::size_t e = std::min(n, b + chunk);
            pool.emplace_back([&, t, b, e] {
                try {
                    work(b, e);
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (const auto& ep : errors)
            if (ep) std::rethrow_exception(ep);
    }

    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < n; ++i) {
        if (failed[i] || std::isnan(scores[i])) continue;
        if (!best || scores[i] > scores[*best]) best = i;
    }
    if (!best) {
        std::vector<std::size_t> bad;
        for (std::size_t i = 0; i < n; ++i)
            if (failed[i]) bad.push_back(i);
        std::ostringstream os;
        os << "all " << n << " candidates failed to score";
        throw PlanningError(os.str(), std::move(bad));
    }
    return Selection{*best, candidates[*best], scores[*best]};
}

Selection random_select(std::span<const Location> candidates, Rng& rng) {
    if (candidates.empty()) throw InvalidInput("random_select: no candidates");
    const auto i = static_cast<std::size_t>(rng.index(candidates.size()));
    return Selection{i, candidates[i], std::numeric_limits<double>::quiet_NaN()};
}

// ---------------------------------------------------------------------------

EpisodeTrace run_episode(const ScenarioConfig& config, const GroundTruthField& field, unsigned workers) {
    config.validate();

    EpisodeTrace trace;
    trace.planner = config.planner_kind;
    trace.truth.reserve(config.targets.size());
    for (const auto& t : config.targets) trace.truth.push_back(field.value(t));

    const auto shared = intersection_indices(config.targets, config.candidates);
    std::vector<double> shared_truth;
    for (auto i : shared) shared_truth.push_back(trace.truth[i]);

    Rng planner_rng(derive_seed(config.seed, "planner"));
    Rng noise_rng(derive_seed(config.seed, "noise"));
    MeasurementLog log(config.noise_sd);

    for (std::size_t k = 1; k <= config.horizon; ++k) {
        try {
            const Selection sel =
                config.planner_kind == PlannerKind::greedy_edg
                    ? greedy_select(config.mean, config.kernel, log, config.candidates, config.targets, workers)
                    : random_select(config.candidates, planner_rng);

            StepRecord rec;
            rec.step = k;
            rec.chosen_index = sel.index;
            rec.chosen = sel.where;
            rec.score = sel.score;
            rec.measurement = measure(field, sel.where, config.noise_sd, noise_rng);
            log.append(sel.where, rec.measurement);

            GaussianBelief belief = posterior(config.mean, config.kernel, log, config.targets);
            rec.error = estimating_error(belief, trace.truth);
            rec.variance = estimating_variance(belief);
            rec.rmse = rmse(belief, trace.truth);
            if (!shared.empty()) {
                const GaussianBelief sub = belief.restrict(shared);
                rec.error_shared = estimating_error(sub, shared_truth);
                rec.variance_shared = estimating_variance(sub);
            }
            trace.steps.push_back(rec);
            trace.final_belief = std::move(belief);
        } catch (const DegeneracyError& e) {
            throw EpisodeAborted("step " + std::to_string(k) + ": " + e.what(), std::move(trace), true);
        } catch (const PlanningError& e) {
            throw EpisodeAborted("step " + std::to_string(k) + ": " + e.what(), std::move(trace), true);
        } catch (const Error& e) {
            throw EpisodeAborted("step " + std::to_string(k) + ": " + e.what(), std::move(trace), false);
        }
    }
    return trace;
}

}  // namespace infoplan
