#include "harness/experiment.hpp"

#include "infoplan/rng.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

namespace infoplan::harness {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

nlohmann::ordered_json json_real(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

}  // namespace

Experiment::Experiment(RunConfig cfg) : cfg_(std::move(cfg)) {
    if (auto issues = validate_config(cfg_); !issues.empty()) throw ConfigError(std::move(issues));

    if (cfg_.field_kind == "grid") {
        grid_ = std::make_shared<const GridData>(read_grid_csv(cfg_.resolved_path()));
        mask_ = RoIMask::from_grid(grid_);
        resolved_mean_ = cfg_.mean_constant.value_or(grid_->sample_mean());
    } else {
        mask_ = RoIMask::polygon(cfg_.region);
        resolved_mean_ = cfg_.mean_constant.value_or(0.0);
    }
}

TrialSetup Experiment::setup_trial(std::size_t trial) const {
    Placement placement;
    if (cfg_.targets && cfg_.candidates) {
        placement.targets = *cfg_.targets;
        placement.candidates = *cfg_.candidates;
    } else {
        placement = place_scenario(*mask_, cfg_.n_targets, cfg_.n_candidates, cfg_.n_shared,
                                   derive_seed(cfg_.seed, "placement", trial));
    }

    if (cfg_.field_kind == "grid") {
        return {trial, std::move(placement), GroundTruthField::from_grid(grid_)};
    }
    if (cfg_.field_kind == "analytic") {
        AnalyticSpec spec{analytic_function_from_string(cfg_.function), cfg_.params};
        return {trial, std::move(placement), GroundTruthField::analytic(std::move(spec), *mask_)};
    }

    // gp-sample: a lattice over the region plus every scenario point, so the
    // truth at targets and candidates is an exact joint GP draw.
    const Bounds b = mask_->bounds();
    std::vector<Location> nodes;
    const auto n = cfg_.lattice;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const Location p{b.xmin + (b.xmax - b.xmin) * static_cast<double>(j) / static_cast<double>(n - 1),
                             b.ymin + (b.ymax - b.ymin) * static_cast<double>(i) / static_cast<double>(n - 1)};
            if (mask_->contains(p)) nodes.push_back(p);
        }
    }
    auto add_unique = [&nodes](const Location& p) {
        if (std::find(nodes.begin(), nodes.end(), p) == nodes.end()) nodes.push_back(p);
    };
    for (const auto& p : placement.targets) add_unique(p);
    for (const auto& p : placement.candidates) add_unique(p);

    const Eigen::VectorXd draw =
        sample_prior_field(mean(), cfg_.kernel, nodes, derive_seed(cfg_.seed, "field-sample", trial));
    std::vector<double> values(draw.data(), draw.data() + draw.size());
    return {trial, std::move(placement), GroundTruthField::gp_sample(std::move(nodes), std::move(values), *mask_)};
}

ScenarioConfig Experiment::scenario(const TrialSetup& setup, PlannerKind planner) const {
    ScenarioConfig sc;
    sc.targets = setup.placement.targets;
    sc.candidates = setup.placement.candidates;
    sc.noise_sd = cfg_.noise_sd;
    sc.horizon = cfg_.horizon;
    sc.kernel = cfg_.kernel;
    sc.mean = mean();
    sc.planner_kind = planner;
    sc.seed = derive_seed(cfg_.seed, "episode/" + to_string(planner), setup.trial);
    sc.mask = *mask_;
    return sc;
}

// ---------------------------------------------------------------------------

RunResult run_experiment(const Experiment& experiment) {
    const RunConfig& cfg = experiment.config();
    const auto t0 = Clock::now();
    const auto planners = cfg.planners();

    std::vector<std::optional<TrialOutcome>> slots(cfg.trials);
    std::vector<std::exception_ptr> errors(cfg.trials);
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (std::size_t t = next.fetch_add(1); t < cfg.trials; t = next.fetch_add(1)) {
            try {
                const auto tt = Clock::now();
                TrialSetup setup = experiment.setup_trial(t);
                std::vector<EpisodeTrace> episodes;
                for (const auto& p : planners)
                    episodes.push_back(
                        run_episode(experiment.scenario(setup, planner_kind_from_string(p)), setup.field));
                slots[t] = TrialOutcome{std::move(setup), std::move(episodes), seconds_since(tt)};
            } catch (...) {
                errors[t] = std::current_exception();
            }
        }
    };

    const unsigned w = std::max(1u, std::min<unsigned>(cfg.workers, static_cast<unsigned>(cfg.trials)));
    if (w == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < w; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    RunResult result;
    result.config = cfg;
    result.resolved_mean = experiment.mean().constant;
    for (auto& s : slots) result.trials.push_back(std::move(*s));
    for (std::size_t p = 0; p < planners.size(); ++p) {
        std::vector<EpisodeTrace> traces;
        for (const auto& t : result.trials) traces.push_back(t.episodes[p]);
        result.summaries.emplace(planners[p], aggregate(traces));
    }
    result.seconds = seconds_since(t0);
    return result;
}

void write_series_csv(std::ostream& out, const RunResult& result) {
    out << "trial,planner,step,metric,value\n";
    char buf[64];
    for (const auto& trial : result.trials) {
        for (const auto& ep : trial.episodes) {
            const std::string planner = to_string(ep.planner);
            for (const auto& s : ep.steps) {
                for (Metric m : kAllMetrics) {
                    double v = 0.0;
                    switch (m) {
                        case Metric::error_targets: v = s.error; break;
                        case Metric::variance_targets: v = s.variance; break;
                        case Metric::error_shared: v = s.error_shared; break;
                        case Metric::variance_shared: v = s.variance_shared; break;
                    }
                    std::snprintf(buf, sizeof buf, "%.17g", v);
                    out << trial.setup.trial << ',' << planner << ',' << s.step << ',' << to_string(m) << ','
                        << buf << '\n';
                }
            }
        }
    }
}

nlohmann::ordered_json trace_to_json(const EpisodeTrace& trace) {
    using J = nlohmann::ordered_json;
    J steps = J::array();
    for (const auto& s : trace.steps) {
        steps.push_back({{"step", s.step},
                         {"chosen_index", s.chosen_index},
                         {"chosen", {s.chosen.x, s.chosen.y}},
                         {"score", json_real(s.score)},
                         {"measurement", s.measurement},
                         {"error_V", s.error},
                         {"variance_V", s.variance},
                         {"error_I", json_real(s.error_shared)},
                         {"variance_I", json_real(s.variance_shared)},
                         {"rmse_V_auxiliary", s.rmse}});
    }
    J out;
    out["planner"] = to_string(trace.planner);
    out["steps"] = std::move(steps);
    out["truth"] = trace.truth;
    if (trace.final_belief) {
        const auto& b = *trace.final_belief;
        J cov = J::array();
        for (Eigen::Index i = 0; i < b.cov().rows(); ++i) {
            J row = J::array();
            for (Eigen::Index j = 0; j < b.cov().cols(); ++j) row.push_back(b.cov()(i, j));
            cov.push_back(std::move(row));
        }
        out["final_belief"] = {{"mean", std::vector<double>(b.mean().data(), b.mean().data() + b.mean().size())},
                               {"cov", std::move(cov)}};
    }
    return out;
}

nlohmann::ordered_json run_record(const RunResult& result) {
    using J = nlohmann::ordered_json;
    const RunConfig& cfg = result.config;
    auto pts = [](const std::vector<Location>& v) {
        J a = J::array();
        for (const auto& p : v) a.push_back({p.x, p.y});
        return a;
    };

    J rec;
    rec["artifact_version"] = kArtifactVersion;
    rec["master_seed"] = cfg.seed;
    rec["seed_derivation"] = kSeedDerivation;
    rec["config"] = to_json(cfg);
    rec["config_ini"] = to_ini(cfg);

    J field;
    field["kind"] = cfg.field_kind;
    if (cfg.field_kind == "grid") field["source"] = cfg.resolved_path().lexically_normal().string();
    if (cfg.field_kind == "analytic") {
        field["function"] = cfg.function;
        field["params"] = cfg.params;
    }
    if (cfg.field_kind == "gp-sample") {
        field["lattice"] = cfg.lattice;
        field["generator"] = "prior draw from the configured kernel and mean";
    }
    field["resolved_mean"] = result.resolved_mean;
    rec["field"] = std::move(field);

    J trials = J::array();
    J trial_seconds = J::array();
    for (const auto& t : result.trials) {
        J jt;
        jt["trial"] = t.setup.trial;
        jt["targets"] = pts(t.setup.placement.targets);
        jt["candidates"] = pts(t.setup.placement.candidates);
        J eps = J::object();
        for (const auto& ep : t.episodes) eps[to_string(ep.planner)] = trace_to_json(ep);
        jt["episodes"] = std::move(eps);
        trials.push_back(std::move(jt));
        trial_seconds.push_back(t.seconds);
    }
    rec["trials"] = std::move(trials);

    J agg = J::object();
    for (const auto& [planner, s] : result.summaries) {
        J js;
        js["trials"] = s.trials;
        js["horizon"] = s.horizon;
        J mean = J::object(), sd = J::object();
        for (Metric m : kAllMetrics) {
            J mv = J::array(), sv = J::array();
            for (double v : s.mean.at(m)) mv.push_back(json_real(v));
            for (double v : s.sd.at(m)) sv.push_back(json_real(v));
            mean[to_string(m)] = std::move(mv);
            sd[to_string(m)] = std::move(sv);
        }
        js["mean"] = std::move(mean);
        js["sd"] = std::move(sd);
        agg[planner] = std::move(js);
    }
    rec["aggregate"] = std::move(agg);
    rec["timings"] = {{"total_seconds", result.seconds}, {"trial_seconds", std::move(trial_seconds)}};
    return rec;
}

MeasurementLog read_log_csv(const std::filesystem::path& path, double noise_sd) {
    std::ifstream in(path);
    if (!in) throw DataError(path.string(), 0, "cannot open log file");
    MeasurementLog log(noise_sd);
    std::string line;
    std::size_t lineno = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++lineno;
        std::string compact;
        for (char c : line)
            if (c != ' ' && c != '\t' && c != '\r') compact.push_back(c);
        if (compact.empty()) continue;
        if (!header) {
            if (compact != "x,y,value") throw DataError(path.string(), lineno, "expected header 'x,y,value'");
            header = true;
            continue;
        }
        std::istringstream is(compact);
        std::string a, b, c, extra;
        if (!std::getline(is, a, ',') || !std::getline(is, b, ',') || !std::getline(is, c, ',') ||
            std::getline(is, extra, ','))
            throw DataError(path.string(), lineno, "expected 3 comma-separated fields");
        try {
            std::size_t pa = 0, pb = 0, pc = 0;
            const double x = std::stod(a, &pa), y = std::stod(b, &pb), z = std::stod(c, &pc);
            if (pa != a.size() || pb != b.size() || pc != c.size()) throw std::invalid_argument("trailing");
            log.append({x, y}, z);
        } catch (const std::exception&) {
            throw DataError(path.string(), lineno, "fields must be finite numbers");
        }
    }
    if (!header) throw DataError(path.string(), lineno, "missing header 'x,y,value'");
    return log;
}

}  // namespace infoplan::harness
