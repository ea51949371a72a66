#include "harness/commands.hpp"

#include "harness/experiment.hpp"

#include "infoplan/info_value.hpp"

#include <Eigen/Eigenvalues>

#include <cstdio>
#include <fstream>
#include <ostream>

namespace infoplan::harness {

namespace {

/// Maps the library's exception types onto exit codes, printing the message.
template <class F>
int guarded(std::ostream& err, F&& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        for (const auto& i : e.issues()) err << "config error: " << i << "\n";
        return kExitConfig;
    } catch (const DataError& e) {
        err << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const DomainError& e) {
        err << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const EpisodeAborted& e) {
        err << (e.numerical() ? "numerical error: " : "episode aborted: ") << e.what() << " (after "
            << e.partial_trace().steps.size() << " completed steps)\n";
        return e.numerical() ? kExitNumerical : kExitData;
    } catch (const DegeneracyError& e) {
        err << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const PlanningError& e) {
        err << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const PlacementError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const InvalidInput& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
}

RunConfig load_with_overrides(const std::filesystem::path& path, const Overrides& o) {
    RunConfig cfg = load_config(path);
    apply_overrides(cfg, o);
    return cfg;
}

}  // namespace

int cmd_run(const std::filesystem::path& config, const Overrides& overrides,
            const std::filesystem::path& out_dir, std::ostream& err) {
    return guarded(err, [&] {
        const Experiment experiment(load_with_overrides(config, overrides));
        const RunResult result = run_experiment(experiment);

        std::error_code ec;
        std::filesystem::create_directories(out_dir, ec);
        if (ec) throw DataError(out_dir.string(), 0, "cannot create output directory: " + ec.message());

        {
            std::ofstream csv(out_dir / "series.csv", std::ios::binary);
            if (!csv) throw DataError((out_dir / "series.csv").string(), 0, "cannot write");
            write_series_csv(csv, result);
        }
        {
            std::ofstream js(out_dir / "run.json", std::ios::binary);
            if (!js) throw DataError((out_dir / "run.json").string(), 0, "cannot write");
            js << run_record(result).dump(1) << "\n";
        }
        return static_cast<int>(kExitOk);
    });
}

int cmd_score(const std::filesystem::path& config, const std::filesystem::path& log_csv,
              const Overrides& overrides, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const Experiment experiment(load_with_overrides(config, overrides));
        const RunConfig& cfg = experiment.config();
        const TrialSetup setup = experiment.setup_trial(0);
        const MeasurementLog log = read_log_csv(log_csv, cfg.noise_sd);
        for (std::size_t i = 0; i < log.size(); ++i)
            if (!experiment.mask().contains(log.locations()[i]))
                throw DomainError("log entry " + std::to_string(i) + " is outside the RoI");

        const auto& targets = setup.placement.targets;
        const auto& cands = setup.placement.candidates;
        const MeanSpec mean = experiment.mean();
        const EdgScorer scorer(mean, cfg.kernel, log, targets);
        const QuadratureSpec quad{cfg.quadrature_nodes};

        out << "index,x,y,edg_exact,edg_quadrature,edg_paper_form\n";
        char buf[256];
        for (std::size_t i = 0; i < cands.size(); ++i) {
            const double exact = scorer.score(cands[i]).value;
            const double q = edg_quadrature(mean, cfg.kernel, log, cands[i], targets, quad);
            const double paper = edg_paper_form(mean, cfg.kernel, log, cands[i], targets).value;
            std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g,%.17g\n", i, cands[i].x, cands[i].y, exact,
                          q, paper);
            out << buf;
        }
        const Selection best = greedy_select(mean, cfg.kernel, log, cands, targets, cfg.workers);
        std::snprintf(buf, sizeof buf, "argmax,%zu,%.17g,%.17g,%.17g\n", best.index, best.where.x, best.where.y,
                      best.score);
        out << buf;
        return static_cast<int>(kExitOk);
    });
}

int cmd_validate(const std::filesystem::path& config, std::ostream& out) {
    std::vector<std::string> config_issues;
    std::vector<std::string> data_issues;

    std::optional<RunConfig> cfg;
    try {
        cfg = load_config(config);
    } catch (const ConfigError& e) {
        for (const auto& i : e.issues()) out << "config: " << i << "\n";
        return kExitConfig;
    } catch (const DataError& e) {
        out << "data: " << e.what() << "\n";
        return kExitData;
    }

    std::optional<Experiment> experiment;
    try {
        experiment.emplace(*cfg);
    } catch (const DataError& e) {
        out << "data: " << e.what() << "\n";
        return kExitData;
    } catch (const Error& e) {
        out << "config: " << e.what() << "\n";
        return kExitConfig;
    }

    const RoIMask& mask = experiment->mask();
    if (cfg->targets && cfg->candidates) {
        for (std::size_t i = 0; i < cfg->targets->size(); ++i)
            if (!mask.contains((*cfg->targets)[i]))
                config_issues.push_back("target " + std::to_string(i) + " is outside the RoI");
        for (std::size_t i = 0; i < cfg->candidates->size(); ++i)
            if (!mask.contains((*cfg->candidates)[i]))
                config_issues.push_back("candidate " + std::to_string(i) + " is outside the RoI");
    }

    if (config_issues.empty()) {
        try {
            const TrialSetup setup = experiment->setup_trial(0);
            std::vector<Location> all = setup.placement.targets;
            all.insert(all.end(), setup.placement.candidates.begin(), setup.placement.candidates.end());
            for (std::size_t i = 0; i < all.size(); ++i) {
                try {
                    (void)setup.field.value(all[i]);
                } catch (const DomainError& e) {
                    const bool is_target = i < setup.placement.targets.size();
                    const std::size_t idx = is_target ? i : i - setup.placement.targets.size();
                    data_issues.push_back(std::string(is_target ? "target " : "candidate ") + std::to_string(idx) +
                                          ": " + e.what());
                }
            }
            const Eigen::MatrixXd k = kernel_matrix(cfg->kernel, all, all);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k, Eigen::EigenvaluesOnly);
            if (es.eigenvalues().minCoeff() < -1e-10 * k.trace())
                config_issues.push_back("kernel matrix on the configured points is not positive semidefinite");
        } catch (const PlacementError& e) {
            config_issues.push_back(e.what());
        } catch (const DegeneracyError& e) {
            config_issues.push_back(std::string("field sampling: ") + e.what());
        }
    }

    for (const auto& i : config_issues) out << "config: " << i << "\n";
    for (const auto& i : data_issues) out << "data: " << i << "\n";
    if (!config_issues.empty()) return kExitConfig;
    if (!data_issues.empty()) return kExitData;
    return kExitOk;
}

}  // namespace infoplan::harness
