// infoplan: greedy information-driven sensor planning experiments.

#include "harness/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    using namespace infoplan::harness;

    CLI::App app{"Gaussian-process sensor planning: greedy expected-KL selection vs random baseline"};
    app.require_subcommand(1);

    std::string config;
    std::string out_dir = "out";
    std::string log_csv;
    Overrides o;

    auto add_overrides = [&](CLI::App* cmd) {
        cmd->add_option("--seed", o.seed, "Master seed");
        cmd->add_option("--trials", o.trials, "Number of paired trials")->check(CLI::PositiveNumber);
        cmd->add_option("--horizon", o.horizon, "Measurements per episode")->check(CLI::PositiveNumber);
        cmd->add_option("--planner", o.planner, "Planner")->check(CLI::IsMember({"greedy-edg", "random", "both"}));
        cmd->add_option("--workers", o.workers, "Worker threads")->check(CLI::PositiveNumber);
    };

    auto* run = app.add_subcommand("run", "Run paired greedy/random episodes; writes run.json and series.csv");
    run->add_option("--config", config, "Config file")->required();
    run->add_option("--out", out_dir, "Output directory")->capture_default_str();
    add_overrides(run);

    auto* score = app.add_subcommand("score", "Print the EDG of every candidate given a measurement log");
    score->add_option("--config", config, "Config file")->required();
    score->add_option("--log", log_csv, "Measurement log CSV (x,y,value)")->required();
    add_overrides(score);

    auto* validate = app.add_subcommand("validate", "Check a config (or a run.json echo) and its data");
    validate->add_option("--config", config, "Config file or run.json")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    if (*run) return cmd_run(config, o, out_dir, std::cerr);
    if (*score) return cmd_score(config, log_csv, o, std::cout, std::cerr);
    return cmd_validate(config, std::cout);
}
