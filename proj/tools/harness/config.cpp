#include "harness/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace infoplan::harness {

namespace pt = boost::property_tree;

namespace {

std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (const auto& s : v) {
        if (!out.empty()) out += "; ";
        out += s;
    }
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::optional<double> to_real(const std::string& text) {
    const std::string s = trim(text);
    if (s.empty()) return std::nullopt;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

std::optional<std::uint64_t> to_uint(const std::string& text) {
    const std::string s = trim(text);
    if (s.empty() || s.front() == '-' || s.front() == '+') return std::nullopt;
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
    if (end != s.c_str() + s.size() || errno == ERANGE) return std::nullopt;
    return static_cast<std::uint64_t>(v);
}

std::vector<double> to_reals(const std::string& text, bool& ok) {
    std::istringstream is(text);
    std::vector<double> out;
    std::string tok;
    ok = true;
    while (is >> tok) {
        const auto v = to_real(tok);
        if (!v) {
            ok = false;
            return {};
        }
        out.push_back(*v);
    }
    return out;
}

const std::map<std::string, std::set<std::string>>& known_keys() {
    static const std::map<std::string, std::set<std::string>> keys{
        {"run", {"seed", "trials", "horizon", "planner", "workers", "quadrature_nodes"}},
        {"scenario", {"noise_sd", "n_targets", "n_candidates", "n_shared", "targets", "candidates"}},
        {"region", {"polygon"}},
        {"field", {"kind", "function", "params", "path", "lattice"}},
        {"kernel", {"signal_variance", "lengthscale", "jitter"}},
        {"mean", {"constant"}},
    };
    return keys;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> issues)
    : Error("invalid configuration: " + join(issues)), issues_(std::move(issues)) {}

std::filesystem::path RunConfig::resolved_path() const {
    if (path.empty() || path.is_absolute()) return path;
    return base_dir / path;
}

std::vector<std::string> RunConfig::planners() const {
    if (planner == "both") return {"greedy-edg", "random"};
    return {planner};
}

std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<Location> parse_locations(const std::string& text) {
    std::vector<Location> out;
    std::istringstream is(text);
    std::string item;
    while (std::getline(is, item, ';')) {
        if (trim(item).empty()) continue;
        bool ok = false;
        const auto v = to_reals(item, ok);
        if (!ok || v.size() != 2) throw InvalidInput("expected 'x y' pairs separated by ';', got '" + trim(item) + "'");
        out.push_back({v[0], v[1]});
    }
    return out;
}

std::string format_locations(const std::vector<Location>& pts) {
    std::string out;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i) out += "; ";
        out += format_real(pts[i].x) + " " + format_real(pts[i].y);
    }
    return out;
}

RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
    pt::ptree tree;
    try {
        std::istringstream is(text);
        pt::read_ini(is, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError({std::string("line ") + std::to_string(e.line()) + ": " + e.message()});
    }

    RunConfig cfg;
    cfg.base_dir = base_dir;
    std::vector<std::string> issues;

    for (const auto& [section, body] : tree) {
        const auto it = known_keys().find(section);
        if (it == known_keys().end()) {
            issues.push_back("unknown section [" + section + "]");
            continue;
        }
        for (const auto& [key, _] : body)
            if (!it->second.count(key)) issues.push_back("unknown key " + section + "." + key);
    }

    auto get = [&](const std::string& dotted) -> std::optional<std::string> {
        if (auto v = tree.get_optional<std::string>(dotted)) return trim(*v);
        return std::nullopt;
    };
    auto read_uint = [&](const std::string& key, auto& target) {
        if (auto v = get(key)) {
            if (auto n = to_uint(*v)) {
                target = static_cast<std::remove_reference_t<decltype(target)>>(*n);
            } else {
                issues.push_back(key + ": expected a non-negative integer, got '" + *v + "'");
            }
        }
    };
    auto read_real = [&](const std::string& key, double& target) {
        if (auto v = get(key)) {
            if (auto r = to_real(*v)) {
                target = *r;
            } else {
                issues.push_back(key + ": expected a finite number, got '" + *v + "'");
            }
        }
    };
    auto read_points = [&](const std::string& key, auto& target) {
        if (auto v = get(key)) {
            try {
                target = parse_locations(*v);
            } catch (const InvalidInput& e) {
                issues.push_back(key + ": " + e.what());
            }
        }
    };

    read_uint("run.seed", cfg.seed);
    read_uint("run.trials", cfg.trials);
    read_uint("run.horizon", cfg.horizon);
    if (auto v = get("run.planner")) cfg.planner = *v;
    read_uint("run.workers", cfg.workers);
    read_uint("run.quadrature_nodes", cfg.quadrature_nodes);

    read_real("scenario.noise_sd", cfg.noise_sd);
    read_uint("scenario.n_targets", cfg.n_targets);
    read_uint("scenario.n_candidates", cfg.n_candidates);
    read_uint("scenario.n_shared", cfg.n_shared);
    if (get("scenario.targets")) {
        std::vector<Location> pts;
        read_points("scenario.targets", pts);
        cfg.targets = std::move(pts);
    }
    if (get("scenario.candidates")) {
        std::vector<Location> pts;
        read_points("scenario.candidates", pts);
        cfg.candidates = std::move(pts);
    }

    read_points("region.polygon", cfg.region);

    if (auto v = get("field.kind")) cfg.field_kind = *v;
    if (auto v = get("field.function")) cfg.function = *v;
    if (auto v = get("field.params")) {
        bool ok = false;
        auto p = to_reals(*v, ok);
        if (ok) {
            cfg.params = std::move(p);
        } else {
            issues.push_back("field.params: expected space-separated numbers");
        }
    }
    if (auto v = get("field.path")) cfg.path = *v;
    read_uint("field.lattice", cfg.lattice);

    read_real("kernel.signal_variance", cfg.kernel.signal_variance);
    read_real("kernel.lengthscale", cfg.kernel.lengthscale);
    read_real("kernel.jitter", cfg.kernel.jitter);

    if (auto v = get("mean.constant")) {
        if (*v == "auto") {
            cfg.mean_constant.reset();
        } else if (auto r = to_real(*v)) {
            cfg.mean_constant = *r;
        } else {
            issues.push_back("mean.constant: expected a number or 'auto', got '" + *v + "'");
        }
    }

    const auto semantic = validate_config(cfg);
    issues.insert(issues.end(), semantic.begin(), semantic.end());
    if (!issues.empty()) throw ConfigError(std::move(issues));
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError({path.string() + ": cannot open config file"});
    std::stringstream ss;
    ss << in.rdbuf();
    const auto base = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
    if (path.extension() == ".json") {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(ss.str());
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError({path.string() + ": not valid JSON: " + e.what()});
        }
        if (!j.contains("config_ini") || !j["config_ini"].is_string())
            throw ConfigError({path.string() + ": run record has no config_ini echo"});
        return parse_config(j["config_ini"].get<std::string>(), base);
    }
    return parse_config(ss.str(), base);
}

void apply_overrides(RunConfig& cfg, const Overrides& o) {
    if (o.seed) cfg.seed = *o.seed;
    if (o.trials) cfg.trials = *o.trials;
    if (o.horizon) cfg.horizon = *o.horizon;
    if (o.planner) cfg.planner = *o.planner;
    if (o.workers) cfg.workers = *o.workers;
    auto issues = validate_config(cfg);
    if (!issues.empty()) throw ConfigError(std::move(issues));
}

std::vector<std::string> validate_config(const RunConfig& cfg) {
    std::vector<std::string> issues;
    if (cfg.trials < 1) issues.push_back("run.trials must be >= 1");
    if (cfg.horizon < 1) issues.push_back("run.horizon must be >= 1");
    if (cfg.planner != "greedy-edg" && cfg.planner != "random" && cfg.planner != "both")
        issues.push_back("run.planner must be greedy-edg, random or both");
    if (cfg.workers < 1) issues.push_back("run.workers must be >= 1");
    if (cfg.quadrature_nodes < 1) issues.push_back("run.quadrature_nodes must be >= 1");

    if (!(cfg.noise_sd >= 0.0)) issues.push_back("scenario.noise_sd must be >= 0");
    if (cfg.targets.has_value() != cfg.candidates.has_value())
        issues.push_back("scenario.targets and scenario.candidates must be given together");
    if (cfg.targets && cfg.candidates) {
        if (cfg.targets->empty()) issues.push_back("scenario.targets is empty");
        if (cfg.candidates->empty()) issues.push_back("scenario.candidates is empty");
        bool shared = false;
        for (const auto& t : *cfg.targets)
            for (const auto& c : *cfg.candidates) shared = shared || t == c;
        if (!shared) issues.push_back("scenario.targets and scenario.candidates share no location");
    } else {
        if (cfg.n_targets < 1) issues.push_back("scenario.n_targets must be >= 1");
        if (cfg.n_candidates < 1) issues.push_back("scenario.n_candidates must be >= 1");
        if (cfg.n_shared < 1) issues.push_back("scenario.n_shared must be >= 1");
        if (cfg.n_shared > std::min(cfg.n_targets, cfg.n_candidates))
            issues.push_back("scenario.n_shared must not exceed min(n_targets, n_candidates)");
    }

    if (cfg.field_kind != "grid") {
        try {
            (void)RoIMask::polygon(cfg.region);
        } catch (const InvalidInput& e) {
            issues.push_back(std::string("region.polygon: ") + e.what());
        }
    }

    if (cfg.field_kind == "grid") {
        if (cfg.path.empty()) issues.push_back("field.path is required for grid fields");
    } else if (cfg.field_kind == "analytic") {
        try {
            AnalyticSpec{analytic_function_from_string(cfg.function), cfg.params}.validate();
        } catch (const InvalidInput& e) {
            issues.push_back(std::string("field: ") + e.what());
        }
    } else if (cfg.field_kind == "gp-sample") {
        if (cfg.lattice < 2) issues.push_back("field.lattice must be >= 2");
    } else {
        issues.push_back("field.kind must be grid, analytic or gp-sample");
    }

    try {
        cfg.kernel.validate();
    } catch (const InvalidInput& e) {
        issues.push_back(e.what());
    }
    return issues;
}

std::string to_ini(const RunConfig& cfg) {
    std::ostringstream os;
    os << "[run]\n"
       << "seed = " << cfg.seed << "\n"
       << "trials = " << cfg.trials << "\n"
       << "horizon = " << cfg.horizon << "\n"
       << "planner = " << cfg.planner << "\n"
       << "workers = " << cfg.workers << "\n"
       << "quadrature_nodes = " << cfg.quadrature_nodes << "\n\n";
    os << "[scenario]\n"
       << "noise_sd = " << format_real(cfg.noise_sd) << "\n"
       << "n_targets = " << cfg.n_targets << "\n"
       << "n_candidates = " << cfg.n_candidates << "\n"
       << "n_shared = " << cfg.n_shared << "\n";
    if (cfg.targets) os << "targets = " << format_locations(*cfg.targets) << "\n";
    if (cfg.candidates) os << "candidates = " << format_locations(*cfg.candidates) << "\n";
    os << "\n[region]\n"
       << "polygon = " << format_locations(cfg.region) << "\n\n";
    os << "[field]\n"
       << "kind = " << cfg.field_kind << "\n"
       << "function = " << cfg.function << "\n"
       << "params =";
    for (double p : cfg.params) os << " " << format_real(p);
    os << "\n";
    if (!cfg.path.empty()) os << "path = " << cfg.resolved_path().lexically_normal().string() << "\n";
    os << "lattice = " << cfg.lattice << "\n\n";
    os << "[kernel]\n"
       << "signal_variance = " << format_real(cfg.kernel.signal_variance) << "\n"
       << "lengthscale = " << format_real(cfg.kernel.lengthscale) << "\n"
       << "jitter = " << format_real(cfg.kernel.jitter) << "\n\n";
    os << "[mean]\n"
       << "constant = " << (cfg.mean_constant ? format_real(*cfg.mean_constant) : std::string("auto")) << "\n";
    return os.str();
}

nlohmann::ordered_json to_json(const RunConfig& cfg) {
    using J = nlohmann::ordered_json;
    auto pts = [](const std::vector<Location>& v) {
        J a = J::array();
        for (const auto& p : v) a.push_back({p.x, p.y});
        return a;
    };
    J j;
    j["run"] = {{"seed", cfg.seed},       {"trials", cfg.trials},   {"horizon", cfg.horizon},
                {"planner", cfg.planner}, {"workers", cfg.workers}, {"quadrature_nodes", cfg.quadrature_nodes}};
    j["scenario"] = {{"noise_sd", cfg.noise_sd},
                     {"n_targets", cfg.n_targets},
                     {"n_candidates", cfg.n_candidates},
                     {"n_shared", cfg.n_shared},
                     {"targets", cfg.targets ? pts(*cfg.targets) : J(nullptr)},
                     {"candidates", cfg.candidates ? pts(*cfg.candidates) : J(nullptr)}};
    j["region"] = {{"polygon", pts(cfg.region)}};
    j["field"] = {{"kind", cfg.field_kind},
                  {"function", cfg.function},
                  {"params", cfg.params},
                  {"path", cfg.path.empty() ? J(nullptr) : J(cfg.resolved_path().lexically_normal().string())},
                  {"lattice", cfg.lattice}};
    j["kernel"] = {{"type", "squared-exponential"},
                   {"signal_variance", cfg.kernel.signal_variance},
                   {"lengthscale", cfg.kernel.lengthscale},
                   {"jitter", cfg.kernel.jitter}};
    j["mean"] = {{"constant", cfg.mean_constant ? J(*cfg.mean_constant) : J("auto")}};
    return j;
}

}  // namespace infoplan::harness
