#include "infoplan/environment.hpp"

#include "infoplan/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace infoplan {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Bounds grid_extent(const GridData& g) {
    return {g.lon0 - 0.5 * g.dlon, g.lon0 + (static_cast<double>(g.cols) - 0.5) * g.dlon,
            g.lat0 - 0.5 * g.dlat, g.lat0 + (static_cast<double>(g.rows) - 0.5) * g.dlat};
}

bool inside(const Bounds& b, const Location& p) {
    return p.x >= b.xmin && p.x <= b.xmax && p.y >= b.ymin && p.y <= b.ymax;
}

/// Nearest non-missing cell centre within two cell diagonals; ties go to the
/// lower row-major index.
double grid_lookup(const GridData& g, const Location& p) {
    if (!inside(grid_extent(g), p)) throw DomainError("location is outside the grid region");

    const double reach = 2.0 * std::hypot(g.dlat, g.dlon);
    const double fr = (p.y - g.lat0) / g.dlat;
    const double fc = (p.x - g.lon0) / g.dlon;
    const auto wr = static_cast<long>(std::ceil(reach / g.dlat)) + 1;
    const auto wc = static_cast<long>(std::ceil(reach / g.dlon)) + 1;
    const long r_lo = std::max(0L, static_cast<long>(std::floor(fr)) - wr);
    const long r_hi = std::min(static_cast<long>(g.rows) - 1, static_cast<long>(std::ceil(fr)) + wr);
    const long c_lo = std::max(0L, static_cast<long>(std::floor(fc)) - wc);
    const long c_hi = std::min(static_cast<long>(g.cols) - 1, static_cast<long>(std::ceil(fc)) + wc);

    double best = std::numeric_limits<double>::infinity();
    double value = std::numeric_limits<double>::quiet_NaN();
    for (long r = r_lo; r <= r_hi; ++r) {
        for (long c = c_lo; c <= c_hi; ++c) {
            const auto ur = static_cast<std::size_t>(r);
            const auto uc = static_cast<std::size_t>(c);
            if (g.missing(ur, uc)) continue;
            const double d2 = squared_distance(g.center(ur, uc), p);
            if (d2 < best) {
                best = d2;
                value = g.at(ur, uc);
            }
        }
    }
    if (!(best <= reach * reach))
        throw DomainError("no grid data within two cell diagonals of the location");
    return value;
}

}  // namespace

// ---------------------------------------------------------------------------

RoIMask RoIMask::polygon(std::vector<Location> vertices) {
    if (vertices.size() < 3) throw InvalidInput("RoI polygon needs at least 3 vertices");
    Bounds b{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
             std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const auto& v : vertices) {
        if (!is_finite(v)) throw InvalidInput("RoI polygon vertex is not finite");
        b.xmin = std::min(b.xmin, v.x);
        b.xmax = std::max(b.xmax, v.x);
        b.ymin = std::min(b.ymin, v.y);
        b.ymax = std::max(b.ymax, v.y);
    }
    if (!(b.xmax > b.xmin) || !(b.ymax > b.ymin)) throw InvalidInput("RoI polygon has zero area");
    return RoIMask(PolygonMask{std::move(vertices), b});
}

RoIMask RoIMask::rectangle(double xmin, double ymin, double xmax, double ymax) {
    return polygon({{xmin, ymin}, {xmax, ymin}, {xmax, ymax}, {xmin, ymax}});
}

RoIMask RoIMask::from_grid(std::shared_ptr<const GridData> grid) {
    if (!grid) throw InvalidInput("RoI mask: null grid");
    grid->validate();
    return RoIMask(GridMask{std::move(grid)});
}

bool RoIMask::contains(const Location& p) const {
    if (!is_finite(p)) return false;
    return std::visit(
        overloaded{
            [&](const PolygonMask& m) {
                if (!inside(m.box, p)) return false;
                // Even-odd ray casting towards +x.
                bool in = false;
                const auto& v = m.vertices;
                for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
                    if ((v[i].y > p.y) != (v[j].y > p.y)) {
                        const double xc = v[j].x + (p.y - v[j].y) * (v[i].x - v[j].x) / (v[i].y - v[j].y);
                        if (p.x < xc) in = !in;
                    }
                }
                return in;
            },
            [&](const GridMask& m) {
                const GridData& g = *m.grid;
                if (!inside(grid_extent(g), p)) return false;
                const double r = std::clamp(std::round((p.y - g.lat0) / g.dlat), 0.0,
                                            static_cast<double>(g.rows - 1));
                const double c = std::clamp(std::round((p.x - g.lon0) / g.dlon), 0.0,
                                            static_cast<double>(g.cols - 1));
                return !g.missing(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
            },
        },
        m_);
}

Bounds RoIMask::bounds() const {
    return std::visit(overloaded{[](const PolygonMask& m) { return m.box; },
                                 [](const GridMask& m) { return grid_extent(*m.grid); }},
                      m_);
}

const std::vector<Location>& RoIMask::vertices() const {
    static const std::vector<Location> none;
    if (const auto* p = std::get_if<PolygonMask>(&m_)) return p->vertices;
    return none;
}

// ---------------------------------------------------------------------------

void AnalyticSpec::validate() const {
    for (double p : params)
        if (!std::isfinite(p)) throw InvalidInput("analytic field parameter is not finite");
    switch (function) {
        case AnalyticFunction::plane:
            if (params.size() != 3) throw InvalidInput("plane field needs 3 parameters: a b c");
            break;
        case AnalyticFunction::sinusoid:
            if (params.size() != 4) throw InvalidInput("sinusoid field needs 4 parameters: a b c d");
            break;
        case AnalyticFunction::gaussian_bumps:
            if (params.empty() || (params.size() - 1) % 4 != 0)
                throw InvalidInput("gaussian_bumps needs an offset followed by groups of cx cy h w");
            for (std::size_t i = 1; i < params.size(); i += 4)
                if (!(params[i + 3] > 0.0)) throw InvalidInput("gaussian bump width must be > 0");
            break;
    }
}

double AnalyticSpec::operator()(const Location& p) const {
    switch (function) {
        case AnalyticFunction::plane:
            return params[0] * p.x + params[1] * p.y + params[2];
        case AnalyticFunction::sinusoid:
            return params[0] * std::sin(params[1] * p.x) * std::cos(params[2] * p.y) + params[3];
        case AnalyticFunction::gaussian_bumps: {
            double v = params[0];
            for (std::size_t i = 1; i + 3 < params.size(); i += 4) {
                const Location c{params[i], params[i + 1]};
                const double w = params[i + 3];
                v += params[i + 2] * std::exp(-squared_distance(p, c) / (2.0 * w * w));
            }
            return v;
        }
    }
    return 0.0;
}

std::string to_string(FieldKind kind) {
    switch (kind) {
        case FieldKind::grid: return "grid";
        case FieldKind::analytic: return "analytic";
        case FieldKind::gp_sample: return "gp-sample";
    }
    return "?";
}

std::string to_string(AnalyticFunction f) {
    switch (f) {
        case AnalyticFunction::plane: return "plane";
        case AnalyticFunction::sinusoid: return "sinusoid";
        case AnalyticFunction::gaussian_bumps: return "gaussian_bumps";
    }
    return "?";
}

AnalyticFunction analytic_function_from_string(const std::string& name) {
    if (name == "plane") return AnalyticFunction::plane;
    if (name == "sinusoid") return AnalyticFunction::sinusoid;
    if (name == "gaussian_bumps") return AnalyticFunction::gaussian_bumps;
    throw InvalidInput("unknown analytic function '" + name + "'");
}

// ---------------------------------------------------------------------------

GroundTruthField GroundTruthField::from_grid(std::shared_ptr<const GridData> grid) {
    RoIMask mask = RoIMask::from_grid(grid);
    return GroundTruthField(GridPayload{std::move(grid)}, std::move(mask));
}

GroundTruthField GroundTruthField::analytic(AnalyticSpec spec, std::optional<RoIMask> mask) {
    spec.validate();
    return GroundTruthField(std::move(spec), std::move(mask));
}

GroundTruthField GroundTruthField::gp_sample(std::vector<Location> nodes, std::vector<double> values,
                                             RoIMask mask) {
    if (nodes.empty()) throw InvalidInput("gp-sample field needs at least one node");
    if (nodes.size() != values.size()) throw InvalidInput("gp-sample nodes and values differ in length");
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (!is_finite(nodes[i]) || !std::isfinite(values[i]))
            throw InvalidInput("gp-sample field has a non-finite node or value");
    return GroundTruthField(SamplePayload{std::move(nodes), std::move(values)}, std::move(mask));
}

FieldKind GroundTruthField::kind() const noexcept {
    switch (payload_.index()) {
        case 0: return FieldKind::grid;
        case 1: return FieldKind::analytic;
        default: return FieldKind::gp_sample;
    }
}

const GridData* GroundTruthField::grid() const {
    const auto* p = std::get_if<GridPayload>(&payload_);
    return p ? p->grid.get() : nullptr;
}

const AnalyticSpec* GroundTruthField::analytic_spec() const { return std::get_if<AnalyticSpec>(&payload_); }

const std::vector<Location>& GroundTruthField::sample_nodes() const {
    static const std::vector<Location> none;
    const auto* p = std::get_if<SamplePayload>(&payload_);
    return p ? p->nodes : none;
}

const std::vector<double>& GroundTruthField::sample_values() const {
    static const std::vector<double> none;
    const auto* p = std::get_if<SamplePayload>(&payload_);
    return p ? p->values : none;
}

double GroundTruthField::value(const Location& p) const {
    if (!is_finite(p)) throw DomainError("location is not finite");
    return std::visit(
        overloaded{
            [&](const GridPayload& g) { return grid_lookup(*g.grid, p); },
            [&](const AnalyticSpec& a) {
                if (mask_ && !mask_->contains(p)) throw DomainError("location is outside the RoI");
                return a(p);
            },
            [&](const SamplePayload& s) {
                if (mask_ && !mask_->contains(p)) throw DomainError("location is outside the RoI");
                std::size_t best = 0;
                double best_d2 = squared_distance(s.nodes[0], p);
                for (std::size_t i = 1; i < s.nodes.size(); ++i) {
                    const double d2 = squared_distance(s.nodes[i], p);
                    if (d2 < best_d2) {
                        best_d2 = d2;
                        best = i;
                    }
                }
                return s.values[best];
            },
        },
        payload_);
}

double field_value(const GroundTruthField& field, const Location& p) { return field.value(p); }

double measure(const GroundTruthField& field, const Location& p, double noise_sd, Rng& rng) {
    if (!(noise_sd >= 0.0) || !std::isfinite(noise_sd)) throw InvalidInput("noise_sd must be finite and >= 0");
    const double truth = field.value(p);
    if (noise_sd == 0.0) return truth;
    return truth + noise_sd * rng.normal();
}

// ---------------------------------------------------------------------------

Placement place_scenario(const RoIMask& mask, std::size_t n_targets, std::size_t n_candidates,
                         std::size_t n_shared, std::uint64_t seed) {
    if (n_targets == 0 || n_candidates == 0)
        throw InvalidInput("place_scenario: target and candidate counts must be >= 1");
    if (n_shared > std::min(n_targets, n_candidates))
        throw InvalidInput("place_scenario: n_shared exceeds min(n_targets, n_candidates)");

    const std::size_t total = n_targets + n_candidates - n_shared;
    const Bounds b = mask.bounds();
    Rng rng(seed);

    std::vector<Location> pts;
    pts.reserve(total);
    std::size_t attempts = 0;
    while (pts.size() < total) {
        if (++attempts > kMaxPlacementAttempts) {
            std::ostringstream os;
            os << "placement gave up after " << kMaxPlacementAttempts << " attempts with " << pts.size()
               << " of " << total << " points placed";
            throw PlacementError(os.str());
        }
        const Location p{rng.uniform(b.xmin, b.xmax), rng.uniform(b.ymin, b.ymax)};
        if (!mask.contains(p)) continue;
        if (std::find(pts.begin(), pts.end(), p) != pts.end()) continue;
        pts.push_back(p);
    }

    Placement out;
    out.targets.assign(pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(n_targets));
    out.candidates.assign(pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(n_shared));
    out.candidates.insert(out.candidates.end(), pts.begin() + static_cast<std::ptrdiff_t>(n_targets), pts.end());
    return out;
}

}  // namespace infoplan
