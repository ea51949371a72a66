#pragma once

// Ground-truth fields f0, the region of interest, and scenario placement.

#include "infoplan/gp.hpp"
#include "infoplan/rng.hpp"

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace infoplan {

/// Regular lat/lon raster of cell-centre values. Missing cells (NaN) lie
/// outside the region of interest. Row r has latitude lat0 + r*dlat, column c
/// has longitude lon0 + c*dlon; storage is row-major.
struct GridData {
    double lat0 = 0.0;
    double lon0 = 0.0;
    double dlat = 1.0;
    double dlon = 1.0;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;

    void validate() const;

    bool missing(std::size_t r, std::size_t c) const { return std::isnan(at(r, c)); }
    double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
    Location center(std::size_t r, std::size_t c) const {
        return {lon0 + static_cast<double>(c) * dlon, lat0 + static_cast<double>(r) * dlat};
    }
    /// Mean over non-missing cells.
    double sample_mean() const;

    /// Missing cells compare equal to each other; everything else bitwise.
    friend bool operator==(const GridData& a, const GridData& b);
};

/// Reads `lat,lon,value` CSV. Cells may be absent or carry the token NA.
/// Spacing is inferred from the smallest positive coordinate differences and
/// must be uniform to 1e-6 relative. Errors name the source and line.
GridData parse_grid_csv(std::istream& in, const std::string& source_name);
GridData read_grid_csv(const std::filesystem::path& path);
/// Writes every cell, row-major, with NA for missing values.
void write_grid_csv(std::ostream& out, const GridData& grid);

// ---------------------------------------------------------------------------

struct Bounds {
    double xmin = 0.0, xmax = 0.0, ymin = 0.0, ymax = 0.0;
};

/// Region membership: either an explicit polygon (even-odd rule) or the
/// non-missing support of a grid.
class RoIMask {
public:
    static RoIMask polygon(std::vector<Location> vertices);
    static RoIMask rectangle(double xmin, double ymin, double xmax, double ymax);
    static RoIMask from_grid(std::shared_ptr<const GridData> grid);

    bool contains(const Location& p) const;
    Bounds bounds() const;

    /// Empty for grid-derived masks.
    const std::vector<Location>& vertices() const;

private:
    struct PolygonMask {
        std::vector<Location> vertices;
        Bounds box;
    };
    struct GridMask {
        std::shared_ptr<const GridData> grid;
    };
    explicit RoIMask(std::variant<PolygonMask, GridMask> m) : m_(std::move(m)) {}

    std::variant<PolygonMask, GridMask> m_;
};

// ---------------------------------------------------------------------------

enum class FieldKind { grid, analytic, gp_sample };

enum class AnalyticFunction {
    plane,           // a x + b y + c                 params: a b c
    sinusoid,        // a sin(b x) cos(c y) + d       params: a b c d
    gaussian_bumps,  // d + sum h exp(-|p-c|^2/2w^2)  params: d, then (cx cy h w)*
};

struct AnalyticSpec {
    AnalyticFunction function = AnalyticFunction::sinusoid;
    std::vector<double> params;

    void validate() const;
    double operator()(const Location& p) const;
};

std::string to_string(FieldKind kind);
std::string to_string(AnalyticFunction f);
AnalyticFunction analytic_function_from_string(const std::string& name);

/// The true phenomenon. Immutable; safe for concurrent reads.
class GroundTruthField {
public:
    static GroundTruthField from_grid(std::shared_ptr<const GridData> grid);
    /// Without a mask the analytic field is defined everywhere.
    static GroundTruthField analytic(AnalyticSpec spec, std::optional<RoIMask> mask = std::nullopt);
    /// Values at sample nodes; other points take the nearest node's value.
    static GroundTruthField gp_sample(std::vector<Location> nodes, std::vector<double> values,
                                      RoIMask mask);

    FieldKind kind() const noexcept;
    double value(const Location& p) const;
    const std::optional<RoIMask>& mask() const noexcept { return mask_; }

    const GridData* grid() const;
    const AnalyticSpec* analytic_spec() const;
    const std::vector<Location>& sample_nodes() const;
    const std::vector<double>& sample_values() const;

private:
    struct GridPayload {
        std::shared_ptr<const GridData> grid;
    };
    struct SamplePayload {
        std::vector<Location> nodes;
        std::vector<double> values;
    };

    GroundTruthField(std::variant<GridPayload, AnalyticSpec, SamplePayload> p,
                     std::optional<RoIMask> mask)
        : payload_(std::move(p)), mask_(std::move(mask)) {}

    std::variant<GridPayload, AnalyticSpec, SamplePayload> payload_;
    std::optional<RoIMask> mask_;
};

double field_value(const GroundTruthField& field, const Location& p);

/// f0(x) + eps with eps ~ N(0, noise_sd^2) drawn from `rng`. With noise_sd = 0
/// the stream is not advanced.
double measure(const GroundTruthField& field, const Location& p, double noise_sd, Rng& rng);

struct Placement {
    std::vector<Location> targets;
    std::vector<Location> candidates;
};

inline constexpr std::size_t kMaxPlacementAttempts = 1'000'000;

/// Uniform rejection sampling of distinct points inside the mask. The first
/// n_shared targets and the first n_shared candidates are the same points.
Placement place_scenario(const RoIMask& mask, std::size_t n_targets, std::size_t n_candidates,
                         std::size_t n_shared, std::uint64_t seed);

}  // namespace infoplan
