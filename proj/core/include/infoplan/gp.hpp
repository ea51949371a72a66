#pragma once

// Exact Gaussian-process prior/posterior over finite location sets.

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace infoplan {

/// A point in the plane: (longitude, latitude) in decimal degrees for geodata,
/// or abstract planar units for synthetic runs.
struct Location {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Location&, const Location&) = default;
};

bool is_finite(const Location& p) noexcept;
double squared_distance(const Location& a, const Location& b) noexcept;

/// Isotropic squared-exponential covariance
///   k(a, b) = signal_variance * exp(-|a - b|^2 / (2 lengthscale^2)).
/// `jitter` is a relative diagonal inflation (multiplied by the mean diagonal
/// of whatever matrix is being factorized).
struct KernelSpec {
    double signal_variance = 1.0;
    double lengthscale = 1.0;
    double jitter = 0.0;

    void validate() const;
    double operator()(const Location& a, const Location& b) const noexcept;
};

struct MeanSpec {
    double constant = 0.0;

    void validate() const;
    double operator()(const Location&) const noexcept { return constant; }
};

/// Append-only record of sensing locations Y_k and noisy readings Z_k.
class MeasurementLog {
public:
    explicit MeasurementLog(double noise_sd = 0.0);

    void append(const Location& where, double value);
    /// Copy of this log with one more entry.
    MeasurementLog extended(const Location& where, double value) const;

    std::size_t size() const noexcept { return locations_.size(); }
    bool empty() const noexcept { return locations_.empty(); }
    double noise_sd() const noexcept { return noise_sd_; }
    std::span<const Location> locations() const noexcept { return locations_; }
    std::span<const double> values() const noexcept { return values_; }

private:
    std::vector<Location> locations_;
    std::vector<double> values_;
    double noise_sd_;
};

/// Mean vector and covariance of the field at a finite query set.
class GaussianBelief {
public:
    GaussianBelief(std::vector<Location> query, Eigen::VectorXd mean, Eigen::MatrixXd cov);

    const std::vector<Location>& query() const noexcept { return query_; }
    const Eigen::VectorXd& mean() const noexcept { return mean_; }
    const Eigen::MatrixXd& cov() const noexcept { return cov_; }
    std::size_t dim() const noexcept { return query_.size(); }

    /// Sub-belief over the given indices (rows/columns of mean and cov).
    GaussianBelief restrict(std::span<const std::size_t> indices) const;

private:
    std::vector<Location> query_;
    Eigen::VectorXd mean_;
    Eigen::MatrixXd cov_;
};

/// Smallest eigenvalue must be >= -floor_rel * trace / n.
bool is_psd(const Eigen::MatrixXd& m, double floor_rel = 1e-8);

Eigen::MatrixXd kernel_matrix(const KernelSpec& spec, std::span<const Location> xs,
                              std::span<const Location> ys);

// ---------------------------------------------------------------------------
// Factorization with jitter escalation

/// Relative jitter levels tried in order after the caller's base level fails.
inline constexpr double kJitterLadder[] = {1e-10, 1e-8, 1e-6};

struct SpdFactor {
    Eigen::LLT<Eigen::MatrixXd> llt;
    /// Relative level that succeeded (0 when none was needed).
    double jitter_level = 0.0;
    /// Absolute amount added to the diagonal.
    double added = 0.0;
};

/// Cholesky-factorize a symmetric matrix. Tries `base_level` first, then every
/// ladder level above it; the absolute inflation is level * scale, where
/// `scale` defaults to the mean diagonal. Throws DegeneracyError when all fail.
SpdFactor factorize_spd(const Eigen::MatrixXd& a, double base_level,
                        std::optional<double> scale = std::nullopt);

// ---------------------------------------------------------------------------
// Posterior

struct Predictive {
    double mean = 0.0;
    double variance = 0.0;
};

/// Factorization of K(Y,Y) + sigma^2 I for a fixed log, reusable across many
/// query sets. Immutable after construction.
class Conditioner {
public:
    Conditioner(const MeanSpec& mean, const KernelSpec& kernel, const MeasurementLog& log);

    GaussianBelief belief(std::span<const Location> query) const;
    Eigen::VectorXd posterior_mean(std::span<const Location> xs) const;
    Eigen::MatrixXd posterior_cov(std::span<const Location> xs,
                                  std::span<const Location> ys) const;
    Predictive predictive(const Location& candidate, bool include_noise) const;

    double jitter_level() const noexcept { return factor_ ? factor_->jitter_level : 0.0; }
    const MeasurementLog& log() const noexcept { return log_; }
    const KernelSpec& kernel() const noexcept { return kernel_; }
    const MeanSpec& mean() const noexcept { return mean_; }

private:
    /// L^{-1} K(Y, xs)
    Eigen::MatrixXd whiten(std::span<const Location> xs) const;

    MeanSpec mean_;
    KernelSpec kernel_;
    MeasurementLog log_;
    std::optional<SpdFactor> factor_;
    Eigen::VectorXd alpha_;  // (K + sigma^2 I)^{-1} (Z - m(Y))
};

GaussianBelief posterior(const MeanSpec& mean, const KernelSpec& kernel,
                         const MeasurementLog& log, std::span<const Location> query);

/// Predictive moments of the next reading at `candidate`. The variance is the
/// latent-field variance, plus sigma^2 when include_noise is set.
Predictive predictive_measurement(const MeanSpec& mean, const KernelSpec& kernel,
                                  const MeasurementLog& log, const Location& candidate,
                                  bool include_noise);

/// One draw from N(m(grid), K(grid, grid) + jitter I), deterministic in `seed`.
Eigen::VectorXd sample_prior_field(const MeanSpec& mean, const KernelSpec& kernel,
                                   std::span<const Location> grid, std::uint64_t seed);

}  // namespace infoplan
