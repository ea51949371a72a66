#pragma once

// Expected discrimination gain (EDG): the expectation, over the unseen reading
// at a candidate location, of KL(post-measurement belief || current belief)
// over the target set.

#include "infoplan/gp.hpp"
#include "infoplan/quadrature.hpp"

#include <optional>
#include <span>
#include <vector>

namespace infoplan {

struct EDGResult {
    /// Nats. structural_term + mean_shift_term.
    double value = 0.0;
    /// z-independent part: 1/2 [tr(S_prev^-1 S_post) - ln det(S_post)/det(S_prev) - N_v].
    double structural_term = 0.0;
    /// Expectation of the quadratic mean-shift part.
    double mean_shift_term = 0.0;
};

/// KL(P || Q) between Gaussian beliefs over the same query list. P is the
/// post-measurement belief and Q the pre-measurement belief. Returns +inf when
/// P is singular. Throws InvalidInput on mismatched dimensions and
/// DegeneracyError when Q cannot be factorized.
double kl_gaussian(const GaussianBelief& p, const GaussianBelief& q, double base_jitter = 0.0);

/// Scores many candidates against a fixed (log, targets) pair. The current
/// belief and its factorization are computed once; each score is then a
/// rank-one update (the post-measurement covariance does not depend on z).
class EdgScorer {
public:
    EdgScorer(const MeanSpec& mean, const KernelSpec& kernel, const MeasurementLog& log,
              std::span<const Location> targets);

    EDGResult score(const Location& candidate) const;

    const GaussianBelief& current_belief() const noexcept { return belief_; }
    const Conditioner& conditioner() const noexcept { return cond_; }

    /// Gain vector a with mu_post(z) - mu_prev = a (z - mu_z), and var_z
    /// (predictive variance including noise).
    struct Gain {
        Eigen::VectorXd a;
        double var_z = 0.0;
        double mu_z = 0.0;
    };
    Gain gain(const Location& candidate) const;

private:
    std::vector<Location> targets_;
    Conditioner cond_;
    GaussianBelief belief_;
    SpdFactor belief_factor_;
};

EDGResult edg_exact(const MeanSpec& mean, const KernelSpec& kernel, const MeasurementLog& log,
                    const Location& candidate, std::span<const Location> targets);

/// Direct Gauss-Hermite evaluation of the integral over z. Each node rebuilds
/// the posterior with the hypothetical reading appended and evaluates the KL
/// from scratch.
double edg_quadrature(const MeanSpec& mean, const KernelSpec& kernel, const MeasurementLog& log,
                      const Location& candidate, std::span<const Location> targets,
                      const QuadratureSpec& quad = {});

/// Intermediate matrices of the literal closed form.
struct PaperEDGTerms {
    Eigen::MatrixXd m1;  // K(V, Y_{k-1}) (K(Y_{k-1}, Y_{k-1}) + s^2 I)^-1
    Eigen::MatrixXd m2;  // K(V, Y_k) (K(Y_k, Y_k) + s^2 I)^-1
    Eigen::VectorXd v1;  // Z_{k-1} - m(Y_{k-1})
    Eigen::VectorXd v2;  // [v1; mu_z - m(y_k)]
    double d = 0.0;      // last diagonal entry of M2^T S_{k-1}^-1 M2
    double sigma_z = 0.0;  // predictive quantity without the noise term
    double trace_term = 0.0;
    double log_det_ratio = 0.0;
    double quadratic_term = 0.0;
};

struct PaperEDGResult {
    double value = 0.0;
    /// Empty when the log was empty and the exact value was substituted.
    std::optional<PaperEDGTerms> terms;
    bool fell_back_to_exact = false;
};

/// Literal evaluation of an alternative closed form, including its sqrt(pi)
/// and sigma^3 factors and the noise-free predictive variance. Not expected
/// to agree with edg_exact; kept for comparison.
PaperEDGResult edg_paper_form(const MeanSpec& mean, const KernelSpec& kernel,
                              const MeasurementLog& log, const Location& candidate,
                              std::span<const Location> targets);

}  // namespace infoplan
