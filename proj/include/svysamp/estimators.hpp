#pragma once

#include <vector>

#include <Eigen/Dense>

#include "svysamp/inclusion.hpp"
#include "svysamp/population.hpp"

namespace svysamp {

/// A point estimate of the population total together with the per-unit
/// contributions count_k * y_k / pi_k of the selected units.
struct EstimateResult {
    double estimate = 0.0;
    std::vector<int> units;
    std::vector<double> weights;
};

/// Estimated total sum_k (y_k / pi_k) I_k. Design-unbiased for total(pop).
EstimateResult ht_estimate(const Population& pop, const ProbabilityVector& pv,
                           const SampleCounts& counts);

/// Estimate only, no weight breakdown; the Monte Carlo hot path.
double ht_total(const Population& pop, const ProbabilityVector& pv,
                const SampleCounts& counts);

/// Variance of the estimated total for a without-replacement design with the
/// given exact second-order inclusion probabilities. Throws
/// RequiresExactInclusion for Monte Carlo matrices.
double var_ht_exact(const ProbabilityVector& pv, const InclusionMatrix& pkl,
                    const Eigen::VectorXd& y);

/// Variance of the estimated total under Poisson sampling:
/// sum_k (y_k/pi_k)^2 pi_k (1 - pi_k).
double poisson_variance(const ProbabilityVector& pv, const Eigen::VectorXd& y);

/// Variance of the estimated total under multinomial sampling:
/// sum_k pi_k (y_k/pi_k - t_y/n)^2. Requires integral n.
double multinomial_variance(const ProbabilityVector& pv, const Eigen::VectorXd& y);

/// Covariance-based variance ceiling
/// N^2 (1/(N min pi) + max_{k!=l} |pi_kl - pi_k pi_l| / (min pi)^2) * mean(y^2).
double bound_prop0(const ProbabilityVector& pv, const InclusionMatrix& pkl,
                   const Eigen::VectorXd& y);

/// Variance ceiling N^2 (1/(N min pi) + a/n) * mean(y^2) for designs whose
/// pairwise probabilities satisfy pi_kl <= (1 + a/n) pi_k pi_l. Requires
/// non-negative y.
double bound_h4b(const ProbabilityVector& pv, const Eigen::VectorXd& y, double a);

/// Multinomial-benchmark variance ceiling sum_k pi_k (y_k/pi_k)^2, the
/// sharper (inner) expression of the chain; see bound_h4c_outer for the
/// coarser closed form.
double bound_h4c(const ProbabilityVector& pv, const Eigen::VectorXd& y);

/// The coarser outer expression (N / min pi) * mean(y^2), reported alongside
/// bound_h4c for comparison.
double bound_h4c_outer(const ProbabilityVector& pv, const Eigen::VectorXd& y);

/// Variance ceiling for a martingale sampling run:
/// (max |y| / min pi)^2 * C^2 * E(T).
double bound_martingale(const ProbabilityVector& pv, const Eigen::VectorXd& y,
                        int max_affected, double expected_steps);

} // namespace svysamp
