#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "svysamp/designs.hpp"
#include "svysamp/inclusion.hpp"
#include "svysamp/oracle.hpp"
#include "svysamp/population.hpp"
#include "svysamp/random.hpp"

namespace svysamp {

enum class Condition { h1, h2, h3, h3b, h4, h4b, h4c, syg, martingale, innovation };
enum class Verdict { holds, fails, holds_within_mc_error };

const char* condition_name(Condition condition);
const char* verdict_name(Verdict verdict);
std::optional<Condition> parse_condition(std::string_view name);

/// Outcome of one condition check: a verdict, the condition-specific
/// statistics, and — when the check fails — the offending unit or pair.
struct ConditionReport {
    Condition condition;
    Verdict verdict = Verdict::holds;
    std::map<std::string, double> statistics;
    std::optional<std::pair<int, int>> witness_pair;
    std::optional<int> witness_unit;
};

/// Thresholds the asymptotic conditions are certified against at finite
/// sizes. The limsup statements themselves cannot be decided from finitely
/// many populations; the checkers report finite-size statistics and compare
/// them to these configured ceilings.
struct VerifyLimits {
    double lambda1_floor = 0.01;         // H2: min_k pi_k >= lambda1
    double second_moment_ceiling = 100.; // H3: mean(y^2) <= C1
    double y_abs_ceiling = 100.;         // H3b: max |y_k| <= C1
    double h1_deviation_tol = 0.05;      // H1: |n_t/N_t - f| <= tol
    double h4_ceiling = 10.0;            // H4: n max |pi_kl - pi_k pi_l| <= ceiling
};

/// Generator for a nested sequence of populations U_t of geometrically
/// growing sizes. y_k = 0.5 + 0.4 sin(k) is bounded and deterministic, so
/// prefixes are shared across t (the nesting requirement); pi is either
/// proportional to the cyclic sizes 1 + (k mod 10)/10 scaled to sum n_t, or
/// uniform n_t / N_t.
struct SequenceSpec {
    std::size_t base_size = 100;
    int points = 6;
    double growth = 2.0;
    double fraction = 0.5; // n_t = round(N_t * fraction)
    enum class PiPattern { proportional, uniform };
    PiPattern pi_pattern = PiPattern::proportional;
};

struct SequencePoint {
    Population pop;
    ProbabilityVector pv;
};

/// Realizes the t-th population of the sequence (t = 0-based).
SequencePoint sequence_point(const SequenceSpec& spec, int t);

/// Checks H1 (sampling fraction converges inside (0,1)), H2 (probabilities
/// bounded away from zero), H3 (bounded second moment of y) and H3b
/// (bounded y) across the sequence. Requires at least 3 points.
std::vector<ConditionReport> check_h1_h3(const SequenceSpec& spec,
                                         const VerifyLimits& limits = {});

/// H4 statistic n * max_{k != l} |pi_kl - pi_k pi_l| against the configured
/// ceiling; Monte Carlo matrices get a 3-standard-error allowance. Only a
/// finite-size statement — no asymptotic verdict is implied.
ConditionReport check_h4(const InclusionMatrix& inc, const ProbabilityVector& pv,
                         const VerifyLimits& limits = {});

/// Estimates the smallest a >= 0 with pi_kl <= (1 + a/n) pi_k pi_l for all
/// pairs of the given vector. Exact matrices always certify some finite a.
ConditionReport check_h4b(const InclusionMatrix& inc, const ProbabilityVector& pv);

/// Sen-Yates-Grundy conditions pi_kl <= pi_k pi_l for every pair, i.e. the
/// a = 0 case: holds exactly, fails with a witness pair, or holds within
/// Monte Carlo error when every pair satisfies pi_kl <= pi_k pi_l + 3 SE.
ConditionReport check_syg(const InclusionMatrix& inc, const ProbabilityVector& pv);

/// Compares the Monte Carlo variance of the estimated total under the design
/// against the multinomial benchmark variance with the same parameter.
/// Requires integral n and R >= 1e4.
ConditionReport check_h4c(Design design, const Population& pop,
                          const ProbabilityVector& pv, std::uint64_t replicates,
                          const RandomStream& rng);

/// Structural diagnostics of one martingale trace: exact per-step zero-mean
/// algebra, branch consistency, C <= q+1, step-count bounds and terminal
/// integrality. q is the number of balancing constraints (1 for pivotal).
ConditionReport check_martingale(const MartingaleTrace& trace,
                                 const ProbabilityVector& pv, int q);

/// Streaming aggregate of check_martingale over many replicate traces, plus
/// the Monte Carlo unbiasedness check of the terminal indicators.
class MartingaleStats {
public:
    MartingaleStats(ProbabilityVector pv, int q);

    void add(const MartingaleTrace& trace);
    ConditionReport report() const;
    double mean_steps() const;
    int max_affected() const { return max_affected_; }

private:
    ProbabilityVector pv_;
    int q_;
    std::uint64_t runs_ = 0;
    std::uint64_t structural_failures_ = 0;
    std::uint64_t sum_steps_ = 0;
    std::uint64_t min_steps_ = 0;
    std::uint64_t max_steps_ = 0;
    int max_affected_ = 0;
    double max_zero_mean_dev_ = 0.0;
    double max_terminal_residual_ = 0.0;
    std::vector<std::uint64_t> selections_;
};

/// Streaming check of the innovation decomposition
/// V(I - pi) = E[sum_i delta(i) delta(i)^T]: accumulates the per-replicate
/// entrywise difference between (I-pi)(I-pi)^T and sum_i delta delta^T and
/// tests its mean against 3 standard errors.
class InnovationCheck {
public:
    explicit InnovationCheck(ProbabilityVector pv);

    void add(const MartingaleTrace& trace);
    ConditionReport report() const;

private:
    ProbabilityVector pv_;
    std::uint64_t runs_ = 0;
    Eigen::MatrixXd diff_sum_;
    Eigen::MatrixXd diff_sumsq_;
    Eigen::MatrixXd lhs_sum_;
    Eigen::MatrixXd rhs_sum_;
};

/// Convenience wrapper over InnovationCheck. Requires at least 1e4 traces.
ConditionReport check_innovation_decomposition(std::span<const MartingaleTrace> traces,
                                               const ProbabilityVector& pv);

/// Mean-square-consistency rate experiment: per sequence point the MSE of
/// the scaled estimator N^-1 (t_hat - t_y), and the least-squares slope of
/// log MSE against log n.
struct RateReport {
    struct Point {
        double population_size;
        double sample_size;
        double mse;
        bool degenerate; // mse = 0, excluded from the fit
    };
    std::vector<Point> points;
    double slope = 0.0;
    double intercept = 0.0;
    double slope_se = 0.0;
};

/// Runs the rate experiment. replicates = 0 selects the closed-form mode
/// (Poisson only, no Monte Carlo noise); otherwise each point runs
/// mc_moments with the given replicate count. The cube design balances on
/// the pi column itself (the fixed-size constraint). Requires >= 4 points
/// whose sample sizes span at least a factor of 10.
RateReport rate_experiment(Design design, const SequenceSpec& spec,
                           std::uint64_t replicates, const RandomStream& rng);

} // namespace svysamp
