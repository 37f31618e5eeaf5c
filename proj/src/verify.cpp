#include "svysamp/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "svysamp/accum.hpp"
#include "svysamp/errors.hpp"
#include "svysamp/estimators.hpp"

namespace svysamp {

const char* condition_name(Condition condition) {
    switch (condition) {
    case Condition::h1: return "H1";
    case Condition::h2: return "H2";
    case Condition::h3: return "H3";
    case Condition::h3b: return "H3b";
    case Condition::h4: return "H4";
    case Condition::h4b: return "H4b";
    case Condition::h4c: return "H4c";
    case Condition::syg: return "SYG";
    case Condition::martingale: return "martingale";
    case Condition::innovation: return "innovation";
    }
    return "unknown";
}

const char* verdict_name(Verdict verdict) {
    switch (verdict) {
    case Verdict::holds: return "holds";
    case Verdict::fails: return "fails";
    case Verdict::holds_within_mc_error: return "holds-within-mc-error";
    }
    return "unknown";
}

std::optional<Condition> parse_condition(std::string_view name) {
    if (name == "h1" || name == "H1") return Condition::h1;
    if (name == "h2" || name == "H2") return Condition::h2;
    if (name == "h3" || name == "H3") return Condition::h3;
    if (name == "h3b" || name == "H3b") return Condition::h3b;
    if (name == "h4" || name == "H4") return Condition::h4;
    if (name == "h4b" || name == "H4b") return Condition::h4b;
    if (name == "h4c" || name == "H4c") return Condition::h4c;
    if (name == "syg" || name == "SYG") return Condition::syg;
    if (name == "martingale") return Condition::martingale;
    if (name == "innovation") return Condition::innovation;
    return std::nullopt;
}

SequencePoint sequence_point(const SequenceSpec& spec, int t) {
    if (t < 0 || t >= spec.points) {
        throw InvalidSize("sequence index out of range");
    }
    const double scale = std::pow(spec.growth, t);
    const auto size = static_cast<Eigen::Index>(
        std::llround(static_cast<double>(spec.base_size) * scale));
    if (size < 1) {
        throw InvalidSize("sequence population size must be positive");
    }
    const double target = std::round(static_cast<double>(size) * spec.fraction);
    if (target < 1.0 || target > static_cast<double>(size)) {
        throw InvalidSize("sequence sample size outside [1, N]");
    }

    Eigen::VectorXd y(size);
    for (Eigen::Index k = 0; k < size; ++k) {
        y[k] = 0.5 + 0.4 * std::sin(static_cast<double>(k + 1));
    }

    SequencePoint point;
    point.pop = make_population(std::move(y));
    if (spec.pi_pattern == SequenceSpec::PiPattern::uniform) {
        point.pv.pi = Eigen::VectorXd::Constant(size, target / static_cast<double>(size));
    } else {
        Eigen::VectorXd sizes(size);
        for (Eigen::Index k = 0; k < size; ++k) {
            sizes[k] = 1.0 + static_cast<double>((k + 1) % 10) / 10.0;
        }
        point.pv.pi = probabilities_from_sizes(sizes, target);
    }
    return point;
}

std::vector<ConditionReport> check_h1_h3(const SequenceSpec& spec,
                                         const VerifyLimits& limits) {
    if (spec.points < 3) {
        throw EmptySequence("sequence checks need at least 3 points, got " +
                            std::to_string(spec.points));
    }

    std::vector<double> fractions;
    double min_pi = std::numeric_limits<double>::infinity();
    int min_pi_unit = 0;
    double max_second_moment = 0.0;
    double max_abs_y = 0.0;
    for (int t = 0; t < spec.points; ++t) {
        const SequencePoint point = sequence_point(spec, t);
        const double n = point.pv.expected_size();
        fractions.push_back(n / static_cast<double>(point.pop.size()));
        for (Eigen::Index k = 0; k < point.pv.size(); ++k) {
            if (point.pv.pi[k] < min_pi) {
                min_pi = point.pv.pi[k];
                min_pi_unit = static_cast<int>(k);
            }
        }
        NeumaierSum y2;
        for (Eigen::Index k = 0; k < point.pop.size(); ++k) {
            y2.add(point.pop.y[k] * point.pop.y[k]);
            max_abs_y = std::max(max_abs_y, std::abs(point.pop.y[k]));
        }
        max_second_moment =
            std::max(max_second_moment, y2.value() / static_cast<double>(point.pop.size()));
    }

    const double f = fractions.back();
    double max_dev = 0.0;
    for (double ft : fractions) {
        max_dev = std::max(max_dev, std::abs(ft - f));
    }

    std::vector<ConditionReport> reports;
    {
        ConditionReport r;
        r.condition = Condition::h1;
        r.statistics["f"] = f;
        r.statistics["max_deviation"] = max_dev;
        r.verdict = (f > 0.0 && f < 1.0 && max_dev <= limits.h1_deviation_tol)
                        ? Verdict::holds
                        : Verdict::fails;
        reports.push_back(std::move(r));
    }
    {
        ConditionReport r;
        r.condition = Condition::h2;
        r.statistics["min_pi"] = min_pi;
        r.statistics["lambda1_floor"] = limits.lambda1_floor;
        if (min_pi >= limits.lambda1_floor) {
            r.verdict = Verdict::holds;
        } else {
            r.verdict = Verdict::fails;
            r.witness_unit = min_pi_unit;
        }
        reports.push_back(std::move(r));
    }
    {
        ConditionReport r;
        r.condition = Condition::h3;
        r.statistics["max_second_moment"] = max_second_moment;
        r.statistics["ceiling"] = limits.second_moment_ceiling;
        r.verdict = max_second_moment <= limits.second_moment_ceiling ? Verdict::holds
                                                                      : Verdict::fails;
        reports.push_back(std::move(r));
    }
    {
        ConditionReport r;
        r.condition = Condition::h3b;
        r.statistics["max_abs_y"] = max_abs_y;
        r.statistics["ceiling"] = limits.y_abs_ceiling;
        r.verdict = max_abs_y <= limits.y_abs_ceiling ? Verdict::holds : Verdict::fails;
        reports.push_back(std::move(r));
    }
    return reports;
}

namespace {

void check_inclusion_shape(const InclusionMatrix& inc, const ProbabilityVector& pv) {
    if (inc.size() != pv.size()) {
        throw LengthMismatch("inclusion matrix does not match the probability vector");
    }
}

} // namespace

ConditionReport check_h4(const InclusionMatrix& inc, const ProbabilityVector& pv,
                         const VerifyLimits& limits) {
    check_inclusion_shape(inc, pv);
    const Eigen::Index N = pv.size();
    const double n = pv.expected_size();

    double max_dev = 0.0;
    double se_at_max = 0.0;
    std::pair<int, int> argmax{0, 0};
    for (Eigen::Index k = 0; k < N; ++k) {
        for (Eigen::Index l = k + 1; l < N; ++l) {
            const double dev = std::abs(inc.second_order(k, l) - pv.pi[k] * pv.pi[l]);
            if (dev > max_dev) {
                max_dev = dev;
                se_at_max = inc.exact() ? 0.0 : inc.second_order_se(k, l);
                argmax = {static_cast<int>(k), static_cast<int>(l)};
            }
        }
    }

    ConditionReport r;
    r.condition = Condition::h4;
    const double statistic = n * max_dev;
    const double band = 3.0 * n * se_at_max;
    r.statistics["statistic"] = statistic;
    r.statistics["band_3se"] = band;
    r.statistics["ceiling"] = limits.h4_ceiling;
    r.statistics["n"] = n;
    if (statistic <= limits.h4_ceiling + band) {
        r.verdict = inc.exact() ? Verdict::holds : Verdict::holds_within_mc_error;
    } else {
        r.verdict = Verdict::fails;
        r.witness_pair = argmax;
    }
    return r;
}

namespace {

struct PairScan {
    double a_estimate = 0.0;       // n * max(pi_kl / (pi_k pi_l) - 1), clamped at 0
    double worst_excess = -std::numeric_limits<double>::infinity();
    double worst_excess_se = 0.0;  // SE at the pair with the largest excess
    std::pair<int, int> worst_pair{0, 0};
    bool any_exceeds_band = false; // some pi_kl > pi_k pi_l + 3 SE
};

PairScan scan_pairs(const InclusionMatrix& inc, const ProbabilityVector& pv) {
    const Eigen::Index N = pv.size();
    const double n = pv.expected_size();
    PairScan scan;
    if (N == 1) {
        scan.worst_excess = 0.0;
        return scan;
    }
    for (Eigen::Index k = 0; k < N; ++k) {
        for (Eigen::Index l = k + 1; l < N; ++l) {
            const double expected = pv.pi[k] * pv.pi[l];
            const double excess = inc.second_order(k, l) - expected;
            const double se = inc.exact() ? 0.0 : inc.second_order_se(k, l);
            if (excess > scan.worst_excess) {
                scan.worst_excess = excess;
                scan.worst_excess_se = se;
                scan.worst_pair = {static_cast<int>(k), static_cast<int>(l)};
            }
            if (excess > 3.0 * se) {
                scan.any_exceeds_band = true;
            }
            scan.a_estimate = std::max(scan.a_estimate, n * excess / expected);
        }
    }
    return scan;
}

} // namespace

ConditionReport check_h4b(const InclusionMatrix& inc, const ProbabilityVector& pv) {
    check_inclusion_shape(inc, pv);
    const PairScan scan = scan_pairs(inc, pv);
    ConditionReport r;
    r.condition = Condition::h4b;
    r.statistics["a_estimate"] = scan.a_estimate;
    r.statistics["worst_excess"] = scan.worst_excess;
    r.statistics["worst_excess_3se"] = 3.0 * scan.worst_excess_se;
    r.statistics["n"] = pv.expected_size();
    // At a fixed size some finite a always exists; the statistic is the
    // certified value for this vector.
    r.verdict = inc.exact() ? Verdict::holds : Verdict::holds_within_mc_error;
    return r;
}

ConditionReport check_syg(const InclusionMatrix& inc, const ProbabilityVector& pv) {
    check_inclusion_shape(inc, pv);
    const PairScan scan = scan_pairs(inc, pv);
    ConditionReport r;
    r.condition = Condition::syg;
    r.statistics["a_estimate"] = scan.a_estimate;
    r.statistics["worst_excess"] = scan.worst_excess;
    r.statistics["worst_excess_3se"] = 3.0 * scan.worst_excess_se;
    if (inc.exact()) {
        if (scan.worst_excess <= 0.0) {
            r.verdict = Verdict::holds;
        } else {
            r.verdict = Verdict::fails;
            r.witness_pair = scan.worst_pair;
        }
    } else {
        if (!scan.any_exceeds_band) {
            r.verdict = Verdict::holds_within_mc_error;
        } else {
            r.verdict = Verdict::fails;
            r.witness_pair = scan.worst_pair;
        }
    }
    return r;
}

ConditionReport check_h4c(Design design, const Population& pop,
                          const ProbabilityVector& pv, std::uint64_t replicates,
                          const RandomStream& rng) {
    validate_inputs(pop, pv);
    if (replicates < 10000) {
        throw InvalidSize("H4c needs R >= 1e4 replicates");
    }
    const double benchmark = multinomial_variance(pv, pop.y); // throws unless n integral
    const MomentReport mc = mc_moments(design, pop, pv, replicates, rng);

    ConditionReport r;
    r.condition = Condition::h4c;
    r.statistics["design_variance"] = mc.variance_estimate;
    r.statistics["benchmark_variance"] = benchmark;
    r.statistics["variance_3se"] = 3.0 * mc.se_variance;
    r.statistics["replicates"] = static_cast<double>(replicates);
    r.verdict = mc.variance_estimate <= benchmark + 3.0 * mc.se_variance
                    ? Verdict::holds_within_mc_error
                    : Verdict::fails;
    return r;
}

namespace {

struct TraceDiagnostics {
    std::uint64_t steps;
    int max_affected;
    double max_zero_mean_dev;
    double terminal_residual;
    std::uint64_t fractional_start; // units with pi(0) strictly inside (0,1)
    std::uint64_t lower_bound;
    bool bounds_ok;
    SampleCounts counts;
};

TraceDiagnostics inspect_trace(const MartingaleTrace& trace,
                               const ProbabilityVector& pv, int q) {
    if (trace.initial_pi.size() != pv.size()) {
        throw MalformedTrace("trace does not match the probability vector");
    }
    for (Eigen::Index k = 0; k < pv.size(); ++k) {
        if (trace.initial_pi[k] != pv.pi[k]) {
            throw MalformedTrace("trace starting point differs from the input pi");
        }
    }
    if (q < 1) {
        throw InvalidSize("martingale checks need q >= 1");
    }

    TraceDiagnostics d{};
    d.steps = trace.steps.size();
    d.max_affected = trace.max_affected();
    d.max_zero_mean_dev = 0.0;

    for (std::size_t i = 0; i < trace.steps.size(); ++i) {
        const StepRecord& s = trace.steps[i];
        if (!(s.max_up > 0.0) || !(s.max_down > 0.0)) {
            throw MalformedTrace("step " + std::to_string(i) + " has non-positive bounds");
        }
        const double expected_prob = s.moved_up
                                         ? s.max_down / (s.max_up + s.max_down)
                                         : s.max_up / (s.max_up + s.max_down);
        if (s.branch_prob != expected_prob) {
            throw MalformedTrace("step " + std::to_string(i) +
                                 " branch probability is inconsistent");
        }
        // exact zero-mean algebra of the two branches
        const double denom = s.max_up + s.max_down;
        const double drift =
            s.max_up * (s.max_down / denom) - s.max_down * (s.max_up / denom);
        d.max_zero_mean_dev = std::max(d.max_zero_mean_dev, std::abs(drift));
        if (!std::is_sorted(s.units.begin(), s.units.end())) {
            throw MalformedTrace("step " + std::to_string(i) + " units not ascending");
        }
    }

    // replay_trace re-applies the branches and cross-checks every recorded
    // delta, throwing MalformedTrace on any inconsistency.
    d.counts = replay_trace(trace);

    // Terminal integrality of the recorded innovations: pi(0) + sum delta.
    Eigen::VectorXd terminal = trace.initial_pi;
    for (const StepRecord& s : trace.steps) {
        for (std::size_t j = 0; j < s.units.size(); ++j) {
            terminal[s.units[j]] += s.delta[static_cast<Eigen::Index>(j)];
        }
    }
    double residual = 0.0;
    for (Eigen::Index k = 0; k < terminal.size(); ++k) {
        residual = std::max(residual, std::min(std::abs(terminal[k]),
                                               std::abs(1.0 - terminal[k])));
    }
    d.terminal_residual = residual;

    std::uint64_t fractional = 0;
    for (Eigen::Index k = 0; k < pv.size(); ++k) {
        if (std::abs(pv.pi[k] - 1.0) > kSnapTol && std::abs(pv.pi[k]) > kSnapTol) {
            ++fractional;
        }
    }
    d.fractional_start = fractional;
    // Step-count bounds [N/(q+1)] <= T <= N, on the units that start
    // fractional (deterministic units are resolved without steps).
    d.lower_bound = fractional / static_cast<std::uint64_t>(q + 1);
    d.bounds_ok = d.steps >= d.lower_bound && d.steps <= fractional &&
                  d.max_affected <= q + 1 && d.terminal_residual <= kSnapTol;
    return d;
}

} // namespace

ConditionReport check_martingale(const MartingaleTrace& trace,
                                 const ProbabilityVector& pv, int q) {
    const TraceDiagnostics d = inspect_trace(trace, pv, q);
    ConditionReport r;
    r.condition = Condition::martingale;
    r.statistics["steps"] = static_cast<double>(d.steps);
    r.statistics["max_affected"] = static_cast<double>(d.max_affected);
    r.statistics["steps_lower_bound"] = static_cast<double>(d.lower_bound);
    r.statistics["steps_upper_bound"] = static_cast<double>(d.fractional_start);
    r.statistics["zero_mean_max_dev"] = d.max_zero_mean_dev;
    r.statistics["terminal_residual"] = d.terminal_residual;
    r.verdict = (d.bounds_ok && d.max_zero_mean_dev == 0.0) ? Verdict::holds
                                                            : Verdict::fails;
    return r;
}

MartingaleStats::MartingaleStats(ProbabilityVector pv, int q)
    : pv_(std::move(pv)), q_(q),
      selections_(static_cast<std::size_t>(pv_.size()), 0) {
    validate_probabilities(pv_);
    if (q < 1) {
        throw InvalidSize("martingale checks need q >= 1");
    }
}

void MartingaleStats::add(const MartingaleTrace& trace) {
    const TraceDiagnostics d = inspect_trace(trace, pv_, q_);
    if (!d.bounds_ok || d.max_zero_mean_dev != 0.0) {
        ++structural_failures_;
    }
    if (runs_ == 0) {
        min_steps_ = d.steps;
        max_steps_ = d.steps;
    } else {
        min_steps_ = std::min(min_steps_, d.steps);
        max_steps_ = std::max(max_steps_, d.steps);
    }
    sum_steps_ += d.steps;
    max_affected_ = std::max(max_affected_, d.max_affected);
    max_zero_mean_dev_ = std::max(max_zero_mean_dev_, d.max_zero_mean_dev);
    max_terminal_residual_ = std::max(max_terminal_residual_, d.terminal_residual);
    for (Eigen::Index k = 0; k < d.counts.size(); ++k) {
        selections_[static_cast<std::size_t>(k)] +=
            static_cast<std::uint64_t>(d.counts.counts[k]);
    }
    ++runs_;
}

double MartingaleStats::mean_steps() const {
    return runs_ == 0 ? 0.0 : static_cast<double>(sum_steps_) / static_cast<double>(runs_);
}

ConditionReport MartingaleStats::report() const {
    ConditionReport r;
    r.condition = Condition::martingale;
    r.statistics["runs"] = static_cast<double>(runs_);
    r.statistics["structural_failures"] = static_cast<double>(structural_failures_);
    r.statistics["mean_steps"] = mean_steps();
    r.statistics["min_steps"] = static_cast<double>(min_steps_);
    r.statistics["max_steps"] = static_cast<double>(max_steps_);
    r.statistics["max_affected"] = static_cast<double>(max_affected_);
    r.statistics["zero_mean_max_dev"] = max_zero_mean_dev_;
    r.statistics["terminal_residual_max"] = max_terminal_residual_;

    // Unbiased inclusion: MC mean of I_k against pi_k in binomial standard
    // errors (3.29 is the two-sided 0.1% normal quantile).
    double max_z = 0.0;
    int worst_unit = 0;
    if (runs_ > 0) {
        for (Eigen::Index k = 0; k < pv_.size(); ++k) {
            const double p = pv_.pi[k];
            const double mean =
                static_cast<double>(selections_[static_cast<std::size_t>(k)]) /
                static_cast<double>(runs_);
            const double se =
                std::sqrt(p * (1.0 - p) / static_cast<double>(runs_));
            const double dev = std::abs(mean - p);
            const double z = se > 0.0 ? dev / se : (dev > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
            if (z > max_z) {
                max_z = z;
                worst_unit = static_cast<int>(k);
            }
        }
    }
    r.statistics["inclusion_max_z"] = max_z;
    if (structural_failures_ == 0 && max_z <= 3.29) {
        r.verdict = Verdict::holds_within_mc_error;
    } else {
        r.verdict = Verdict::fails;
        if (max_z > 3.29) {
            r.witness_unit = worst_unit;
        }
    }
    return r;
}

InnovationCheck::InnovationCheck(ProbabilityVector pv) : pv_(std::move(pv)) {
    validate_probabilities(pv_);
    const Eigen::Index N = pv_.size();
    diff_sum_.setZero(N, N);
    diff_sumsq_.setZero(N, N);
    lhs_sum_.setZero(N, N);
    rhs_sum_.setZero(N, N);
}

void InnovationCheck::add(const MartingaleTrace& trace) {
    const Eigen::Index N = pv_.size();
    if (trace.initial_pi.size() != N) {
        throw MalformedTrace("trace does not match the probability vector");
    }

    // RHS of the decomposition: sum over steps of delta delta^T.
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(N, N);
    Eigen::VectorXd terminal = trace.initial_pi;
    for (const StepRecord& s : trace.steps) {
        for (std::size_t a = 0; a < s.units.size(); ++a) {
            const double da = s.delta[static_cast<Eigen::Index>(a)];
            terminal[s.units[a]] += da;
            for (std::size_t b = 0; b < s.units.size(); ++b) {
                rhs(s.units[a], s.units[b]) +=
                    da * s.delta[static_cast<Eigen::Index>(b)];
            }
        }
    }

    // LHS: (I - pi)(I - pi)^T with I the terminal indicators.
    Eigen::VectorXd centered(N);
    for (Eigen::Index k = 0; k < N; ++k) {
        const double indicator = std::round(terminal[k]);
        if (std::abs(terminal[k] - indicator) > kSnapTol) {
            throw MalformedTrace("trace does not terminate at an integral vector");
        }
        centered[k] = indicator - pv_.pi[k];
    }

    for (Eigen::Index k = 0; k < N; ++k) {
        for (Eigen::Index l = 0; l < N; ++l) {
            const double lhs = centered[k] * centered[l];
            const double diff = lhs - rhs(k, l);
            lhs_sum_(k, l) += lhs;
            rhs_sum_(k, l) += rhs(k, l);
            diff_sum_(k, l) += diff;
            diff_sumsq_(k, l) += diff * diff;
        }
    }
    ++runs_;
}

ConditionReport InnovationCheck::report() const {
    if (runs_ < 10000) {
        throw InvalidSize("innovation decomposition needs at least 1e4 traces, got " +
                          std::to_string(runs_));
    }
    const Eigen::Index N = pv_.size();
    const double r = static_cast<double>(runs_);

    double max_gap = 0.0;
    double max_z = 0.0;
    bool within_band = true;
    std::pair<int, int> worst{0, 0};
    for (Eigen::Index k = 0; k < N; ++k) {
        for (Eigen::Index l = 0; l < N; ++l) {
            const double mean_diff = diff_sum_(k, l) / r;
            const double mean_sq = diff_sumsq_(k, l) / r;
            const double se =
                std::sqrt(std::max(0.0, mean_sq - mean_diff * mean_diff) / r);
            const double gap = std::abs(mean_diff);
            if (gap > max_gap) {
                max_gap = gap;
            }
            const double z = se > 0.0
                                 ? gap / se
                                 : (gap > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
            if (z > max_z) {
                max_z = z;
                worst = {static_cast<int>(k), static_cast<int>(l)};
            }
            if (gap > 3.0 * se && gap > 0.0) {
                within_band = false;
            }
        }
    }

    ConditionReport report;
    report.condition = Condition::innovation;
    report.statistics["runs"] = r;
    report.statistics["max_gap"] = max_gap;
    report.statistics["max_z"] = max_z;
    if (within_band) {
        report.verdict = max_z == 0.0 ? Verdict::holds : Verdict::holds_within_mc_error;
    } else {
        report.verdict = Verdict::fails;
        report.witness_pair = worst;
    }
    return report;
}

ConditionReport check_innovation_decomposition(std::span<const MartingaleTrace> traces,
                                               const ProbabilityVector& pv) {
    InnovationCheck check(pv);
    for (const MartingaleTrace& trace : traces) {
        check.add(trace);
    }
    return check.report();
}

RateReport rate_experiment(Design design, const SequenceSpec& spec,
                           std::uint64_t replicates, const RandomStream& rng) {
    if (spec.points < 4) {
        throw InsufficientSpan("rate experiment needs at least 4 sequence points, got " +
                               std::to_string(spec.points));
    }
    if (replicates == 0 && design != Design::poisson) {
        throw UnsupportedDesign("closed-form rate mode is only available for poisson");
    }

    RateReport report;
    std::vector<double> log_n, log_mse;
    for (int t = 0; t < spec.points; ++t) {
        SequencePoint point = sequence_point(spec, t);
        if (design == Design::cube) {
            // Balance on the pi column: the fixed-size balancing constraint.
            point.pop.x = point.pv.pi;
        }
        const double n = point.pv.expected_size();
        const double N = static_cast<double>(point.pop.size());

        double mse;
        if (replicates == 0) {
            mse = poisson_variance(point.pv, point.pop.y) / (N * N);
        } else {
            const RandomStream point_rng(
                derive_seed(rng.seed(), 0x7261746570743000ULL + static_cast<std::uint64_t>(t)),
                rng.stream_id());
            mse = mc_moments(design, point.pop, point.pv, replicates, point_rng).mse /
                  (N * N);
        }
        const bool degenerate = !(mse > 0.0);
        report.points.push_back({N, n, mse, degenerate});
        if (!degenerate) {
            log_n.push_back(std::log(n));
            log_mse.push_back(std::log(mse));
        }
    }

    const double n_min = report.points.front().sample_size;
    const double n_max = report.points.back().sample_size;
    if (n_max < 10.0 * n_min) {
        throw InsufficientSpan("sample sizes must span at least one decade, got [" +
                               std::to_string(n_min) + ", " + std::to_string(n_max) + "]");
    }

    const std::size_t m = log_n.size();
    if (m < 2) {
        report.slope = std::numeric_limits<double>::quiet_NaN();
        report.intercept = std::numeric_limits<double>::quiet_NaN();
        report.slope_se = std::numeric_limits<double>::quiet_NaN();
        return report;
    }

    double x_mean = 0.0, y_mean = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        x_mean += log_n[i];
        y_mean += log_mse[i];
    }
    x_mean /= static_cast<double>(m);
    y_mean /= static_cast<double>(m);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sxx += (log_n[i] - x_mean) * (log_n[i] - x_mean);
        sxy += (log_n[i] - x_mean) * (log_mse[i] - y_mean);
    }
    report.slope = sxy / sxx;
    report.intercept = y_mean - report.slope * x_mean;
    if (m > 2) {
        double rss = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double fit = report.intercept + report.slope * log_n[i];
            rss += (log_mse[i] - fit) * (log_mse[i] - fit);
        }
        report.slope_se = std::sqrt(rss / static_cast<double>(m - 2) / sxx);
    } else {
        report.slope_se = std::numeric_limits<double>::quiet_NaN();
    }
    return report;
}

} // namespace svysamp
