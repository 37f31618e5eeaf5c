#include "svysamp/estimators.hpp"

#include <cmath>

#include "svysamp/accum.hpp"
#include "svysamp/errors.hpp"

namespace svysamp {

namespace {

void check_lengths(const ProbabilityVector& pv, const Eigen::VectorXd& y) {
    if (pv.size() != y.size()) {
        throw LengthMismatch("probability vector has " + std::to_string(pv.size()) +
                             " entries but y has " + std::to_string(y.size()));
    }
}

void check_exact(const InclusionMatrix& pkl) {
    if (!pkl.exact()) {
        throw RequiresExactInclusion(
            "operation requires exact second-order probabilities, got a Monte "
            "Carlo estimate with R = " + std::to_string(pkl.replicates));
    }
}

} // namespace

EstimateResult ht_estimate(const Population& pop, const ProbabilityVector& pv,
                           const SampleCounts& counts) {
    validate_inputs(pop, pv);
    if (counts.size() != pop.size()) {
        throw LengthMismatch("sample counts do not match the population size");
    }
    EstimateResult result;
    NeumaierSum acc;
    for (Eigen::Index k = 0; k < pop.size(); ++k) {
        if (counts.counts[k] == 0) continue;
        const double w = counts.counts[k] * pop.y[k] / pv.pi[k];
        result.units.push_back(static_cast<int>(k));
        result.weights.push_back(w);
        acc.add(w);
    }
    result.estimate = acc.value();
    return result;
}

double ht_total(const Population& pop, const ProbabilityVector& pv,
                const SampleCounts& counts) {
    NeumaierSum acc;
    for (Eigen::Index k = 0; k < pop.size(); ++k) {
        if (counts.counts[k] == 0) continue;
        acc.add(counts.counts[k] * pop.y[k] / pv.pi[k]);
    }
    return acc.value();
}

double var_ht_exact(const ProbabilityVector& pv, const InclusionMatrix& pkl,
                    const Eigen::VectorXd& y) {
    check_lengths(pv, y);
    check_exact(pkl);
    if (pkl.size() != pv.size()) {
        throw LengthMismatch("inclusion matrix does not match the probability vector");
    }
    const Eigen::Index N = pv.size();
    NeumaierSum acc;
    for (Eigen::Index k = 0; k < N; ++k) {
        const double check = y[k] / pv.pi[k];
        acc.add(check * check * pv.pi[k] * (1.0 - pv.pi[k]));
    }
    for (Eigen::Index k = 0; k < N; ++k) {
        for (Eigen::Index l = 0; l < N; ++l) {
            if (k == l) continue;
            acc.add((y[k] / pv.pi[k]) * (y[l] / pv.pi[l]) *
                    (pkl.second_order(k, l) - pv.pi[k] * pv.pi[l]));
        }
    }
    return acc.value();
}

double poisson_variance(const ProbabilityVector& pv, const Eigen::VectorXd& y) {
    check_lengths(pv, y);
    NeumaierSum acc;
    for (Eigen::Index k = 0; k < pv.size(); ++k) {
        const double check = y[k] / pv.pi[k];
        acc.add(check * check * pv.pi[k] * (1.0 - pv.pi[k]));
    }
    return acc.value();
}

double multinomial_variance(const ProbabilityVector& pv, const Eigen::VectorXd& y) {
    check_lengths(pv, y);
    const double n = static_cast<double>(integral_sample_size(pv.expected_size()));
    NeumaierSum total_y;
    for (Eigen::Index k = 0; k < y.size(); ++k) {
        total_y.add(y[k]);
    }
    const double mean_draw = total_y.value() / n;
    NeumaierSum acc;
    for (Eigen::Index k = 0; k < pv.size(); ++k) {
        const double dev = y[k] / pv.pi[k] - mean_draw;
        acc.add(pv.pi[k] * dev * dev);
    }
    return acc.value();
}

double bound_prop0(const ProbabilityVector& pv, const InclusionMatrix& pkl,
                   const Eigen::VectorXd& y) {
    check_lengths(pv, y);
    check_exact(pkl);
    const Eigen::Index N = pv.size();
    const double min_pi = pv.pi.minCoeff();
    double max_dev = 0.0;
    for (Eigen::Index k = 0; k < N; ++k) {
        for (Eigen::Index l = k + 1; l < N; ++l) {
            max_dev = std::max(max_dev,
                               std::abs(pkl.second_order(k, l) - pv.pi[k] * pv.pi[l]));
        }
    }
    NeumaierSum y2;
    for (Eigen::Index k = 0; k < N; ++k) {
        y2.add(y[k] * y[k]);
    }
    const double nn = static_cast<double>(N);
    return nn * nn * (1.0 / (nn * min_pi) + max_dev / (min_pi * min_pi)) *
           (y2.value() / nn);
}

double bound_h4b(const ProbabilityVector& pv, const Eigen::VectorXd& y, double a) {
    check_lengths(pv, y);
    if (a < 0.0) {
        throw InvalidSize("pairwise excess constant a must be non-negative");
    }
    NeumaierSum y2;
    for (Eigen::Index k = 0; k < y.size(); ++k) {
        if (y[k] < 0.0) {
            throw NegativeY("bound requires non-negative y, y[" +
                            std::to_string(k + 1) + "] = " + std::to_string(y[k]));
        }
        y2.add(y[k] * y[k]);
    }
    const double nn = static_cast<double>(pv.size());
    const double n = pv.expected_size();
    const double min_pi = pv.pi.minCoeff();
    return nn * nn * (1.0 / (nn * min_pi) + a / n) * (y2.value() / nn);
}

double bound_h4c(const ProbabilityVector& pv, const Eigen::VectorXd& y) {
    check_lengths(pv, y);
    NeumaierSum acc;
    for (Eigen::Index k = 0; k < pv.size(); ++k) {
        acc.add(y[k] * y[k] / pv.pi[k]);
    }
    return acc.value();
}

double bound_h4c_outer(const ProbabilityVector& pv, const Eigen::VectorXd& y) {
    check_lengths(pv, y);
    NeumaierSum y2;
    for (Eigen::Index k = 0; k < y.size(); ++k) {
        y2.add(y[k] * y[k]);
    }
    const double nn = static_cast<double>(pv.size());
    return nn / pv.pi.minCoeff() * (y2.value() / nn);
}

double bound_martingale(const ProbabilityVector& pv, const Eigen::VectorXd& y,
                        int max_affected, double expected_steps) {
    check_lengths(pv, y);
    if (max_affected < 1) {
        throw InvalidSize("max affected units must be at least 1");
    }
    if (expected_steps < 0.0) {
        throw InvalidSize("expected step count must be non-negative");
    }
    const double ratio = y.cwiseAbs().maxCoeff() / pv.pi.minCoeff();
    const double c = static_cast<double>(max_affected);
    return ratio * ratio * c * c * expected_steps;
}

} // namespace svysamp
