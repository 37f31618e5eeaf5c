#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "svysamp/errors.hpp"

namespace svysamp {

/// A finite population: unit labels, the variable of interest y and an
/// optional N x q matrix of auxiliary variables. Immutable after
/// construction and safe to share across concurrent workers.
struct Population {
    std::vector<std::string> ids;
    Eigen::VectorXd y;
    Eigen::MatrixXd x; // N x q, q may be 0

    Eigen::Index size() const { return y.size(); }
    Eigen::Index aux_count() const { return x.rows() == 0 ? 0 : x.cols(); }
};

/// First-order inclusion (or expected-count) probabilities, each in (0, 1].
struct ProbabilityVector {
    Eigen::VectorXd pi;

    Eigen::Index size() const { return pi.size(); }
    /// n = sum of probabilities, the average sample size.
    double expected_size() const { return pi.sum(); }
};

/// Per-unit selection counts. Without-replacement designs produce 0/1
/// indicators; multinomial sampling may select a unit several times.
struct SampleCounts {
    Eigen::VectorXi counts;

    Eigen::Index size() const { return counts.size(); }
    long long total() const { return counts.cast<long long>().sum(); }

    std::vector<int> selected_units() const {
        std::vector<int> units;
        for (Eigen::Index k = 0; k < counts.size(); ++k) {
            if (counts[k] > 0) units.push_back(static_cast<int>(k));
        }
        return units;
    }
};

/// Population with ids "1".."N" and no auxiliaries.
Population make_population(Eigen::VectorXd y);

/// Population with auxiliaries; x must have y.size() rows.
Population make_population(Eigen::VectorXd y, Eigen::MatrixXd x);

void validate_population(const Population& pop);
void validate_probabilities(const ProbabilityVector& pv);

/// Checks that pop and pv describe the same units and that every pi_k lies
/// in (0, 1]. Idempotent; throws LengthMismatch or ProbabilityOutOfRange.
void validate_inputs(const Population& pop, const ProbabilityVector& pv);

/// Population total of y (compensated summation).
double total(const Population& pop);

/// Rounds n to the nearest integer, rejecting when it is further than tol
/// from integral.
long long integral_sample_size(double n, double tol = 1e-9);

/// Inclusion probabilities proportional to the given positive sizes, scaled
/// to sum to n; values pushed past 1 are capped and the remainder rescaled
/// over the uncapped units.
Eigen::VectorXd probabilities_from_sizes(const Eigen::VectorXd& sizes, double n);

} // namespace svysamp
