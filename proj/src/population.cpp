#include "svysamp/population.hpp"

#include <cmath>
#include <unordered_set>

#include "svysamp/accum.hpp"

namespace svysamp {

Population make_population(Eigen::VectorXd y) {
    Population pop;
    pop.ids.reserve(static_cast<std::size_t>(y.size()));
    for (Eigen::Index k = 0; k < y.size(); ++k) {
        pop.ids.push_back(std::to_string(k + 1));
    }
    pop.y = std::move(y);
    pop.x = Eigen::MatrixXd(pop.y.size(), 0);
    validate_population(pop);
    return pop;
}

Population make_population(Eigen::VectorXd y, Eigen::MatrixXd x) {
    Population pop = make_population(std::move(y));
    pop.x = std::move(x);
    validate_population(pop);
    return pop;
}

void validate_population(const Population& pop) {
    const Eigen::Index n = pop.y.size();
    if (n < 1) {
        throw InvalidSize("population must contain at least one unit");
    }
    if (static_cast<Eigen::Index>(pop.ids.size()) != n) {
        throw LengthMismatch("population has " + std::to_string(n) + " y values but " +
                             std::to_string(pop.ids.size()) + " ids");
    }
    if (pop.x.size() != 0 && pop.x.rows() != n) {
        throw LengthMismatch("auxiliary matrix has " + std::to_string(pop.x.rows()) +
                             " rows for " + std::to_string(n) + " units");
    }
    std::unordered_set<std::string> seen;
    for (const auto& id : pop.ids) {
        if (!seen.insert(id).second) {
            throw InvalidSize("duplicate unit id '" + id + "'");
        }
    }
}

void validate_probabilities(const ProbabilityVector& pv) {
    if (pv.pi.size() < 1) {
        throw InvalidSize("probability vector is empty");
    }
    for (Eigen::Index k = 0; k < pv.pi.size(); ++k) {
        const double p = pv.pi[k];
        if (!(p > 0.0) || p > 1.0) {
            throw ProbabilityOutOfRange("pi[" + std::to_string(k + 1) + "] = " +
                                        std::to_string(p) + " outside (0, 1]");
        }
    }
}

void validate_inputs(const Population& pop, const ProbabilityVector& pv) {
    validate_population(pop);
    if (pop.size() != pv.size()) {
        throw LengthMismatch("population has " + std::to_string(pop.size()) +
                             " units but probability vector has " +
                             std::to_string(pv.size()) + " entries");
    }
    validate_probabilities(pv);
}

double total(const Population& pop) {
    NeumaierSum acc;
    for (Eigen::Index k = 0; k < pop.y.size(); ++k) {
        acc.add(pop.y[k]);
    }
    return acc.value();
}

long long integral_sample_size(double n, double tol) {
    const double rounded = std::round(n);
    if (std::abs(n - rounded) > tol) {
        throw NonIntegerSampleSize("expected integral sample size, got " + std::to_string(n));
    }
    return static_cast<long long>(rounded);
}

Eigen::VectorXd probabilities_from_sizes(const Eigen::VectorXd& sizes, double n) {
    const Eigen::Index N = sizes.size();
    if (N < 1) {
        throw InvalidSize("size vector is empty");
    }
    if (!(n > 0.0) || n > static_cast<double>(N)) {
        throw InvalidSize("target sample size " + std::to_string(n) +
                          " outside (0, N]");
    }
    for (Eigen::Index k = 0; k < N; ++k) {
        if (!(sizes[k] > 0.0)) {
            throw ProbabilityOutOfRange("size[" + std::to_string(k + 1) +
                                        "] must be positive");
        }
    }

    Eigen::VectorXd pi(N);
    std::vector<bool> capped(static_cast<std::size_t>(N), false);
    double remaining = n;
    bool changed = true;
    while (changed) {
        changed = false;
        double free_mass = 0.0;
        for (Eigen::Index k = 0; k < N; ++k) {
            if (!capped[static_cast<std::size_t>(k)]) free_mass += sizes[k];
        }
        const double pass_remaining = remaining;
        for (Eigen::Index k = 0; k < N; ++k) {
            if (capped[static_cast<std::size_t>(k)]) continue;
            const double p = pass_remaining * sizes[k] / free_mass;
            if (p >= 1.0) {
                pi[k] = 1.0;
                capped[static_cast<std::size_t>(k)] = true;
                remaining -= 1.0;
                changed = true;
            } else {
                pi[k] = p;
            }
        }
    }
    return pi;
}

} // namespace svysamp
