#include "svysamp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "svysamp/accum.hpp"
#include "svysamp/errors.hpp"
#include "svysamp/estimators.hpp"
#include "svysamp/parallel.hpp"

namespace svysamp {

const char* design_name(Design design) {
    switch (design) {
    case Design::poisson: return "poisson";
    case Design::multinomial: return "multinomial";
    case Design::srswor: return "srswor";
    case Design::pivotal: return "pivotal";
    case Design::cube: return "cube";
    }
    return "unknown";
}

std::optional<Design> parse_design(std::string_view name) {
    if (name == "poisson") return Design::poisson;
    if (name == "multinomial") return Design::multinomial;
    if (name == "srswor") return Design::srswor;
    if (name == "pivotal") return Design::pivotal;
    if (name == "cube") return Design::cube;
    return std::nullopt;
}

namespace {

// Uniform pi = n/N is what makes a probability vector an srswor parameter.
Eigen::Index srswor_size(const ProbabilityVector& pv) {
    const long long n = integral_sample_size(pv.expected_size());
    const double uniform = static_cast<double>(n) / static_cast<double>(pv.size());
    for (Eigen::Index k = 0; k < pv.size(); ++k) {
        if (std::abs(pv.pi[k] - uniform) > 1e-9) {
            throw InvalidSize("srswor requires uniform pi = n/N, pi[" +
                              std::to_string(k + 1) + "] deviates");
        }
    }
    return static_cast<Eigen::Index>(n);
}

std::vector<Outcome> enumerate_poisson(const Population& pop,
                                       const ProbabilityVector& pv) {
    const Eigen::Index N = pv.size();
    if (N > 20) {
        throw TooLarge("Poisson enumeration limited to N <= 20, got N = " +
                       std::to_string(N));
    }
    std::vector<Outcome> outcomes;
    outcomes.reserve(std::size_t{1} << N);
    Eigen::VectorXi counts(N);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << N); ++mask) {
        double prob = 1.0;
        for (Eigen::Index k = 0; k < N; ++k) {
            const bool in = (mask >> k) & 1;
            counts[k] = in ? 1 : 0;
            prob *= in ? pv.pi[k] : 1.0 - pv.pi[k];
        }
        outcomes.push_back({counts, prob,
                            ht_total(pop, pv, SampleCounts{counts})});
    }
    return outcomes;
}

std::vector<Outcome> enumerate_srswor(const Population& pop,
                                      const ProbabilityVector& pv) {
    const Eigen::Index N = pv.size();
    const Eigen::Index n = srswor_size(pv);
    double subsets = 1.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        subsets = subsets * static_cast<double>(N - j) / static_cast<double>(j + 1);
    }
    if (subsets > 1e6) {
        throw TooLarge("srswor enumeration limited to C(N,n) <= 1e6");
    }
    std::vector<Outcome> outcomes;
    const double prob = 1.0 / std::round(subsets);

    std::vector<Eigen::Index> pick(static_cast<std::size_t>(n));
    for (Eigen::Index j = 0; j < n; ++j) pick[static_cast<std::size_t>(j)] = j;
    while (true) {
        Eigen::VectorXi counts = Eigen::VectorXi::Zero(N);
        for (Eigen::Index j : pick) counts[j] = 1;
        outcomes.push_back({counts, prob, ht_total(pop, pv, SampleCounts{counts})});

        // next combination in lexicographic order
        Eigen::Index i = n - 1;
        while (i >= 0 && pick[static_cast<std::size_t>(i)] == N - n + i) --i;
        if (i < 0) break;
        ++pick[static_cast<std::size_t>(i)];
        for (Eigen::Index j = i + 1; j < n; ++j) {
            pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
        }
    }
    return outcomes;
}

std::vector<Outcome> enumerate_multinomial(const Population& pop,
                                           const ProbabilityVector& pv) {
    const Eigen::Index N = pv.size();
    const long long n = integral_sample_size(pv.expected_size());
    if (std::pow(static_cast<double>(N), static_cast<double>(n)) > 1e6) {
        throw TooLarge("multinomial enumeration limited to N^n <= 1e6 draw sequences");
    }

    // Aggregate the N^n ordered draw sequences by their count vector: each
    // composition has probability (n! / prod c_k!) prod (pi_k / n)^{c_k}.
    std::vector<double> log_factorial(static_cast<std::size_t>(n) + 1, 0.0);
    for (long long j = 2; j <= n; ++j) {
        log_factorial[static_cast<std::size_t>(j)] =
            log_factorial[static_cast<std::size_t>(j - 1)] + std::log(static_cast<double>(j));
    }

    std::vector<Outcome> outcomes;
    Eigen::VectorXi counts = Eigen::VectorXi::Zero(N);
    auto emit = [&]() {
        double log_prob = log_factorial[static_cast<std::size_t>(n)];
        for (Eigen::Index k = 0; k < N; ++k) {
            const int c = counts[k];
            if (c == 0) continue;
            log_prob -= log_factorial[static_cast<std::size_t>(c)];
            log_prob += c * std::log(pv.pi[k] / static_cast<double>(n));
        }
        outcomes.push_back({counts, std::exp(log_prob),
                            ht_total(pop, pv, SampleCounts{counts})});
    };
    // enumerate compositions of n over N cells
    auto recurse = [&](auto&& self, Eigen::Index cell, long long left) -> void {
        if (cell == N - 1) {
            counts[cell] = static_cast<int>(left);
            emit();
            return;
        }
        for (long long c = 0; c <= left; ++c) {
            counts[cell] = static_cast<int>(c);
            self(self, cell + 1, left - c);
        }
    };
    recurse(recurse, 0, n);
    return outcomes;
}

} // namespace

std::vector<Outcome> enumerate_distribution(Design design, const Population& pop,
                                            const ProbabilityVector& pv) {
    validate_inputs(pop, pv);
    switch (design) {
    case Design::poisson: return enumerate_poisson(pop, pv);
    case Design::srswor: return enumerate_srswor(pop, pv);
    case Design::multinomial: return enumerate_multinomial(pop, pv);
    case Design::pivotal:
    case Design::cube:
        throw UnsupportedDesign(std::string(design_name(design)) +
                                " has no closed-form outcome distribution; use mc_inclusion");
    }
    throw UnsupportedDesign("unknown design");
}

double enumeration_mean(std::span<const Outcome> outcomes) {
    NeumaierSum acc;
    for (const auto& o : outcomes) {
        acc.add(o.probability * o.estimate);
    }
    return acc.value();
}

double enumeration_variance(std::span<const Outcome> outcomes) {
    const double mean = enumeration_mean(outcomes);
    NeumaierSum acc;
    for (const auto& o : outcomes) {
        const double dev = o.estimate - mean;
        acc.add(o.probability * dev * dev);
    }
    return acc.value();
}

InclusionMatrix exact_inclusion(Design design, const ProbabilityVector& pv) {
    validate_probabilities(pv);
    const Eigen::Index N = pv.size();
    InclusionMatrix inc;
    inc.first_order = pv.pi;
    inc.second_order.resize(N, N);

    switch (design) {
    case Design::poisson:
        inc.second_order = pv.pi * pv.pi.transpose();
        inc.second_order.diagonal() = pv.pi;
        return inc;
    case Design::srswor: {
        const Eigen::Index n = srswor_size(pv);
        return exact_inclusion_srswor(N, n);
    }
    case Design::multinomial: {
        const double n = static_cast<double>(integral_sample_size(pv.expected_size()));
        inc.second_order = (1.0 - 1.0 / n) * (pv.pi * pv.pi.transpose());
        inc.second_order.diagonal() = pv.pi;
        inc.with_replacement = true;
        return inc;
    }
    case Design::pivotal:
    case Design::cube:
        throw UnsupportedDesign(std::string(design_name(design)) +
                                " has no closed-form inclusion matrix; use mc_inclusion");
    }
    throw UnsupportedDesign("unknown design");
}

InclusionMatrix exact_inclusion_srswor(Eigen::Index population_size,
                                       Eigen::Index sample_size) {
    if (population_size < 1 || sample_size < 1 || sample_size > population_size) {
        throw InvalidSize("require 1 <= n <= N");
    }
    const double N = static_cast<double>(population_size);
    const double n = static_cast<double>(sample_size);
    InclusionMatrix inc;
    inc.first_order = Eigen::VectorXd::Constant(population_size, n / N);
    const double joint = population_size == 1 ? 1.0 : n * (n - 1.0) / (N * (N - 1.0));
    inc.second_order = Eigen::MatrixXd::Constant(population_size, population_size, joint);
    inc.second_order.diagonal() = inc.first_order;
    return inc;
}

SampleCounts draw_sample(Design design, const Population& pop,
                         const ProbabilityVector& pv, RandomStream& rng) {
    switch (design) {
    case Design::poisson: return poisson_sample(pv, rng);
    case Design::multinomial: return multinomial_sample(pv, rng);
    case Design::srswor: return srswor_sample(pv.size(), srswor_size(pv), rng);
    case Design::pivotal: return pivotal_sample_counts(pv, rng);
    case Design::cube: return fast_cube_sample_counts(pop, pv, rng);
    }
    throw UnsupportedDesign("unknown design");
}

namespace {

std::size_t pair_index(std::size_t k, std::size_t l) {
    // upper-triangular storage, k < l
    return l * (l - 1) / 2 + k;
}

void check_replicate_floor(std::uint64_t replicates) {
    if (replicates < kMinReplicates) {
        throw InvalidSize("Monte Carlo floor is R >= " + std::to_string(kMinReplicates) +
                          ", got R = " + std::to_string(replicates));
    }
}

} // namespace

InclusionMatrix mc_inclusion(Design design, const Population& pop,
                             const ProbabilityVector& pv, std::uint64_t replicates,
                             const RandomStream& rng) {
    validate_inputs(pop, pv);
    check_replicate_floor(replicates);
    const std::size_t N = static_cast<std::size_t>(pv.size());
    const std::size_t pairs = N * (N - 1) / 2;

    std::vector<std::uint64_t> first_sum(N, 0), first_sumsq(N, 0);
    std::vector<std::uint64_t> pair_sum(pairs, 0), pair_sumsq(pairs, 0);
    std::mutex merge_mutex;

    // Exact integer accumulation: merge order cannot change the totals, so
    // the result is identical for any worker count.
    parallel_chunks(replicates, 1024, [&](std::size_t, std::uint64_t begin,
                                          std::uint64_t end) {
        std::vector<std::uint64_t> f_sum(N, 0), f_sumsq(N, 0);
        std::vector<std::uint64_t> p_sum(pairs, 0), p_sumsq(pairs, 0);
        std::vector<std::size_t> selected;
        for (std::uint64_t rep = begin; rep < end; ++rep) {
            RandomStream stream(rng.seed(), rng.stream_id() + rep);
            const SampleCounts sample = draw_sample(design, pop, pv, stream);
            selected.clear();
            for (std::size_t k = 0; k < N; ++k) {
                const std::uint64_t c =
                    static_cast<std::uint64_t>(sample.counts[static_cast<Eigen::Index>(k)]);
                if (c == 0) continue;
                selected.push_back(k);
                f_sum[k] += c;
                f_sumsq[k] += c * c;
            }
            for (std::size_t i = 0; i < selected.size(); ++i) {
                for (std::size_t j = i + 1; j < selected.size(); ++j) {
                    const std::size_t k = selected[i];
                    const std::size_t l = selected[j];
                    const std::uint64_t ck =
                        static_cast<std::uint64_t>(sample.counts[static_cast<Eigen::Index>(k)]);
                    const std::uint64_t cl =
                        static_cast<std::uint64_t>(sample.counts[static_cast<Eigen::Index>(l)]);
                    const std::uint64_t product = ck * cl;
                    const std::size_t idx = pair_index(k, l);
                    p_sum[idx] += product;
                    p_sumsq[idx] += product * product;
                }
            }
        }
        const std::lock_guard<std::mutex> lock(merge_mutex);
        for (std::size_t k = 0; k < N; ++k) {
            first_sum[k] += f_sum[k];
            first_sumsq[k] += f_sumsq[k];
        }
        for (std::size_t i = 0; i < pairs; ++i) {
            pair_sum[i] += p_sum[i];
            pair_sumsq[i] += p_sumsq[i];
        }
    });

    const double r = static_cast<double>(replicates);
    InclusionMatrix inc;
    inc.replicates = replicates;
    inc.with_replacement = design == Design::multinomial;
    inc.first_order.resize(static_cast<Eigen::Index>(N));
    inc.first_order_se.resize(static_cast<Eigen::Index>(N));
    inc.second_order.resize(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
    inc.second_order_se.resize(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));

    auto se_of = [&](double mean, double mean_sq) {
        return std::sqrt(std::max(0.0, mean_sq - mean * mean) / r);
    };
    for (std::size_t k = 0; k < N; ++k) {
        const double mean = static_cast<double>(first_sum[k]) / r;
        const double mean_sq = static_cast<double>(first_sumsq[k]) / r;
        const auto ek = static_cast<Eigen::Index>(k);
        inc.first_order[ek] = mean;
        inc.first_order_se[ek] = se_of(mean, mean_sq);
        inc.second_order(ek, ek) = mean;
        inc.second_order_se(ek, ek) = inc.first_order_se[ek];
    }
    for (std::size_t l = 1; l < N; ++l) {
        for (std::size_t k = 0; k < l; ++k) {
            const std::size_t idx = pair_index(k, l);
            const double mean = static_cast<double>(pair_sum[idx]) / r;
            const double mean_sq = static_cast<double>(pair_sumsq[idx]) / r;
            const double se = se_of(mean, mean_sq);
            const auto ek = static_cast<Eigen::Index>(k);
            const auto el = static_cast<Eigen::Index>(l);
            inc.second_order(ek, el) = mean;
            inc.second_order(el, ek) = mean;
            inc.second_order_se(ek, el) = se;
            inc.second_order_se(el, ek) = se;
        }
    }
    return inc;
}

MomentReport mc_moments(Design design, const Population& pop,
                        const ProbabilityVector& pv, std::uint64_t replicates,
                        const RandomStream& rng) {
    validate_inputs(pop, pv);
    check_replicate_floor(replicates);

    std::vector<double> estimates(replicates);
    parallel_chunks(replicates, 1024, [&](std::size_t, std::uint64_t begin,
                                          std::uint64_t end) {
        for (std::uint64_t rep = begin; rep < end; ++rep) {
            RandomStream stream(rng.seed(), rng.stream_id() + rep);
            const SampleCounts sample = draw_sample(design, pop, pv, stream);
            estimates[rep] = ht_total(pop, pv, sample);
        }
    });

    const double r = static_cast<double>(replicates);
    const double target = total(pop);

    NeumaierSum mean_acc;
    for (double e : estimates) mean_acc.add(e);
    const double mean = mean_acc.value() / r;

    NeumaierSum m2_acc, m4_acc, mse_acc, mse2_acc;
    for (double e : estimates) {
        const double dev = e - mean;
        m2_acc.add(dev * dev);
        m4_acc.add(dev * dev * dev * dev);
        const double err = e - target;
        mse_acc.add(err * err);
        mse2_acc.add(err * err * err * err);
    }
    MomentReport report;
    report.replicates = replicates;
    report.mean_estimate = mean;
    report.variance_estimate = m2_acc.value() / r;
    report.mse = mse_acc.value() / r;
    report.se_mean = std::sqrt(report.variance_estimate / r);
    const double m4 = m4_acc.value() / r;
    report.se_variance = std::sqrt(
        std::max(0.0, m4 - report.variance_estimate * report.variance_estimate) / r);
    const double mse_m2 = mse2_acc.value() / r;
    report.se_mse = std::sqrt(std::max(0.0, mse_m2 - report.mse * report.mse) / r);
    return report;
}

} // namespace svysamp
