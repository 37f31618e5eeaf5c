#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "svysamp/designs.hpp"
#include "svysamp/inclusion.hpp"
#include "svysamp/population.hpp"
#include "svysamp/random.hpp"

namespace svysamp {

enum class Design { poisson, multinomial, srswor, pivotal, cube };

const char* design_name(Design design);
std::optional<Design> parse_design(std::string_view name);

/// Floor on Monte Carlo replicate counts; below it the normal-approximation
/// error bands are not meaningful.
inline constexpr std::uint64_t kMinReplicates = 1000;

/// One point of an exhaustively enumerated sampling distribution.
struct Outcome {
    Eigen::VectorXi counts;
    double probability;
    double estimate; // estimated total for this outcome
};

/// Exhaustive outcome distribution for designs with closed-form support:
/// Poisson (2^N outcomes, N <= 20), simple random sampling (C(N,n) <= 1e6)
/// and multinomial (N^n ordered draw sequences <= 1e6, outcomes aggregated
/// by count vector). Throws TooLarge beyond those guards and
/// UnsupportedDesign for pivotal or cube.
std::vector<Outcome> enumerate_distribution(Design design, const Population& pop,
                                            const ProbabilityVector& pv);

/// Probability-weighted mean of the estimates of an enumerated distribution.
double enumeration_mean(std::span<const Outcome> outcomes);

/// Probability-weighted variance of the estimates about their mean.
double enumeration_variance(std::span<const Outcome> outcomes);

/// Exact inclusion probabilities for the closed-form designs. Throws
/// UnsupportedDesign for pivotal and cube, whose second-order structure has
/// no closed form.
InclusionMatrix exact_inclusion(Design design, const ProbabilityVector& pv);
InclusionMatrix exact_inclusion_srswor(Eigen::Index population_size,
                                       Eigen::Index sample_size);

/// Draws one sample from the named design. srswor requires uniform pi = n/N;
/// cube requires auxiliaries on pop.
SampleCounts draw_sample(Design design, const Population& pop,
                         const ProbabilityVector& pv, RandomStream& rng);

/// Monte Carlo estimate of first- and second-order inclusion probabilities
/// over R replicates. Replicate r draws from an independent stream with
/// stream-id = rng.stream_id() + r; accumulation is in exact integer
/// arithmetic, so the result is bit-identical for any worker count.
InclusionMatrix mc_inclusion(Design design, const Population& pop,
                             const ProbabilityVector& pv, std::uint64_t replicates,
                             const RandomStream& rng);

/// Monte Carlo moments of the estimated total.
struct MomentReport {
    double mean_estimate = 0.0;
    double variance_estimate = 0.0;
    double mse = 0.0; // mean of (estimate - t_y)^2
    std::uint64_t replicates = 0;
    double se_mean = 0.0;
    double se_variance = 0.0;
    double se_mse = 0.0;
};

/// Estimates mean, variance and mean squared error of the estimated total
/// over R independent replicate streams. Per-replicate estimates are stored
/// and reduced in replicate order with compensated summation, so the report
/// is bit-identical for any worker count.
MomentReport mc_moments(Design design, const Population& pop,
                        const ProbabilityVector& pv, std::uint64_t replicates,
                        const RandomStream& rng);

} // namespace svysamp
