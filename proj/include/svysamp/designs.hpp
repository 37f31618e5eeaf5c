#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "svysamp/population.hpp"
#include "svysamp/random.hpp"

namespace svysamp {

/// Coordinates within this distance of 0 or 1 are snapped and frozen;
/// floating-point drift otherwise prevents termination.
inline constexpr double kSnapTol = 1e-9;

/// Direction components below this magnitude are treated as zero when
/// computing step bounds (directions are normalized to unit max norm).
inline constexpr double kDirectionTol = 1e-14;

/// Largest feasible moves along +direction (up) and -direction (down)
/// keeping the probability vector inside [0, 1].
struct StepBounds {
    double up;
    double down;
};

/// Computes the step bounds for probabilities pi (all in (0,1)) along the
/// given direction. After moving by either bound, at least one coordinate
/// touches 0 or 1. Throws ZeroDirection when the direction is numerically
/// zero.
StepBounds step_bounds(const Eigen::VectorXd& pi, const Eigen::VectorXd& direction);

/// One innovation of a martingale sampling run, restricted to the units it
/// affects.
struct StepRecord {
    std::vector<int> units;     // affected units, ascending
    Eigen::VectorXd direction;  // kernel direction on units, unit max norm
    double max_up = 0.0;        // largest feasible step along +direction
    double max_down = 0.0;      // largest feasible step along -direction
    bool moved_up = false;
    double branch_prob = 0.0;   // probability of the branch taken
    Eigen::VectorXd delta;      // realized change on units (after snapping)
};

/// The full record of a martingale sampling run: the starting probabilities
/// and every innovation, in order. The number of steps is T and the largest
/// number of units affected by any single step is the complexity constant C.
struct MartingaleTrace {
    Eigen::VectorXd initial_pi;
    std::vector<StepRecord> steps;
    /// Steps applied before the first constraint row was dropped (empty when
    /// the run never dropped one). Marks where the landing phase began.
    std::optional<std::size_t> first_constraint_drop;

    std::size_t step_count() const { return steps.size(); }

    int max_affected() const {
        std::size_t c = 0;
        for (const auto& s : steps) {
            c = std::max(c, s.units.size());
        }
        return static_cast<int>(c);
    }
};

struct TracedSample {
    SampleCounts counts;
    MartingaleTrace trace;
};

/// Independent Bernoulli trial per unit with P(I_k = 1) = pi_k.
SampleCounts poisson_sample(const ProbabilityVector& pv, RandomStream& rng);

/// n independent draws, unit k selected with probability pi_k / n each draw.
/// Requires n = sum(pi) integral within 1e-9.
SampleCounts multinomial_sample(const ProbabilityVector& pv, RandomStream& rng);

/// Uniformly random subset of n of the N units.
SampleCounts srswor_sample(Eigen::Index population_size, Eigen::Index sample_size,
                           RandomStream& rng);

/// Pivotal method: successive duels between the first two unsettled units,
/// each duel a martingale step affecting at most two units.
TracedSample pivotal_sample(const ProbabilityVector& pv, RandomStream& rng);
SampleCounts pivotal_sample_counts(const ProbabilityVector& pv, RandomStream& rng);

/// Fast cube method: flight steps move along kernel directions of the
/// constraint columns of the first q+1 unsettled units; when no kernel
/// direction exists the landing phase drops constraint rows one at a time.
/// Requires at least one auxiliary variable.
TracedSample fast_cube_sample(const Population& pop, const ProbabilityVector& pv,
                              RandomStream& rng);
SampleCounts fast_cube_sample_counts(const Population& pop, const ProbabilityVector& pv,
                                     RandomStream& rng);

/// Re-applies the branch decisions recorded in a trace and returns the
/// resulting counts. Throws MalformedTrace when the trace is inconsistent
/// or does not terminate at an integral vector.
SampleCounts replay_trace(const MartingaleTrace& trace);

} // namespace svysamp
