#include "svysamp/designs.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "svysamp/linalg.hpp"

namespace svysamp {

namespace {

double snap(double p) {
    if (std::abs(p) <= kSnapTol) return 0.0;
    if (std::abs(p - 1.0) <= kSnapTol) return 1.0;
    return p;
}

bool is_integral(double p) { return p == 0.0 || p == 1.0; }

// Doubly-linked list over unit indices, ascending; O(1) removal keeps the
// martingale runs linear in N.
class ActiveList {
public:
    explicit ActiveList(const Eigen::VectorXd& pi) {
        const int n = static_cast<int>(pi.size());
        next_.resize(static_cast<std::size_t>(n) + 1);
        prev_.resize(static_cast<std::size_t>(n) + 1);
        head_ = n; // n doubles as the sentinel
        for (int k = n - 1; k >= 0; --k) {
            if (is_integral(pi[k])) continue;
            next_[static_cast<std::size_t>(k)] = head_;
            prev_[static_cast<std::size_t>(head_)] = k;
            head_ = k;
            ++count_;
        }
        prev_[static_cast<std::size_t>(head_)] = n;
    }

    int head() const { return head_; }
    int next(int k) const { return next_[static_cast<std::size_t>(k)]; }
    int count() const { return count_; }
    int sentinel() const { return static_cast<int>(next_.size()) - 1; }

    void remove(int k) {
        const int p = prev_[static_cast<std::size_t>(k)];
        const int nx = next_[static_cast<std::size_t>(k)];
        if (p == sentinel()) {
            head_ = nx;
        } else {
            next_[static_cast<std::size_t>(p)] = nx;
        }
        prev_[static_cast<std::size_t>(nx)] = p;
        --count_;
    }

private:
    std::vector<int> next_;
    std::vector<int> prev_;
    int head_ = 0;
    int count_ = 0;
};

// One martingale step on the given units: draws the branch, moves pi, snaps
// and unlinks settled coordinates, optionally records the step.
void martingale_step(Eigen::VectorXd& pi, ActiveList& active,
                     const std::vector<int>& units, const Eigen::VectorXd& direction,
                     RandomStream& rng, MartingaleTrace* trace) {
    const auto m = static_cast<Eigen::Index>(units.size());
    Eigen::VectorXd pi_local(m);
    for (Eigen::Index j = 0; j < m; ++j) {
        pi_local[j] = pi[units[static_cast<std::size_t>(j)]];
    }
    const StepBounds bounds = step_bounds(pi_local, direction);
    const double up_prob = bounds.down / (bounds.up + bounds.down);
    const bool moved_up = rng.uniform() < up_prob;
    const double amount = moved_up ? bounds.up : -bounds.down;

    Eigen::VectorXd delta(m);
    for (Eigen::Index j = 0; j < m; ++j) {
        const int k = units[static_cast<std::size_t>(j)];
        const double moved = snap(pi[k] + amount * direction[j]);
        delta[j] = moved - pi[k];
        pi[k] = moved;
        if (is_integral(moved)) {
            active.remove(k);
        }
    }

    if (trace != nullptr) {
        StepRecord rec;
        rec.units = units;
        rec.direction = direction;
        rec.max_up = bounds.up;
        rec.max_down = bounds.down;
        rec.moved_up = moved_up;
        rec.branch_prob = moved_up ? up_prob : 1.0 - up_prob;
        rec.delta = std::move(delta);
        trace->steps.push_back(std::move(rec));
    }
}

TracedSample run_pivotal(const ProbabilityVector& pv, RandomStream& rng,
                         bool want_trace) {
    validate_probabilities(pv);
    TracedSample out;
    MartingaleTrace* trace = want_trace ? &out.trace : nullptr;
    if (trace != nullptr) {
        trace->initial_pi = pv.pi;
    }

    Eigen::VectorXd pi = pv.pi;
    for (Eigen::Index k = 0; k < pi.size(); ++k) {
        pi[k] = snap(pi[k]);
    }
    ActiveList active(pi);

    std::vector<int> units;
    while (active.count() >= 2) {
        const int a = active.head();
        const int b = active.next(a);
        units = {a, b};
        martingale_step(pi, active, units, Eigen::Vector2d(1.0, -1.0), rng, trace);
    }
    if (active.count() == 1) {
        units = {active.head()};
        martingale_step(pi, active, units, Eigen::VectorXd::Ones(1), rng, trace);
    }

    out.counts.counts = pi.array().round().cast<int>();
    return out;
}

TracedSample run_fast_cube(const Population& pop, const ProbabilityVector& pv,
                           RandomStream& rng, bool want_trace) {
    validate_inputs(pop, pv);
    const Eigen::Index q = pop.aux_count();
    if (q < 1) {
        throw InvalidSize("cube method requires at least one auxiliary variable");
    }

    TracedSample out;
    MartingaleTrace* trace = want_trace ? &out.trace : nullptr;
    if (trace != nullptr) {
        trace->initial_pi = pv.pi;
    }

    Eigen::VectorXd pi = pv.pi;
    for (Eigen::Index k = 0; k < pi.size(); ++k) {
        pi[k] = snap(pi[k]);
    }
    ActiveList active(pi);

    // Constraint columns x_k / pi_k, fixed for the whole run.
    Eigen::MatrixXd constraints = pop.x.transpose();
    for (Eigen::Index k = 0; k < pi.size(); ++k) {
        constraints.col(k) /= pv.pi[k];
    }

    Eigen::Index rows = q; // landing drops trailing rows one at a time
    Eigen::MatrixXd block;
    Eigen::VectorXd direction;
    std::vector<int> units;
    while (active.count() > 0) {
        const int m = std::min(static_cast<int>(rows) + 1, active.count());
        units.resize(static_cast<std::size_t>(m));
        int k = active.head();
        for (int j = 0; j < m; ++j) {
            units[static_cast<std::size_t>(j)] = k;
            k = active.next(k);
        }

        block.resize(rows, m);
        for (int j = 0; j < m; ++j) {
            block.col(j) = constraints.col(units[static_cast<std::size_t>(j)]).head(rows);
        }
        if (detail::kernel_into(block, kRankTol, direction)) {
            martingale_step(pi, active, units, direction, rng, trace);
        } else {
            // A q x (q+1) block always has a nontrivial kernel, so a failed
            // search implies m <= rows and the landing phase has begun.
            assert(m <= rows);
            if (trace != nullptr && !trace->first_constraint_drop) {
                trace->first_constraint_drop = trace->steps.size();
            }
            --rows;
        }
    }

    out.counts.counts = pi.array().round().cast<int>();
    return out;
}

} // namespace

StepBounds step_bounds(const Eigen::VectorXd& pi, const Eigen::VectorXd& direction) {
    if (pi.size() != direction.size()) {
        throw LengthMismatch("direction length does not match probability length");
    }
    double up = std::numeric_limits<double>::infinity();
    double down = std::numeric_limits<double>::infinity();
    bool any = false;
    for (Eigen::Index j = 0; j < direction.size(); ++j) {
        const double u = direction[j];
        if (std::abs(u) <= kDirectionTol) continue;
        any = true;
        const double p = pi[j];
        if (u > 0.0) {
            up = std::min(up, (1.0 - p) / u);
            down = std::min(down, p / u);
        } else {
            up = std::min(up, -p / u);
            down = std::min(down, -(1.0 - p) / u);
        }
    }
    if (!any) {
        throw ZeroDirection("step direction is numerically zero");
    }
    return {up, down};
}

SampleCounts poisson_sample(const ProbabilityVector& pv, RandomStream& rng) {
    validate_probabilities(pv);
    SampleCounts s;
    s.counts.setZero(pv.size());
    for (Eigen::Index k = 0; k < pv.size(); ++k) {
        if (rng.uniform() < pv.pi[k]) {
            s.counts[k] = 1;
        }
    }
    return s;
}

SampleCounts multinomial_sample(const ProbabilityVector& pv, RandomStream& rng) {
    validate_probabilities(pv);
    const long long n = integral_sample_size(pv.expected_size());
    const Eigen::Index N = pv.size();

    Eigen::VectorXd cumulative(N);
    double running = 0.0;
    for (Eigen::Index k = 0; k < N; ++k) {
        running += pv.pi[k];
        cumulative[k] = running;
    }
    const double mass = cumulative[N - 1];

    SampleCounts s;
    s.counts.setZero(N);
    for (long long draw = 0; draw < n; ++draw) {
        const double x = rng.uniform() * mass;
        const double* begin = cumulative.data();
        Eigen::Index k = std::upper_bound(begin, begin + N, x) - begin;
        if (k >= N) k = N - 1;
        s.counts[k] += 1;
    }
    return s;
}

SampleCounts srswor_sample(Eigen::Index population_size, Eigen::Index sample_size,
                           RandomStream& rng) {
    if (population_size < 1 || sample_size < 1 || sample_size > population_size) {
        throw InvalidSize("require 1 <= n <= N, got n = " + std::to_string(sample_size) +
                          ", N = " + std::to_string(population_size));
    }
    SampleCounts s;
    s.counts.setZero(population_size);
    Eigen::Index remaining = sample_size;
    for (Eigen::Index k = 0; k < population_size && remaining > 0; ++k) {
        const double keep = static_cast<double>(remaining) /
                            static_cast<double>(population_size - k);
        if (rng.uniform() < keep) {
            s.counts[k] = 1;
            --remaining;
        }
    }
    return s;
}

TracedSample pivotal_sample(const ProbabilityVector& pv, RandomStream& rng) {
    return run_pivotal(pv, rng, true);
}

SampleCounts pivotal_sample_counts(const ProbabilityVector& pv, RandomStream& rng) {
    return run_pivotal(pv, rng, false).counts;
}

TracedSample fast_cube_sample(const Population& pop, const ProbabilityVector& pv,
                              RandomStream& rng) {
    return run_fast_cube(pop, pv, rng, true);
}

SampleCounts fast_cube_sample_counts(const Population& pop, const ProbabilityVector& pv,
                                     RandomStream& rng) {
    return run_fast_cube(pop, pv, rng, false).counts;
}

SampleCounts replay_trace(const MartingaleTrace& trace) {
    Eigen::VectorXd pi = trace.initial_pi;
    for (Eigen::Index k = 0; k < pi.size(); ++k) {
        pi[k] = snap(pi[k]);
    }
    for (std::size_t i = 0; i < trace.steps.size(); ++i) {
        const StepRecord& rec = trace.steps[i];
        if (rec.direction.size() != static_cast<Eigen::Index>(rec.units.size()) ||
            rec.delta.size() != rec.direction.size()) {
            throw MalformedTrace("step " + std::to_string(i) + " has inconsistent sizes");
        }
        if (!(rec.max_up > 0.0) || !(rec.max_down > 0.0)) {
            throw MalformedTrace("step " + std::to_string(i) + " has non-positive bounds");
        }
        const double amount = rec.moved_up ? rec.max_up : -rec.max_down;
        for (std::size_t j = 0; j < rec.units.size(); ++j) {
            const int k = rec.units[j];
            if (k < 0 || k >= pi.size()) {
                throw MalformedTrace("step " + std::to_string(i) + " touches unknown unit");
            }
            const double moved =
                snap(pi[k] + amount * rec.direction[static_cast<Eigen::Index>(j)]);
            const double realized = moved - pi[k];
            if (std::abs(realized - rec.delta[static_cast<Eigen::Index>(j)]) > kSnapTol) {
                throw MalformedTrace("step " + std::to_string(i) +
                                     " delta does not match its branch");
            }
            pi[k] = moved;
        }
    }
    SampleCounts counts;
    counts.counts.resize(pi.size());
    for (Eigen::Index k = 0; k < pi.size(); ++k) {
        if (!is_integral(pi[k])) {
            throw MalformedTrace("trace does not terminate at an integral vector");
        }
        counts.counts[k] = static_cast<int>(pi[k]);
    }
    return counts;
}

} // namespace svysamp
