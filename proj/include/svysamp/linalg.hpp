#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "svysamp/errors.hpp"
#include "svysamp/population.hpp"

namespace svysamp {

/// Relative rank threshold for kernel extraction.
inline constexpr double kRankTol = 1e-10;

/// Balancing constraints restricted to a set of active units: one row per
/// constraint, one column per unit, entry (j, k) = x_{u_k, j} / pi_{u_k}.
struct ConstraintMatrix {
    Eigen::MatrixXd coeffs;        // q rows x m columns
    std::vector<int> active_units; // m unit indices, column order
};

/// Builds the constraint columns x_k / pi_k for the given units.
ConstraintMatrix make_constraints(const Population& pop, const ProbabilityVector& pv,
                                  std::span<const int> units);

/// A nonzero vector of the numerical kernel of A, normalized so the largest
/// component has absolute value 1, or empty when A has full column rank. The
/// choice among multiple kernel vectors is deterministic: back-substitution
/// on the first free column. The result satisfies
/// |A v| <= tol * |v| * (largest column norm).
std::optional<Eigen::VectorXd> kernel_vector(const ConstraintMatrix& a,
                                             double tol = kRankTol);

/// Removes the last constraint row; the active units are unchanged.
/// Throws NoConstraintsLeft when there is no row to drop.
ConstraintMatrix drop_last_constraint(const ConstraintMatrix& a);

namespace detail {

/// In-place kernel extraction; a is destroyed. Returns false when the matrix
/// has full column rank, otherwise writes the normalized kernel vector.
bool kernel_into(Eigen::MatrixXd& a, double tol, Eigen::VectorXd& out);

} // namespace detail

} // namespace svysamp
