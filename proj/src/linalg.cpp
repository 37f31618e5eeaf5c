#include "svysamp/linalg.hpp"

#include <cmath>

namespace svysamp {

ConstraintMatrix make_constraints(const Population& pop, const ProbabilityVector& pv,
                                  std::span<const int> units) {
    const Eigen::Index q = pop.aux_count();
    ConstraintMatrix a;
    a.coeffs.resize(q, static_cast<Eigen::Index>(units.size()));
    a.active_units.assign(units.begin(), units.end());
    for (Eigen::Index j = 0; j < a.coeffs.cols(); ++j) {
        const int k = a.active_units[static_cast<std::size_t>(j)];
        a.coeffs.col(j) = pop.x.row(k).transpose() / pv.pi[k];
    }
    return a;
}

namespace detail {

bool kernel_into(Eigen::MatrixXd& a, double tol, Eigen::VectorXd& out) {
    const Eigen::Index q = a.rows();
    const Eigen::Index m = a.cols();

    double max_col_norm = 0.0;
    for (Eigen::Index j = 0; j < m; ++j) {
        max_col_norm = std::max(max_col_norm, a.col(j).norm());
    }
    const double threshold = tol * std::max(max_col_norm, 1e-300);

    // Row-echelon reduction with partial pivoting, skipping columns whose
    // remaining entries fall below the rank threshold.
    std::vector<Eigen::Index> pivot_col; // pivot column of row r
    pivot_col.reserve(static_cast<std::size_t>(std::min(q, m)));
    std::vector<bool> is_pivot(static_cast<std::size_t>(m), false);
    Eigen::Index row = 0;
    for (Eigen::Index col = 0; col < m && row < q; ++col) {
        Eigen::Index best = row;
        double best_abs = std::abs(a(row, col));
        for (Eigen::Index r = row + 1; r < q; ++r) {
            const double v = std::abs(a(r, col));
            if (v > best_abs) {
                best = r;
                best_abs = v;
            }
        }
        if (best_abs <= threshold) {
            continue; // free column
        }
        if (best != row) {
            a.row(best).swap(a.row(row));
        }
        for (Eigen::Index r = row + 1; r < q; ++r) {
            const double factor = a(r, col) / a(row, col);
            if (factor != 0.0) {
                a.row(r).tail(m - col) -= factor * a.row(row).tail(m - col);
            }
        }
        pivot_col.push_back(col);
        is_pivot[static_cast<std::size_t>(col)] = true;
        ++row;
    }

    Eigen::Index free_col = -1;
    for (Eigen::Index col = 0; col < m; ++col) {
        if (!is_pivot[static_cast<std::size_t>(col)]) {
            free_col = col;
            break;
        }
    }
    if (free_col < 0) {
        return false; // full column rank
    }

    // Back-substitute with the first free column set to 1, remaining free
    // columns 0.
    out.setZero(m);
    out[free_col] = 1.0;
    for (Eigen::Index r = static_cast<Eigen::Index>(pivot_col.size()) - 1; r >= 0; --r) {
        const Eigen::Index pc = pivot_col[static_cast<std::size_t>(r)];
        double rhs = 0.0;
        for (Eigen::Index j = pc + 1; j < m; ++j) {
            if (out[j] != 0.0) {
                rhs += a(r, j) * out[j];
            }
        }
        out[pc] = -rhs / a(r, pc);
    }

    const double max_abs = out.cwiseAbs().maxCoeff();
    out /= max_abs;
    return true;
}

} // namespace detail

std::optional<Eigen::VectorXd> kernel_vector(const ConstraintMatrix& a, double tol) {
    Eigen::MatrixXd work = a.coeffs;
    Eigen::VectorXd v;
    if (!detail::kernel_into(work, tol, v)) {
        return std::nullopt;
    }
    return v;
}

ConstraintMatrix drop_last_constraint(const ConstraintMatrix& a) {
    if (a.coeffs.rows() == 0) {
        throw NoConstraintsLeft("constraint matrix has no rows to drop");
    }
    ConstraintMatrix reduced;
    reduced.coeffs = a.coeffs.topRows(a.coeffs.rows() - 1);
    reduced.active_units = a.active_units;
    return reduced;
}

} // namespace svysamp
