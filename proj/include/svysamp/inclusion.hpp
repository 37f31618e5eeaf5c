#pragma once

#include <cstdint>

#include <Eigen/Dense>

namespace svysamp {

/// First- and second-order inclusion probabilities, exact or Monte Carlo
/// estimated. The matrix is symmetric with the first-order probabilities on
/// the diagonal. Exact matrices carry no standard errors and replicates = 0.
/// For with-replacement designs the off-diagonal entries hold the expected
/// count products E[I_k I_l] instead of joint inclusion probabilities.
struct InclusionMatrix {
    Eigen::VectorXd first_order;
    Eigen::MatrixXd second_order;
    Eigen::VectorXd first_order_se;  // empty when exact
    Eigen::MatrixXd second_order_se; // empty when exact
    std::uint64_t replicates = 0;    // 0 means exact
    bool with_replacement = false;

    Eigen::Index size() const { return first_order.size(); }
    bool exact() const { return replicates == 0; }
};

} // namespace svysamp
