#pragma once

// Column-matrix kernels shared by the closed loop and the analysis routines.
// States are (n+1) × N matrices with one unit column per agent.

#include <Eigen/Dense>

#include "spheresync/network.hpp"
#include "spheresync/shaping.hpp"

namespace spheresync::detail {

inline double pair_angle(const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::Ref<const Eigen::VectorXd>& b) {
  return 2.0 * std::atan2((a - b).norm(), (a + b).norm());
}

/// Adds agent i's coupling term into `out` (which must be sized n+1).
void accumulate_agent_control(const Eigen::MatrixXd& x, std::size_t i, const Graph& g, const DistanceFunction& d,
                              Eigen::Ref<Eigen::VectorXd> out);

void control_field(const Eigen::MatrixXd& x, const Graph& g, const DistanceFunction& d, Eigen::MatrixXd& u);

/// x_i ← exp_{x_i}(h · u_i) for every column, renormalizing drifted columns.
void exp_step(Eigen::MatrixXd& x, const Eigen::MatrixXd& u, double h);

double edge_energy(const Eigen::MatrixXd& x, const Graph& g, const DistanceFunction& d);

double max_pairwise_angle(const Eigen::MatrixXd& x);

}  // namespace spheresync::detail
