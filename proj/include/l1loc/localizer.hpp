#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "l1loc/cluster.hpp"
#include "l1loc/model.hpp"
#include "l1loc/qp.hpp"

namespace l1loc {

enum class Phase { one = 1, two = 2 };

struct LocalizerConfig {
  int grid_granularity = 5;  // G, per axis
  double half_width = 100.0;  // w
  int iters_phase_one = 5;    // I1
  int iters_phase_two = 5;    // I2
  int nu_min = 1;
  int nu_max = 3;
  double alpha_min = 1.0;
  double alpha_max = 6.0;
  double beta_min = 0.5;
  double p_min = 1.0;
  double p_max = 3.0;
  double d_floor = kDefaultDistanceFloor;
  double grid_shrink = 0.5;  // per-iteration half-width factor
  std::uint64_t seed = 0;

  // per-iteration displacement bound
  double delta() const {
    return half_width / (4.0 * (grid_granularity - 1));
  }
  int m0() const { return grid_granularity * grid_granularity; }
  void validate() const;
};

struct GridPoint {
  double x = 0.0;
  double y = 0.0;
  double p = 0.0;
};

struct GridState {
  std::vector<GridPoint> points;  // M points
  std::vector<double> weights;    // w_m, model weights in the residual
  int granularity = 1;            // G
  double subgrid_halfwidth = 0.0;
  Phase phase = Phase::one;
};

// First-order expansion of the per-sensor residual
//   f_k = r_k - sum_m w_m p_m d_km^{-alpha} beta^{d_km}
// around the current grid, powers and channel parameters.
struct Linearization {
  Eigen::VectorXd f;  // residuals, length K
  Eigen::VectorXd u;  // df/dalpha per sensor
  Eigen::VectorXd v;  // df/dbeta per sensor
  Eigen::MatrixXd a;  // df_k/dx_m
  Eigen::MatrixXd b;  // df_k/dy_m
  Eigen::MatrixXd c;  // df_k/dp_m
};

struct TargetEstimate {
  double x = 0.0;
  double y = 0.0;
  double p = 0.0;
};

struct IterationRecord {
  int iteration = 0;
  Phase phase = Phase::one;
  int nu_star = 0;
  double objective = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  std::vector<TargetEstimate> estimates;
};

struct EstimateReport {
  std::vector<TargetEstimate> targets;  // size n_hat
  int n_hat = 0;
  double alpha_hat = 0.0;
  double beta_hat = 0.0;
  std::vector<IterationRecord> trace;
  int max_qp_variables = 0;
};

struct LocalizerState {
  int n_targets = 0;  // current estimate of N
  std::vector<TargetEstimate> estimates;
  double alpha = 2.0;
  double beta = 1.0;
  int mu = 1;
  Phase phase = Phase::one;
  int granularity = 1;          // current G (collapses to 1 in phase two)
  Eigen::VectorXd prev_s;       // activations from the previous solve
  int max_qp_variables = 0;
};

LocalizerState init_state(const LocalizerConfig& cfg);

// Phase one: union of G x G subgrids of half-width
// max(w * shrink^(i-1), 4 delta) centered at the current estimates, clipped
// to the area. Phase two: one point per estimate.
GridState build_grid(const std::vector<TargetEstimate>& estimates, int G,
                     int iteration, const LocalizerConfig& cfg,
                     const Eigen::VectorXd& prev_s);

Linearization linearize(const GridState& grid,
                        const std::vector<Point>& sensors,
                        const Eigen::VectorXd& r, double alpha, double beta,
                        double d_floor = kDefaultDistanceFloor);

// Stacks the linearized residual rows and, when mu = 1, the sparse-recovery
// rows Psi r - Q s, with trust-region and admissible-range bounds.
// Phase-one layout: [s | dx | dy | dp | dalpha | dbeta | nu] (nu pinned).
// Phase-two layout: [dx | dy | dp | dalpha | dbeta].
QpProblem assemble_qp(const Linearization& lin, const Eigen::MatrixXd& q,
                      const Eigen::MatrixXd& psi, const Eigen::VectorXd& r,
                      const GridState& grid, double alpha, double beta,
                      const LocalizerConfig& cfg, int mu, int nu);

// Top-M0 activations, weighted k-means into nu_star groups on the
// offset-corrected positions, then per-cluster activation-weighted averages.
std::vector<TargetEstimate> cluster_and_average(const QpSolution& sol,
                                                const GridState& grid, int m0,
                                                int nu_star,
                                                std::uint64_t seed);

IterationRecord step(LocalizerState& state, const std::vector<Point>& sensors,
                     const Eigen::VectorXd& r, const LocalizerConfig& cfg,
                     int iteration);

EstimateReport run(const std::vector<Point>& sensors, const Eigen::VectorXd& r,
                   const LocalizerConfig& cfg);

}  // namespace l1loc
