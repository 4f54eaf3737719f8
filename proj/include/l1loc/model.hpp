#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace l1loc {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// Channel model parameters: received power decays as d^{-alpha} * beta^d.
// beta is a per-meter attenuation factor, upper-bounded by 1.
struct PathLossParams {
  double alpha = 2.0;
  double beta = 1.0;
  double alpha_min = 1.0;
  double alpha_max = 6.0;
  double beta_min = 0.5;

  bool in_range() const {
    return alpha_min > 0.0 && beta_min > 0.0 && alpha_min <= alpha &&
           alpha <= alpha_max && beta_min <= beta && beta <= 1.0;
  }
};

struct Target {
  Point pos;
  double power = 1.0;  // watts
};

// A synthetic deployment: sensors at known positions inside [-w, w]^2,
// targets with unknown (to the estimator) positions and powers.
struct Scenario {
  std::vector<Point> sensors;
  std::vector<Target> targets;
  double half_width = 100.0;  // w, area is [-w, w]^2
  double sigma_db = 0.0;      // log-normal shadowing std in dB
  PathLossParams truth;
  double p_min = 1.0;
  double p_max = 3.0;
};

using RssVector = Eigen::VectorXd;  // length K, watts, strictly positive

// Log-domain (natural log) mean/std of a log-normal variable.
struct LogNormalMoments {
  double mu = 0.0;
  double sigma = 0.0;
};

inline constexpr double kDefaultDistanceFloor = 1.0;  // meters

// Euclidean distance floored at d_floor so the gain kernel stays finite.
double distance(const Point& a, const Point& b,
                double d_floor = kDefaultDistanceFloor);

// d^{-alpha} * beta^d
double path_gain(double d, const PathLossParams& params);

// Sensing matrix: entry (k, m) = ((p_min + p_max) / 2) * path_gain(d_km)
// with d_km the floored distance from sensor k to grid point m.
Eigen::MatrixXd build_sensing_matrix(const std::vector<Point>& grid,
                                     const std::vector<Point>& sensors,
                                     const PathLossParams& params,
                                     double p_min, double p_max,
                                     double d_floor = kDefaultDistanceFloor);

// r_k = sum_n p_n * gain(d_kn) * exp(omega * Z_kn), Z iid standard normal,
// omega = ln(10) * sigma_db / 10. Deterministic per seed.
RssVector generate_rss(const Scenario& scenario, std::uint64_t seed,
                       double d_floor = kDefaultDistanceFloor);

// Moment-matching approximation of a sum of independent log-normals by a
// single log-normal (Fenton-Wilkinson).
LogNormalMoments fenton_wilkinson(const std::vector<LogNormalMoments>& terms);

}  // namespace l1loc
