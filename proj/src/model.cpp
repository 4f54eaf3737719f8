#include "l1loc/model.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace l1loc {

double distance(const Point& a, const Point& b, double d_floor) {
  const double d = std::hypot(a.x - b.x, a.y - b.y);
  return std::max(d, d_floor);
}

double path_gain(double d, const PathLossParams& params) {
  return std::pow(d, -params.alpha) * std::pow(params.beta, d);
}

Eigen::MatrixXd build_sensing_matrix(const std::vector<Point>& grid,
                                     const std::vector<Point>& sensors,
                                     const PathLossParams& params,
                                     double p_min, double p_max,
                                     double d_floor) {
  if (grid.empty() || sensors.empty())
    throw std::invalid_argument("build_sensing_matrix: empty grid or sensors");
  const double p_mid = 0.5 * (p_min + p_max);
  Eigen::MatrixXd phi(static_cast<Eigen::Index>(sensors.size()),
                      static_cast<Eigen::Index>(grid.size()));
  for (std::size_t k = 0; k < sensors.size(); ++k)
    for (std::size_t m = 0; m < grid.size(); ++m)
      phi(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(m)) =
          p_mid * path_gain(distance(sensors[k], grid[m], d_floor), params);
  return phi;
}

RssVector generate_rss(const Scenario& scenario, std::uint64_t seed,
                       double d_floor) {
  const double omega = std::log(10.0) * scenario.sigma_db / 10.0;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  RssVector r = RssVector::Zero(static_cast<Eigen::Index>(scenario.sensors.size()));
  for (std::size_t k = 0; k < scenario.sensors.size(); ++k) {
    for (const Target& t : scenario.targets) {
      const double d = distance(scenario.sensors[k], t.pos, d_floor);
      double shadow = 1.0;
      if (omega != 0.0) shadow = std::exp(omega * gauss(rng));
      r(static_cast<Eigen::Index>(k)) +=
          t.power * path_gain(d, scenario.truth) * shadow;
    }
  }
  return r;
}

LogNormalMoments fenton_wilkinson(const std::vector<LogNormalMoments>& terms) {
  if (terms.empty())
    throw std::invalid_argument("fenton_wilkinson: empty term list");
  double mean = 0.0;
  double var = 0.0;
  for (const auto& t : terms) {
    const double s2 = t.sigma * t.sigma;
    mean += std::exp(t.mu + 0.5 * s2);
    var += std::exp(2.0 * t.mu + s2) * (std::exp(s2) - 1.0);
  }
  const double sigma2 = std::log1p(var / (mean * mean));
  return {std::log(mean) - 0.5 * sigma2, std::sqrt(sigma2)};
}

}  // namespace l1loc
