#include "l1loc/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace l1loc {

namespace {

double dist2(const Point& a, const Point& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

std::size_t sample_cumulative(const std::vector<double>& mass,
                              std::mt19937_64& rng) {
  double total = 0.0;
  for (double m : mass) total += m;
  std::uniform_real_distribution<double> unif(0.0, total);
  const double r = unif(rng);
  double acc = 0.0;
  for (std::size_t i = 0; i < mass.size(); ++i) {
    acc += mass[i];
    if (r < acc) return i;
  }
  // numerical tail: last index with positive mass
  for (std::size_t i = mass.size(); i-- > 0;)
    if (mass[i] > 0.0) return i;
  return 0;
}

int count_distinct_positive(const WeightedPoints& pts) {
  std::vector<Point> seen;
  for (std::size_t i = 0; i < pts.positions.size(); ++i) {
    if (pts.weights[i] <= 0.0) continue;
    bool dup = false;
    for (const Point& q : seen)
      if (pts.positions[i].x == q.x && pts.positions[i].y == q.y) {
        dup = true;
        break;
      }
    if (!dup) seen.push_back(pts.positions[i]);
  }
  return static_cast<int>(seen.size());
}

}  // namespace

KmeansResult kmeans(const WeightedPoints& pts, int k, std::uint64_t seed,
                    int max_iter) {
  const std::size_t n = pts.positions.size();
  if (pts.weights.size() != n)
    throw std::invalid_argument("kmeans: positions/weights size mismatch");
  if (k < 1) throw std::invalid_argument("kmeans: k must be >= 1");
  for (double w : pts.weights)
    if (w < 0.0 || !std::isfinite(w))
      throw std::invalid_argument("kmeans: weights must be nonnegative");
  if (count_distinct_positive(pts) < k)
    throw std::invalid_argument(
        "kmeans: k exceeds distinct positively weighted points");

  std::mt19937_64 rng(seed);

  // k-means++ seeding with weighted D^2 sampling
  std::vector<Point> centers;
  centers.reserve(static_cast<std::size_t>(k));
  centers.push_back(pts.positions[sample_cumulative(pts.weights, rng)]);
  std::vector<double> d2(n);
  while (static_cast<int>(centers.size()) < k) {
    std::vector<double> mass(n);
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = dist2(pts.positions[i], centers[0]);
      for (std::size_t c = 1; c < centers.size(); ++c)
        d2[i] = std::min(d2[i], dist2(pts.positions[i], centers[c]));
      mass[i] = pts.weights[i] * d2[i];
    }
    double total = 0.0;
    for (double m : mass) total += m;
    if (total > 0.0) {
      centers.push_back(pts.positions[sample_cumulative(mass, rng)]);
    } else {
      // all remaining mass on chosen positions; take any unchosen distinct one
      for (std::size_t i = 0; i < n; ++i) {
        if (pts.weights[i] <= 0.0) continue;
        bool chosen = false;
        for (const Point& c : centers)
          if (c.x == pts.positions[i].x && c.y == pts.positions[i].y) {
            chosen = true;
            break;
          }
        if (!chosen) {
          centers.push_back(pts.positions[i]);
          break;
        }
      }
    }
  }

  KmeansResult res;
  res.labels.assign(n, 0);
  auto assign = [&]() {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      int best = 0;
      double best_d = dist2(pts.positions[i], centers[0]);
      for (int c = 1; c < k; ++c) {
        const double d = dist2(pts.positions[i], centers[static_cast<std::size_t>(c)]);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (res.labels[i] != best) changed = true;
      res.labels[i] = best;
    }
    return changed;
  };
  auto objective = [&]() {
    double obj = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      obj += pts.weights[i] *
             dist2(pts.positions[i], centers[static_cast<std::size_t>(res.labels[i])]);
    return obj;
  };

  assign();
  res.objective_history.push_back(objective());

  for (int sweep = 0; sweep < max_iter; ++sweep) {
    // center update: weighted means
    std::vector<double> sx(static_cast<std::size_t>(k), 0.0);
    std::vector<double> sy(static_cast<std::size_t>(k), 0.0);
    std::vector<double> sw(static_cast<std::size_t>(k), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto c = static_cast<std::size_t>(res.labels[i]);
      sx[c] += pts.weights[i] * pts.positions[i].x;
      sy[c] += pts.weights[i] * pts.positions[i].y;
      sw[c] += pts.weights[i];
    }
    for (int c = 0; c < k; ++c) {
      const auto ci = static_cast<std::size_t>(c);
      if (sw[ci] > 0.0) centers[ci] = {sx[ci] / sw[ci], sy[ci] / sw[ci]};
      // weightless cluster keeps its center; repaired below if needed
    }

    // empty-cluster repair: reseed at the highest-contribution point
    for (int c = 0; c < k; ++c) {
      if (sw[static_cast<std::size_t>(c)] > 0.0) continue;
      double best_contrib = -1.0;
      std::size_t best_i = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const double contrib =
            pts.weights[i] *
            dist2(pts.positions[i], centers[static_cast<std::size_t>(res.labels[i])]);
        if (contrib > best_contrib) {
          best_contrib = contrib;
          best_i = i;
        }
      }
      centers[static_cast<std::size_t>(c)] = pts.positions[best_i];
    }

    const bool changed = assign();
    res.objective_history.push_back(objective());
    if (!changed) break;
  }

  res.centers = centers;
  res.objective = res.objective_history.back();
  return res;
}

}  // namespace l1loc
