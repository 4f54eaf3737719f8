#pragma once

#include <cstdint>
#include <vector>

#include "l1loc/model.hpp"

namespace l1loc {

struct WeightedPoints {
  std::vector<Point> positions;
  std::vector<double> weights;  // nonnegative, same length
};

struct KmeansResult {
  std::vector<int> labels;        // cluster index per point
  std::vector<Point> centers;     // weighted cluster means
  double objective = 0.0;         // weighted within-cluster squared distance
  std::vector<double> objective_history;  // one entry per Lloyd sweep
};

// Weighted k-means: k-means++ seeding (weighted D^2 sampling) followed by
// Lloyd iterations. Deterministic given the seed. Throws when k exceeds the
// number of distinct positively weighted points.
KmeansResult kmeans(const WeightedPoints& pts, int k, std::uint64_t seed,
                    int max_iter = 100);

}  // namespace l1loc
