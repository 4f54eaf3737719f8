#include "l1loc/localizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "l1loc/linalg.hpp"

namespace l1loc {

namespace {

double clip(double v, double lo, double hi) {
  return std::min(std::max(v, lo), hi);
}

std::uint64_t mix_seed(std::uint64_t seed, int iteration) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(iteration + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

void LocalizerConfig::validate() const {
  if (grid_granularity < 2) throw std::invalid_argument("G must be >= 2");
  if (half_width <= 0.0) throw std::invalid_argument("half_width must be > 0");
  if (iters_phase_one < 0 || iters_phase_two < 0 ||
      iters_phase_one + iters_phase_two < 1)
    throw std::invalid_argument("need at least one iteration");
  if (nu_min < 1 || nu_min > nu_max) throw std::invalid_argument("bad nu range");
  if (alpha_min <= 0.0 || alpha_min > alpha_max)
    throw std::invalid_argument("bad alpha range");
  if (beta_min <= 0.0 || beta_min > 1.0)
    throw std::invalid_argument("bad beta range");
  if (p_min <= 0.0 || p_min > p_max) throw std::invalid_argument("bad power range");
  if (grid_shrink <= 0.0 || grid_shrink >= 1.0)
    throw std::invalid_argument("grid_shrink must be in (0,1)");
  if (d_floor <= 0.0) throw std::invalid_argument("d_floor must be > 0");
}

LocalizerState init_state(const LocalizerConfig& cfg) {
  cfg.validate();
  LocalizerState st;
  st.n_targets = cfg.nu_min;
  st.estimates.assign(static_cast<std::size_t>(cfg.nu_min),
                      {0.0, 0.0, 0.5 * (cfg.p_min + cfg.p_max)});
  st.alpha = clip(2.0, cfg.alpha_min, cfg.alpha_max);
  st.beta = 1.0;
  st.mu = 1;
  st.phase = Phase::one;
  st.granularity = cfg.grid_granularity;
  return st;
}

GridState build_grid(const std::vector<TargetEstimate>& estimates, int G,
                     int iteration, const LocalizerConfig& cfg,
                     const Eigen::VectorXd& prev_s) {
  if (estimates.empty() || G < 1)
    throw std::invalid_argument("build_grid: need estimates and G >= 1");
  GridState grid;
  grid.granularity = G;
  grid.phase = G == 1 ? Phase::two : Phase::one;

  if (G == 1) {
    for (const auto& e : estimates) grid.points.push_back({e.x, e.y, e.p});
    grid.weights.assign(estimates.size(), 1.0);
    grid.subgrid_halfwidth = 0.0;
    return grid;
  }

  const double w = cfg.half_width;
  const double h = std::max(
      w * std::pow(cfg.grid_shrink, iteration - 1), 4.0 * cfg.delta());
  grid.subgrid_halfwidth = h;
  for (const auto& e : estimates) {
    for (int iy = 0; iy < G; ++iy) {
      for (int ix = 0; ix < G; ++ix) {
        const double gx = e.x - h + 2.0 * h * ix / (G - 1);
        const double gy = e.y - h + 2.0 * h * iy / (G - 1);
        grid.points.push_back({clip(gx, -w, w), clip(gy, -w, w), e.p});
      }
    }
  }

  const auto m = static_cast<Eigen::Index>(grid.points.size());
  if (prev_s.size() == m) {
    grid.weights.assign(prev_s.data(), prev_s.data() + m);
  } else {
    const double uniform =
        static_cast<double>(estimates.size()) / static_cast<double>(m);
    grid.weights.assign(grid.points.size(), uniform);
  }
  return grid;
}

Linearization linearize(const GridState& grid,
                        const std::vector<Point>& sensors,
                        const Eigen::VectorXd& r, double alpha, double beta,
                        double d_floor) {
  if (beta <= 0.0) throw std::invalid_argument("linearize: beta must be > 0");
  const auto k_count = static_cast<Eigen::Index>(sensors.size());
  const auto m_count = static_cast<Eigen::Index>(grid.points.size());
  const double log_beta = std::log(beta);

  Linearization lin;
  lin.f = r;
  lin.u = Eigen::VectorXd::Zero(k_count);
  lin.v = Eigen::VectorXd::Zero(k_count);
  lin.a = Eigen::MatrixXd::Zero(k_count, m_count);
  lin.b = Eigen::MatrixXd::Zero(k_count, m_count);
  lin.c = Eigen::MatrixXd::Zero(k_count, m_count);

  for (Eigen::Index k = 0; k < k_count; ++k) {
    const Point& sk = sensors[static_cast<std::size_t>(k)];
    for (Eigen::Index m = 0; m < m_count; ++m) {
      const GridPoint& gp = grid.points[static_cast<std::size_t>(m)];
      const double wm = grid.weights[static_cast<std::size_t>(m)];
      const double raw = std::hypot(gp.x - sk.x, gp.y - sk.y);
      const double d = std::max(raw, d_floor);
      const double kernel = std::pow(d, -alpha) * std::pow(beta, d);
      const double g = wm * gp.p * kernel;

      lin.f(k) -= g;
      lin.c(k, m) = -wm * kernel;
      lin.u(k) += g * std::log(d);
      lin.v(k) -= g * d / beta;
      if (raw > d_floor) {
        const double dgain = -alpha / d + log_beta;  // d(ln kernel)/dd
        lin.a(k, m) = -g * dgain * (gp.x - sk.x) / d;
        lin.b(k, m) = -g * dgain * (gp.y - sk.y) / d;
      }
    }
  }
  return lin;
}

QpProblem assemble_qp(const Linearization& lin, const Eigen::MatrixXd& q,
                      const Eigen::MatrixXd& psi, const Eigen::VectorXd& r,
                      const GridState& grid, double alpha, double beta,
                      const LocalizerConfig& cfg, int mu, int nu) {
  const auto k_count = lin.f.size();
  const auto m_count = static_cast<Eigen::Index>(grid.points.size());
  const double delta = cfg.delta();

  QpProblem p;
  if (mu == 1) {
    const Eigen::Index rank = q.rows();
    const Eigen::Index n = 4 * m_count + 3;
    p.A = Eigen::MatrixXd::Zero(k_count + rank, n);
    p.b = Eigen::VectorXd::Zero(k_count + rank);
    p.lb = Eigen::VectorXd::Zero(n);
    p.ub = Eigen::VectorXd::Zero(n);

    p.A.block(0, m_count, k_count, m_count) = lin.a;
    p.A.block(0, 2 * m_count, k_count, m_count) = lin.b;
    p.A.block(0, 3 * m_count, k_count, m_count) = lin.c;
    p.A.col(4 * m_count).head(k_count) = lin.u;
    p.A.col(4 * m_count + 1).head(k_count) = lin.v;
    p.b.head(k_count) = -lin.f;

    p.A.block(k_count, 0, rank, m_count) = q;
    p.b.tail(rank) = psi * r;

    for (Eigen::Index m = 0; m < m_count; ++m) {
      p.lb(m) = 0.0;
      p.ub(m) = 1.0;
      p.eq_mask.push_back(static_cast<int>(m));
    }
    p.has_eq = true;
    p.eq_value = static_cast<double>(nu);
    p.lb(4 * m_count + 2) = static_cast<double>(nu);  // pinned integer column
    p.ub(4 * m_count + 2) = static_cast<double>(nu);

    for (Eigen::Index m = 0; m < m_count; ++m) {
      p.lb(m_count + m) = -delta;
      p.ub(m_count + m) = delta;
      p.lb(2 * m_count + m) = -delta;
      p.ub(2 * m_count + m) = delta;
      const double pm = grid.points[static_cast<std::size_t>(m)].p;
      p.lb(3 * m_count + m) = cfg.p_min - pm;
      p.ub(3 * m_count + m) = cfg.p_max - pm;
    }
    p.lb(4 * m_count) = cfg.alpha_min - alpha;
    p.ub(4 * m_count) = cfg.alpha_max - alpha;
    p.lb(4 * m_count + 1) = cfg.beta_min - beta;
    p.ub(4 * m_count + 1) = 1.0 - beta;
  } else {
    const Eigen::Index n = 3 * m_count + 2;
    p.A = Eigen::MatrixXd::Zero(k_count, n);
    p.b = -lin.f;
    p.lb = Eigen::VectorXd::Zero(n);
    p.ub = Eigen::VectorXd::Zero(n);

    p.A.block(0, 0, k_count, m_count) = lin.a;
    p.A.block(0, m_count, k_count, m_count) = lin.b;
    p.A.block(0, 2 * m_count, k_count, m_count) = lin.c;
    p.A.col(3 * m_count) = lin.u;
    p.A.col(3 * m_count + 1) = lin.v;

    for (Eigen::Index m = 0; m < m_count; ++m) {
      p.lb(m) = -delta;
      p.ub(m) = delta;
      p.lb(m_count + m) = -delta;
      p.ub(m_count + m) = delta;
      const double pm = grid.points[static_cast<std::size_t>(m)].p;
      p.lb(2 * m_count + m) = cfg.p_min - pm;
      p.ub(2 * m_count + m) = cfg.p_max - pm;
    }
    p.lb(3 * m_count) = cfg.alpha_min - alpha;
    p.ub(3 * m_count) = cfg.alpha_max - alpha;
    p.lb(3 * m_count + 1) = cfg.beta_min - beta;
    p.ub(3 * m_count + 1) = 1.0 - beta;
  }
  return p;
}

std::vector<TargetEstimate> cluster_and_average(const QpSolution& sol,
                                                const GridState& grid, int m0,
                                                int nu_star,
                                                std::uint64_t seed) {
  const auto m_count = static_cast<Eigen::Index>(grid.points.size());
  std::vector<TargetEstimate> out;

  if (grid.phase == Phase::two) {
    // identity partition: one estimate per grid point plus its offsets
    for (Eigen::Index m = 0; m < m_count; ++m) {
      const GridPoint& gp = grid.points[static_cast<std::size_t>(m)];
      out.push_back({gp.x + sol.z(m), gp.y + sol.z(m_count + m),
                     gp.p + sol.z(2 * m_count + m)});
    }
    return out;
  }

  if (nu_star < 1) throw std::invalid_argument("cluster_and_average: nu_star < 1");

  auto corrected = [&](Eigen::Index m) {
    const GridPoint& gp = grid.points[static_cast<std::size_t>(m)];
    return TargetEstimate{gp.x + sol.z(m_count + m),
                          gp.y + sol.z(2 * m_count + m),
                          gp.p + sol.z(3 * m_count + m)};
  };

  // top-M0 activations, ties toward the lower index
  std::vector<Eigen::Index> order(static_cast<std::size_t>(m_count));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return sol.z(a) > sol.z(b);
  });
  const auto take = std::min<std::size_t>(static_cast<std::size_t>(m0),
                                          order.size());
  std::vector<Eigen::Index> top(order.begin(),
                                order.begin() + static_cast<std::ptrdiff_t>(take));

  WeightedPoints pts;
  for (Eigen::Index m : top) {
    const TargetEstimate e = corrected(m);
    pts.positions.push_back({e.x, e.y});
    pts.weights.push_back(std::max(sol.z(m), 0.0));
  }

  // count distinct positively weighted candidates
  int distinct = 0;
  for (std::size_t i = 0; i < pts.positions.size(); ++i) {
    if (pts.weights[i] <= 0.0) continue;
    bool dup = false;
    for (std::size_t j = 0; j < i; ++j)
      if (pts.weights[j] > 0.0 && pts.positions[i].x == pts.positions[j].x &&
          pts.positions[i].y == pts.positions[j].y) {
        dup = true;
        break;
      }
    if (!dup) ++distinct;
  }

  if (distinct < nu_star) {
    // degenerate activation pattern: top-nu_star points as singleton clusters
    for (int n = 0; n < nu_star && n < static_cast<int>(order.size()); ++n)
      out.push_back(corrected(order[static_cast<std::size_t>(n)]));
    return out;
  }

  const KmeansResult km = kmeans(pts, nu_star, seed);
  std::vector<double> sx(static_cast<std::size_t>(nu_star), 0.0);
  std::vector<double> sy(static_cast<std::size_t>(nu_star), 0.0);
  std::vector<double> sp(static_cast<std::size_t>(nu_star), 0.0);
  std::vector<double> sw(static_cast<std::size_t>(nu_star), 0.0);
  for (std::size_t i = 0; i < top.size(); ++i) {
    const auto c = static_cast<std::size_t>(km.labels[i]);
    const TargetEstimate e = corrected(top[i]);
    sx[c] += pts.weights[i] * e.x;
    sy[c] += pts.weights[i] * e.y;
    sp[c] += pts.weights[i] * e.p;
    sw[c] += pts.weights[i];
  }
  for (int c = 0; c < nu_star; ++c) {
    const auto ci = static_cast<std::size_t>(c);
    if (sw[ci] <= 0.0) {
      // weightless cluster: fall back to singleton estimates
      out.clear();
      for (int n = 0; n < nu_star; ++n)
        out.push_back(corrected(order[static_cast<std::size_t>(n)]));
      return out;
    }
    out.push_back({sx[ci] / sw[ci], sy[ci] / sw[ci], sp[ci] / sw[ci]});
  }
  return out;
}

IterationRecord step(LocalizerState& state, const std::vector<Point>& sensors,
                     const Eigen::VectorXd& r, const LocalizerConfig& cfg,
                     int iteration) {
  if (iteration == cfg.iters_phase_one + 1) {
    state.mu = 0;
    state.granularity = 1;
    state.phase = Phase::two;
  }

  const GridState grid =
      build_grid(state.estimates, state.granularity, iteration, cfg, state.prev_s);
  const auto m_count = static_cast<Eigen::Index>(grid.points.size());

  const Linearization lin =
      linearize(grid, sensors, r, state.alpha, state.beta, cfg.d_floor);

  QpSolution sol;
  int nu_star = state.n_targets;
  if (state.phase == Phase::one) {
    std::vector<Point> positions;
    for (const auto& gp : grid.points) positions.push_back({gp.x, gp.y});
    PathLossParams params;
    params.alpha = state.alpha;
    params.beta = state.beta;
    params.alpha_min = cfg.alpha_min;
    params.alpha_max = cfg.alpha_max;
    params.beta_min = cfg.beta_min;
    const Eigen::MatrixXd phi = build_sensing_matrix(
        positions, sensors, params, cfg.p_min, cfg.p_max, cfg.d_floor);
    const PsiQ pre = build_psi(phi);

    auto builder = [&](int nu) {
      return assemble_qp(lin, pre.q, pre.psi, r, grid, state.alpha, state.beta,
                         cfg, 1, nu);
    };
    try {
      std::tie(sol, nu_star) =
          solve_with_integer_nu(builder, cfg.nu_min, cfg.nu_max);
    } catch (const std::exception& e) {
      throw std::runtime_error("iteration " + std::to_string(iteration) +
                               ": " + e.what());
    }
    state.prev_s = sol.z.head(m_count);
  } else {
    const QpProblem p = assemble_qp(lin, {}, {}, r, grid, state.alpha,
                                    state.beta, cfg, 0, state.n_targets);
    sol = solve_qp(p);
    nu_star = state.n_targets;
  }

  const int n_vars = state.phase == Phase::one
                         ? static_cast<int>(4 * m_count + 3)
                         : static_cast<int>(3 * m_count + 2);
  const int bound = 4 * cfg.nu_max * cfg.m0() + 3;
  if (n_vars > bound)
    throw std::logic_error("assembled QP exceeds the variable-count bound");
  state.max_qp_variables = std::max(state.max_qp_variables, n_vars);

  state.estimates = cluster_and_average(sol, grid, cfg.m0(), nu_star,
                                        mix_seed(cfg.seed, iteration));
  for (auto& e : state.estimates) e.p = clip(e.p, cfg.p_min, cfg.p_max);
  state.n_targets = nu_star;

  const Eigen::Index dalpha_idx =
      state.phase == Phase::one ? 4 * m_count : 3 * m_count;
  state.alpha =
      clip(state.alpha + sol.z(dalpha_idx), cfg.alpha_min, cfg.alpha_max);
  state.beta = clip(state.beta + sol.z(dalpha_idx + 1), cfg.beta_min, 1.0);

  IterationRecord rec;
  rec.iteration = iteration;
  rec.phase = state.phase;
  rec.nu_star = nu_star;
  rec.objective = sol.objective;
  rec.alpha = state.alpha;
  rec.beta = state.beta;
  rec.estimates = state.estimates;
  return rec;
}

EstimateReport run(const std::vector<Point>& sensors, const Eigen::VectorXd& r,
                   const LocalizerConfig& cfg) {
  if (sensors.empty()) throw std::invalid_argument("run: need at least one sensor");
  if (r.size() != static_cast<Eigen::Index>(sensors.size()))
    throw std::invalid_argument("run: rss length must match sensor count");

  LocalizerState state = init_state(cfg);
  EstimateReport report;
  const int total = cfg.iters_phase_one + cfg.iters_phase_two;
  for (int i = 1; i <= total; ++i)
    report.trace.push_back(step(state, sensors, r, cfg, i));

  report.targets = state.estimates;
  report.n_hat = state.n_targets;
  report.alpha_hat = state.alpha;
  report.beta_hat = state.beta;
  report.max_qp_variables = state.max_qp_variables;
  return report;
}

}  // namespace l1loc
