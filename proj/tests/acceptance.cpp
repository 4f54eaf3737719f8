// End-to-end acceptance suite. Each check prints one PASS/FAIL line; the
// process exits nonzero if any check fails. Reference results come from
// independent oracles (finite differences, Gram-Schmidt-free projections,
// long-run projected gradient, Monte Carlo), never from the code under test.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "l1loc/harness.hpp"
#include "l1loc/linalg.hpp"
#include "l1loc/localizer.hpp"
#include "l1loc/model.hpp"
#include "l1loc/qp.hpp"
#include "oracles.hpp"

using namespace l1loc;

namespace {

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  }
};

int g_failures = 0;

void report(int index, const char* name, bool ok, double secs,
            const std::string& detail) {
  std::printf("[%2d] %-52s %s (%.2f s)%s%s\n", index, name,
              ok ? "PASS" : "FAIL", secs, detail.empty() ? "" : "  -- ",
              detail.c_str());
  if (!ok) ++g_failures;
}

// ---------------------------------------------------------------------------
// 1. Linearization coefficients vs central finite differences of the residual.

// Independent residual evaluator: f_k = r_k - sum_m w_m p_m d^{-alpha} beta^d.
Eigen::VectorXd residual_oracle(const std::vector<Point>& sensors,
                                const Eigen::VectorXd& r,
                                const std::vector<double>& gx,
                                const std::vector<double>& gy,
                                const std::vector<double>& gp,
                                const std::vector<double>& gw, double alpha,
                                double beta) {
  const auto kc = static_cast<Eigen::Index>(sensors.size());
  Eigen::VectorXd f = r;
  for (Eigen::Index k = 0; k < kc; ++k) {
    for (std::size_t m = 0; m < gx.size(); ++m) {
      double d = std::hypot(gx[m] - sensors[static_cast<std::size_t>(k)].x,
                            gy[m] - sensors[static_cast<std::size_t>(k)].y);
      d = std::max(d, 1.0);
      f(k) -= gw[m] * gp[m] * std::pow(d, -alpha) * std::pow(beta, d);
    }
  }
  return f;
}

bool check_gradient_fidelity(std::string& detail) {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  long checked = 0;

  for (int trial = 0; trial < 100; ++trial) {
    const int kc = 6 + static_cast<int>(rng() % 7);
    const int mc = 4 + static_cast<int>(rng() % 9);
    const double alpha = 1.8 + unit(rng);
    const double beta = 0.95 + 0.045 * unit(rng);

    std::vector<Point> sensors;
    for (int k = 0; k < kc; ++k) {
      const double th = 2.0 * M_PI * (k + unit(rng)) / kc;
      const double rad = 12.0 + 6.0 * unit(rng);
      sensors.push_back({rad * std::cos(th), rad * std::sin(th)});
    }

    GridState grid;
    grid.granularity = 3;
    grid.phase = Phase::one;
    std::vector<double> gx, gy, gp, gw;
    for (int m = 0; m < mc; ++m) {
      gx.push_back(-4.0 + 8.0 * unit(rng));
      gy.push_back(-4.0 + 8.0 * unit(rng));
      gp.push_back(1.0 + 2.0 * unit(rng));
      gw.push_back(0.3 + 0.7 * unit(rng));
      grid.points.push_back({gx[static_cast<std::size_t>(m)],
                             gy[static_cast<std::size_t>(m)],
                             gp[static_cast<std::size_t>(m)]});
      grid.weights.push_back(gw[static_cast<std::size_t>(m)]);
    }

    Eigen::VectorXd r(kc);
    for (int k = 0; k < kc; ++k) r(k) = 0.5 + unit(rng);

    const Linearization lin = linearize(grid, sensors, r, alpha, beta);
    const Eigen::VectorXd f0 =
        residual_oracle(sensors, r, gx, gy, gp, gw, alpha, beta);
    if ((lin.f - f0).lpNorm<Eigen::Infinity>() >
        1e-12 * std::max(1.0, f0.lpNorm<Eigen::Infinity>()))
      return false;

    const double scale = f0.cwiseAbs().maxCoeff();
    auto agree = [&](double an, double fd) {
      const double denom = std::max({std::abs(an), std::abs(fd), 1e-7 * scale});
      const double rel = std::abs(an - fd) / denom;
      worst = std::max(worst, rel);
      ++checked;
      return rel <= 1e-6;
    };

    // Richardson-extrapolated central difference, O(h^4). The larger step
    // keeps roundoff small even for coefficients near geometric cancellation.
    auto central = [&](auto&& mutate, double h) {
      const Eigen::VectorXd d1 = (mutate(h) - mutate(-h)) / (2.0 * h);
      const Eigen::VectorXd d2 =
          (mutate(0.5 * h) - mutate(-0.5 * h)) / h;
      return Eigen::VectorXd(((4.0 * d2 - d1) / 3.0).eval());
    };

    for (int m = 0; m < mc; ++m) {
      const auto mm = static_cast<std::size_t>(m);
      const double hx = 1e-2;
      Eigen::VectorXd da = central(
          [&](double h) {
            auto x2 = gx;
            x2[mm] += h;
            return residual_oracle(sensors, r, x2, gy, gp, gw, alpha, beta);
          },
          hx);
      const double hy = 1e-2;
      Eigen::VectorXd db = central(
          [&](double h) {
            auto y2 = gy;
            y2[mm] += h;
            return residual_oracle(sensors, r, gx, y2, gp, gw, alpha, beta);
          },
          hy);
      const double hp = 1e-3;
      Eigen::VectorXd dc = central(
          [&](double h) {
            auto p2 = gp;
            p2[mm] += h;
            return residual_oracle(sensors, r, gx, gy, p2, gw, alpha, beta);
          },
          hp);
      for (int k = 0; k < kc; ++k) {
        if (!agree(lin.a(k, m), da(k))) return false;
        if (!agree(lin.b(k, m), db(k))) return false;
        if (!agree(lin.c(k, m), dc(k))) return false;
      }
    }

    Eigen::VectorXd du = central(
        [&](double h) {
          return residual_oracle(sensors, r, gx, gy, gp, gw, alpha + h, beta);
        },
        1e-3 * alpha);
    Eigen::VectorXd dv = central(
        [&](double h) {
          return residual_oracle(sensors, r, gx, gy, gp, gw, alpha, beta + h);
        },
        1e-4);
    for (int k = 0; k < kc; ++k) {
      if (!agree(lin.u(k), du(k))) return false;
      if (!agree(lin.v(k), dv(k))) return false;
    }
  }

  std::ostringstream os;
  os << checked << " coefficients, worst rel err " << worst;
  detail = os.str();
  return true;
}

// ---------------------------------------------------------------------------
// 2. Pre-processing: orthonormal rows and Psi(Phi s) = Q s.

bool check_preprocessing(std::string& detail) {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst_orth = 0.0, worst_commute = 0.0;

  for (int trial = 0; trial < 50; ++trial) {
    const int kc = 4 + static_cast<int>(rng() % 17);   // K <= 20
    const int mc = 10 + static_cast<int>(rng() % 191); // M <= 200
    std::vector<Point> sensors, grid;
    for (int k = 0; k < kc; ++k)
      sensors.push_back({-100.0 + 200.0 * unit(rng), -100.0 + 200.0 * unit(rng)});
    for (int m = 0; m < mc; ++m)
      grid.push_back({-100.0 + 200.0 * unit(rng), -100.0 + 200.0 * unit(rng)});
    PathLossParams params;
    params.alpha = 1.8 + unit(rng);
    params.beta = 0.96 + 0.04 * unit(rng);
    const Eigen::MatrixXd phi =
        build_sensing_matrix(grid, sensors, params, 1.0, 3.0);
    const PsiQ pre = build_psi(phi);

    const Eigen::Index rank = pre.q.rows();
    const double orth_err =
        (pre.q * pre.q.transpose() -
         Eigen::MatrixXd::Identity(rank, rank)).lpNorm<Eigen::Infinity>();
    worst_orth = std::max(worst_orth, orth_err);
    if (orth_err > 1e-8) return false;

    Eigen::VectorXd s(mc);
    for (int m = 0; m < mc; ++m) s(m) = unit(rng);
    const Eigen::VectorXd lhs = pre.psi * (phi * s);
    const Eigen::VectorXd rhs = pre.q * s;
    const double commute = (lhs - rhs).norm();
    worst_commute = std::max(worst_commute, commute / rhs.norm());
    if (commute > 1e-10 * rhs.norm()) return false;
  }

  std::ostringstream os;
  os << "worst row-orthonormality " << worst_orth << ", worst relative mismatch "
     << worst_commute;
  detail = os.str();
  return true;
}

// ---------------------------------------------------------------------------
// 3. QP solver vs a long-run projected-gradient oracle on unit-scaled data.

QpProblem random_unit_qp(std::mt19937_64& rng, bool with_eq) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int n = 2 + static_cast<int>(rng() % 9);
  const int rows = 2 + static_cast<int>(rng() % 10);
  QpProblem p;
  p.A = Eigen::MatrixXd::NullaryExpr(rows, n, [&]() { return u(rng); });
  p.b = Eigen::VectorXd::NullaryExpr(rows, [&]() { return u(rng); });
  const double scale = std::max(p.A.norm(), 1e-9);
  p.A /= scale;
  p.b /= scale;
  p.lb = Eigen::VectorXd::NullaryExpr(n, [&]() { return -0.5 + 0.5 * u(rng); });
  p.ub = Eigen::VectorXd::NullaryExpr(n, [&]() { return 0.5 + 0.5 * u(rng); });
  if (with_eq) {
    double sum_lb = 0.0, sum_ub = 0.0;
    for (int i = 0; i < n; i += 2) {
      p.eq_mask.push_back(i);
      sum_lb += p.lb(i);
      sum_ub += p.ub(i);
    }
    p.has_eq = true;
    p.eq_value = sum_lb + 0.6 * (sum_ub - sum_lb);
  }
  return p;
}

bool check_qp_oracle(std::string& detail) {
  std::mt19937_64 rng(303);
  double worst_gap = 0.0, worst_kkt = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const QpProblem p = random_unit_qp(rng, trial % 2 == 0);
    const QpSolution s = solve_qp(p);
    if (s.status != QpStatus::optimal) return false;
    if ((s.z - s.z.cwiseMax(p.lb).cwiseMin(p.ub)).lpNorm<Eigen::Infinity>() >
        1e-8)
      return false;
    if (p.has_eq) {
      double sum = 0.0;
      for (int i : p.eq_mask) sum += s.z(i);
      if (std::abs(sum - p.eq_value) > 1e-8) return false;
    }
    worst_kkt = std::max(worst_kkt, s.kkt_residual);
    if (s.kkt_residual > 1e-6) return false;

    const Eigen::VectorXd zo = oracle::projected_gradient(p, 1000000);
    const double gap = std::abs(s.objective - oracle::objective(p, zo));
    worst_gap = std::max(worst_gap, gap);
    if (gap > 1e-6) return false;
  }
  std::ostringstream os;
  os << "worst objective gap " << worst_gap << ", worst KKT residual "
     << worst_kkt;
  detail = os.str();
  return true;
}

// ---------------------------------------------------------------------------
// 4. Cardinality enumeration equals the explicit per-value minimum.

bool check_enumeration(std::string& detail) {
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 4 + static_cast<int>(rng() % 5);
    const int rows = 3 + static_cast<int>(rng() % 5);
    const Eigen::MatrixXd a =
        Eigen::MatrixXd::NullaryExpr(rows, n, [&]() { return u(rng); });
    const Eigen::VectorXd b =
        Eigen::VectorXd::NullaryExpr(rows, [&]() { return u(rng); });
    auto builder = [&](int nu) {
      QpProblem p;
      p.A = a;
      p.b = b;
      p.lb = Eigen::VectorXd::Zero(n);
      p.ub = Eigen::VectorXd::Ones(n);
      for (int i = 0; i < n; ++i) p.eq_mask.push_back(i);
      p.has_eq = true;
      p.eq_value = nu;
      return p;
    };
    const int hi = std::min(n, 1 + static_cast<int>(rng() % 4) + 1);
    const auto [sol, nu_star] = solve_with_integer_nu(builder, 1, hi);

    double best = std::numeric_limits<double>::infinity();
    int best_nu = 0;
    for (int v = 1; v <= hi; ++v) {
      const double obj = solve_qp(builder(v)).objective;
      if (obj < best) {
        best = obj;
        best_nu = v;
      }
    }
    if (nu_star != best_nu) return false;
    if (std::abs(sol.objective - best) > 1e-9) return false;
  }
  detail = "20 builders, exact argmin and objective agreement";
  return true;
}

// ---------------------------------------------------------------------------
// 5. Variable-count bound over a full run that reaches the cardinality cap.

bool check_variable_bound(std::string& detail) {
  RunConfig cfg = parse_config(R"({
    "area_half_width": 5.0,
    "sensors": {"layout": "grid", "count": 25},
    "targets": {"count": 3, "min_separation": 2.0},
    "power": {"min": 1.6, "max": 2.4},
    "shadowing_db": 0.0,
    "true_model": {"alpha": 2.5, "beta": 0.99},
    "bounds": {"alpha": [1.5, 4.0], "beta_min": 0.9, "nu": [1, 3]},
    "localizer": {"G": 5, "I1": 4, "I2": 2},
    "trials": 1,
    "seed": 3
  })");
  const Scenario sc = generate_scenario(cfg, cfg.seed);
  const RssVector r = generate_rss(sc, split_seed(cfg.seed, 1));
  const EstimateReport rep =
      run(sc.sensors, r, cfg.localizer(split_seed(cfg.seed, 2)));
  const int bound = 4 * 3 * 25 + 3;  // nu_max * G^2 grid points per target
  std::ostringstream os;
  os << "largest assembled QP had " << rep.max_qp_variables
     << " variables, bound " << bound;
  detail = os.str();
  return rep.max_qp_variables <= bound && rep.max_qp_variables >= 103;
}

// ---------------------------------------------------------------------------
// 6. Noiseless recovery with the channel model pinned to the truth.

bool check_noiseless_recovery(std::string& detail) {
  Scenario sc;
  sc.half_width = 100.0;
  sc.sigma_db = 0.0;
  sc.truth.alpha = 2.0;
  sc.truth.beta = 1.0;
  sc.p_min = 1.0;
  sc.p_max = 3.0;
  for (int iy = 0; iy < 4; ++iy)
    for (int ix = 0; ix < 4; ++ix)
      sc.sensors.push_back(
          {-100.0 + 200.0 * ix / 3.0, -100.0 + 200.0 * iy / 3.0});
  sc.targets = {{{50.0, -50.0}, 2.3}};  // on a first-iteration grid node

  const RssVector r = generate_rss(sc, 11);

  LocalizerConfig lc;
  lc.grid_granularity = 5;
  lc.half_width = 100.0;
  lc.iters_phase_one = 5;
  lc.iters_phase_two = 5;
  lc.nu_min = 1;
  lc.nu_max = 1;
  lc.alpha_min = 2.0;
  lc.alpha_max = 2.0;
  lc.beta_min = 1.0;
  lc.p_min = 1.0;
  lc.p_max = 3.0;
  lc.seed = 12;

  const EstimateReport rep = run(sc.sensors, r, lc);
  if (rep.n_hat != 1) return false;
  const double pos_err = std::hypot(rep.targets[0].x - 50.0,
                                    rep.targets[0].y + 50.0);
  const double pow_err = std::abs(rep.targets[0].p - 2.3);
  const double two_delta = 2.0 * lc.delta();
  std::ostringstream os;
  os << "position error " << pos_err << " (limit " << two_delta
     << "), power error " << pow_err << " (limit 0.1)";
  detail = os.str();
  return pos_err <= two_delta && pow_err <= 0.05 * (3.0 - 1.0);
}

// ---------------------------------------------------------------------------
// 7. Joint estimation smoke test: cardinality, positions and the path-loss
//    exponent recovered from noiseless readings of two sources.

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

bool check_joint_estimation(std::string& detail) {
  RunConfig cfg = parse_config(R"({
    "area_half_width": 5.0,
    "sensors": {"layout": "grid", "count": 25},
    "targets": {"count": 2, "min_separation": 2.5},
    "power": {"min": 1.6, "max": 2.4},
    "shadowing_db": 0.0,
    "true_model": {"alpha": 2.5, "beta": 0.99},
    "bounds": {"alpha": [1.5, 4.0], "beta_min": 0.9, "nu": [1, 3]},
    "localizer": {"G": 5, "I1": 1, "I2": 12},
    "trials": 20,
    "seed": 1
  })");
  const TrialBatch batch = run_trials(cfg);

  int correct = 0;
  std::vector<double> pos, aerr;
  for (const TrialResult& t : batch.trials) {
    if (t.status != "ok") continue;
    if (t.n_hat == 2) {
      ++correct;
      pos.push_back(t.position_rmse);
      aerr.push_back(t.alpha_error);
    }
  }
  const double w10 = cfg.area_half_width / 10.0;
  std::ostringstream os;
  os << "correct cardinality " << correct << "/20";
  if (correct > 0)
    os << ", median position RMSE " << median(pos) << " (limit " << w10
       << "), median alpha error " << median(aerr) << " (limit 0.5)";
  detail = os.str();
  return correct >= 16 && !pos.empty() && median(pos) <= w10 &&
         median(aerr) <= 0.5;
}

// ---------------------------------------------------------------------------
// 8. Log-normal moment matching: analytic round trip plus Monte Carlo.

bool check_moment_matching(std::string& detail) {
  // single term: the "sum" is the variable itself
  {
    const LogNormalMoments one = fenton_wilkinson({{0.4, 0.7}});
    if (std::abs(one.mu - 0.4) > 1e-12 || std::abs(one.sigma - 0.7) > 1e-12)
      return false;
  }

  const std::vector<LogNormalMoments> terms = {
      {0.1, 0.3}, {0.3, 0.4}, {-0.2, 0.25}};
  const LogNormalMoments fw = fenton_wilkinson(terms);
  const double fw_mean = std::exp(fw.mu + 0.5 * fw.sigma * fw.sigma);
  const double fw_var = fw_mean * fw_mean * (std::exp(fw.sigma * fw.sigma) - 1.0);

  std::mt19937_64 rng(808);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const long n = 10000000;
  double sum = 0.0, sum_sq = 0.0;
  for (long i = 0; i < n; ++i) {
    double x = 0.0;
    for (const LogNormalMoments& t : terms)
      x += std::exp(t.mu + t.sigma * gauss(rng));
    sum += x;
    sum_sq += x * x;
  }
  const double mc_mean = sum / static_cast<double>(n);
  const double mc_var =
      sum_sq / static_cast<double>(n) - mc_mean * mc_mean;

  const double mean_err = std::abs(fw_mean - mc_mean) / mc_mean;
  const double var_err = std::abs(fw_var - mc_var) / mc_var;
  std::ostringstream os;
  os << "mean rel err " << mean_err << ", variance rel err " << var_err;
  detail = os.str();
  return mean_err <= 0.01 && var_err <= 0.01;
}

// ---------------------------------------------------------------------------
// 9. Clustering: monotone sweeps and exact recovery of a planted partition.

bool check_clustering(std::string& detail) {
  std::mt19937_64 rng(909);
  std::uniform_real_distribution<double> coord(-50.0, 50.0);
  std::uniform_real_distribution<double> weight(0.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    WeightedPoints pts;
    const int n = 8 + static_cast<int>(rng() % 40);
    for (int i = 0; i < n; ++i) {
      pts.positions.push_back({coord(rng), coord(rng)});
      pts.weights.push_back(weight(rng));
    }
    const int k = 1 + static_cast<int>(rng() % 4);
    const KmeansResult res = kmeans(pts, k, rng());
    for (std::size_t i = 1; i < res.objective_history.size(); ++i)
      if (res.objective_history[i] > res.objective_history[i - 1] + 1e-9)
        return false;
  }

  // planted partition: three tight groups far apart
  WeightedPoints pts;
  std::uniform_real_distribution<double> jitter(-0.5, 0.5);
  const Point centers[3] = {{0.0, 0.0}, {60.0, 0.0}, {0.0, 60.0}};
  for (int c = 0; c < 3; ++c)
    for (int i = 0; i < 10; ++i) {
      pts.positions.push_back(
          {centers[c].x + jitter(rng), centers[c].y + jitter(rng)});
      pts.weights.push_back(0.5 + 0.1 * i);
    }
  const KmeansResult res = kmeans(pts, 3, 17);
  for (int c = 0; c < 3; ++c) {
    const int label = res.labels[static_cast<std::size_t>(10 * c)];
    for (int i = 1; i < 10; ++i)
      if (res.labels[static_cast<std::size_t>(10 * c + i)] != label)
        return false;
  }
  if (res.labels[0] == res.labels[10] || res.labels[0] == res.labels[20] ||
      res.labels[10] == res.labels[20])
    return false;

  detail = "100 monotone runs, planted partition recovered";
  return true;
}

// ---------------------------------------------------------------------------
// 10. Byte determinism of the simulation outputs.

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool check_determinism(std::string& detail) {
  RunConfig cfg = parse_config(R"({
    "area_half_width": 5.0,
    "sensors": {"layout": "grid", "count": 25},
    "targets": {"count": 2, "min_separation": 2.5},
    "power": {"min": 1.6, "max": 2.4},
    "shadowing_db": 2.0,
    "true_model": {"alpha": 2.5, "beta": 0.99},
    "bounds": {"alpha": [1.5, 4.0], "beta_min": 0.9, "nu": [1, 3]},
    "localizer": {"G": 5, "I1": 1, "I2": 6},
    "trials": 3,
    "seed": 21
  })");
  const std::string c1 = "acceptance_run_a.csv", c2 = "acceptance_run_b.csv";
  const std::string t1 = "acceptance_run_a.jsonl", t2 = "acceptance_run_b.jsonl";
  simulate_to_files(cfg, c1, t1);
  simulate_to_files(cfg, c2, t2);
  const bool same_csv = slurp(c1) == slurp(c2);
  const bool same_trace = slurp(t1) == slurp(t2) && !slurp(t1).empty();
  std::remove(c1.c_str());
  std::remove(c2.c_str());
  std::remove(t1.c_str());
  std::remove(t2.c_str());
  detail = std::string("CSV ") + (same_csv ? "identical" : "differs") +
           ", trace " + (same_trace ? "identical" : "differs");
  return same_csv && same_trace;
}

using Check = bool (*)(std::string&);

void run_check(int index, const char* name, Check fn, double time_limit) {
  Timer t;
  std::string detail;
  bool ok = false;
  try {
    ok = fn(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  const double secs = t.seconds();
  if (time_limit > 0.0 && secs > time_limit) {
    ok = false;
    detail += (detail.empty() ? "" : "; ") + std::string("over time limit");
  }
  report(index, name, ok, secs, detail);
}

}  // namespace

int main() {
  run_check(1, "linearization matches central finite differences",
            check_gradient_fidelity, 10.0);
  run_check(2, "pre-processing rows orthonormal, Psi*Phi consistent",
            check_preprocessing, 5.0);
  run_check(3, "QP solver matches long-run projected gradient",
            check_qp_oracle, 60.0);
  run_check(4, "cardinality enumeration equals explicit minimum",
            check_enumeration, 0.0);
  run_check(5, "assembled QP sizes stay within the variable bound",
            check_variable_bound, 0.0);
  run_check(6, "noiseless single-target recovery with known channel",
            check_noiseless_recovery, 10.0);
  run_check(7, "joint cardinality/position/exponent estimation",
            check_joint_estimation, 300.0);
  run_check(8, "log-normal moment matching vs Monte Carlo",
            check_moment_matching, 0.0);
  run_check(9, "clustering monotonicity and planted partition",
            check_clustering, 0.0);
  run_check(10, "byte-identical outputs for identical config and seed",
            check_determinism, 0.0);

  if (g_failures == 0) {
    std::printf("all acceptance checks passed\n");
    return 0;
  }
  std::printf("%d acceptance check(s) failed\n", g_failures);
  return 1;
}
