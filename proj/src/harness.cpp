#include "l1loc/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace l1loc {

std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

using nlohmann::ordered_json;

void reject_unknown(const nlohmann::json& obj, const char* where,
                    std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* key : allowed)
      if (it.key() == key) {
        ok = true;
        break;
      }
    if (!ok)
      throw std::invalid_argument(std::string("config: unknown key '") +
                                  it.key() + "' in " + where);
  }
}

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

// square-matrix Hungarian (Jonker-style shortest augmenting path)
std::vector<int> hungarian(const std::vector<std::vector<double>>& cost) {
  const int n = static_cast<int>(cost.size());
  std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<double> v(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<int> p(static_cast<std::size_t>(n) + 1, 0);
  std::vector<int> way(static_cast<std::size_t>(n) + 1, 0);
  const double inf = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(n) + 1, inf);
    std::vector<char> used(static_cast<std::size_t>(n) + 1, 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const int i0 = p[static_cast<std::size_t>(j0)];
      int j1 = 0;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double cur = cost[static_cast<std::size_t>(i0 - 1)]
                               [static_cast<std::size_t>(j - 1)] -
                           u[static_cast<std::size_t>(i0)] -
                           v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_of_col(static_cast<std::size_t>(n));
  for (int j = 1; j <= n; ++j)
    row_of_col[static_cast<std::size_t>(j - 1)] = p[static_cast<std::size_t>(j)] - 1;
  std::vector<int> col_of_row(static_cast<std::size_t>(n), -1);
  for (int j = 0; j < n; ++j)
    col_of_row[static_cast<std::size_t>(row_of_col[static_cast<std::size_t>(j)])] = j;
  return col_of_row;
}

// minimum-cost injection of rows into columns (rows <= cols)
std::vector<int> assign_min_cost(const std::vector<std::vector<double>>& cost) {
  const int rows = static_cast<int>(cost.size());
  const int cols = rows > 0 ? static_cast<int>(cost[0].size()) : 0;
  if (cols <= 8) {
    std::vector<int> perm(static_cast<std::size_t>(cols));
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<int> best;
    double best_cost = std::numeric_limits<double>::infinity();
    do {
      double c = 0.0;
      for (int i = 0; i < rows; ++i)
        c += cost[static_cast<std::size_t>(i)][static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
      if (c < best_cost) {
        best_cost = c;
        best.assign(perm.begin(), perm.begin() + rows);
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
  }
  // pad with zero-cost dummy rows to make it square
  std::vector<std::vector<double>> sq(
      static_cast<std::size_t>(cols),
      std::vector<double>(static_cast<std::size_t>(cols), 0.0));
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      sq[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          cost[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  std::vector<int> full = hungarian(sq);
  return {full.begin(), full.begin() + rows};
}

}  // namespace

LocalizerConfig RunConfig::localizer(std::uint64_t trial_seed) const {
  LocalizerConfig lc;
  lc.grid_granularity = grid_granularity;
  lc.half_width = area_half_width;
  lc.iters_phase_one = iters_phase_one;
  lc.iters_phase_two = iters_phase_two;
  lc.nu_min = nu_min;
  lc.nu_max = nu_max;
  lc.alpha_min = alpha_min;
  lc.alpha_max = alpha_max;
  lc.beta_min = beta_min;
  lc.p_min = p_min;
  lc.p_max = p_max;
  lc.seed = trial_seed;
  return lc;
}

RunConfig parse_config(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  reject_unknown(j, "top level",
                 {"area_half_width", "sensors", "targets", "power",
                  "shadowing_db", "true_model", "bounds", "localizer",
                  "trials", "seed"});
  RunConfig cfg;
  if (j.contains("area_half_width")) cfg.area_half_width = j["area_half_width"];
  if (j.contains("sensors")) {
    const auto& s = j["sensors"];
    reject_unknown(s, "sensors", {"layout", "count", "positions"});
    const std::string layout = s.value("layout", "grid");
    if (layout == "grid")
      cfg.layout = SensorLayout::grid;
    else if (layout == "perimeter")
      cfg.layout = SensorLayout::perimeter;
    else if (layout == "explicit")
      cfg.layout = SensorLayout::explicit_positions;
    else
      throw std::invalid_argument("config: unknown sensor layout '" + layout + "'");
    if (s.contains("count")) cfg.sensor_count = s["count"];
    if (s.contains("positions"))
      for (const auto& p : s["positions"])
        cfg.sensor_positions.push_back({p.at(0), p.at(1)});
  }
  if (j.contains("targets")) {
    const auto& t = j["targets"];
    reject_unknown(t, "targets", {"count", "min_separation"});
    if (t.contains("count")) cfg.target_count = t["count"];
    if (t.contains("min_separation")) cfg.min_separation = t["min_separation"];
  }
  if (j.contains("power")) {
    const auto& p = j["power"];
    reject_unknown(p, "power", {"min", "max"});
    if (p.contains("min")) cfg.p_min = p["min"];
    if (p.contains("max")) cfg.p_max = p["max"];
  }
  if (j.contains("shadowing_db")) cfg.shadowing_db = j["shadowing_db"];
  if (j.contains("true_model")) {
    const auto& t = j["true_model"];
    reject_unknown(t, "true_model", {"alpha", "beta"});
    if (t.contains("alpha")) cfg.true_alpha = t["alpha"];
    if (t.contains("beta")) cfg.true_beta = t["beta"];
  }
  if (j.contains("bounds")) {
    const auto& b = j["bounds"];
    reject_unknown(b, "bounds", {"alpha", "beta_min", "nu"});
    if (b.contains("alpha")) {
      cfg.alpha_min = b["alpha"].at(0);
      cfg.alpha_max = b["alpha"].at(1);
    }
    if (b.contains("beta_min")) cfg.beta_min = b["beta_min"];
    if (b.contains("nu")) {
      cfg.nu_min = b["nu"].at(0);
      cfg.nu_max = b["nu"].at(1);
    }
  }
  if (j.contains("localizer")) {
    const auto& l = j["localizer"];
    reject_unknown(l, "localizer", {"G", "I1", "I2"});
    if (l.contains("G")) cfg.grid_granularity = l["G"];
    if (l.contains("I1")) cfg.iters_phase_one = l["I1"];
    if (l.contains("I2")) cfg.iters_phase_two = l["I2"];
  }
  if (j.contains("trials")) cfg.trials = j["trials"];
  if (j.contains("seed")) cfg.seed = j["seed"];

  if (cfg.trials < 1) throw std::invalid_argument("config: trials must be >= 1");
  if (cfg.target_count < 1)
    throw std::invalid_argument("config: target count must be >= 1");
  cfg.localizer(0).validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::vector<Point> place_sensors(const RunConfig& cfg) {
  const double w = cfg.area_half_width;
  std::vector<Point> sensors;
  switch (cfg.layout) {
    case SensorLayout::grid: {
      const int side = static_cast<int>(std::lround(std::sqrt(
          static_cast<double>(cfg.sensor_count))));
      if (side * side != cfg.sensor_count)
        throw std::invalid_argument(
            "config: grid layout needs a square sensor count");
      for (int iy = 0; iy < side; ++iy)
        for (int ix = 0; ix < side; ++ix) {
          const double x = side == 1 ? 0.0 : -w + 2.0 * w * ix / (side - 1);
          const double y = side == 1 ? 0.0 : -w + 2.0 * w * iy / (side - 1);
          sensors.push_back({x, y});
        }
      break;
    }
    case SensorLayout::perimeter:
      for (int k = 0; k < cfg.sensor_count; ++k) {
        const double ang = 2.0 * M_PI * k / cfg.sensor_count;
        sensors.push_back({w * std::cos(ang), w * std::sin(ang)});
      }
      break;
    case SensorLayout::explicit_positions:
      if (cfg.sensor_positions.empty())
        throw std::invalid_argument("config: explicit layout needs positions");
      sensors = cfg.sensor_positions;
      break;
  }
  return sensors;
}

Scenario generate_scenario(const RunConfig& cfg, std::uint64_t seed) {
  Scenario sc;
  sc.half_width = cfg.area_half_width;
  sc.sigma_db = cfg.shadowing_db;
  sc.p_min = cfg.p_min;
  sc.p_max = cfg.p_max;
  sc.truth.alpha = cfg.true_alpha;
  sc.truth.beta = cfg.true_beta;
  sc.truth.alpha_min = cfg.alpha_min;
  sc.truth.alpha_max = cfg.alpha_max;
  sc.truth.beta_min = cfg.beta_min;
  sc.sensors = place_sensors(cfg);

  std::mt19937_64 rng(seed);
  const double span = 0.9 * cfg.area_half_width;
  std::uniform_real_distribution<double> coord(-span, span);
  const double min_sep = cfg.separation();
  int attempts = 0;
  std::vector<Point> placed;
  while (static_cast<int>(placed.size()) < cfg.target_count) {
    if (++attempts > 10000)
      throw std::runtime_error(
          "generate_scenario: separation constraint infeasible");
    const Point cand{coord(rng), coord(rng)};
    bool ok = true;
    for (const Point& q : placed)
      if (std::hypot(cand.x - q.x, cand.y - q.y) < min_sep) {
        ok = false;
        break;
      }
    if (ok) placed.push_back(cand);
  }
  std::uniform_real_distribution<double> power(cfg.p_min, cfg.p_max);
  for (const Point& p : placed) sc.targets.push_back({p, power(rng)});
  return sc;
}

TrialResult match_and_score(const Scenario& truth, const EstimateReport& est) {
  TrialResult res;
  res.n_true = static_cast<int>(truth.targets.size());
  res.n_hat = est.n_hat;
  res.alpha_error = std::abs(est.alpha_hat - truth.truth.alpha);
  res.beta_error = std::abs(est.beta_hat - truth.truth.beta);
  res.matched_count = std::min(res.n_true, res.n_hat);
  if (res.matched_count == 0) return res;

  // rows = smaller set so the assignment is an injection
  const bool truth_rows = res.n_true <= res.n_hat;
  const int rows = res.matched_count;
  const int cols = std::max(res.n_true, res.n_hat);
  std::vector<std::vector<double>> cost(
      static_cast<std::size_t>(rows),
      std::vector<double>(static_cast<std::size_t>(cols), 0.0));
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      const Target& t = truth.targets[static_cast<std::size_t>(truth_rows ? i : j)];
      const TargetEstimate& e = est.targets[static_cast<std::size_t>(truth_rows ? j : i)];
      const double dx = t.pos.x - e.x;
      const double dy = t.pos.y - e.y;
      cost[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          dx * dx + dy * dy;
    }
  const std::vector<int> match = assign_min_cost(cost);

  double pos_sq = 0.0, pow_sq = 0.0;
  for (int i = 0; i < rows; ++i) {
    const int j = match[static_cast<std::size_t>(i)];
    const Target& t = truth.targets[static_cast<std::size_t>(truth_rows ? i : j)];
    const TargetEstimate& e = est.targets[static_cast<std::size_t>(truth_rows ? j : i)];
    pos_sq += cost[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    const double dp = t.power - e.p;
    pow_sq += dp * dp;
  }
  res.position_rmse = std::sqrt(pos_sq / rows);
  res.power_rmse = std::sqrt(pow_sq / rows);
  return res;
}

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

TrialResult aggregate(const std::vector<TrialResult>& trials, bool use_median) {
  TrialResult agg;
  agg.status = use_median ? "median" : "mean";
  std::vector<double> nt, nh, pos, pw, ae, be, tm, mc;
  for (const auto& t : trials) {
    if (t.status != "ok") continue;
    nt.push_back(t.n_true);
    nh.push_back(t.n_hat);
    pos.push_back(t.position_rmse);
    pw.push_back(t.power_rmse);
    ae.push_back(t.alpha_error);
    be.push_back(t.beta_error);
    tm.push_back(t.wall_time_ms);
    mc.push_back(t.matched_count);
  }
  auto mean = [](const std::vector<double>& v) {
    return v.empty() ? 0.0
                     : std::accumulate(v.begin(), v.end(), 0.0) /
                           static_cast<double>(v.size());
  };
  auto red = [&](const std::vector<double>& v) {
    return use_median ? median(v) : mean(v);
  };
  agg.n_true = static_cast<int>(std::lround(red(nt)));
  agg.n_hat = static_cast<int>(std::lround(red(nh)));
  agg.position_rmse = red(pos);
  agg.power_rmse = red(pw);
  agg.alpha_error = red(ae);
  agg.beta_error = red(be);
  agg.wall_time_ms = red(tm);
  agg.matched_count = static_cast<int>(std::lround(red(mc)));
  return agg;
}

}  // namespace

TrialBatch run_trials(const RunConfig& cfg, bool keep_traces,
                      bool with_timing) {
  TrialBatch batch;
  for (int t = 0; t < cfg.trials; ++t) {
    const std::uint64_t trial_seed = cfg.seed + static_cast<std::uint64_t>(t);
    TrialResult res;
    res.seed = trial_seed;
    try {
      const Scenario sc = generate_scenario(cfg, trial_seed);
      const RssVector r = generate_rss(sc, split_seed(trial_seed, 1));
      const auto t0 = std::chrono::steady_clock::now();
      const EstimateReport report =
          run(sc.sensors, r, cfg.localizer(split_seed(trial_seed, 2)));
      const auto t1 = std::chrono::steady_clock::now();
      res = match_and_score(sc, report);
      res.seed = trial_seed;
      if (with_timing)
        res.wall_time_ms =
            std::chrono::duration<double, std::milli>(t1 - t0).count();
      if (keep_traces) batch.traces.push_back(trace_to_jsonl(report, t));
    } catch (const std::exception&) {
      res.status = "error";
      if (keep_traces) batch.traces.emplace_back();
    }
    batch.trials.push_back(res);
  }
  batch.agg_mean = aggregate(batch.trials, false);
  batch.agg_median = aggregate(batch.trials, true);
  return batch;
}

std::string trace_to_jsonl(const EstimateReport& report,
                           std::optional<int> trial) {
  std::string out;
  for (const IterationRecord& rec : report.trace) {
    ordered_json j;
    if (trial) j["trial"] = *trial;
    j["i"] = rec.iteration;
    j["phase"] = rec.phase == Phase::one ? 1 : 2;
    j["nu_star"] = rec.nu_star;
    j["objective"] = rec.objective;
    j["alpha"] = rec.alpha;
    j["beta"] = rec.beta;
    j["estimates"] = ordered_json::array();
    for (const TargetEstimate& e : rec.estimates)
      j["estimates"].push_back({{"x", e.x}, {"y", e.y}, {"p", e.p}});
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::string batch_to_csv(const TrialBatch& batch) {
  std::string out = "# schema=v1\n";
  out += "seed,n_true,n_hat,pos_rmse,pow_rmse,alpha_err,beta_err,time_ms,status\n";
  auto row = [&](const std::string& head, const TrialResult& t) {
    out += head + ',' + std::to_string(t.n_true) + ',' +
           std::to_string(t.n_hat) + ',' + fmt(t.position_rmse) + ',' +
           fmt(t.power_rmse) + ',' + fmt(t.alpha_error) + ',' +
           fmt(t.beta_error) + ',' + fmt(t.wall_time_ms) + ',' + t.status +
           '\n';
  };
  for (const TrialResult& t : batch.trials) row(std::to_string(t.seed), t);
  row("AGG_MEAN", batch.agg_mean);
  row("AGG_MEDIAN", batch.agg_median);
  return out;
}

std::string scenario_to_json(const Scenario& s) {
  ordered_json j;
  j["half_width"] = s.half_width;
  j["sigma_db"] = s.sigma_db;
  j["power"] = {{"min", s.p_min}, {"max", s.p_max}};
  j["model"] = {{"alpha", s.truth.alpha}, {"beta", s.truth.beta}};
  j["sensors"] = ordered_json::array();
  for (const Point& p : s.sensors) j["sensors"].push_back({p.x, p.y});
  j["targets"] = ordered_json::array();
  for (const Target& t : s.targets)
    j["targets"].push_back({{"x", t.pos.x}, {"y", t.pos.y}, {"p", t.power}});
  return j.dump(2) + "\n";
}

void simulate_to_files(const RunConfig& cfg, const std::string& csv_path,
                       const std::string& trace_path, bool with_timing) {
  const TrialBatch batch = run_trials(cfg, !trace_path.empty(), with_timing);
  {
    std::ofstream out(csv_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output " + csv_path);
    out << batch_to_csv(batch);
  }
  if (!trace_path.empty()) {
    std::ofstream out(trace_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open trace " + trace_path);
    for (const std::string& t : batch.traces) out << t;
  }
}

}  // namespace l1loc
