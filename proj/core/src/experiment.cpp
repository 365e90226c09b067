#include "lowcon/experiment.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "json.hpp"
#include "lowcon/contour.hpp"
#include "lowcon/errors.hpp"
#include "lowcon/field_io.hpp"
#include "lowcon/network.hpp"
#include "lowcon/raster.hpp"

namespace lowcon {

namespace {

using json = nlohmann::ordered_json;

std::vector<double> parse_doubles(const std::string& key, const std::string& value,
                                  std::size_t want = 0) {
  std::istringstream iss(value);
  std::vector<double> out;
  double v;
  while (iss >> v) out.push_back(v);
  std::string trailing;
  if (iss.clear(), iss >> trailing)
    throw ConfigError(key + ": cannot parse '" + value + "'");
  if (out.empty() || (want && out.size() != want))
    throw ConfigError(key + ": expected " + (want ? std::to_string(want) : std::string("some")) +
                      " number(s), got '" + value + "'");
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  return parse_doubles(key, value, 1)[0];
}

int parse_int(const std::string& key, const std::string& value) {
  const double v = parse_double(key, value);
  const int i = static_cast<int>(v);
  if (i != v) throw ConfigError(key + ": expected an integer, got '" + value + "'");
  return i;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError(key + ": expected true/false, got '" + value + "'");
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double probe_mean_theta(const CellField& theta, Vec2 center, double radius) {
  const Grid& g = theta.grid();
  double sum = 0.0;
  int count = 0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const Vec2 c{g.cell_cx(i), g.cell_cy(j)};
      if (norm(c - center) <= radius) {
        sum += theta.at(i, j);
        ++count;
      }
    }
  return count ? sum / count : 0.0;
}

json config_json(const ExperimentConfig& cfg) {
  json j;
  j["nx"] = cfg.nx;
  j["ny"] = cfg.ny;
  j["a"] = cfg.a;
  j["b"] = cfg.b;
  j["k_area"] = cfg.k_area;
  j["lambda"] = cfg.lambda;
  j["x0"] = {cfg.x0.x, cfg.x0.y};
  j["x1"] = {cfg.x1.x, cfg.x1.y};
  j["solver"] = {{"grad_tolerance", cfg.solver.grad_tolerance},
                 {"gap_tolerance", cfg.solver.gap_tolerance},
                 {"max_iterations", cfg.solver.max_iterations},
                 {"memory", cfg.solver.memory},
                 {"dense", cfg.solver.dense},
                 {"smoothing_width", cfg.solver.smoothing_width}};
  return j;
}

int run_solve(const ExperimentConfig& cfg, const std::filesystem::path& out,
              bool diagnostics) {
  const Grid g(cfg.nx, cfg.ny);
  const EnvelopePair e(CongestionFunction(cfg.a, 2.0),
                       CongestionFunction(cfg.b, 2.0), cfg.k_area);
  const ScalarField f = build_source(g, {cfg.lambda, cfg.x0, cfg.x1});

  const SolveResult res = minimize(f, e, cfg.solver);
  const Recovery rec =
      recover(res.u, e, {}, cfg.solver.smoothing_width);

  CellField sigma_mag(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) sigma_mag.at(i, j) = norm(rec.sigma.at(i, j));

  write_csv(out / "f.csv", f);
  write_pgm(out / "f.pgm", f);
  write_csv(out / "u.csv", res.u);
  write_csv(out / "sigma_mag.csv", sigma_mag);
  write_csv(out / "theta.csv", rec.theta);
  write_pgm(out / "theta.pgm", rec.theta, /*invert=*/true);

  const Vec2 mid{0.5, 0.5};
  json rep;
  rep["config"] = config_json(cfg);
  rep["r1"] = e.r1();
  rep["r2"] = e.r2();
  rep["objective"] = res.report.final_objective;
  rep["dual_value"] = res.report.dual_value;
  rep["primal_value"] = res.report.primal_value;
  rep["duality_gap"] = res.report.duality_gap;
  rep["divergence_residual"] = res.report.divergence_residual;
  rep["iterations"] = res.report.iterations;
  rep["converged"] = res.report.converged;
  rep["stop_reason"] = res.report.stop_reason;
  rep["objective_trace"] = res.report.objective_trace;
  rep["mean_theta"] = integrate(rec.theta) / g.area();
  rep["probe_theta"] = {{"x0", probe_mean_theta(rec.theta, cfg.x0, 0.1)},
                        {"x1", probe_mean_theta(rec.theta, cfg.x1, 0.1)},
                        {"midpoint", probe_mean_theta(rec.theta, mid, 0.1)}};

  if (diagnostics) {
    json diag;
    diag["level"] = cfg.level;
    diag["k_perimeter"] = cfg.k_perimeter;
    diag["contours"] = json::array();
    try {
      const auto contours = extract_contour(rec.theta, cfg.level);
      std::ofstream cs(out / "contours.csv");
      cs << "contour,x,y\n";
      cs.precision(17);
      for (std::size_t c = 0; c < contours.size(); ++c) {
        for (const Vec2& p : contours[c].vertices)
          cs << c << "," << p.x << "," << p.y << "\n";
        json entry;
        entry["vertices"] = contours[c].vertices.size();
        entry["length"] = contours[c].length();
        try {
          const CurvatureReport cr =
              check_optimality(contours[c], rec.sigma, e, cfg.k_perimeter);
          entry["violation_fraction"] = cr.violation_fraction;
          entry["negative_curvature_fraction"] = cr.negative_curvature_fraction;
          entry["skipped"] = cr.skipped_count;
        } catch (const std::runtime_error& err) {
          entry["error"] = err.what();
        }
        diag["contours"].push_back(entry);
      }
    } catch (const NoContour&) {
      diag["note"] = "theta never crosses the requested level";
    }
    rep["diagnostics"] = diag;
  }

  std::ofstream rj(out / "report.json");
  rj << rep.dump(2) << "\n";
  return res.report.converged ? 0 : 3;
}

// Seeded random union of at most 5 discs/segments, kept away from the
// boundary so the largest sweep radius still dilates in-bounds.
RasterSet random_set(int n, unsigned seed) {
  RasterSet set(n, 1.0 / n);
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> pos(0.3, 0.7);
  std::uniform_real_distribution<double> rad(0.04, 0.10);
  std::uniform_int_distribution<int> nprim(1, 5);
  std::uniform_int_distribution<int> kindd(0, 1);
  const int m = nprim(rng);
  for (int q = 0; q < m; ++q) {
    if (kindd(rng) == 0) {
      set.fill_disc(pos(rng), pos(rng), rad(rng));
    } else {
      set.fill_segment(pos(rng), pos(rng), pos(rng), pos(rng), rad(rng));
    }
  }
  return set;
}

int run_dilation_sweep(const ExperimentConfig& cfg,
                       const std::filesystem::path& out) {
  std::ofstream csv(out / "sweep.csv");
  csv << "seed,r,lhs,rhs,slack\n";
  csv.precision(17);
  for (int seed = 0; seed < cfg.seeds; ++seed) {
    const RasterSet set = random_set(cfg.raster_n, static_cast<unsigned>(seed));
    for (double r : cfg.radii) {
      const DilationReport rep = check_dilation_inequality(set, r);
      csv << seed << "," << r << "," << rep.lhs << "," << rep.rhs << ","
          << rep.slack << "\n";
    }
  }
  return 0;
}

int run_network_table(const ExperimentConfig& cfg,
                      const std::filesystem::path& out) {
  const NetworkCostParams params(cfg.net_alpha, cfg.net_p, cfg.net_k);
  std::ofstream csv(out / "network.csv");
  csv << "sigma,relaxed_cost,optimal_width\n";
  csv.precision(17);
  for (int i = 0; i < cfg.net_samples; ++i) {
    const double s = cfg.net_sigma_max * i / (cfg.net_samples - 1);
    csv << s << "," << relaxed_cost(params, s) << "," << optimal_width(params, s)
        << "\n";
  }
  return 0;
}

double metric_value(const json& rep, const std::string& metric) {
  if (metric == "mean_theta") return rep.at("mean_theta").get<double>();
  if (metric == "objective") return rep.at("objective").get<double>();
  if (metric == "gap") return rep.at("duality_gap").get<double>();
  if (metric == "probe_mass") {
    const auto& p = rep.at("probe_theta");
    const double sources =
        0.5 * (p.at("x0").get<double>() + p.at("x1").get<double>());
    const double mid = p.at("midpoint").get<double>();
    return sources / std::max(mid, 1e-300);
  }
  throw ConfigError("unknown metric '" + metric + "'");
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream iss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(iss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "kind") {
      if (value == "solve") cfg.kind = ExperimentKind::solve;
      else if (value == "dilation_sweep") cfg.kind = ExperimentKind::dilation_sweep;
      else if (value == "network_table") cfg.kind = ExperimentKind::network_table;
      else if (value == "diagnostics") cfg.kind = ExperimentKind::diagnostics;
      else throw ConfigError("kind: unknown experiment '" + value + "'");
    } else if (key == "nx") cfg.nx = parse_int(key, value);
    else if (key == "ny") cfg.ny = parse_int(key, value);
    else if (key == "a") cfg.a = parse_double(key, value);
    else if (key == "b") cfg.b = parse_double(key, value);
    else if (key == "k_area") cfg.k_area = parse_double(key, value);
    else if (key == "lambda") cfg.lambda = parse_double(key, value);
    else if (key == "x0") {
      const auto v = parse_doubles(key, value, 2);
      cfg.x0 = {v[0], v[1]};
    } else if (key == "x1") {
      const auto v = parse_doubles(key, value, 2);
      cfg.x1 = {v[0], v[1]};
    } else if (key == "out") cfg.out = value;
    else if (key == "solver.preset") {
      if (value == "paper") {
        const auto hook = cfg.solver.iterate_hook;
        cfg.solver = SolverConfig::paper();
        cfg.solver.iterate_hook = hook;
      } else if (value != "default")
        throw ConfigError("solver.preset: unknown preset '" + value + "'");
    } else if (key == "solver.grad_tolerance")
      cfg.solver.grad_tolerance = parse_double(key, value);
    else if (key == "solver.gap_tolerance")
      cfg.solver.gap_tolerance = parse_double(key, value);
    else if (key == "solver.max_iterations")
      cfg.solver.max_iterations = parse_int(key, value);
    else if (key == "solver.memory") cfg.solver.memory = parse_int(key, value);
    else if (key == "solver.dense") cfg.solver.dense = parse_bool(key, value);
    else if (key == "solver.smoothing_width")
      cfg.solver.smoothing_width = parse_double(key, value);
    else if (key == "raster_n") cfg.raster_n = parse_int(key, value);
    else if (key == "seeds") cfg.seeds = parse_int(key, value);
    else if (key == "radii") cfg.radii = parse_doubles(key, value);
    else if (key == "net.alpha") cfg.net_alpha = parse_double(key, value);
    else if (key == "net.p") cfg.net_p = parse_double(key, value);
    else if (key == "net.k") cfg.net_k = parse_double(key, value);
    else if (key == "net.sigma_max") cfg.net_sigma_max = parse_double(key, value);
    else if (key == "net.samples") cfg.net_samples = parse_int(key, value);
    else if (key == "level") cfg.level = parse_double(key, value);
    else if (key == "k_perimeter") cfg.k_perimeter = parse_double(key, value);
    else throw ConfigError("unknown key '" + key + "'");
  }

  if (cfg.nx < 8 || cfg.ny < 8) throw ConfigError("nx/ny: grid must be at least 8x8");
  if (!(cfg.a > 0.0 && cfg.a < cfg.b)) throw ConfigError("a/b: need 0 < a < b");
  if (!(cfg.k_area > 0.0)) throw ConfigError("k_area: must be positive");
  if (!(cfg.lambda > 0.0)) throw ConfigError("lambda: must be positive");
  if (cfg.raster_n < 16) throw ConfigError("raster_n: must be at least 16");
  if (cfg.seeds < 1) throw ConfigError("seeds: must be at least 1");
  for (double r : cfg.radii)
    if (!(r > 0.0)) throw ConfigError("radii: must be positive");
  if (cfg.net_samples < 2) throw ConfigError("net.samples: must be at least 2");
  if (!(cfg.level > 0.0 && cfg.level < 1.0))
    throw ConfigError("level: must lie in (0,1)");
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream oss;
  oss << in.rdbuf();
  return parse_config(oss.str());
}

namespace {
const std::map<std::string, std::string>& preset_map() {
  static const std::map<std::string, std::string> presets = {
      {"fig1a",
       "# source display run: lambda = 0.02 Gaussian pair, f.pgm is the figure\n"
       "kind = solve\nsolver.gap_tolerance = 1e-4\nlambda = 0.02\nk_area = 0.06\n"
       "solver.smoothing_width = 1e-4\nout = fig1a\n"},
      {"fig1b",
       "kind = solve\nsolver.gap_tolerance = 1e-4\nlambda = 0.02\nk_area = 0.06\n"
       "solver.smoothing_width = 1e-4\nout = fig1b\n"},
      {"fig1c",
       "kind = solve\nsolver.gap_tolerance = 1e-4\nlambda = 0.02\nk_area = 0.4\n"
       "solver.smoothing_width = 1e-4\nout = fig1c\n"},
      {"fig2a",
       "# source display run for the small-mass regime\n"
       "kind = solve\nsolver.gap_tolerance = 1e-4\nlambda = 0.001\nk_area = 0.01\n"
       "solver.smoothing_width = 1e-4\nout = fig2a\n"},
      {"fig2b",
       "kind = solve\nsolver.gap_tolerance = 1e-4\nlambda = 0.001\nk_area = 0.01\n"
       "solver.smoothing_width = 1e-4\nout = fig2b\n"},
      {"fig2c",
       "kind = solve\nsolver.gap_tolerance = 1e-4\nlambda = 0.001\nk_area = 0.05\n"
       "solver.smoothing_width = 1e-4\nout = fig2c\n"},
      {"fig1b_paper",
       "# historical fidelity run: dense updates, 20 iterations\n"
       "kind = solve\nsolver.gap_tolerance = 1e-4\nlambda = 0.02\nk_area = 0.06\n"
       "solver.preset = paper\nsolver.smoothing_width = 1e-4\nout = fig1b_paper\n"},
      {"fig2b_paper",
       "# truncated fidelity run: the small-mass pattern is a snapshot taken\n"
       "# before the mixed region bridges the two sources\n"
       "kind = solve\nsolver.gap_tolerance = 1e-4\nlambda = 0.001\nk_area = 0.01\n"
       "solver.preset = paper\nsolver.max_iterations = 12\n"
       "solver.smoothing_width = 1e-4\nout = fig2b_paper\n"},
      {"dilation_sweep",
       "kind = dilation_sweep\nraster_n = 512\nseeds = 100\n"
       "radii = 0.02 0.05 0.1\nout = dilation_sweep\n"},
      {"network_table",
       "kind = network_table\nnet.alpha = 1\nnet.p = 2\nnet.k = 1\n"
       "net.sigma_max = 3\nnet.samples = 61\nout = network_table\n"},
  };
  return presets;
}
}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [name, text] : preset_map()) names.push_back(name);
  return names;
}

std::string preset_text(const std::string& name) {
  const auto it = preset_map().find(name);
  if (it == preset_map().end())
    throw ConfigError("unknown preset '" + name + "'");
  return it->second;
}

int run_experiment(const ExperimentConfig& cfg,
                   const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  switch (cfg.kind) {
    case ExperimentKind::solve:
      return run_solve(cfg, out_dir, /*diagnostics=*/false);
    case ExperimentKind::diagnostics:
      return run_solve(cfg, out_dir, /*diagnostics=*/true);
    case ExperimentKind::dilation_sweep:
      return run_dilation_sweep(cfg, out_dir);
    case ExperimentKind::network_table:
      return run_network_table(cfg, out_dir);
  }
  throw ConfigError("unhandled experiment kind");
}

CompareResult compare_reports(const std::filesystem::path& report_a,
                              const std::filesystem::path& report_b,
                              const std::string& metric) {
  auto load = [](const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in) throw ConfigError("cannot open report " + p.string());
    json j;
    in >> j;
    return j;
  };
  const json a = load(report_a);
  const json b = load(report_b);
  for (const char* key : {"nx", "ny", "a", "b"}) {
    if (a.at("config").at(key) != b.at("config").at(key))
      throw IncompatibleReports(std::string("reports differ in ") + key);
  }
  CompareResult res;
  res.metric = metric;
  res.value_a = metric_value(a, metric);
  res.value_b = metric_value(b, metric);
  res.delta = res.value_b - res.value_a;
  return res;
}

}  // namespace lowcon
