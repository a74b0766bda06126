// lrd: local regression distribution estimation from the command line.
//
// Subcommands: fit, band, efficiency, weights, ivcheck, simulate.
// Every run writes its resolved configuration and seed into a JSON sidecar
// (schema "lrd-output-v1") next to the CSV output.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "lrd/band.hpp"
#include "lrd/bandwidth.hpp"
#include "lrd/fit.hpp"
#include "lrd/l2fit.hpp"
#include "lrd/mindist.hpp"
#include "lrd/normal.hpp"
#include "lrd/program_eval.hpp"
#include "lrd/simulate.hpp"

using nlohmann::json;

namespace {

// ---------------------------------------------------------------- CSV input

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  int col(const std::string& name) const {
    for (size_t j = 0; j < columns.size(); ++j)
      if (columns[j] == name) return static_cast<int>(j);
    return -1;
  }
};

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    // trim surrounding whitespace
    size_t b = cell.find_first_not_of(" \t\r");
    size_t e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw lrd::InvalidInput("cannot open input file: " + path);
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw lrd::InvalidInput("empty input file: " + path);
  t.columns = split_line(line);
  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<std::string> cells = split_line(line);
    if (cells.size() != t.columns.size())
      throw lrd::InvalidInput("row " + std::to_string(row) + " has " +
                              std::to_string(cells.size()) + " cells, expected " +
                              std::to_string(t.columns.size()));
    t.rows.push_back(std::move(cells));
  }
  if (t.rows.empty()) throw lrd::InvalidInput("no data rows in " + path);
  return t;
}

std::vector<double> numeric_column(const CsvTable& t, const std::string& name) {
  const int j = t.col(name);
  if (j < 0) throw lrd::InvalidInput("missing column \"" + name + "\"");
  std::vector<double> out;
  out.reserve(t.rows.size());
  for (size_t i = 0; i < t.rows.size(); ++i) {
    try {
      size_t used = 0;
      const double v = std::stod(t.rows[i][j], &used);
      if (used != t.rows[i][j].size() || !std::isfinite(v)) throw std::invalid_argument("");
      out.push_back(v);
    } catch (const std::exception&) {
      throw lrd::InvalidInput("could not parse numeric value at row " +
                              std::to_string(i + 1) + ", column \"" + name + "\"");
    }
  }
  return out;
}

std::vector<int> binary_column(const CsvTable& t, const std::string& name) {
  const std::vector<double> v = numeric_column(t, name);
  std::vector<int> out(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    if (v[i] != 0.0 && v[i] != 1.0)
      throw lrd::InvalidInput("column \"" + name + "\" is not binary at row " +
                              std::to_string(i + 1));
    out[i] = static_cast<int>(v[i]);
  }
  return out;
}

// ------------------------------------------------------------- shared flags

struct CommonOpts {
  std::string input, output = "out.csv", json_path;
  std::string xcol = "x", wcol;
  std::string kernel = "epanechnikov";
  int p = 2;
  std::string h = "rot";
  int deriv = 0;
  double alpha = 0.05;
  std::vector<double> grid;
  double grid_min = 0.0, grid_max = 0.0;
  int grid_count = 30;
  bool robust = false;
  bool matrices = false;
  std::uint64_t seed = 12345;
  int threads = 1;  // accepted for forward compatibility; evaluation is serial
};

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_input = true) {
  cmd->set_help_flag("--help", "print help");  // frees -h / --h for the bandwidth
  auto* in = cmd->add_option("--input", o.input, "input CSV path");
  if (needs_input) in->required();
  cmd->add_option("--out", o.output, "output CSV path");
  cmd->add_option("--json", o.json_path, "JSON sidecar path (default <out>.json)");
  cmd->add_option("--col", o.xcol, "data column name");
  cmd->add_option("--weight-col", o.wcol, "optional weight column name");
  cmd->add_option("--kernel", o.kernel, "uniform | triangular | epanechnikov");
  cmd->add_option("-p,--p", o.p, "polynomial order");
  cmd->add_option("--h", o.h, "bandwidth in data units, or 'rot'");
  cmd->add_option("--deriv", o.deriv, "-1 = CDF, 0 = density, 1 = f', ...");
  cmd->add_option("--alpha", o.alpha, "confidence level complement");
  cmd->add_option("--grid", o.grid, "explicit grid points")->delimiter(',');
  cmd->add_option("--grid-min", o.grid_min, "grid lower end");
  cmd->add_option("--grid-max", o.grid_max, "grid upper end");
  cmd->add_option("--grid-count", o.grid_count, "equally spaced grid size");
  cmd->add_flag("--robust", o.robust, "bias-robust CIs from an order p+1 fit");
  cmd->add_flag("--matrices", o.matrices, "include full matrices in the sidecar");
  cmd->add_option("--seed", o.seed, "RNG seed");
  cmd->add_option("--threads", o.threads, "worker cap");
}

std::vector<double> resolve_grid(const CommonOpts& o, const lrd::SortedSample& s) {
  if (!o.grid.empty()) return o.grid;
  double lo = o.grid_min, hi = o.grid_max;
  if (lo == hi) {
    lo = s.values.front();
    hi = s.values.back();
  }
  if (o.grid_count < 1) throw lrd::InvalidInput("grid count must be positive");
  std::vector<double> g(o.grid_count);
  for (int i = 0; i < o.grid_count; ++i)
    g[i] = o.grid_count == 1 ? lo : lo + (hi - lo) * i / (o.grid_count - 1);
  return g;
}

lrd::FitConfig make_fit_config(const CommonOpts& o, const lrd::SortedSample& s) {
  lrd::FitConfig cfg;
  cfg.kernel.kind = lrd::kernel_from_string(o.kernel);
  cfg.basis.p = o.p;
  cfg.deriv = o.deriv;
  if (o.h == "rot") {
    cfg.h = lrd::rot_bandwidth(s, o.p, std::max(o.deriv, 0), cfg.kernel);
  } else {
    try {
      cfg.h = std::stod(o.h);
    } catch (const std::exception&) {
      throw lrd::InvalidInput("bandwidth must be a number or 'rot'");
    }
    if (!(cfg.h > 0)) throw lrd::InvalidInput("bandwidth must be positive");
  }
  if (o.robust) {
    lrd::BasisSpec inf = cfg.basis;
    inf.p = o.p + 1;
    cfg.inference_basis = inf;
  }
  return cfg;
}

json config_json(const CommonOpts& o, const lrd::FitConfig& cfg, const char* subcommand) {
  json j;
  j["schema"] = "lrd-output-v1";
  j["subcommand"] = subcommand;
  j["input"] = o.input;
  j["column"] = o.xcol;
  j["weight_column"] = o.wcol;
  j["kernel"] = o.kernel;
  j["p"] = o.p;
  j["h"] = cfg.h;
  j["deriv"] = o.deriv;
  j["alpha"] = o.alpha;
  j["robust"] = o.robust;
  j["seed"] = o.seed;
  j["threads"] = o.threads;
  return j;
}

void write_json(const CommonOpts& o, const json& j) {
  const std::string path = o.json_path.empty() ? o.output + ".json" : o.json_path;
  std::ofstream out(path);
  if (!out) throw lrd::InvalidInput("cannot write sidecar: " + path);
  out << j.dump(2) << "\n";
}

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw lrd::InvalidInput("cannot write output: " + path);
  out.precision(12);
  return out;
}

// --------------------------------------------------------------- subcommands

int run_fit(const CommonOpts& o, const std::string& method, const std::string& support_str) {
  const CsvTable t = read_csv(o.input);
  std::optional<std::vector<double>> w;
  if (!o.wcol.empty()) w = numeric_column(t, o.wcol);
  const lrd::SortedSample s = lrd::sort_sample(numeric_column(t, o.xcol), w);
  const lrd::EdfValues F = lrd::edf_at_points(s);
  const lrd::FitConfig cfg = make_fit_config(o, s);
  const std::vector<double> grid = resolve_grid(o, s);

  std::vector<lrd::PointFit> fits, inference;
  if (method == "local") {
    lrd::GridFit gf = lrd::fit_grid(s, F, cfg, grid);
    fits = std::move(gf.fits);
    inference = std::move(gf.inference);
  } else if (method == "l2") {
    lrd::DesignSpec design;
    design.kind = lrd::DesignSpec::Kind::lebesgue;
    if (support_str.empty())
      throw lrd::InvalidInput("--support lo,hi is required with --method l2");
    double lo, hi;
    char comma;
    std::stringstream ss(support_str);
    if (!(ss >> lo >> comma >> hi) || comma != ',' || !(lo < hi))
      throw lrd::InvalidInput("--support must be 'lo,hi' with lo < hi");
    design.support = std::make_pair(lo, hi);
    for (double x : grid) fits.push_back(lrd::l2_fit_point(s, F, cfg, design, x));
  } else {
    throw lrd::InvalidInput("unknown method: " + method);
  }

  std::ofstream out = open_out(o.output);
  out << "x,n_local,est,se,ci_lo,ci_hi\n";
  json jpoints = json::array();
  for (size_t i = 0; i < fits.size(); ++i) {
    const lrd::PointFit& f = fits[i];
    json jp;
    jp["x"] = f.x;
    jp["ok"] = f.ok;
    if (!f.ok) {
      jp["flag"] = f.flag;
      out << f.x << "," << f.n_local << ",nan,nan,nan,nan\n";
      jpoints.push_back(jp);
      continue;
    }
    const lrd::PointFit& inf = inference.empty() ? f : inference[i];
    const lrd::Interval ci = inf.ok ? lrd::ci_pointwise(inf, o.deriv, o.alpha)
                                    : lrd::ci_pointwise(f, o.deriv, o.alpha);
    out << f.x << "," << f.n_local << "," << f.estimate(o.deriv) << "," << ci.se << ","
        << ci.lo << "," << ci.hi << "\n";
    jp["est"] = f.estimate(o.deriv);
    jp["se"] = ci.se;
    if (o.matrices) {
      jp["gamma"] = matrix_json(f.gamma);
      jp["sigma"] = matrix_json(f.sigma);
      jp["omega"] = matrix_json(f.omega);
    }
    jpoints.push_back(jp);
  }
  json j = config_json(o, cfg, "fit");
  j["method"] = method;
  j["n"] = s.n();
  j["points"] = jpoints;
  write_json(o, j);
  std::cerr << "fit: " << s.n() << " rows, " << fits.size() << " grid points, h=" << cfg.h
            << "\n";
  return 0;
}

int run_band(const CommonOpts& o, int draws) {
  const CsvTable t = read_csv(o.input);
  std::optional<std::vector<double>> w;
  if (!o.wcol.empty()) w = numeric_column(t, o.wcol);
  const lrd::SortedSample s = lrd::sort_sample(numeric_column(t, o.xcol), w);
  const lrd::EdfValues F = lrd::edf_at_points(s);
  const lrd::FitConfig cfg = make_fit_config(o, s);

  lrd::BandConfig bc;
  bc.grid = resolve_grid(o, s);
  bc.alpha = o.alpha;
  bc.draws = draws;
  bc.seed = o.seed;
  bc.deriv = o.deriv;
  const lrd::GridFit gf = lrd::fit_grid(s, F, cfg, bc.grid);
  const lrd::BandResult band = lrd::confidence_band(s, F, gf, bc);

  std::ofstream out = open_out(o.output);
  out << "x,est,se,band_lo,band_hi\n";
  for (size_t i = 0; i < band.x.size(); ++i)
    out << band.x[i] << "," << band.center[i] << "," << band.se[i] << "," << band.lo[i]
        << "," << band.hi[i] << "\n";
  json j = config_json(o, cfg, "band");
  j["n"] = s.n();
  j["draws"] = band.draws;
  j["quantile"] = band.quantile;
  j["jitter_used"] = band.diag.jitter_used;
  j["eigen_clipped"] = band.diag.eigen_clipped;
  write_json(o, j);
  std::cerr << "band: q=" << band.quantile << " over " << band.x.size() << " grid points\n";
  return 0;
}

int run_efficiency(const CommonOpts& o, const std::string& table, int ell,
                   const std::vector<int>& j_list, int curve_points) {
  std::ofstream out = open_out(o.output);
  json j;
  j["schema"] = "lrd-output-v1";
  j["subcommand"] = "efficiency";
  j["seed"] = o.seed;
  if (table == "sa") {
    // Interior asymptotic variance constants of the density (ell=0) and first
    // derivative (ell=1) across polynomial orders, plus the efficiency bounds.
    out << "panel,kernel,p,constant\n";
    for (int panel_ell : {0, 1}) {
      for (const char* kname : {"uniform", "triangular", "epanechnikov"}) {
        lrd::KernelSpec k{lrd::kernel_from_string(kname)};
        for (int p = panel_ell + 1; p <= panel_ell + 4; ++p)
          out << panel_ell << "," << kname << "," << p << ","
              << lrd::asy_variance_interior(p, panel_ell, k) << "\n";
      }
      for (int p = panel_ell + 1; p <= panel_ell + 4; ++p)
        out << panel_ell << ",bound," << p << "," << lrd::variance_bound(p, panel_ell)
            << "\n";
    }
    j["table"] = "sa";
  } else if (table == "kernels") {
    if (curve_points < 64) throw lrd::InvalidInput("need at least 64 curve points");
    std::vector<double> grid(curve_points);
    for (int i = 0; i < curve_points; ++i)
      grid[i] = -1.0 + 2.0 * i / (curve_points - 1);
    lrd::KernelSpec k{lrd::kernel_from_string(o.kernel)};
    std::vector<std::vector<double>> curves;
    curves.push_back(lrd::equivalent_kernel(o.p, ell, k, std::nullopt, grid));
    for (int jj : j_list) {
      lrd::RedundantSpec q{jj,
                           ell % 2 == 0 ? lrd::RedundantSpec::Parity::odd
                                        : lrd::RedundantSpec::Parity::even,
                           false};
      curves.push_back(lrd::equivalent_kernel(o.p, ell, k, q, grid));
    }
    out << "u,phi_base";
    for (int jj : j_list) out << ",phi_j" << jj;
    out << "\n";
    for (int i = 0; i < curve_points; ++i) {
      out << grid[i];
      for (const auto& c : curves) out << "," << c[i];
      out << "\n";
    }
    j["table"] = "kernels";
    j["p"] = o.p;
    j["ell"] = ell;
    j["j"] = j_list;
  } else {
    throw lrd::InvalidInput("unknown table: " + table);
  }
  write_json(o, j);
  return 0;
}

int run_weights(const CommonOpts& o, const std::string& scheme, const std::string& tcol,
                const std::string& dcol, const std::vector<std::string>& zcols,
                const std::string& target) {
  const CsvTable t = read_csv(o.input);
  const std::vector<int> treat = binary_column(t, tcol);
  const int n = static_cast<int>(treat.size());
  Eigen::MatrixXd z(n, 1 + zcols.size());
  z.col(0).setOnes();
  for (size_t c = 0; c < zcols.size(); ++c) {
    const std::vector<double> col = numeric_column(t, zcols[c]);
    for (int i = 0; i < n; ++i) z(i, 1 + c) = col[i];
  }

  std::vector<double> w;
  if (scheme == "subgroup") {
    w = lrd::weights_subgroup(treat, 1);
  } else if (scheme == "counterfactual") {
    w = lrd::weights_counterfactual(treat, z);
  } else if (scheme == "complier") {
    if (dcol.empty()) throw lrd::InvalidInput("complier weights need --instrument");
    const std::vector<int> inst = binary_column(t, dcol);
    lrd::ComplierTarget which;
    if (target == "observed")
      which = lrd::ComplierTarget::observed;
    else if (target == "y0")
      which = lrd::ComplierTarget::y0;
    else if (target == "y1")
      which = lrd::ComplierTarget::y1;
    else
      throw lrd::InvalidInput("--target must be observed | y0 | y1");
    w = lrd::weights_complier(treat, inst, z, which);
  } else {
    throw lrd::InvalidInput("unknown scheme: " + scheme);
  }

  std::ofstream out = open_out(o.output);
  for (size_t c = 0; c < t.columns.size(); ++c)
    out << t.columns[c] << ",";
  out << "weight\n";
  for (int i = 0; i < n; ++i) {
    for (size_t c = 0; c < t.columns.size(); ++c) out << t.rows[i][c] << ",";
    out << w[i] << "\n";
  }
  json j;
  j["schema"] = "lrd-output-v1";
  j["subcommand"] = "weights";
  j["scheme"] = scheme;
  j["treatment"] = tcol;
  j["instrument"] = dcol;
  j["covariates"] = zcols;
  j["target"] = target;
  j["seed"] = o.seed;
  j["n"] = n;
  write_json(o, j);
  return 0;
}

int run_ivcheck(const CommonOpts& o, const std::string& tcol, const std::string& dcol,
                int draws) {
  const CsvTable t = read_csv(o.input);
  const std::vector<double> x = numeric_column(t, o.xcol);
  const std::vector<int> treat = binary_column(t, tcol);
  const std::vector<int> inst = binary_column(t, dcol);
  const lrd::IvWeights iw = lrd::weights_iv_validity(treat, inst);

  // Scaled one-sided densities: validity of the instrument requires the d=0
  // curve to dominate the d=1 curve pointwise.
  auto curve = [&](const std::vector<double>& w, double scale, const CommonOpts& oo,
                   std::uint64_t seed) {
    const lrd::SortedSample s = lrd::sort_sample(x, w);
    const lrd::EdfValues F = lrd::edf_at_points(s);
    lrd::FitConfig cfg = make_fit_config(oo, s);
    lrd::BandConfig bc;
    bc.grid = resolve_grid(oo, s);
    bc.alpha = oo.alpha;
    bc.draws = draws;
    bc.seed = seed;
    bc.deriv = 0;
    lrd::BandResult band = lrd::confidence_band(s, F, lrd::fit_grid(s, F, cfg, bc.grid), bc);
    for (size_t i = 0; i < band.x.size(); ++i) {
      band.center[i] *= scale;
      band.se[i] *= scale;
      band.lo[i] *= scale;
      band.hi[i] *= scale;
    }
    return band;
  };
  const lrd::BandResult b00 = curve(iw.w00, iw.scale00, o, o.seed);
  const lrd::BandResult b10 = curve(iw.w10, iw.scale10, o, o.seed + 1);

  std::ofstream out = open_out(o.output);
  out << "x,f00_scaled,f00_lo,f00_hi,f10_scaled,f10_lo,f10_hi\n";
  bool violation = false;
  for (size_t i = 0; i < b00.x.size(); ++i) {
    out << b00.x[i] << "," << b00.center[i] << "," << b00.lo[i] << "," << b00.hi[i] << ","
        << b10.center[i] << "," << b10.lo[i] << "," << b10.hi[i] << "\n";
    if (b00.hi[i] < b10.lo[i]) violation = true;  // bands separate the wrong way
  }
  json j;
  j["schema"] = "lrd-output-v1";
  j["subcommand"] = "ivcheck";
  j["seed"] = o.seed;
  j["scale00"] = iw.scale00;
  j["scale10"] = iw.scale10;
  j["violation"] = violation;
  write_json(o, j);
  std::cerr << "ivcheck: " << (violation ? "bands separate against validity\n"
                                         : "no violation detected\n");
  return 0;
}

std::map<std::string, std::string> read_kv_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw lrd::InvalidInput("cannot open config file: " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const size_t eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const size_t b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      const size_t e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

int run_simulate(const CommonOpts& o, const std::string& config_path) {
  const auto kv = read_kv_config(config_path);
  auto get = [&](const std::string& key, const std::string& dflt) {
    auto it = kv.find(key);
    return it == kv.end() ? dflt : it->second;
  };
  static const std::vector<std::string> known = {
      "experiment", "dgp",   "mu",   "sigma",  "rate",  "a",        "b",
      "n",          "reps",  "p",    "deriv",  "kernel", "h",       "x",
      "alpha",      "seed",  "grid_min", "grid_max", "grid_count", "draws",
      "j_list",     "robust"};
  for (const auto& [k, v] : kv)
    if (std::find(known.begin(), known.end(), k) == known.end())
      throw lrd::InvalidInput("unknown config key: " + k);

  lrd::DgpSpec dgp;
  const std::string kind = get("dgp", "gaussian");
  if (kind == "gaussian")
    dgp.kind = lrd::DgpSpec::Kind::gaussian;
  else if (kind == "exponential")
    dgp.kind = lrd::DgpSpec::Kind::exponential;
  else if (kind == "uniform")
    dgp.kind = lrd::DgpSpec::Kind::uniform;
  else if (kind == "kinked")
    dgp.kind = lrd::DgpSpec::Kind::kinked;
  else
    throw lrd::InvalidInput("unknown dgp: " + kind);
  dgp.mu = std::stod(get("mu", "0"));
  dgp.sigma = std::stod(get("sigma", "1"));
  dgp.rate = std::stod(get("rate", "1"));
  dgp.a = std::stod(get("a", "0"));
  dgp.b = std::stod(get("b", "1"));

  lrd::FitConfig cfg;
  cfg.kernel.kind = lrd::kernel_from_string(get("kernel", "epanechnikov"));
  cfg.basis.p = std::stoi(get("p", "2"));
  cfg.deriv = std::stoi(get("deriv", "0"));
  const std::string hs = get("h", "rot");
  cfg.h = hs == "rot" ? 0.0 : std::stod(hs);
  if (get("robust", "0") == "1") {
    lrd::BasisSpec inf = cfg.basis;
    inf.p = cfg.basis.p + 1;
    cfg.inference_basis = inf;
  }
  const int n = std::stoi(get("n", "1000"));
  const int reps = std::stoi(get("reps", "500"));
  const double x = std::stod(get("x", "0"));
  const double alpha = std::stod(get("alpha", "0.05"));
  const std::uint64_t seed = std::stoull(get("seed", "12345"));
  const std::string experiment = get("experiment", "pointwise");

  std::ofstream out = open_out(o.output);
  json j;
  j["schema"] = "lrd-output-v1";
  j["subcommand"] = "simulate";
  j["config"] = json::object();
  for (const auto& [k, v] : kv) j["config"][k] = v;
  j["seed"] = seed;

  if (experiment == "pointwise") {
    const lrd::ExperimentResult r =
        lrd::run_pointwise_coverage(dgp, n, reps, cfg, x, alpha, seed);
    out << "experiment,coverage,mean_bias,sd,mean_se,reps\n";
    out << "pointwise," << r.coverage << "," << r.mean_bias << "," << r.sd << ","
        << r.mean_se << "," << r.reps << "\n";
    j["coverage"] = r.coverage;
  } else if (experiment == "uniform") {
    lrd::BandConfig bc;
    const double glo = std::stod(get("grid_min", "-1"));
    const double ghi = std::stod(get("grid_max", "1"));
    const int gc = std::stoi(get("grid_count", "30"));
    for (int i = 0; i < gc; ++i) bc.grid.push_back(glo + (ghi - glo) * i / (gc - 1));
    bc.alpha = alpha;
    bc.draws = std::stoi(get("draws", "2000"));
    bc.deriv = cfg.deriv;
    const lrd::ExperimentResult r = lrd::run_uniform_coverage(dgp, n, reps, cfg, bc, seed);
    out << "experiment,coverage,reps,band_dominates_ci\n";
    out << "uniform," << r.coverage << "," << r.reps << "," << (r.all_q_ge_z ? 1 : 0)
        << "\n";
    j["coverage"] = r.coverage;
  } else if (experiment == "efficiency") {
    std::vector<int> j_list;
    std::stringstream ss(get("j_list", "1,2,3"));
    std::string tok;
    while (std::getline(ss, tok, ',')) j_list.push_back(std::stoi(tok));
    const auto rows =
        lrd::run_efficiency(dgp, n, reps, cfg.basis.p, cfg.deriv, j_list, x, seed, cfg.h);
    out << "j,mc_variance,mc_mean\n";
    for (const auto& row : rows)
      out << row.j << "," << row.mc_variance << "," << row.mc_mean << "\n";
  } else {
    throw lrd::InvalidInput("unknown experiment: " + experiment);
  }
  write_json(o, j);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"local regression distribution estimation"};
  app.set_help_flag("--help", "print help");
  app.require_subcommand(1);

  CommonOpts o;
  std::string method = "local", support_str, table = "sa", scheme = "subgroup";
  std::string tcol = "t", dcol, target = "observed", sim_config;
  std::vector<std::string> zcols;
  std::vector<int> j_list;
  int draws = 2000, ell = 0, curve_points = 257;

  CLI::App* fit = app.add_subcommand("fit", "estimate F/f/f' on a grid");
  add_common(fit, o);
  fit->add_option("--method", method, "local | l2");
  fit->add_option("--support", support_str, "known support lo,hi (l2 method)");
  fit->set_config("--config");

  CLI::App* band = app.add_subcommand("band", "uniform confidence band");
  add_common(band, o);
  band->add_option("--draws", draws, "Gaussian process draws");
  band->set_config("--config");

  CLI::App* eff = app.add_subcommand("efficiency", "asymptotic variance tables");
  add_common(eff, o, false);
  eff->add_option("--table", table, "sa | kernels");
  eff->add_option("--ell", ell, "target derivative order");
  eff->add_option("--j", j_list, "redundant regressor indices")->delimiter(',');
  eff->add_option("--curve-points", curve_points, "equivalent kernel grid size");

  CLI::App* wts = app.add_subcommand("weights", "program evaluation weights");
  add_common(wts, o);
  wts->add_option("--scheme", scheme, "subgroup | counterfactual | complier");
  wts->add_option("--treatment", tcol, "treatment column");
  wts->add_option("--instrument", dcol, "instrument column");
  wts->add_option("--covariates", zcols, "covariate columns")->delimiter(',');
  wts->add_option("--target", target, "complier target: observed | y0 | y1");

  CLI::App* ivc = app.add_subcommand("ivcheck", "instrument validity density curves");
  add_common(ivc, o);
  ivc->add_option("--treatment", tcol, "treatment column");
  ivc->add_option("--instrument", dcol, "instrument column")->required();
  ivc->add_option("--draws", draws, "Gaussian process draws");

  CLI::App* sim = app.add_subcommand("simulate", "Monte Carlo experiments");
  add_common(sim, o, false);
  sim->add_option("--config", sim_config, "key=value experiment description")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (fit->parsed()) return run_fit(o, method, support_str);
    if (band->parsed()) return run_band(o, draws);
    if (eff->parsed()) return run_efficiency(o, table, ell, j_list, curve_points);
    if (wts->parsed()) return run_weights(o, scheme, tcol, dcol, zcols, target);
    if (ivc->parsed()) return run_ivcheck(o, tcol, dcol, draws);
    if (sim->parsed()) return run_simulate(o, sim_config);
  } catch (const lrd::InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const lrd::Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
