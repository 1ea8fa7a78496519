#include "fracmim/fractional.hpp"
#include "fracmim/solver.hpp"
#include "fracmim/types.hpp"
#include "fracmim/verification.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace {

using fracmim::Index;

struct ConfigError : std::domain_error {
  explicit ConfigError(const std::string& msg) : std::domain_error(msg) {}
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_short(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "' expects a number, got '" + v + "'");
  }
}

long long parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long i = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return i;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "' expects an integer, got '" + v + "'");
  }
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(key, trim(item)));
  if (out.empty()) throw ConfigError("config key '" + key + "' expects a comma list of numbers");
  return out;
}

std::string join_list(const std::vector<double>& vals) {
  std::string s;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (i) s += ",";
    s += fmt(vals[i]);
  }
  return s;
}

std::map<std::string, std::string> load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("malformed config line: " + line);
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

// Ties a subcommand's keys to both CLI flags and config-file entries. Flags
// win over the file; the resolved state is echoed into every output header.
class KeyedOptions {
 public:
  explicit KeyedOptions(CLI::App* cmd) : cmd_(cmd) {}

  void add_double(const std::string& key, double& ref, const std::string& desc) {
    cmd_->add_option("--" + key, ref, desc);
    setters_[key] = [&ref, key](const std::string& v) { ref = parse_double(key, v); };
    getters_[key] = [&ref] { return fmt(ref); };
  }

  void add_index(const std::string& key, Index& ref, const std::string& desc) {
    cmd_->add_option("--" + key, ref, desc);
    setters_[key] = [&ref, key](const std::string& v) { ref = parse_int(key, v); };
    getters_[key] = [&ref] { return std::to_string(ref); };
  }

  void add_int(const std::string& key, int& ref, const std::string& desc) {
    cmd_->add_option("--" + key, ref, desc);
    setters_[key] = [&ref, key](const std::string& v) {
      ref = static_cast<int>(parse_int(key, v));
    };
    getters_[key] = [&ref] { return std::to_string(ref); };
  }

  void add_uint64(const std::string& key, std::uint64_t& ref, const std::string& desc) {
    cmd_->add_option("--" + key, ref, desc);
    setters_[key] = [&ref, key](const std::string& v) { ref = parse_int(key, v); };
    getters_[key] = [&ref] { return std::to_string(ref); };
  }

  void add_string(const std::string& key, std::string& ref, const std::string& desc) {
    cmd_->add_option("--" + key, ref, desc);
    setters_[key] = [&ref](const std::string& v) { ref = v; };
    getters_[key] = [&ref] { return ref; };
  }

  void add_list(const std::string& key, std::vector<double>& ref, const std::string& desc) {
    cmd_->add_option("--" + key, list_buffers_[key], desc);
    setters_[key] = [&ref, key](const std::string& v) { ref = parse_list(key, v); };
    getters_[key] = [&ref] { return join_list(ref); };
    list_targets_[key] = &ref;
  }

  // Applies the config file (if any), letting explicitly passed flags win.
  void resolve(const std::string& config_path) {
    for (const auto& [key, target] : list_targets_) {
      if (cmd_->count("--" + key) > 0)
        *target = parse_list(key, list_buffers_[key]);
    }
    if (config_path.empty()) return;
    for (const auto& [key, value] : load_config_file(config_path)) {
      const auto it = setters_.find(key);
      if (it == setters_.end()) throw ConfigError("unknown config key: " + key);
      if (cmd_->count("--" + key) == 0) it->second(value);
    }
  }

  bool user_set(const std::string& key, const std::string& config_path) const {
    if (cmd_->count("--" + key) > 0) return true;
    if (config_path.empty()) return false;
    return load_config_file(config_path).count(key) > 0;
  }

  std::string resolved() const {
    std::string s;
    for (const auto& [key, get] : getters_) {
      if (!s.empty()) s += " ";
      s += key + "=" + get();
    }
    return s;
  }

 private:
  CLI::App* cmd_;
  std::map<std::string, std::function<void(const std::string&)>> setters_;
  std::map<std::string, std::function<std::string()>> getters_;
  std::map<std::string, std::string> list_buffers_;
  std::map<std::string, std::vector<double>*> list_targets_;
};

struct CommonArgs {
  std::string config_path;
  std::string out_path;
  bool gnuplot = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "flat key=value config file");
  cmd->add_option("--out", args.out_path, "output CSV path")->required();
  cmd->add_flag("--gnuplot", args.gnuplot, "also write a companion gnuplot script");
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  return out;
}

void write_header(std::ostream& os, const std::string& command, const std::string& resolved,
                  const std::string& columns) {
  os << "# fracmim " << fracmim::kVersion << "\n";
  os << "# command: " << command << "\n";
  os << "# config: " << resolved << "\n";
  os << "# columns: " << columns << "\n";
}

void write_gnuplot(const std::string& out_path, const std::string& body) {
  std::ofstream gp(out_path + ".gp");
  if (!gp) throw std::runtime_error("cannot open gnuplot script: " + out_path + ".gp");
  gp << "set datafile commentschars \"#\"\n";
  gp << "set datafile separator \",\"\n";
  gp << body;
}

std::string alpha_suffixed(const std::string& path, double alpha) {
  const std::string tag = "_alpha" + std::string(fmt_short(alpha));
  const auto dot = path.find_last_of('.');
  const auto slash = path.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return path + tag;
  return path.substr(0, dot) + tag + path.substr(dot);
}

// ---- solve ----

struct SolveArgs {
  CommonArgs common;
  Index example = 1;
  double alpha = 0.5;
  Index M = 64;
  Index N = 64;
  double L = 1.0;
  double T = 1.0;
};

void run_solve(const SolveArgs& a, const KeyedOptions& keys) {
  if (a.example != 0 && a.example != 1 && a.example != 2)
    throw ConfigError("example must be 0 (zero problem), 1 or 2");

  fracmim::Problem problem;
  if (a.example == 0) {
    problem.alpha = a.alpha;
    problem.phi = [](double) { return 0.0; };
    problem.phi_xx = [](double) { return 0.0; };
    problem.source = [](double, double) { return 0.0; };
  } else {
    problem = fracmim::manufactured_source(static_cast<int>(a.example), a.alpha);
  }
  problem.length = a.L;
  problem.horizon = a.T;

  const fracmim::Grid grid = fracmim::make_grid(problem, a.M, a.N);
  const fracmim::SolutionHistory history = fracmim::solve(problem, grid);

  std::vector<Index> snaps;
  for (int q = 1; q <= 4; ++q)
    snaps.push_back(static_cast<Index>(std::llround(static_cast<double>(a.N) * q / 4.0)));

  std::string columns = "x";
  for (Index k : snaps) {
    const std::string ts = fmt_short(grid.t(k));
    columns += ",u_num@t=" + ts;
    if (problem.exact) columns += ",u_exact@t=" + ts;
  }

  auto out = open_out(a.common.out_path);
  write_header(out, "solve", keys.resolved(), columns);
  for (Index i = 0; i <= a.M; ++i) {
    out << fmt(grid.x(i));
    for (Index k : snaps) {
      out << "," << fmt(history.levels[static_cast<std::size_t>(k)][i]);
      if (problem.exact) out << "," << fmt(problem.exact(grid.x(i), grid.t(k)));
    }
    out << "\n";
  }

  if (a.common.gnuplot) {
    std::string body = "plot ";
    for (std::size_t q = 0; q < snaps.size(); ++q) {
      const int col = problem.exact ? 2 + 2 * static_cast<int>(q) : 2 + static_cast<int>(q);
      if (q) body += ", \\\n     ";
      body += "'" + a.common.out_path + "' using 1:" + std::to_string(col) +
              " with lines title 'level " + std::to_string(snaps[q]) + "'";
    }
    write_gnuplot(a.common.out_path, body + "\n");
  }
}

// ---- converge ----

struct ConvergeArgs {
  CommonArgs common;
  Index example = 1;
  std::vector<double> alphas = {0.1, 0.5, 0.9};
  std::string axis = "space";
  double fixed_step = 1.0 / 2000.0;
  std::vector<double> steps = {1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128};
};

void run_converge(const ConvergeArgs& a, const KeyedOptions& keys) {
  if (a.example != 1 && a.example != 2) throw ConfigError("example must be 1 or 2");
  fracmim::RefineAxis axis;
  if (a.axis == "space")
    axis = fracmim::RefineAxis::Space;
  else if (a.axis == "time")
    axis = fracmim::RefineAxis::Time;
  else
    throw ConfigError("axis must be 'space' or 'time'");

  std::vector<std::string> written;
  for (double alpha : a.alphas) {
    const fracmim::ConvergenceReport report = fracmim::convergence_study(
        static_cast<int>(a.example), alpha, axis, a.fixed_step, a.steps);

    const std::string path =
        a.alphas.size() == 1 ? a.common.out_path : alpha_suffixed(a.common.out_path, alpha);
    auto out = open_out(path);
    write_header(out, "converge", keys.resolved() + " current_alpha=" + fmt(alpha),
                 "h,tau,error,rate");
    for (const auto& row : report.rows) {
      out << fmt(row.h) << "," << fmt(row.tau) << "," << fmt(row.error) << ",";
      if (row.has_rate) out << fmt(row.rate);
      out << "\n";
    }
    written.push_back(path);
  }

  if (a.common.gnuplot) {
    const int step_col = axis == fracmim::RefineAxis::Space ? 1 : 2;
    std::string body = "set logscale xy\nplot ";
    for (std::size_t i = 0; i < written.size(); ++i) {
      if (i) body += ", \\\n     ";
      body += "'" + written[i] + "' using " + std::to_string(step_col) +
              ":3 with linespoints title 'alpha=" + fmt_short(a.alphas[i]) + "'";
    }
    write_gnuplot(a.common.out_path, body + "\n");
  }
}

// ---- frac-curves ----

struct CurvesArgs {
  CommonArgs common;
  std::string function = "cos";
  std::vector<double> alphas = {0.1, 0.3, 0.6, 0.9};
  double t_max = 20.0;
  Index samples = 400;
  fracmim::QuadratureConfig quad;
};

void run_curves(CurvesArgs& a, const KeyedOptions& keys, bool alphas_user_set) {
  fracmim::CurveFunction fn;
  if (a.function == "cos") {
    fn = fracmim::CurveFunction::Cos;
  } else if (a.function == "sin") {
    fn = fracmim::CurveFunction::Sin;
    if (!alphas_user_set) a.alphas = {1.1, 1.3, 1.6, 1.9};
  } else {
    throw ConfigError("function must be 'cos' or 'sin'");
  }

  const auto rows = fracmim::agreement_curves(fn, a.alphas, a.t_max, a.samples, a.quad);

  auto out = open_out(a.common.out_path);
  write_header(out, "frac-curves", keys.resolved(), "alpha,t,caputo,tcaputo,abs_diff");
  for (const auto& row : rows) {
    out << fmt(row.alpha) << "," << fmt(row.t) << "," << fmt(row.caputo) << ","
        << fmt(row.tcaputo) << "," << fmt(std::fabs(row.caputo - row.tcaputo)) << "\n";
  }

  if (a.common.gnuplot) {
    write_gnuplot(a.common.out_path,
                  "plot '" + a.common.out_path +
                      "' using 2:3 with points title 'caputo', \\\n     '" + a.common.out_path +
                      "' using 2:4 with lines title 'transformed'\n");
  }
}

// ---- stability ----

struct StabilityArgs {
  CommonArgs common;
  double alpha = 0.5;
  Index M = 64;
  Index N = 100;
  double L = 1.0;
  double T = 1.0;
  std::uint64_t seed = 12345;
};

void run_stability(const StabilityArgs& a, const KeyedOptions& keys) {
  fracmim::Grid grid;
  if (a.M < 2 || a.N < 1) throw ConfigError("stability needs M >= 2 and N >= 1");
  if (!(a.L > 0) || !(a.T > 0)) throw ConfigError("stability needs positive L and T");
  grid.M = a.M;
  grid.N = a.N;
  grid.h = a.L / static_cast<double>(a.M);
  grid.tau = a.T / static_cast<double>(a.N);

  const double ratio = fracmim::stability_probe(a.alpha, grid, a.seed);

  auto out = open_out(a.common.out_path);
  write_header(out, "stability", keys.resolved(), "alpha,M,N,h,tau,seed,max_ratio");
  out << fmt(a.alpha) << "," << a.M << "," << a.N << "," << fmt(grid.h) << "," << fmt(grid.tau)
      << "," << a.seed << "," << fmt(ratio) << "\n";

  std::cout << "max_ratio = " << fmt(ratio) << " (bound 1+1e-12)\n";

  if (a.common.gnuplot) {
    write_gnuplot(a.common.out_path, "set yrange [0:1.5]\nplot '" + a.common.out_path +
                                         "' using 6:7 with points title 'max ratio'\n");
  }
}

// ---- truncation ----

struct TruncationArgs {
  CommonArgs common;
  double alpha = 0.5;
  std::string probe = "t3";
  double t_eval = 1.0;
  std::vector<double> taus;  // default derived from t_eval below
  fracmim::QuadratureConfig quad{256, 8, 1e-10};
};

void run_truncation(TruncationArgs& a, const KeyedOptions& keys, bool taus_user_set) {
  if (!taus_user_set) {
    a.taus.clear();
    for (Index k : {4, 9, 19, 39, 79})
      a.taus.push_back(a.t_eval / (static_cast<double>(k) + 0.5));
  }

  fracmim::SmoothFunction probe = fracmim::SmoothFunction::monomial(3);
  if (a.probe == "t3")
    probe = fracmim::SmoothFunction::monomial(3);
  else if (a.probe == "t")
    probe = fracmim::SmoothFunction::monomial(1);
  else if (a.probe == "exp")
    probe = fracmim::SmoothFunction::exponential();
  else
    throw ConfigError("probe must be one of: t, t3, exp");

  const fracmim::TruncationReport report =
      fracmim::truncation_probe(a.alpha, probe, a.t_eval, a.taus, a.quad);

  auto out = open_out(a.common.out_path);
  write_header(out, "truncation", keys.resolved(), "tau,max_error,first_step_error,observed_order");
  for (const auto& row : report.rows) {
    out << fmt(row.tau) << "," << fmt(row.max_error) << "," << fmt(row.first_step_error) << ",";
    if (row.has_order) out << fmt(row.observed_order);
    out << "\n";
  }

  if (a.common.gnuplot) {
    write_gnuplot(a.common.out_path, "set logscale xy\nplot '" + a.common.out_path +
                                         "' using 1:3 with linespoints title 'first step', \\\n"
                                         "     '" + a.common.out_path +
                                         "' using 1:2 with linespoints title 'max'\n");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fracmim: memory-kernel transport solver and verification tool"};
  app.require_subcommand(1);

  auto* solve_cmd = app.add_subcommand("solve", "run one scheme solve and emit snapshots");
  SolveArgs solve_args;
  add_common(solve_cmd, solve_args.common);
  KeyedOptions solve_keys(solve_cmd);
  solve_keys.add_index("example", solve_args.example, "benchmark id (0 zero problem, 1, 2)");
  solve_keys.add_double("alpha", solve_args.alpha, "fractional order in (0,1)");
  solve_keys.add_index("M", solve_args.M, "spatial intervals");
  solve_keys.add_index("N", solve_args.N, "time steps");
  solve_keys.add_double("L", solve_args.L, "domain length");
  solve_keys.add_double("T", solve_args.T, "time horizon");
  solve_cmd->callback([&] {
    solve_keys.resolve(solve_args.common.config_path);
    run_solve(solve_args, solve_keys);
  });

  auto* conv_cmd = app.add_subcommand("converge", "refinement study against the exact solution");
  ConvergeArgs conv_args;
  add_common(conv_cmd, conv_args.common);
  KeyedOptions conv_keys(conv_cmd);
  conv_keys.add_index("example", conv_args.example, "benchmark id (1 or 2)");
  conv_keys.add_list("alphas", conv_args.alphas, "comma list of fractional orders");
  conv_keys.add_string("axis", conv_args.axis, "refined axis: space or time");
  conv_keys.add_double("fixed_step", conv_args.fixed_step, "step of the non-refined axis");
  conv_keys.add_list("steps", conv_args.steps, "comma list of refined steps, decreasing");
  conv_cmd->callback([&] {
    conv_keys.resolve(conv_args.common.config_path);
    run_converge(conv_args, conv_keys);
  });

  auto* curves_cmd =
      app.add_subcommand("frac-curves", "sample both derivative definitions of cos/sin");
  CurvesArgs curves_args;
  add_common(curves_cmd, curves_args.common);
  KeyedOptions curves_keys(curves_cmd);
  curves_keys.add_string("function", curves_args.function, "cos (orders in (0,1)) or sin ((1,2))");
  curves_keys.add_list("alphas", curves_args.alphas, "comma list of orders");
  curves_keys.add_double("t_max", curves_args.t_max, "right end of the sample interval");
  curves_keys.add_index("samples", curves_args.samples, "number of sample points");
  curves_keys.add_int("panels_per_unit_time", curves_args.quad.panels_per_unit_time,
                        "quadrature resolution");
  curves_keys.add_int("refinement_cap", curves_args.quad.refinement_cap,
                        "quadrature refinement doublings");
  curves_keys.add_double("rel_tol", curves_args.quad.rel_tol, "quadrature acceptance tolerance");
  curves_cmd->callback([&] {
    curves_keys.resolve(curves_args.common.config_path);
    const bool alphas_set = curves_keys.user_set("alphas", curves_args.common.config_path);
    run_curves(curves_args, curves_keys, alphas_set);
  });

  auto* stab_cmd = app.add_subcommand("stability", "perturbation growth probe");
  StabilityArgs stab_args;
  add_common(stab_cmd, stab_args.common);
  KeyedOptions stab_keys(stab_cmd);
  stab_keys.add_double("alpha", stab_args.alpha, "fractional order in (0,1)");
  stab_keys.add_index("M", stab_args.M, "spatial intervals");
  stab_keys.add_index("N", stab_args.N, "time steps");
  stab_keys.add_double("L", stab_args.L, "domain length");
  stab_keys.add_double("T", stab_args.T, "time horizon");
  stab_keys.add_uint64("seed", stab_args.seed, "perturbation seed");
  stab_cmd->callback([&] {
    stab_keys.resolve(stab_args.common.config_path);
    run_stability(stab_args, stab_keys);
  });

  auto* trunc_cmd = app.add_subcommand("truncation", "discrete-operator remainder orders");
  TruncationArgs trunc_args;
  add_common(trunc_cmd, trunc_args.common);
  KeyedOptions trunc_keys(trunc_cmd);
  trunc_keys.add_double("alpha", trunc_args.alpha, "fractional order in (0,1)");
  trunc_keys.add_string("probe", trunc_args.probe, "probe function: t, t3 or exp");
  trunc_keys.add_double("t_eval", trunc_args.t_eval, "evaluation time");
  trunc_keys.add_list("taus", trunc_args.taus, "comma list of step sizes (must hit t_eval on "
                                               "half-steps); default derives from t_eval");
  trunc_keys.add_int("panels_per_unit_time", trunc_args.quad.panels_per_unit_time,
                       "reference quadrature resolution");
  trunc_keys.add_int("refinement_cap", trunc_args.quad.refinement_cap,
                       "reference quadrature refinement doublings");
  trunc_keys.add_double("rel_tol", trunc_args.quad.rel_tol,
                        "reference quadrature acceptance tolerance");
  trunc_cmd->callback([&] {
    trunc_keys.resolve(trunc_args.common.config_path);
    const bool taus_set = trunc_keys.user_set("taus", trunc_args.common.config_path);
    run_truncation(trunc_args, trunc_keys, taus_set);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.get_name() << ": " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "runtime failure: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
