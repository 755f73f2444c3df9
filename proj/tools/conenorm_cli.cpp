// conenorm: command-line front end.
//
//   conenorm norm --matrix A.csv --alpha a.json --beta b.json [--tol 1e-10] [--force]
//   conenorm kappa --matrix A.mtx
//   conenorm lsc --kernel K.csv [--pi pi.txt] [--t-grid 1e-4:1:30]
//   conenorm experiment kappa-dist --seed 1 --out kappa.csv
//
// Exit codes: 0 ok, 1 bad input, 2 no contraction certificate,
// 3 iteration budget exhausted or uncertified result.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "conenorm/conenorm.hpp"

using nlohmann::json;
using namespace conenorm;

namespace {

enum Exit { kOk = 0, kBadInput = 1, kUncertified = 2, kBudget = 3 };

// JSON has no infinity; non-finite values become strings.
json num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

json vec(const Vector& v) {
  json a = json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void print_text(const json& j, const std::string& indent = "") {
  for (const auto& [key, value] : j.items()) {
    if (value.is_object()) {
      std::cout << indent << key << ":\n";
      print_text(value, indent + "  ");
    } else if (value.is_number_float()) {
      std::cout << indent << key << ": " << fmt(value.get<double>()) << '\n';
    } else if (value.is_array()) {
      std::cout << indent << key << ":";
      for (const auto& x : value) std::cout << ' ' << (x.is_number_float() ? fmt(x.get<double>()) : x.dump());
      std::cout << '\n';
    } else if (value.is_string()) {
      std::cout << indent << key << ": " << value.get<std::string>() << '\n';
    } else {
      std::cout << indent << key << ": " << value.dump() << '\n';
    }
  }
}

void emit(const json& j, const std::string& format) {
  if (format == "json") {
    std::cout << j.dump(2) << '\n';
  } else {
    print_text(j);
  }
}

NormSpec load_spec(const std::optional<std::string>& path, std::size_t dim) {
  if (!path) return WeightedPNorm::plain(dim, 2.0);
  return parse_norm_spec(read_text_file(*path));
}

std::vector<double> parse_t_grid(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ':')) parts.push_back(part);
  if (parts.size() != 3) throw std::invalid_argument("--t-grid: expected start:stop:count");
  try {
    std::size_t used = 0;
    const double start = std::stod(parts[0]);
    const double stop = std::stod(parts[1]);
    const long count = std::stol(parts[2], &used);
    if (used != parts[2].size() || count < 1) throw std::invalid_argument("count");
    return log_grid(start, stop, static_cast<std::size_t>(count));
  } catch (const std::logic_error&) {
    throw std::invalid_argument("--t-grid: malformed value '" + s + "'");
  }
}

struct NormArgs {
  std::string matrix;
  std::optional<std::string> alpha, beta;
  double tol = 1e-10;
  std::size_t max_iters = 100000;
  bool force = false;
};

int cmd_norm(const NormArgs& args, const std::string& format) {
  const NonnegMatrix a = read_matrix(args.matrix);
  const NormSpec alpha = load_spec(args.alpha, a.rows());
  const NormSpec beta = load_spec(args.beta, a.cols());
  const ProblemInstance inst(a, alpha, beta);

  SolveOptions opt;
  opt.tol = args.tol;
  opt.max_iters = args.max_iters;
  opt.force = args.force;
  PowerResult res;
  try {
    res = solve(inst, opt);
  } catch (const NoCertificate& e) {
    const Certificate c = certificate(inst);
    std::cerr << "conenorm: no contraction certificate, tau = " << fmt(e.tau())
              << " >= 1 (kappa_A = " << fmt(c.kappa_A) << ", kappa_At = " << fmt(c.kappa_At)
              << ", bound_J_alpha = " << fmt(c.bound_J_alpha)
              << ", bound_J_beta_star = " << fmt(c.bound_J_beta_star) << "); rerun with --force\n";
    return kUncertified;
  }

  const Certificate& c = res.cert;
  json out;
  out["version"] = kVersion;
  out["parameters"] = {{"matrix", args.matrix},
                       {"rows", a.rows()},
                       {"cols", a.cols()},
                       {"alpha", to_json(alpha)},
                       {"beta", to_json(beta)},
                       {"tol", num(args.tol)},
                       {"max_iters", args.max_iters},
                       {"force", args.force}};
  out["norm_estimate"] = num(res.norm_estimate);
  out["lower"] = num(res.lower);
  out["upper"] = num(res.upper);
  out["tau"] = num(res.tau);
  out["certified"] = res.certified;
  out["kappa_A"] = num(c.kappa_A);
  out["kappa_At"] = num(c.kappa_At);
  out["bound_J_alpha"] = num(c.bound_J_alpha);
  out["bound_J_beta_star"] = num(c.bound_J_beta_star);
  out["C"] = num(res.C);
  out["C_tilde"] = num(res.C_tilde);
  out["r"] = num(c.r);
  out["gamma"] = num(c.gamma);
  out["gamma_exact"] = c.gamma_exact;
  out["cost_per_iteration"] = c.cost_per_iteration;
  out["iterations"] = res.iterations;
  out["converged"] = res.converged;
  out["a_priori_gap"] = num(res.a_priori_gap);
  out["a_posteriori_gap"] = num(res.a_posteriori_gap);
  out["maximizer"] = vec(res.maximizer);
  emit(out, format);

  if (!res.converged) {
    std::cerr << "conenorm: iteration budget exhausted after " << res.iterations << " steps\n";
    return kBudget;
  }
  if (!res.certified) {
    std::cerr << "conenorm: forced run, tau = " << fmt(res.tau) << " >= 1, result is not certified\n";
    return kBudget;
  }
  return kOk;
}

int cmd_kappa(const std::string& path, const std::string& format) {
  const NonnegMatrix a = read_matrix(path);
  const double d = projective_diameter(a);
  const double dt = projective_diameter(a.transpose());
  json out;
  out["version"] = kVersion;
  out["parameters"] = {{"matrix", path}, {"rows", a.rows()}, {"cols", a.cols()}};
  out["delta_A"] = num(d);
  out["kappa_A"] = num(birkhoff_from_diameter(d));
  out["delta_At"] = num(dt);
  out["kappa_At"] = num(birkhoff_from_diameter(dt));
  out["columns_comparable"] = std::isfinite(d);
  emit(out, format);
  return kOk;
}

int cmd_lsc(const std::string& kernel, const std::optional<std::string>& pi_path,
            const std::optional<std::string>& grid_spec, const std::string& format) {
  const NonnegMatrix k = read_matrix(kernel);
  std::optional<Vector> pi;
  if (pi_path) pi = read_vector(*pi_path);
  const MarkovChain chain(k, pi);
  const std::vector<double> grid = grid_spec ? parse_t_grid(*grid_spec) : default_t_grid();
  const LscReport rep = sigma_lower_bound(chain, grid);

  json out;
  out["version"] = kVersion;
  out["parameters"] = {{"kernel", kernel},
                       {"pi", pi_path ? json(*pi_path) : json(nullptr)},
                       {"t_grid", grid_spec ? json(*grid_spec) : json("default")},
                       {"states", chain.size()}};
  out["pi"] = vec(chain.pi());
  json rows = json::array();
  for (const auto& p : rep.per_t) {
    rows.push_back({{"t", num(p.t)}, {"rho", num(p.rho)}, {"sigma_lb", num(p.sigma_lb)}, {"reliable", p.reliable}});
  }
  out["per_t"] = rows;
  out["sigma_lower"] = num(rep.sigma_lower);
  out["best_t"] = num(rep.best_t);
  out["sigma_upper"] = num(rep.sigma_upper);
  if (chain.size() == 2) {
    const double a = k(0, 1), b = k(1, 0);
    out["sigma_exact"] = num(two_state_sigma(a, b));
    out["sqrt_ab"] = num(std::sqrt(a * b));
  }

  if (format == "json") {
    std::cout << out.dump(2) << '\n';
    return kOk;
  }
  std::printf("%-24s %-24s %-24s %s\n", "t", "rho", "sigma_lb", "reliable");
  for (const auto& p : rep.per_t) {
    std::printf("%-24.17g %-24.17g %-24.17g %s\n", p.t, p.rho, p.sigma_lb, p.reliable ? "yes" : "no");
  }
  std::printf("sigma_lower: %.17g (t = %.17g)\n", rep.sigma_lower, rep.best_t);
  std::printf("sigma_upper: %.17g\n", rep.sigma_upper);
  if (out.contains("sigma_exact")) {
    std::printf("sigma_exact: %.17g\n", out["sigma_exact"].get<double>());
    std::printf("sqrt_ab: %.17g\n", out["sqrt_ab"].get<double>());
  }
  return kOk;
}

int cmd_kappa_dist(const KappaDistOptions& opt, const std::string& out_path, const std::string& format) {
  const auto samples = kappa_distribution(opt);
  {
    std::ofstream os(out_path);
    if (!os) throw std::runtime_error("cannot open " + out_path + " for writing");
    write_kappa_csv(os, samples);
    if (!os) throw std::runtime_error("write to " + out_path + " failed");
  }
  json out;
  out["version"] = kVersion;
  out["parameters"] = {{"n", opt.n},         {"k_min", opt.k_min}, {"k_max", opt.k_max},
                       {"samples", opt.samples}, {"seed", opt.seed},   {"upper", num(opt.upper)},
                       {"out", out_path},        {"generator", "mt19937_64 seeded by splitmix64(seed, k, index)"}};
  json med = json::object();
  const auto m = medians_by_k(samples, opt.k_min, opt.k_max);
  for (int k = opt.k_min; k <= opt.k_max; ++k) med[std::to_string(k)] = num(m[static_cast<std::size_t>(k - opt.k_min)]);
  out["median_kappa"] = med;
  emit(out, format);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified mixed-subordinate norms of nonnegative matrices"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  std::string format = "text";
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "text"}));

  NormArgs norm;
  auto* norm_cmd = app.add_subcommand("norm", "Compute ||A||_{beta->alpha} with a certified enclosure");
  norm_cmd->add_option("--matrix", norm.matrix, "Matrix (MatrixMarket or CSV)")->required();
  norm_cmd->add_option("--alpha", norm.alpha, "Output norm (JSON); defaults to l2");
  norm_cmd->add_option("--beta", norm.beta, "Input norm (JSON); defaults to l2");
  norm_cmd->add_option("--tol", norm.tol, "Stopping tolerance")->capture_default_str();
  norm_cmd->add_option("--max-iters", norm.max_iters, "Iteration budget")->capture_default_str();
  norm_cmd->add_flag("--force", norm.force, "Iterate even when tau >= 1");
  norm_cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "text"}));

  std::string kappa_matrix;
  auto* kappa_cmd = app.add_subcommand("kappa", "Projective diameters and Birkhoff ratios");
  kappa_cmd->add_option("--matrix", kappa_matrix, "Matrix (MatrixMarket or CSV)")->required();
  kappa_cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "text"}));

  std::string kernel;
  std::optional<std::string> pi_path, t_grid;
  auto* lsc_cmd = app.add_subcommand("lsc", "Log-Sobolev lower bound for a Markov kernel");
  lsc_cmd->add_option("--kernel,--matrix", kernel, "Row-stochastic kernel")->required();
  lsc_cmd->add_option("--pi", pi_path, "Stationary distribution (computed if omitted)");
  lsc_cmd->add_option("--t-grid", t_grid, "Geometric grid start:stop:count (default 2^-k, k=0..20)");
  lsc_cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "text"}));

  KappaDistOptions dist;
  std::string out_path;
  auto* exp_cmd = app.add_subcommand("experiment", "Reproducible experiments");
  exp_cmd->require_subcommand(1);
  auto* dist_cmd = exp_cmd->add_subcommand("kappa-dist", "kappa_H of random matrices with entries in [k, 10]");
  dist_cmd->add_option("--n", dist.n, "Matrix size")->capture_default_str();
  dist_cmd->add_option("--k-min", dist.k_min, "Smallest lower entry bound")->capture_default_str();
  dist_cmd->add_option("--k-max", dist.k_max, "Largest lower entry bound")->capture_default_str();
  dist_cmd->add_option("--samples", dist.samples, "Samples per k")->capture_default_str();
  dist_cmd->add_option("--seed", dist.seed, "PRNG seed")->required();
  dist_cmd->add_option("--out", out_path, "CSV output path")->required();
  dist_cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "text"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kBadInput;
  }

  try {
    if (*norm_cmd) return cmd_norm(norm, format);
    if (*kappa_cmd) return cmd_kappa(kappa_matrix, format);
    if (*lsc_cmd) return cmd_lsc(kernel, pi_path, t_grid, format);
    if (*dist_cmd) return cmd_kappa_dist(dist, out_path, format);
  } catch (const std::exception& e) {
    std::cerr << "conenorm: " << e.what() << '\n';
    return kBadInput;
  }
  return kBadInput;
}
