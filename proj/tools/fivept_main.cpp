/**
 * Command-line front end: solve five-correspondence files, run synthetic
 * benchmark scenarios, and sweep noise levels.
 *
 * Exit codes: 0 success (an empty solution set is success), 2 malformed
 * input or bad flags, 3 degenerate configuration, 4 unwritable output path.
 */

#include <cctype>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fivept/errors.hpp"
#include "fivept/io.hpp"
#include "fivept/recovery.hpp"
#include "fivept/synthetic.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadInput = 2;
constexpr int kExitDegenerate = 3;
constexpr int kExitUnwritable = 4;

std::string trim(const std::string& s) {
  const size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

// Reads `key=value` lines; '#' starts a comment, blank lines are skipped.
std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw fivept::SolverError(fivept::ErrorCode::kMalformedInput,
                              "cannot open config file: " + path);
  }
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const size_t eq = t.find('=');
    if (eq == std::string::npos) {
      throw fivept::SolverError(fivept::ErrorCode::kMalformedInput,
                                "config line is not key=value: " + t);
    }
    kv[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
  }
  return kv;
}

bool truthy(const std::string& v) {
  return v == "1" || v == "true" || v == "yes" || v == "on";
}

/**
 * Config support: a `--config=path` flag anywhere on the command line loads
 * key=value defaults for the invoked subcommand.  The file's pairs are
 * translated to synthetic tokens inserted *before* the user's flags, and all
 * options take the last occurrence, so explicit flags win.  Keys that do not
 * name an option of the invoked subcommand are ignored (one file can serve
 * several subcommands).
 */
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::string config_path;
  std::vector<std::string> rest;
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config_path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (config_path.empty()) return rest;

  const auto kv = read_config_file(config_path);
  static const std::map<std::string, std::vector<std::string>> kValueKeys = {
      {"solve", {"consistency-tol", "wtilde-lo", "wtilde-hi"}},
      {"bench", {"scenario", "trials", "sigma", "seed", "out"}},
      {"sweep", {"sigmas", "trials", "seed", "out"}},
  };
  static const std::map<std::string, std::vector<std::string>> kFlagKeys = {
      {"solve", {"json", "keep-all"}},
      {"bench", {}},
      {"sweep", {}},
  };

  std::vector<std::string> out;
  bool injected = false;
  for (const std::string& a : rest) {
    out.push_back(a);
    if (!injected && (a == "solve" || a == "bench" || a == "sweep")) {
      for (const std::string& key : kValueKeys.at(a)) {
        const auto it = kv.find(key);
        if (it != kv.end()) out.push_back("--" + key + "=" + it->second);
      }
      for (const std::string& key : kFlagKeys.at(a)) {
        const auto it = kv.find(key);
        if (it != kv.end() && truthy(it->second)) out.push_back("--" + key);
      }
      injected = true;
    }
  }
  return out;
}

int run_solve(const std::string& path, bool as_json, bool keep_all,
              double consistency_tol, std::optional<double> wtilde_lo,
              std::optional<double> wtilde_hi) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot open input file: " << path << "\n";
    return kExitBadInput;
  }
  const auto correspondences = fivept::parse_correspondence_file(in);

  fivept::SolveOptions options;
  options.keep_all = keep_all;
  options.consistency_tol = consistency_tol;
  if (wtilde_lo.has_value()) {
    options.wtilde_filter = fivept::WtildeInterval{*wtilde_lo, *wtilde_hi};
  }
  const fivept::SolveResult result = fivept::solve_relative_pose(correspondences,
                                                                 options);

  if (as_json) {
    nlohmann::json arr = nlohmann::json::array();
    for (const fivept::SolutionCandidate& c : result.candidates) {
      nlohmann::json rec;
      nlohmann::json rot = nlohmann::json::array();
      for (int r = 0; r < 3; ++r)
        for (int col = 0; col < 3; ++col) rot.push_back(c.pose.rotation(r, col));
      rec["rotation"] = std::move(rot);
      rec["translation"] = {c.pose.translation[0], c.pose.translation[1],
                            c.pose.translation[2]};
      rec["u"] = c.cayley.u;
      rec["v"] = c.cayley.v;
      rec["w"] = c.cayley.w;
      rec["max_epipolar_residual"] = c.max_epipolar_residual;
      arr.push_back(std::move(rec));
    }
    std::cout << arr.dump(2) << "\n";
  } else {
    std::cout << "# candidates: " << result.candidates.size() << "\n";
    for (const fivept::SolutionCandidate& c : result.candidates) {
      std::ostringstream line;
      for (int r = 0; r < 3; ++r) {
        for (int col = 0; col < 3; ++col) {
          line << fivept::format_csv(c.pose.rotation(r, col)) << ' ';
        }
      }
      for (int k = 0; k < 3; ++k) line << fivept::format_csv(c.pose.translation[k]) << ' ';
      line << fivept::format_csv(c.cayley.u) << ' ' << fivept::format_csv(c.cayley.v)
           << ' ' << fivept::format_csv(c.cayley.w) << ' '
           << fivept::format_csv(c.max_epipolar_residual);
      std::cout << line.str() << "\n";
    }
  }
  return kExitOk;
}

int run_bench(const std::string& scenario, int trials, double sigma,
              std::uint64_t seed, const std::string& out_prefix) {
  fivept::SceneConfig cfg;
  cfg.scenario = (scenario == "planar_forward") ? fivept::Scenario::kPlanarForward
                                                : fivept::Scenario::kDefault;
  cfg.trials = trials;
  cfg.noise_sigma_px = sigma;
  cfg.master_seed = seed;

  const fivept::ExperimentResult result = fivept::run_experiment(cfg);

  const std::string csv_path = out_prefix + "_trials.csv";
  std::ofstream csv(csv_path);
  if (!csv) {
    std::cerr << "error: cannot write " << csv_path << "\n";
    return kExitUnwritable;
  }
  fivept::write_trials_csv(result.records, csv);
  csv.close();
  if (!csv) {
    std::cerr << "error: failed while writing " << csv_path << "\n";
    return kExitUnwritable;
  }

  const std::string json_text = fivept::summary_to_json(result.summary);
  const std::string json_path = out_prefix + "_summary.json";
  std::ofstream js(json_path);
  if (!js) {
    std::cerr << "error: cannot write " << json_path << "\n";
    return kExitUnwritable;
  }
  js << json_text;
  js.close();
  if (!js) {
    std::cerr << "error: failed while writing " << json_path << "\n";
    return kExitUnwritable;
  }

  std::cout << json_text;
  return kExitOk;
}

std::vector<double> parse_sigma_range(const std::string& spec) {
  // lo:hi:step with step > 0 and hi >= lo.
  double lo = 0.0, hi = 0.0, step = 0.0;
  char c1 = 0, c2 = 0;
  std::istringstream in(spec);
  if (!(in >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':' ||
      (in >> std::ws, !in.eof()) || step <= 0.0 || hi < lo) {
    throw fivept::SolverError(fivept::ErrorCode::kMalformedInput,
                              "malformed sigma range (expected lo:hi:step): " + spec);
  }
  const int n = static_cast<int>(std::round((hi - lo) / step));
  std::vector<double> sigmas;
  for (int i = 0; i <= n; ++i) {
    const double s = lo + i * step;
    if (s > hi + 1e-12 * std::max(1.0, std::fabs(hi))) break;
    sigmas.push_back(s);
  }
  return sigmas;
}

int run_sweep(const std::string& sigmas_spec, int trials, std::uint64_t seed,
              const std::string& out_prefix) {
  const std::vector<double> sigmas = parse_sigma_range(sigmas_spec);

  std::ostringstream csv;
  csv << "sigma,median_rot_err_deg,median_trans_err_deg,median_epsilon\n";
  for (double sigma : sigmas) {
    fivept::SceneConfig cfg;
    cfg.trials = trials;
    cfg.noise_sigma_px = sigma;
    cfg.master_seed = seed;  // same seed per sigma: paired trials
    const fivept::ExperimentResult result = fivept::run_experiment(cfg);
    csv << fivept::format_csv(sigma) << ','
        << fivept::format_csv(result.summary.median_rot_err_deg) << ','
        << fivept::format_csv(result.summary.median_trans_err_deg) << ','
        << fivept::format_csv(result.summary.median_epsilon) << '\n';
  }

  const std::string path = out_prefix + "_sweep.csv";
  std::ofstream out(path);
  if (!out) {
    std::cerr << "error: cannot write " << path << "\n";
    return kExitUnwritable;
  }
  out << csv.str();
  out.close();
  if (!out) {
    std::cerr << "error: failed while writing " << path << "\n";
    return kExitUnwritable;
  }
  std::cout << csv.str();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimal-case calibrated relative pose solver and benchmark"};
  app.require_subcommand(1);

  // Shared no-op option so --config is accepted anywhere; it is consumed by
  // expand_config before parsing.
  std::string config_dummy;
  app.add_option("--config", config_dummy, "key=value config file (flags win)");

  // --- solve ---
  auto* solve = app.add_subcommand("solve", "Solve a five-correspondence file");
  std::string solve_path;
  bool solve_json = false, solve_keep_all = false;
  double solve_consistency = 1e-3;
  std::optional<double> wtilde_lo, wtilde_hi;
  solve->add_option("file", solve_path, "correspondence file")->required();
  solve->add_flag("--json", solve_json, "emit a JSON array of candidates");
  solve->add_flag("--keep-all", solve_keep_all, "keep consistency-rejected candidates");
  solve->add_option("--consistency-tol", solve_consistency,
                    "relative uv-consistency bound")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  solve->add_option("--wtilde-lo", wtilde_lo, "folded-root filter lower bound")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  solve->add_option("--wtilde-hi", wtilde_hi, "folded-root filter upper bound")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  solve->add_option("--config", config_dummy, "key=value config file (flags win)");

  // --- bench ---
  auto* bench = app.add_subcommand("bench", "Run one synthetic benchmark scenario");
  std::string bench_scenario = "default";
  int bench_trials = 10000;
  double bench_sigma = 0.0;
  std::uint64_t bench_seed = 1;
  std::string bench_out = "bench";
  bench->add_option("--scenario", bench_scenario, "default | planar_forward")
      ->check(CLI::IsMember({"default", "planar_forward"}))
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  bench->add_option("--trials", bench_trials, "number of trials (>= 1)")
      ->check(CLI::Range(1, 100000000))
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  bench->add_option("--sigma", bench_sigma, "pixel noise standard deviation")
      ->check(CLI::NonNegativeNumber)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  bench->add_option("--seed", bench_seed, "master seed")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  bench->add_option("--out", bench_out, "output file prefix")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  bench->add_option("--config", config_dummy, "key=value config file (flags win)");

  // --- sweep ---
  auto* sweep = app.add_subcommand("sweep", "Run a noise sweep");
  std::string sweep_sigmas = "0:1:0.1";
  int sweep_trials = 10000;
  std::uint64_t sweep_seed = 1;
  std::string sweep_out = "sweep";
  sweep->add_option("--sigmas", sweep_sigmas, "noise range lo:hi:step")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  sweep->add_option("--trials", sweep_trials, "trials per sigma (>= 1)")
      ->check(CLI::Range(1, 100000000))
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  sweep->add_option("--seed", sweep_seed, "master seed")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  sweep->add_option("--out", sweep_out, "output file prefix")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  sweep->add_option("--config", config_dummy, "key=value config file (flags win)");

  try {
    const std::vector<std::string> args =
        expand_config(std::vector<std::string>(argv + 1, argv + argc));
    // CLI11 parses a reversed token vector.
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // prints help, exit 0
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const fivept::SolverError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  }

  try {
    if (app.got_subcommand(solve)) {
      if (wtilde_lo.has_value() != wtilde_hi.has_value()) {
        std::cerr << "error: --wtilde-lo and --wtilde-hi must be given together\n";
        return kExitBadInput;
      }
      if (wtilde_lo.has_value() && *wtilde_lo > *wtilde_hi) {
        std::cerr << "error: --wtilde-lo must not exceed --wtilde-hi\n";
        return kExitBadInput;
      }
      return run_solve(solve_path, solve_json, solve_keep_all, solve_consistency,
                       wtilde_lo, wtilde_hi);
    }
    if (app.got_subcommand(bench)) {
      return run_bench(bench_scenario, bench_trials, bench_sigma, bench_seed,
                       bench_out);
    }
    return run_sweep(sweep_sigmas, sweep_trials, sweep_seed, sweep_out);
  } catch (const fivept::SolverError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == fivept::ErrorCode::kMalformedInput ? kExitBadInput
                                                          : kExitDegenerate;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDegenerate;
  }
}
