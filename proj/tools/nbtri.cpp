// Command-line front end: simulate, fit, select-q, predict, chainladder,
// report. All outputs are plain CSV or "key = value" text; every command
// writes a manifest with input and artifact checksums.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nbtri/chainladder.hpp"
#include "nbtri/io.hpp"
#include "nbtri/model.hpp"
#include "nbtri/predict.hpp"
#include "nbtri/sampler.hpp"
#include "nbtri/triangle.hpp"

namespace fs = std::filesystem;
using namespace nbtri;

namespace {

struct OutputDir {
  fs::path dir;
  KeyValues manifest;

  explicit OutputDir(const std::string& path, const std::string& command)
      : dir(path) {
    fs::create_directories(dir);
    manifest["command"] = command;
  }
  void put(const std::string& name, const std::string& content) {
    write_file((dir / name).string(), content);
    manifest["artifact." + name] = fnv1a_hex(content);
  }
  void set(const std::string& key, const std::string& value) {
    manifest[key] = value;
  }
  void set(const std::string& key, double value) {
    manifest[key] = format_double(value);
  }
  void set(const std::string& key, long long value) {
    manifest[key] = std::to_string(value);
  }
  void finish(double wall_seconds) {
    manifest["wall_seconds"] = format_double(wall_seconds);
    write_file((dir / "manifest.txt").string(), keyvalues_to_text(manifest));
  }
};

Triangle load_triangle(const std::string& path, std::string* checksum) {
  const std::string text = read_file(path);
  if (checksum) *checksum = fnv1a_hex(text);
  return Triangle::from_csv(text);
}

std::string quantiles_header() { return "mean,q025,q50,q975"; }

std::string quantiles_row(const Quantiles& q) {
  return format_double(q.mean) + "," + format_double(q.q025) + "," +
         format_double(q.q50) + "," + format_double(q.q975);
}

void add_chain_flags(CLI::App* cmd, ChainConfig& cfg) {
  cmd->add_option("--iterations", cfg.iterations, "Total MCMC iterations")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--burn-in", cfg.burn_in, "Discarded initial iterations");
  cmd->add_option("--thin", cfg.thinning, "Keep every k-th draw")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", cfg.seed, "Random seed");
  cmd->add_option("--p-alpha", cfg.hyper.p_alpha,
                  "Geometric prior success probability for alpha");
  cmd->add_option("--a-gamma", cfg.hyper.a_gamma, "Gamma prior shape for gamma");
  cmd->add_option("--b-gamma", cfg.hyper.b_gamma, "Gamma prior rate for gamma");
}

void record_chain_config(OutputDir& out, const ChainConfig& cfg) {
  out.set("q", (long long)cfg.q);
  out.set("iterations", (long long)cfg.iterations);
  out.set("burn_in", (long long)cfg.burn_in);
  out.set("thinning", (long long)cfg.thinning);
  out.set("seed", (long long)cfg.seed);
  out.set("p_alpha", cfg.hyper.p_alpha);
  out.set("a_gamma", cfg.hyper.a_gamma);
  out.set("b_gamma", cfg.hyper.b_gamma);
  out.set("dirichlet_a", 0.5);
}

// Loads the three chain files plus metadata written by `fit`, checking
// that the triangle passed on the command line matches the fitted one.
struct FitArtifacts {
  ChainRun run;
  std::uint64_t seed = 0;
  std::string acceptance_text;
};

FitArtifacts load_fit(const std::string& fit_dir, const Triangle& x,
                      const std::string& input_checksum) {
  const fs::path dir(fit_dir);
  const KeyValues m = keyvalues_from_text(read_file((dir / "manifest.txt").string()));
  auto need = [&](const std::string& key) {
    auto it = m.find(key);
    if (it == m.end())
      throw IoError("fit manifest is missing key '" + key + "'");
    return it->second;
  };
  if (need("command") != "fit")
    throw IoError("'" + fit_dir + "' does not contain fit artifacts");
  if (need("input_checksum") != input_checksum)
    throw IoError("input checksum mismatch: triangle does not match the one "
                  "fitted in '" + fit_dir + "'");
  FitArtifacts fit;
  fit.seed = std::stoull(need("seed"));
  fit.run = chain_from_csv(read_file((dir / "chain.csv").string()),
                           read_file((dir / "y_chain.csv").string()),
                           read_file((dir / "z_chain.csv").string()), x,
                           std::stoi(need("q")));
  fit.run.config.seed = fit.seed;
  fit.acceptance_text = read_file((dir / "acceptance.txt").string());
  return fit;
}

std::string reserves_csv(const ReserveSummary& rs) {
  std::ostringstream os;
  os << "reserve," << quantiles_header() << "\n";
  for (int i = 2; i <= rs.n; ++i)
    os << "N_" << i << "," << quantiles_row(rs.reserve_summary[i - 2]) << "\n";
  os << "N," << quantiles_row(rs.total_summary) << "\n";
  return os.str();
}

int cmd_simulate(const std::string& output_dir, int n, long long alpha,
                 double gamma, int q, std::uint64_t seed) {
  const auto t0 = std::chrono::steady_clock::now();
  ModelParams p;
  p.q = q;
  p.alpha.assign(n, alpha);
  p.gamma.assign(n, gamma);
  p.pi.resize(n);
  for (int j = 1; j <= n; ++j)
    p.pi[j - 1] = 2.0 * double(n - j + 1) / (double(n) * double(n + 1));
  RngStream rng(seed);
  SimulatedTriangle sim = simulate_triangle(p, rng);

  OutputDir out(output_dir, "simulate");
  out.set("n", (long long)n);
  out.set("alpha", (long long)alpha);
  out.set("gamma", gamma);
  out.set("q", (long long)q);
  out.set("seed", (long long)seed);

  std::ostringstream full;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) full << (j ? "," : "") << sim.x[i][j];
    full << "\n";
  }
  out.put("triangle_full.csv", full.str());

  std::ostringstream observed;
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      if (j > 1) observed << ",";
      if (j <= n - i + 1) observed << sim.x[i - 1][j - 1];
    }
    observed << "\n";
  }
  out.put("triangle_observed.csv", observed.str());

  KeyValues params;
  params["n"] = std::to_string(n);
  params["q"] = std::to_string(q);
  for (int j = 1; j <= n; ++j) {
    params["alpha_" + std::to_string(j)] = std::to_string(alpha);
    params["gamma_" + std::to_string(j)] = format_double(gamma);
    params["pi_" + std::to_string(j)] = format_double(p.pi[j - 1]);
  }
  out.put("params.txt", keyvalues_to_text(params));
  out.finish(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                 .count());
  return 0;
}

int cmd_fit(const std::string& input, const std::string& output_dir,
            ChainConfig cfg) {
  std::string checksum;
  const Triangle x = load_triangle(input, &checksum);
  ChainRun run = run_chain(x, cfg);

  OutputDir out(output_dir, "fit");
  out.set("input", input);
  out.set("input_checksum", checksum);
  out.set("n", (long long)x.size());
  record_chain_config(out, run.config);
  out.put("chain.csv", chain_to_csv(run));
  out.put("y_chain.csv", latents_y_to_csv(run, x));
  out.put("z_chain.csv", latents_z_to_csv(run, x));
  out.put("acceptance.txt", acceptance_to_text(run));
  out.finish(run.wall_seconds);
  return 0;
}

int cmd_select_q(const std::string& input, const std::string& output_dir,
                 const std::string& grid_spec, ChainConfig cfg) {
  std::vector<int> grid;
  std::stringstream ss(grid_spec);
  for (std::string tok; std::getline(ss, tok, ',');) {
    const int q = std::stoi(tok);
    if (q < 0) throw ModelError("select-q: grid entry must be >= 0");
    grid.push_back(q);
  }
  if (grid.empty()) throw ModelError("select-q: empty grid");

  const auto t0 = std::chrono::steady_clock::now();
  std::string checksum;
  const Triangle x = load_triangle(input, &checksum);
  const std::vector<FitStats> stats = select_q(x, grid, cfg);

  OutputDir out(output_dir, "select-q");
  out.set("input", input);
  out.set("input_checksum", checksum);
  out.set("grid", grid_spec);
  record_chain_config(out, cfg);

  std::ostringstream csv;
  csv << "q,lpml,bias,pvar\n";
  int best_lpml = 0, best_bias = 0, best_pvar = 0;
  for (std::size_t k = 0; k < stats.size(); ++k) {
    csv << stats[k].q << "," << format_double(stats[k].lpml) << ","
        << format_double(stats[k].bias) << "," << format_double(stats[k].pvar)
        << "\n";
    if (stats[k].lpml > stats[best_lpml].lpml) best_lpml = int(k);
    if (stats[k].bias < stats[best_bias].bias) best_bias = int(k);
    if (stats[k].pvar < stats[best_pvar].pvar) best_pvar = int(k);
  }
  out.put("fit_stats.csv", csv.str());

  KeyValues sel;
  sel["best_lpml_q"] = std::to_string(stats[best_lpml].q);
  sel["best_bias_q"] = std::to_string(stats[best_bias].q);
  sel["best_pvar_q"] = std::to_string(stats[best_pvar].q);
  out.put("selection.txt", keyvalues_to_text(sel));
  out.finish(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                 .count());
  return 0;
}

int cmd_predict(const std::string& fit_dir, const std::string& input,
                const std::string& output_dir) {
  const auto t0 = std::chrono::steady_clock::now();
  std::string checksum;
  const Triangle x = load_triangle(input, &checksum);
  const FitArtifacts fit = load_fit(fit_dir, x, checksum);
  const ReserveSummary rs = predictive_complete(fit.run, x, fit.seed);

  OutputDir out(output_dir, "predict");
  out.set("input", input);
  out.set("input_checksum", checksum);
  out.set("fit_dir", fit_dir);
  out.set("q", (long long)fit.run.config.q);
  out.set("seed", (long long)fit.seed);
  out.put("reserves.csv", reserves_csv(rs));

  std::ostringstream cells;
  cells << "i,j," << quantiles_header() << "\n";
  for (const auto& [cell, q] : rs.cell_summary)
    cells << cell.first << "," << cell.second << "," << quantiles_row(q)
          << "\n";
  out.put("cells.csv", cells.str());
  out.finish(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                 .count());
  return 0;
}

int cmd_chainladder(const std::string& input, const std::string& output_dir) {
  const auto t0 = std::chrono::steady_clock::now();
  std::string checksum;
  const Triangle x = load_triangle(input, &checksum);
  const ChainLadderResult r = chain_ladder(x);
  const auto [reserves, total] = reserves_from_completed(r);

  OutputDir out(output_dir, "chainladder");
  out.set("input", input);
  out.set("input_checksum", checksum);
  out.set("n", (long long)r.n);

  std::ostringstream factors;
  factors << "j,factor\n";
  for (int j = 1; j < r.n; ++j)
    factors << j << "," << format_double(r.factors[j - 1]) << "\n";
  out.put("factors.csv", factors.str());

  std::ostringstream completed, mask;
  for (int i = 0; i < r.n; ++i) {
    for (int j = 0; j < r.n; ++j) {
      completed << (j ? "," : "") << r.completed_rounded[i][j];
      mask << (j ? "," : "") << (r.forecast_mask[i][j] ? 1 : 0);
    }
    completed << "\n";
    mask << "\n";
  }
  out.put("completed.csv", completed.str());
  out.put("forecast_mask.csv", mask.str());

  std::ostringstream res;
  res << "origin,reserve\n";
  for (int i = 1; i <= r.n; ++i)
    res << i << "," << reserves[i - 1] << "\n";
  res << "total," << total << "\n";
  out.put("reserves.csv", res.str());
  out.finish(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                 .count());
  return 0;
}

int cmd_report(const std::string& fit_dir, const std::string& input,
               const std::string& output_dir) {
  const auto t0 = std::chrono::steady_clock::now();
  std::string checksum;
  const Triangle x = load_triangle(input, &checksum);
  const FitArtifacts fit = load_fit(fit_dir, x, checksum);
  const int n = x.size();
  const std::size_t T = fit.run.params.size();

  OutputDir out(output_dir, "report");
  out.set("input", input);
  out.set("input_checksum", checksum);
  out.set("fit_dir", fit_dir);
  out.set("q", (long long)fit.run.config.q);
  out.set("seed", (long long)fit.seed);

  std::ostringstream ps;
  ps << "parameter," << quantiles_header() << "\n";
  auto emit = [&](const std::string& name, std::vector<double> draws) {
    ps << name << "," << quantiles_row(summarize(std::move(draws))) << "\n";
  };
  std::vector<double> draws(T);
  for (int i = 1; i <= n; ++i) {
    for (std::size_t t = 0; t < T; ++t)
      draws[t] = double(fit.run.params[t].alpha[i - 1]);
    emit("alpha_" + std::to_string(i), draws);
  }
  for (int j = 1; j <= n; ++j) {
    for (std::size_t t = 0; t < T; ++t)
      draws[t] = fit.run.params[t].gamma[j - 1];
    emit("gamma_" + std::to_string(j), draws);
  }
  for (int j = 1; j <= n; ++j) {
    for (std::size_t t = 0; t < T; ++t) draws[t] = fit.run.params[t].pi[j - 1];
    emit("pi_" + std::to_string(j), draws);
  }
  out.put("params_summary.csv", ps.str());

  // lag-1 correlations exist only under a dependent model
  if (fit.run.config.q >= 1) {
    std::ostringstream rho;
    rho << "j," << quantiles_header() << "\n";
    for (int j = 1; j < n; ++j) {
      for (std::size_t t = 0; t < T; ++t)
        draws[t] = marginal_correlation(fit.run.params[t], j, 1);
      rho << j << "," << quantiles_row(summarize(draws)) << "\n";
    }
    out.put("rho_summary.csv", rho.str());
  }

  const ReserveSummary rs = predictive_complete(fit.run, x, fit.seed);
  out.put("reserves_summary.csv", reserves_csv(rs));
  out.put("acceptance.txt", fit.acceptance_text);
  out.finish(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                 .count());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian negative binomial development triangles"};
  app.require_subcommand(1);

  std::string input, output_dir, fit_dir, grid = "0,1,2,3,4";
  ChainConfig cfg;
  int sim_n = 10, sim_q = 2;
  long long sim_alpha = 1000;
  double sim_gamma = 0.15;
  std::uint64_t sim_seed = 1;

  auto* simulate = app.add_subcommand("simulate", "Draw a synthetic triangle");
  simulate->add_option("--output-dir", output_dir)->required();
  simulate->add_option("--n", sim_n, "Triangle size")->check(CLI::PositiveNumber);
  simulate->add_option("--alpha", sim_alpha, "Row totals parameter")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--gamma", sim_gamma, "Dependence weight")
      ->check(CLI::NonNegativeNumber);
  simulate->add_option("--q", sim_q, "Dependence order")
      ->check(CLI::NonNegativeNumber);
  simulate->add_option("--seed", sim_seed, "Random seed");
  simulate->set_config("--config");

  auto* fit = app.add_subcommand("fit", "Run the MCMC sampler");
  fit->add_option("--input", input, "Triangle CSV")->required();
  fit->add_option("--output-dir", output_dir)->required();
  fit->add_option("--q", cfg.q, "Dependence order")->check(CLI::NonNegativeNumber);
  add_chain_flags(fit, cfg);
  fit->set_config("--config");

  auto* selectq = app.add_subcommand("select-q", "Fit a grid of orders");
  selectq->add_option("--input", input, "Triangle CSV")->required();
  selectq->add_option("--output-dir", output_dir)->required();
  selectq->add_option("--grid", grid, "Comma-separated orders to compare");
  add_chain_flags(selectq, cfg);
  selectq->set_config("--config");

  auto* predict = app.add_subcommand("predict", "Posterior predictive reserves");
  predict->add_option("--fit-dir", fit_dir, "Directory written by fit")
      ->required();
  predict->add_option("--input", input, "Triangle CSV")->required();
  predict->add_option("--output-dir", output_dir)->required();
  predict->set_config("--config");

  auto* cl = app.add_subcommand("chainladder", "Deterministic baseline");
  cl->add_option("--input", input, "Triangle CSV")->required();
  cl->add_option("--output-dir", output_dir)->required();
  cl->set_config("--config");

  auto* report = app.add_subcommand("report", "Summaries of a fitted chain");
  report->add_option("--fit-dir", fit_dir, "Directory written by fit")
      ->required();
  report->add_option("--input", input, "Triangle CSV")->required();
  report->add_option("--output-dir", output_dir)->required();
  report->set_config("--config");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed())
      return cmd_simulate(output_dir, sim_n, sim_alpha, sim_gamma, sim_q,
                          sim_seed);
    if (fit->parsed()) return cmd_fit(input, output_dir, cfg);
    if (selectq->parsed()) return cmd_select_q(input, output_dir, grid, cfg);
    if (predict->parsed()) return cmd_predict(fit_dir, input, output_dir);
    if (cl->parsed()) return cmd_chainladder(input, output_dir);
    if (report->parsed()) return cmd_report(fit_dir, input, output_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
