#include "npdrift/cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "npdrift/basis.hpp"
#include "npdrift/diffusion.hpp"
#include "npdrift/io.hpp"
#include "npdrift/posterior.hpp"
#include "npdrift/sampler.hpp"
#include "npdrift/testdrifts.hpp"

namespace npdrift {

namespace {

using nlohmann::json;

struct RunConfig {
  std::string basis = "fourier";
  double beta = 1.5;
  int j_max = 0;  // 0: per-family default (25 Fourier, 12 Schauder)
  double ig_shape = 2.5;
  double ig_rate = 2.5;
  double model_decay = -1.0;  // <0: -log(0.95)
  std::vector<double> q;      // stay, up, down; empty: per-family default
  int iters = 3000;
  int burn_in = 500;
  std::size_t n_interior = 49;
  uint64_t seed = 0;
  int grid_size = 201;
  double alpha = 0.10;
  int fixed_level = 0;     // 0: off
  double fixed_scale = 0;  // 0: off

  BasisSpec make_spec() const {
    const BasisFamily fam = basis_family_from_string(basis);
    int jm = j_max;
    if (jm == 0) jm = fam == BasisFamily::Fourier ? 25 : 12;
    return BasisSpec(fam, beta, jm);
  }

  PriorConfig make_prior() const {
    PriorConfig p = PriorConfig::defaults_for(basis_family_from_string(basis));
    p.ig_shape = ig_shape;
    p.ig_rate = ig_rate;
    if (model_decay >= 0.0) p.model_decay = model_decay;
    if (!q.empty()) {
      if (q.size() != 3) throw std::invalid_argument("--q takes exactly 3 probabilities");
      p.q_stay = q[0];
      p.q_up = q[1];
      p.q_down = q[2];
    }
    return p;
  }

  SamplerConfig make_sampler() const {
    SamplerConfig c;
    c.iters = iters;
    c.burn_in = burn_in;
    c.seed = seed;
    c.n_interior = n_interior;
    if (fixed_level > 0) c.fixed_level = fixed_level;
    if (fixed_scale > 0) c.fixed_scale = fixed_scale;
    return c;
  }

  json to_json() const {
    return json{{"basis", basis},
                {"beta", beta},
                {"j_max", j_max},
                {"ig_shape", ig_shape},
                {"ig_rate", ig_rate},
                {"model_decay", model_decay},
                {"q", q},
                {"iters", iters},
                {"burn_in", burn_in},
                {"n_interior", n_interior},
                {"seed", seed},
                {"grid_size", grid_size},
                {"alpha", alpha},
                {"fixed_level", fixed_level},
                {"fixed_scale", fixed_scale}};
  }
};

void add_config_flags(CLI::App* cmd, RunConfig& cfg, bool need_seed) {
  cmd->add_option("--basis", cfg.basis, "basis family: fourier or schauder");
  cmd->add_option("--beta", cfg.beta, "prior regularity");
  cmd->add_option("--j-max", cfg.j_max, "model index cap (0 = per-family default)");
  cmd->add_option("--ig-shape", cfg.ig_shape, "inverse-gamma shape a");
  cmd->add_option("--ig-rate", cfg.ig_rate, "inverse-gamma rate b");
  cmd->add_option("--model-decay", cfg.model_decay, "C in p(j) ~ exp(-C m_j)");
  cmd->add_option("--q", cfg.q, "model proposal probabilities: stay up down")->expected(3);
  cmd->add_option("--iters", cfg.iters, "MCMC cycles");
  cmd->add_option("--burn-in", cfg.burn_in, "discarded initial cycles");
  cmd->add_option("--n-interior", cfg.n_interior, "imputed points per segment");
  auto* seed = cmd->add_option("--seed", cfg.seed, "RNG seed");
  if (need_seed) seed->required();
  cmd->add_option("--grid-size", cfg.grid_size, "output grid points on [0,1]");
  cmd->add_option("--alpha", cfg.alpha, "credible band level is 1-alpha");
  cmd->add_option("--fixed-level", cfg.fixed_level, "disable model moves, fix j");
  cmd->add_option("--fixed-scale", cfg.fixed_scale, "disable scale moves, fix s^2");
}

std::string meta_comment(const RunConfig& cfg) {
  const uint64_t hash = fnv1a(cfg.to_json().dump());
  return "config_hash=" + std::to_string(hash) + " seed=" + std::to_string(cfg.seed);
}

int cmd_simulate(const RunConfig& cfg, const std::string& drift_name,
                 const std::string& coeff_file, double T, double dt, std::size_t keep_every,
                 const std::string& out) {
  DriftFn drift;
  if (!coeff_file.empty()) {
    std::ifstream in(coeff_file);
    if (!in) throw std::invalid_argument("cannot open coefficient file: " + coeff_file);
    std::vector<double> c;
    double v;
    while (in >> v) c.push_back(v);
    if (c.empty()) throw std::invalid_argument("empty coefficient file");
    const BasisSpec spec = cfg.make_spec();
    Eigen::VectorXd theta = Eigen::Map<Eigen::VectorXd>(c.data(), c.size());
    drift = [spec, theta](double x) { return eval_drift(spec, theta, x); };
  } else {
    drift = gallery(drift_name).fn;
  }
  Path path = euler_simulate(drift, 0.0, T, dt, cfg.seed);
  if (keep_every > 1) path = thin(path, keep_every);
  write_path_csv(path, out, meta_comment(cfg));
  std::cout << "wrote " << path.size() << " rows to " << out << " (seed " << cfg.seed << ")\n";
  return 0;
}

void write_summary_csv(const std::string& file, const PosteriorSummary& s,
                       const std::string& comment) {
  std::ofstream out(file);
  if (!out) throw std::invalid_argument("cannot write file: " + file);
  out << "# " << comment << "\n";
  out << "x,mean,lo,hi\n";
  for (Eigen::Index g = 0; g < s.grid.size(); ++g) {
    out << format_double(s.grid[g]) << ',' << format_double(s.mean[g]) << ','
        << format_double(s.band_lo.size() ? s.band_lo[g] : s.mean[g]) << ','
        << format_double(s.band_hi.size() ? s.band_hi[g] : s.mean[g]) << '\n';
  }
}

void write_chain_csv(const std::string& file, const std::vector<ChainRecord>& records,
                     const std::string& comment) {
  std::ofstream out(file);
  if (!out) throw std::invalid_argument("cannot write file: " + file);
  out << "# " << comment << "\n";
  out << "iter,j,s_sq,accept2,accept3_rate\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    const ChainRecord& r = records[i];
    out << i << ',' << r.j << ',' << format_double(r.s_sq) << ',' << (r.accepted_model ? 1 : 0)
        << ',' << format_double(r.bridge_accept) << '\n';
  }
}

int cmd_fit(const RunConfig& cfg, const std::string& data_file, const std::string& mode,
            const std::string& out_dir) {
  const auto t_start = std::chrono::steady_clock::now();
  const Path data = read_path_csv(data_file);
  const BasisSpec spec = cfg.make_spec();
  const PriorConfig prior = cfg.make_prior();
  const SamplerConfig sampler_cfg = cfg.make_sampler();

  std::vector<ChainRecord> records;
  if (mode == "continuous") {
    if (data.dt > 0.01)
      std::cerr << "warning: observation spacing " << data.dt
                << " is coarse for the continuous-data algorithm; consider mode=discrete\n";
    records = run_continuous(data, spec, prior, sampler_cfg);
  } else if (mode == "discrete") {
    records = run_discrete(data.values, data.dt, spec, prior, sampler_cfg);
  } else {
    throw std::invalid_argument("mode must be continuous or discrete");
  }

  std::filesystem::create_directories(out_dir);
  const Eigen::VectorXd grid = uniform_grid(cfg.grid_size);
  const PosteriorSummary summary = summarize(records, spec, grid, cfg.alpha);
  const std::string comment = meta_comment(cfg);
  write_summary_csv(out_dir + "/summary.csv", summary, comment);
  write_chain_csv(out_dir + "/chain.csv", records, comment);

  const double runtime =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  json meta;
  meta["config"] = cfg.to_json();
  meta["config_hash"] = fnv1a(cfg.to_json().dump());
  meta["seed"] = cfg.seed;
  meta["mode"] = mode;
  meta["data_file"] = data_file;
  meta["data_rows"] = data.size();
  meta["data_dt"] = data.dt;
  meta["runtime_seconds"] = runtime;
  meta["s_sq_mean"] = summary.s_sq_mean;
  meta["s_sq_median"] = summary.s_sq_median;
  meta["mean_bridge_accept"] = summary.mean_bridge_accept;
  meta["band_method"] = "pointwise_empirical_quantiles";
  json hist = json::object();
  for (const auto& [j, n] : summary.model_histogram) hist[std::to_string(j)] = n;
  meta["model_histogram"] = hist;
  std::ofstream meta_out(out_dir + "/meta.json");
  if (!meta_out) throw std::invalid_argument("cannot write meta.json");
  meta_out << meta.dump(2) << "\n";
  std::cout << "fit done: " << records.size() << " records, s_sq mean "
            << summary.s_sq_mean << ", median " << summary.s_sq_median << "\n";
  return 0;
}

int cmd_summarize(const std::vector<std::string>& chain_files,
                  const std::vector<std::string>& labels, const std::string& out) {
  if (chain_files.empty()) throw std::invalid_argument("no chain files given");
  if (!labels.empty() && labels.size() != chain_files.size())
    throw std::invalid_argument("label count must match file count");
  std::ofstream o(out);
  if (!o) throw std::invalid_argument("cannot write file: " + out);
  o << "label,iter,j,s_sq,accept2,accept3_rate\n";
  std::string expected_header = "iter,j,s_sq,accept2,accept3_rate";
  for (std::size_t f = 0; f < chain_files.size(); ++f) {
    std::ifstream in(chain_files[f]);
    if (!in) throw std::invalid_argument("cannot open file: " + chain_files[f]);
    const std::string use_label = labels.empty() ? chain_files[f] : labels[f];
    std::string line;
    bool header_ok = false;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      if (!header_ok) {
        if (line != expected_header)
          throw std::invalid_argument("schema mismatch in " + chain_files[f] + ": " + line);
        header_ok = true;
        continue;
      }
      o << use_label << ',' << line << '\n';
    }
    if (!header_ok)
      throw std::invalid_argument("no header found in " + chain_files[f]);
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Nonparametric Bayesian drift estimation for periodic diffusions"};
  app.require_subcommand(1);

  RunConfig sim_cfg, fit_cfg;
  std::string drift_name = "main", coeff_file, out_file = "path.csv";
  double T = 200.0, dt = 1e-4;
  std::size_t keep_every = 1;

  auto* sim = app.add_subcommand("simulate", "simulate a diffusion path");
  add_config_flags(sim, sim_cfg, /*need_seed=*/true);
  sim->add_option("--drift", drift_name, "drift name: main, b1, b2, b3, zero");
  sim->add_option("--coeffs", coeff_file, "basis coefficient file (overrides --drift)");
  sim->add_option("--T", T, "time horizon")->required();
  sim->add_option("--dt", dt, "Euler step");
  sim->add_option("--keep-every", keep_every, "retain every k-th point");
  sim->add_option("--out", out_file, "output CSV");

  std::string data_file, mode = "continuous", out_dir = "fit";
  auto* fit = app.add_subcommand("fit", "fit the drift posterior to a data file");
  add_config_flags(fit, fit_cfg, /*need_seed=*/true);
  fit->add_option("--data", data_file, "input CSV (t,x)")->required();
  fit->add_option("--mode", mode, "continuous or discrete");
  fit->add_option("--out-dir", out_dir, "output directory");

  std::vector<std::string> chain_files, labels;
  std::string summarize_out = "comparison.csv";
  auto* summ = app.add_subcommand("summarize", "merge chain files for comparison plots");
  summ->add_option("--chains", chain_files, "chain.csv files")->required();
  summ->add_option("--labels", labels, "one label per chain file");
  summ->add_option("--out", summarize_out, "merged output CSV");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sim->parsed())
      return cmd_simulate(sim_cfg, drift_name, coeff_file, T, dt, keep_every, out_file);
    if (fit->parsed()) return cmd_fit(fit_cfg, data_file, mode, out_dir);
    return cmd_summarize(chain_files, labels, summarize_out);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args);
}

}  // namespace npdrift
