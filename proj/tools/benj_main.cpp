// Command-line driver: run configured simulations, materialize the paper
// presets, run convergence studies, and dump the transform kernels.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "benj/experiments.hpp"

namespace {

using namespace benj;

// The flat parser starts from defaults, so merge overrides by appending them
// to a text round-trip of the current config (later lines win).
void apply_overrides(experiments::RunConfig& cfg, const std::vector<std::string>& overrides) {
  for (const auto& kv : overrides) {
    auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("override must be key=value: " + kv);
    std::string merged = experiments::config_to_flat_text(cfg) + kv.substr(0, eq) + " = " +
                         kv.substr(eq + 1) + "\n";
    cfg = experiments::parse_config_text(merged);
  }
}

int run_and_report(const experiments::RunConfig& cfg, const std::string& out) {
  auto result = experiments::run_experiment(cfg, out);
  std::cout << "status: " << result.status << "\n"
            << "steps: " << result.steps << "\n"
            << "wall_seconds: " << result.wall_seconds << "\n"
            << "out: " << result.out_dir.string() << "\n";
  return result.status == "completed" ? 0 : 1;
}

int cmd_convergence_hilbert() {
  auto f = [](double x) { return std::exp(std::sin(2.0 * std::numbers::pi * x / 30.0)); };
  diagnostics::HilbertSeriesOracle oracle(f, 30.0, 4096);
  auto reference = [&](const Grid& g) {
    std::vector<double> pts(static_cast<size_t>(g.n));
    for (int i = 0; i < g.n; ++i) pts[static_cast<size_t>(i)] = g.node(i);
    return oracle.evaluate(pts);
  };
  for (auto [label, sizes] :
       {std::pair<const char*, std::vector<int>>{"even", {64, 128, 256}},
        std::pair<const char*, std::vector<int>>{"odd", {65, 129, 257}}}) {
    auto res = diagnostics::hilbert_convergence(f, 30.0, sizes, reference);
    std::printf("# %s grids\n", label);
    std::printf("n,dx,error\n");
    for (const auto& lv : res.levels) std::printf("%d,%.6g,%.6g\n", lv.n, lv.dx, lv.error);
    if (res.degenerate)
      std::printf("fitted_order,n/a (errors at round-off)\n");
    else
      std::printf("fitted_order,%.4f\n", res.fitted_order);
  }
  return 0;
}

int cmd_convergence_scheme() {
  std::printf("# euler-box soliton error at t=10, dt and dx halved together\n");
  std::printf("n,dt,max_error\n");
  double coarse = 0.0;
  for (auto [n, dt] : {std::pair<int, double>{255, 2.5e-3}, std::pair<int, double>{510, 1.25e-3}}) {
    experiments::RunConfig cfg = experiments::preset("bo-soliton");
    cfg.n = n;
    cfg.dt = dt;
    Grid g = make_grid(cfg.length, n);
    Field u = experiments::initial_field(cfg, g);
    auto [up, uc] = integrators::euler_box_start(u, cfg.params, dt);
    int steps = static_cast<int>(std::llround(cfg.t_end / dt));
    for (int i = 1; i < steps; ++i) {
      Field next = integrators::euler_box_step(up, uc, cfg.params, dt);
      up = uc;
      uc = next;
    }
    Field ref = experiments::initial_field(cfg, g, cfg.t_end);
    double err = diagnostics::error_norms(uc, ref).max_norm;
    std::printf("%d,%.6g,%.6g\n", n, dt, err);
    if (coarse == 0.0)
      coarse = err;
    else
      std::printf("error_ratio,%.3f\n", coarse / err);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"structure-preserving solvers for the Benjamin-type equations"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "run-out", preset_name, target;
  std::vector<std::string> overrides;
  bool full_scale = false;
  int kernel_n = 0;

  auto* run = app.add_subcommand("run", "run a simulation from a config file");
  run->add_option("--config", config_path, "flat key=value file or run_manifest.json")->required();
  run->add_option("--out", out_dir, "output directory");

  auto* preset = app.add_subcommand("preset", "run one of the built-in experiment profiles");
  preset->add_option("name", preset_name, "bo-soliton | gaussian-split | wave-breaking")->required();
  preset->add_option("--override", overrides, "key=value config overrides")->take_all();
  preset->add_flag("--full-scale", full_scale, "keep the published grid sizes for the large runs");
  preset->add_option("--out", out_dir, "output directory");

  auto* conv = app.add_subcommand("convergence", "grid refinement studies");
  conv->add_option("--target", target, "hilbert | scheme")->required();

  auto* kdump = app.add_subcommand("kernel-dump", "write kernel and symbol columns as CSV");
  kdump->add_option("--n", kernel_n, "grid size")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      auto cfg = benj::experiments::load_config(config_path);
      return run_and_report(cfg, out_dir);
    }
    if (*preset) {
      auto cfg = benj::experiments::preset(preset_name);
      if (!full_scale) benj::experiments::apply_desk_scale(cfg);
      apply_overrides(cfg, overrides);
      return run_and_report(cfg, out_dir);
    }
    if (*conv) {
      if (target == "hilbert") return cmd_convergence_hilbert();
      if (target == "scheme") return cmd_convergence_scheme();
      throw std::invalid_argument("unknown convergence target: " + target);
    }
    if (*kdump) {
      std::cout << benj::experiments::kernel_dump_csv(kernel_n);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
