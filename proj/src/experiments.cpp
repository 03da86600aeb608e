#include "benj/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

namespace benj::experiments {

using nlohmann::json;

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::euler_box: return "euler-box";
    case Scheme::preissmann: return "preissmann";
    case Scheme::tvm: return "tvm";
    case Scheme::heun: return "heun";
    case Scheme::rk4: return "rk4";
  }
  return "?";
}

std::string to_string(InitialKind k) {
  switch (k) {
    case InitialKind::bo_soliton: return "bo-soliton";
    case InitialKind::gaussian: return "gaussian";
    case InitialKind::cosine: return "cosine";
  }
  return "?";
}

Scheme scheme_from_string(const std::string& s) {
  if (s == "euler-box") return Scheme::euler_box;
  if (s == "preissmann") return Scheme::preissmann;
  if (s == "tvm") return Scheme::tvm;
  if (s == "heun") return Scheme::heun;
  if (s == "rk4") return Scheme::rk4;
  throw std::invalid_argument("unknown scheme: " + s);
}

InitialKind initial_from_string(const std::string& s) {
  if (s == "bo-soliton") return InitialKind::bo_soliton;
  if (s == "gaussian") return InitialKind::gaussian;
  if (s == "cosine") return InitialKind::cosine;
  throw std::invalid_argument("unknown initial condition: " + s);
}

void RunConfig::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("config: dt must be positive");
  if (!(t_end > 0.0)) throw std::invalid_argument("config: t_end must be positive");
  if (!(length > 0.0)) throw std::invalid_argument("config: l must be positive");
  if (n < 3) throw std::invalid_argument("config: n must be at least 3");
  if (snapshot_every < 0 || invariants_every < 1)
    throw std::invalid_argument("config: bad sampling cadence");
  if (scheme == Scheme::preissmann && n % 2 == 0)
    throw std::invalid_argument("config: preissmann requires an odd grid");
  if (scheme == Scheme::tvm && n % 2 == 1)
    throw std::invalid_argument("config: tvm requires an even grid");
  if (initial == InitialKind::bo_soliton && !(soliton_speed * length > 2.0 * std::numbers::pi))
    throw std::invalid_argument("config: soliton requires c*l > 2*pi");
}

double bo_soliton(double x, double t, double speed, double length) {
  double a = 2.0 * std::numbers::pi / (speed * length);
  if (!(a > 0.0 && a < 1.0))
    throw std::invalid_argument("bo_soliton: amplitude parameter must satisfy 0 < 2*pi/(c*l) < 1");
  double root = std::sqrt(1.0 - a * a);
  return 2.0 * speed * a * a / (1.0 - root * std::cos(speed * a * (x - speed * t - length / 2.0)));
}

Field initial_field(const RunConfig& cfg, const Grid& grid, double t) {
  switch (cfg.initial) {
    case InitialKind::bo_soliton:
      return Field::from_function(grid, [&](double x) {
        return bo_soliton(x, t, cfg.soliton_speed, cfg.length);
      });
    case InitialKind::gaussian: {
      double center = (cfg.gaussian_center == 0.0) ? cfg.length / 2.0 : cfg.gaussian_center;
      return Field::from_function(grid, [&](double x) {
        double d = x - center;
        return cfg.gaussian_amplitude * std::exp(-d * d / cfg.gaussian_width);
      });
    }
    case InitialKind::cosine:
      return Field::from_function(grid, [&](double x) {
        return std::cos(2.0 * std::numbers::pi * cfg.cosine_mode * x / cfg.length);
      });
  }
  throw std::logic_error("initial_field: unreachable");
}

RunConfig preset(const std::string& name) {
  RunConfig cfg;
  if (name == "bo-soliton") {
    cfg.params = Params{1.0, 0.0, 0.0, 1.0};
    cfg.length = 30.0;
    cfg.n = 255;  // the even-grid variant for tvm is n = 256
    cfg.dt = 2.5e-3;
    cfg.t_end = 10.0;
    cfg.scheme = Scheme::euler_box;
    cfg.initial = InitialKind::bo_soliton;
    cfg.soliton_speed = 0.25;
  } else if (name == "gaussian-split") {
    cfg.params = Params{-1.0, -1.0, 1.0, 1.0};
    cfg.length = 600.0;
    cfg.n = 2048;
    cfg.dt = 1e-2;
    cfg.t_end = 20.0;
    cfg.scheme = Scheme::euler_box;
    cfg.initial = InitialKind::gaussian;
    cfg.gaussian_amplitude = 2.0;
    cfg.gaussian_width = 16.0;
  } else if (name == "wave-breaking") {
    cfg.params = Params{0.01, 0.001, 0.1, 0.2};
    cfg.length = 10.0;
    cfg.n = 4096;
    cfg.dt = 1e-6;
    cfg.t_end = 5e-3;
    cfg.scheme = Scheme::euler_box;
    cfg.initial = InitialKind::cosine;
    cfg.cosine_mode = 1;
  } else {
    throw std::invalid_argument("unknown preset: " + name);
  }
  return cfg;
}

void apply_desk_scale(RunConfig& cfg) {
  if (cfg.n == 2048 && cfg.initial == InitialKind::gaussian) cfg.n = 512;
  if (cfg.n == 4096 && cfg.initial == InitialKind::cosine) cfg.n = 1024;
}

namespace {

std::string fmt17(double v) {
  if (v == 0.0) v = 0.0;  // canonicalize -0
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_invariants_csv(const std::filesystem::path& path,
                          const std::vector<diagnostics::InvariantRecord>& records) {
  std::ofstream out(path);
  out << "t,mass,momentum,energy\n";
  for (const auto& r : records)
    out << fmt17(r.t) << ',' << fmt17(r.mass) << ',' << fmt17(r.momentum) << ','
        << fmt17(r.energy) << '\n';
}

void write_snapshot_csv(const std::filesystem::path& dir, int step, const Field& u) {
  std::ofstream out(dir / ("snapshot_" + std::to_string(step) + ".csv"));
  out << "x,u\n";
  for (int i = 0; i < u.size(); ++i)
    out << fmt17(u.grid.node(i)) << ',' << fmt17(u[i]) << '\n';
}

void write_plot_script(const std::filesystem::path& dir) {
  std::ofstream out(dir / "plot.py");
  out << R"(#!/usr/bin/env python3
"""Render snapshots and invariant drift for a run directory."""
import csv, glob, os, sys

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

run_dir = os.path.dirname(os.path.abspath(__file__))

fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(8, 9))

for path in sorted(glob.glob(os.path.join(run_dir, "snapshot_*.csv")),
                   key=lambda p: int(p.split("_")[-1].split(".")[0])):
    step = path.split("_")[-1].split(".")[0]
    with open(path) as fh:
        rows = list(csv.DictReader(fh))
    ax1.plot([float(r["x"]) for r in rows], [float(r["u"]) for r in rows],
             label=f"step {step}")
ax1.set_xlabel("x"); ax1.set_ylabel("u"); ax1.legend(fontsize=7); ax1.set_title("snapshots")

with open(os.path.join(run_dir, "invariants.csv")) as fh:
    rows = list(csv.DictReader(fh))
t = [float(r["t"]) for r in rows]
for key in ("mass", "momentum", "energy"):
    base = float(rows[0][key])
    ax2.plot(t, [abs(float(r[key]) - base) for r in rows], label=f"|{key}(t) - {key}(0)|")
ax2.set_yscale("log"); ax2.set_xlabel("t"); ax2.legend(); ax2.set_title("invariant drift")

fig.tight_layout()
fig.savefig(os.path.join(run_dir, "run.png"), dpi=130)
print("wrote", os.path.join(run_dir, "run.png"))
)";
}

json config_to_json(const RunConfig& cfg) {
  return json{{"scheme", to_string(cfg.scheme)},
              {"initial", to_string(cfg.initial)},
              {"l", cfg.length},
              {"n", cfg.n},
              {"alpha", cfg.params.alpha},
              {"beta", cfg.params.beta},
              {"gamma", cfg.params.gamma},
              {"lambda", cfg.params.lambda},
              {"dt", cfg.dt},
              {"t_end", cfg.t_end},
              {"soliton_speed", cfg.soliton_speed},
              {"gaussian_amplitude", cfg.gaussian_amplitude},
              {"gaussian_width", cfg.gaussian_width},
              {"gaussian_center", cfg.gaussian_center},
              {"cosine_mode", cfg.cosine_mode},
              {"snapshot_every", cfg.snapshot_every},
              {"invariants_every", cfg.invariants_every},
              {"newton_tol", cfg.newton_tol},
              {"newton_max_iter", cfg.newton_max_iter}};
}

void apply_key(RunConfig& cfg, const std::string& key, const std::string& value) {
  auto d = [&] { return std::stod(value); };
  auto i = [&] { return std::stoi(value); };
  if (key == "scheme") cfg.scheme = scheme_from_string(value);
  else if (key == "initial") cfg.initial = initial_from_string(value);
  else if (key == "l") cfg.length = d();
  else if (key == "n") cfg.n = i();
  else if (key == "alpha") cfg.params.alpha = d();
  else if (key == "beta") cfg.params.beta = d();
  else if (key == "gamma") cfg.params.gamma = d();
  else if (key == "lambda") cfg.params.lambda = d();
  else if (key == "dt") cfg.dt = d();
  else if (key == "t_end") cfg.t_end = d();
  else if (key == "soliton_speed") cfg.soliton_speed = d();
  else if (key == "gaussian_amplitude") cfg.gaussian_amplitude = d();
  else if (key == "gaussian_width") cfg.gaussian_width = d();
  else if (key == "gaussian_center") cfg.gaussian_center = d();
  else if (key == "cosine_mode") cfg.cosine_mode = i();
  else if (key == "snapshot_every") cfg.snapshot_every = i();
  else if (key == "invariants_every") cfg.invariants_every = i();
  else if (key == "newton_tol") cfg.newton_tol = d();
  else if (key == "newton_max_iter") cfg.newton_max_iter = i();
  else throw std::invalid_argument("config: unknown key '" + key + "'");
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto notspace = line.find_first_not_of(" \t\r");
    if (notspace == std::string::npos) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: line " + std::to_string(lineno) + " is not key=value");
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r");
      auto e = s.find_last_not_of(" \t\r");
      return (b == std::string::npos) ? std::string() : s.substr(b, e - b + 1);
    };
    apply_key(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  if (path.extension() == ".json") {
    json j = json::parse(text);
    const json& c = j.contains("config") ? j.at("config") : j;
    RunConfig cfg;
    for (auto it = c.begin(); it != c.end(); ++it) {
      std::string value = it.value().is_string() ? it.value().get<std::string>()
                                                 : it.value().dump();
      apply_key(cfg, it.key(), value);
    }
    return cfg;
  }
  return parse_config_text(text);
}

std::string config_to_flat_text(const RunConfig& cfg) {
  std::ostringstream out;
  json j = config_to_json(cfg);
  for (auto it = j.begin(); it != j.end(); ++it) {
    out << it.key() << " = ";
    if (it.value().is_string())
      out << it.value().get<std::string>();
    else
      out << fmt17(it.value().get<double>());
    out << '\n';
  }
  return out.str();
}

RunResult run_experiment(const RunConfig& cfg, const std::filesystem::path& out_dir) {
  cfg.validate();
  std::filesystem::create_directories(out_dir);
  auto t_start = std::chrono::steady_clock::now();

  Grid grid = make_grid(cfg.length, cfg.n);
  Field u = initial_field(cfg, grid);
  int nsteps = static_cast<int>(std::llround(cfg.t_end / cfg.dt));

  solvers::NewtonSettings newton;
  newton.tol = cfg.newton_tol;
  newton.max_iter = cfg.newton_max_iter;

  std::vector<diagnostics::InvariantRecord> records;
  records.push_back(diagnostics::invariants(u, cfg.params, 0.0));
  write_snapshot_csv(out_dir, 0, u);

  RunResult result;
  result.out_dir = out_dir;
  result.status = "completed";

  integrators::StepperState stepper(cfg.scheme, u, cfg.params, cfg.dt, newton);
  u = stepper.current();

  auto sample = [&](long step) {
    double t = double(step) * cfg.dt;
    if (step == nsteps || step % cfg.invariants_every == 0)
      records.push_back(diagnostics::invariants(u, cfg.params, t));
    if (step == nsteps || (cfg.snapshot_every > 0 && step % cfg.snapshot_every == 0))
      write_snapshot_csv(out_dir, int(step), u);
  };

  result.steps = int(stepper.step_count());
  if (stepper.step_count() == 1) sample(1);  // leapfrog bootstrap counts as a step

  try {
    while (stepper.step_count() < nsteps) {
      stepper.advance();
      u = stepper.current();
      if (!u.all_finite()) {
        result.status = "diverged";
        result.failing_step = int(stepper.step_count());
        break;
      }
      sample(stepper.step_count());
      result.steps = int(stepper.step_count());
    }
  } catch (const solvers::NewtonError&) {
    result.status = "newton_failure";
    result.failing_step = result.steps + 1;
  }

  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();

  write_invariants_csv(out_dir / "invariants.csv", records);
  write_plot_script(out_dir);

  json manifest{{"config", config_to_json(cfg)},
                {"status", result.status},
                {"steps", result.steps},
                {"wall_seconds", result.wall_seconds},
                {"versions", json{{"benj", "0.1.0"}, {"manifest_format", 1}}}};
  if (result.failing_step >= 0) manifest["failing_step"] = result.failing_step;
  std::ofstream mout(out_dir / "run_manifest.json");
  mout << manifest.dump(2) << '\n';
  mout.close();

  if (result.status == "newton_failure")
    throw std::runtime_error("run aborted: newton failure at step " +
                             std::to_string(result.failing_step));
  return result;
}

std::string kernel_dump_csv(int n) {
  spectral::HilbertKernel k = spectral::hilbert_kernel(n);
  spectral::SpectralSymbols s = spectral::spectral_symbols(n);
  std::ostringstream out;
  out << "n,kernel,sgn_diag,wave_diag\n";
  for (int i = 0; i < n; ++i)
    out << i << ',' << fmt17(k.coeffs[static_cast<size_t>(i)]) << ','
        << s.sgn_diag[static_cast<size_t>(i)] << ',' << s.wave_diag[static_cast<size_t>(i)]
        << '\n';
  return out.str();
}

}  // namespace benj::experiments
