// SPDX-License-Identifier: Apache-2.0
#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include <CLI11.hpp>

#include "irscrb/allocation.hpp"
#include "irscrb/ao.hpp"
#include "irscrb/crb_extended.hpp"
#include "irscrb/harness.hpp"

namespace irscrb {

namespace {

std::string num(double x) {
  if (std::isinf(x)) return "inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

void print_allocation(std::ostream& out, const AllocationResult& r) {
  out << to_string(r.mode) << " N=" << num(r.N_cont) << " K=" << num(r.K_cont)
      << " varsigma=" << num(r.varsigma) << " objective=" << num(r.objective) << '\n';
}

int run_allocate(std::ostream& out, double q, double wi, double ws, bool exhaustive, double step) {
  print_allocation(out, allocate_optimal(q, wi, ws));
  print_allocation(out, allocate_suboptimal(q, wi, ws));
  if (exhaustive) print_allocation(out, allocate_exhaustive(q, wi, ws, step));
  return 0;
}

int run_crb(std::ostream& out, const std::string& kind, const std::string& config) {
  const SweepSpec spec = load_sweep_spec(config);
  const SystemConfig& cfg = spec.base;
  cfg.validate();
  const std::uint64_t ts = trial_seed(spec.seed, 0);
  const ChannelRealization ch = rician_channel(cfg, ts);

  if (kind == "extended") {
    const auto opt = crb_extended_opt(ch.G, cfg.P0, cfg.K, cfg.T, cfg.sigma2_R);
    const auto iso = crb_extended_iso(ch.G, cfg.P0, cfg.K, cfg.T, cfg.sigma2_R);
    out << "extended_opt " << num(opt.crb) << '\n';
    out << "extended_iso " << num(iso.crb) << '\n';
    out << "gap_db " << (opt.gap_db ? num(*opt.gap_db) : std::string("inf")) << '\n';
    if (!opt.finite()) out << "rank_deficiency " << opt.rank_deficiency << '\n';
    return 0;
  }

  const PointTargetScene scene = make_scene(spec.theta, cplx(1.0, 0.0), cfg);
  const CVec a = target_steering(scene.theta, cfg.N, cfg.d_hat, cfg.lambda_R);
  const double factor = alpha_factor(spec, ts);
  if (cfg.M == 1)
    out << "single_antenna_closed " << num(single_antenna_optimum(scene, *ch.h_BI, cfg).crb * factor)
        << '\n';
  AoOptions opt = spec.ao;
  opt.seed = ts;
  const AoResult res = ao_minimize_crb(scene, ch.G, cfg, default_initial_phases(a, ch.G), opt);
  out << "initial " << num(res.initial_crb * factor) << '\n';
  out << "proposed_ao " << num(res.crb * factor) << '\n';
  out << "ao_iterations " << res.iterations << " (" << to_string(res.status) << ")\n";
  return 0;
}

int run_sweep_cmd(std::ostream& out, const std::string& config, const std::string& path,
                  bool no_timing) {
  const SweepSpec spec = load_sweep_spec(config);
  const auto records = run_sweep(spec, !no_timing);
  emit_csv(records, path);
  int failed = 0;
  for (const auto& r : records)
    if (r.status == RecordStatus::failed) ++failed;
  out << "wrote " << records.size() << " rows to " << path << '\n';
  if (failed > 0) {
    out << failed << " rows failed\n";
    return 2;
  }
  return 0;
}

int run_selftest_cmd(std::ostream& out) {
  int failed = 0;
  for (const auto& c : run_selftest()) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name;
    if (!c.detail.empty()) out << "  [" << c.detail << "]";
    out << '\n';
    if (!c.passed) ++failed;
  }
  return failed == 0 ? 0 : 2;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"CRB evaluation and optimization for semi-passive IRS sensing", "irscrb"};
  app.require_subcommand(1);

  std::string config, csv_path, kind;
  bool no_timing = false, exhaustive = false;
  double qtot = 0.0, wi = 0.0, ws = 0.0, step = 0.25;

  auto* sweep = app.add_subcommand("sweep", "run a parameter sweep and write CSV");
  sweep->add_option("--config", config, "configuration file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--out", csv_path, "output CSV path")->required();
  sweep->add_flag("--no-timing", no_timing, "write wall_ms = 0 (bitwise reproducible)");

  auto* alloc = app.add_subcommand("allocate", "split a budget between elements and sensors");
  alloc->add_option("--qtot", qtot, "total budget")->required();
  alloc->add_option("--wi", wi, "cost per reflecting element")->required();
  alloc->add_option("--ws", ws, "cost per sensor")->required();
  alloc->add_flag("--exhaustive", exhaustive, "also run the grid search");
  alloc->add_option("--step", step, "grid step for --exhaustive");

  auto* crb = app.add_subcommand("crb", "evaluate the bound for one channel draw");
  crb->add_option("kind", kind, "point or extended")->required()->check(CLI::IsMember({"point", "extended"}));
  crb->add_option("--config", config, "configuration file")->required()->check(CLI::ExistingFile);

  auto* self = app.add_subcommand("selftest", "run the invariant suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 1;
  }

  try {
    if (sweep->parsed()) return run_sweep_cmd(out, config, csv_path, no_timing);
    if (alloc->parsed()) return run_allocate(out, qtot, wi, ws, exhaustive, step);
    if (crb->parsed()) return run_crb(out, kind, config);
    if (self->parsed()) return run_selftest_cmd(out);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

}  // namespace irscrb
