// SPDX-License-Identifier: Apache-2.0
#include "irscrb/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "irscrb/allocation.hpp"
#include "irscrb/crb_extended.hpp"
#include "irscrb/rng.hpp"

namespace irscrb {

namespace {

constexpr double kPi = 3.14159265358979323846;

template <typename E, std::size_t Count>
E parse_enum(const std::string& s, const E (&all)[Count], const char* what) {
  for (E e : all)
    if (s == to_string(e)) return e;
  throw std::invalid_argument(std::string("unknown ") + what + " '" + s + "'");
}

constexpr TargetModel kTargets[] = {TargetModel::point, TargetModel::extended};
constexpr SweepVariable kVariables[] = {SweepVariable::P0,      SweepVariable::M,
                                        SweepVariable::N,       SweepVariable::K,
                                        SweepVariable::beta_BI, SweepVariable::W_I,
                                        SweepVariable::Q_tot};
constexpr Scheme kSchemes[] = {Scheme::proposed_ao,   Scheme::random_phase,
                               Scheme::isotropic_tx,  Scheme::single_antenna_closed,
                               Scheme::extended_opt,  Scheme::extended_iso,
                               Scheme::fully_passive};
constexpr RecordStatus kStatuses[] = {RecordStatus::ok, RecordStatus::rank_deficient,
                                      RecordStatus::failed, RecordStatus::invalid};

int as_count(double value, const char* what) {
  const double r = std::round(value);
  if (std::abs(r - value) > 1e-9 || r < 1.0 || r > 1e6)
    throw std::invalid_argument(std::string(what) + " values must be positive integers");
  return static_cast<int>(r);
}

}  // namespace

const char* to_string(TargetModel t) { return t == TargetModel::point ? "point" : "extended"; }

const char* to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::P0: return "P0";
    case SweepVariable::M: return "M";
    case SweepVariable::N: return "N";
    case SweepVariable::K: return "K";
    case SweepVariable::beta_BI: return "beta_BI";
    case SweepVariable::W_I: return "W_I";
    case SweepVariable::Q_tot: return "Q_tot";
  }
  return "unknown";
}

const char* to_string(Scheme s) {
  switch (s) {
    case Scheme::proposed_ao: return "proposed_ao";
    case Scheme::random_phase: return "random_phase";
    case Scheme::isotropic_tx: return "isotropic_tx";
    case Scheme::single_antenna_closed: return "single_antenna_closed";
    case Scheme::extended_opt: return "extended_opt";
    case Scheme::extended_iso: return "extended_iso";
    case Scheme::fully_passive: return "fully_passive";
  }
  return "unknown";
}

const char* to_string(RecordStatus s) {
  switch (s) {
    case RecordStatus::ok: return "ok";
    case RecordStatus::rank_deficient: return "rank_deficient";
    case RecordStatus::failed: return "failed";
    case RecordStatus::invalid: return "invalid";
  }
  return "unknown";
}

TargetModel parse_target(const std::string& s) { return parse_enum(s, kTargets, "target"); }
SweepVariable parse_variable(const std::string& s) { return parse_enum(s, kVariables, "sweep variable"); }
Scheme parse_scheme(const std::string& s) { return parse_enum(s, kSchemes, "scheme"); }
RecordStatus parse_record_status(const std::string& s) { return parse_enum(s, kStatuses, "status"); }

bool scheme_is_point(Scheme s) {
  return s == Scheme::proposed_ao || s == Scheme::random_phase || s == Scheme::isotropic_tx ||
         s == Scheme::single_antenna_closed;
}

void SweepSpec::validate() const {
  base.validate();
  if (values.empty()) throw std::invalid_argument("sweep: value list is empty");
  for (std::size_t i = 1; i < values.size(); ++i)
    if (!(values[i] > values[i - 1]))
      throw std::invalid_argument("sweep: values must be strictly increasing");
  if (trials < 1) throw std::invalid_argument("sweep: trials must be >= 1");
  if (alpha_draws < 1) throw std::invalid_argument("sweep: alpha_draws must be >= 1");
  if (schemes.empty()) throw std::invalid_argument("sweep: no schemes");
  if (std::abs(theta) > kMaxConfigTheta + 1e-12)
    throw std::invalid_argument("sweep: |theta| must be <= 89 degrees");
  if (M_r < 0) throw std::invalid_argument("sweep: M_r must be >= 0");
  for (Scheme s : schemes) {
    if (scheme_is_point(s) != (target == TargetModel::point))
      throw std::invalid_argument(std::string("sweep: scheme ") + to_string(s) +
                                  " does not apply to a " + to_string(target) + " target");
    if (s == Scheme::single_antenna_closed && (base.M != 1 || vary == SweepVariable::M))
      throw std::invalid_argument("sweep: single_antenna_closed needs M = 1 throughout");
    if ((vary == SweepVariable::W_I || vary == SweepVariable::Q_tot) &&
        s != Scheme::single_antenna_closed)
      throw std::invalid_argument("sweep: W_I and Q_tot sweeps support only single_antenna_closed");
  }
  for (double v : values) apply_sweep_value(*this, v).validate();
}

SystemConfig apply_sweep_value(const SweepSpec& spec, double value) {
  SystemConfig cfg = spec.base;
  switch (spec.vary) {
    case SweepVariable::P0: cfg.P0 = dbm_to_watts(value); break;
    case SweepVariable::M: cfg.M = as_count(value, "M"); break;
    case SweepVariable::N: cfg.N = as_count(value, "N"); break;
    case SweepVariable::K: cfg.K = as_count(value, "K"); break;
    case SweepVariable::beta_BI: cfg.beta_BI = db_to_linear(value); break;
    case SweepVariable::W_I:
    case SweepVariable::Q_tot: {
      AllocationBudget b = spec.allocation;
      (spec.vary == SweepVariable::W_I ? b.W_I : b.Q_tot) = value;
      const AllocationResult r = allocate_optimal(b.Q_tot, b.W_I, b.W_s);
      cfg.N = std::max(1, static_cast<int>(std::lround(r.N_cont)));
      cfg.K = std::max(2, static_cast<int>(std::lround(r.K_cont)));
      break;
    }
  }
  return cfg;
}

std::uint64_t trial_seed(std::uint64_t seed, int trial) {
  return mix_seed(seed, static_cast<std::uint64_t>(trial));
}

double alpha_factor(const SweepSpec& spec, std::uint64_t tseed) {
  if (!spec.average_alpha) return 1.0;
  double acc = 0.0;
  for (int d = 0; d < spec.alpha_draws; ++d)
    acc += 1.0 / std::norm(complex_normal_at(tseed, Stream::target_fading, static_cast<std::uint64_t>(d)));
  return acc / spec.alpha_draws;
}

double evaluate_trial(const SweepSpec& spec, double value, Scheme scheme, int trial) {
  const SystemConfig cfg = apply_sweep_value(spec, value);
  const std::uint64_t ts = trial_seed(spec.seed, trial);
  const ChannelRealization ch = rician_channel(cfg, ts);

  if (!scheme_is_point(scheme)) {
    switch (scheme) {
      case Scheme::extended_opt:
        return crb_extended_opt(ch.G, cfg.P0, cfg.K, cfg.T, cfg.sigma2_R).crb;
      case Scheme::extended_iso:
        return crb_extended_iso(ch.G, cfg.P0, cfg.K, cfg.T, cfg.sigma2_R).crb;
      default: {
        FullyPassiveConfig fp;
        fp.M_r = spec.M_r > 0 ? spec.M_r : cfg.K;
        fp.G_r = rician_matrix(cfg, fp.M_r, cfg.N, ts, true);
        TransmitCovariance Rx;
        try {
          Rx = optimal_transmit_extended(ch.G, cfg.P0);
        } catch (const EstimabilityError&) {
          return kInfiniteCrb;
        }
        return crb_fully_passive(Rx, ch.G, fp, cfg.T, cfg.sigma2_R);
      }
    }
  }

  const PointTargetScene scene = make_scene(spec.theta, cplx(1.0, 0.0), cfg);
  const CVec a = target_steering(scene.theta, cfg.N, cfg.d_hat, cfg.lambda_R);
  double crb = kInfiniteCrb;
  switch (scheme) {
    case Scheme::single_antenna_closed:
      crb = single_antenna_optimum(scene, *ch.h_BI, cfg).crb;
      break;
    case Scheme::proposed_ao: {
      AoOptions opt = spec.ao;
      opt.seed = ts;
      crb = ao_minimize_crb(scene, ch.G, cfg, default_initial_phases(a, ch.G), opt).crb;
      break;
    }
    case Scheme::random_phase: {
      CounterRng rng(ts, Stream::random_phase);
      RVec phases(cfg.N);
      for (int n = 0; n < cfg.N; ++n) phases(n) = 2.0 * kPi * rng.uniform();
      const PhaseProfile v = PhaseProfile::from_phases(phases);
      const auto tx = transmit_subproblem(v.lift(), a, ch.G, cfg.K, cfg.P0, spec.ao.solver);
      crb = crb_point_closed(scene, tx.Rx, v, ch.G, cfg);
      break;
    }
    case Scheme::isotropic_tx: {
      const auto iso = TransmitCovariance::isotropic(cfg.M, cfg.P0);
      const PhaseProfile init = default_initial_phases(a, ch.G);
      crb = crb_point_closed(scene, iso, init, ch.G, cfg);
      const auto irs = irs_subproblem(iso.R, a, ch.G, cfg.K, spec.ao.solver);
      const auto rnd = gaussian_randomization(irs.V, iso.R, a, ch.G, cfg.K,
                                              spec.ao.randomization_samples, ts);
      crb = std::min(crb, crb_point_closed(scene, iso, rnd.v, ch.G, cfg));
      break;
    }
    default:
      break;
  }
  return crb * alpha_factor(spec, ts);
}

int worker_count() {
  if (const char* env = std::getenv("IRSCRB_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n >= 1) return static_cast<int>(std::min(n, 256L));
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::vector<SweepRecord> run_sweep(const SweepSpec& spec, bool timing) {
  spec.validate();
  struct Item {
    std::size_t value_idx, scheme_idx;
    int trial;
    double crb = kInfiniteCrb;
    RecordStatus status = RecordStatus::ok;
    double ms = 0.0;
  };
  std::vector<Item> items;
  for (std::size_t v = 0; v < spec.values.size(); ++v)
    for (std::size_t s = 0; s < spec.schemes.size(); ++s)
      for (int t = 0; t < spec.trials; ++t) items.push_back({v, s, t});

  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= items.size()) return;
      Item& it = items[i];
      const auto t0 = std::chrono::steady_clock::now();
      try {
        it.crb = evaluate_trial(spec, spec.values[it.value_idx], spec.schemes[it.scheme_idx], it.trial);
        it.status = std::isinf(it.crb) ? RecordStatus::rank_deficient : RecordStatus::ok;
      } catch (const std::invalid_argument&) {
        it.status = RecordStatus::invalid;
      } catch (const EstimabilityError&) {
        it.status = RecordStatus::rank_deficient;
        it.crb = kInfiniteCrb;
      } catch (const std::exception&) {
        it.status = RecordStatus::failed;
      }
      it.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    }
  };
  const int workers = std::max(1, std::min<int>(worker_count(), static_cast<int>(items.size())));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();

  std::vector<SweepRecord> out;
  std::size_t k = 0;
  for (std::size_t v = 0; v < spec.values.size(); ++v) {
    for (std::size_t s = 0; s < spec.schemes.size(); ++s) {
      SweepRecord rec;
      rec.vary = spec.vary;
      rec.value = spec.values[v];
      rec.scheme = spec.schemes[s];
      double sum = 0.0, ms = 0.0;
      int used = 0;
      bool deficient = false, invalid = false;
      for (int t = 0; t < spec.trials; ++t, ++k) {
        const Item& it = items[k];
        ms += it.ms;
        if (it.status == RecordStatus::ok) {
          sum += it.crb;
          ++used;
        } else if (it.status == RecordStatus::rank_deficient) {
          deficient = true;
          ++used;
        } else if (it.status == RecordStatus::invalid) {
          invalid = true;
        }
      }
      rec.trials = used;
      rec.wall_ms = timing ? ms : 0.0;
      if (invalid) {
        rec.status = RecordStatus::invalid;
      } else if (deficient) {
        rec.status = RecordStatus::rank_deficient;
      } else if (used == 0) {
        rec.status = RecordStatus::failed;
      } else {
        rec.crb = sum / used;
        rec.crb_db = 10.0 * std::log10(rec.crb);
      }
      out.push_back(rec);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::string fmt_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17e", x);
  return buf;
}

double parse_double(const std::string& s) {
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size())
    throw std::invalid_argument("csv: bad number '" + s + "'");
  return x;
}

constexpr const char* kCsvHeader = "vary,value,scheme,crb,crb_db,trials,status,wall_ms";

}  // namespace

void write_csv(const std::vector<SweepRecord>& records, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const auto& r : records) {
    out << to_string(r.vary) << ',' << fmt_double(r.value) << ',' << to_string(r.scheme) << ','
        << fmt_double(r.crb) << ',' << fmt_double(r.crb_db) << ',' << r.trials << ','
        << to_string(r.status) << ',' << fmt_double(r.wall_ms) << '\n';
  }
}

void emit_csv(const std::vector<SweepRecord>& records, const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_csv(records, f);
  f.flush();
  if (!f) throw std::runtime_error("write failed for '" + path + "'");
}

std::vector<SweepRecord> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw std::invalid_argument("csv: bad header");
  std::vector<SweepRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 8) throw std::invalid_argument("csv: expected 8 fields in '" + line + "'");
    SweepRecord r;
    r.vary = parse_variable(f[0]);
    r.value = parse_double(f[1]);
    r.scheme = parse_scheme(f[2]);
    r.crb = parse_double(f[3]);
    r.crb_db = parse_double(f[4]);
    r.trials = static_cast<int>(parse_double(f[5]));
    r.status = parse_record_status(f[6]);
    r.wall_ms = parse_double(f[7]);
    out.push_back(r);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Configuration

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"system",
       {"M", "N", "K", "T", "P0_dBm", "lambda", "d_hat", "sigma2_dBm", "d_BI", "d_IT", "C0_dB",
        "alpha_BI", "beta_BI_dB", "kappa_dBsm", "los_angle_irs_deg", "los_angle_bs_deg"}},
      {"scene", {"theta_deg"}},
      {"sweep",
       {"target", "vary", "values", "schemes", "trials", "seed", "average_alpha", "alpha_draws"}},
      {"allocation", {"W_I", "W_s", "Q_tot"}},
      {"solver", {"tol", "max_iter", "ao_tol", "ao_max_iter", "randomization_samples"}},
      {"fully_passive", {"M_r"}},
  };
  return keys;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

template <typename T>
T get(const pt::ptree& tree, const std::string& key, T fallback) {
  const auto node = tree.get_optional<std::string>(key);
  if (!node) return fallback;
  std::istringstream ss(*node);
  T value;
  if (!(ss >> value) || !(ss >> std::ws).eof())
    throw std::invalid_argument("config: bad value for '" + key + "': '" + *node + "'");
  return value;
}

bool get_bool(const pt::ptree& tree, const std::string& key, bool fallback) {
  const auto node = tree.get_optional<std::string>(key);
  if (!node) return fallback;
  if (*node == "true" || *node == "1" || *node == "yes") return true;
  if (*node == "false" || *node == "0" || *node == "no") return false;
  throw std::invalid_argument("config: bad boolean for '" + key + "'");
}

}  // namespace

SweepSpec parse_sweep_spec(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  for (const auto& [section, body] : tree) {
    const auto it = known_keys().find(section);
    if (it == known_keys().end()) throw std::invalid_argument("config: unknown section [" + section + "]");
    for (const auto& [key, _] : body)
      if (!it->second.count(key))
        throw std::invalid_argument("config: unknown key '" + section + "." + key + "'");
  }

  SweepSpec spec;
  SystemConfig& c = spec.base;
  c.M = get(tree, "system.M", c.M);
  c.N = get(tree, "system.N", c.N);
  c.K = get(tree, "system.K", c.K);
  c.T = get(tree, "system.T", c.T);
  c.P0 = dbm_to_watts(get(tree, "system.P0_dBm", watts_to_dbm(c.P0)));
  c.lambda_R = get(tree, "system.lambda", c.lambda_R);
  c.d_hat = get(tree, "system.d_hat", c.lambda_R / 2.0);
  c.sigma2_R = dbm_to_watts(get(tree, "system.sigma2_dBm", -90.0));
  c.d_BI = get(tree, "system.d_BI", c.d_BI);
  c.d_IT = get(tree, "system.d_IT", c.d_IT);
  c.C0 = db_to_linear(get(tree, "system.C0_dB", -30.0));
  c.alpha_BI = get(tree, "system.alpha_BI", c.alpha_BI);
  c.beta_BI = db_to_linear(get(tree, "system.beta_BI_dB", 5.0));
  c.kappa = db_to_linear(get(tree, "system.kappa_dBsm", 7.0));
  c.los_angle_irs = get(tree, "system.los_angle_irs_deg", 0.0) * kPi / 180.0;
  c.los_angle_bs = get(tree, "system.los_angle_bs_deg", 0.0) * kPi / 180.0;

  spec.theta = get(tree, "scene.theta_deg", 60.0) * kPi / 180.0;

  spec.target = parse_target(get<std::string>(tree, "sweep.target", "point"));
  spec.vary = parse_variable(get<std::string>(tree, "sweep.vary", "P0"));
  for (const auto& v : split_list(tree.get<std::string>("sweep.values", ""))) {
    try {
      spec.values.push_back(parse_double(v));
    } catch (const std::invalid_argument&) {
      throw std::invalid_argument("config: bad value in 'sweep.values': '" + v + "'");
    }
  }
  const std::string default_scheme = spec.target == TargetModel::point ? "proposed_ao" : "extended_opt";
  for (const auto& s : split_list(tree.get<std::string>("sweep.schemes", default_scheme)))
    spec.schemes.push_back(parse_scheme(s));
  spec.trials = get(tree, "sweep.trials", spec.trials);
  spec.seed = get<std::uint64_t>(tree, "sweep.seed", spec.seed);
  spec.average_alpha = get_bool(tree, "sweep.average_alpha", spec.average_alpha);
  spec.alpha_draws = get(tree, "sweep.alpha_draws", spec.alpha_draws);

  spec.allocation.W_I = get(tree, "allocation.W_I", spec.allocation.W_I);
  spec.allocation.W_s = get(tree, "allocation.W_s", spec.allocation.W_s);
  spec.allocation.Q_tot = get(tree, "allocation.Q_tot", spec.allocation.Q_tot);

  spec.ao.solver.tol = get(tree, "solver.tol", spec.ao.solver.tol);
  spec.ao.solver.max_iter = get(tree, "solver.max_iter", spec.ao.solver.max_iter);
  spec.ao.tol = get(tree, "solver.ao_tol", spec.ao.tol);
  spec.ao.max_iter = get(tree, "solver.ao_max_iter", spec.ao.max_iter);
  spec.ao.randomization_samples =
      get(tree, "solver.randomization_samples", spec.ao.randomization_samples);

  spec.M_r = get(tree, "fully_passive.M_r", spec.M_r);
  return spec;
}

SweepSpec load_sweep_spec(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot open config '" + path + "'");
  return parse_sweep_spec(f);
}

// ---------------------------------------------------------------------------
// Selftest

namespace {

bool nonincreasing(const std::vector<double>& x, double slack = 0.0) {
  for (std::size_t i = 1; i < x.size(); ++i)
    if (x[i] > x[i - 1] * (1.0 + slack)) return false;
  return true;
}

bool increasing(const std::vector<double>& x) {
  for (std::size_t i = 1; i < x.size(); ++i)
    if (!(x[i] > x[i - 1])) return false;
  return true;
}

std::vector<double> sweep_crbs(const SweepSpec& spec) {
  std::vector<double> out;
  for (const auto& r : run_sweep(spec, false)) out.push_back(r.crb);
  return out;
}

std::string join(const std::vector<double>& x) {
  std::ostringstream ss;
  ss.precision(6);
  for (std::size_t i = 0; i < x.size(); ++i) ss << (i ? " " : "") << x[i];
  return ss.str();
}

SweepSpec small_spec(TargetModel target, SweepVariable vary, std::vector<double> values,
                     Scheme scheme) {
  SweepSpec s;
  s.base.M = 4;
  s.base.N = 4;
  s.base.K = 4;
  s.base.sigma2_R = dbm_to_watts(-90.0);
  s.target = target;
  s.vary = vary;
  s.values = std::move(values);
  s.schemes = {scheme};
  s.trials = 2;
  s.seed = 7;
  s.alpha_draws = 10;
  s.ao.max_iter = 10;
  s.ao.randomization_samples = 50;
  return s;
}

}  // namespace

std::vector<SelftestCase> run_selftest() {
  std::vector<SelftestCase> out;
  auto record = [&](std::string name, auto&& fn) {
    try {
      std::string detail;
      const bool ok = fn(detail);
      out.push_back({std::move(name), ok, detail});
    } catch (const std::exception& e) {
      out.push_back({std::move(name), false, std::string("exception: ") + e.what()});
    }
  };

  record("schur_identity", [](std::string& detail) {
    SystemConfig cfg;
    cfg.M = 3;
    cfg.N = 4;
    cfg.K = 5;
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const auto ch = rician_channel(cfg, mix_seed(11, i));
      const auto scene = make_scene(0.3 + 0.05 * i, cplx(0.8, -0.4), cfg);
      CMat X(cfg.M, cfg.M);
      for (int r = 0; r < cfg.M; ++r)
        for (int c = 0; c < cfg.M; ++c) X(r, c) = complex_normal_at(i, Stream::user, r * 8 + c);
      TransmitCovariance Rx{X * X.adjoint(), 0.0};
      Rx.budget = Rx.R.trace().real();
      RVec ph(cfg.N);
      for (int n = 0; n < cfg.N; ++n) ph(n) = 0.7 * n * (i + 1);
      const auto v = PhaseProfile::from_phases(ph);
      const double closed = crb_point_closed(scene, Rx, v, ch.G, cfg);
      const double fim = fim_point(scene, Rx, v, ch.G, cfg).F.inverse()(0, 0);
      worst = std::max(worst, std::abs(closed - fim) / fim);
    }
    detail = "max relative difference " + std::to_string(worst);
    return worst <= 1e-9;
  });

  record("allocation_prefers_sensors", [](std::string& detail) {
    const auto opt = allocate_optimal(600, 1, 1);
    const auto ex = allocate_exhaustive(600, 1, 1, 0.25);
    detail = "N=" + std::to_string(opt.N_cont) + " K=" + std::to_string(opt.K_cont);
    return opt.K_cont > opt.N_cont && opt.objective >= ex.objective * (1.0 - 5e-3);
  });

  record("single_antenna_power_slope", [](std::string& detail) {
    auto s = small_spec(TargetModel::point, SweepVariable::P0, {10, 20, 30},
                        Scheme::single_antenna_closed);
    s.base.M = 1;
    const auto c = sweep_crbs(s);
    detail = join(c);
    for (std::size_t i = 1; i < c.size(); ++i)
      if (std::abs(10.0 * std::log10(c[i - 1] / c[i]) - 10.0) > 1e-9) return false;
    return true;
  });

  record("point_ao_nonincreasing_in_P0", [](std::string& detail) {
    const auto c = sweep_crbs(small_spec(TargetModel::point, SweepVariable::P0, {10, 20, 30},
                                         Scheme::proposed_ao));
    detail = join(c);
    return nonincreasing(c);
  });

  record("point_ao_nonincreasing_in_K", [](std::string& detail) {
    const auto c = sweep_crbs(small_spec(TargetModel::point, SweepVariable::K, {2, 4, 8},
                                         Scheme::proposed_ao));
    detail = join(c);
    return nonincreasing(c);
  });

  record("point_ao_nonincreasing_in_N", [](std::string& detail) {
    const auto c = sweep_crbs(small_spec(TargetModel::point, SweepVariable::N, {2, 4, 8},
                                         Scheme::proposed_ao));
    detail = join(c);
    return nonincreasing(c);
  });

  record("point_ao_nonincreasing_in_M", [](std::string& detail) {
    const auto c = sweep_crbs(small_spec(TargetModel::point, SweepVariable::M, {1, 2, 4},
                                         Scheme::proposed_ao));
    detail = join(c);
    return nonincreasing(c);
  });

  record("extended_linear_in_K", [](std::string& detail) {
    const auto c = sweep_crbs(small_spec(TargetModel::extended, SweepVariable::K, {4, 8, 16},
                                         Scheme::extended_opt));
    detail = join(c);
    return std::abs(c[1] / c[0] - 2.0) < 1e-12 && std::abs(c[2] / c[0] - 4.0) < 1e-12;
  });

  record("extended_increasing_in_N", [](std::string& detail) {
    auto s = small_spec(TargetModel::extended, SweepVariable::N, {2, 4, 6}, Scheme::extended_opt);
    s.base.M = 8;
    const auto c = sweep_crbs(s);
    detail = join(c);
    return increasing(c);
  });

  record("extended_decreasing_in_M", [](std::string& detail) {
    const auto c = sweep_crbs(small_spec(TargetModel::extended, SweepVariable::M, {4, 6, 8},
                                         Scheme::extended_opt));
    detail = join(c);
    std::vector<double> r(c.rbegin(), c.rend());
    return increasing(r);
  });

  record("extended_decreasing_in_P0", [](std::string& detail) {
    const auto c = sweep_crbs(small_spec(TargetModel::extended, SweepVariable::P0, {10, 20, 30},
                                         Scheme::extended_opt));
    detail = join(c);
    std::vector<double> r(c.rbegin(), c.rend());
    return increasing(r);
  });

  record("extended_phase_independence", [](std::string& detail) {
    SystemConfig cfg;
    cfg.M = 6;
    cfg.N = 4;
    const auto ch = rician_channel(cfg, 3);
    const auto Rx = TransmitCovariance::isotropic(cfg.M, cfg.P0);
    const double ref = crb_extended(Rx, ch.G, cfg.K, cfg.T, cfg.sigma2_R).crb;
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
      RVec ph(cfg.N);
      for (int n = 0; n < cfg.N; ++n) ph(n) = 1.3 * (i + 1) * (n + 1);
      const double c = crb_extended_with_phases(Rx, PhaseProfile::from_phases(ph), ch.G, cfg.K,
                                                cfg.T, cfg.sigma2_R);
      worst = std::max(worst, std::abs(c - ref) / ref);
    }
    detail = "max relative difference " + std::to_string(worst);
    return worst <= 1e-10;
  });
  return out;
}

}  // namespace irscrb
