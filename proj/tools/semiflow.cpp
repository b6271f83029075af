// semiflow: generate bundles, measure distances, select and verify from the
// command line. Exit codes: 0 success/true, 1 false/violations, 2 usage or
// input error, 3 numerical failure.

#include <cmath>
#include <iostream>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "semiflow/bundle.hpp"
#include "semiflow/errors.hpp"
#include "semiflow/families.hpp"
#include "semiflow/fluid.hpp"
#include "semiflow/io.hpp"
#include "semiflow/selection.hpp"
#include "semiflow/skorokhod.hpp"

namespace {

using namespace semiflow;

constexpr int kExitOk = 0;
constexpr int kExitFalse = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

struct NumericOptions {
  int trunc_N = 12;
  int resolution = 64;
  double tol = 1e-10;
  std::string kernel = "free-space";

  SkorokhodOptions metric() const {
    SkorokhodOptions o;
    o.kernel = kernel == "sampled" ? MatchingKernel::kSampled : MatchingKernel::kFreeSpace;
    o.resolution = resolution;
    o.tol = tol;
    return o;
  }
};

void add_metric_flags(CLI::App* cmd, NumericOptions& opts) {
  cmd->add_option("--trunc-N", opts.trunc_N, "d_inf truncation level")
      ->check(CLI::Range(2, 64))
      ->capture_default_str();
  cmd->add_option("--resolution", opts.resolution, "samples per polyline edge (sampled kernel)")
      ->check(CLI::Range(2, 1 << 20))
      ->capture_default_str();
  cmd->add_option("--kernel", opts.kernel, "d_M matching kernel")
      ->check(CLI::IsMember({"free-space", "sampled"}))
      ->capture_default_str();
}

double parse_number(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "Inf") return std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ParseError("not a number: " + text);
  }
  if (used != text.size()) throw ParseError("not a number: " + text);
  return v;
}

std::vector<double> parse_numbers(const std::vector<std::string>& items) {
  std::vector<double> out;
  out.reserve(items.size());
  for (const auto& s : items) out.push_back(parse_number(s));
  return out;
}

void emit(const std::optional<std::string>& path, const std::string& text) {
  if (path) {
    io::write_file(*path, text);
  } else {
    std::cout << text;
  }
}

std::string lines(const std::vector<io::Json>& records) {
  std::string out;
  for (const auto& r : records) out += io::dump(r) + "\n";
  return out;
}

// --- gen -------------------------------------------------------------------

struct GenArgs {
  std::string family = "sqrt-ode";
  double alpha = 0.5;
  double c = 1.0;
  std::vector<std::string> waiting_times{"0", "1", "2", "inf"};
  double horizon = 8.0;
  std::size_t samples_per_unit = 16;
  std::vector<double> time_grid{0.5, 1.0, 1.5, 2.0};
  std::vector<double> heights{2.0, 1.0, 0.0};
  std::vector<double> jump_times{1.0, 2.0};
  std::size_t count = 8;
  std::size_t dim = 1;
  std::uint64_t rng_seed = 0;
  double quantum = kDefaultQuantum;
  std::optional<std::string> out;
};

int run_gen(const GenArgs& a) {
  Bundle bundle(1);
  if (a.family == "sqrt-ode") {
    SqrtOdeFamily f;
    f.alpha = a.alpha;
    f.c = a.c;
    f.waiting_times = parse_numbers(a.waiting_times);
    f.horizon = a.horizon;
    f.samples_per_unit = a.samples_per_unit;
    f.time_grid = a.time_grid;
    f.quantum = a.quantum;
    bundle = gen_sqrt_ode_bundle(f);
  } else if (a.family == "steps") {
    bundle = gen_step_bundle(a.heights, a.jump_times, a.horizon, a.time_grid, a.quantum);
  } else {
    std::mt19937_64 rng(a.rng_seed);
    RandomTrajectoryOptions ro;
    ro.dim = a.dim;
    bundle = Bundle(a.dim, a.quantum, a.time_grid);
    for (std::size_t i = 0; i < a.count; ++i) bundle.insert(random_trajectory(rng, ro));
  }
  emit(a.out, io::dump(io::to_json(bundle)) + "\n");
  return kExitOk;
}

// --- metric ----------------------------------------------------------------

int run_metric(const std::string& lhs, const std::string& rhs, const NumericOptions& n,
               const std::optional<std::string>& out) {
  const Trajectory a = io::trajectory_from_json(io::read_file(lhs));
  const Trajectory b = io::trajectory_from_json(io::read_file(rhs));
  if (a.dim() != b.dim()) throw DomainError("trajectory dimensions differ");
  const MetricReport report = d_inf(a, b, n.trunc_N, n.metric());
  emit(out, io::dump(io::to_json(report)) + "\n");
  return kExitOk;
}

// --- select ----------------------------------------------------------------

struct SelectArgs {
  std::string bundle;
  std::vector<double> point;
  double tie_tol = 1e-8;
  double quad_tol = 1e-9;
  std::size_t max_iters = 64;
  bool energy_first = false;
  std::string seed_order = "lex";
  std::optional<std::string> out;
  std::optional<std::string> trace_out;
};

SelectionConfig make_config(const SelectArgs& a, const NumericOptions& n) {
  SelectionConfig cfg;
  cfg.tie_tol = a.tie_tol;
  cfg.quad_tol = a.quad_tol;
  cfg.max_iters = a.max_iters;
  cfg.truncation_N = n.trunc_N;
  cfg.metric = n.metric();
  cfg.seed_order = a.seed_order == "input" ? SeedOrder::kInput : SeedOrder::kLexicographic;
  return cfg;
}

int run_select(const SelectArgs& a, const NumericOptions& n) {
  const Bundle bundle = io::bundle_from_json(io::read_file(a.bundle));
  const SelectionConfig cfg = make_config(a, n);
  const SelectionResult r =
      a.energy_first ? energy_first_select(bundle, a.point, cfg) : select(bundle, a.point, cfg);
  io::Json head;
  head["selected"] = io::to_json(r.selected);
  head["coincidence_fallback"] = r.coincidence_fallback;
  std::vector<io::Json> trace;
  for (const auto& t : r.trace) trace.push_back(io::to_json(t));
  if (a.trace_out) {
    io::write_file(*a.trace_out, lines(trace));
    emit(a.out, io::dump(head) + "\n");
  } else {
    emit(a.out, io::dump(head) + "\n" + lines(trace));
  }
  return kExitOk;
}

// --- verify ----------------------------------------------------------------

int run_verify(const std::string& path, double tol, const NumericOptions& n,
               const std::optional<std::string>& out) {
  const Bundle bundle = io::bundle_from_json(io::read_file(path));
  VerifyOptions vo;
  vo.tol = tol;
  vo.truncation_N = n.trunc_N;
  vo.metric = n.metric();
  std::vector<io::Json> records;
  for (const auto& v : verify_P4(bundle, vo)) records.push_back(io::to_json(v));
  for (const auto& v : verify_P5(bundle, vo)) records.push_back(io::to_json(v));
  emit(out, lines(records));
  return records.empty() ? kExitOk : kExitFalse;
}

// --- semigroup -------------------------------------------------------------

int run_semigroup(const SelectArgs& a, const NumericOptions& n, std::vector<double> t1s,
                  std::vector<double> t2s, double tol) {
  const Bundle bundle = io::bundle_from_json(io::read_file(a.bundle));
  if (t1s.empty()) t1s = bundle.time_grid();
  if (t2s.empty()) t2s = bundle.time_grid();
  const SelectionConfig cfg = make_config(a, n);
  const SelectFn fn = [&](const Bundle& b, const Point& x) {
    return (a.energy_first ? energy_first_select(b, x, cfg) : select(b, x, cfg)).selected;
  };
  std::vector<io::Json> records;
  bool holds = true;
  for (double t1 : t1s) {
    try {
      const SemigroupVerdict v = semigroup_check(fn, bundle, a.point, t1, t2s, tol);
      for (const auto& s : v.samples) {
        records.push_back({{"t1", t1}, {"t2", s.t2}, {"gap", s.gap}, {"ok", s.ok}});
      }
      holds = holds && v.holds;
    } catch (const UnknownInitialPoint& e) {
      records.push_back({{"t1", t1}, {"error", "unknown_initial_point"}, {"point", e.point()}});
      holds = false;
    }
  }
  emit(a.out, lines(records));
  return holds ? kExitOk : kExitFalse;
}

// --- dmember ---------------------------------------------------------------

int run_dmember(const std::string& path, const std::optional<std::string>& out) {
  const auto [state, law] = io::fluid_from_json(io::read_file(path));
  const double e = energy_functional(state, law);
  const bool member = d_membership(state, law);
  io::Json j;
  j["member"] = member;
  j["energy"] = std::isfinite(e) ? io::Json(e) : io::Json("inf");
  j["E0"] = state.energy;
  emit(out, io::dump(j) + "\n");
  return member ? kExitOk : kExitFalse;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semiflow selection over finite trajectory bundles"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  NumericOptions numeric;
  std::optional<std::string> out;

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "write a generated bundle");
  gen_cmd->add_option("--family", gen.family)
      ->check(CLI::IsMember({"sqrt-ode", "steps", "random"}))
      ->capture_default_str();
  gen_cmd->add_option("--alpha", gen.alpha)->capture_default_str();
  gen_cmd->add_option("--c", gen.c)->capture_default_str();
  gen_cmd->add_option("--waiting-times", gen.waiting_times, "waiting times, 'inf' for the zero solution")
      ->delimiter(',');
  gen_cmd->add_option("--horizon", gen.horizon)->capture_default_str();
  gen_cmd->add_option("--samples-per-unit", gen.samples_per_unit)->capture_default_str();
  gen_cmd->add_option("--time-grid", gen.time_grid)->delimiter(',');
  gen_cmd->add_option("--heights", gen.heights)->delimiter(',');
  gen_cmd->add_option("--jump-times", gen.jump_times)->delimiter(',');
  gen_cmd->add_option("--count", gen.count, "trajectories in a random bundle")->capture_default_str();
  gen_cmd->add_option("--dim", gen.dim, "dimension of a random bundle")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--rng-seed", gen.rng_seed)->capture_default_str();
  gen_cmd->add_option("--quantum", gen.quantum)->check(CLI::PositiveNumber);
  gen_cmd->add_option("--out", gen.out);

  std::string metric_a;
  std::string metric_b;
  auto* metric_cmd = app.add_subcommand("metric", "d_inf between two trajectory files");
  metric_cmd->add_option("lhs", metric_a)->required()->check(CLI::ExistingFile);
  metric_cmd->add_option("rhs", metric_b)->required()->check(CLI::ExistingFile);
  metric_cmd->add_option("--tol", numeric.tol, "bracket width for d_M")->check(CLI::PositiveNumber);
  add_metric_flags(metric_cmd, numeric);
  metric_cmd->add_option("--out", out);

  SelectArgs sel;
  auto add_select_flags = [&](CLI::App* cmd) {
    cmd->add_option("bundle", sel.bundle)->required()->check(CLI::ExistingFile);
    cmd->add_option("--point", sel.point, "initial point, comma separated")->required()->delimiter(',');
    cmd->add_option("--tie-tol", sel.tie_tol)->check(CLI::NonNegativeNumber)->capture_default_str();
    cmd->add_option("--quad-tol", sel.quad_tol)->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--max-iters", sel.max_iters)->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_flag("--energy-first", sel.energy_first);
    cmd->add_option("--seed-order", sel.seed_order, "tie-break order for coincident survivors")
        ->check(CLI::IsMember({"lex", "input"}))
        ->capture_default_str();
    add_metric_flags(cmd, numeric);
    cmd->add_option("--out", sel.out);
  };
  auto* select_cmd = app.add_subcommand("select", "select a trajectory at an initial point");
  add_select_flags(select_cmd);
  select_cmd->add_option("--trace-out", sel.trace_out, "write the trace as JSON lines here");

  double verify_tol = 0.0;
  std::string verify_path;
  auto* verify_cmd = app.add_subcommand("verify", "check shift and continuation closure");
  verify_cmd->add_option("bundle", verify_path)->required()->check(CLI::ExistingFile);
  verify_cmd->add_option("--tol", verify_tol)->check(CLI::NonNegativeNumber)->capture_default_str();
  add_metric_flags(verify_cmd, numeric);
  verify_cmd->add_option("--out", out);

  std::vector<double> t1s;
  std::vector<double> t2s;
  double semigroup_tol = 1e-9;
  auto* semigroup_cmd = app.add_subcommand("semigroup", "check u(x)(t1 + t2) = u(u(x)(t1))(t2)");
  add_select_flags(semigroup_cmd);
  semigroup_cmd->add_option("--t1", t1s, "defaults to the bundle time grid")->delimiter(',');
  semigroup_cmd->add_option("--t2", t2s, "defaults to the bundle time grid")->delimiter(',');
  semigroup_cmd->add_option("--tol", semigroup_tol)->check(CLI::NonNegativeNumber)->capture_default_str();

  std::string state_path;
  auto* dmember_cmd = app.add_subcommand("dmember", "test a fluid state against its energy bound");
  dmember_cmd->add_option("state", state_path)->required()->check(CLI::ExistingFile);
  dmember_cmd->add_option("--out", out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen_cmd) return run_gen(gen);
    if (*metric_cmd) return run_metric(metric_a, metric_b, numeric, out);
    if (*select_cmd) return run_select(sel, numeric);
    if (*verify_cmd) return run_verify(verify_path, verify_tol, numeric, out);
    if (*semigroup_cmd) return run_semigroup(sel, numeric, t1s, t2s, semigroup_tol);
    if (*dmember_cmd) return run_dmember(state_path, out);
  } catch (const NonSingleton& e) {
    std::cerr << "semiflow: " << e.what() << "\n";
    return kExitFalse;
  } catch (const QuadratureError& e) {
    std::cerr << "semiflow: " << e.what() << " (partial " << e.partial() << ", error "
              << e.error_estimate() << ")\n";
    return kExitNumeric;
  } catch (const MetricError& e) {
    std::cerr << "semiflow: " << e.what() << " (bracket [" << e.lower() << ", " << e.upper()
              << "])\n";
    return kExitNumeric;
  } catch (const Error& e) {
    std::cerr << "semiflow: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
