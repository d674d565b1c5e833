// qheat: command-line front end for the two-qubit swap engine under prior
// ignorance of its level spacings.
//
// Exit codes: 0 success, 1 I/O failure, 2 invalid arguments, 3 optimizer
// failure, 4 verification failure.

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <random>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qheat/qheat.hpp"

namespace {

using nlohmann::ordered_json;
using namespace qheat;

constexpr int kExitIo = 1;
constexpr int kExitUsage = 2;
constexpr int kExitOptimizer = 3;
constexpr int kExitVerify = 4;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

unsigned worker_count() {
  if (const char* env = std::getenv("QHEAT_WORKERS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && n > 0) return static_cast<unsigned>(n);
  }
  return 1;
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.11e", x);
  return buf;
}

double finite(double x, const std::string& what) {
  if (!std::isfinite(x)) throw std::domain_error(what + " is not finite");
  return x;
}

std::string argv_line(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += ' ';
    s += i == 0 ? std::filesystem::path(argv[0]).filename().string() : std::string(argv[i]);
  }
  return s;
}

// Options shared by the subcommands that need baths and a prior support.
struct Context {
  double t1 = 1.0;
  std::optional<double> t2;
  std::optional<double> theta;
  std::optional<double> a_min;
  std::optional<double> a_max;
  bool json = false;

  void add_baths(CLI::App* app, bool need_ratio) {
    app->add_option("--t1", t1, "hot bath temperature")->capture_default_str();
    auto* o_t2 = app->add_option("--t2", t2, "cold bath temperature");
    auto* o_th = app->add_option("--theta", theta, "temperature ratio T2/T1");
    o_t2->excludes(o_th);
    if (need_ratio) {
      auto* g = app->add_option_group("ratio");
      g->add_option(o_t2);
      g->add_option(o_th);
      g->require_option(1);
    }
  }
  void add_support(CLI::App* app) {
    app->add_option("--amin", a_min, "lower end of the spacing prior (default 1e-6*T2)");
    app->add_option("--amax", a_max, "upper end of the spacing prior (default 1e6*T1)");
  }

  BathPair baths() const { return t2 ? BathPair(t1, *t2) : BathPair::from_ratio(t1, *theta); }
  PriorSupport support(const BathPair& b) const {
    return PriorSupport(a_min.value_or(1e-6 * b.t_cold()), a_max.value_or(1e6 * b.t_hot()));
  }
};

void emit(const ordered_json& doc, const std::vector<std::pair<std::string, std::string>>& text) {
  if (doc.is_object()) {
    std::cout << doc.dump(2) << '\n';
    return;
  }
  std::size_t width = 0;
  for (const auto& [k, v] : text) width = std::max(width, k.size());
  for (const auto& [k, v] : text) std::cout << k << std::string(width - k.size() + 2, ' ') << v << '\n';
}

ordered_json support_json(const PriorSupport& s) {
  return {{"a_min", s.a_min()}, {"a_max", s.a_max()}};
}

ordered_json baths_json(const BathPair& b) {
  return {{"t1", b.t_hot()}, {"t2", b.t_cold()}, {"theta", b.theta()}};
}

// --- eval ----------------------------------------------------------------------

int run_eval(const Context& ctx, double a1, double a2) {
  const BathPair b = ctx.baths();
  const EngineConfig cfg(a1, a2);
  const CycleQuantities q = cycle(cfg, b);
  const bool engine = is_engine(cfg, b);
  const std::vector<std::pair<std::string, double>> values{
      {"W", q.work},           {"Q1", q.heat_hot},
      {"Q2", q.heat_cold},     {"eta", q.efficiency},
      {"T1_final", q.temp_final_hot_side}, {"T2_final", q.temp_final_cold_side}};
  if (ctx.json) {
    ordered_json in{{"a1", a1}, {"a2", a2}};
    in.update(baths_json(b));
    ordered_json out, prov;
    for (const auto& [k, v] : values) {
      out[k] = finite(v, k);
      prov[k] = "closed_form";
    }
    out["engine"] = engine;
    prov["engine"] = "closed_form";
    emit({{"inputs", in}, {"outputs", out}, {"provenance", prov}}, {});
    return 0;
  }
  std::vector<std::pair<std::string, std::string>> text;
  for (const auto& [k, v] : values) text.emplace_back(k, sci(finite(v, k)));
  text.emplace_back("engine", engine ? "true" : "false");
  emit(nullptr, text);
  return 0;
}

// --- sweep ---------------------------------------------------------------------

const std::vector<std::string> kCurves{"expected_efficiency", "ca", "zhang", "work_ratio", "heats"};

std::vector<std::string> curve_columns(const std::string& curve) {
  if (curve == "heats") return {"q_hot", "q_cold"};
  return {curve};
}

std::string curve_route(const std::string& curve) {
  return curve == "work_ratio" || curve == "heats" ? "asymptotic" : "closed_form";
}

std::vector<double> curve_values(const std::string& curve, const Context& ctx, double theta) {
  const BathPair b = BathPair::from_ratio(ctx.t1, theta);
  if (curve == "expected_efficiency") return {expected_efficiency(theta)};
  if (curve == "ca") return {curzon_ahlborn_efficiency(theta)};
  if (curve == "zhang") return {zhang_efficiency(theta)};
  if (curve == "work_ratio") return {work_ratio(b, ctx.support(b))};
  const HeatExpectations h = expect_heats(Observer::A, b, ctx.support(b), {}, Route::asymptotic);
  return {h.heat_hot.value, h.heat_cold.value};
}

int run_sweep(const Context& ctx, double start, double end, int steps, const std::vector<std::string>& curves,
              const std::string& out_path, const std::string& args) {
  if (!(start > 0.0 && start < end && end < 1.0)) throw std::domain_error("sweep: need 0 < theta-start < theta-end < 1");
  if (steps < 2) throw std::domain_error("sweep: steps must be at least 2");
  if (ctx.t2) throw std::domain_error("sweep: theta is swept; --t2 is not accepted");
  if (ctx.t1 <= 0.0 || !std::isfinite(ctx.t1)) throw std::domain_error("sweep: --t1 must be positive");

  std::vector<double> thetas(static_cast<std::size_t>(steps));
  for (int k = 0; k < steps; ++k) thetas[k] = start + (end - start) * k / (steps - 1);

  std::vector<std::vector<double>> rows(thetas.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < thetas.size(); i = next++) {
      try {
        std::vector<double> row;
        for (const std::string& c : curves)
          for (double v : curve_values(c, ctx, thetas[i])) row.push_back(finite(v, c));
        rows[i] = std::move(row);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  {
    const unsigned workers = std::min<unsigned>(worker_count(), static_cast<unsigned>(thetas.size()));
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<std::string> columns;
  for (const std::string& c : curves)
    for (const std::string& col : curve_columns(c)) columns.push_back(col);

  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path, std::ios::binary);
    if (!file) throw IoError("cannot open " + out_path + " for writing");
  }
  std::ostream& os = out_path.empty() ? std::cout : file;

  if (ctx.json) {
    ordered_json in{{"theta_start", start}, {"theta_end", end}, {"steps", steps}, {"t1", ctx.t1}, {"curves", curves}};
    if (ctx.a_min) in["a_min"] = *ctx.a_min;
    if (ctx.a_max) in["a_max"] = *ctx.a_max;
    ordered_json out{{"theta", thetas}}, prov;
    for (std::size_t j = 0; j < columns.size(); ++j) {
      std::vector<double> col;
      for (const auto& r : rows) col.push_back(r[j]);
      out[columns[j]] = col;
    }
    for (const std::string& c : curves)
      for (const std::string& col : curve_columns(c)) prov[col] = curve_route(c);
    os << ordered_json{{"inputs", in}, {"outputs", out}, {"provenance", prov}}.dump(2) << '\n';
  } else {
    os << "# qheat sweep\n# args: " << args << '\n' << "theta";
    for (const std::string& col : columns) os << ',' << col;
    os << '\n';
    for (std::size_t i = 0; i < thetas.size(); ++i) {
      os << sci(thetas[i]);
      for (double v : rows[i]) os << ',' << sci(v);
      os << '\n';
    }
  }
  os.flush();
  if (!os) throw IoError("write failed");
  return 0;
}

// --- optimize ------------------------------------------------------------------

int run_optimize(const Context& ctx) {
  const BathPair b = ctx.baths();
  const PriorSupport s = ctx.support(b);
  WorkOptimum opt{};
  try {
    opt = maximize_expected_work(b, s);
  } catch (const OptimizationError& e) {
    std::cerr << "optimize: " << e.what() << " (bracket [" << e.bracket_lo() << ", " << e.bracket_hi() << "])\n";
    return kExitOptimizer;
  }
  const double ca = curzon_ahlborn_efficiency(b.theta());
  const double gap = std::abs(opt.eta_star - ca);
  if (ctx.json) {
    ordered_json in = baths_json(b);
    in.update(support_json(s));
    emit({{"inputs", in},
          {"outputs", {{"eta_star", opt.eta_star}, {"w_star", opt.w_star}, {"eta_ca", ca}, {"gap", gap}}},
          {"provenance",
           {{"eta_star", "asymptotic"}, {"w_star", "asymptotic"}, {"eta_ca", "closed_form"}, {"gap", "closed_form"}}}},
         {});
    return 0;
  }
  emit(nullptr, {{"eta_star", sci(opt.eta_star)}, {"w_star", sci(opt.w_star)}, {"eta_ca", sci(ca)}, {"gap", sci(gap)}});
  return 0;
}

// --- verify --------------------------------------------------------------------

int run_verify(const Context& ctx, const std::string& level, std::uint64_t seed, double tolerance_scale) {
  VerifyOptions opt;
  if (level == "fast")
    opt.level = VerifyLevel::fast;
  else if (level == "full")
    opt.level = VerifyLevel::full;
  else
    throw std::domain_error("verify: level must be fast or full");
  opt.seed = seed;
  opt.workers = worker_count();
  opt.tolerance_scale = tolerance_scale;
  const std::vector<CheckResult> checks = run_verification(opt);
  std::size_t failed = 0;
  for (const CheckResult& c : checks) failed += !c.passed;

  if (ctx.json) {
    ordered_json list = ordered_json::array();
    for (const CheckResult& c : checks)
      list.push_back({{"name", c.name}, {"passed", c.passed}, {"value", c.value}, {"threshold", c.threshold}});
    emit({{"inputs", {{"level", level}, {"seed", seed}, {"tolerance_scale", tolerance_scale}}},
          {"outputs", {{"checks", list}, {"failed", failed}}},
          {"provenance", {{"checks", "mixed"}}}},
         {});
  } else {
    for (const CheckResult& c : checks)
      std::cout << (c.passed ? "PASS  " : "FAIL  ") << c.name << "  value=" << sci(c.value)
                << "  threshold=" << sci(c.threshold) << '\n';
    std::cout << (failed ? "FAILED " : "OK ") << checks.size() - failed << '/' << checks.size() << " checks passed\n";
  }
  return failed ? kExitVerify : 0;
}

// --- sample --------------------------------------------------------------------

int run_sample(const Context& ctx, const std::string& quantity, const std::string& observer, std::size_t n,
               std::uint64_t seed, std::optional<double> eta, bool raw, const std::string& args) {
  const BathPair b = ctx.baths();
  const PriorSupport s = ctx.support(b);
  Observer o;
  if (observer == "A")
    o = Observer::A;
  else if (observer == "B")
    o = Observer::B;
  else
    throw std::domain_error("sample: observer must be A or B");

  if (raw) {
    std::mt19937_64 gen(seed);
    std::cout << "# qheat sample --raw\n# args: " << args << "\na1,a2\n";
    for (std::size_t i = 0; i < n; ++i) {
      const double first = sample_marginal(s, detail::uniform01(gen));
      const double second = sample_conditional(first, o, b.theta(), detail::uniform01(gen));
      const double a1 = o == Observer::A ? first : second;
      const double a2 = o == Observer::A ? second : first;
      std::cout << sci(a1) << ',' << sci(a2) << '\n';
    }
    return std::cout ? 0 : kExitIo;
  }

  std::string label = quantity;
  MCResult r{};
  if (eta) {
    r = mc_constrained_work(o, ConstrainedSpec(*eta, b, s), n, seed, worker_count());
    label = "W_constrained";
  } else {
    r = mc_expectation(parse_quantity(quantity), o, b, s, n, seed, worker_count());
  }
  if (ctx.json) {
    ordered_json in{{"quantity", label}, {"observer", observer}, {"n", n}, {"seed", seed}};
    in.update(baths_json(b));
    in.update(support_json(s));
    if (eta) in["eta"] = *eta;
    emit({{"inputs", in},
          {"outputs", {{"mean", finite(r.mean, "mean")}, {"std_error", r.std_error}, {"n_samples", r.n_samples}}},
          {"provenance", {{"mean", "monte_carlo"}, {"std_error", "monte_carlo"}}}},
         {});
    return 0;
  }
  emit(nullptr, {{"quantity", label}, {"observer", observer}, {"mean", sci(r.mean)}, {"std_error", sci(r.std_error)},
                 {"n_samples", std::to_string(r.n_samples)}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qheat: expected behaviour of a two-qubit swap heat engine under prior ignorance"};
  app.require_subcommand(1);
  Context ctx;
  app.add_flag("--json", ctx.json, "emit one JSON object instead of text/CSV");
  const std::string args = argv_line(argc, argv);

  auto* eval = app.add_subcommand("eval", "thermodynamics of one cycle at fixed spacings");
  double a1 = 0.0, a2 = 0.0;
  eval->add_option("--a1", a1, "hot-side level spacing")->required();
  eval->add_option("--a2", a2, "cold-side level spacing")->required();
  ctx.add_baths(eval, true);
  eval->add_flag("--json", ctx.json);

  auto* sweep = app.add_subcommand("sweep", "curves over a grid of temperature ratios, as CSV");
  double th_start = 0.01, th_end = 0.99;
  int steps = 99;
  std::vector<std::string> curves{"expected_efficiency"};
  std::string out_path;
  sweep->add_option("--theta-start", th_start)->capture_default_str();
  sweep->add_option("--theta-end", th_end)->capture_default_str();
  sweep->add_option("--steps", steps)->capture_default_str();
  sweep->add_option("--curves", curves, "comma-separated subset of: expected_efficiency,ca,zhang,work_ratio,heats")
      ->delimiter(',')
      ->check(CLI::IsMember(kCurves));
  sweep->add_option("-o,--out", out_path, "write to a file instead of stdout");
  ctx.add_baths(sweep, false);
  ctx.add_support(sweep);
  sweep->add_flag("--json", ctx.json);

  auto* optimize = app.add_subcommand("optimize", "maximize the fixed-efficiency expected work over eta");
  ctx.add_baths(optimize, true);
  ctx.add_support(optimize);
  optimize->add_flag("--json", ctx.json);

  auto* verify = app.add_subcommand("verify", "run the named invariant checks");
  std::string level = "fast";
  std::uint64_t seed = 20240601;
  double tolerance_scale = 1.0;
  verify->add_option("--level", level, "fast or full")->check(CLI::IsMember({"fast", "full"}))->capture_default_str();
  verify->add_option("--seed", seed)->capture_default_str();
  verify->add_option("--tolerance-scale", tolerance_scale, "multiply every threshold (test hook)")
      ->capture_default_str();
  verify->add_flag("--json", ctx.json);

  auto* sample = app.add_subcommand("sample", "Monte Carlo estimate over the prior ensemble");
  std::string quantity = "W", observer = "A";
  std::size_t n = 100000;
  std::uint64_t sample_seed = 1;
  std::optional<double> eta;
  bool raw = false;
  sample->add_option("--quantity", quantity, "W,Q1,Q2,E_ini_1,E_ini_2,E_fin_1,E_fin_2,T1_final,T2_final,C_1,C_2")
      ->capture_default_str();
  sample->add_option("--observer", observer, "A or B")->capture_default_str();
  sample->add_option("-n,--samples", n)->capture_default_str();
  sample->add_option("--seed", sample_seed)->capture_default_str();
  sample->add_option("--eta", eta, "fixed efficiency: estimate the constrained expected work instead");
  sample->add_flag("--raw", raw, "print the (a1, a2) draws as CSV");
  ctx.add_baths(sample, true);
  ctx.add_support(sample);
  sample->add_flag("--json", ctx.json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*eval) return run_eval(ctx, a1, a2);
    if (*sweep) return run_sweep(ctx, th_start, th_end, steps, curves, out_path, args);
    if (*optimize) return run_optimize(ctx);
    if (*verify) return run_verify(ctx, level, seed, tolerance_scale);
    if (*sample) return run_sample(ctx, quantity, observer, n, sample_seed, eta, raw, args);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
