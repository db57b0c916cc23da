// psg: batch driver for the library. Every run writes results.csv and
// manifest.json into the output directory and echoes the CSV on stdout.
//
// Exit codes: 0 success, 2 configuration error, 3 range error, 1 otherwise.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <gmp.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "psg/cli/run_config.hpp"
#include "psg/expsum/regression.hpp"
#include "psg/psg.hpp"
#include "psg/version.hpp"

namespace fs = std::filesystem;
using psg::cli::json;
using psg::cli::RunConfig;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct RunOutput {
  std::string csv;
  json summary = json::object();  // written to summary.json when non-empty
  json sieve = nullptr;
};

class TableSource {
 public:
  TableSource(const RunConfig& cfg, unsigned workers) : cfg_(cfg), workers_(workers) {}

  /// The table for a run that needs primes up to `needed`.
  const psg::PrimeTable& get(std::uint64_t needed) {
    const std::uint64_t limit = std::max<std::uint64_t>(2, cfg_.sieve_limit.value_or(needed));
    psg::SieveOptions opts;
    opts.workers = workers_;
    if (!cfg_.sieve_cache.empty() && fs::exists(cfg_.sieve_cache)) {
      auto loaded = psg::PrimeTable::load(cfg_.sieve_cache, opts);
      if (loaded.limit() == limit) {
        table_.emplace(std::move(loaded));
        info_ = {{"limit", limit}, {"source", "cache"}, {"path", cfg_.sieve_cache}};
        return *table_;
      }
    }
    table_.emplace(limit, opts);
    info_ = {{"limit", limit}, {"source", "sieved"}};
    if (!cfg_.sieve_cache.empty()) {
      table_->save(cfg_.sieve_cache);
      info_["path"] = cfg_.sieve_cache;
    }
    return *table_;
  }

  const json& info() const { return info_; }

 private:
  const RunConfig& cfg_;
  unsigned workers_;
  std::optional<psg::PrimeTable> table_;
  json info_ = nullptr;
};

std::vector<std::uint64_t> uint_list(const json& v) { return v.get<std::vector<std::uint64_t>>(); }

std::string seconds_cell(const RunConfig& cfg, double s) { return cfg.timings ? psg::format_real(s) : ""; }

std::string q_to_string(const mpq_class& q) { return q.get_str(); }

RunOutput run_ps_count(const RunConfig& cfg, TableSource& tables, unsigned workers) {
  const auto profile = psg::PsProfile::parse(cfg.params["profile"].get<std::string>());
  const auto xs = uint_list(cfg.params["x"]);
  const auto& table = tables.get(*std::max_element(xs.begin(), xs.end()));
  std::ostringstream os;
  psg::CsvWriter csv(os, {"x", "profile", "k", "sigma", "count", "main_term_li", "ratio_li", "main_term_simple",
                          "ratio_simple", "seconds"});
  for (std::uint64_t x : xs) {
    const auto t0 = Clock::now();
    const std::uint64_t count = psg::count_ps_primes(x, profile, table, workers);
    const double li = psg::main_term_li(static_cast<double>(x), profile);
    std::string simple, ratio_simple;
    if (profile.sigma() < 1) {
      const double s = psg::main_term_simple(static_cast<double>(x), profile);
      simple = psg::format_real(s);
      ratio_simple = psg::format_real(static_cast<double>(count) / s);
    }
    csv.row(x, profile.to_string(), profile.k(), q_to_string(profile.sigma()), count, li,
            static_cast<double>(count) / li, simple, ratio_simple, seconds_cell(cfg, seconds_since(t0)));
  }
  return {os.str()};
}

std::vector<psg::PsProfile> parse_profiles(const json& list) {
  std::vector<psg::PsProfile> out;
  for (const auto& s : list) out.push_back(psg::PsProfile::parse(s.get<std::string>()));
  return out;
}

RunOutput run_ternary(const RunConfig& cfg, TableSource& tables, unsigned workers) {
  const auto mode = psg::parse_ternary_mode(cfg.params["mode"].get<std::string>());
  const auto profiles = parse_profiles(cfg.params["profiles"]);
  const bool needs_profiles = mode == psg::TernaryMode::kBfWeighted || mode == psg::TernaryMode::kConstrained;
  if (needs_profiles && profiles.size() != 3) throw psg::ConfigError("this mode needs exactly three profiles");
  if (!needs_profiles && !profiles.empty()) throw psg::ConfigError("this mode takes no profiles");
  const auto ns = uint_list(cfg.params["n"]);
  const auto& table = tables.get(std::max<std::uint64_t>(*std::max_element(ns.begin(), ns.end()), psg::kDefaultTruncation));
  std::ostringstream os;
  psg::CsvWriter csv(os, {"n", "mode", "k", "profile", "sum", "main_term", "ratio", "seconds"});
  for (std::uint64_t n : ns) {
    psg::TernaryReport r;
    switch (mode) {
      case psg::TernaryMode::kUnweighted: r = psg::count_unweighted(n, table, workers); break;
      case psg::TernaryMode::kLogWeighted: r = psg::sum_log_weighted(n, table, workers); break;
      case psg::TernaryMode::kBfWeighted:
        r = psg::sum_bf_weighted(n, profiles[0], profiles[1], profiles[2], table, workers);
        break;
      case psg::TernaryMode::kConstrained:
        r = psg::sum_constrained(n, profiles[0], profiles[1], profiles[2], table, workers);
        break;
    }
    csv.row(r.n, std::string(psg::to_string(r.mode)), r.k, r.profile_string(), r.count_or_sum, r.main_term, r.ratio,
            seconds_cell(cfg, r.seconds));
  }
  return {os.str()};
}

RunOutput run_singular(const RunConfig& cfg, TableSource& tables, unsigned) {
  const auto ns = uint_list(cfg.params["n"]);
  const std::uint64_t P = cfg.params["P"].get<std::uint64_t>();
  const std::uint64_t nmax = *std::max_element(ns.begin(), ns.end());
  const auto& table = tables.get(std::max(P, psg::detail::isqrt(nmax) + 1));
  std::ostringstream os;
  psg::CsvWriter csv(os, {"n", "P", "value", "tail_bound", "seconds"});
  for (std::uint64_t n : ns) {
    const auto t0 = Clock::now();
    const auto v = psg::singular_series(n, P, table);
    csv.row(n, P, v.value, v.tail_bound, seconds_cell(cfg, seconds_since(t0)));
  }
  return {os.str()};
}

RunOutput run_admissible(const RunConfig& cfg, TableSource&, unsigned) {
  const auto profiles = parse_profiles(cfg.params["profiles"]);
  if (profiles.size() != 3) throw psg::ConfigError("admissible needs exactly three profiles");
  const auto r = psg::check_admissibility(profiles[0], profiles[1], profiles[2]);
  std::ostringstream os;
  psg::CsvWriter csv(os, {"k", "varpi", "condition", "lhs", "rhs", "lhs_real", "rhs_real", "satisfied"});
  auto ineq = [&](const psg::Inequality& i) {
    csv.row(r.k, q_to_string(r.varpi), i.label, q_to_string(i.lhs), q_to_string(i.rhs), i.lhs.get_d(), i.rhs.get_d(),
            i.satisfied);
  };
  for (const auto& i : r.general) ineq(i);
  if (r.k3_form) {
    for (const auto& i : *r.k3_form) ineq(i);
  }
  auto shortcut = [&](const char* name, const psg::ShortcutCheck& c) {
    csv.row(r.k, q_to_string(r.varpi), std::string(name) + (c.applicable ? "" : " (not applicable)"),
            q_to_string(c.sigma), q_to_string(c.threshold), c.sigma.get_d(), c.threshold.get_d(), c.satisfied);
  };
  shortcut("equal profiles: sigma < threshold", r.equal_profiles);
  shortcut("one constrained: sigma < threshold", r.one_constrained);
  csv.row_cells({std::to_string(r.k), q_to_string(r.varpi), "admissible", "", "", "", "",
                 r.admissible() ? "true" : "false"});
  csv.row_cells({std::to_string(r.k), q_to_string(r.varpi), "admissible (best slot order)", "", "", "", "",
                 r.admissible_any_order() ? "true" : "false"});
  RunOutput out{os.str()};
  out.summary = {{"admissible", r.admissible()},
                 {"admissible_any_order", r.admissible_any_order()},
                 {"sigma", {q_to_string(r.sigma[0]), q_to_string(r.sigma[1]), q_to_string(r.sigma[2])}}};
  return out;
}

psg::SkBoundVariant parse_variant(const std::string& s) {
  if (s == "second") return psg::SkBoundVariant::kSecond;
  if (s == "third") return psg::SkBoundVariant::kThird;
  throw psg::ConfigError("variant must be 'second' or 'third'");
}

void reject_unknown(const json& obj, std::initializer_list<const char*> keys, const std::string& where) {
  if (!obj.is_object()) throw psg::ConfigError(where + " must be an object");
  for (const auto& [k, _] : obj.items()) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* x) { return k == x; })) {
      throw psg::ConfigError("unknown key '" + k + "' in " + where);
    }
  }
}

RunOutput run_expsum_scan(const RunConfig& cfg, TableSource&, unsigned workers) {
  const std::string path = cfg.params["spec"].get<std::string>();
  std::ifstream in(path);
  if (!in) throw psg::ConfigError("cannot open scan spec '" + path + "'");
  json spec;
  try {
    spec = json::parse(in);
    reject_unknown(spec, {"regression", "sk", "vdc", "weyl"}, "scan spec");
  } catch (const json::exception& e) {
    throw psg::ConfigError("scan spec '" + path + "': " + e.what());
  }
  const auto alphas = psg::golden_alpha_grid(cfg.params["alphas"].get<std::uint64_t>(), cfg.seed);

  std::ostringstream os;
  psg::CsvWriter csv(os, {"id", "formula", "params", "observed", "bound", "ratio"});
  json summary = {{"max_ratios", json::object()}};
  auto emit = [&](const psg::MaxRatio& m) {
    csv.row(m.id, m.at_max.formula, m.at_max.params, m.at_max.observed, m.at_max.bound, m.max_ratio);
    summary["max_ratios"][m.id] = m.max_ratio;
  };

  try {
    if (spec.value("regression", false)) {
      for (const auto& m : psg::run_sk_regression(alphas, workers)) emit(m);
      for (const auto& m : psg::run_derivative_test_regression()) emit(m);
    }
    for (const auto& e : spec.value("sk", json::array())) {
      reject_unknown(e, {"id", "M", "M1", "coeffs", "gammas", "variants"}, "sk entry");
      psg::ExpSumParams p;
      p.M = psg::cli::detail::to_uint(e.at("M"), "M");
      p.M1 = e.contains("M1") ? psg::cli::detail::to_uint(e["M1"], "M1") : 2 * p.M;
      p.coeffs = e.at("coeffs").get<std::vector<double>>();
      for (const auto& g : e.at("gammas")) p.gammas.push_back(psg::RationalExponent::parse(g.get<std::string>()));
      const psg::SkEvaluator eval(p, workers);
      std::vector<double> moduli;
      for (double a : alphas) moduli.push_back(std::abs(eval(a, workers)));
      for (const auto& v : e.value("variants", json::array({"second", "third"}))) {
        const auto variant = parse_variant(v.get<std::string>());
        psg::MaxRatio best{e.at("id").get<std::string>() + "_" + v.get<std::string>(), {}, -1.0};
        for (std::size_t i = 0; i < alphas.size(); ++i) {
          p.alpha = alphas[i];
          const auto r = psg::sk_bound_report(moduli[i], p, variant);
          if (r.ratio > best.max_ratio) {
            best.max_ratio = r.ratio;
            best.at_max = r;
          }
        }
        emit(best);
      }
    }
    for (const auto& e : spec.value("vdc", json::array())) {
      reject_unknown(e, {"id", "order", "A", "betas"}, "vdc entry");
      const auto order = e.at("order").get<int>();
      if (order != 2 && order != 3) throw psg::ConfigError("vdc order must be 2 or 3");
      const std::uint64_t A = psg::cli::detail::to_uint(e.at("A"), "A");
      psg::MaxRatio best{e.at("id").get<std::string>(), {}, -1.0};
      for (double b : e.at("betas").get<std::vector<double>>()) {
        const auto r = order == 2 ? psg::vdc_second_deriv_report(b, A) : psg::vdc_third_deriv_report(b, A);
        if (r.ratio > best.max_ratio) {
          best.max_ratio = r.ratio;
          best.at_max = r;
        }
      }
      emit(best);
    }
    if (spec.contains("weyl")) {
      const auto& w = spec["weyl"];
      reject_unknown(w, {"trials"}, "weyl entry");
      const auto trials = psg::weyl_trials(w.value("trials", 200u), cfg.seed);
      std::size_t holds = 0;
      double worst = 0.0;
      for (const auto& t : trials) {
        holds += t.holds ? 1 : 0;
        if (t.sides.rhs > 0) worst = std::max(worst, t.sides.lhs / t.sides.rhs);
      }
      summary["weyl"] = {{"trials", trials.size()}, {"holds", holds}, {"max_lhs_over_rhs", worst}};
    }
  } catch (const json::exception& e) {
    throw psg::ConfigError("scan spec '" + path + "': " + e.what());
  }
  return {os.str(), summary};
}

RunOutput run_hb_check(const RunConfig& cfg, TableSource&, unsigned) {
  const auto t0 = Clock::now();
  const std::uint64_t limit = cfg.params["limit"].get<std::uint64_t>();
  const auto nu = static_cast<unsigned>(cfg.params["nu"].get<std::uint64_t>());
  const double z = cfg.params["z"].get<double>();
  const auto r = psg::hb_residual_scan(limit, nu, z);
  std::ostringstream os;
  psg::CsvWriter csv(os, {"limit", "nu", "z", "max_residual", "argmax", "exact_mismatches", "seconds"});
  csv.row(limit, nu, z, r.max_residual, r.argmax, r.exact_mismatches, seconds_cell(cfg, seconds_since(t0)));
  return {os.str(), {{"max_residual", r.max_residual}, {"exact_mismatches", r.exact_mismatches}}};
}

RunOutput run_psi_scan(const RunConfig& cfg, TableSource& tables, unsigned workers) {
  const auto profile = psg::PsProfile::parse(cfg.params["profile"].get<std::string>());
  const auto Ns = uint_list(cfg.params["N"]);
  const std::string mode_s = cfg.params["mode"].get<std::string>();
  psg::PsiDiffMode mode;
  if (mode_s == "standard") {
    mode = psg::PsiDiffMode::kStandard;
  } else if (mode_s == "bf") {
    mode = psg::PsiDiffMode::kBalogFriedlander;
  } else {
    throw psg::ConfigError("psi-scan mode must be 'standard' or 'bf'");
  }
  const double delta = cfg.params.contains("delta") ? cfg.params["delta"].get<double>()
                                                    : psg::max_admissible_delta(profile).get_d() * (1.0 - 1e-6);
  const auto alphas = psg::golden_alpha_grid(cfg.params["alphas"].get<std::uint64_t>(), cfg.seed);
  const auto& table = tables.get(*std::max_element(Ns.begin(), Ns.end()));
  const auto scan = psg::scan_decay(profile, Ns, alphas, delta, table, mode, workers);
  std::ostringstream os;
  psg::CsvWriter csv(os, {"N", "prime_count", "delta", "max_abs", "argmax_alpha", "ratio"});
  for (const auto& row : scan.rows) csv.row(row.N, row.prime_count, scan.delta, row.max_abs, row.argmax_alpha, row.ratio);
  return {os.str(),
          {{"delta", scan.delta},
           {"delta_sup", q_to_string(psg::max_admissible_delta(profile))},
           {"final_le_first", scan.final_le_first},
           {"monotone", scan.monotone}}};
}

RunOutput dispatch(const RunConfig& cfg, TableSource& tables, unsigned workers) {
  if (cfg.command == "ps-count") return run_ps_count(cfg, tables, workers);
  if (cfg.command == "ternary") return run_ternary(cfg, tables, workers);
  if (cfg.command == "singular") return run_singular(cfg, tables, workers);
  if (cfg.command == "admissible") return run_admissible(cfg, tables, workers);
  if (cfg.command == "expsum-scan") return run_expsum_scan(cfg, tables, workers);
  if (cfg.command == "hb-check") return run_hb_check(cfg, tables, workers);
  if (cfg.command == "psi-scan") return run_psi_scan(cfg, tables, workers);
  throw psg::ConfigError("unknown command '" + cfg.command + "'");
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw psg::Error("cannot write " + p.string());
  out << text;
}

int run(const RunConfig& cfg) {
  const auto t0 = Clock::now();
  const unsigned workers = psg::resolve_workers(cfg.workers);
  TableSource tables(cfg, workers);
  const RunOutput result = dispatch(cfg, tables, workers);

  const fs::path dir(cfg.out);
  fs::create_directories(dir);
  write_file(dir / "results.csv", result.csv);
  json outputs = json::array({"results.csv"});
  if (!result.summary.empty()) {
    write_file(dir / "summary.json", result.summary.dump(2) + "\n");
    outputs.push_back("summary.json");
  }
  json manifest = {
      {"tool", "psg"},
      {"version", psg::kVersion},
      {"command", cfg.command},
      {"config", cfg.to_json()},
      {"workers", workers},
      {"sieve", tables.info()},
      {"outputs", outputs},
      {"libraries", {{"gmp", gmp_version}, {"compiler", __VERSION__}}},
      {"timings", {{"total_seconds", seconds_since(t0)}}},
  };
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
  std::cout << result.csv;
  return 0;
}

/// Adds a string option whose value, when given, lands at json_path in `flags`.
struct FlagSink {
  json& flags;
  std::vector<std::pair<CLI::Option*, std::function<void()>>> binds;

  void string_param(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help,
                    std::string& storage) {
    auto* opt = app->add_option(flag, storage, help);
    binds.emplace_back(opt, [this, key, &storage] { flags["params"][key] = storage; });
  }
  void list_param(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help,
                  std::vector<std::string>& storage) {
    auto* opt = app->add_option(flag, storage, help);
    binds.emplace_back(opt, [this, key, &storage] { flags["params"][key] = storage; });
  }
  void apply() {
    for (auto& [opt, fn] : binds) {
      if (opt->count() > 0) fn();
    }
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Piatetski-Shapiro primes and ternary sums: counting, main terms and exponential sums"};
  app.require_subcommand(0, 1);
  app.fallthrough();

  std::string config_path, out, sieve_cache, sieve_limit, seed;
  unsigned workers = 0;
  bool timings = false;
  auto* o_config = app.add_option("--config", config_path, "JSON run configuration (flags override it)");
  auto* o_workers = app.add_option("--workers", workers, "worker threads (0: PSG_WORKERS or all cores)");
  auto* o_out = app.add_option("--out", out, "output directory");
  auto* o_seed = app.add_option("--seed", seed, "seed for alpha grids and random trials");
  auto* o_limit = app.add_option("--sieve-limit", sieve_limit, "sieve limit (accepts 10^7, 1e7)");
  auto* o_cache = app.add_option("--sieve-cache", sieve_cache, "binary sieve cache file");
  auto* o_timings = app.add_flag("--timings", timings, "fill the seconds column");

  json flags = json::object();
  FlagSink sink{flags, {}};
  std::string x, profile, n, mode, P, spec, alphas, limit, nu, z, Nlist, delta;
  std::vector<std::string> profiles;

  auto* ps = app.add_subcommand("ps-count", "count primes in an intersection of PS sets");
  sink.string_param(ps, "--x", "x", "upper limit(s), comma separated", x);
  sink.string_param(ps, "--profile", "profile", "profile literal, e.g. \"k=2; g=49/50,24/25\"", profile);

  auto* tern = app.add_subcommand("ternary", "ternary representation sums");
  sink.string_param(tern, "--n", "n", "odd target(s), comma separated", n);
  sink.string_param(tern, "--mode", "mode", "unweighted | log | bf | constrained", mode);
  sink.list_param(tern, "--profile", "profiles", "profile literal (repeat three times)", profiles);

  std::string sn;
  auto* sing = app.add_subcommand("singular", "truncated singular series");
  sink.string_param(sing, "--n", "n", "target(s), comma separated", sn);
  sink.string_param(sing, "--P", "P", "truncation prime bound", P);

  std::vector<std::string> adm_profiles;
  auto* adm = app.add_subcommand("admissible", "exact admissibility check of three profiles");
  sink.list_param(adm, "--profile", "profiles", "profile literal (repeat three times)", adm_profiles);

  std::string ex_alphas;
  auto* ex = app.add_subcommand("expsum-scan", "exponential sums against their bounds");
  sink.string_param(ex, "--spec", "spec", "scan specification (JSON)", spec);
  sink.string_param(ex, "--alphas", "alphas", "alpha grid size", ex_alphas);

  auto* hb = app.add_subcommand("hb-check", "verify the Heath-Brown identity up to a limit");
  sink.string_param(hb, "--limit", "limit", "largest n", limit);
  sink.string_param(hb, "--nu", "nu", "number of blocks", nu);
  sink.string_param(hb, "--z", "z", "truncation parameter", z);

  std::string psi_profile, psi_mode;
  auto* psi = app.add_subcommand("psi-scan", "decay scan of psi-difference sums over primes");
  sink.string_param(psi, "--N", "N", "N values, comma separated", Nlist);
  sink.string_param(psi, "--profile", "profile", "profile literal", psi_profile);
  sink.string_param(psi, "--delta", "delta", "decay exponent (default: just below the admissible supremum)", delta);
  sink.string_param(psi, "--alphas", "alphas", "alpha grid size", alphas);
  sink.string_param(psi, "--mode", "mode", "standard | bf", psi_mode);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    sink.apply();
    if (o_workers->count()) flags["workers"] = workers;
    if (o_out->count()) flags["out"] = out;
    if (o_seed->count()) flags["seed"] = seed;
    if (o_limit->count()) flags["sieve_limit"] = sieve_limit;
    if (o_cache->count()) flags["sieve_cache"] = sieve_cache;
    if (o_timings->count()) flags["timings"] = timings;
    for (auto* sub : app.get_subcommands()) flags["command"] = sub->get_name();

    json base = json::object();
    if (o_config->count()) {
      std::ifstream in(config_path);
      if (!in) throw psg::ConfigError("cannot open config file '" + config_path + "'");
      try {
        base = json::parse(in);
      } catch (const json::exception& e) {
        throw psg::ConfigError("config file '" + config_path + "': " + e.what());
      }
      if (flags.contains("command") && base.value("command", "") != flags["command"]) base.erase("params");
    }
    if (!flags.contains("command") && !base.contains("command")) {
      std::cerr << app.help();
      return 2;
    }
    const RunConfig cfg = RunConfig::from_json(psg::cli::merge_config(base, flags));
    return run(cfg);
  } catch (const psg::RangeError& e) {
    std::cerr << "psg: range error: " << e.what() << '\n';
    return 3;
  } catch (const psg::ConfigError& e) {
    std::cerr << "psg: config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "psg: error: " << e.what() << '\n';
    return 1;
  }
}
