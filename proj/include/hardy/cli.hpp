// Command-line driver: config parsing, subcommands, reports. Exit codes are
// 0 success, 1 invariant failure, 2 config error, 3 numerical inconsistency.
#pragma once

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "hardy/cyclicity.hpp"
#include "hardy/io.hpp"
#include "hardy/lacunary.hpp"
#include "hardy/model_space.hpp"
#include "hardy/random.hpp"
#include "hardy/toeplitz.hpp"

namespace hardy::cli {

using json = nlohmann::json;

enum ExitCode : int { kOk = 0, kInvariantFailure = 1, kConfigError = 2, kInconsistent = 3 };

struct Options {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::vector<std::string> policy_overrides;
};

/// Validated inputs shared by all subcommands.
struct RunConfig {
  json raw = json::object();
  NumericPolicy policy;
  std::uint64_t seed = 0;
};

inline RunConfig load_config(const Options& opt, std::initializer_list<const char*> allowed, bool config_required) {
  RunConfig cfg;
  if (!opt.config_path.empty()) {
    std::ifstream in(opt.config_path);
    if (!in) throw io::ConfigError("cannot read config " + opt.config_path);
    try {
      cfg.raw = json::parse(in);
    } catch (const json::exception& e) {
      throw io::ConfigError("malformed JSON in " + opt.config_path + ": " + e.what());
    }
  } else if (config_required) {
    throw io::ConfigError("--config is required for this subcommand");
  }
  std::vector<const char*> keys(allowed);
  keys.push_back("policy");
  keys.push_back("seed");
  if (!cfg.raw.is_object()) throw io::ConfigError("config: expected a JSON object");
  for (const auto& [key, value] : cfg.raw.items()) {
    if (std::find_if(keys.begin(), keys.end(), [&](const char* k) { return key == k; }) == keys.end()) {
      throw io::ConfigError("config: unknown key \"" + key + "\"");
    }
  }
  if (cfg.raw.contains("policy")) cfg.policy = io::policy_from_json(cfg.raw.at("policy"));
  for (const auto& kv : opt.policy_overrides) cfg.policy = io::apply_policy_override(kv, cfg.policy);
  cfg.policy.validate();
  if (cfg.raw.contains("seed")) {
    if (!cfg.raw.at("seed").is_number_unsigned()) throw io::ConfigError("seed must be an unsigned integer");
    cfg.seed = cfg.raw.at("seed").get<std::uint64_t>();
  }
  if (opt.seed) cfg.seed = *opt.seed;
  return cfg;
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw io::ConfigError(std::string(key) + ": " + e.what());
  }
}

inline const json& require(const json& j, const char* key) {
  if (!j.contains(key)) throw io::ConfigError(std::string("config: \"") + key + "\" is required");
  return j.at(key);
}

inline json envelope(const RunConfig& cfg, const char* command) {
  return {{"version", io::version()}, {"command", command}, {"policy", io::to_json(cfg.policy)}, {"seed", cfg.seed}};
}

struct Output {
  std::filesystem::path dir;
  void write(const std::string& name, const std::string& content) const {
    std::filesystem::create_directories(dir);
    io::write_file((dir / name).string(), content);
  }
};

// ---------------------------------------------------------------------------

inline int cmd_decompose(const Options& opt, const Output& out) {
  const auto cfg = load_config(opt, {"blaschke", "function", "depth"}, true);
  const auto b = io::blaschke_from_json(require(cfg.raw, "blaschke"));
  const auto f = io::function_from_json(require(cfg.raw, "function"), cfg.policy.truncation_degree);
  std::optional<int> depth;
  if (cfg.raw.contains("depth")) depth = get_or<int>(cfg.raw, "depth", 0);
  const ModelSpaceBasis basis(b, cfg.policy);
  const auto dec = decompose(basis, f, depth);
  const double reassembly = distance(reassemble(basis, dec), f);
  auto rep = envelope(cfg, "decompose");
  rep["blaschke"] = io::to_json(b);
  rep["decomposition"] = io::to_json(dec);
  rep["parseval_defect"] = parseval_defect(f, dec);
  rep["reassembly_error"] = reassembly;
  out.write("decompose.json", io::dump(rep));
  std::vector<std::vector<std::string>> rows;
  for (std::size_t k = 0; k < dec.components.size(); ++k) {
    rows.push_back({std::to_string(k), io::format_double(dec.components[k].norm())});
  }
  std::ostringstream csv;
  io::write_csv(csv, {"k", "norm"}, rows);
  out.write("decompose.csv", csv.str());
  return kOk;
}

inline int cmd_iterate(const Options& opt, const Output& out) {
  const auto cfg = load_config(opt, {"blaschke", "function", "iterations"}, true);
  const auto b = io::blaschke_from_json(require(cfg.raw, "blaschke"));
  const auto f = io::function_from_json(require(cfg.raw, "function"), cfg.policy.truncation_degree);
  WoldOptions wopt;
  wopt.max_power = get_or<int>(cfg.raw, "iterations", 200);
  if (wopt.max_power < 0) throw io::ConfigError("iterations must be >= 0");
  std::erase_if(wopt.partial_sum_depths, [&](int j) { return j > wopt.max_power; });
  if (wopt.partial_sum_depths.empty() || wopt.partial_sum_depths.back() != wopt.max_power) {
    wopt.partial_sum_depths.push_back(wopt.max_power);
  }
  const std::vector<HardyFunction> sample{f};
  const auto w = wold_checks(b, sample, cfg.policy, wopt);
  auto rep = envelope(cfg, "iterate");
  rep["blaschke"] = io::to_json(b);
  rep["wold"] = io::to_json(w);
  out.write("iterate.json", io::dump(rep));
  std::vector<std::vector<std::string>> rows;
  for (std::size_t n = 0; n < w.t_norms.size(); ++n) rows.push_back({std::to_string(n), io::format_double(w.t_norms[n])});
  std::ostringstream csv;
  io::write_csv(csv, {"k", "norm"}, rows);
  out.write("iterate.csv", csv.str());
  return kOk;
}

inline int cmd_cyclicity(const Options& opt, const Output& out) {
  const auto cfg = load_config(opt, {"blaschke", "lacunary", "p", "targets", "iterations", "lacunarity_threshold"}, true);
  const auto b = io::blaschke_from_json(require(cfg.raw, "blaschke"));
  const auto spec = io::lacunary_from_json(require(cfg.raw, "lacunary"), b);
  const double p = get_or<double>(cfg.raw, "p", 2.0);
  DecideOptions dopt;
  dopt.lacunarity_threshold = get_or<double>(cfg.raw, "lacunarity_threshold", 1.5);
  dopt.krylov_targets = get_or<std::size_t>(cfg.raw, "targets", 4 * static_cast<std::size_t>(b.degree()));
  dopt.krylov_iterations = get_or<std::size_t>(cfg.raw, "iterations", 512);
  const ModelSpaceBasis basis(b, cfg.policy);
  const auto report = decide(basis, spec, p, dopt);
  auto rep = envelope(cfg, "cyclicity");
  rep["blaschke"] = io::to_json(b);
  rep["lacunary"] = io::to_json(spec);
  rep["report"] = io::to_json(report);
  out.write("cyclicity.json", io::dump(rep));
  std::vector<std::vector<std::string>> rows;
  if (report.krylov) {
    for (std::size_t t = 0; t < report.krylov->history.size(); ++t) {
      const auto& h = report.krylov->history[t];
      for (std::size_t n = 0; n < h.size(); ++n) {
        rows.push_back({std::to_string(n), "z^" + std::to_string(t), io::format_double(h[n])});
      }
    }
  }
  std::ostringstream csv;
  io::write_csv(csv, {"n", "target", "distance"}, rows);
  out.write("cyclicity.csv", csv.str());
  return kOk;
}

inline int cmd_lacunary_check(const Options& opt, const Output& out) {
  const auto cfg = load_config(opt, {"blaschke", "lacunary", "p", "lacunarity_threshold"}, true);
  const auto b = io::blaschke_from_json(require(cfg.raw, "blaschke"));
  const auto spec = io::lacunary_from_json(require(cfg.raw, "lacunary"), b);
  const double p = get_or<double>(cfg.raw, "p", 2.0);
  const ModelSpaceBasis basis(b, cfg.policy);
  const auto hyp = check_hypotheses(basis, spec, p, get_or<double>(cfg.raw, "lacunarity_threshold", 1.5));
  auto rep = envelope(cfg, "lacunary-check");
  rep["blaschke"] = io::to_json(b);
  rep["lacunary"] = io::to_json(spec);
  rep["hypotheses"] = io::to_json(hyp);
  if (hyp.b2) {
    rep["l4_l1"] = io::to_json(l4_l1_equivalence_check(basis, spec));
  } else {
    rep["l4_l1"] = {{"hypothesis_met", false}, {"note", "hypothesis unmet: exponents are not B2"}};
  }
  std::vector<double> positive;
  for (double x : hyp.component_norms) {
    if (x > 0.0) positive.push_back(std::pow(x, hyp.q));
  }
  if (!positive.empty()) {
    const auto diag = series_diagnostics(positive, 1.0);
    rep["series"] = {{"gamma", diag.gamma},
                     {"partial_sums", diag.partial_sums},
                     {"horizon", diag.horizon},
                     {"truncated_underflow", diag.truncated_underflow},
                     {"divergence_trend", diag.divergence_trend},
                     {"liminf_tail_ratio", diag.liminf_tail_ratio ? json(*diag.liminf_tail_ratio) : json(nullptr)}};
  }
  out.write("lacunary-check.json", io::dump(rep));
  std::vector<std::vector<std::string>> rows;
  for (std::size_t k = 0; k < hyp.component_norms.size(); ++k) {
    rows.push_back({std::to_string(k), io::format_double(hyp.component_norms[k]),
                    io::format_double(hyp.summability_partial_sums[k])});
  }
  std::ostringstream csv;
  io::write_csv(csv, {"k", "norm", "partial_sum"}, rows);
  out.write("lacunary-check.csv", csv.str());
  return kOk;
}

inline int cmd_kernel_growth(const Options& opt, const Output& out) {
  const auto cfg = load_config(opt, {"r_values"}, false);
  std::vector<double> rs;
  if (cfg.raw.contains("r_values")) {
    rs = get_or<std::vector<double>>(cfg.raw, "r_values", {});
  } else {
    for (int k = 3; k <= 10; ++k) rs.push_back(1.0 - std::ldexp(1.0, -k));
  }
  const auto table = h1_kernel_growth_witness(rs);
  auto rep = envelope(cfg, "kernel-growth");
  rep["table"] = io::to_json(table);
  out.write("kernel-growth.json", io::dump(rep));
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : table.rows) {
    rows.push_back({io::format_double(r.r), io::format_double(r.norm1), r.ratio ? io::format_double(*r.ratio) : ""});
  }
  std::ostringstream csv;
  io::write_csv(csv, {"r", "norm1", "ratio"}, rows);
  out.write("kernel-growth.csv", csv.str());
  return kOk;
}

// ---------------------------------------------------------------------------
// Invariant suite.

struct InvariantTally {
  double threshold = 0.0;
  double worst = 0.0;
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::vector<std::string> errors;

  void record(double residual) {
    ++checks;
    worst = std::max(worst, residual);
    if (!(residual < threshold)) ++failures;
  }
  void record_error(const std::string& what) {
    ++checks;
    ++failures;
    if (errors.size() < 5) errors.push_back(what);
  }
  json to_json() const {
    return {{"threshold", threshold}, {"worst", worst}, {"checks", checks}, {"failures", failures},
            {"pass", failures == 0}, {"errors", errors}};
  }
};

struct BatterySize {
  std::size_t functions = 10;  // per product
  std::size_t specs = 10;      // B2 lacunary specs per product
  std::size_t pairs = 10;      // K_b pairs per product
  std::vector<BlaschkeProduct> products = random::standard_products();
};

inline BatterySize battery_from_json(const json& j) {
  BatterySize b;
  io::reject_unknown_keys(j, {"functions", "specs", "pairs", "products"}, "battery");
  b.functions = get_or<std::size_t>(j, "functions", b.functions);
  b.specs = get_or<std::size_t>(j, "specs", b.specs);
  b.pairs = get_or<std::size_t>(j, "pairs", b.pairs);
  if (j.contains("products")) {
    b.products.clear();
    for (const auto& p : j.at("products")) b.products.push_back(io::blaschke_from_json(p));
  }
  return b;
}

/// Runs every invariant over the seeded battery; returns the JSON summary.
inline json run_invariant_suite(const NumericPolicy& policy, std::uint64_t seed, const BatterySize& battery) {
  std::map<std::string, InvariantTally> t;
  t["parseval"].threshold = 1e-8;
  t["reassembly"].threshold = 1e-9;
  t["pk_idempotence"].threshold = 1e-9;
  t["pk_annihilation"].threshold = 1e-9;
  t["pk_integral"].threshold = 1e-8;
  t["remainder"].threshold = 1e-8;
  t["reproducing"].threshold = 1e-9;
  t["wold_decay"].threshold = 1e-6;
  t["wold_partial_sums"].threshold = 1e-6;
  t["product_lemma"].threshold = 1e-9;
  t["l4_l1_stated"].threshold = kInequalitySlack;
  t["l4_l1_intermediate"].threshold = kInequalitySlack;

  random::Engine rng(seed);
  const std::size_t n = policy.truncation_degree;
  auto guarded = [&](const char* name, const std::function<void()>& body) {
    try {
      body();
    } catch (const Error& e) {
      t[name].record_error(e.what());
    }
  };

  for (const auto& b : battery.products) {
    const ModelSpaceBasis basis(b, policy);
    const ToeplitzPair op(b, policy);
    const auto fs = random::random_battery(rng, battery.functions, n);
    for (std::size_t i = 0; i < fs.size(); ++i) {
      const auto& f = fs[i];
      const double nf = f.norm2();
      guarded("parseval", [&] {
        const auto dec = decompose(basis, f);
        t["parseval"].record(parseval_defect(f, dec));
        t["reassembly"].record(distance(reassemble(basis, dec), f) / nf);
        guarded("remainder", [&] {
          for (int m = 0; m <= 8; ++m) t["remainder"].record(remainder(basis, f, m, dec).max_disagreement / nf);
        });
      });
      guarded("pk_idempotence", [&] {
        std::vector<HardyFunction> pk;
        for (int k = 0; k <= 5; ++k) pk.push_back(op.Pk(f, k));
        for (int k = 0; k <= 5; ++k) {
          for (int l = 0; l <= 5; ++l) {
            const auto pkl = op.Pk(pk[static_cast<std::size_t>(l)], k);
            if (k == l) {
              t["pk_idempotence"].record(distance(pkl, pk[static_cast<std::size_t>(k)]) / nf);
            } else {
              t["pk_annihilation"].record(pkl.norm2() / nf);
            }
          }
          guarded("pk_integral", [&] {
            const auto integral = project_Pk_integral(b, f, k, policy);
            if (integral.grid.under_resolved) {
              t["pk_integral"].record_error("integral path under-resolved: error estimate " +
                                            io::format_double(integral.grid.error_estimate));
              return;
            }
            t["pk_integral"].record(distance(integral.value, pk[static_cast<std::size_t>(k)]) / nf);
          });
        }
      });
      guarded("reproducing", [&] {
        const cplx lam = random::in_disk(rng, 0.8);
        for (int l = 0; l <= 3; ++l) {
          const cplx lhs = inner_product(f, kernel(lam, l, policy));
          const cplx rhs = f.derivative(lam, l);
          t["reproducing"].record(std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
        }
      });
      if (i % 2 == 0) {
        guarded("wold_decay", [&] {
          WoldOptions w;
          w.partial_sum_depths = {200};
          const std::vector<HardyFunction> one{f};
          const auto rep = wold_checks(b, one, policy, w);
          t["wold_decay"].record(rep.t_norms.back());
          t["wold_partial_sums"].record(rep.partial_sum_errors.back().second);
        });
      }
    }
    for (std::size_t i = 0; i < battery.pairs; ++i) {
      guarded("product_lemma", [&] {
        const auto f = random::random_model_element(rng, basis);
        const auto g = random::random_model_element(rng, basis);
        const auto rep = product_lemma_check(basis, f, g);
        t["product_lemma"].record(rep.projection_norm / rep.scale);
      });
    }
    if (battery.specs > 0) {
      const double c = norm_equivalence_constant(basis, 4.0, 2.0, 64, seed).value;
      for (std::size_t i = 0; i < battery.specs; ++i) {
        guarded("l4_l1_stated", [&] {
          const auto spec = random::random_b2_spec(rng, basis);
          const auto rep = l4_l1_equivalence_check(basis, spec, c);
          const double scale = std::max(1.0, rep.norm4);
          t["l4_l1_stated"].record(std::max(0.0, rep.norm4 - rep.bound_stated) / scale);
          t["l4_l1_intermediate"].record(std::max(0.0, rep.norm4 - rep.bound_intermediate) / scale);
        });
      }
    }
  }

  std::size_t total = 0;
  bool all_pass = true;
  json inv = json::object();
  for (auto& [name, tally] : t) {
    total += tally.checks;
    all_pass = all_pass && tally.failures == 0;
    inv[name] = tally.to_json();
  }
  return {{"invariants", inv}, {"checks", total}, {"vacuous", total == 0}, {"all_pass", all_pass}};
}

inline int cmd_invariant_suite(const Options& opt, const Output& out) {
  const auto cfg = load_config(opt, {"battery"}, false);
  const auto battery = cfg.raw.contains("battery") ? battery_from_json(cfg.raw.at("battery")) : BatterySize{};
  auto rep = envelope(cfg, "invariant-suite");
  rep["battery"] = {{"functions", battery.functions}, {"specs", battery.specs}, {"pairs", battery.pairs},
                    {"products", json::array()}};
  for (const auto& b : battery.products) rep["battery"]["products"].push_back(io::to_json(b));
  rep["summary"] = run_invariant_suite(cfg.policy, cfg.seed, battery);
  out.write("invariant-suite.json", io::dump(rep));
  return rep["summary"]["all_pass"].get<bool>() ? kOk : kInvariantFailure;
}

// ---------------------------------------------------------------------------

inline int run(int argc, const char* const* argv, std::ostream& err = std::cerr) {
  CLI::App app{"Hardy-space decompositions, Toeplitz iteration and cyclicity tests"};
  app.set_version_flag("--version", io::version());
  Options opt;
  app.add_option("--config", opt.config_path, "JSON config file");
  app.add_option("--out", opt.out_dir, "output directory (default: current directory)");
  app.add_option("--seed", opt.seed, "64-bit seed; overrides the config value");
  app.add_option("--policy", opt.policy_overrides, "numeric policy override key=value (repeatable)");
  app.require_subcommand(1);

  using Handler = int (*)(const Options&, const Output&);
  const std::vector<std::pair<std::string, std::pair<std::string, Handler>>> commands{
      {"decompose", {"orthogonal decomposition f ~ sum f_k b^k", cmd_decompose}},
      {"iterate", {"Toeplitz iterates ||T^n f|| and Wold partial sums", cmd_iterate}},
      {"cyclicity", {"cyclicity verdict with Krylov cross-check", cmd_cyclicity}},
      {"lacunary-check", {"hypothesis report and L4-L1 check for a lacunary spec", cmd_lacunary_check}},
      {"invariant-suite", {"seeded invariant battery", cmd_invariant_suite}},
      {"kernel-growth", {"H^1 norm growth of 1/(1 - r z)", cmd_kernel_growth}},
  };
  Handler chosen = nullptr;
  for (const auto& [name, entry] : commands) {
    auto* sub = app.add_subcommand(name, entry.first);
    sub->fallthrough();
    sub->callback([&chosen, h = entry.second] { chosen = h; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    std::ostringstream os;
    app.exit(e, os, err);
    std::cout << os.str();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    std::cout << io::version() << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }

  try {
    return chosen(opt, Output{opt.out_dir});
  } catch (const io::ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const BandwidthError& e) {
    err << "bandwidth error: " << e.what();
    if (e.required_grid()) err << " (required grid_size >= " << e.required_grid() << ")";
    if (e.feasible_terms()) err << " (feasible terms: " << e.feasible_terms() << ")";
    err << "\n";
    return kConfigError;
  } catch (const DomainError& e) {
    err << "invalid input: " << e.what() << "\n";
    return kConfigError;
  } catch (const json::exception& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const ConsistencyError& e) {
    err << "numerical inconsistency: " << e.what() << "\n";
    return kInconsistent;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInconsistent;
  }
}

}  // namespace hardy::cli
