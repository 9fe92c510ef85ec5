// JSON and CSV serialization for products, functions, specs and reports.
#pragma once

#include <json.hpp>

#include <Eigen/Dense>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hardy/cyclicity.hpp"
#include "hardy/lacunary.hpp"
#include "hardy/model_space.hpp"
#include "hardy/toeplitz.hpp"

#ifndef HARDY_VERSION
#define HARDY_VERSION "unknown"
#endif

namespace hardy::io {

using json = nlohmann::json;

/// Malformed or semantically invalid input.
class ConfigError : public Error {
public:
  using Error::Error;
};

inline std::string version() { return HARDY_VERSION; }

inline void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected a JSON object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items()) {
    if (!ok.count(key)) throw ConfigError(where + ": unknown key \"" + key + "\"");
  }
}

// ---------------------------------------------------------------------------
// Scalars and vectors.

inline json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

/// [re, im] or a bare real number.
inline cplx complex_from_json(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw ConfigError(where + ": expected a number or [re, im]");
}

inline json to_json(const Eigen::VectorXcd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}

inline Eigen::VectorXcd vector_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + ": expected an array");
  Eigen::VectorXcd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i], where + "[" + std::to_string(i) + "]");
  }
  return v;
}

inline json to_json(const Eigen::MatrixXcd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Domain objects.

inline json to_json(const NumericPolicy& p) {
  return {{"truncation_degree", p.truncation_degree},
          {"grid_size", p.grid_size},
          {"rank_tolerance", p.rank_tolerance},
          {"residual_tolerance", p.residual_tolerance},
          {"allow_undersampled_grid", p.allow_undersampled_grid}};
}

/// Applies the keys present in `j` on top of `base`.
inline NumericPolicy policy_from_json(const json& j, NumericPolicy base = {}) {
  reject_unknown_keys(j, {"truncation_degree", "grid_size", "rank_tolerance", "residual_tolerance",
                          "allow_undersampled_grid"},
                      "policy");
  try {
    if (j.contains("truncation_degree")) base.truncation_degree = j.at("truncation_degree").get<std::size_t>();
    if (j.contains("grid_size")) base.grid_size = j.at("grid_size").get<std::size_t>();
    if (j.contains("rank_tolerance")) base.rank_tolerance = j.at("rank_tolerance").get<double>();
    if (j.contains("residual_tolerance")) base.residual_tolerance = j.at("residual_tolerance").get<double>();
    if (j.contains("allow_undersampled_grid")) base.allow_undersampled_grid = j.at("allow_undersampled_grid").get<bool>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("policy: ") + e.what());
  }
  return base;
}

/// Parses one `key=value` override; the value is read as JSON (so true, 512, 1e-9 all work).
inline NumericPolicy apply_policy_override(const std::string& kv, NumericPolicy base) {
  const auto eq = kv.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("--policy expects key=value, got \"" + kv + "\"");
  json value;
  try {
    value = json::parse(kv.substr(eq + 1));
  } catch (const json::exception&) {
    throw ConfigError("--policy " + kv + ": value is not a number or boolean");
  }
  return policy_from_json(json{{kv.substr(0, eq), value}}, base);
}

inline json to_json(const BlaschkeProduct& b) {
  json zeros = json::array();
  for (const auto& z : b.zeros()) {
    zeros.push_back({{"re", z.point.real()}, {"im", z.point.imag()}, {"mult", z.multiplicity}});
  }
  json out{{"zeros", zeros}};
  if (b.phase() != cplx(1.0)) out["phase"] = to_json(b.phase());
  return out;
}

inline BlaschkeProduct blaschke_from_json(const json& j) {
  reject_unknown_keys(j, {"zeros", "phase"}, "blaschke");
  if (!j.contains("zeros") || !j.at("zeros").is_array()) throw ConfigError("blaschke: \"zeros\" array required");
  std::vector<BlaschkeZero> zeros;
  for (const auto& z : j.at("zeros")) {
    reject_unknown_keys(z, {"re", "im", "mult"}, "blaschke zero");
    try {
      zeros.push_back({{z.value("re", 0.0), z.value("im", 0.0)}, z.value("mult", 1)});
    } catch (const json::exception& e) {
      throw ConfigError(std::string("blaschke zero: ") + e.what());
    }
  }
  const cplx phase = j.contains("phase") ? complex_from_json(j.at("phase"), "blaschke.phase") : cplx(1.0);
  return BlaschkeProduct(std::move(zeros), phase);
}

inline json to_json(const HardyFunction& f) {
  json coeffs = json::array();
  for (const auto& c : f.coeffs()) coeffs.push_back(to_json(c));
  return {{"coeffs", coeffs}};
}

/// Coefficients are zero-padded to the truncation degree.
inline HardyFunction function_from_json(const json& j, std::size_t n) {
  reject_unknown_keys(j, {"coeffs"}, "function");
  if (!j.contains("coeffs")) throw ConfigError("function: \"coeffs\" required");
  const auto v = vector_from_json(j.at("coeffs"), "function.coeffs");
  if (static_cast<std::size_t>(v.size()) > n) {
    throw BandwidthError("function has " + std::to_string(v.size()) + " coefficients, truncation degree is " +
                             std::to_string(n),
                         next_power_of_two(4 * static_cast<std::size_t>(v.size())));
  }
  std::vector<cplx> a(n, 0.0);
  for (Eigen::Index i = 0; i < v.size(); ++i) a[static_cast<std::size_t>(i)] = v(i);
  return HardyFunction(std::move(a));
}

inline json to_json(const LacunarySpec& s) {
  json comps = json::array();
  for (const auto& c : s.components) comps.push_back(to_json(c));
  json out{{"exponents", s.exponents}, {"components", comps}};
  if (s.zeros_flagged) out["zeros_flagged"] = true;
  return out;
}

inline LacunarySpec lacunary_from_json(const json& j, const BlaschkeProduct& b) {
  reject_unknown_keys(j, {"exponents", "components", "zeros_flagged"}, "lacunary");
  LacunarySpec s{b, {}, {}};
  try {
    s.exponents = j.at("exponents").get<std::vector<long>>();
    s.zeros_flagged = j.value("zeros_flagged", false);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("lacunary: ") + e.what());
  }
  if (!j.contains("components") || !j.at("components").is_array()) throw ConfigError("lacunary: \"components\" required");
  for (std::size_t k = 0; k < j.at("components").size(); ++k) {
    s.components.push_back(vector_from_json(j.at("components")[k], "lacunary.components[" + std::to_string(k) + "]"));
  }
  s.validate();
  return s;
}

inline json to_json(const ModelSpaceBasis& basis) {
  json kernels = json::array();
  for (int j = 0; j < basis.dimension(); ++j) {
    const auto& idx = basis.kernel_indices()[static_cast<std::size_t>(j)];
    Eigen::VectorXcd col = basis.kernels().col(j);
    kernels.push_back({{"lambda", to_json(idx.lambda)}, {"l", idx.order}, {"coeffs", to_json(col)}});
  }
  json gram = json::array();
  for (Eigen::Index r = 0; r < basis.gram().rows(); ++r) {
    for (Eigen::Index c = 0; c < basis.gram().cols(); ++c) gram.push_back(to_json(basis.gram()(r, c)));
  }
  return {{"product", to_json(basis.product())},
          {"kernels", kernels},
          {"gram", gram},
          {"gram_layout", "row-major"},
          {"min_eigenvalue", basis.min_eigenvalue()}};
}

inline json to_json(const Decomposition& dec) {
  json comps = json::array();
  for (const auto& c : dec.components) comps.push_back(to_json(c));
  return {{"components", comps}, {"residual", dec.residual_norm}, {"truncation_index", dec.truncation_index}};
}

inline json to_json(const HypothesisReport& h) {
  json out{{"p", h.p},
           {"q", h.q},
           {"lacunarity", {{"min_ratio", std::isfinite(h.lacunarity_min_ratio) ? json(h.lacunarity_min_ratio) : json(nullptr)},
                           {"threshold", h.lacunarity_threshold},
                           {"pass", h.lacunary}}},
           {"summability", {{"partial_sums", h.summability_partial_sums},
                            {"tail_slope", h.summability_tail_slope},
                            {"pass", h.summable}}},
           {"domination", {{"rho", h.domination_rho},
                           {"c", h.domination_c},
                           {"max_log_residual", h.domination_max_residual},
                           {"pass", h.dominated}}},
           {"b2", {{"pass", h.b2}}},
           {"component_norms", h.component_norms},
           {"finite_support", h.finite_support},
           {"finite_horizon", h.finite_horizon},
           {"all_pass", h.all_pass()}};
  if (h.b2_collision) {
    const auto& c = *h.b2_collision;
    out["b2"]["collision"] = {{c[0], c[1]}, {c[2], c[3]}};
  }
  return out;
}

inline json to_json(const KrylovTable& t) {
  json out{{"checkpoints", t.checkpoints},
           {"requested", t.requested},
           {"achieved", t.achieved},
           {"stop_reason", t.stop_reason},
           {"distances", t.distances}};
  return out;
}

inline json to_json(const CyclicityReport& r) {
  json basis = json::array();
  for (Eigen::Index j = 0; j < r.kstar.basis.cols(); ++j) basis.push_back(to_json(Eigen::VectorXcd(r.kstar.basis.col(j))));
  json out{{"p", r.p},
           {"verdict", to_string(r.verdict)},
           {"reason", r.reason},
           {"hypotheses", to_json(r.hypotheses)},
           {"kstar", {{"basis", basis},
                      {"rank", r.kstar.rank},
                      {"stabilization_index", r.kstar.stabilization_index},
                      {"horizon", r.kstar.horizon},
                      {"window", r.kstar.window},
                      {"tail_ranks", r.kstar.tail_ranks},
                      {"all_zero", r.kstar.all_zero},
                      {"finite_horizon", r.kstar.finite_horizon}}},
           {"witness_missing", r.witness_missing}};
  if (r.determinant_witness) {
    out["determinant_witness"] = {{"indices", r.determinant_witness->indices},
                                  {"value", to_json(r.determinant_witness->determinant)},
                                  {"normalized", r.determinant_witness->normalized}};
  } else {
    out["determinant_witness"] = nullptr;
  }
  json finite = json::array();
  for (const auto& c : r.structure.finite_part) finite.push_back(to_json(c));
  out["structure"] = {{"finite_part", finite},
                      {"finite_part_last_index", r.structure.finite_part_last_index},
                      {"finite_part_b_degree", r.structure.finite_part_b_degree},
                      {"ep_dimension", r.structure.ep_dimension}};
  if (r.krylov) out["krylov"] = to_json(*r.krylov);
  return out;
}

inline json to_json(const L4L1Report& r) {
  return {{"hypothesis_met", r.hypothesis_met},
          {"norm1", r.norm1},
          {"norm2", r.norm2},
          {"norm4", r.norm4},
          {"c", r.c},
          {"bound_stated", r.bound_stated},
          {"bound_intermediate", r.bound_intermediate},
          {"bound_corrected", r.bound_corrected},
          {"stated_holds", r.stated_holds},
          {"intermediate_holds", r.intermediate_holds},
          {"corrected_holds", r.corrected_holds}};
}

inline json to_json(const KernelGrowthTable& t) {
  json rows = json::array();
  for (const auto& row : t.rows) {
    rows.push_back({{"r", row.r}, {"norm1", row.norm1}, {"ratio", row.ratio ? json(*row.ratio) : json(nullptr)}, {"grid", row.grid}});
  }
  return {{"rows", rows}, {"strictly_increasing", t.strictly_increasing}, {"ratio_min", t.ratio_min}, {"ratio_max", t.ratio_max}};
}

inline json to_json(const WoldReport& w) {
  json partial = json::array();
  for (const auto& [j, e] : w.partial_sum_errors) partial.push_back({{"J", j}, {"error", e}});
  return {{"samples", w.samples},
          {"idempotence_residual", w.idempotence_residual},
          {"range_orthogonality", w.range_orthogonality},
          {"rt_isometry_defect", w.rt_isometry_defect},
          {"rt_norms_decreasing", w.rt_norms_decreasing},
          {"t_norms", w.t_norms},
          {"first_below_1e-6", w.first_below_1e6},
          {"partial_sums", partial}};
}

// ---------------------------------------------------------------------------
// Output.

/// Pretty JSON with a trailing newline; key order is sorted, so equal inputs give equal bytes.
inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline std::string format_double(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

/// Writes a CSV with a header row; every cell is already formatted.
inline void write_csv(std::ostream& os, const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << "\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
    os << "\n";
  }
}

/// j, re, im of the boundary samples f(exp(2 pi i j / M)).
inline void write_boundary_csv(std::ostream& os, const HardyFunction& f, const NumericPolicy& policy) {
  const auto s = boundary_values(f, policy);
  std::vector<std::vector<std::string>> rows;
  for (std::size_t j = 0; j < s.size(); ++j) {
    const double theta = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(s.size());
    rows.push_back({std::to_string(j), format_double(theta), format_double(s[j].real()), format_double(s[j].imag())});
  }
  write_csv(os, {"j", "theta", "re", "im"}, rows);
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << content;
}

}  // namespace hardy::io
