// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace hardy;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

const NumericPolicy kPolicy{};
constexpr std::size_t N = 256;

Outcome parseval() {
  const auto t0 = Clock::now();
  random::Engine rng(1001);
  double worst = 0.0;
  for (const auto& b : random::standard_products()) {
    const ModelSpaceBasis basis(b, kPolicy);
    for (const auto& f : random::random_battery(rng, 50, N)) worst = std::max(worst, parseval_defect(f, decompose(basis, f)));
  }
  const double secs = seconds_since(t0);
  return {worst < 1e-8 && secs < 10.0, "worst relative defect " + fmt(worst) + ", " + fmt(secs) + " s"};
}

Outcome projections() {
  random::Engine rng(1002);
  double idem = 0.0, annih = 0.0;
  for (const auto& b : random::standard_products()) {
    const ToeplitzPair op(b, kPolicy);
    for (const auto& f : random::random_battery(rng, 10, N)) {
      const double nf = f.norm2();
      std::vector<HardyFunction> pk;
      for (int k = 0; k <= 5; ++k) pk.push_back(op.Pk(f, k));
      for (int k = 0; k <= 5; ++k) {
        for (int l = 0; l <= 5; ++l) {
          const auto v = op.Pk(pk[static_cast<std::size_t>(l)], k);
          if (k == l) {
            idem = std::max(idem, distance(v, pk[static_cast<std::size_t>(k)]) / nf);
          } else {
            annih = std::max(annih, v.norm2() / nf);
          }
        }
      }
    }
  }
  return {idem < 1e-9 && annih < 1e-9, "idempotence " + fmt(idem) + ", annihilation " + fmt(annih)};
}

Outcome integral_cross_check() {
  random::Engine rng(1002);  // same battery as the projection identities
  double worst = 0.0;
  bool resolved = true;
  for (const auto& b : random::standard_products()) {
    const ToeplitzPair op(b, kPolicy);
    for (const auto& f : random::random_battery(rng, 10, N)) {
      for (int k = 0; k <= 5; ++k) {
        const auto integral = project_Pk_integral(b, f, k, kPolicy);
        resolved = resolved && !integral.grid.under_resolved;
        worst = std::max(worst, distance(integral.value, op.Pk(f, k)) / f.norm2());
      }
    }
  }
  return {resolved && worst < 1e-8, "worst relative disagreement " + fmt(worst)};
}

Outcome remainders() {
  random::Engine rng(1004);
  double worst = 0.0;
  for (const auto& b : random::standard_products()) {
    const ModelSpaceBasis basis(b, kPolicy);
    for (const auto& f : random::random_battery(rng, 10, N)) {
      const auto dec = decompose(basis, f);
      for (int m = 0; m <= 8; ++m) worst = std::max(worst, remainder(basis, f, m, dec).max_disagreement / f.norm2());
    }
  }
  return {worst < 1e-8, "worst three-way disagreement " + fmt(worst)};
}

Outcome reproducing() {
  std::mt19937_64 rng(1005);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const auto r = oracle::random_rational(rng);
    const auto f = r.coefficients(N);
    const cplx lam = random::in_disk(rng, 0.8);
    for (int l = 0; l <= 3; ++l) {
      const cplx exact = r.derivative(lam, l);
      const cplx got = inner_product(f, kernel(lam, l, kPolicy));
      worst = std::max(worst, std::abs(got - exact) / std::max(1.0, std::abs(exact)));
    }
  }
  return {worst < 1e-9, "worst error " + fmt(worst)};
}

Outcome wold() {
  std::mt19937_64 rng(1006);
  double decay = 0.0, sums = 0.0;
  for (const auto& b : random::standard_products()) {
    std::vector<HardyFunction> fs;
    for (int i = 0; i < 10; ++i) fs.push_back(oracle::random_rational(rng, 3, 0.5).coefficients(N));
    WoldOptions opt;
    opt.partial_sum_depths = {200};
    const auto rep = wold_checks(b, fs, kPolicy, opt);
    decay = std::max(decay, rep.t_norms.at(200));
    sums = std::max(sums, rep.partial_sum_errors.back().second);
  }
  return {decay < 1e-6 && sums < 1e-6, "||T^200 f|| <= " + fmt(decay) + ", partial-sum error " + fmt(sums)};
}

Outcome cyclicity() {
  const auto t0 = Clock::now();
  const std::vector<std::pair<std::string, Verdict>> cases{
      {"cyclic_z.json", Verdict::cyclic},
      {"cyclic_z2.json", Verdict::cyclic},
      {"cyclic_z3.json", Verdict::cyclic},
      {"noncyclic_collinear.json", Verdict::non_cyclic},
      {"noncyclic_finite.json", Verdict::non_cyclic},
      {"noncyclic_rank2.json", Verdict::non_cyclic},
  };
  bool ok = true;
  std::string detail;
  for (const auto& [name, expected] : cases) {
    const auto c = fixture::cyclicity_case(name);
    const ModelSpaceBasis basis(c.product, c.policy);
    const auto rep = decide(basis, c.spec, 2.0);
    const auto f = build(basis, c.spec);
    const auto targets = monomial_targets(8, c.policy);
    const bool cyclic = expected == Verdict::cyclic;
    const auto table = krylov_oracle(c.product, f, targets, cyclic ? 512 : 2048, c.policy);
    double worst = 0.0;
    for (const auto& row : table.distances) worst = std::max(worst, row.back());
    const bool oracle_ok = cyclic ? worst < 1e-3 : worst > 0.1;
    const bool match = rep.verdict == expected && oracle_ok;
    ok = ok && match;
    if (!match) detail += " " + name + "(" + to_string(rep.verdict) + ", max dist " + fmt(worst) + ")";
  }
  const double secs = seconds_since(t0);
  ok = ok && secs < 60.0;
  return {ok, (detail.empty() ? "6 fixtures agree" : "mismatch:" + detail) + ", " + fmt(secs) + " s"};
}

Outcome l4_l1() {
  random::Engine rng(1008);
  const auto products = random::standard_products();
  int specs = 0, stated = 0, intermediate = 0;
  for (int i = 0; i < 3; ++i) {
    const ModelSpaceBasis basis(products[static_cast<std::size_t>(i + 1)], kPolicy);
    const double c = norm_equivalence_constant(basis, 4.0, 2.0, 64, 1008).value;
    const int count = i < 2 ? 33 : 34;
    for (int s = 0; s < count; ++s) {
      const auto rep = l4_l1_equivalence_check(basis, random::random_b2_spec(rng, basis), c);
      ++specs;
      if (!rep.hypothesis_met) continue;
      if (!rep.stated_holds) ++stated;
      if (!rep.intermediate_holds) ++intermediate;
    }
  }
  return {specs == 100 && stated == 0 && intermediate == 0,
          std::to_string(specs) + " specs, violations stated " + std::to_string(stated) + ", intermediate " +
              std::to_string(intermediate)};
}

Outcome product_lemma() {
  random::Engine rng(1009);
  double worst = 0.0;
  for (const auto& b : random::standard_products()) {
    const ModelSpaceBasis basis(b, kPolicy);
    for (int i = 0; i < 50; ++i) {
      const auto f = random::random_model_element(rng, basis);
      const auto g = random::random_model_element(rng, basis);
      const auto rep = product_lemma_check(basis, f, g);
      worst = std::max(worst, rep.projection_norm / rep.scale);
    }
  }
  return {worst < 1e-9, "worst relative projection norm " + fmt(worst)};
}

Outcome kernel_growth() {
  std::vector<double> rs;
  for (int k = 3; k <= 10; ++k) rs.push_back(1.0 - std::ldexp(1.0, -k));
  const auto tab = h1_kernel_growth_witness(rs);
  const bool in_band = tab.ratio_min >= 0.2 && tab.ratio_max <= 0.5;
  return {in_band && tab.strictly_increasing,
          "ratio range [" + fmt(tab.ratio_min) + ", " + fmt(tab.ratio_max) + "], band [0.2, 0.5], increasing " +
              (tab.strictly_increasing ? "yes" : "no")};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Outcome determinism() {
  const auto root = std::filesystem::temp_directory_path() / "hardy_acceptance_determinism";
  std::filesystem::remove_all(root);
  std::vector<std::string> reports;
  for (const char* run : {"a", "b"}) {
    const auto out = root / run;
    const std::string cmd = std::string("\"") + HARDY_CLI_PATH + "\" --seed 20240601 --out \"" + out.string() +
                            "\" invariant-suite > /dev/null 2>&1";
    if (std::system(cmd.c_str()) != 0) return {false, "invariant-suite exited nonzero"};
    reports.push_back(slurp(out / "invariant-suite.json"));
  }
  std::filesystem::remove_all(root);
  const bool same = !reports[0].empty() && reports[0] == reports[1];
  return {same, same ? std::to_string(reports[0].size()) + " identical bytes" : "reports differ"};
}

}  // namespace

int main() {
  const std::vector<Outcome (*)()> criteria{parseval,    projections, integral_cross_check, remainders,
                                            reproducing, wold,        cyclicity,            l4_l1,
                                            product_lemma, kernel_growth, determinism};
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all = all && o.pass;
    std::cout << "criterion " << (i + 1) << ": " << (o.pass ? "PASS" : "FAIL") << " (" << o.detail << ")\n"
              << std::flush;
  }
  return all ? 0 : 1;
}
