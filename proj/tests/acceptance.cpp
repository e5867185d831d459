// Runs the twelve acceptance criteria and prints one PASS/FAIL line each.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "../tools/suites.hpp"
#include "fkf/configuration.hpp"
#include "fkf/error.hpp"
#include "fkf/observables.hpp"

using namespace fkf;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Runs a suite and folds the named checks (all checks when names is empty) into one outcome.
Outcome suite(const std::string& name, const LatticeDomain& d, const ModelParams& pm, std::vector<std::string> names = {},
              std::vector<int> corners = {}, long sweeps = 1000000) {
  cli::SuiteContext ctx;
  ctx.domain = &d;
  ctx.params = pm;
  ctx.corners = std::move(corners);
  ctx.sweeps = sweeps;
  cli::RunReport rep;
  cli::run_suite(name, ctx, rep);
  Outcome o{true, {}};
  int used = 0;
  for (const auto& r : rep.results) {
    if (!r.pass) continue;
    const bool wanted = names.empty() || std::any_of(names.begin(), names.end(), [&](const std::string& n) {
                          return r.name.rfind(n, 0) == 0;
                        });
    if (!wanted) continue;
    ++used;
    o.pass = o.pass && *r.pass;
    o.detail += (o.detail.empty() ? "" : ", ") + r.name + "=" + fmt("%.3g", r.residual.value_or(0.0));
  }
  if (used == 0 || (!names.empty() && used < static_cast<int>(names.size()))) {
    o.pass = false;
    o.detail += " (missing checks)";
  }
  return o;
}

Outcome merge(Outcome a, const Outcome& b) {
  a.pass = a.pass && b.pass;
  a.detail += "; " + b.detail;
  return a;
}

std::vector<int> quad(const LatticeDomain& d) {
  return {d.corner_by_spec(0, 0, Quadrant::NE), d.corner_by_spec(2, 0, Quadrant::NW),
          d.corner_by_spec(0, 2, Quadrant::SE), d.corner_by_spec(2, 2, Quadrant::SW)};
}

Outcome loop_events_lemma() {
  LatticeDomain d2(2, 2), d3(3, 3);
  const auto pm = ModelParams::critical();
  return merge(suite("lemma-loop", d2, pm, {"loop_events_lemma"}), suite("lemma-loop", d3, pm, {"loop_events_lemma"}));
}

Outcome euler() {
  LatticeDomain d(3, 3);
  return suite("lemma-loop", d, ModelParams::critical(), {"euler_loop_count"});
}

Outcome winding() {
  LatticeDomain d(3, 3);
  return suite("winding", d, ModelParams::critical(),
               {"phase_exponent_multiple_of_8", "complementary_arcs_antisymmetric", "phase_composition"});
}

Outcome antisymmetry() {
  LatticeDomain d(3, 3);
  const auto base = quad(d);
  std::vector<int> perm{0, 1, 2, 3};
  std::vector<std::vector<int>> sets;
  std::vector<int> signs;
  do {
    std::vector<int> s;
    for (int i : perm) s.push_back(base[i]);
    sets.push_back(s);
    int inv = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) inv += perm[i] > perm[j];
    signs.push_back(inv % 2 ? -1 : 1);
  } while (std::next_permutation(perm.begin(), perm.end()));
  double worst = 0.0, smallest = 1.0;
  for (double p : {0.3, critical_p(), 0.7}) {
    const auto v = fermion_exact_batch(d, ModelParams::from_p(p), sets);
    for (std::size_t i = 0; i < v.size(); ++i) worst = std::max(worst, std::abs(v[i] - signs[i] * v[0]));
    smallest = std::min(smallest, std::abs(v[0]));
  }
  return {worst <= 1e-12 && smallest > 1e-6,
          "24 permutations x 3 p, worst " + fmt("%.3g", worst) + ", min |f| " + fmt("%.3g", smallest)};
}

Outcome equivalence() {
  LatticeDomain d2(2, 2), d3(3, 3);
  Outcome o{true, {}};
  for (double beta : {0.3, critical_beta(), 0.7}) {
    auto r = suite("equivalence", d2, ModelParams::from_beta(beta), {"fk_vs_ising_all_pairs"});
    r.detail = "beta " + fmt("%.4f", beta) + ": " + r.detail;
    o = o.detail.empty() ? r : merge(o, r);
  }
  return merge(o, suite("equivalence", d3, ModelParams::critical(), {"fk_vs_ising"}, quad(d3)));
}

void dual_paths(const LatticeDomain& d, int at, int target, int max_len, std::vector<int>& cur,
                std::vector<std::vector<int>>& out) {
  if (at == target) {
    out.push_back(cur);
    return;
  }
  if (static_cast<int>(cur.size()) > max_len) return;
  const Point p = d.dual(at).doubled;
  for (int k = 0; k < d.dual_count(); ++k) {
    const Point q = d.dual(k).doubled;
    if (std::abs(p.x - q.x) + std::abs(p.y - q.y) != 2) continue;
    if (std::find(cur.begin(), cur.end(), k) != cur.end()) continue;
    cur.push_back(k);
    dual_paths(d, k, target, max_len, cur, out);
    cur.pop_back();
  }
}

Outcome line_independence() {
  LatticeDomain d(3, 3);
  const auto pm = ModelParams::critical();
  const int a = d.corner_by_spec(0, 0, Quadrant::NE), b = d.corner_by_spec(2, 1, Quadrant::SW);
  const int pair[2] = {a, b};
  const DefectLine base = route_defect_line(d, a, b);
  const double ref = ising_fermion_exact(d, pm, pair, std::vector<DefectLine>{base}).value.real();
  std::vector<std::vector<int>> paths;
  std::vector<int> cur{d.corner(a).w};
  dual_paths(d, d.corner(a).w, d.corner(b).w, 7, cur, paths);
  std::set<std::vector<int>> routings{base.dual_path};
  double worst = 0.0;
  for (auto& p : paths) {
    DefectLine alt;
    try {
      alt = make_defect_line(d, a, b, p);
      line_turning_eighths(d, alt);
    } catch (const std::exception&) {
      continue;
    }
    if (!routings.insert(p).second) continue;
    worst = std::max(worst, std::abs(ising_fermion_exact(d, pm, pair, std::vector<DefectLine>{alt}).value.real() - ref));
  }
  return {routings.size() >= 2 && worst <= 1e-12,
          std::to_string(routings.size()) + " routings, worst " + fmt("%.3g", worst)};
}

Outcome coupling() {
  LatticeDomain d(2, 2);
  return suite("coupling", d, ModelParams::critical(),
               {"es_spin_marginal", "es_config_marginal", "es_defect_spin_marginal", "es_defect_config_marginal",
                "chain_stationarity_tv"});
}

Outcome sholo() {
  LatticeDomain d(3, 3);
  auto crit = suite("sholo", d, ModelParams::critical(), {"sholo_projection_residual"});
  cli::SuiteContext ctx;
  ctx.domain = &d;
  ctx.params = ModelParams::from_p(0.4);
  cli::RunReport rep;
  cli::run_suite("sholo", ctx, rep);
  double off = 0.0;
  for (const auto& r : rep.results)
    if (r.name == "sholo_projection_residual") off = r.residual.value_or(0.0);
  crit.pass = crit.pass && off > 1e-6;
  crit.detail += "; p=0.4 control " + fmt("%.3g", off);
  return crit;
}

Outcome residue() {
  LatticeDomain d(3, 3);
  auto o = suite("residue", d, ModelParams::critical(),
                 {"two_point_residue_jump", "boundary_corner_unit_extension", "residue_factorization"});
  o.detail += " (jump over the 16 corners with two in-domain mid-edges, unit extension on the 16 with one; "
              "the 4 outward extreme corners have none)";
  return o;
}

Outcome pfaffian() {
  LatticeDomain d(3, 3);
  cli::SuiteContext ctx;
  ctx.domain = &d;
  cli::RunReport rep;
  cli::run_suite("pfaffian", ctx, rep);
  int n = 0;
  bool ok = true;
  double worst = 0.0;
  for (const auto& r : rep.results) {
    if (r.name.rfind("pfaffian[", 0) != 0 || !r.pass) continue;
    ++n;
    ok = ok && *r.pass;
    worst = std::max(worst, r.residual.value_or(0.0));
  }
  return {ok && n >= 5, std::to_string(n) + " quadruples, worst " + fmt("%.3g", worst)};
}

Outcome exploration() {
  LatticeDomain d(2, 2);
  const auto pm = ModelParams::critical();
  std::vector<int> roots;
  for (int c = 0; c < d.corner_count(); ++c)
    if (d.on_boundary_ring(c)) roots.push_back(c);
  std::vector<std::vector<int>> sets;
  for (int a = 0; a < d.corner_count(); ++a)
    for (int b = 0; b < d.corner_count(); ++b)
      if (a != b) sets.push_back({a, b});
  for (int a = 0; a < d.corner_count(); ++a)
    for (int b = a + 1; b < d.corner_count(); ++b)
      for (int c = b + 1; c < d.corner_count(); ++c)
        for (int e = c + 1; e < d.corner_count(); ++e) sets.push_back({a, b, c, e});
  const auto f = fermion_exact_batch(d, pm, sets);
  double worst = 0.0;
  long root_mismatch = 0;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    auto r = enumerate_reduce(d, pm, [&](const ConfigContext& c) {
      const int w = exploration_tree_winding(d, c.loops(), sets[i], roots[0]);
      for (int root : roots) root_mismatch += exploration_tree_winding(d, c.loops(), sets[i], root) != w;
      return std::complex<double>(w);
    });
    worst = std::max(worst, std::abs(r.mean().real() - f[i]));
  }
  return {worst <= 1e-12 && root_mismatch == 0,
          std::to_string(sets.size()) + " sets x " + std::to_string(roots.size()) + " roots, worst " +
              fmt("%.3g", worst) + ", root mismatches " + std::to_string(root_mismatch)};
}

Outcome monte_carlo() {
  LatticeDomain d(3, 3);
  const auto pm = ModelParams::critical();
  const std::vector<int> two{d.corner_by_spec(0, 0, Quadrant::NE), d.corner_by_spec(2, 1, Quadrant::SW)};
  Outcome o{true, {}};
  std::uint64_t seed = 2024;
  for (const auto& ins : {two, quad(d)}) {
    const double exact = fermion_exact(d, pm, ins).value.real();
    const auto mc = fermion_mc(d, pm, ins, 100000, seed++);
    const double z = std::abs(mc.value.real() - exact) / mc.stderr_value;
    o.pass = o.pass && mc.stderr_value > 0.0 && z <= 4.0;
    o.detail += (o.detail.empty() ? "" : "; ") + std::to_string(ins.size()) + "-point " + fmt("%.6f", mc.value.real()) +
                " +- " + fmt("%.2g", mc.stderr_value) + " vs " + fmt("%.6f", exact) + " (" + fmt("%.2f", z) + " sigma)";
  }
  return o;
}

struct Criterion {
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"loop-events lemma on 2x2 and 3x3", 1, loop_events_lemma},
      {"Euler loop count on 3x3", 1, euler},
      {"winding phase well-defined, antisymmetric, composable on 3x3", 10, winding},
      {"observable antisymmetry under 24 permutations", 30, antisymmetry},
      {"FK and Ising observables agree", 120, equivalence},
      {"defect-line independence", 10, line_independence},
      {"Edwards-Sokal coupling marginals and chain stationarity", 60, coupling},
      {"s-holomorphicity at criticality with off-critical control", 60, sholo},
      {"residue lemmas", 60, residue},
      {"Pfaffian identity on 5 quadruples", 120, pfaffian},
      {"exploration-tree identity and root invariance", 10, exploration},
      {"Monte Carlo within 4 stderr of enumeration", 60, monte_carlo},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= criteria[i].budget_s;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::printf("%s %2zu %s [%.2fs / %.0fs%s] %s\n", pass ? "PASS" : "FAIL", i + 1, criteria[i].name, secs,
                criteria[i].budget_s, in_time ? "" : ", over budget", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed ? 1 : 0;
}
