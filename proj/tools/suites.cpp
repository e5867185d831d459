#include "suites.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "fkf/configuration.hpp"
#include "fkf/error.hpp"
#include "fkf/holomorphy.hpp"
#include "fkf/observables.hpp"
#include "fkf/winding.hpp"

namespace fkf::cli {

namespace {

CheckResult check(std::string name, double residual, double tol, std::string note = {}) {
  CheckResult r;
  r.name = std::move(name);
  r.residual = residual;
  r.tolerance = tol;
  r.pass = residual <= tol;
  r.note = std::move(note);
  return r;
}

CheckResult count_check(std::string name, std::int64_t failures, std::int64_t checked) {
  CheckResult r = check(std::move(name), static_cast<double>(failures), 0.0);
  r.n_samples = checked;
  return r;
}

void require_enumerable(const LatticeDomain& d, const EnumerationOptions& opts) {
  EnumerationPlan::make(d, opts);
}

std::uint64_t config_space(const LatticeDomain& d) { return std::uint64_t{1} << d.edge_count(); }

bool touches_mid_edges(const LatticeDomain& d, int corner, int other) {
  for (int m : d.corner(corner).mid_edges)
    if (m != kNone && mid_edge_touches(d, m, std::span<const int>(&other, 1))) return true;
  return false;
}

bool compatible(const LatticeDomain& d, std::span<const int> picked, int c) {
  for (int p : picked) {
    const int pair[2] = {p, c};
    if (!corners_spaced(d, pair)) return false;
    if (touches_mid_edges(d, p, c) || touches_mid_edges(d, c, p)) return false;
  }
  return true;
}

std::string corner_label(const LatticeDomain& d, int c) {
  CornerSpec s = d.corner_spec(c);
  return std::to_string(s.x) + "," + std::to_string(s.y) + "," + std::string(quadrant_name(s.quadrant));
}

std::string set_label(const LatticeDomain& d, std::span<const int> cs) {
  std::string out;
  for (int c : cs) out += (out.empty() ? "" : ";") + corner_label(d, c);
  return out;
}

void suite_lemma_loop(const SuiteContext& ctx, RunReport& rep) {
  const LatticeDomain& d = *ctx.domain;
  require_enumerable(d, ctx.enumeration);
  std::int64_t mismatches = 0, pairs = 0, euler = 0;
  for (std::uint64_t mask = 0; mask < config_space(d); ++mask) {
    const FkConfig cfg = FkConfig::from_mask(d, mask);
    const LoopSet loops = extract_loops(d, cfg);
    const ClusterLabels cl = clusters(d, cfg);
    for (int c1 = 0; c1 < d.corner_count(); ++c1)
      for (int c2 = c1 + 1; c2 < d.corner_count(); ++c2) {
        const Corner &a = d.corner(c1), &b = d.corner(c2);
        const bool rhs = cl.primal_label[a.u] == cl.primal_label[b.u] && cl.dual_label[a.w] == cl.dual_label[b.w];
        mismatches += corners_connected(loops, c1, c2) != rhs;
        ++pairs;
      }
    euler += loops.loop_count() != cl.primal_count + cl.dual_count - 1;
  }
  rep.results.push_back(count_check("loop_events_lemma", mismatches, pairs));
  rep.results.push_back(count_check("euler_loop_count", euler, static_cast<std::int64_t>(config_space(d))));
}

void suite_winding(const SuiteContext& ctx, RunReport& rep) {
  const LatticeDomain& d = *ctx.domain;
  require_enumerable(d, ctx.enumeration);
  std::int64_t bad_exponent = 0, bad_antisym = 0, bad_compose = 0, bad_full = 0;
  std::int64_t pairs = 0, triples = 0;
  LoopSet loops;
  for (std::uint64_t mask = 0; mask < config_space(d); ++mask) {
    extract_loops(d, FkConfig::from_mask(d, mask), loops);
    for (int l = 0; l < loops.loop_count(); ++l) {
      const auto cyc = loops.loop(l);
      const int len = static_cast<int>(cyc.size());
      bad_full += std::abs(loops.total_eighths(l)) != 8;
      if (len < 2) continue;
      std::vector<int> phi(static_cast<std::size_t>(len) * len, 0);
      for (int i = 0; i < len; ++i)
        for (int j = 0; j < len; ++j) {
          if (i == j) continue;
          const int m = d.corner(cyc[i]).orientation_eighth - d.corner(cyc[j]).orientation_eighth +
                        loops.arc_eighths(cyc[i], cyc[j]);
          ++pairs;
          if (detail::mod(m, 8) != 0) {
            ++bad_exponent;
            continue;
          }
          phi[i * len + j] = detail::mod(m / 8, 2) ? -1 : 1;
        }
      for (int i = 0; i < len; ++i)
        for (int j = i + 1; j < len; ++j) bad_antisym += phi[i * len + j] * phi[j * len + i] != -1;
      for (int i = 0; i < len; ++i)
        for (int j = 1; j < len; ++j)
          for (int k = j + 1; k < len; ++k) {
            // i, i+j, i+k appear in this cyclic order walking forward from i
            const int a = i, b = (i + j) % len, c = (i + k) % len;
            ++triples;
            bad_compose += phi[a * len + b] * phi[b * len + c] != phi[a * len + c];
          }
    }
  }
  rep.results.push_back(count_check("phase_exponent_multiple_of_8", bad_exponent, pairs));
  rep.results.push_back(count_check("complementary_arcs_antisymmetric", bad_antisym, pairs / 2));
  rep.results.push_back(count_check("phase_composition", bad_compose, triples));
  rep.results.push_back(count_check("full_loop_turning", bad_full, static_cast<std::int64_t>(config_space(d))));
}

void suite_equivalence(const SuiteContext& ctx, RunReport& rep) {
  const LatticeDomain& d = *ctx.domain;
  std::vector<std::vector<int>> sets;
  if (!ctx.corners.empty()) {
    sets.push_back(ctx.corners);
  } else {
    if (d.corner_count() <= 36)
      for (int a = 0; a < d.corner_count(); ++a)
        for (int b = 0; b < d.corner_count(); ++b)
          if (a != b) sets.push_back({a, b});
    if (d.width() >= 3 && d.height() >= 3)
      for (const auto& q : spaced_quadruples(d, 8, ctx.seed)) {
        try {
          route_defect_lines(d, q);
          sets.push_back(q);
          break;
        } catch (const RoutingError&) {
        }
      }
  }
  const auto fk = fermion_exact_batch(d, ctx.params, sets, ctx.enumeration);
  double worst2 = 0.0;
  std::int64_t n2 = 0;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const auto& s = sets[i];
    std::vector<DefectLine> lines;
    if (s.size() == 2) lines.push_back(route_defect_line(d, s[0], s[1]));
    else lines = route_defect_lines(d, s);
    const double ising = ising_fermion_exact(d, ctx.params, s, lines, ctx.enumeration.max_edges).value.real();
    const double diff = std::abs(fk[i] - ising);
    if (s.size() == 2 && ctx.corners.empty()) {
      worst2 = std::max(worst2, diff);
      ++n2;
    } else {
      CheckResult r = check("fk_vs_ising[" + set_label(d, s) + "]", diff, 1e-10);
      r.value_re = fk[i];
      rep.results.push_back(r);
    }
  }
  if (n2 > 0) {
    CheckResult r = check("fk_vs_ising_all_pairs", worst2, 1e-10);
    r.n_samples = n2;
    rep.results.push_back(r);
  }
  // low-temperature bookkeeping on one line per set
  std::int64_t bad = 0, checked = 0;
  for (const auto& s : sets) {
    if (s.size() != 2 || checked > 200000) continue;
    const DefectLine line = route_defect_line(d, s[0], s[1]);
    if (d.vertex_count() > 16) continue;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << d.vertex_count()); ++m) {
      bad += !low_temperature_identity_holds(d, SpinConfig::from_mask(d, m), line);
      ++checked;
    }
  }
  if (checked > 0) rep.results.push_back(count_check("low_temperature_bookkeeping", bad, checked));
}

MidEdgeField field_for(const SuiteContext& ctx, std::vector<int> fixed) {
  FieldOptions fo;
  fo.require_critical = false;
  fo.enumeration = ctx.enumeration;
  return build_midedge_field(*ctx.domain, ctx.params, fixed, fo);
}

void suite_sholo(const SuiteContext& ctx, RunReport& rep) {
  const LatticeDomain& d = *ctx.domain;
  std::vector<int> fixed = ctx.corners;
  if (fixed.empty()) fixed = {d.corner_by_spec(d.width() / 2, d.height() / 2, Quadrant::NE)};
  const bool critical = ctx.params.is_critical();
  const std::string note = critical ? "" : "off-critical parameters: negative control, failure expected";
  const MidEdgeField field = field_for(ctx, fixed);
  rep.results.push_back(check("midedge_pairing_agreement[" + set_label(d, fixed) + "]", field.max_pairing_discrepancy,
                              1e-12, note));
  double worst = 0.0;
  const auto eligible = sholo_eligible_corners(d, field);
  for (int c : eligible) worst = std::max(worst, sholo_residual(d, field, c));
  CheckResult r = check("sholo_projection_residual", worst, 1e-12, note);
  r.n_samples = static_cast<std::int64_t>(eligible.size());
  rep.results.push_back(r);
  double cauchy = 0.0;
  const auto sums = cauchy_sums(d, field);
  for (const auto& s : sums) cauchy = std::max(cauchy, s.residual);
  if (!sums.empty()) {
    CheckResult c = check("discrete_cauchy_sum", cauchy, 1e-12, note);
    c.n_samples = static_cast<std::int64_t>(sums.size());
    rep.results.push_back(c);
  }
}

void suite_residue(const SuiteContext& ctx, RunReport& rep) {
  const LatticeDomain& d = *ctx.domain;
  double worst_jump = 0.0, worst_boundary = 0.0;
  std::int64_t interior = 0, boundary = 0;
  for (int c = 0; c < d.corner_count(); ++c) {
    const MidEdgeField field = field_for(ctx, {c});
    const auto [plus, minus] = f_plus_minus(d, field, 0);
    if (!std::isnan(plus.real()) && !std::isnan(minus.real())) {
      worst_jump = std::max(worst_jump, std::abs(std::abs(plus - minus) - 2.0));
      ++interior;
    } else if (!std::isnan(plus.real()) || !std::isnan(minus.real())) {
      const auto v = std::isnan(plus.real()) ? minus : plus;
      worst_boundary = std::max(worst_boundary, std::abs(std::abs(v) - 1.0));
      ++boundary;
    }
  }
  CheckResult j = check("two_point_residue_jump", worst_jump, 1e-12, "corners with two in-domain mid-edges");
  j.n_samples = interior;
  rep.results.push_back(j);
  if (boundary > 0) {
    CheckResult b = check("boundary_corner_unit_extension", worst_boundary, 1e-12, "single in-domain mid-edge");
    b.n_samples = boundary;
    rep.results.push_back(b);
  }
  std::vector<int> fixed = ctx.corners;
  if (fixed.empty() && d.width() >= 3 && d.height() >= 3) fixed = greedy_spaced_corners(d, 3, true);
  if (fixed.size() >= 3 && fixed.size() % 2 == 1) {
    FieldOptions fo;
    fo.require_critical = false;
    fo.enumeration = ctx.enumeration;
    double worst = 0.0;
    for (const auto& rc : residue_factorization_check(d, ctx.params, fixed, fo)) worst = std::max(worst, rc.difference);
    rep.results.push_back(check("residue_factorization[" + set_label(d, fixed) + "]", worst, 1e-10));
    rep.results.push_back(check("r_function_vanishes[" + set_label(d, fixed) + "]",
                                r_function_max(d, ctx.params, fixed, fo), 1e-10));
  }
}

void suite_pfaffian(const SuiteContext& ctx, RunReport& rep) {
  const LatticeDomain& d = *ctx.domain;
  std::vector<std::vector<int>> sets;
  if (!ctx.corners.empty()) sets.push_back(ctx.corners);
  else sets = spaced_quadruples(d, 5, ctx.seed);
  const bool critical = ctx.params.is_critical();
  FieldOptions fo;
  fo.require_critical = false;
  fo.enumeration = ctx.enumeration;
  for (const auto& s : sets) {
    const PfaffianReport pr = pfaffian_identity_check(d, ctx.params, s, fo);
    CheckResult r;
    r.name = "pfaffian[" + set_label(d, s) + "]";
    r.value_re = pr.lhs;
    r.residual = pr.difference;
    r.tolerance = 1e-10;
    if (critical) r.pass = pr.difference <= 1e-10;
    else r.note = "off-critical: recorded, not asserted";
    rep.results.push_back(r);
  }
}

void suite_exploration(const SuiteContext& ctx, RunReport& rep) {
  const LatticeDomain& d = *ctx.domain;
  require_enumerable(d, ctx.enumeration);
  std::vector<std::vector<int>> sets;
  if (!ctx.corners.empty()) {
    sets.push_back(ctx.corners);
  } else {
    sets.push_back({d.corner_by_spec(0, 0, Quadrant::NE), d.corner_by_spec(d.width() - 1, d.height() - 1, Quadrant::SW)});
    auto q = spaced_quadruples(d, 1, ctx.seed);
    if (!q.empty()) sets.push_back(q.front());
  }
  std::vector<int> roots;
  for (int c = 0; c < d.corner_count(); ++c)
    if (d.on_boundary_ring(c)) roots.push_back(c);
  std::int64_t variant = 0, mismatch = 0, checked = 0;
  LoopSet loops;
  for (std::uint64_t mask = 0; mask < config_space(d); ++mask) {
    extract_loops(d, FkConfig::from_mask(d, mask), loops);
    for (const auto& s : sets) {
      const int base = config_contribution(d, loops, s);
      const int first = exploration_tree_winding(d, loops, s, roots.front());
      for (int r : roots) {
        const int w = r == roots.front() ? first : exploration_tree_winding(d, loops, s, r);
        variant += w != first;
        mismatch += w != base;
        ++checked;
      }
    }
  }
  rep.results.push_back(count_check("root_invariance", variant, checked));
  rep.results.push_back(count_check("tree_winding_equals_contribution", mismatch, checked));
  for (const auto& s : sets) {
    EnumerationOptions eo = ctx.enumeration;
    eo.needs_loops = true;
    const int root = roots.front();
    auto res = enumerate_reduce(
        d, ctx.params,
        [&](const ConfigContext& c) { return std::complex<double>(exploration_tree_winding(d, c.loops(), s, root)); }, eo);
    const double f = fermion_exact(d, ctx.params, s, ctx.enumeration).value.real();
    CheckResult r = check("expected_tree_winding[" + set_label(d, s) + "]", std::abs(res.mean().real() - f), 1e-12);
    r.value_re = f;
    rep.results.push_back(r);
  }
}

void suite_coupling(const SuiteContext& ctx, RunReport& rep) {
  const LatticeDomain& d = *ctx.domain;
  const ModelParams& pm = ctx.params;
  const int nv = d.vertex_count(), ne = d.edge_count();
  if (nv + ne > 24) throw EnumerationCapExceeded("coupling suite enumerates spins and edges jointly; domain too large");
  const std::uint64_t ns = std::uint64_t{1} << nv, nw = std::uint64_t{1} << ne;

  DefectLine line = route_defect_line(d, d.corner_by_spec(0, 0, Quadrant::NE),
                                      d.corner_by_spec(d.width() - 1, d.height() - 1, Quadrant::SW));
  const DefectLine lines[1] = {line};

  std::vector<double> by_spin(ns, 0.0), by_config(nw, 0.0), by_spin_l(ns, 0.0), by_config_l(nw, 0.0);
  double z = 0.0, zl = 0.0;
  for (std::uint64_t s = 0; s < ns; ++s) {
    const SpinConfig sp = SpinConfig::from_mask(d, s);
    for (std::uint64_t m = 0; m < nw; ++m) {
      const FkConfig cfg = FkConfig::from_mask(d, m);
      const double w = es_joint_weight(d, sp, cfg, pm);
      const double wl = es_joint_weight(d, sp, cfg, pm, lines);
      by_spin[s] += w;
      by_config[m] += w;
      by_spin_l[s] += wl;
      by_config_l[m] += wl;
      z += w;
      zl += wl;
    }
  }
  double zi = 0.0, zil = 0.0, zf = 0.0, zfl = 0.0;
  std::vector<double> pi(ns), pil(ns), rho(nw), rhol(nw);
  for (std::uint64_t s = 0; s < ns; ++s) {
    const SpinConfig sp = SpinConfig::from_mask(d, s);
    pi[s] = ising_weight(d, sp, pm);
    pil[s] = pi[s] * std::exp(-2.0 * pm.beta * disorder_energy(d, sp, line));
    zi += pi[s];
    zil += pil[s];
  }
  std::int64_t frustration_mismatch = 0;
  for (std::uint64_t m = 0; m < nw; ++m) {
    const FkConfig cfg = FkConfig::from_mask(d, m);
    rho[m] = fk_weight(d, cfg, pm);
    const ClusterLabels cl = clusters(d, cfg);
    const bool connected = cl.dual_label[d.corner(line.start).w] == cl.dual_label[d.corner(line.end).w];
    rhol[m] = connected ? rho[m] : 0.0;
    zf += rho[m];
    zfl += rhol[m];
    CounterRng rng(ctx.seed, m);
    frustration_mismatch += es_sample_spins_given_fk_with_defect(d, cfg, lines, rng).has_value() != connected;
  }
  double e1 = 0.0, e2 = 0.0, e3 = 0.0, e4 = 0.0;
  for (std::uint64_t s = 0; s < ns; ++s) {
    e1 = std::max(e1, std::abs(by_spin[s] / z - pi[s] / zi));
    e3 = std::max(e3, std::abs(by_spin_l[s] / zl - pil[s] / zil));
  }
  for (std::uint64_t m = 0; m < nw; ++m) {
    e2 = std::max(e2, std::abs(by_config[m] / z - rho[m] / zf));
    e4 = std::max(e4, std::abs(by_config_l[m] / zl - rhol[m] / zfl));
  }
  rep.results.push_back(check("es_spin_marginal", e1, 1e-12));
  rep.results.push_back(check("es_config_marginal", e2, 1e-12));
  rep.results.push_back(check("es_defect_spin_marginal", e3, 1e-12));
  rep.results.push_back(check("es_defect_config_marginal", e4, 1e-12));
  rep.results.push_back(count_check("defect_frustration_iff_disconnected", frustration_mismatch, static_cast<std::int64_t>(nw)));

  // <s_x s_y> against P[x <-> y]
  std::vector<std::pair<int, int>> vpairs;
  for (int x = 0; x < nv; ++x)
    for (int y = x + 1; y < nv; ++y) vpairs.push_back({x, y});
  EnumerationOptions eo = ctx.enumeration;
  eo.needs_loops = false;
  auto conn = enumerate_reduce(
      d, pm, static_cast<int>(vpairs.size()),
      [&](const ConfigContext& c, std::span<std::complex<double>> out) {
        const ClusterLabels cl = clusters(d, c.config());
        for (std::size_t i = 0; i < vpairs.size(); ++i)
          out[i] = cl.primal_label[vpairs[i].first] == cl.primal_label[vpairs[i].second] ? 1.0 : 0.0;
      },
      eo);
  double worst = 0.0;
  for (std::size_t i = 0; i < vpairs.size(); ++i) {
    auto corr = enumerate_spins(d, pm, [&](const SpinConfig& s) {
      return static_cast<double>(s.spins[vpairs[i].first] * s.spins[vpairs[i].second]);
    });
    worst = std::max(worst, std::abs(corr.mean().real() - conn.mean(i).real()));
  }
  CheckResult r = check("spin_correlation_equals_connection", worst, 1e-12);
  r.n_samples = static_cast<std::int64_t>(vpairs.size());
  rep.results.push_back(r);

  if (nw <= 256 && ctx.sweeps > 0) {
    std::vector<double> hist(nw, 0.0);
    long n = 0;
    run_chain(d, pm, ctx.sweeps + 1000, 1000, ctx.seed, [&](const FkConfig& cfg) {
      std::uint64_t m = 0;
      for (int e = 0; e < ne; ++e)
        if (cfg.open(e)) m |= std::uint64_t{1} << e;
      hist[m] += 1.0;
      ++n;
    });
    double tv = 0.0;
    for (std::uint64_t m = 0; m < nw; ++m) tv += std::abs(hist[m] / n - rho[m] / zf);
    CheckResult t = check("chain_stationarity_tv", 0.5 * tv, 0.01);
    t.n_samples = n;
    rep.results.push_back(t);
  }
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"lemma-loop", "winding",     "equivalence", "sholo",
                                              "residue",    "pfaffian",    "exploration", "coupling"};
  return names;
}

bool is_suite(std::string_view name) {
  const auto& n = suite_names();
  return std::find(n.begin(), n.end(), name) != n.end();
}

void run_suite(std::string_view name, const SuiteContext& ctx, RunReport& report) {
  if (name == "lemma-loop") suite_lemma_loop(ctx, report);
  else if (name == "winding") suite_winding(ctx, report);
  else if (name == "equivalence") suite_equivalence(ctx, report);
  else if (name == "sholo") suite_sholo(ctx, report);
  else if (name == "residue") suite_residue(ctx, report);
  else if (name == "pfaffian") suite_pfaffian(ctx, report);
  else if (name == "exploration") suite_exploration(ctx, report);
  else if (name == "coupling") suite_coupling(ctx, report);
  else throw InvalidArgument("unknown suite '" + std::string(name) + "'");
}

std::vector<int> greedy_spaced_corners(const LatticeDomain& d, int count, bool interior_only) {
  std::vector<int> picked;
  for (int c = 0; c < d.corner_count() && static_cast<int>(picked.size()) < count; ++c) {
    const Corner& k = d.corner(c);
    if (interior_only && (k.mid_edges[0] == kNone || k.mid_edges[1] == kNone)) continue;
    if (compatible(d, picked, c)) picked.push_back(c);
  }
  if (static_cast<int>(picked.size()) < count) throw InvalidArgument("domain too small for the requested corner set");
  return picked;
}

std::vector<std::vector<int>> spaced_quadruples(const LatticeDomain& d, int count, std::uint64_t seed) {
  CounterRng rng(seed, 0x9a7d);
  std::set<std::vector<int>> seen;
  std::vector<std::vector<int>> out;
  const int nc = d.corner_count();
  for (int attempt = 0; attempt < 100000 && static_cast<int>(out.size()) < count; ++attempt) {
    std::vector<int> q;
    while (q.size() < 4) {
      const int c = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(nc));
      if (std::find(q.begin(), q.end(), c) == q.end()) q.push_back(c);
    }
    if (!corners_spaced(d, q)) continue;
    std::vector<int> key = q;
    std::sort(key.begin(), key.end());
    if (!seen.insert(key).second) continue;
    out.push_back(q);
  }
  return out;
}

}  // namespace fkf::cli
