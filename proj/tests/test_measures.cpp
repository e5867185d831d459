#include <doctest.h>

#include <cmath>
#include <map>

#include "fkf/configuration.hpp"
#include "fkf/error.hpp"
#include "fkf/measures.hpp"
#include "oracle/brute.hpp"

using namespace fkf;

TEST_CASE("parameter dictionary") {
  const auto c = ModelParams::from_beta(critical_beta());
  CHECK(std::abs(c.t - 1.0) < 1e-15);
  CHECK(std::abs(c.p - (2.0 - std::sqrt(2.0))) < 1e-15);
  CHECK(std::abs(critical_p() - std::sqrt(2.0) / (1.0 + std::sqrt(2.0))) < 1e-15);
  CHECK(c.is_critical());
  for (double p : {0.1, 0.3, 0.5, 0.9}) {
    auto m = ModelParams::from_p(p);
    CHECK(std::abs(m.p - (1.0 - std::exp(-2.0 * m.beta))) < 1e-14);
    CHECK(std::abs(m.t - p / (1.0 - p) / std::sqrt(2.0)) < 1e-14);
    CHECK(std::abs(ModelParams::from_t(m.t).p - p) < 1e-14);
    CHECK(std::abs(ModelParams::from_beta(m.beta).p - p) < 1e-14);
  }
  CHECK_FALSE(ModelParams::from_p(0.4).is_critical());
  CHECK_THROWS_AS(ModelParams::from_p(1.0), InvalidArgument);
  CHECK_THROWS_AS(ModelParams::from_t(0.0), InvalidArgument);
  CHECK_THROWS_AS(ModelParams::from_beta(-1.0), InvalidArgument);
}

TEST_CASE("weight examples") {
  LatticeDomain d(2, 2);
  const auto half = ModelParams::from_p(0.5);
  CHECK(fk_weight(d, FkConfig::all_closed(d), half) == 16.0);
  FkConfig one = FkConfig::all_closed(d);
  one.set(0, true);
  CHECK(fk_weight(d, one, half) == 8.0);
  const auto crit = ModelParams::critical();
  CHECK(loop_weight(d, FkConfig::all_closed(d), crit) == doctest::Approx(4.0));
  CHECK(loop_weight(d, FkConfig::all_open(d), crit) == doctest::Approx(2.0));
  const double b = 0.37;
  auto pb = ModelParams::from_beta(b);
  CHECK(ising_weight(d, SpinConfig::all_plus(d), pb) == doctest::Approx(std::exp(4 * b)));
  CHECK(ising_weight(d, SpinConfig::from_mask(d, 0b0110), pb) == doctest::Approx(std::exp(-4 * b)));
}

TEST_CASE("partition functions against the oracle") {
  LatticeDomain d(2, 2);
  oracle::Dom od(2, 2);
  const auto pm = ModelParams::critical();
  double z = 0.0, zo = 0.0;
  for (std::uint64_t m = 0; m < 16; ++m) {
    z += fk_weight(d, FkConfig::from_mask(d, m), pm);
    zo += oracle::fk_weight(od, m, pm.p);
  }
  // the oracle uses p^|w| (1-p)^(|E|-|w|) 2^k, i.e. the same law times (1-p)^|E|
  CHECK(z * std::pow(1.0 - pm.p, 4) == doctest::Approx(zo).epsilon(1e-14));
  double zi = 0.0;
  for (std::uint64_t m = 0; m < 16; ++m) zi += ising_weight(d, SpinConfig::from_mask(d, m), pm);
  double zref = 0.0;
  for (std::uint64_t m = 0; m < 16; ++m) {
    int en = 0;
    for (auto& [a, bb] : od.E) en += (((m >> od.vid(a[0], a[1])) & 1) ? -1 : 1) * (((m >> od.vid(bb[0], bb[1])) & 1) ? -1 : 1);
    zref += std::exp(pm.beta * en);
  }
  CHECK(zi == doctest::Approx(zref).epsilon(1e-14));
}

TEST_CASE("loop weight is proportional to FK weight on 3x3") {
  LatticeDomain d(3, 3);
  for (double p : {0.3, critical_p(), 0.7}) {
    const auto pm = ModelParams::from_p(p);
    const double r0 = loop_weight(d, FkConfig::all_closed(d), pm) / fk_weight(d, FkConfig::all_closed(d), pm);
    double worst = 0.0;
    for (std::uint64_t m = 0; m < (1u << d.edge_count()); ++m) {
      auto cfg = FkConfig::from_mask(d, m);
      worst = std::max(worst, std::abs(loop_weight(d, cfg, pm) / fk_weight(d, cfg, pm) / r0 - 1.0));
    }
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("disorder energy") {
  LatticeDomain d(3, 3);
  auto line = route_defect_line(d, d.corner_by_spec(0, 0, Quadrant::NE), d.corner_by_spec(2, 1, Quadrant::NE));
  REQUIRE(line.crossed_edges.size() == 2);
  CHECK(disorder_energy(d, SpinConfig::all_plus(d), line) == static_cast<int>(line.crossed_edges.size()));
  const int e = line.crossed_edges.front();
  SpinConfig s = SpinConfig::all_plus(d);
  // flip the endpoint whose other edges are not crossed
  int v = d.edge(e).a;
  for (int cand : {d.edge(e).a, d.edge(e).b}) {
    int hits = 0;
    for (int ce : line.crossed_edges) hits += d.edge(ce).a == cand || d.edge(ce).b == cand;
    if (hits == 1) v = cand;
  }
  s.spins[v] = -1;
  CHECK(disorder_energy(d, s, line) == static_cast<int>(line.crossed_edges.size()) - 2);
}

TEST_CASE("defect routing") {
  LatticeDomain d(3, 3);
  // corners sharing a dual vertex
  auto same = route_defect_line(d, d.corner_by_spec(0, 0, Quadrant::NE), d.corner_by_spec(1, 1, Quadrant::SW));
  CHECK(same.dual_path.size() == 1);
  CHECK(same.crossed_edges.empty());
  auto row = route_defect_line(d, d.corner_by_spec(0, 0, Quadrant::NE), d.corner_by_spec(2, 0, Quadrant::NE));
  for (int v : row.dual_path) CHECK(d.dual(v).doubled.y == d.dual(row.dual_path.front()).doubled.y);
  CHECK(row.crossed_edges.size() == 2);
  // crossed edges agree with the oracle
  oracle::Dom od(3, 3);
  for (int a = 0; a < d.corner_count(); a += 5)
    for (int b = 0; b < d.corner_count(); b += 3) {
      if (a == b) continue;
      auto l = route_defect_line(d, a, b);
      auto path = oracle::route(od, od.corner(a), od.corner(b));
      CHECK(l.crossed_edges == oracle::crossed(od, path));
      CHECK(line_turning_eighths(d, l) == oracle::line_turning(od.corner(a), od.corner(b), path));
      CHECK(defect_pair_sign(d, l) == oracle::pair_sign(od.corner(a), od.corner(b), path));
    }
  CHECK_THROWS_AS(make_defect_line(d, 0, 5, {0, 7}), InvalidArgument);
  const int c1 = d.corner_by_spec(0, 0, Quadrant::NE);
  const int c2 = d.corner_by_spec(1, 0, Quadrant::NE);
  const int w1 = d.corner(c1).w, w2 = d.corner(c2).w;
  CHECK_THROWS_AS(make_defect_line(d, c1, c2, {w1, w2, w1, w2}), InvalidArgument);
}

TEST_CASE("multi-line routing is disjoint") {
  LatticeDomain d(3, 3);
  std::vector<int> ins{d.corner_by_spec(0, 0, Quadrant::NE), d.corner_by_spec(2, 0, Quadrant::NE),
                       d.corner_by_spec(0, 2, Quadrant::NE), d.corner_by_spec(2, 2, Quadrant::SW)};
  auto lines = route_defect_lines(d, ins);
  REQUIRE(lines.size() == 2);
  CHECK(lines_disjoint(lines));
  std::vector<int> clash{d.corner_by_spec(0, 0, Quadrant::NE), d.corner_by_spec(2, 0, Quadrant::NE),
                         d.corner_by_spec(1, 1, Quadrant::SW), d.corner_by_spec(2, 2, Quadrant::SW)};
  CHECK_THROWS_AS(route_defect_lines(d, clash), RoutingError);
}

TEST_CASE("low temperature bookkeeping") {
  LatticeDomain d(3, 3);
  auto line = route_defect_line(d, d.corner_by_spec(0, 0, Quadrant::SW), d.corner_by_spec(2, 1, Quadrant::NE));
  for (std::uint64_t m = 0; m < (1u << d.vertex_count()); ++m)
    CHECK(low_temperature_identity_holds(d, SpinConfig::from_mask(d, m), line));
}

namespace {

struct Marginals {
  std::vector<double> spin, config;
};

Marginals joint_marginals(const LatticeDomain& d, const ModelParams& pm, std::span<const DefectLine> lines) {
  Marginals out{std::vector<double>(1u << d.vertex_count(), 0.0), std::vector<double>(1u << d.edge_count(), 0.0)};
  double z = 0.0;
  for (std::uint64_t s = 0; s < out.spin.size(); ++s)
    for (std::uint64_t m = 0; m < out.config.size(); ++m) {
      const double w = es_joint_weight(d, SpinConfig::from_mask(d, s), FkConfig::from_mask(d, m), pm, lines);
      out.spin[s] += w;
      out.config[m] += w;
      z += w;
    }
  for (auto& x : out.spin) x /= z;
  for (auto& x : out.config) x /= z;
  return out;
}

}  // namespace

TEST_CASE("Edwards-Sokal marginals on 2x2") {
  LatticeDomain d(2, 2);
  for (double p : {0.2, critical_p(), 0.8}) {
    const auto pm = ModelParams::from_p(p);
    auto mg = joint_marginals(d, pm, {});
    double zi = 0.0, zf = 0.0;
    for (std::uint64_t s = 0; s < 16; ++s) zi += ising_weight(d, SpinConfig::from_mask(d, s), pm);
    for (std::uint64_t m = 0; m < 16; ++m) zf += fk_weight(d, FkConfig::from_mask(d, m), pm);
    for (std::uint64_t s = 0; s < 16; ++s)
      CHECK(std::abs(mg.spin[s] - ising_weight(d, SpinConfig::from_mask(d, s), pm) / zi) < 1e-12);
    for (std::uint64_t m = 0; m < 16; ++m)
      CHECK(std::abs(mg.config[m] - fk_weight(d, FkConfig::from_mask(d, m), pm) / zf) < 1e-12);
  }
}

TEST_CASE("Edwards-Sokal marginals with a defect line on 2x2") {
  LatticeDomain d(2, 2);
  const auto pm = ModelParams::critical();
  for (auto [a, b] : {std::pair{0, 15}, std::pair{1, 10}, std::pair{4, 13}}) {
    const DefectLine lines[1] = {route_defect_line(d, a, b)};
    auto mg = joint_marginals(d, pm, lines);
    double zi = 0.0, zf = 0.0;
    std::vector<double> pi(16), rho(16);
    for (std::uint64_t s = 0; s < 16; ++s) {
      const auto sp = SpinConfig::from_mask(d, s);
      pi[s] = std::exp(-2.0 * pm.beta * disorder_energy(d, sp, lines[0])) * ising_weight(d, sp, pm);
      zi += pi[s];
    }
    for (std::uint64_t m = 0; m < 16; ++m) {
      const auto cfg = FkConfig::from_mask(d, m);
      const auto cl = clusters(d, cfg);
      rho[m] = cl.dual_label[d.corner(a).w] == cl.dual_label[d.corner(b).w] ? fk_weight(d, cfg, pm) : 0.0;
      zf += rho[m];
    }
    for (std::uint64_t s = 0; s < 16; ++s) CHECK(std::abs(mg.spin[s] - pi[s] / zi) < 1e-12);
    for (std::uint64_t m = 0; m < 16; ++m) CHECK(std::abs(mg.config[m] - rho[m] / zf) < 1e-12);
  }
}

TEST_CASE("spin sampler given clusters") {
  LatticeDomain d(2, 2);
  CounterRng rng(3, 0);
  std::map<std::vector<int>, int> seen_open, seen_closed;
  for (int i = 0; i < 4000; ++i) {
    seen_open[es_sample_spins_given_fk(d, FkConfig::all_open(d), rng).spins]++;
    seen_closed[es_sample_spins_given_fk(d, FkConfig::all_closed(d), rng).spins]++;
  }
  CHECK(seen_open.size() == 2);
  CHECK(seen_closed.size() == 16);
  // per-cluster sign frequency within 3 sigma of 1/2
  LatticeDomain big(3, 3);
  FkConfig cfg = FkConfig::from_hex(big, "0x3A7");
  const int n = 100000;
  int plus = 0;
  for (int i = 0; i < n; ++i) plus += es_sample_spins_given_fk(big, cfg, rng).spins[0] == 1;
  CHECK(std::abs(plus - n / 2.0) < 3.0 * std::sqrt(n * 0.25));
}

TEST_CASE("edge sampler given spins") {
  LatticeDomain d(2, 2);
  CounterRng rng(5, 1);
  const SpinConfig checker = SpinConfig::from_mask(d, 0b0110);
  for (int i = 0; i < 100; ++i) CHECK(es_sample_fk_given_spins(d, checker, ModelParams::from_p(0.9), rng).open_count() == 0);
  int all_open = 0;
  for (int i = 0; i < 1000; ++i)
    all_open += es_sample_fk_given_spins(d, SpinConfig::all_plus(d), ModelParams::from_p(0.999999), rng).open_count() == 4;
  CHECK(all_open >= 999);
}

TEST_CASE("defect sampler") {
  LatticeDomain d(3, 3);
  CounterRng rng(9, 0);
  const int a = d.corner_by_spec(0, 0, Quadrant::NE), b = d.corner_by_spec(1, 1, Quadrant::SW);
  const DefectLine empty[1] = {route_defect_line(d, a, b)};
  REQUIRE(empty[0].crossed_edges.empty());
  auto s = es_sample_spins_given_fk_with_defect(d, FkConfig::all_open(d), empty, rng);
  REQUIRE(s);
  for (int v = 1; v < d.vertex_count(); ++v) CHECK(s->spins[v] == s->spins[0]);
  // one crossed edge, both endpoints in one cluster that is a tree
  const int c1 = d.corner_by_spec(0, 0, Quadrant::NE), c2 = d.corner_by_spec(1, 0, Quadrant::NE);
  const DefectLine one[1] = {route_defect_line(d, c1, c2)};
  REQUIRE(one[0].crossed_edges.size() == 1);
  FkConfig tree = FkConfig::all_closed(d);
  tree.set(one[0].crossed_edges[0], true);
  for (int i = 0; i < 50; ++i) {
    auto t = es_sample_spins_given_fk_with_defect(d, tree, one, rng);
    REQUIRE(t);
    const auto& e = d.edge(one[0].crossed_edges[0]);
    CHECK(t->spins[e.a] == -t->spins[e.b]);
  }
}
