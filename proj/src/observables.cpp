#include "fkf/observables.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "fkf/error.hpp"
#include "fkf/winding.hpp"

namespace fkf {

namespace {

void validate_corners(const LatticeDomain& d, std::span<const int> corners) {
  std::set<int> seen;
  for (int c : corners) {
    d.corner(c);
    if (!seen.insert(c).second) throw InvalidArgument("insertion corners must be distinct");
  }
}

}  // namespace

InsertionSet InsertionSet::make(const LatticeDomain& d, std::vector<int> corners) {
  validate_corners(d, corners);
  return {std::move(corners)};
}

InsertionSet InsertionSet::from_specs(const LatticeDomain& d, std::span<const CornerSpec> specs) {
  std::vector<int> corners;
  for (const auto& s : specs) corners.push_back(d.corner_by_spec(s));
  return make(d, std::move(corners));
}

bool corners_spaced(const LatticeDomain& d, std::span<const int> corners) {
  for (std::size_t i = 0; i < corners.size(); ++i)
    for (std::size_t j = i + 1; j < corners.size(); ++j) {
      const Corner& a = d.corner(corners[i]);
      const Corner& b = d.corner(corners[j]);
      if (a.u == b.u || a.w == b.w) return false;
    }
  return true;
}

bool InsertionSet::spaced(const LatticeDomain& d) const { return corners_spaced(d, corners); }

int matching_sign(std::span<const std::pair<int, int>> pairs) {
  std::vector<int> seq;
  for (auto [a, b] : pairs) {
    seq.push_back(a);
    seq.push_back(b);
  }
  int inversions = 0;
  for (std::size_t i = 0; i < seq.size(); ++i)
    for (std::size_t j = i + 1; j < seq.size(); ++j) inversions += seq[i] > seq[j];
  return inversions % 2 ? -1 : 1;
}

std::optional<Matching> sequential_matching(const LoopSet& loops, std::span<const int> insertions) {
  const int n = static_cast<int>(insertions.size());
  std::vector<char> done(n, 0);
  Matching m;
  std::vector<std::pair<int, int>> group;  // (relative position, index)
  for (int i = 0; i < n; ++i) {
    if (done[i]) continue;
    const int loop = loops.loop_of(insertions[i]);
    const int len = loops.loop_length(loop);
    const int origin = loops.position_of(insertions[i]);
    group.clear();
    for (int j = i; j < n; ++j) {
      if (loops.loop_of(insertions[j]) != loop) continue;
      done[j] = 1;
      group.push_back({detail::mod(loops.position_of(insertions[j]) - origin, len), j});
    }
    if (group.size() % 2) return std::nullopt;
    std::sort(group.begin(), group.end());
    for (std::size_t k = 0; k < group.size(); k += 2) {
      auto [a, b] = std::minmax(group[k].second, group[k + 1].second);
      m.pairs.push_back({a, b});
    }
  }
  std::sort(m.pairs.begin(), m.pairs.end());
  m.sign = matching_sign(m.pairs);
  return m;
}

int matching_contribution(const LatticeDomain& d, const LoopSet& loops, std::span<const int> insertions,
                          const Matching& m) {
  int value = m.sign;
  for (auto [a, b] : m.pairs) {
    const int ca = insertions[a], cb = insertions[b];
    if (!loops.connected(ca, cb)) return 0;
    value *= phase_from_eighths(d.corner(ca).orientation_eighth, d.corner(cb).orientation_eighth,
                                loops.arc_eighths(ca, cb));
  }
  return value;
}

int config_contribution(const LatticeDomain& d, const LoopSet& loops, std::span<const int> insertions) {
  auto m = sequential_matching(loops, insertions);
  if (!m) return 0;
  return matching_contribution(d, loops, insertions, *m);
}

ObservableValue fermion_exact(const LatticeDomain& d, const ModelParams& params, std::span<const int> insertions,
                              const EnumerationOptions& opts) {
  validate_corners(d, insertions);
  if (insertions.empty()) throw InvalidArgument("fermion_exact needs at least two insertions");
  if (insertions.size() % 2) return {{0.0, 0.0}, Mode::Exact, 0.0, 0, true};
  EnumerationOptions o = opts;
  o.needs_loops = true;
  auto res = enumerate_reduce(
      d, params, [&](const ConfigContext& ctx) { return std::complex<double>(config_contribution(d, ctx.loops(), insertions)); },
      o);
  return {res.mean(), Mode::Exact, 0.0, static_cast<std::int64_t>(res.configs), false};
}

std::vector<double> fermion_exact_batch(const LatticeDomain& d, const ModelParams& params,
                                        std::span<const std::vector<int>> sets, const EnumerationOptions& opts) {
  for (const auto& s : sets) {
    validate_corners(d, s);
    if (s.empty()) throw InvalidArgument("empty insertion set");
  }
  EnumerationOptions o = opts;
  o.needs_loops = true;
  auto res = enumerate_reduce(
      d, params, static_cast<int>(sets.size()),
      [&](const ConfigContext& ctx, std::span<std::complex<double>> out) {
        for (std::size_t i = 0; i < sets.size(); ++i)
          if (sets[i].size() % 2 == 0) out[i] = config_contribution(d, ctx.loops(), sets[i]);
      },
      o);
  std::vector<double> values;
  for (std::size_t i = 0; i < sets.size(); ++i) values.push_back(res.mean(i).real());
  return values;
}

std::complex<double> smirnov_complexified(const LatticeDomain& d, const ModelParams& params, int c1, int c2,
                                          const EnumerationOptions& opts) {
  const int pair[2] = {c1, c2};
  const double f = fermion_exact(d, params, pair, opts).value.real();
  const PhaseSixteenth root = (PhaseEighth(2) / d.corner_orientation(c2)).principal_sqrt();
  return root.value() * f;
}

double ising_pair_value(const LatticeDomain& d, const ModelParams& params, const SpinConfig& spins,
                        const DefectLine& line) {
  const int sign = defect_pair_sign(d, line);
  const int su = spins.spins[d.corner(line.start).u] * spins.spins[d.corner(line.end).u];
  return sign * su * std::exp(-2.0 * params.beta * disorder_energy(d, spins, line));
}

ObservableValue ising_fermion_exact(const LatticeDomain& d, const ModelParams& params, std::span<const int> insertions,
                                    std::span<const DefectLine> lines, int max_vertices) {
  validate_corners(d, insertions);
  if (insertions.empty()) throw InvalidArgument("ising_fermion_exact needs at least two insertions");
  if (insertions.size() % 2) return {{0.0, 0.0}, Mode::Exact, 0.0, 0, true};
  if (lines.size() * 2 != insertions.size()) throw InvalidArgument("need one defect line per insertion pair");
  for (std::size_t j = 0; j < lines.size(); ++j)
    if (lines[j].start != insertions[2 * j] || lines[j].end != insertions[2 * j + 1])
      throw InvalidArgument("defect line ends do not match the insertion pairs");
  if (!lines_disjoint(lines)) throw InvalidArgument("defect lines overlap");
  std::vector<int> signs;
  for (const auto& l : lines) signs.push_back(defect_pair_sign(d, l));
  const double beta = params.beta;
  auto res = enumerate_spins(
      d, params,
      [&](const SpinConfig& s) {
        double v = 1.0;
        for (std::size_t j = 0; j < lines.size(); ++j) {
          const int su = s.spins[d.corner(lines[j].start).u] * s.spins[d.corner(lines[j].end).u];
          v *= signs[j] * su * std::exp(-2.0 * beta * disorder_energy(d, s, lines[j]));
        }
        return v;
      },
      max_vertices);
  return {res.mean(), Mode::Exact, 0.0, static_cast<std::int64_t>(res.configs), false};
}

ObservableValue ising_fermion_exact(const LatticeDomain& d, const ModelParams& params, std::span<const int> insertions) {
  if (insertions.size() % 2) return {{0.0, 0.0}, Mode::Exact, 0.0, 0, true};
  auto lines = route_defect_lines(d, insertions);
  return ising_fermion_exact(d, params, insertions, lines);
}

EquivalenceReport check_equivalence(const LatticeDomain& d, const ModelParams& params, std::span<const int> insertions,
                                    const EnumerationOptions& opts) {
  EquivalenceReport rep;
  auto lines = route_defect_lines(d, insertions);
  rep.fk = fermion_exact(d, params, insertions, opts).value.real();
  rep.ising = ising_fermion_exact(d, params, insertions, lines, opts.max_edges).value.real();
  rep.difference = std::abs(rep.fk - rep.ising);
  auto check = [&](const SpinConfig& s) {
    for (const auto& l : lines) {
      rep.bookkeeping_ok = rep.bookkeeping_ok && low_temperature_identity_holds(d, s, l);
      ++rep.bookkeeping_checked;
    }
  };
  if (d.vertex_count() <= 16) {
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << d.vertex_count()); ++m) check(SpinConfig::from_mask(d, m));
  } else {
    CounterRng rng(0x5eed, 0);
    SpinConfig s = SpinConfig::all_plus(d);
    for (int k = 0; k < 4096; ++k) {
      for (auto& v : s.spins) v = rng.coin() ? 1 : -1;
      check(s);
    }
  }
  return rep;
}

ObservableValue fermion_mc(const LatticeDomain& d, const ModelParams& params, std::span<const int> insertions,
                           long n_sweeps, std::uint64_t seed, int batches) {
  validate_corners(d, insertions);
  if (n_sweeps <= 0) throw InvalidArgument("sweep count must be positive");
  if (batches < 32) throw InvalidArgument("batch means need at least 32 batches");
  if (n_sweeps < 100L * batches) throw InvalidArgument("need at least 100 sweeps per batch");
  if (insertions.empty()) throw InvalidArgument("fermion_mc needs at least two insertions");
  if (insertions.size() % 2) return {{0.0, 0.0}, Mode::MonteCarlo, 0.0, 0, true};

  const long burn_in = std::max(100L, n_sweeps / 10);
  const long per_batch = n_sweeps / batches;
  const long used = per_batch * batches;
  EsChain chain(d, params, seed, 0, burn_in);
  for (long s = 0; s < burn_in; ++s) chain.sweep();
  LoopSet loops;
  std::vector<double> means(batches, 0.0);
  for (int b = 0; b < batches; ++b) {
    long sum = 0;
    for (long s = 0; s < per_batch; ++s) {
      chain.sweep();
      extract_loops(d, chain.config(), loops);
      sum += config_contribution(d, loops, insertions);
    }
    means[b] = static_cast<double>(sum) / per_batch;
  }
  double mean = 0.0;
  for (double m : means) mean += m;
  mean /= batches;
  double var = 0.0;
  for (double m : means) var += (m - mean) * (m - mean);
  var /= (batches - 1);
  return {{mean, 0.0}, Mode::MonteCarlo, std::sqrt(var / batches), used, false};
}

namespace {

int step_dir(const LatticeDomain& d, int from, int to) {
  Point a = d.dual(from).doubled, b = d.dual(to).doubled;
  if (b.x > a.x) return 0;
  if (b.y > a.y) return 2;
  if (b.x < a.x) return 4;
  return 6;
}

}  // namespace

LineComparison compare_defect_lines(const LatticeDomain& d, const DefectLine& a, const DefectLine& b) {
  if (a.start != b.start || a.end != b.end) throw InvalidArgument("lines must share their corner ends");
  LineComparison out;
  out.w_eighths = line_turning_eighths(d, a);
  out.w_tilde_eighths = line_turning_eighths(d, b);

  std::vector<int> cycle(a.dual_path.begin(), a.dual_path.end());
  for (int k = static_cast<int>(b.dual_path.size()) - 2; k >= 1; --k) cycle.push_back(b.dual_path[k]);
  const int n = static_cast<int>(cycle.size());
  if (n >= 2) {
    std::set<std::pair<int, int>> used;
    for (int k = 0; k < n; ++k) {
      auto e = std::minmax(cycle[k], cycle[(k + 1) % n]);
      if (!used.insert(e).second || n == 2) throw InvalidArgument("lines share a dual edge");
    }
    std::map<int, std::vector<int>> turns;  // vertex -> turn at each visit
    for (int k = 0; k < n; ++k) {
      const int in = step_dir(d, cycle[(k + n - 1) % n], cycle[k]);
      const int outd = step_dir(d, cycle[k], cycle[(k + 1) % n]);
      const int turn = detail::mod(outd - in + 4, 8) - 4;
      out.rotation_eighths += turn;
      turns[cycle[k]].push_back(turn);
    }
    for (const auto& [v, t] : turns)
      if (t.size() == 2 && t[0] == 0 && t[1] == 0) ++out.crossings;
    auto left_of_curve = [&](int k, int corner) {
      const Point w = d.dual(cycle[k]).doubled, u = d.vertex_point(d.corner(corner).u);
      const int ray = (2 * u.x > w.x) ? (2 * u.y > w.y ? 1 : 7) : (2 * u.y > w.y ? 3 : 5);
      const int outd = step_dir(d, cycle[k], cycle[(k + 1) % n]);
      const int back = step_dir(d, cycle[k], cycle[(k + n - 1) % n]);
      return detail::mod(ray - outd, 8) < detail::mod(back - outd, 8);
    };
    out.ends_split = left_of_curve(0, a.start) != left_of_curve(static_cast<int>(a.dual_path.size()) - 1, a.end);
  }
  const int delta = out.w_eighths - out.w_tilde_eighths;
  out.relation_holds =
      detail::mod(delta, 8) == 0 && detail::mod(delta / 8, 2) == (out.crossings + out.ends_split) % 2;
  return out;
}

ExplorationTree explore(const LatticeDomain& d, const LoopSet& loops, std::span<const int> insertions, int root) {
  if (!d.on_boundary_ring(root)) throw InvalidArgument("exploration root must be a boundary corner");
  std::vector<int> insertion_at(d.corner_count(), -1);
  for (std::size_t i = 0; i < insertions.size(); ++i) insertion_at[insertions[i]] = static_cast<int>(i);

  ExplorationTree tree;
  std::vector<char> explored(loops.loop_count(), 0);
  std::vector<int> stack;
  explored[loops.loop_of(root)] = 1;
  tree.branches.push_back({loops.loop_of(root), root, -1, {}});
  stack.push_back(0);
  std::vector<std::pair<int, int>> pairs;
  int product = 1;
  while (!stack.empty()) {
    const int bi = stack.back();
    stack.pop_back();
    const int loop = tree.branches[bi].loop;
    const int len = loops.loop_length(loop);
    const int p0 = loops.position_of(tree.branches[bi].start);
    std::vector<int> children;
    for (int s = 0; s < len; ++s) {
      const int c = loops.corner_at(loop, (p0 + s) % len);
      if (insertion_at[c] >= 0) tree.branches[bi].hits.push_back(insertion_at[c]);
      const int m = d.forward_edge(c);
      if (m == kNone) continue;
      const int succ = loops.corner_at(loop, (p0 + s + 1) % len);
      for (int other : d.mid_edge(m).corners()) {
        if (other == c || other == succ) continue;
        const int ol = loops.loop_of(other);
        if (explored[ol]) continue;
        explored[ol] = 1;
        children.push_back(static_cast<int>(tree.branches.size()));
        tree.branches.push_back({ol, other, bi, {}});
      }
    }
    const auto& hits = tree.branches[bi].hits;
    if (hits.size() % 2) product = 0;
    for (std::size_t k = 0; k + 1 < hits.size() && product != 0; k += 2) {
      const int first = hits[k], second = hits[k + 1];
      const int c1 = insertions[first], c2 = insertions[second];
      product *= phase_from_eighths(d.corner(c1).orientation_eighth, d.corner(c2).orientation_eighth,
                                    loops.arc_eighths(c1, c2));
      if (first > second) product = -product;
      pairs.push_back(std::minmax(first, second));
    }
    for (auto it = children.rbegin(); it != children.rend(); ++it) stack.push_back(*it);
  }
  for (char e : explored)
    if (!e) throw InvariantViolation("exploration did not reach every loop");
  tree.winding = product == 0 ? 0 : product * matching_sign(pairs);
  return tree;
}

int exploration_tree_winding(const LatticeDomain& d, const LoopSet& loops, std::span<const int> insertions, int root) {
  return explore(d, loops, insertions, root).winding;
}

}  // namespace fkf
