#include "fkf/measures.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <string>

#include "fkf/error.hpp"

namespace fkf {

double critical_p() { return 2.0 - kSqrt2; }
double critical_beta() { return 0.5 * std::log1p(kSqrt2); }

ModelParams ModelParams::from_p(double p) {
  if (!(p >= 0.0 && p < 1.0)) throw InvalidArgument("p must lie in [0,1)");
  return {p, -0.5 * std::log1p(-p), p / ((1.0 - p) * kSqrt2)};
}

ModelParams ModelParams::from_beta(double beta) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw InvalidArgument("beta must be a finite non-negative number");
  const double p = -std::expm1(-2.0 * beta);
  return {p, beta, p / ((1.0 - p) * kSqrt2)};
}

ModelParams ModelParams::from_t(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw InvalidArgument("t must be a finite positive number");
  const double p = kSqrt2 * t / (1.0 + kSqrt2 * t);
  return {p, -0.5 * std::log1p(-p), t};
}

ModelParams ModelParams::critical() { return {critical_p(), critical_beta(), 1.0}; }

bool ModelParams::is_critical(double tol) const { return std::abs(t - 1.0) <= tol; }

SpinConfig SpinConfig::from_mask(const LatticeDomain& d, std::uint64_t mask) {
  SpinConfig s = all_plus(d);
  for (int v = 0; v < d.vertex_count() && v < 64; ++v)
    if ((mask >> v) & 1u) s.spins[v] = -1;
  return s;
}

double fk_weight(const LatticeDomain& d, const FkConfig& config, const ModelParams& params) {
  if (!(params.p >= 0.0 && params.p < 1.0)) throw InvalidArgument("p must lie in [0,1)");
  UnionFind uf;
  const int k = primal_cluster_count(d, config, uf);
  const int n = config.open_count();
  const double r = params.p / (1.0 - params.p);
  return (n == 0 ? 1.0 : std::pow(r, n)) * std::ldexp(1.0, k);
}

double loop_weight(const LatticeDomain& d, const FkConfig& config, const ModelParams& params) {
  if (!(params.t > 0.0)) throw InvalidArgument("t must be positive");
  const LoopSet loops = extract_loops(d, config);
  const int l = loops.loop_count();
  return std::pow(params.t, config.open_count()) * std::ldexp(1.0, l / 2) * (l % 2 ? kSqrt2 : 1.0);
}

int ising_energy(const LatticeDomain& d, const SpinConfig& spins) {
  int e = 0;
  for (const auto& pe : d.edges()) e += spins.spins[pe.a] * spins.spins[pe.b];
  return e;
}

double ising_weight(const LatticeDomain& d, const SpinConfig& spins, const ModelParams& params) {
  return std::exp(params.beta * ising_energy(d, spins));
}

int disorder_energy(const LatticeDomain& d, const SpinConfig& spins, const DefectLine& line) {
  int e = 0;
  for (int edge : line.crossed_edges) e += spins.spins[d.edge(edge).a] * spins.spins[d.edge(edge).b];
  return e;
}

DefectLine make_defect_line(const LatticeDomain& d, int start, int end, std::vector<int> dual_path) {
  if (start == end) throw InvalidArgument("defect line needs distinct corner ends");
  const int w1 = d.corner(start).w, w2 = d.corner(end).w;
  if (dual_path.empty() || dual_path.front() != w1 || dual_path.back() != w2)
    throw InvalidArgument("defect line must run from w(start) to w(end)");
  std::set<int> seen;
  DefectLine line{start, end, {}, {}};
  for (std::size_t i = 0; i < dual_path.size(); ++i) {
    if (!seen.insert(dual_path[i]).second) throw InvalidArgument("defect line is not simple");
    if (i == 0) continue;
    if (!d.dual_adjacent(dual_path[i - 1], dual_path[i])) throw InvalidArgument("defect line has a non-adjacent step");
    if (auto e = d.edge_crossed(dual_path[i - 1], dual_path[i])) line.crossed_edges.push_back(*e);
  }
  line.dual_path = std::move(dual_path);
  return line;
}

namespace {

struct Face {
  int fx, fy;
};

Face face_of(const LatticeDomain& d, int dual) {
  Point p = d.dual(dual).doubled;
  return {(p.x - 1) / 2, (p.y - 1) / 2};
}

std::vector<int> l_path(const LatticeDomain& d, int w1, int w2, RouteOrder order) {
  Face a = face_of(d, w1), b = face_of(d, w2);
  std::vector<int> path{w1};
  auto walk_x = [&](int& x, int y, int tx) {
    while (x != tx) {
      x += tx > x ? 1 : -1;
      path.push_back(d.dual_id(x, y));
    }
  };
  auto walk_y = [&](int x, int& y, int ty) {
    while (y != ty) {
      y += ty > y ? 1 : -1;
      path.push_back(d.dual_id(x, y));
    }
  };
  int x = a.fx, y = a.fy;
  if (order == RouteOrder::HorizontalFirst) {
    walk_x(x, y, b.fx);
    walk_y(x, y, b.fy);
  } else {
    walk_y(x, y, b.fy);
    walk_x(x, y, b.fx);
  }
  return path;
}

std::vector<int> bfs_path(const LatticeDomain& d, int w1, int w2, const std::vector<char>& blocked) {
  std::vector<int> prev(d.dual_count(), -2);
  std::deque<int> queue{w1};
  prev[w1] = -1;
  static constexpr int dx[4] = {1, 0, -1, 0};
  static constexpr int dy[4] = {0, 1, 0, -1};
  while (!queue.empty()) {
    int cur = queue.front();
    queue.pop_front();
    if (cur == w2) break;
    Face f = face_of(d, cur);
    for (int k = 0; k < 4; ++k) {
      int nx = f.fx + dx[k], ny = f.fy + dy[k];
      if (nx < -1 || ny < -1 || nx > d.width() - 1 || ny > d.height() - 1) continue;
      int nb = d.dual_id(nx, ny);
      if (prev[nb] != -2 || (blocked[nb] && nb != w2)) continue;
      prev[nb] = cur;
      queue.push_back(nb);
    }
  }
  if (prev[w2] == -2) return {};
  std::vector<int> path;
  for (int v = w2; v != -1; v = prev[v]) path.push_back(v);
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

DefectLine route_defect_line(const LatticeDomain& d, int c1, int c2, RouteOrder order) {
  if (c1 == c2) throw InvalidArgument("route_defect_line needs distinct corners");
  return make_defect_line(d, c1, c2, l_path(d, d.corner(c1).w, d.corner(c2).w, order));
}

bool lines_disjoint(std::span<const DefectLine> lines) {
  std::set<int> used;
  for (const auto& l : lines)
    for (int v : l.dual_path)
      if (!used.insert(v).second) return false;
  return true;
}

std::vector<DefectLine> route_defect_lines(const LatticeDomain& d, std::span<const int> corners) {
  if (corners.size() % 2 != 0) throw InvalidArgument("defect lines need an even number of corners");
  std::vector<char> blocked(d.dual_count(), 0);
  for (int c : corners) {
    int w = d.corner(c).w;
    if (blocked[w]) throw RoutingError("two insertion corners share a dual vertex; supply lines explicitly");
    blocked[w] = 1;
  }
  std::vector<DefectLine> lines;
  for (std::size_t i = 0; i < corners.size(); i += 2) {
    const int w1 = d.corner(corners[i]).w, w2 = d.corner(corners[i + 1]).w;
    auto fits = [&](const std::vector<int>& path) {
      if (path.empty()) return false;
      for (std::size_t k = 1; k + 1 < path.size(); ++k)
        if (blocked[path[k]]) return false;
      return true;
    };
    std::vector<int> path = l_path(d, w1, w2, RouteOrder::HorizontalFirst);
    if (!fits(path)) path = l_path(d, w1, w2, RouteOrder::VerticalFirst);
    if (!fits(path)) {
      blocked[w1] = 0;
      path = bfs_path(d, w1, w2, blocked);
      blocked[w1] = 1;
    }
    if (!fits(path)) throw RoutingError("no disjoint defect line found for insertion pair " + std::to_string(i / 2));
    for (int v : path) blocked[v] = 1;
    lines.push_back(make_defect_line(d, corners[i], corners[i + 1], std::move(path)));
  }
  return lines;
}

int line_turning_eighths(const LatticeDomain& d, const DefectLine& line) {
  std::vector<int> dirs{d.corner(line.start).orientation_eighth};
  for (std::size_t i = 1; i < line.dual_path.size(); ++i) {
    Point a = d.dual(line.dual_path[i - 1]).doubled, b = d.dual(line.dual_path[i]).doubled;
    if (b.x > a.x) dirs.push_back(0);
    else if (b.y > a.y) dirs.push_back(2);
    else if (b.x < a.x) dirs.push_back(4);
    else dirs.push_back(6);
  }
  dirs.push_back(d.corner(line.end).orientation_eighth + 4);
  int total = 0;
  for (std::size_t i = 1; i < dirs.size(); ++i) {
    int turn = detail::mod(dirs[i] - dirs[i - 1] + 4, 8) - 4;
    if (turn == -4) throw InvariantViolation("defect line reverses direction");
    total += turn;
  }
  return total;
}

int defect_pair_sign(const LatticeDomain& d, const DefectLine& line) {
  const int a1 = d.corner(line.start).orientation_eighth, a2 = d.corner(line.end).orientation_eighth;
  const int m = 4 + a2 - a1 - line_turning_eighths(d, line);
  if (detail::mod(m, 8) != 0) throw InvariantViolation("defect pair prefactor is not real");
  return detail::mod(m / 8, 2) == 0 ? 1 : -1;
}

bool low_temperature_identity_holds(const LatticeDomain& d, const SpinConfig& spins, const DefectLine& line) {
  std::vector<char> in_line(d.edge_count(), 0);
  for (int e : line.crossed_edges) in_line[e] = 1;
  int symdiff = 0;
  for (int e = 0; e < d.edge_count(); ++e) {
    bool disagree = spins.spins[d.edge(e).a] != spins.spins[d.edge(e).b];
    if (disagree != static_cast<bool>(in_line[e])) ++symdiff;
  }
  const int lhs = -2 * disorder_energy(d, spins, line) + ising_energy(d, spins);
  return lhs == d.edge_count() - 2 * symdiff;
}

namespace {

std::vector<char> crossing_parity(const LatticeDomain& d, std::span<const DefectLine> lines) {
  std::vector<char> parity(d.edge_count(), 0);
  for (const auto& l : lines)
    for (int e : l.crossed_edges) parity[e] ^= 1;
  return parity;
}

}  // namespace

double es_joint_weight(const LatticeDomain& d, const SpinConfig& spins, const FkConfig& config,
                       const ModelParams& params, std::span<const DefectLine> lines) {
  const auto parity = crossing_parity(d, lines);
  double w = 1.0;
  for (int e = 0; e < d.edge_count(); ++e) {
    if (!config.open(e)) {
      w *= 1.0 - params.p;
      continue;
    }
    int s = spins.spins[d.edge(e).a] * spins.spins[d.edge(e).b] * (parity[e] ? -1 : 1);
    if (s != 1) return 0.0;
    w *= params.p;
  }
  return w;
}

void es_sample_spins_given_fk(const LatticeDomain& d, const FkConfig& config, CounterRng& rng, UnionFind& uf,
                              SpinConfig& out) {
  primal_cluster_count(d, config, uf);
  const int n = d.vertex_count();
  out.spins.assign(n, 0);
  // Roots are visited in vertex order, so each cluster's sign is drawn once, deterministically.
  for (int v = 0; v < n; ++v) {
    int r = uf.find(v);
    if (out.spins[r] == 0) out.spins[r] = rng.coin() ? 1 : -1;
    out.spins[v] = out.spins[r];
  }
}

SpinConfig es_sample_spins_given_fk(const LatticeDomain& d, const FkConfig& config, CounterRng& rng) {
  UnionFind uf;
  SpinConfig s;
  es_sample_spins_given_fk(d, config, rng, uf, s);
  return s;
}

FkConfig es_sample_fk_given_spins(const LatticeDomain& d, const SpinConfig& spins, const ModelParams& params,
                                  CounterRng& rng) {
  FkConfig out(d.edge_count());
  for (int e = 0; e < d.edge_count(); ++e)
    if (spins.spins[d.edge(e).a] == spins.spins[d.edge(e).b]) out.set(e, rng.bernoulli(params.p));
  return out;
}

std::optional<SpinConfig> es_sample_spins_given_fk_with_defect(const LatticeDomain& d, const FkConfig& config,
                                                               std::span<const DefectLine> lines, CounterRng& rng) {
  const auto parity = crossing_parity(d, lines);
  const int n = d.vertex_count();
  std::vector<std::vector<std::pair<int, int>>> adj(n);
  for (int e = 0; e < d.edge_count(); ++e) {
    if (!config.open(e)) continue;
    adj[d.edge(e).a].push_back({d.edge(e).b, parity[e]});
    adj[d.edge(e).b].push_back({d.edge(e).a, parity[e]});
  }
  SpinConfig out{std::vector<int>(n, 0)};
  std::vector<int> stack;
  for (int root = 0; root < n; ++root) {
    if (out.spins[root] != 0) continue;
    out.spins[root] = rng.coin() ? 1 : -1;
    stack.assign(1, root);
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (auto [nb, flip] : adj[v]) {
        int want = flip ? -out.spins[v] : out.spins[v];
        if (out.spins[nb] == 0) {
          out.spins[nb] = want;
          stack.push_back(nb);
        } else if (out.spins[nb] != want) {
          return std::nullopt;
        }
      }
    }
  }
  return out;
}

}  // namespace fkf
