#pragma once

// Naive reference implementations used only by tests. Written against raw
// coordinates, with no shared code with the library, and slow on purpose.

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

namespace oracle {

struct C {
  int x, y, q;  // q: 0 NE, 1 NW, 2 SW, 3 SE
  auto operator<=>(const C&) const = default;
};

inline constexpr std::array<std::array<int, 2>, 4> kOff{{{1, 1}, {-1, 1}, {-1, -1}, {1, -1}}};

inline int orientation(const C& c) { return 2 * c.q + 1; }

struct Dom {
  int W, H;
  std::vector<std::pair<std::array<int, 2>, std::array<int, 2>>> E;
  std::map<std::pair<std::array<int, 2>, std::array<int, 2>>, int> eid;

  Dom(int w, int h) : W(w), H(h) {
    for (int y = 0; y < H; ++y)
      for (int x = 0; x + 1 < W; ++x) E.push_back({{x, y}, {x + 1, y}});
    for (int y = 0; y + 1 < H; ++y)
      for (int x = 0; x < W; ++x) E.push_back({{x, y}, {x, y + 1}});
    for (int i = 0; i < static_cast<int>(E.size()); ++i) eid[E[i]] = i;
  }
  int nv() const { return W * H; }
  int ne() const { return static_cast<int>(E.size()); }
  int vid(int x, int y) const { return y * W + x; }
  int id(const C& c) const { return 4 * vid(c.x, c.y) + c.q; }
  C corner(int id) const { return {(id / 4) % W, (id / 4) / W, id % 4}; }
  int ncorners() const { return 4 * nv(); }

  std::optional<int> edge(std::array<int, 2> a, std::array<int, 2> b) const {
    if (auto it = eid.find({a, b}); it != eid.end()) return it->second;
    if (auto it = eid.find({b, a}); it != eid.end()) return it->second;
    return std::nullopt;
  }

  // The neighbour across the edge the loop follows when it is open.
  std::array<int, 2> forward_neighbour(const C& c) const {
    switch (c.q) {
      case 0: return {c.x, c.y + 1};
      case 1: return {c.x - 1, c.y};
      case 2: return {c.x, c.y - 1};
      default: return {c.x + 1, c.y};
    }
  }

  C next(const C& c, std::uint64_t bits) const {
    auto nb = forward_neighbour(c);
    auto e = edge({c.x, c.y}, nb);
    if (!e || !((bits >> *e) & 1)) return {c.x, c.y, (c.q + 1) % 4};
    static constexpr int across[4] = {3, 0, 1, 2};
    return {nb[0], nb[1], across[c.q]};
  }

  // Doubled coordinates of the dual vertex facing the corner.
  std::array<int, 2> dual_of(const C& c) const { return {2 * c.x + kOff[c.q][0], 2 * c.y + kOff[c.q][1]}; }
  bool ring(std::array<int, 2> d) const { return d[0] < 0 || d[1] < 0 || d[0] > 2 * W - 2 || d[1] > 2 * H - 2; }
};

// Left turn +2, right turn -2, from the cross product of the corner direction vectors.
inline int turn(const C& a, const C& b) {
  const int cross = kOff[a.q][0] * kOff[b.q][1] - kOff[a.q][1] * kOff[b.q][0];
  if (cross == 0) throw std::logic_error("oracle: corner directions not perpendicular");
  return cross > 0 ? 2 : -2;
}

struct Loops {
  std::vector<std::vector<C>> loops;
  std::map<C, std::pair<int, int>> pos;
};

inline Loops loops(const Dom& d, std::uint64_t bits) {
  Loops L;
  for (int id = 0; id < d.ncorners(); ++id) {
    C c = d.corner(id);
    if (L.pos.count(c)) continue;
    std::vector<C> lp;
    C x = c;
    while (!L.pos.count(x)) {
      L.pos[x] = {static_cast<int>(L.loops.size()), static_cast<int>(lp.size())};
      lp.push_back(x);
      x = d.next(x, bits);
    }
    if (!(x == c)) throw std::logic_error("oracle: corner walk is not a permutation");
    L.loops.push_back(lp);
  }
  return L;
}

inline int find(std::vector<int>& p, int x) {
  while (p[x] != x) x = p[x] = p[p[x]];
  return x;
}

struct Clusters {
  std::vector<int> primal;                     // root per vertex
  std::map<std::array<int, 2>, int> dual;      // root per dual vertex
  int k = 0, kstar = 0;
};

inline Clusters clusters(const Dom& d, std::uint64_t bits) {
  Clusters out;
  std::vector<int> p(d.nv());
  std::iota(p.begin(), p.end(), 0);
  for (int i = 0; i < d.ne(); ++i)
    if ((bits >> i) & 1) p[find(p, d.vid(d.E[i].first[0], d.E[i].first[1]))] = find(p, d.vid(d.E[i].second[0], d.E[i].second[1]));
  for (int v = 0; v < d.nv(); ++v) out.primal.push_back(find(p, v));
  std::vector<std::array<int, 2>> duals;
  std::map<std::array<int, 2>, int> did;
  for (int y = -1; y < d.H; ++y)
    for (int x = -1; x < d.W; ++x) {
      did[{2 * x + 1, 2 * y + 1}] = static_cast<int>(duals.size());
      duals.push_back({2 * x + 1, 2 * y + 1});
    }
  std::vector<int> q(duals.size());
  std::iota(q.begin(), q.end(), 0);
  int first_ring = -1;
  for (int i = 0; i < static_cast<int>(duals.size()); ++i)
    if (d.ring(duals[i])) {
      if (first_ring < 0) first_ring = i;
      else q[find(q, i)] = find(q, first_ring);
    }
  for (int i = 0; i < d.ne(); ++i) {
    if ((bits >> i) & 1) continue;
    auto [u, v] = d.E[i];
    std::array<int, 2> d1{2 * u[0] + 1, 2 * u[1] + 1}, d2;
    if (u[1] == v[1]) d2 = {2 * u[0] + 1, 2 * u[1] - 1};
    else d2 = {2 * u[0] - 1, 2 * u[1] + 1};
    q[find(q, did[d1])] = find(q, did[d2]);
  }
  std::vector<int> roots;
  for (int i = 0; i < static_cast<int>(duals.size()); ++i) {
    out.dual[duals[i]] = find(q, i);
    roots.push_back(find(q, i));
  }
  std::sort(roots.begin(), roots.end());
  out.kstar = static_cast<int>(std::unique(roots.begin(), roots.end()) - roots.begin());
  auto pr = out.primal;
  std::sort(pr.begin(), pr.end());
  out.k = static_cast<int>(std::unique(pr.begin(), pr.end()) - pr.begin());
  return out;
}

// a(i) - a(j) + turning walked from position i to position j.
inline int arc_m(const std::vector<C>& lp, int i, int j) {
  const int n = static_cast<int>(lp.size());
  int s = 0;
  for (int k = i; k != j; k = (k + 1) % n) s += turn(lp[k], lp[(k + 1) % n]);
  const int m = orientation(lp[i]) - orientation(lp[j]) + s;
  if (((m % 8) + 8) % 8) throw std::logic_error("oracle: phase exponent not a multiple of 8");
  return m;
}

inline int phi(const std::vector<C>& lp, int i, int j) { return ((arc_m(lp, i, j) / 8) % 2) ? -1 : 1; }

inline int perm_sign(const std::vector<int>& seq) {
  int s = 1;
  for (std::size_t i = 0; i < seq.size(); ++i)
    for (std::size_t j = i + 1; j < seq.size(); ++j)
      if (seq[i] > seq[j]) s = -s;
  return s;
}

// Pairs consecutive insertions along each loop, starting from the lowest index on that loop.
inline int contribution(const Loops& L, const std::vector<C>& ins) {
  std::map<int, std::vector<std::pair<int, int>>> by_loop;  // loop -> (position, index)
  for (int idx = 0; idx < static_cast<int>(ins.size()); ++idx) {
    auto [l, k] = L.pos.at(ins[idx]);
    by_loop[l].push_back({k, idx});
  }
  std::vector<int> seq;
  int ph = 1;
  for (auto& [l, lst] : by_loop) {
    if (lst.size() % 2) return 0;
    std::sort(lst.begin(), lst.end());
    auto lo = std::min_element(lst.begin(), lst.end(), [](auto a, auto b) { return a.second < b.second; });
    std::rotate(lst.begin(), lo, lst.end());
    for (std::size_t t = 0; t < lst.size(); t += 2) ph *= phi(L.loops[l], lst[t].first, lst[t + 1].first);
    for (auto& e : lst) seq.push_back(e.second);
  }
  return perm_sign(seq) * ph;
}

inline double fk_weight(const Dom& d, std::uint64_t bits, double p) {
  const int o = __builtin_popcountll(bits);
  return std::pow(p, o) * std::pow(1.0 - p, d.ne() - o) * std::pow(2.0, clusters(d, bits).k);
}

inline double fermion(const Dom& d, double p, const std::vector<C>& ins) {
  double z = 0.0, s = 0.0;
  for (std::uint64_t b = 0; b < (std::uint64_t{1} << d.ne()); ++b) {
    const double w = fk_weight(d, b, p);
    z += w;
    s += w * contribution(loops(d, b), ins);
  }
  return s / z;
}

inline double p_critical() { return std::sqrt(2.0) / (1.0 + std::sqrt(2.0)); }
inline double beta_critical() { return 0.5 * std::log(1.0 + std::sqrt(2.0)); }

// L-shaped dual route, horizontal leg first.
inline std::vector<std::array<int, 2>> route(const Dom& d, const C& c1, const C& c2) {
  auto w1 = d.dual_of(c1), w2 = d.dual_of(c2);
  std::vector<std::array<int, 2>> path{w1};
  auto cur = w1;
  while (cur[0] != w2[0]) {
    cur[0] += w2[0] > cur[0] ? 2 : -2;
    path.push_back(cur);
  }
  while (cur[1] != w2[1]) {
    cur[1] += w2[1] > cur[1] ? 2 : -2;
    path.push_back(cur);
  }
  return path;
}

inline std::vector<int> crossed(const Dom& d, const std::vector<std::array<int, 2>>& path) {
  std::vector<int> es;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    auto a = path[i], b = path[i + 1];
    std::optional<int> e;
    if (a[1] == b[1]) {
      const int px = (a[0] + b[0]) / 4, py = (a[1] - 1) / 2;
      if (a[1] - 1 >= 0) e = d.edge({px, py}, {px, py + 1});
    } else {
      const int py = (a[1] + b[1]) / 4, px = (a[0] - 1) / 2;
      if (a[0] - 1 >= 0) e = d.edge({px, py}, {px + 1, py});
    }
    if (e) es.push_back(*e);
  }
  return es;
}

inline int line_turning(const C& c1, const C& c2, const std::vector<std::array<int, 2>>& path) {
  std::vector<int> dirs{orientation(c1)};
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const int dx = path[i + 1][0] - path[i][0], dy = path[i + 1][1] - path[i][1];
    dirs.push_back(dx > 0 ? 0 : dy > 0 ? 2 : dx < 0 ? 4 : 6);
  }
  dirs.push_back((orientation(c2) + 4) % 8);
  int tot = 0;
  for (std::size_t i = 0; i + 1 < dirs.size(); ++i) {
    int t = ((dirs[i + 1] - dirs[i]) % 8 + 8) % 8;
    if (t > 4) t -= 8;
    if (t == 4) throw std::logic_error("oracle: line reverses");
    tot += t;
  }
  return tot;
}

inline int pair_sign(const C& c1, const C& c2, const std::vector<std::array<int, 2>>& path) {
  const int k = 4 + orientation(c2) - orientation(c1) - line_turning(c1, c2, path);
  if (((k % 8) + 8) % 8) throw std::logic_error("oracle: pair phase not real");
  return ((k / 8) % 2) ? -1 : 1;
}

// Disorder-line Ising correlator with one routed line per consecutive pair.
inline double ising_fermion(const Dom& d, double beta, const std::vector<C>& ins) {
  const int np = static_cast<int>(ins.size()) / 2;
  std::vector<std::vector<int>> cr;
  std::vector<int> sg;
  for (int j = 0; j < np; ++j) {
    auto path = route(d, ins[2 * j], ins[2 * j + 1]);
    cr.push_back(crossed(d, path));
    sg.push_back(pair_sign(ins[2 * j], ins[2 * j + 1], path));
  }
  double z = 0.0, s = 0.0;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << d.nv()); ++m) {
    std::vector<int> sp(d.nv());
    for (int v = 0; v < d.nv(); ++v) sp[v] = ((m >> v) & 1) ? -1 : 1;
    auto bond = [&](int e) { return sp[d.vid(d.E[e].first[0], d.E[e].first[1])] * sp[d.vid(d.E[e].second[0], d.E[e].second[1])]; };
    int en = 0;
    for (int e = 0; e < d.ne(); ++e) en += bond(e);
    const double w = std::exp(beta * en);
    double val = 1.0;
    for (int j = 0; j < np; ++j) {
      int el = 0;
      for (int e : cr[j]) el += bond(e);
      val *= sg[j] * std::exp(-2.0 * beta * el) * sp[d.vid(ins[2 * j].x, ins[2 * j].y)] *
             sp[d.vid(ins[2 * j + 1].x, ins[2 * j + 1].y)];
    }
    z += w;
    s += w * val;
  }
  return s / z;
}

// <s_u s_v> by direct spin summation.
inline double spin_correlation(const Dom& d, double beta, int u, int v) {
  double z = 0.0, s = 0.0;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << d.nv()); ++m) {
    int en = 0;
    auto spin = [&](int x) { return ((m >> x) & 1) ? -1 : 1; };
    for (auto& [a, b] : d.E) en += spin(d.vid(a[0], a[1])) * spin(d.vid(b[0], b[1]));
    const double w = std::exp(beta * en);
    z += w;
    s += w * spin(u) * spin(v);
  }
  return s / z;
}

}  // namespace oracle
