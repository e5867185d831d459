#include "fkf/configuration.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#include "fkf/error.hpp"

namespace fkf {

FkConfig FkConfig::all_open(const LatticeDomain& d) {
  FkConfig c(d.edge_count());
  for (int e = 0; e < d.edge_count(); ++e) c.set(e, true);
  return c;
}

FkConfig FkConfig::from_mask(const LatticeDomain& d, std::uint64_t mask) {
  if (d.edge_count() < 64 && (mask >> d.edge_count()) != 0)
    throw InvalidArgument("config mask has bits beyond the edge count");
  FkConfig c(d.edge_count());
  for (int e = 0; e < std::min(64, d.edge_count()); ++e) c.set(e, (mask >> e) & 1u);
  return c;
}

FkConfig FkConfig::from_hex(const LatticeDomain& d, std::string_view hex) {
  if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
  if (hex.empty()) throw InvalidArgument("empty config literal");
  FkConfig c(d.edge_count());
  int bit = 0;
  for (auto it = hex.rbegin(); it != hex.rend(); ++it, bit += 4) {
    char ch = *it;
    int v;
    if (ch >= '0' && ch <= '9') v = ch - '0';
    else if (ch >= 'a' && ch <= 'f') v = ch - 'a' + 10;
    else if (ch >= 'A' && ch <= 'F') v = ch - 'A' + 10;
    else throw InvalidArgument("bad hex digit in config literal");
    for (int k = 0; k < 4; ++k) {
      if (!((v >> k) & 1)) continue;
      if (bit + k >= d.edge_count()) throw InvalidArgument("config literal has bits beyond the edge count");
      c.set(bit + k, true);
    }
  }
  return c;
}

int FkConfig::open_count() const {
  int n = 0;
  for (auto w : words_) n += std::popcount(w);
  return n;
}

std::string FkConfig::to_hex() const {
  static constexpr char digits[] = "0123456789abcdef";
  std::string s;
  for (int nib = (edges_ + 3) / 4 - 1; nib >= 0; --nib) {
    int v = 0;
    for (int k = 0; k < 4; ++k) {
      int e = 4 * nib + k;
      if (e < edges_ && open(e)) v |= 1 << k;
    }
    if (s.empty() && v == 0) continue;
    s.push_back(digits[v]);
  }
  return "0x" + (s.empty() ? std::string("0") : s);
}

void UnionFind::reset(int n) {
  parent_.resize(n);
  std::iota(parent_.begin(), parent_.end(), 0);
  rank_.assign(n, 0);
  components_ = n;
}

int UnionFind::find(int x) {
  int root = x;
  while (parent_[root] != root) root = parent_[root];
  while (parent_[x] != root) {
    int next = parent_[x];
    parent_[x] = root;
    x = next;
  }
  return root;
}

bool UnionFind::unite(int a, int b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (rank_[a] < rank_[b]) std::swap(a, b);
  parent_[b] = a;
  if (rank_[a] == rank_[b]) ++rank_[a];
  --components_;
  return true;
}

namespace {

std::vector<int> canonical_labels(UnionFind& uf, int n) {
  std::vector<int> smallest(n, -1), label(n);
  for (int i = 0; i < n; ++i) {
    int r = uf.find(i);
    if (smallest[r] < 0) smallest[r] = i;
    label[i] = smallest[r];
  }
  return label;
}

// The two dual vertices on either side of primal edge e.
std::pair<int, int> dual_sides(const LatticeDomain& d, int e) {
  const PrimalEdge& pe = d.edge(e);
  Point a = d.vertex_point(pe.a);
  if (pe.axis == Axis::Horizontal) return {d.dual_id(a.x, a.y - 1), d.dual_id(a.x, a.y)};
  return {d.dual_id(a.x - 1, a.y), d.dual_id(a.x, a.y)};
}

}  // namespace

ClusterLabels clusters(const LatticeDomain& d, const FkConfig& config) {
  ClusterLabels out;
  UnionFind primal(d.vertex_count());
  UnionFind dual(d.dual_count());
  int first_ring = -1;
  for (int i = 0; i < d.dual_count(); ++i) {
    if (!d.dual(i).ring) continue;
    if (first_ring < 0) first_ring = i;
    else dual.unite(first_ring, i);
  }
  for (int e = 0; e < d.edge_count(); ++e) {
    if (config.open(e)) {
      primal.unite(d.edge(e).a, d.edge(e).b);
    } else {
      auto [s, t] = dual_sides(d, e);
      dual.unite(s, t);
    }
  }
  out.primal_count = primal.components();
  out.dual_count = dual.components();
  out.primal_label = canonical_labels(primal, d.vertex_count());
  out.dual_label = canonical_labels(dual, d.dual_count());
  return out;
}

int primal_cluster_count(const LatticeDomain& d, const FkConfig& config, UnionFind& scratch) {
  scratch.reset(d.vertex_count());
  const auto words = config.words();
  for (std::size_t w = 0; w < words.size(); ++w) {
    std::uint64_t bits = words[w];
    while (bits) {
      int e = static_cast<int>(w * 64) + std::countr_zero(bits);
      bits &= bits - 1;
      scratch.unite(d.edge(e).a, d.edge(e).b);
    }
  }
  return scratch.components();
}

int step_turn_eighths(const LatticeDomain& d, int from, int to) {
  int diff = detail::mod(d.corner(to).orientation_eighth - d.corner(from).orientation_eighth, 8);
  return diff == 2 ? 2 : -2;
}

int LoopSet::arc_eighths(int c1, int c2) const {
  const int l = corner_loop_[c1];
  if (l != corner_loop_[c2]) throw InvalidArgument("corners are not on the same loop");
  if (c1 == c2) throw InvalidArgument("arc needs distinct corners");
  const int base = offsets_[l];
  const int p1 = corner_pos_[c1], p2 = corner_pos_[c2];
  const int diff = prefix_[base + p2] - prefix_[base + p1];
  return p2 > p1 ? diff : total_[l] + diff;
}

int LoopSet::step_eighths(int loop, int pos) const {
  const int base = offsets_[loop];
  const int len = loop_length(loop);
  if (pos + 1 < len) return prefix_[base + pos + 1] - prefix_[base + pos];
  return total_[loop] - prefix_[base + pos];
}

std::vector<std::vector<int>> LoopSet::as_cycles() const {
  std::vector<std::vector<int>> out;
  for (int i = 0; i < loop_count(); ++i) out.emplace_back(loop(i).begin(), loop(i).end());
  return out;
}

void extract_loops(const LatticeDomain& d, const FkConfig& config, LoopSet& out) {
  const int n = d.corner_count();
  out.order_.clear();
  out.prefix_.clear();
  out.total_.clear();
  out.offsets_.assign(1, 0);
  out.corner_loop_.assign(n, -1);
  out.corner_pos_.assign(n, -1);
  const auto orient = [&](int c) { return 2 * (c & 3) + 1; };
  for (int start = 0; start < n; ++start) {
    if (out.corner_loop_[start] >= 0) continue;
    const int loop = out.loop_count();
    int c = start, pos = 0, turn = 0;
    do {
      out.corner_loop_[c] = loop;
      out.corner_pos_[c] = pos++;
      out.order_.push_back(c);
      out.prefix_.push_back(turn);
      const int e = d.forward_edge(c);
      const int next = (e != kNone && config.open(e)) ? d.next_if_open(c) : d.next_if_closed(c);
      turn += detail::mod(orient(next) - orient(c), 8) == 2 ? 2 : -2;
      c = next;
    } while (c != start);
    if (turn != 8 && turn != -8) throw InvariantViolation("loop total turning is not a full turn");
    out.total_.push_back(turn);
    out.offsets_.push_back(static_cast<int>(out.order_.size()));
  }
}

LoopSet extract_loops(const LatticeDomain& d, const FkConfig& config) {
  if (config.edge_count() != d.edge_count()) throw InvalidArgument("config does not match domain");
  LoopSet out;
  extract_loops(d, config, out);
  return out;
}

bool corners_connected(const LoopSet& loops, int c1, int c2) {
  if (c1 == c2) throw InvalidArgument("corners_connected needs distinct corners");
  return loops.connected(c1, c2);
}

FkConfig transpose_config(const LatticeDomain& d, const LatticeDomain& t, const FkConfig& config) {
  if (t.width() != d.height() || t.height() != d.width()) throw InvalidArgument("domains are not transposes");
  FkConfig out(t.edge_count());
  for (int e = 0; e < d.edge_count(); ++e) {
    Point a = d.vertex_point(d.edge(e).a), b = d.vertex_point(d.edge(e).b);
    auto te = t.edge_between(t.vertex_id(a.y, a.x), t.vertex_id(b.y, b.x));
    out.set(*te, config.open(e));
  }
  return out;
}

}  // namespace fkf
