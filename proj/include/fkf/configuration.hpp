#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fkf/lattice.hpp"

namespace fkf {

// Edge states of one FK configuration; bit e set means primal edge e is open.
class FkConfig {
 public:
  FkConfig() = default;
  explicit FkConfig(int edge_count) : edges_(edge_count), words_((edge_count + 63) / 64, 0) {}

  static FkConfig all_closed(const LatticeDomain& d) { return FkConfig(d.edge_count()); }
  static FkConfig all_open(const LatticeDomain& d);
  static FkConfig from_mask(const LatticeDomain& d, std::uint64_t mask);
  // "0x3A7" style literal; bit i of the number is edge i.
  static FkConfig from_hex(const LatticeDomain& d, std::string_view hex);

  int edge_count() const { return edges_; }
  bool open(int e) const { return (words_[e >> 6] >> (e & 63)) & 1u; }
  void set(int e, bool is_open) {
    auto bit = std::uint64_t{1} << (e & 63);
    if (is_open) words_[e >> 6] |= bit;
    else words_[e >> 6] &= ~bit;
  }
  void assign_mask(std::uint64_t mask) {
    words_[0] = edges_ >= 64 ? mask : (mask & ((std::uint64_t{1} << edges_) - 1));
  }
  int open_count() const;
  std::span<const std::uint64_t> words() const { return words_; }
  std::string to_hex() const;

  bool operator==(const FkConfig&) const = default;

 private:
  int edges_ = 0;
  std::vector<std::uint64_t> words_;
};

class UnionFind {
 public:
  UnionFind() = default;
  explicit UnionFind(int n) { reset(n); }
  void reset(int n);
  int find(int x);
  bool unite(int a, int b);
  int components() const { return components_; }

 private:
  std::vector<int> parent_;
  std::vector<unsigned char> rank_;
  int components_ = 0;
};

struct ClusterLabels {
  std::vector<int> primal_label;  // smallest vertex id in the cluster
  int primal_count = 0;
  std::vector<int> dual_label;  // smallest dual id; the ring is one cluster
  int dual_count = 0;
};

ClusterLabels clusters(const LatticeDomain& d, const FkConfig& config);
int primal_cluster_count(const LatticeDomain& d, const FkConfig& config, UnionFind& scratch);

// Oriented corner loops, walked with the primal cluster on the left.
class LoopSet {
 public:
  int loop_count() const { return static_cast<int>(offsets_.size()) - 1; }
  std::span<const int> loop(int i) const {
    return std::span<const int>(order_).subspan(offsets_[i], offsets_[i + 1] - offsets_[i]);
  }
  int loop_length(int i) const { return offsets_[i + 1] - offsets_[i]; }
  int loop_of(int corner) const { return corner_loop_[corner]; }
  int position_of(int corner) const { return corner_pos_[corner]; }
  int corner_at(int loop, int pos) const { return order_[offsets_[loop] + pos]; }
  bool connected(int c1, int c2) const { return corner_loop_[c1] == corner_loop_[c2]; }

  // Eighth-turns accumulated walking forward along the loop from c1 to c2 (c1 != c2).
  int arc_eighths(int c1, int c2) const;
  // Eighth-turns of the full loop: +8 counterclockwise, -8 clockwise.
  int total_eighths(int loop) const { return total_[loop]; }
  // Eighth-turn taken at the step leaving position pos of loop.
  int step_eighths(int loop, int pos) const;

  std::vector<std::vector<int>> as_cycles() const;

 private:
  friend void extract_loops(const LatticeDomain&, const FkConfig&, LoopSet&);
  std::vector<int> order_;
  std::vector<int> offsets_{0};
  std::vector<int> corner_loop_;
  std::vector<int> corner_pos_;
  std::vector<int> prefix_;  // eighth-turns from loop start to each position
  std::vector<int> total_;
};

// Turning in eighths between consecutive corners of a loop: +2 left, -2 right.
int step_turn_eighths(const LatticeDomain& d, int from, int to);

LoopSet extract_loops(const LatticeDomain& d, const FkConfig& config);
void extract_loops(const LatticeDomain& d, const FkConfig& config, LoopSet& out);

bool corners_connected(const LoopSet& loops, int c1, int c2);

// The configuration obtained by reflecting the domain through the diagonal x = y.
FkConfig transpose_config(const LatticeDomain& d, const LatticeDomain& transposed, const FkConfig& config);

}  // namespace fkf
