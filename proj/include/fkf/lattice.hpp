#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fkf/phase.hpp"

namespace fkf {

enum class Quadrant : int { NE = 0, NW = 1, SW = 2, SE = 3 };
enum class Axis : int { Horizontal = 0, Vertical = 1 };

// Marks a boundary stub: a mid-edge slot whose primal edge leaves the rectangle.
inline constexpr int kNone = -1;

std::string_view quadrant_name(Quadrant q);
std::optional<Quadrant> parse_quadrant(std::string_view s);

struct Point {
  int x = 0;
  int y = 0;
  bool operator==(const Point&) const = default;
};

struct PrimalEdge {
  int a = 0;  // lower-left endpoint
  int b = 0;
  Axis axis = Axis::Horizontal;
};

struct DualVertex {
  Point doubled;  // (2x+1, 2y+1) for the face with lower-left vertex (x, y)
  bool ring = false;
};

struct Corner {
  int id = 0;
  int u = 0;  // primal vertex
  int w = 0;  // dual vertex
  Quadrant quadrant = Quadrant::NE;
  int orientation_eighth = 1;
  // [0] is the forward mid-edge (the edge the loop leaves through when open),
  // [1] the backward one; kNone for a boundary stub.
  std::array<int, 2> mid_edges{kNone, kNone};
};

struct MidEdge {
  int id = 0;
  int edge = 0;
  Axis axis = Axis::Horizontal;
  int nw = 0, ne = 0, se = 0, sw = 0;
  std::array<int, 4> corners() const { return {nw, ne, se, sw}; }
};

struct CornerSpec {
  int x = 0;
  int y = 0;
  Quadrant quadrant = Quadrant::NE;
};

std::optional<CornerSpec> parse_corner_spec(std::string_view s);
// "x,y,Q;x,y,Q;..." ; throws InvalidArgument on a malformed entry.
std::vector<CornerSpec> parse_corner_list(std::string_view s);

// The W x H rectangle with its primal, dual, corner and mid-edge index spaces.
// Immutable after construction.
class LatticeDomain {
 public:
  LatticeDomain(int width, int height);

  int width() const { return width_; }
  int height() const { return height_; }

  int vertex_count() const { return width_ * height_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  int dual_count() const { return static_cast<int>(duals_.size()); }
  int corner_count() const { return static_cast<int>(corners_.size()); }
  int mid_edge_count() const { return static_cast<int>(mid_edges_.size()); }

  int vertex_id(int x, int y) const;
  Point vertex_point(int v) const { return {v % width_, v / width_}; }
  bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }

  const PrimalEdge& edge(int e) const { return edges_.at(e); }
  std::span<const PrimalEdge> edges() const { return edges_; }
  std::optional<int> edge_between(int v1, int v2) const;
  int horizontal_edge(int x, int y) const { return y * (width_ - 1) + x; }
  int vertical_edge(int x, int y) const { return height_ * (width_ - 1) + y * width_ + x; }

  // Dual vertex of the face whose lower-left primal vertex is (fx, fy), fx in [-1, W-1].
  int dual_id(int fx, int fy) const { return (fy + 1) * (width_ + 1) + (fx + 1); }
  const DualVertex& dual(int d) const { return duals_.at(d); }
  std::span<const DualVertex> duals() const { return duals_; }
  // Primal edge crossed by the dual edge d1-d2; nullopt when both sit on the ring
  // outside the rectangle or when they are not adjacent.
  std::optional<int> edge_crossed(int d1, int d2) const;
  bool dual_adjacent(int d1, int d2) const;

  const Corner& corner(int c) const;
  std::span<const Corner> corners() const { return corners_; }
  int corner_id(int v, Quadrant q) const { return 4 * v + static_cast<int>(q); }
  int corner_by_spec(int x, int y, Quadrant q) const;
  int corner_by_spec(const CornerSpec& s) const { return corner_by_spec(s.x, s.y, s.quadrant); }
  CornerSpec corner_spec(int c) const;
  PhaseEighth corner_orientation(int c) const { return PhaseEighth(corner(c).orientation_eighth); }
  bool on_boundary_ring(int c) const { return duals_[corner(c).w].ring; }

  const MidEdge& mid_edge(int m) const { return mid_edges_.at(m); }
  std::span<const MidEdge> mid_edges() const { return mid_edges_; }

  // Loop successor of corner c when its forward edge is open / closed or absent.
  int next_if_open(int c) const { return next_open_[c]; }
  int next_if_closed(int c) const { return next_closed_[c]; }
  int forward_edge(int c) const { return corners_[c].mid_edges[0]; }
  int backward_edge(int c) const { return corners_[c].mid_edges[1]; }

  // Positions in quarter-lattice units (primal vertex (x,y) sits at (4x,4y)).
  Point corner_position4(int c) const;
  Point mid_edge_position4(int m) const;

 private:
  int width_;
  int height_;
  std::vector<PrimalEdge> edges_;
  std::vector<DualVertex> duals_;
  std::vector<Corner> corners_;
  std::vector<MidEdge> mid_edges_;
  std::vector<int> next_open_;
  std::vector<int> next_closed_;
};

std::string domain_json(const LatticeDomain& d, bool with_adjacency);

}  // namespace fkf
