#include "fkf/lattice.hpp"

#include <charconv>
#include <cstdlib>

#include <json.hpp>

#include "fkf/error.hpp"

namespace fkf {

std::string_view quadrant_name(Quadrant q) {
  switch (q) {
    case Quadrant::NE: return "NE";
    case Quadrant::NW: return "NW";
    case Quadrant::SW: return "SW";
    case Quadrant::SE: return "SE";
  }
  return "?";
}

std::optional<Quadrant> parse_quadrant(std::string_view s) {
  if (s == "NE") return Quadrant::NE;
  if (s == "NW") return Quadrant::NW;
  if (s == "SW") return Quadrant::SW;
  if (s == "SE") return Quadrant::SE;
  return std::nullopt;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

bool parse_int(std::string_view s, int& out) {
  s = trim(s);
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

std::optional<CornerSpec> parse_corner_spec(std::string_view s) {
  auto c1 = s.find(',');
  if (c1 == std::string_view::npos) return std::nullopt;
  auto c2 = s.find(',', c1 + 1);
  if (c2 == std::string_view::npos) return std::nullopt;
  CornerSpec spec;
  if (!parse_int(s.substr(0, c1), spec.x)) return std::nullopt;
  if (!parse_int(s.substr(c1 + 1, c2 - c1 - 1), spec.y)) return std::nullopt;
  auto q = parse_quadrant(trim(s.substr(c2 + 1)));
  if (!q) return std::nullopt;
  spec.quadrant = *q;
  return spec;
}

std::vector<CornerSpec> parse_corner_list(std::string_view s) {
  std::vector<CornerSpec> out;
  if (trim(s).empty()) return out;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto end = s.find(';', start);
    if (end == std::string_view::npos) end = s.size();
    auto item = s.substr(start, end - start);
    auto spec = parse_corner_spec(item);
    if (!spec) throw InvalidArgument("malformed corner spec '" + std::string(item) + "' (expected x,y,Q)");
    out.push_back(*spec);
    start = end + 1;
  }
  return out;
}

LatticeDomain::LatticeDomain(int width, int height) : width_(width), height_(height) {
  if (width < 2 || height < 2) throw InvalidArgument("domain needs width >= 2 and height >= 2");
  if (width > 4096 || height > 4096) throw InvalidArgument("domain side too large");
  const int W = width, H = height;

  edges_.reserve(static_cast<std::size_t>(H * (W - 1) + W * (H - 1)));
  for (int y = 0; y < H; ++y)
    for (int x = 0; x + 1 < W; ++x) edges_.push_back({vertex_id(x, y), vertex_id(x + 1, y), Axis::Horizontal});
  for (int y = 0; y + 1 < H; ++y)
    for (int x = 0; x < W; ++x) edges_.push_back({vertex_id(x, y), vertex_id(x, y + 1), Axis::Vertical});

  for (int fy = -1; fy <= H - 1; ++fy)
    for (int fx = -1; fx <= W - 1; ++fx) {
      bool ring = fx == -1 || fy == -1 || fx == W - 1 || fy == H - 1;
      duals_.push_back({{2 * fx + 1, 2 * fy + 1}, ring});
    }

  corners_.resize(static_cast<std::size_t>(4 * W * H));
  next_open_.assign(corners_.size(), kNone);
  next_closed_.assign(corners_.size(), kNone);
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      const int v = vertex_id(x, y);
      const int up = y + 1 < H ? vertical_edge(x, y) : kNone;
      const int down = y > 0 ? vertical_edge(x, y - 1) : kNone;
      const int right = x + 1 < W ? horizontal_edge(x, y) : kNone;
      const int left = x > 0 ? horizontal_edge(x - 1, y) : kNone;
      for (int qi = 0; qi < 4; ++qi) {
        auto q = static_cast<Quadrant>(qi);
        Corner& c = corners_[corner_id(v, q)];
        c.id = corner_id(v, q);
        c.u = v;
        c.quadrant = q;
        c.orientation_eighth = 2 * qi + 1;
        next_closed_[c.id] = corner_id(v, static_cast<Quadrant>((qi + 1) % 4));
        switch (q) {
          case Quadrant::NE:
            c.w = dual_id(x, y);
            c.mid_edges = {up, right};
            if (up != kNone) next_open_[c.id] = corner_id(vertex_id(x, y + 1), Quadrant::SE);
            break;
          case Quadrant::NW:
            c.w = dual_id(x - 1, y);
            c.mid_edges = {left, up};
            if (left != kNone) next_open_[c.id] = corner_id(vertex_id(x - 1, y), Quadrant::NE);
            break;
          case Quadrant::SW:
            c.w = dual_id(x - 1, y - 1);
            c.mid_edges = {down, left};
            if (down != kNone) next_open_[c.id] = corner_id(vertex_id(x, y - 1), Quadrant::NW);
            break;
          case Quadrant::SE:
            c.w = dual_id(x, y - 1);
            c.mid_edges = {right, down};
            if (right != kNone) next_open_[c.id] = corner_id(vertex_id(x + 1, y), Quadrant::SW);
            break;
        }
      }
    }
  }

  mid_edges_.reserve(edges_.size());
  for (int e = 0; e < edge_count(); ++e) {
    const PrimalEdge& pe = edges_[e];
    MidEdge m;
    m.id = e;
    m.edge = e;
    m.axis = pe.axis;
    if (pe.axis == Axis::Horizontal) {
      m.nw = corner_id(pe.a, Quadrant::NE);
      m.ne = corner_id(pe.b, Quadrant::NW);
      m.se = corner_id(pe.b, Quadrant::SW);
      m.sw = corner_id(pe.a, Quadrant::SE);
    } else {
      m.nw = corner_id(pe.b, Quadrant::SW);
      m.ne = corner_id(pe.b, Quadrant::SE);
      m.se = corner_id(pe.a, Quadrant::NE);
      m.sw = corner_id(pe.a, Quadrant::NW);
    }
    mid_edges_.push_back(m);
  }
}

int LatticeDomain::vertex_id(int x, int y) const {
  if (!contains(x, y)) throw InvalidArgument("vertex (" + std::to_string(x) + "," + std::to_string(y) + ") outside domain");
  return y * width_ + x;
}

std::optional<int> LatticeDomain::edge_between(int v1, int v2) const {
  if (v1 > v2) std::swap(v1, v2);
  if (v1 < 0 || v2 >= vertex_count()) return std::nullopt;
  Point a = vertex_point(v1), b = vertex_point(v2);
  if (a.y == b.y && b.x == a.x + 1) return horizontal_edge(a.x, a.y);
  if (a.x == b.x && b.y == a.y + 1) return vertical_edge(a.x, a.y);
  return std::nullopt;
}

bool LatticeDomain::dual_adjacent(int d1, int d2) const {
  if (d1 < 0 || d2 < 0 || d1 >= dual_count() || d2 >= dual_count()) return false;
  Point a = duals_[d1].doubled, b = duals_[d2].doubled;
  int dx = std::abs(a.x - b.x), dy = std::abs(a.y - b.y);
  return (dx == 2 && dy == 0) || (dx == 0 && dy == 2);
}

std::optional<int> LatticeDomain::edge_crossed(int d1, int d2) const {
  if (!dual_adjacent(d1, d2)) return std::nullopt;
  Point a = duals_[d1].doubled, b = duals_[d2].doubled;
  if (a.x > b.x || a.y > b.y) std::swap(a, b);
  const int fx = (a.x - 1) / 2, fy = (a.y - 1) / 2;
  if (a.y == b.y) {
    // horizontal dual step crosses the vertical primal edge at x = fx + 1
    if (fx + 1 < 0 || fx + 1 >= width_ || fy < 0 || fy + 1 >= height_) return std::nullopt;
    return vertical_edge(fx + 1, fy);
  }
  if (fx < 0 || fx + 1 >= width_ || fy + 1 < 0 || fy + 1 >= height_) return std::nullopt;
  return horizontal_edge(fx, fy + 1);
}

const Corner& LatticeDomain::corner(int c) const {
  if (c < 0 || c >= corner_count()) throw InvalidArgument("invalid corner id " + std::to_string(c));
  return corners_[c];
}

int LatticeDomain::corner_by_spec(int x, int y, Quadrant q) const { return corner_id(vertex_id(x, y), q); }

CornerSpec LatticeDomain::corner_spec(int c) const {
  const Corner& k = corner(c);
  Point p = vertex_point(k.u);
  return {p.x, p.y, k.quadrant};
}

Point LatticeDomain::corner_position4(int c) const {
  const Corner& k = corner(c);
  Point p = vertex_point(k.u);
  static constexpr int dx[4] = {1, -1, -1, 1};
  static constexpr int dy[4] = {1, 1, -1, -1};
  int q = static_cast<int>(k.quadrant);
  return {4 * p.x + dx[q], 4 * p.y + dy[q]};
}

Point LatticeDomain::mid_edge_position4(int m) const {
  const PrimalEdge& e = edges_.at(m);
  Point a = vertex_point(e.a), b = vertex_point(e.b);
  return {2 * (a.x + b.x), 2 * (a.y + b.y)};
}

std::string domain_json(const LatticeDomain& d, bool with_adjacency) {
  nlohmann::json j;
  j["width"] = d.width();
  j["height"] = d.height();
  int ring = 0;
  for (const auto& dv : d.duals()) ring += dv.ring ? 1 : 0;
  j["counts"] = {{"vertices", d.vertex_count()},
                 {"edges", d.edge_count()},
                 {"dual_vertices", d.dual_count()},
                 {"ring_dual_vertices", ring},
                 {"corners", d.corner_count()},
                 {"mid_edges", d.mid_edge_count()}};
  if (with_adjacency) {
    auto& edges = j["edges"] = nlohmann::json::array();
    for (const auto& e : d.edges())
      edges.push_back({{"a", e.a}, {"b", e.b}, {"axis", e.axis == Axis::Horizontal ? "h" : "v"}});
    auto& duals = j["dual_vertices"] = nlohmann::json::array();
    for (const auto& dv : d.duals()) duals.push_back({{"x2", dv.doubled.x}, {"y2", dv.doubled.y}, {"ring", dv.ring}});
    auto& corners = j["corners"] = nlohmann::json::array();
    for (const auto& c : d.corners())
      corners.push_back({{"id", c.id},
                         {"u", c.u},
                         {"w", c.w},
                         {"quadrant", quadrant_name(c.quadrant)},
                         {"orientation_eighth", c.orientation_eighth},
                         {"mid_edges", c.mid_edges}});
    auto& mids = j["mid_edges"] = nlohmann::json::array();
    for (const auto& m : d.mid_edges())
      mids.push_back({{"id", m.id}, {"edge", m.edge}, {"NW", m.nw}, {"NE", m.ne}, {"SE", m.se}, {"SW", m.sw}});
  }
  return j.dump(2);
}

}  // namespace fkf
