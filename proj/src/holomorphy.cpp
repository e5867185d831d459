#include "fkf/holomorphy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fkf/error.hpp"
#include "fkf/observables.hpp"

namespace fkf {

PhaseSixteenth rotation_phase(const LatticeDomain& d, int corner) {
  return PhaseSixteenth(-2 - d.corner(corner).orientation_eighth);
}

double project(std::complex<double> x, std::complex<double> nu) { return (x * std::conj(nu)).real() / std::abs(nu); }

bool mid_edge_touches(const LatticeDomain& d, int mid_edge, std::span<const int> corners) {
  for (int c : d.mid_edge(mid_edge).corners())
    if (std::find(corners.begin(), corners.end(), c) != corners.end()) return true;
  return false;
}

namespace {

void validate_fixed(const LatticeDomain& d, const ModelParams& params, std::span<const int> fixed, bool critical) {
  if (fixed.empty()) throw InvalidArgument("field needs at least one fixed insertion");
  if (fixed.size() % 2 == 0) throw InvalidArgument("field needs an odd number of fixed insertions");
  InsertionSet::make(d, std::vector<int>(fixed.begin(), fixed.end()));
  if (!corners_spaced(d, fixed)) throw InvalidArgument("fixed insertions must not share primal or dual vertices");
  if (critical && !params.is_critical()) throw InvalidArgument("s-holomorphicity needs critical parameters (t = 1)");
}

double f_without(const LatticeDomain& d, const ModelParams& params, std::span<const int> fixed, std::size_t j,
                 const EnumerationOptions& opts) {
  std::vector<int> sub;
  for (std::size_t k = 0; k < fixed.size(); ++k)
    if (k != j) sub.push_back(fixed[k]);
  if (sub.empty()) return 1.0;
  return fermion_exact(d, params, sub, opts).value.real();
}

}  // namespace

MidEdgeField build_midedge_field(const LatticeDomain& d, const ModelParams& params, std::span<const int> fixed,
                                 const FieldOptions& opts) {
  validate_fixed(d, params, fixed, opts.require_critical);
  MidEdgeField field;
  field.fixed.assign(fixed.begin(), fixed.end());
  field.params = params;
  const int nc = d.corner_count();
  std::vector<char> is_fixed(nc, 0);
  for (int c : fixed) is_fixed[c] = 1;

  EnumerationOptions eo = opts.enumeration;
  eo.needs_loops = true;
  auto res = enumerate_reduce(
      d, params, nc,
      [&](const ConfigContext& ctx, std::span<std::complex<double>> out) {
        thread_local std::vector<int> ins;
        ins.assign(fixed.begin(), fixed.end());
        ins.push_back(0);
        for (int c = 0; c < nc; ++c) {
          if (is_fixed[c]) continue;
          ins.back() = c;
          out[c] = config_contribution(d, ctx.loops(), ins);
        }
      },
      eo);

  field.corner_values.resize(nc);
  field.h.resize(nc);
  for (int c = 0; c < nc; ++c) {
    field.corner_values[c] = is_fixed[c] ? 0.0 : res.mean(c).real();
    field.h[c] = rotation_phase(d, c).value() * field.corner_values[c];
  }
  const int nm = d.mid_edge_count();
  field.values.resize(nm);
  field.alternate.resize(nm);
  field.defined.resize(nm);
  for (int m = 0; m < nm; ++m) {
    const MidEdge& z = d.mid_edge(m);
    field.defined[m] = !mid_edge_touches(d, m, fixed);
    field.values[m] = field.h[z.nw] + field.h[z.se];
    field.alternate[m] = field.h[z.ne] + field.h[z.sw];
    if (field.defined[m])
      field.max_pairing_discrepancy = std::max(field.max_pairing_discrepancy, std::abs(field.values[m] - field.alternate[m]));
  }
  if (opts.require_critical && field.max_pairing_discrepancy > opts.tolerance)
    throw InvariantViolation("mid-edge pairings disagree at criticality");
  return field;
}

std::vector<int> sholo_eligible_corners(const LatticeDomain& d, const MidEdgeField& field) {
  std::vector<int> out;
  for (const Corner& c : d.corners()) {
    if (std::find(field.fixed.begin(), field.fixed.end(), c.id) != field.fixed.end()) continue;
    if (c.mid_edges[0] == kNone || c.mid_edges[1] == kNone) continue;
    if (!field.defined[c.mid_edges[0]] || !field.defined[c.mid_edges[1]]) continue;
    out.push_back(c.id);
  }
  return out;
}

double sholo_residual(const LatticeDomain& d, const MidEdgeField& field, int corner) {
  const Corner& c = d.corner(corner);
  if (std::find(field.fixed.begin(), field.fixed.end(), corner) != field.fixed.end())
    throw InvalidArgument("s-holomorphicity residual is undefined at an insertion");
  if (c.mid_edges[0] == kNone || c.mid_edges[1] == kNone)
    throw InvalidArgument("corner has a single in-domain mid-edge");
  if (!field.defined[c.mid_edges[0]] || !field.defined[c.mid_edges[1]])
    throw InvalidArgument("corner is adjacent to an insertion");
  const std::complex<double> nu = rotation_phase(d, corner).value();
  double proj[2];
  for (int s = 0; s < 2; ++s) {
    const int m = c.mid_edges[s];
    const MidEdge& z = d.mid_edge(m);
    // use the diagonal of z that does not pass through this corner
    const bool on_first = corner == z.nw || corner == z.se;
    const std::complex<double> H = on_first ? field.alternate[m] : field.values[m];
    proj[s] = project(H, nu);
  }
  return std::abs(proj[0] - proj[1]);
}

std::vector<CauchySum> cauchy_sums(const LatticeDomain& d, const MidEdgeField& field) {
  std::vector<CauchySum> out;
  auto contour = [&](ContourKind kind, Point center4, const std::array<int, 4>& mids) {
    for (int m : mids)
      if (!field.defined[m]) return;
    std::complex<double> sum = 0.0;
    for (int k = 0; k < 4; ++k) {
      Point next = d.mid_edge_position4(mids[(k + 1) % 4]);
      Point prev = d.mid_edge_position4(mids[(k + 3) % 4]);
      sum += field.values[mids[k]] * std::complex<double>((next.x - prev.x) / 4.0, (next.y - prev.y) / 4.0);
    }
    out.push_back({kind, center4, std::abs(sum)});
  };
  for (int y = 1; y + 1 < d.height(); ++y)
    for (int x = 1; x + 1 < d.width(); ++x)
      contour(ContourKind::Vertex, {4 * x, 4 * y},
              {d.horizontal_edge(x, y), d.vertical_edge(x, y), d.horizontal_edge(x - 1, y), d.vertical_edge(x, y - 1)});
  for (int y = 0; y + 1 < d.height(); ++y)
    for (int x = 0; x + 1 < d.width(); ++x)
      contour(ContourKind::Face, {4 * x + 2, 4 * y + 2},
              {d.vertical_edge(x + 1, y), d.horizontal_edge(x, y + 1), d.vertical_edge(x, y), d.horizontal_edge(x, y)});
  return out;
}

int opposite_corner(const LatticeDomain& d, int mid_edge, int corner) {
  const MidEdge& z = d.mid_edge(mid_edge);
  if (corner == z.nw) return z.se;
  if (corner == z.se) return z.nw;
  if (corner == z.ne) return z.sw;
  if (corner == z.sw) return z.ne;
  throw InvalidArgument("corner is not adjacent to the mid-edge");
}

std::pair<std::complex<double>, std::complex<double>> f_plus_minus(const LatticeDomain& d, const MidEdgeField& field,
                                                                   int j) {
  if (j < 0 || j >= static_cast<int>(field.fixed.size())) throw InvalidArgument("insertion index out of range");
  const int zeta = field.fixed[j];
  const std::complex<double> rot = rotation_phase(d, zeta).value();
  std::complex<double> side[2];
  for (int s = 0; s < 2; ++s) {
    const int m = d.corner(zeta).mid_edges[s];
    if (m == kNone) {
      side[s] = {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
      continue;
    }
    const int o = opposite_corner(d, m, zeta);
    std::complex<double> sum = -field.h[o];
    for (int c : d.mid_edge(m).corners()) {
      if (c == zeta) continue;
      if (std::find(field.fixed.begin(), field.fixed.end(), c) != field.fixed.end())
        throw InvalidArgument("another insertion touches the mid-edge of the residue corner");
      if (c != o) sum += field.h[c];
    }
    side[s] = sum / rot;
  }
  return {side[0], side[1]};
}

std::pair<std::complex<double>, std::complex<double>> f_plus_minus(const LatticeDomain& d, const ModelParams& params,
                                                                   std::span<const int> fixed, int j,
                                                                   const FieldOptions& opts) {
  return f_plus_minus(d, build_midedge_field(d, params, fixed, opts), j);
}

std::vector<ResidueCheck> residue_factorization_check(const LatticeDomain& d, const ModelParams& params,
                                                      std::span<const int> fixed, const FieldOptions& opts) {
  const MidEdgeField all = build_midedge_field(d, params, fixed, opts);
  std::vector<ResidueCheck> out;
  for (std::size_t j = 0; j < fixed.size(); ++j) {
    const int single[1] = {fixed[j]};
    const auto diag = f_plus_minus(d, build_midedge_field(d, params, single, opts), 0);
    const auto full = f_plus_minus(d, all, static_cast<int>(j));
    const double coeff = (j % 2 == 0 ? 1.0 : -1.0) * f_without(d, params, fixed, j, opts.enumeration);
    for (int s = 0; s < 2; ++s) {
      const auto lhs = s == 0 ? full.first : full.second;
      const auto rhs = coeff * (s == 0 ? diag.first : diag.second);
      if (std::isnan(lhs.real())) continue;
      out.push_back({static_cast<int>(j), s == 0, lhs, rhs, std::abs(lhs - rhs)});
    }
  }
  return out;
}

double r_function_max(const LatticeDomain& d, const ModelParams& params, std::span<const int> fixed,
                      const FieldOptions& opts) {
  const MidEdgeField all = build_midedge_field(d, params, fixed, opts);
  std::vector<std::complex<double>> r = all.values;
  for (std::size_t j = 0; j < fixed.size(); ++j) {
    const int single[1] = {fixed[j]};
    const MidEdgeField fj = build_midedge_field(d, params, single, opts);
    const double coeff = (j % 2 == 0 ? 1.0 : -1.0) * f_without(d, params, fixed, j, opts.enumeration);
    for (int m = 0; m < d.mid_edge_count(); ++m) r[m] -= coeff * fj.values[m];
  }
  double worst = 0.0;
  for (int m = 0; m < d.mid_edge_count(); ++m)
    if (all.defined[m]) worst = std::max(worst, std::abs(r[m]));
  return worst;
}

PfaffianReport pfaffian_identity_check(const LatticeDomain& d, const ModelParams& params,
                                       std::span<const int> insertions, const FieldOptions& opts) {
  const int n = static_cast<int>(insertions.size());
  if (n == 0 || n % 2) throw InvalidArgument("pfaffian identity needs an even, non-zero number of insertions");
  InsertionSet::make(d, std::vector<int>(insertions.begin(), insertions.end()));
  if (!corners_spaced(d, insertions)) throw InvalidArgument("insertions must not share primal or dual vertices");
  if (opts.require_critical && !params.is_critical()) throw InvalidArgument("pfaffian identity is asserted only at t = 1");
  std::vector<std::vector<int>> sets{std::vector<int>(insertions.begin(), insertions.end())};
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) sets.push_back({insertions[j], insertions[k]});
  const auto values = fermion_exact_batch(d, params, sets, opts.enumeration);
  PfaffianReport rep;
  rep.matrix = DenseMatrix<double>::Zero(n, n);
  std::size_t idx = 1;
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) {
      rep.matrix(j, k) = values[idx];
      rep.matrix(k, j) = -values[idx];
      ++idx;
    }
  rep.lhs = values[0];
  rep.rhs = pfaffian(SkewMatrix<double>(rep.matrix));
  rep.difference = std::abs(rep.lhs - rep.rhs);
  return rep;
}

}  // namespace fkf
