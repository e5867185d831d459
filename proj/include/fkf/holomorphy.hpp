#pragma once

#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "fkf/engines.hpp"
#include "fkf/lattice.hpp"
#include "fkf/measures.hpp"
#include "fkf/pfaffian.hpp"

namespace fkf {

// sqrt(-i / o(zeta)) as the sixteenth phase with exponent -2 - a(zeta), a in {1,3,5,7}.
PhaseSixteenth rotation_phase(const LatticeDomain& d, int corner);
// P_nu[x] = Re(x conj(nu) / |nu|).
double project(std::complex<double> x, std::complex<double> nu);

struct FieldOptions {
  bool require_critical = true;
  double tolerance = 1e-12;
  EnumerationOptions enumeration{};
};

struct MidEdgeField {
  std::vector<int> fixed;
  ModelParams params;
  std::vector<double> corner_values;           // f(fixed..., zeta); 0 at fixed corners
  std::vector<std::complex<double>> h;         // rotation_phase(zeta) * corner_values
  std::vector<std::complex<double>> values;    // h(NW) + h(SE) per mid-edge
  std::vector<std::complex<double>> alternate; // h(NE) + h(SW) per mid-edge
  std::vector<char> defined;                   // no fixed corner among the four
  double max_pairing_discrepancy = 0.0;
};

MidEdgeField build_midedge_field(const LatticeDomain& d, const ModelParams& params, std::span<const int> fixed,
                                 const FieldOptions& opts = {});

bool mid_edge_touches(const LatticeDomain& d, int mid_edge, std::span<const int> corners);
std::vector<int> sholo_eligible_corners(const LatticeDomain& d, const MidEdgeField& field);
double sholo_residual(const LatticeDomain& d, const MidEdgeField& field, int corner);

enum class ContourKind { Vertex, Face };
struct CauchySum {
  ContourKind kind = ContourKind::Vertex;
  Point center4;
  double residual = 0.0;
};
// Discrete contour sum of H around every interior vertex and face whose four mid-edges are defined.
std::vector<CauchySum> cauchy_sums(const LatticeDomain& d, const MidEdgeField& field);

// The corner point-symmetric to `corner` through mid-edge m.
int opposite_corner(const LatticeDomain& d, int mid_edge, int corner);

// (f+, f-) at fixed[j]: the extension through its forward and backward mid-edge.
// A boundary stub yields NaN for that side.
std::pair<std::complex<double>, std::complex<double>> f_plus_minus(const LatticeDomain& d, const MidEdgeField& field,
                                                                   int j);
std::pair<std::complex<double>, std::complex<double>> f_plus_minus(const LatticeDomain& d, const ModelParams& params,
                                                                   std::span<const int> fixed, int j,
                                                                   const FieldOptions& opts = {});

struct ResidueCheck {
  int j = 0;
  bool plus = true;
  std::complex<double> lhs;
  std::complex<double> rhs;
  double difference = 0.0;
};

// f+-(z1..z_{2n-1}, z_j) against (-1)^{j+1} f(..., z_j omitted, ...) f+-(z_j, z_j), j 1-based.
std::vector<ResidueCheck> residue_factorization_check(const LatticeDomain& d, const ModelParams& params,
                                                      std::span<const int> fixed, const FieldOptions& opts = {});

// max over defined mid-edges of |F(fixed, z) - sum_j (-1)^{j+1} f(fixed without j) F(z_j, z)|.
double r_function_max(const LatticeDomain& d, const ModelParams& params, std::span<const int> fixed,
                       const FieldOptions& opts = {});

struct PfaffianReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double difference = 0.0;
  DenseMatrix<double> matrix;
};

PfaffianReport pfaffian_identity_check(const LatticeDomain& d, const ModelParams& params,
                                       std::span<const int> insertions, const FieldOptions& opts = {});

}  // namespace fkf
