#pragma once

// Reference-element tables for the 6-node quadratic triangle and its
// quadratic edges: shape functions, derivatives, and quadrature rules.

#include <Eigen/Dense>

#include <array>
#include <vector>

namespace conefrac::fem {

struct QuadPoint2d {
  double xi, eta, w;
};

struct QuadPoint1d {
  double eta, w;
};

// Interior rules on the reference triangle {xi>=0, eta>=0, xi+eta<=1};
// weights sum to the reference area 1/2.  The 3-point rule is exact to
// degree 2, the 6-point rule to degree 4 (used for the consistent mass, whose
// integrand N_a N_b is quartic and whose rank demands >= 6 points).
const std::vector<QuadPoint2d>& tri_rule_3();
const std::vector<QuadPoint2d>& tri_rule_6();

// 3-point Gauss rule on [-1, 1] (degree 5), used along interface edges.
const std::vector<QuadPoint1d>& edge_rule_3();

// TRI6 shape functions in area coordinates L = (1-xi-eta, xi, eta):
// corner a: L_a (2 L_a - 1); midside between corners (a,b): 4 L_a L_b.
// Node order: corners 0,1,2 then midsides (0-1), (1-2), (2-0).
Eigen::Matrix<double, 6, 1> tri6_N(double xi, double eta);
// Derivatives with respect to (xi, eta), one row per node.
Eigen::Matrix<double, 6, 2> tri6_dN(double xi, double eta);

// Quadratic edge with parameter eta in [-1, 1]; node order (end at -1,
// end at +1, midside at 0).
Eigen::Vector3d edge_N(double eta);
Eigen::Vector3d edge_dN(double eta);

// Isoparametric Jacobian dx/d(xi,eta) of a TRI6 element with node positions
// X (6x2, rows are nodes).
Eigen::Matrix2d tri6_jacobian(const Eigen::Matrix<double, 6, 2>& X, double xi,
                              double eta);

}  // namespace conefrac::fem
