#include "conefrac/fem.hpp"

#include <cmath>

namespace conefrac::fem {

const std::vector<QuadPoint2d>& tri_rule_3() {
  static const std::vector<QuadPoint2d> rule = {
      {1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0},
      {2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0},
      {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0},
  };
  return rule;
}

const std::vector<QuadPoint2d>& tri_rule_6() {
  // Dunavant degree-4 rule.
  static const std::vector<QuadPoint2d> rule = [] {
    const double a = 0.445948490915965;
    const double wa = 0.223381589678011 / 2.0;
    const double b = 0.091576213509771;
    const double wb = 0.109951743655322 / 2.0;
    return std::vector<QuadPoint2d>{
        {a, a, wa},           {1.0 - 2.0 * a, a, wa}, {a, 1.0 - 2.0 * a, wa},
        {b, b, wb},           {1.0 - 2.0 * b, b, wb}, {b, 1.0 - 2.0 * b, wb},
    };
  }();
  return rule;
}

const std::vector<QuadPoint1d>& edge_rule_3() {
  static const std::vector<QuadPoint1d> rule = [] {
    const double g = std::sqrt(3.0 / 5.0);
    return std::vector<QuadPoint1d>{
        {-g, 5.0 / 9.0}, {0.0, 8.0 / 9.0}, {g, 5.0 / 9.0}};
  }();
  return rule;
}

Eigen::Matrix<double, 6, 1> tri6_N(double xi, double eta) {
  const double l1 = 1.0 - xi - eta, l2 = xi, l3 = eta;
  Eigen::Matrix<double, 6, 1> N;
  N << l1 * (2.0 * l1 - 1.0), l2 * (2.0 * l2 - 1.0), l3 * (2.0 * l3 - 1.0),
      4.0 * l1 * l2, 4.0 * l2 * l3, 4.0 * l3 * l1;
  return N;
}

Eigen::Matrix<double, 6, 2> tri6_dN(double xi, double eta) {
  const double l1 = 1.0 - xi - eta, l2 = xi, l3 = eta;
  // dl1 = (-1,-1), dl2 = (1,0), dl3 = (0,1).
  Eigen::Matrix<double, 6, 2> d;
  d.row(0) << -(4.0 * l1 - 1.0), -(4.0 * l1 - 1.0);
  d.row(1) << 4.0 * l2 - 1.0, 0.0;
  d.row(2) << 0.0, 4.0 * l3 - 1.0;
  d.row(3) << 4.0 * (l1 - l2), -4.0 * l2;
  d.row(4) << 4.0 * l3, 4.0 * l2;
  d.row(5) << -4.0 * l3, 4.0 * (l1 - l3);
  return d;
}

Eigen::Vector3d edge_N(double eta) {
  return {0.5 * eta * (eta - 1.0), 0.5 * eta * (eta + 1.0),
          1.0 - eta * eta};
}

Eigen::Vector3d edge_dN(double eta) {
  return {eta - 0.5, eta + 0.5, -2.0 * eta};
}

Eigen::Matrix2d tri6_jacobian(const Eigen::Matrix<double, 6, 2>& X, double xi,
                              double eta) {
  // J_ij = d x_i / d ref_j = sum_a X(a,i) dN(a,j).
  return X.transpose() * tri6_dN(xi, eta);
}

}  // namespace conefrac::fem
