#pragma once

// Discrete energy pieces on a fractured mesh: cached quadrature data, the
// consistent mass matrix, bulk strain energy, momentum energy, and the
// interface opening maps with their first and second derivatives.

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <array>
#include <vector>

#include "conefrac/material.hpp"
#include "conefrac/mesh.hpp"

namespace conefrac::assembly {

// Reference-configuration data at one bulk quadrature point.
struct BulkQuad {
  double w;                          // w_q * det J, reference measure
  Eigen::Matrix<double, 6, 2> dNdX;  // shape gradients wrt reference coords
};

// Reference data at one interface Gauss point (3 per interface).
struct FaceQuad {
  double omega;             // w_q * |dX/deta|, meters
  Eigen::Vector3d N;        // edge shape values, (end1, end2, mid) order
  Eigen::Vector3d dN;       // d/deta of the same
  Eigen::Vector2d dXdeta;   // reference tangent, unnormalized
  double ref_len;           // |dXdeta|
};

struct SystemOptions {
  int energy_rule = 3;  // bulk quadrature for energies: 3 or 6 points
  double dt = 1.0;
};

// Immutable per-run context shared by the objectives and the stepper.
struct System {
  mesh::FracturedMesh fm;
  std::vector<material::BulkParams> part_material;  // indexed by part
  material::CohesiveParams coh;
  mesh::BoundaryOperator bc;
  mesh::LinearInequalities contact;
  double dt = 1.0;

  std::vector<std::vector<BulkQuad>> bulk_quad;    // [element][q]
  std::vector<std::array<FaceQuad, 3>> face_quad;  // [interface][q]
  // 12 DOFs touched by an interface: side A nodes (end1, end2, mid) x/y
  // interleaved, then side B.
  std::vector<std::array<int, 12>> iface_dofs;
  Eigen::VectorXd face_w;  // flattened omega, Gauss point g = 3*iface + q
  Eigen::VectorXd zeta;    // per-point barrier weight 1e4 * G_c * omega

  Eigen::SparseMatrix<double> mass;  // consistent, always the 6-point rule
  Eigen::VectorXd fext;              // applied nodal loads, defaults to zero
  std::vector<int> free_index;       // full DOF -> index into x, or -1

  int n_dofs() const { return fm.n_dofs(); }
  int n_free() const { return bc.n_free(); }
  int n_gp() const { return static_cast<int>(face_quad.size()) * 3; }
};

System build_system(mesh::FracturedMesh fm,
                    std::vector<material::BulkParams> part_material,
                    const material::CohesiveParams& coh,
                    mesh::BoundaryOperator bc, mesh::LinearInequalities contact,
                    const SystemOptions& opt = {});

// Total bulk strain energy b0(u) at a full displacement vector.  On an
// inverted element returns false with value = +inf (and the element id if
// requested); grad and Hessian triplets are accumulated in full-DOF indexing.
bool bulk_energy(const System& sys, const Eigen::VectorXd& u, double& value,
                 Eigen::VectorXd* grad = nullptr,
                 std::vector<Eigen::Triplet<double>>* hess = nullptr,
                 int* bad_element = nullptr);

// m0(u) = (2/dt^2) w^T M w with w = u - u_prev - (dt/2) v_prev; the Hessian
// is the constant (4/dt^2) M and is not re-emitted here.
double momentum_energy(const System& sys, const Eigen::VectorXd& u,
                       const Eigen::VectorXd& u_prev,
                       const Eigen::VectorXd& v_prev,
                       Eigen::VectorXd* grad = nullptr);

// Opening maps at one interface Gauss point.  c1 is the normal jump
// (positive = separation toward side B), c2 the mixity-scaled tangential
// jump.  Derivatives are with respect to the 12 local DOFs in
// System::iface_dofs order.
struct OpeningMap {
  bool degenerate = false;  // current mid-surface tangent collapsed
  double c1 = 0.0, c2 = 0.0;
  Eigen::Matrix<double, 12, 1> dc1, dc2;
  Eigen::Matrix<double, 12, 12> d2c1, d2c2;
};

// derivs: 0 = values only, 1 = and gradients, 2 = and Hessians.
OpeningMap opening_map(const System& sys, int iface, int q,
                       const Eigen::VectorXd& u, int derivs);

// Effective opening sqrt(c1^2 + c2^2) at every Gauss point; drives the
// damage update.  Throws on a degenerate interface.
Eigen::VectorXd effective_openings(const System& sys, const Eigen::VectorXd& u);

}  // namespace conefrac::assembly
