#pragma once

// Mesh input, node duplication with interface-element insertion, boundary
// selection operators, and node-pair contact inequalities.

#include <Eigen/Dense>

#include <array>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace conefrac::mesh {

struct MeshError : std::runtime_error {
  explicit MeshError(const std::string& what) : std::runtime_error(what) {}
};

// 6-node triangles: corners 0-2 counterclockwise, then midsides on edges
// (0-1), (1-2), (2-0).
struct Mesh {
  std::vector<Eigen::Vector2d> nodes;
  std::vector<std::array<int, 6>> elements;
  std::map<std::string, std::vector<int>> nodesets;
  std::vector<int> element_part;  // connected component, 0-based
  int n_parts = 0;
};

// Plain-text format:
//   nodes N elements M
//   <id x y>              N lines, ids must be 0..N-1 in order
//   <id n1 n2 n3 n4 n5 n6>  M lines, ids 0..M-1 in order
//   nodeset NAME K id...  optional trailing blocks
// Corner ordering is validated through the positive-Jacobian check at the
// interior quadrature points of every element.
Mesh load_mesh(const std::string& path);

// One zero-thickness interface element per interior edge of a part that
// fractures.  Both sides list their copies of the same geometric edge nodes
// in the same order (end1, end2, midside); the side naming is chosen so that
// rotating the end1->end2 tangent by +90 degrees gives a normal pointing from
// side A into side B.
struct InterfaceElement {
  int elem_a = -1, elem_b = -1;
  std::array<int, 3> nodes_a{};  // duplicated-node ids on side A
  std::array<int, 3> nodes_b{};  // matching copies on side B
  int part = 0;
};

struct FracturedMesh {
  std::vector<Eigen::Vector2d> nodes;  // after duplication
  std::vector<std::array<int, 6>> elements;
  std::vector<int> element_part;
  int n_parts = 0;
  std::vector<InterfaceElement> interfaces;
  std::map<std::string, std::vector<int>> nodesets;  // expanded to copies
  std::vector<int> node_orig;  // duplicated id -> original id

  int n_nodes() const { return static_cast<int>(nodes.size()); }
  int n_dofs() const { return 2 * n_nodes(); }
};

// Duplicates the nodes of every element belonging to a cohesive part (so the
// node count there becomes 6 x elements) and inserts interface elements on
// the interior edges of those parts.  Parts with part_cohesive[p] == false
// keep their shared connectivity and get no interfaces.  An empty flag vector
// means every part fractures.
FracturedMesh insert_interfaces(const Mesh& m,
                                const std::vector<bool>& part_cohesive = {});

// One prescribed degree of freedom: u_bc(t) = u0 + t * vel.
struct DofConstraint {
  int dof = -1;
  double u0 = 0.0;
  double vel = 0.0;
};

// Selection-based boundary operator.  R is the 0/1 column selection of free
// DOFs (never formed densely); B selects the constrained DOFs.
struct BoundaryOperator {
  int n_total = 0;
  std::vector<int> free_dofs;     // x index -> full dof
  std::vector<int> constrained;   // B row -> full dof, ascending
  Eigen::VectorXd u0, vel;        // full length, zero on free DOFs

  int n_free() const { return static_cast<int>(free_dofs.size()); }
  int n_constrained() const { return static_cast<int>(constrained.size()); }

  // Prescribed displacement field at time t (zero on free DOFs).
  Eigen::VectorXd u_bc(double t) const { return u0 + t * vel; }

  // u = R x + u_bc
  Eigen::VectorXd to_full(const Eigen::VectorXd& x,
                          const Eigen::VectorXd& ubc) const;
  // x = R^T (u - u_bc); exact left inverse of to_full
  Eigen::VectorXd to_free(const Eigen::VectorXd& u,
                          const Eigen::VectorXd& ubc) const;
};

// Builds the operator from explicit per-DOF constraints.  Conflicting
// constraints on one DOF (differing u0 or vel) raise MeshError; exact
// duplicates (overlapping node sets prescribing the same motion) are merged.
BoundaryOperator build_bc(const FracturedMesh& fm,
                          const std::vector<DofConstraint>& constraints);

// Contact inequality u[dof_hi] - u[dof_lo] >= rhs (one coordinate axis per
// row).  rhs stores gap_min - (X_hi - X_lo) so the slack at u is simply
// u[dof_hi] - u[dof_lo] - rhs, equal to the physical separation minus
// gap_min.
struct ContactRow {
  int dof_lo = -1, dof_hi = -1;
  double rhs = 0.0;
  int surface = 0;
};

struct LinearInequalities {
  std::vector<ContactRow> rows;
  int n_rows() const { return static_cast<int>(rows.size()); }
  // Slack vector E0 u - a0.
  Eigen::VectorXd slack(const Eigen::VectorXd& u) const;
};

struct ContactSurfaceSpec {
  std::vector<std::pair<int, int>> pairs;  // (side-1 node, side-2 node), original ids
  int axis = 0;                            // 0 = x, 1 = y
  double gap_min = 0.0;
};

// Expands each original node pair over all duplicated copies of the two
// nodes, one row per copy pair.
LinearInequalities build_contact(const FracturedMesh& fm,
                                 const std::vector<ContactSurfaceSpec>& surfaces);

}  // namespace conefrac::mesh
