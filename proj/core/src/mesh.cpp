#include "conefrac/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "conefrac/fem.hpp"

namespace conefrac::mesh {

namespace {

// Token reader that tracks line numbers for error reporting.
class Lexer {
 public:
  explicit Lexer(std::istream& in) : in_(in) {}

  bool next(std::string& tok) {
    tok.clear();
    int c;
    while ((c = in_.get()) != EOF) {
      if (c == '\n') {
        // count the newline on the next call so errors on a line's last
        // token report the right line
        if (!tok.empty()) {
          in_.unget();
          return true;
        }
        ++line_;
      } else if (std::isspace(c)) {
        if (!tok.empty()) return true;
      } else {
        tok.push_back(static_cast<char>(c));
      }
    }
    return !tok.empty();
  }

  std::string expect(const char* what) {
    std::string tok;
    if (!next(tok)) fail(std::string("unexpected end of file, expected ") + what);
    return tok;
  }

  long expect_int(const char* what) {
    const std::string tok = expect(what);
    try {
      size_t pos = 0;
      long v = std::stol(tok, &pos);
      if (pos != tok.size()) throw std::invalid_argument(tok);
      return v;
    } catch (const std::exception&) {
      fail("expected integer for " + std::string(what) + ", got '" + tok + "'");
    }
    return 0;  // unreachable
  }

  double expect_double(const char* what) {
    const std::string tok = expect(what);
    try {
      size_t pos = 0;
      double v = std::stod(tok, &pos);
      if (pos != tok.size()) throw std::invalid_argument(tok);
      return v;
    } catch (const std::exception&) {
      fail("expected number for " + std::string(what) + ", got '" + tok + "'");
    }
    return 0.0;  // unreachable
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw MeshError("mesh parse error at line " + std::to_string(line_) + ": " +
                    msg);
  }

  int line() const { return line_; }

 private:
  std::istream& in_;
  int line_ = 1;
};

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

void check_orientation(const Mesh& m) {
  Eigen::Matrix<double, 6, 2> X;
  for (size_t e = 0; e < m.elements.size(); ++e) {
    for (int a = 0; a < 6; ++a) X.row(a) = m.nodes[m.elements[e][a]];
    auto check_at = [&](double xi, double eta) {
      const double det = fem::tri6_jacobian(X, xi, eta).determinant();
      if (!(det > 0.0))
        throw MeshError("element " + std::to_string(e) +
                        " has non-positive Jacobian in the reference "
                        "configuration (check counterclockwise corner order)");
    };
    check_at(0.0, 0.0);
    check_at(1.0, 0.0);
    check_at(0.0, 1.0);
    for (const auto& q : fem::tri_rule_3()) check_at(q.xi, q.eta);
    for (const auto& q : fem::tri_rule_6()) check_at(q.xi, q.eta);
  }
}

void label_parts(Mesh& m) {
  UnionFind uf(static_cast<int>(m.nodes.size()));
  for (const auto& el : m.elements)
    for (int a = 1; a < 6; ++a) uf.unite(el[0], el[a]);

  m.element_part.assign(m.elements.size(), -1);
  std::map<int, int> root_to_part;  // ordered by root; relabel by first element
  int next = 0;
  for (size_t e = 0; e < m.elements.size(); ++e) {
    const int root = uf.find(m.elements[e][0]);
    auto it = root_to_part.find(root);
    if (it == root_to_part.end()) it = root_to_part.emplace(root, next++).first;
    m.element_part[e] = it->second;
  }
  m.n_parts = next;
}

}  // namespace

Mesh load_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open mesh file '" + path + "'");
  Lexer lex(in);

  if (lex.expect("'nodes'") != "nodes") lex.fail("header must start with 'nodes'");
  const long n_nodes = lex.expect_int("node count");
  if (lex.expect("'elements'") != "elements")
    lex.fail("header must contain 'elements'");
  const long n_elems = lex.expect_int("element count");
  if (n_nodes < 1 || n_elems < 1) lex.fail("empty mesh");

  Mesh m;
  m.nodes.resize(n_nodes);
  for (long i = 0; i < n_nodes; ++i) {
    const long id = lex.expect_int("node id");
    if (id != i) lex.fail("node ids must be 0..N-1 in order");
    const double x = lex.expect_double("node x");
    const double y = lex.expect_double("node y");
    m.nodes[i] = {x, y};
  }

  m.elements.resize(n_elems);
  for (long e = 0; e < n_elems; ++e) {
    const long id = lex.expect_int("element id");
    if (id != e) lex.fail("element ids must be 0..M-1 in order");
    for (int a = 0; a < 6; ++a) {
      const long n = lex.expect_int("element node");
      if (n < 0 || n >= n_nodes)
        lex.fail("element " + std::to_string(e) + " references node " +
                 std::to_string(n) + " out of range");
      m.elements[e][a] = static_cast<int>(n);
    }
  }

  std::string tok;
  while (lex.next(tok)) {
    if (tok != "nodeset") lex.fail("expected 'nodeset', got '" + tok + "'");
    const std::string name = lex.expect("nodeset name");
    const long k = lex.expect_int("nodeset size");
    if (m.nodesets.count(name)) lex.fail("duplicate nodeset '" + name + "'");
    std::vector<int>& ids = m.nodesets[name];
    for (long i = 0; i < k; ++i) {
      const long n = lex.expect_int("nodeset entry");
      if (n < 0 || n >= n_nodes)
        lex.fail("nodeset '" + name + "' references node out of range");
      ids.push_back(static_cast<int>(n));
    }
  }

  check_orientation(m);
  label_parts(m);
  return m;
}

FracturedMesh insert_interfaces(const Mesh& m,
                                const std::vector<bool>& part_cohesive) {
  std::vector<bool> cohesive = part_cohesive;
  if (cohesive.empty()) cohesive.assign(m.n_parts, true);
  if (static_cast<int>(cohesive.size()) != m.n_parts)
    throw MeshError("insert_interfaces: cohesive flag count != part count");

  FracturedMesh fm;
  fm.element_part = m.element_part;
  fm.n_parts = m.n_parts;
  fm.elements.resize(m.elements.size());

  std::map<int, int> shared;  // original -> duplicated id, non-cohesive parts
  // copies[orig] lists all duplicated ids of an original node
  std::vector<std::vector<int>> copies(m.nodes.size());

  auto add_node = [&](int orig) {
    const int id = static_cast<int>(fm.nodes.size());
    fm.nodes.push_back(m.nodes[orig]);
    fm.node_orig.push_back(orig);
    copies[orig].push_back(id);
    return id;
  };

  for (size_t e = 0; e < m.elements.size(); ++e) {
    const bool dup = cohesive[m.element_part[e]];
    for (int a = 0; a < 6; ++a) {
      const int orig = m.elements[e][a];
      int id;
      if (dup) {
        id = add_node(orig);
      } else {
        auto it = shared.find(orig);
        id = (it != shared.end()) ? it->second : (shared[orig] = add_node(orig));
      }
      fm.elements[e][a] = id;
    }
  }

  // Interior edges of cohesive parts, keyed by the sorted original corner
  // pair.  local edge i joins corners (i, i+1 mod 3) with midside 3+i.
  struct EdgeUse {
    int elem, local;
  };
  std::map<std::pair<int, int>, std::vector<EdgeUse>> edges;
  for (size_t e = 0; e < m.elements.size(); ++e) {
    if (!cohesive[m.element_part[e]]) continue;
    for (int i = 0; i < 3; ++i) {
      const int a = m.elements[e][i];
      const int b = m.elements[e][(i + 1) % 3];
      edges[{std::min(a, b), std::max(a, b)}].push_back(
          {static_cast<int>(e), i});
    }
  }

  auto corner_centroid = [&](int e) {
    return (m.nodes[m.elements[e][0]] + m.nodes[m.elements[e][1]] +
            m.nodes[m.elements[e][2]]) /
           3.0;
  };

  for (const auto& [key, uses] : edges) {
    if (uses.size() == 1) continue;  // boundary edge
    if (uses.size() > 2)
      throw MeshError("non-manifold edge between nodes " +
                      std::to_string(key.first) + " and " +
                      std::to_string(key.second));

    const EdgeUse ua = uses[0], ub = uses[1];
    if (m.element_part[ua.elem] != m.element_part[ub.elem])
      throw MeshError("interior edge shared across parts");

    // Parameterize by side A's counterclockwise corner order.
    const int end1 = m.elements[ua.elem][ua.local];
    const int end2 = m.elements[ua.elem][(ua.local + 1) % 3];
    const int mid = m.elements[ua.elem][3 + ua.local];
    if (m.elements[ub.elem][3 + ub.local] != mid)
      throw MeshError("mismatched midside node on shared edge");

    auto side_nodes = [&](int e) {
      std::array<int, 3> out{};
      for (int a = 0; a < 6; ++a) {
        const int orig = m.elements[e][a];
        if (orig == end1) out[0] = fm.elements[e][a];
        if (orig == end2) out[1] = fm.elements[e][a];
        if (orig == mid) out[2] = fm.elements[e][a];
      }
      return out;
    };

    InterfaceElement iface;
    iface.elem_a = ua.elem;
    iface.elem_b = ub.elem;
    iface.nodes_a = side_nodes(ua.elem);
    iface.nodes_b = side_nodes(ub.elem);
    iface.part = m.element_part[ua.elem];

    // The +90-degree rotation of the end1->end2 tangent must point from A
    // into B; swap sides if it does not.
    const Eigen::Vector2d t = m.nodes[end2] - m.nodes[end1];
    const Eigen::Vector2d n(-t.y(), t.x());
    const double side = n.dot(corner_centroid(iface.elem_b) -
                              corner_centroid(iface.elem_a));
    if (side < 0.0) {
      std::swap(iface.elem_a, iface.elem_b);
      std::swap(iface.nodes_a, iface.nodes_b);
    } else if (side == 0.0) {
      throw MeshError("degenerate element pair on shared edge");
    }
    fm.interfaces.push_back(iface);
  }

  for (const auto& [name, ids] : m.nodesets) {
    std::vector<int> expanded;
    for (int orig : ids)
      expanded.insert(expanded.end(), copies[orig].begin(), copies[orig].end());
    std::sort(expanded.begin(), expanded.end());
    fm.nodesets[name] = std::move(expanded);
  }
  return fm;
}

Eigen::VectorXd BoundaryOperator::to_full(const Eigen::VectorXd& x,
                                          const Eigen::VectorXd& ubc) const {
  Eigen::VectorXd u = ubc;
  for (int i = 0; i < n_free(); ++i) u[free_dofs[i]] += x[i];
  return u;
}

Eigen::VectorXd BoundaryOperator::to_free(const Eigen::VectorXd& u,
                                          const Eigen::VectorXd& ubc) const {
  Eigen::VectorXd x(n_free());
  for (int i = 0; i < n_free(); ++i)
    x[i] = u[free_dofs[i]] - ubc[free_dofs[i]];
  return x;
}

BoundaryOperator build_bc(const FracturedMesh& fm,
                          const std::vector<DofConstraint>& constraints) {
  BoundaryOperator bc;
  bc.n_total = fm.n_dofs();
  bc.u0.setZero(bc.n_total);
  bc.vel.setZero(bc.n_total);

  std::vector<char> is_constrained(bc.n_total, 0);
  for (const auto& c : constraints) {
    if (c.dof < 0 || c.dof >= bc.n_total)
      throw MeshError("build_bc: DOF index out of range");
    if (is_constrained[c.dof]) {
      const bool same = std::abs(bc.u0[c.dof] - c.u0) <=
                            1e-14 * (1.0 + std::abs(c.u0)) &&
                        std::abs(bc.vel[c.dof] - c.vel) <=
                            1e-14 * (1.0 + std::abs(c.vel));
      if (!same)
        throw MeshError("build_bc: conflicting constraints on DOF " +
                        std::to_string(c.dof));
      continue;
    }
    is_constrained[c.dof] = 1;
    bc.u0[c.dof] = c.u0;
    bc.vel[c.dof] = c.vel;
  }

  for (int d = 0; d < bc.n_total; ++d)
    (is_constrained[d] ? bc.constrained : bc.free_dofs).push_back(d);
  return bc;
}

Eigen::VectorXd LinearInequalities::slack(const Eigen::VectorXd& u) const {
  Eigen::VectorXd s(n_rows());
  for (int i = 0; i < n_rows(); ++i)
    s[i] = u[rows[i].dof_hi] - u[rows[i].dof_lo] - rows[i].rhs;
  return s;
}

LinearInequalities build_contact(
    const FracturedMesh& fm, const std::vector<ContactSurfaceSpec>& surfaces) {
  const int n_orig =
      fm.node_orig.empty()
          ? 0
          : 1 + *std::max_element(fm.node_orig.begin(), fm.node_orig.end());
  std::vector<std::vector<int>> copies(n_orig);
  for (int i = 0; i < fm.n_nodes(); ++i) copies[fm.node_orig[i]].push_back(i);

  LinearInequalities li;
  for (size_t s = 0; s < surfaces.size(); ++s) {
    const auto& spec = surfaces[s];
    if (spec.axis != 0 && spec.axis != 1)
      throw MeshError("build_contact: axis must be 0 or 1");
    for (const auto& [lo, hi] : spec.pairs) {
      if (lo < 0 || lo >= n_orig || hi < 0 || hi >= n_orig)
        throw MeshError("build_contact: pair references unknown node");
      for (int a : copies[lo])
        for (int b : copies[hi]) {
          ContactRow row;
          row.dof_lo = 2 * a + spec.axis;
          row.dof_hi = 2 * b + spec.axis;
          row.rhs = spec.gap_min -
                    (fm.nodes[b][spec.axis] - fm.nodes[a][spec.axis]);
          row.surface = static_cast<int>(s);
          li.rows.push_back(row);
        }
    }
  }
  return li;
}

}  // namespace conefrac::mesh
