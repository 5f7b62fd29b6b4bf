#include "conefrac/assembly.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "conefrac/fem.hpp"

namespace conefrac::assembly {

namespace {

Eigen::Matrix<double, 6, 2> gather_element(const mesh::FracturedMesh& fm,
                                           int e) {
  Eigen::Matrix<double, 6, 2> X;
  for (int a = 0; a < 6; ++a) X.row(a) = fm.nodes[fm.elements[e][a]];
  return X;
}

}  // namespace

System build_system(mesh::FracturedMesh fm,
                    std::vector<material::BulkParams> part_material,
                    const material::CohesiveParams& coh,
                    mesh::BoundaryOperator bc, mesh::LinearInequalities contact,
                    const SystemOptions& opt) {
  if (static_cast<int>(part_material.size()) != fm.n_parts)
    throw std::invalid_argument("build_system: one material per part required");
  if (opt.energy_rule != 3 && opt.energy_rule != 6)
    throw std::invalid_argument("build_system: energy_rule must be 3 or 6");
  if (!(opt.dt > 0.0)) throw std::invalid_argument("build_system: dt <= 0");
  if (bc.n_total != fm.n_dofs())
    throw std::invalid_argument("build_system: boundary operator size");

  System sys;
  sys.fm = std::move(fm);
  sys.part_material = std::move(part_material);
  sys.coh = coh;
  sys.bc = std::move(bc);
  sys.contact = std::move(contact);
  sys.dt = opt.dt;

  const auto& rule = opt.energy_rule == 3 ? fem::tri_rule_3()
                                          : fem::tri_rule_6();
  const size_t n_el = sys.fm.elements.size();
  sys.bulk_quad.resize(n_el);
  for (size_t e = 0; e < n_el; ++e) {
    const auto X = gather_element(sys.fm, static_cast<int>(e));
    sys.bulk_quad[e].reserve(rule.size());
    for (const auto& qp : rule) {
      const auto dN = fem::tri6_dN(qp.xi, qp.eta);
      const Eigen::Matrix2d J = X.transpose() * dN;
      BulkQuad bq;
      bq.w = qp.w * J.determinant();
      bq.dNdX = dN * J.inverse();
      sys.bulk_quad[e].push_back(bq);
    }
  }

  const auto& erule = fem::edge_rule_3();
  const size_t n_if = sys.fm.interfaces.size();
  sys.face_quad.resize(n_if);
  sys.iface_dofs.resize(n_if);
  sys.face_w.resize(3 * n_if);
  sys.zeta.resize(3 * n_if);
  for (size_t i = 0; i < n_if; ++i) {
    const auto& iface = sys.fm.interfaces[i];
    for (int k = 0; k < 3; ++k) {
      sys.iface_dofs[i][2 * k] = 2 * iface.nodes_a[k];
      sys.iface_dofs[i][2 * k + 1] = 2 * iface.nodes_a[k] + 1;
      sys.iface_dofs[i][6 + 2 * k] = 2 * iface.nodes_b[k];
      sys.iface_dofs[i][6 + 2 * k + 1] = 2 * iface.nodes_b[k] + 1;
    }
    for (int q = 0; q < 3; ++q) {
      const auto& qp = erule[q];
      FaceQuad fq;
      fq.N = fem::edge_N(qp.eta);
      fq.dN = fem::edge_dN(qp.eta);
      fq.dXdeta.setZero();
      for (int k = 0; k < 3; ++k)
        fq.dXdeta += fq.dN[k] * sys.fm.nodes[iface.nodes_a[k]];
      fq.ref_len = fq.dXdeta.norm();
      fq.omega = qp.w * fq.ref_len;
      sys.face_quad[i][q] = fq;
      sys.face_w[3 * i + q] = fq.omega;
      sys.zeta[3 * i + q] = 1e4 * coh.G_c * fq.omega;
    }
  }

  // Consistent mass, always with the 6-point rule: the 3-point rule has too
  // few stations to render N_a N_b full rank on a TRI6.
  std::vector<Eigen::Triplet<double>> mt;
  mt.reserve(n_el * 144);
  for (size_t e = 0; e < n_el; ++e) {
    const double rho = sys.part_material[sys.fm.element_part[e]].rho;
    const auto X = gather_element(sys.fm, static_cast<int>(e));
    Eigen::Matrix<double, 6, 6> Me = Eigen::Matrix<double, 6, 6>::Zero();
    for (const auto& qp : fem::tri_rule_6()) {
      const double detJ =
          fem::tri6_jacobian(X, qp.xi, qp.eta).determinant();
      const auto N = fem::tri6_N(qp.xi, qp.eta);
      Me += (rho * qp.w * detJ) * (N * N.transpose());
    }
    // vectorized accumulation can differ by an ulp across the diagonal;
    // mirror the upper triangle so the matrix is symmetric bit for bit
    for (int a = 0; a < 6; ++a)
      for (int b = a + 1; b < 6; ++b) Me(b, a) = Me(a, b);
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b)
        for (int j = 0; j < 2; ++j)
          mt.emplace_back(2 * sys.fm.elements[e][a] + j,
                          2 * sys.fm.elements[e][b] + j, Me(a, b));
  }
  sys.mass.resize(sys.fm.n_dofs(), sys.fm.n_dofs());
  sys.mass.setFromTriplets(mt.begin(), mt.end());

  sys.fext.setZero(sys.fm.n_dofs());
  sys.free_index.assign(sys.fm.n_dofs(), -1);
  for (int i = 0; i < sys.bc.n_free(); ++i)
    sys.free_index[sys.bc.free_dofs[i]] = i;
  return sys;
}

bool bulk_energy(const System& sys, const Eigen::VectorXd& u, double& value,
                 Eigen::VectorXd* grad,
                 std::vector<Eigen::Triplet<double>>* hess, int* bad_element) {
  value = 0.0;
  const size_t n_el = sys.fm.elements.size();
  Eigen::Matrix<double, 6, 2> Ue;
  for (size_t e = 0; e < n_el; ++e) {
    const auto& params = sys.part_material[sys.fm.element_part[e]];
    const auto& conn = sys.fm.elements[e];
    for (int a = 0; a < 6; ++a) Ue.row(a) = u.segment<2>(2 * conn[a]);

    for (const auto& bq : sys.bulk_quad[e]) {
      Eigen::Matrix2d F =
          Eigen::Matrix2d::Identity() + Ue.transpose() * bq.dNdX;
      const auto ev = material::bulk_energy_density(F, params, hess != nullptr);
      if (ev.inverted) {
        value = std::numeric_limits<double>::infinity();
        if (bad_element) *bad_element = static_cast<int>(e);
        return false;
      }
      value += bq.w * ev.value;
      if (grad) {
        const Eigen::Matrix<double, 6, 2> ge =
            bq.w * bq.dNdX * ev.dF.transpose();
        for (int a = 0; a < 6; ++a)
          grad->segment<2>(2 * conn[a]) += ge.row(a).transpose();
      }
      if (hess) {
        // d2(a i, b k) = sum_jl d2F(2i+j, 2k+l) dNdX(a,j) dNdX(b,l)
        for (int a = 0; a < 6; ++a)
          for (int b = 0; b < 6; ++b)
            for (int i = 0; i < 2; ++i)
              for (int k = 0; k < 2; ++k) {
                double v = 0.0;
                for (int j = 0; j < 2; ++j)
                  for (int l = 0; l < 2; ++l)
                    v += ev.d2F(2 * i + j, 2 * k + l) * bq.dNdX(a, j) *
                         bq.dNdX(b, l);
                hess->emplace_back(2 * conn[a] + i, 2 * conn[b] + k,
                                   bq.w * v);
              }
      }
    }
  }
  return true;
}

double momentum_energy(const System& sys, const Eigen::VectorXd& u,
                       const Eigen::VectorXd& u_prev,
                       const Eigen::VectorXd& v_prev, Eigen::VectorXd* grad) {
  const Eigen::VectorXd w = u - u_prev - (0.5 * sys.dt) * v_prev;
  const Eigen::VectorXd Mw = sys.mass * w;
  if (grad) *grad += (4.0 / (sys.dt * sys.dt)) * Mw;
  return (2.0 / (sys.dt * sys.dt)) * w.dot(Mw);
}

OpeningMap opening_map(const System& sys, int iface, int q,
                       const Eigen::VectorXd& u, int derivs) {
  const auto& fq = sys.face_quad[iface][q];
  const auto& el = sys.fm.interfaces[iface];

  Eigen::Vector2d G = fq.dXdeta;
  Eigen::Vector2d delta = Eigen::Vector2d::Zero();
  for (int k = 0; k < 3; ++k) {
    const Eigen::Vector2d ua = u.segment<2>(2 * el.nodes_a[k]);
    const Eigen::Vector2d ub = u.segment<2>(2 * el.nodes_b[k]);
    G += (0.5 * fq.dN[k]) * (ua + ub);
    delta += fq.N[k] * (ub - ua);
  }

  OpeningMap om;
  const double gn = G.norm();
  if (gn < 1e-12 * fq.ref_len) {
    om.degenerate = true;
    return om;
  }
  const Eigen::Vector2d tau = G / gn;

  // Both maps have the form tau(G) . V with V linear in u:
  // c1 = n . delta = tau . (delta_y, -delta_x), c2 = beta * tau . delta.
  const double beta = sys.coh.beta_mix;
  const Eigen::Vector2d V1(delta.y(), -delta.x());
  const Eigen::Vector2d V2 = beta * delta;
  om.c1 = tau.dot(V1);
  om.c2 = tau.dot(V2);
  if (derivs < 1) return om;

  // Per local DOF m: side s (A first), node k, component j.
  Eigen::Matrix<double, 12, 2> gv;   // dG/du_m
  Eigen::Matrix<double, 12, 2> v1v;  // dV1/du_m
  Eigen::Matrix<double, 12, 2> v2v;  // dV2/du_m
  for (int m = 0; m < 12; ++m) {
    const int s = m / 6;
    const int k = (m % 6) / 2;
    const int j = m % 2;
    const double sgn = s == 0 ? -1.0 : 1.0;
    gv.row(m) = Eigen::RowVector2d::Zero();
    gv(m, j) = 0.5 * fq.dN[k];
    const double nk = sgn * fq.N[k];
    // V1 = rot(-90) delta: d/d delta_x = (0,-1), d/d delta_y = (1,0)
    v1v.row(m) = j == 0 ? Eigen::RowVector2d(0.0, -nk)
                        : Eigen::RowVector2d(nk, 0.0);
    v2v.row(m) = Eigen::RowVector2d::Zero();
    v2v(m, j) = beta * nk;
  }

  // dtau/dG = (I - tau tau^T)/|G|
  Eigen::Matrix<double, 12, 2> pg;  // (dtau/dG) dG/du_m, rows
  for (int m = 0; m < 12; ++m) {
    const Eigen::Vector2d a = gv.row(m).transpose();
    pg.row(m) = ((a - tau * tau.dot(a)) / gn).transpose();
  }
  for (int m = 0; m < 12; ++m) {
    om.dc1[m] = pg.row(m).dot(V1) + tau.dot(v1v.row(m));
    om.dc2[m] = pg.row(m).dot(V2) + tau.dot(v2v.row(m));
  }
  if (derivs < 2) return om;

  // d2tau_i/dG_j dG_k = (-d_ij tau_k - d_ik tau_j - d_jk tau_i
  //                      + 3 tau_i tau_j tau_k)/|G|^2, contracted twice:
  // T(a,b).V = [-(V.a)(tau.b) - (V.b)(tau.a) - (a.b)(tau.V)
  //             + 3(tau.V)(tau.a)(tau.b)]/|G|^2.
  const double gn2 = gn * gn;
  for (int m = 0; m < 12; ++m) {
    const Eigen::Vector2d am = gv.row(m).transpose();
    const double tam = tau.dot(am);
    for (int n = m; n < 12; ++n) {
      const Eigen::Vector2d an = gv.row(n).transpose();
      const double tan_ = tau.dot(an);
      const double ab = am.dot(an);
      auto second = [&](const Eigen::Vector2d& V, double tv,
                        const Eigen::RowVector2d& vm,
                        const Eigen::RowVector2d& vn) {
        const double tt = (-V.dot(am) * tan_ - V.dot(an) * tam - ab * tv +
                           3.0 * tv * tam * tan_) /
                          gn2;
        return tt + pg.row(m).dot(vn) + pg.row(n).dot(vm);
      };
      om.d2c1(m, n) = om.d2c1(n, m) =
          second(V1, om.c1, v1v.row(m), v1v.row(n));
      om.d2c2(m, n) = om.d2c2(n, m) =
          second(V2, om.c2, v2v.row(m), v2v.row(n));
    }
  }
  return om;
}

Eigen::VectorXd effective_openings(const System& sys,
                                   const Eigen::VectorXd& u) {
  Eigen::VectorXd out(sys.n_gp());
  for (size_t i = 0; i < sys.face_quad.size(); ++i)
    for (int q = 0; q < 3; ++q) {
      const auto om = opening_map(sys, static_cast<int>(i), q, u, 0);
      if (om.degenerate)
        throw std::runtime_error("degenerate interface " + std::to_string(i) +
                                 " (current edge length vanished)");
      out[3 * i + q] = std::hypot(om.c1, om.c2);
    }
  return out;
}

}  // namespace conefrac::assembly
