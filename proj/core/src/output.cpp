#include "conefrac/output.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace conefrac::output {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // no newline translation
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

std::string axis_name(int axis) { return axis == 0 ? "x" : "y"; }

}  // namespace

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_energies_csv(const std::string& path,
                        const std::vector<energy::LedgerRow>& rows,
                        double thickness) {
  auto out = open_out(path);
  out << "step,time_s,KE_J,SE_J,FE_rec_J,FE_dis_J,W_bc_J,W_contact_J,"
         "W_ext_J,residual_J\n";
  const double th = thickness;
  for (const auto& r : rows)
    out << r.step << ',' << fmt(r.time) << ',' << fmt(th * r.ke) << ','
        << fmt(th * r.se) << ',' << fmt(th * r.fe_rec) << ','
        << fmt(th * r.fe_dis) << ',' << fmt(th * r.w_bc) << ','
        << fmt(th * r.w_contact) << ',' << fmt(th * r.w_ext) << ','
        << fmt(th * r.residual) << '\n';
}

void write_damage_csv(const std::string& path, const assembly::System& sys,
                      const stepper::StepRecord& rec) {
  auto out = open_out(path);
  out << "interface,gauss,d,delta,s1,s2\n";
  const int n_iface = static_cast<int>(sys.face_quad.size());
  for (int i = 0; i < n_iface; ++i) {
    for (int q = 0; q < 3; ++q) {
      const auto om = assembly::opening_map(sys, i, q, rec.u_mid, 0);
      const int g = 3 * i + q;
      out << i << ',' << q << ',' << fmt(rec.d[g]) << ',' << fmt(rec.delta[g])
          << ',' << fmt(om.c1) << ',' << fmt(om.c2) << '\n';
    }
  }
}

void write_vtk_snapshot(const std::string& path, const assembly::System& sys,
                        const stepper::StepRecord& rec) {
  auto out = open_out(path);
  const auto& fm = sys.fm;
  out << "# vtk DataFile Version 3.0\n"
      << "conefrac snapshot step " << rec.tau << "\n"
      << "ASCII\n"
      << "DATASET UNSTRUCTURED_GRID\n"
      << "POINTS " << fm.n_nodes() << " double\n";
  for (const auto& x : fm.nodes)
    out << fmt(x.x()) << ' ' << fmt(x.y()) << " 0\n";
  const int m = static_cast<int>(fm.elements.size());
  out << "CELLS " << m << ' ' << 7 * m << '\n';
  for (const auto& conn : fm.elements) {
    out << 6;
    for (int a = 0; a < 6; ++a) out << ' ' << conn[a];
    out << '\n';
  }
  out << "CELL_TYPES " << m << '\n';
  for (int e = 0; e < m; ++e) out << "22\n";  // quadratic triangle
  out << "POINT_DATA " << fm.n_nodes() << '\n'
      << "VECTORS displacement double\n";
  for (int n = 0; n < fm.n_nodes(); ++n)
    out << fmt(rec.u[2 * n]) << ' ' << fmt(rec.u[2 * n + 1]) << " 0\n";
}

void write_load_deflection_csv(const std::string& path,
                               const assembly::System& sys,
                               const config::Monitor& mon,
                               const std::vector<stepper::StepRecord>& recs,
                               double thickness) {
  const auto& fm = sys.fm;
  auto setit = fm.nodesets.find(mon.reaction_nodeset);
  if (setit == fm.nodesets.end())
    throw std::runtime_error("monitor nodeset '" + mon.reaction_nodeset +
                             "' not in mesh");
  int defl_node = -1;
  for (int n = 0; n < fm.n_nodes(); ++n)
    if (fm.node_orig[n] == mon.deflection_node) {
      defl_node = n;
      break;
    }
  if (defl_node < 0)
    throw std::runtime_error("monitor deflection node not in mesh");
  const int defl_dof = 2 * defl_node + mon.deflection_axis;

  auto out = open_out(path);
  out << "step,time_s,deflection_m,reaction_N\n";
  for (const auto& rec : recs) {
    double reaction = 0.0;
    for (int n : setit->second)
      reaction += rec.reaction[2 * n + mon.reaction_axis];
    out << rec.tau << ',' << fmt((rec.tau - 0.5) * sys.dt) << ','
        << fmt(rec.u_mid[defl_dof]) << ',' << fmt(thickness * reaction)
        << '\n';
  }
}

void write_manifest(const std::string& path, const config::RunConfig& cfg) {
  auto out = open_out(path);
  out << "# resolved run configuration\n";
  out << "mesh = \"" << cfg.mesh_path << "\"\n\n";
  for (size_t i = 0; i < cfg.materials.size(); ++i) {
    const auto& m = cfg.materials[i];
    if (cfg.material_all)
      out << "[material.all]\n";
    else
      out << "[material.part" << i << "]\n";
    out << "model = \""
        << (m.bulk.model == material::BulkModel::kNeoHookean ? "neohookean"
                                                             : "linear")
        << "\"\n";
    out << "E = " << fmt(m.bulk.E) << "\n";
    out << "nu = " << fmt(m.bulk.nu) << "\n";
    out << "rho = " << fmt(m.bulk.rho) << "\n";
    out << "cohesive = " << (m.cohesive ? "true" : "false") << "\n\n";
  }
  if (cfg.has_cohesive_block) {
    out << "[cohesive]\n";
    out << "sigma_c = " << fmt(cfg.cohesive.sigma_c) << "\n";
    out << "G_c = " << fmt(cfg.cohesive.G_c) << "\n";
    out << "beta_mix = " << fmt(cfg.cohesive.beta_mix) << "\n\n";
  }
  for (const auto& b : cfg.bcs) {
    out << "[bc." << b.name << "]\n";
    out << "type = \"" << ((b.pin_x && b.pin_y && b.vx == 0.0 && b.vy == 0.0)
                               ? "fixed"
                               : "velocity")
        << "\"\n";
    out << "nodeset = \"" << b.nodeset << "\"\n";
    if (b.pin_x && (b.vx != 0.0 || !b.pin_y || b.vy != 0.0))
      out << "vx = " << fmt(b.vx) << "\n";
    if (b.pin_y && (b.vy != 0.0 || !b.pin_x || b.vx != 0.0))
      out << "vy = " << fmt(b.vy) << "\n";
    out << "\n";
  }
  for (const auto& c : cfg.contacts) {
    out << "[contact." << c.name << "]\n";
    out << "pairs = [";
    for (size_t i = 0; i < c.spec.pairs.size(); ++i) {
      if (i) out << ", ";
      out << '[' << c.spec.pairs[i].first << ", " << c.spec.pairs[i].second
          << ']';
    }
    out << "]\n";
    out << "axis = \"" << axis_name(c.spec.axis) << "\"\n";
    out << "gap = " << fmt(c.spec.gap_min) << "\n\n";
  }
  for (const auto& b : cfg.initials) {
    out << "[initial." << b.name << "]\n";
    out << "nodeset = \"" << b.nodeset << "\"\n";
    out << "vx = " << fmt(b.vx) << "\n";
    out << "vy = " << fmt(b.vy) << "\n\n";
  }
  for (const auto& b : cfg.loads) {
    out << "[load." << b.name << "]\n";
    out << "nodeset = \"" << b.nodeset << "\"\n";
    out << "fx = " << fmt(b.fx) << "\n";
    out << "fy = " << fmt(b.fy) << "\n\n";
  }
  for (const auto& [part, f] : cfg.body_force) {
    out << "[body.part" << part << "]\n";
    out << "fx = " << fmt(f.x()) << "\n";
    out << "fy = " << fmt(f.y()) << "\n\n";
  }
  out << "[timestep]\n";
  out << "dt = " << fmt(cfg.dt) << "\n";
  out << "n_step = " << cfg.n_step << "\n\n";
  const auto& p = cfg.solver;
  out << "[solver]\n";
  out << "mu_init = " << fmt(p.mu.mu_init) << "\n";
  out << "mu_factor = " << fmt(p.mu.rho) << "\n";
  out << "mu_count = " << p.mu.n << "\n";
  out << "tol1 = " << fmt(p.tr.tol1) << "\n";
  out << "tol2 = " << fmt(p.tr.tol2) << "\n";
  out << "tol3_rel = " << fmt(p.tr.tol3_rel) << "\n";
  out << "tol4 = " << fmt(p.tr.tol4) << "\n";
  out << "max_iter = " << p.tr.max_iter << "\n";
  out << "max_subproblem_iter = " << p.tr.max_subproblem_iter << "\n";
  out << "r_init = " << fmt(p.r_init) << "\n";
  out << "big_m_init = " << fmt(p.big_m_init) << "\n";
  out << "big_m_factor = " << fmt(p.big_m_factor) << "\n";
  out << "max_escalations = " << p.max_escalations << "\n";
  out << "handoff_margin = " << fmt(p.handoff_margin) << "\n";
  out << "preprocess_from_current = "
      << (p.preprocess_from_current ? "true" : "false") << "\n";
  out << "quadrature = " << cfg.energy_rule << "\n";
  out << "thickness = " << fmt(cfg.thickness) << "\n\n";
  out << "[output]\n";
  out << "directory = \"" << cfg.output_dir << "\"\n";
  out << "snapshot_every = " << cfg.snapshot_every << "\n";
  if (cfg.monitor.enabled) {
    out << "reaction_nodeset = \"" << cfg.monitor.reaction_nodeset << "\"\n";
    out << "reaction_axis = \"" << axis_name(cfg.monitor.reaction_axis)
        << "\"\n";
    out << "deflection_node = " << cfg.monitor.deflection_node << "\n";
    out << "deflection_axis = \"" << axis_name(cfg.monitor.deflection_axis)
        << "\"\n";
  }
}

void write_plot_script(const std::string& path, bool have_load_deflection) {
  auto out = open_out(path);
  out << "# gnuplot script; run from the output directory\n"
         "set datafile separator ','\n"
         "set key autotitle columnhead outside\n"
         "set terminal pngcairo size 900,600\n"
         "\n"
         "set output 'energies.png'\n"
         "set xlabel 'time [s]'\n"
         "set ylabel 'energy [J]'\n"
         "plot 'energies.csv' using 2:3 with lines, \\\n"
         "     '' using 2:4 with lines, \\\n"
         "     '' using 2:5 with lines, \\\n"
         "     '' using 2:6 with lines, \\\n"
         "     '' using 2:($7+$8+$9) with lines title 'W_total', \\\n"
         "     '' using 2:10 with lines\n";
  if (have_load_deflection) {
    out << "\n"
           "set output 'load_deflection.png'\n"
           "set xlabel 'deflection [m]'\n"
           "set ylabel 'reaction [N]'\n"
           "plot 'load_deflection.csv' using 3:4 with linespoints "
           "title 'reaction'\n";
  }
}

void emit_all(const config::RunConfig& cfg, const assembly::System& sys,
              const Eigen::VectorXd& u0, const Eigen::VectorXd& v0,
              const std::vector<stepper::StepRecord>& recs) {
  namespace fs = std::filesystem;
  const fs::path dir = cfg.output_dir;
  fs::create_directories(dir);

  const auto rows = energy::compute_ledger(sys, u0, v0, recs);
  write_energies_csv((dir / "energies.csv").string(), rows, cfg.thickness);

  if (cfg.snapshot_every > 0) {
    for (const auto& rec : recs) {
      if (rec.tau % cfg.snapshot_every != 0 &&
          rec.tau != static_cast<int>(recs.size()))
        continue;
      if (sys.n_gp() > 0)
        write_damage_csv(
            (dir / ("damage_" + std::to_string(rec.tau) + ".csv")).string(),
            sys, rec);
      write_vtk_snapshot(
          (dir / ("snapshot_" + std::to_string(rec.tau) + ".vtk")).string(),
          sys, rec);
    }
  }
  if (cfg.monitor.enabled)
    write_load_deflection_csv((dir / "load_deflection.csv").string(), sys,
                              cfg.monitor, recs, cfg.thickness);
  write_manifest((dir / "run_manifest.toml").string(), cfg);
  write_plot_script((dir / "plots.gp").string(), cfg.monitor.enabled);
}

}  // namespace conefrac::output
