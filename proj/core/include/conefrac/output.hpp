#pragma once

// Result writers: the per-step energy ledger, damage maps, legacy-VTK
// displacement snapshots, load-deflection data, the run manifest, and a
// gnuplot script tying them together.  All floats render with %.17g so
// repeated runs produce byte-identical files.

#include <string>
#include <vector>

#include "conefrac/config.hpp"
#include "conefrac/energy.hpp"
#include "conefrac/stepper.hpp"

namespace conefrac::output {

// Exact round-trip rendering of a double.
std::string fmt(double x);

void write_energies_csv(const std::string& path,
                        const std::vector<energy::LedgerRow>& rows,
                        double thickness);

// One row per interface Gauss point: damage, effective opening, and the two
// opening components at the step's midpoint displacement.
void write_damage_csv(const std::string& path, const assembly::System& sys,
                      const stepper::StepRecord& rec);

// Legacy ASCII unstructured grid of quadratic triangles with the end-of-step
// displacement as point data.
void write_vtk_snapshot(const std::string& path, const assembly::System& sys,
                        const stepper::StepRecord& rec);

void write_load_deflection_csv(const std::string& path,
                               const assembly::System& sys,
                               const config::Monitor& mon,
                               const std::vector<stepper::StepRecord>& recs,
                               double thickness);

// Echoes every resolved config value, defaults included.
void write_manifest(const std::string& path, const config::RunConfig& cfg);

void write_plot_script(const std::string& path, bool have_load_deflection);

// Writes the whole output family for a finished run into cfg.output_dir.
void emit_all(const config::RunConfig& cfg, const assembly::System& sys,
              const Eigen::VectorXd& u0, const Eigen::VectorXd& v0,
              const std::vector<stepper::StepRecord>& recs);

}  // namespace conefrac::output
