#pragma once

// Run configuration: a TOML-shaped reader (named sections, key = value,
// strings, numbers, booleans, arrays) and the typed RunConfig it populates.

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "conefrac/assembly.hpp"
#include "conefrac/material.hpp"
#include "conefrac/mesh.hpp"
#include "conefrac/stepper.hpp"

namespace conefrac::config {

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// One parsed value with its source line for diagnostics.
struct Value {
  enum class Kind { kString, kBool, kNumber, kArray };
  Kind kind = Kind::kNumber;
  std::string str;
  bool boolean = false;
  double number = 0.0;
  std::vector<Value> array;
  int line = 0;

  double as_number() const;
  int as_int() const;  // integral numbers only
  bool as_bool() const;
  const std::string& as_string() const;
  const std::vector<Value>& as_array() const;
};

using Table = std::map<std::string, Value>;

struct Document {
  std::map<std::string, Table> sections;  // "" is the root table

  const Table* find(const std::string& section) const;
  // Sections named prefix + suffix, sorted by suffix; prefix should end
  // with '.'.
  std::vector<std::pair<std::string, const Table*>> with_prefix(
      const std::string& prefix) const;
};

// Grammar: '#' comments, [section] or [dotted.section] headers, key = value
// lines.  Values are "strings" (with \\ \" \n \t escapes), true/false,
// numbers, or single-line (possibly nested) [a, b, ...] arrays.  Duplicate
// keys and duplicate section headers are errors.
Document parse_config(const std::string& text);
Document parse_config_file(const std::string& path);

struct MaterialBlock {
  material::BulkParams bulk;
  bool cohesive = true;
};

struct BcBlock {
  std::string name;
  std::string nodeset;
  bool pin_x = false, pin_y = false;  // which axes are prescribed
  double vx = 0.0, vy = 0.0;          // their rates (fixed sets use 0)
};

struct ContactBlock {
  std::string name;
  mesh::ContactSurfaceSpec spec;
};

struct InitialBlock {
  std::string name;
  std::string nodeset;
  double vx = 0.0, vy = 0.0;
};

struct LoadBlock {
  std::string name;
  std::string nodeset;
  double fx = 0.0, fy = 0.0;  // per-node point force, N
};

struct Monitor {
  bool enabled = false;
  std::string reaction_nodeset;
  int reaction_axis = 1;
  int deflection_node = -1;  // original node id
  int deflection_axis = 1;
};

struct RunConfig {
  std::string mesh_path;
  bool material_all = false;           // one block for every part
  std::vector<MaterialBlock> materials;
  material::CohesiveParams cohesive;
  bool has_cohesive_block = false;
  std::vector<BcBlock> bcs;
  std::vector<ContactBlock> contacts;
  std::vector<InitialBlock> initials;
  std::vector<LoadBlock> loads;
  std::map<int, Eigen::Vector2d> body_force;  // part -> force density, N/m^3
  double dt = 1.0;
  int n_step = 0;
  stepper::SolverParams solver;
  int energy_rule = 3;
  double thickness = 1.0;  // reporting-time multiplier on energies/forces
  std::string output_dir = "out";
  int snapshot_every = 1;  // damage/VTK cadence in steps; 0 disables
  Monitor monitor;
};

// Parses and validates everything checkable without the mesh.  Relative
// mesh paths resolve against the config file's directory.
RunConfig load_run_config(const std::string& path);

// Loads the mesh and assembles the full problem; all nodeset references are
// validated here.
struct BuiltProblem {
  assembly::System sys;
  Eigen::VectorXd u0, v0;
};
BuiltProblem build_problem(const RunConfig& cfg);

}  // namespace conefrac::config
