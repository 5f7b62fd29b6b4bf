#include "conefrac/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "conefrac/fem.hpp"

namespace conefrac::config {

namespace {

[[noreturn]] void fail(int line, const std::string& what) {
  throw ConfigError("config error at line " + std::to_string(line) + ": " +
                    what);
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// Cuts a trailing comment, honoring quoted strings.
std::string strip_comment(const std::string& s) {
  bool in_string = false;
  for (size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (in_string) {
      if (c == '\\') ++i;
      else if (c == '"') in_string = false;
    } else if (c == '"') {
      in_string = true;
    } else if (c == '#') {
      return s.substr(0, i);
    }
  }
  return s;
}

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-' &&
        c != '.')
      return false;
  return s.front() != '.' && s.back() != '.';
}

void skip_ws(const std::string& s, size_t& i) {
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
}

Value parse_value(const std::string& s, size_t& i, int line);

Value parse_string(const std::string& s, size_t& i, int line) {
  Value v;
  v.kind = Value::Kind::kString;
  v.line = line;
  ++i;  // opening quote
  while (i < s.size() && s[i] != '"') {
    char c = s[i++];
    if (c == '\\') {
      if (i >= s.size()) fail(line, "unterminated escape in string");
      char e = s[i++];
      switch (e) {
        case '"': v.str += '"'; break;
        case '\\': v.str += '\\'; break;
        case 'n': v.str += '\n'; break;
        case 't': v.str += '\t'; break;
        default: fail(line, std::string("unknown escape \\") + e);
      }
    } else {
      v.str += c;
    }
  }
  if (i >= s.size()) fail(line, "unterminated string");
  ++i;  // closing quote
  return v;
}

Value parse_array(const std::string& s, size_t& i, int line) {
  Value v;
  v.kind = Value::Kind::kArray;
  v.line = line;
  ++i;  // opening bracket
  skip_ws(s, i);
  while (i < s.size() && s[i] != ']') {
    v.array.push_back(parse_value(s, i, line));
    skip_ws(s, i);
    if (i < s.size() && s[i] == ',') {
      ++i;
      skip_ws(s, i);
    } else if (i < s.size() && s[i] != ']') {
      fail(line, "expected ',' or ']' in array");
    }
  }
  if (i >= s.size()) fail(line, "unterminated array");
  ++i;  // closing bracket
  return v;
}

Value parse_value(const std::string& s, size_t& i, int line) {
  skip_ws(s, i);
  if (i >= s.size()) fail(line, "missing value");
  if (s[i] == '"') return parse_string(s, i, line);
  if (s[i] == '[') return parse_array(s, i, line);
  size_t j = i;
  while (j < s.size() && s[j] != ',' && s[j] != ']' && s[j] != ' ' &&
         s[j] != '\t')
    ++j;
  std::string tok = s.substr(i, j - i);
  i = j;
  Value v;
  v.line = line;
  if (tok == "true" || tok == "false") {
    v.kind = Value::Kind::kBool;
    v.boolean = (tok == "true");
    return v;
  }
  char* end = nullptr;
  v.kind = Value::Kind::kNumber;
  v.number = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0')
    fail(line, "cannot parse value '" + tok + "'");
  return v;
}

const char* kind_name(Value::Kind k) {
  switch (k) {
    case Value::Kind::kString: return "string";
    case Value::Kind::kBool: return "boolean";
    case Value::Kind::kNumber: return "number";
    default: return "array";
  }
}

}  // namespace

double Value::as_number() const {
  if (kind != Kind::kNumber)
    fail(line, std::string("expected a number, got ") + kind_name(kind));
  return number;
}

int Value::as_int() const {
  double x = as_number();
  if (x != std::floor(x) || std::abs(x) > 2e9)
    fail(line, "expected an integer");
  return static_cast<int>(x);
}

bool Value::as_bool() const {
  if (kind != Kind::kBool)
    fail(line, std::string("expected true/false, got ") + kind_name(kind));
  return boolean;
}

const std::string& Value::as_string() const {
  if (kind != Kind::kString)
    fail(line, std::string("expected a string, got ") + kind_name(kind));
  return str;
}

const std::vector<Value>& Value::as_array() const {
  if (kind != Kind::kArray)
    fail(line, std::string("expected an array, got ") + kind_name(kind));
  return array;
}

const Table* Document::find(const std::string& section) const {
  auto it = sections.find(section);
  return it == sections.end() ? nullptr : &it->second;
}

std::vector<std::pair<std::string, const Table*>> Document::with_prefix(
    const std::string& prefix) const {
  std::vector<std::pair<std::string, const Table*>> out;
  for (auto it = sections.lower_bound(prefix); it != sections.end(); ++it) {
    if (it->first.compare(0, prefix.size(), prefix) != 0) break;
    out.emplace_back(it->first.substr(prefix.size()), &it->second);
  }
  return out;
}

Document parse_config(const std::string& text) {
  Document doc;
  doc.sections[""];
  std::string current;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, "expected ']' at end of header");
      std::string name = trim(line.substr(1, line.size() - 2));
      if (!valid_name(name)) fail(line_no, "bad section name '" + name + "'");
      if (doc.sections.count(name))
        fail(line_no, "duplicate section [" + name + "]");
      doc.sections[name];
      current = name;
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos) fail(line_no, "expected key = value");
    std::string key = trim(line.substr(0, eq));
    if (!valid_name(key)) fail(line_no, "bad key '" + key + "'");
    size_t i = eq + 1;
    Value v = parse_value(line, i, line_no);
    skip_ws(line, i);
    if (i != line.size()) fail(line_no, "trailing characters after value");
    auto& table = doc.sections[current];
    if (table.count(key)) fail(line_no, "duplicate key '" + key + "'");
    table.emplace(key, std::move(v));
  }
  return doc;
}

Document parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config not found: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

namespace {

const Value& require(const Table& t, const std::string& section,
                     const std::string& key) {
  auto it = t.find(key);
  if (it == t.end())
    throw ConfigError("missing key '" + key + "' in section [" + section +
                      "]");
  return it->second;
}

const Value* maybe(const Table& t, const std::string& key) {
  auto it = t.find(key);
  return it == t.end() ? nullptr : &it->second;
}

void check_keys(const Table& t, const std::string& section,
                const std::set<std::string>& allowed) {
  for (const auto& [key, value] : t)
    if (!allowed.count(key))
      fail(value.line, "unknown key '" + key + "' in section [" + section +
                           "]");
}

int parse_axis(const Value& v) {
  const std::string& s = v.as_string();
  if (s == "x") return 0;
  if (s == "y") return 1;
  fail(v.line, "axis must be \"x\" or \"y\"");
}

material::BulkModel parse_model(const Value& v) {
  const std::string& s = v.as_string();
  if (s == "neohookean") return material::BulkModel::kNeoHookean;
  if (s == "linear") return material::BulkModel::kLinear;
  fail(v.line, "model must be \"neohookean\" or \"linear\"");
}

MaterialBlock read_material(const Table& t, const std::string& section) {
  check_keys(t, section, {"model", "E", "nu", "rho", "cohesive"});
  MaterialBlock m;
  m.bulk.model = parse_model(require(t, section, "model"));
  m.bulk.E = require(t, section, "E").as_number();
  m.bulk.nu = require(t, section, "nu").as_number();
  m.bulk.rho = require(t, section, "rho").as_number();
  if (const Value* v = maybe(t, "cohesive")) m.cohesive = v->as_bool();
  if (m.bulk.E <= 0.0) throw ConfigError("[" + section + "]: E must be > 0");
  if (m.bulk.nu < 0.0 || m.bulk.nu >= 0.5)
    throw ConfigError("[" + section + "]: nu must be in [0, 0.5)");
  if (m.bulk.rho < 0.0)
    throw ConfigError("[" + section + "]: rho must be >= 0");
  return m;
}

void read_solver(const Table& t, RunConfig& cfg) {
  check_keys(t, "solver",
             {"mu_init", "mu_factor", "mu_count", "tol1", "tol2", "tol3_rel",
              "tol4", "max_iter", "max_subproblem_iter", "r_init",
              "big_m_init", "big_m_factor", "max_escalations",
              "handoff_margin", "preprocess_from_current", "quadrature",
              "thickness"});
  auto& p = cfg.solver;
  if (const Value* v = maybe(t, "mu_init")) p.mu.mu_init = v->as_number();
  if (const Value* v = maybe(t, "mu_factor")) p.mu.rho = v->as_number();
  if (const Value* v = maybe(t, "mu_count")) p.mu.n = v->as_int();
  if (const Value* v = maybe(t, "tol1")) p.tr.tol1 = v->as_number();
  if (const Value* v = maybe(t, "tol2")) p.tr.tol2 = v->as_number();
  if (const Value* v = maybe(t, "tol3_rel")) p.tr.tol3_rel = v->as_number();
  if (const Value* v = maybe(t, "tol4")) p.tr.tol4 = v->as_number();
  if (const Value* v = maybe(t, "max_iter")) p.tr.max_iter = v->as_int();
  if (const Value* v = maybe(t, "max_subproblem_iter"))
    p.tr.max_subproblem_iter = v->as_int();
  if (const Value* v = maybe(t, "r_init")) p.r_init = v->as_number();
  if (const Value* v = maybe(t, "big_m_init")) p.big_m_init = v->as_number();
  if (const Value* v = maybe(t, "big_m_factor"))
    p.big_m_factor = v->as_number();
  if (const Value* v = maybe(t, "max_escalations"))
    p.max_escalations = v->as_int();
  if (const Value* v = maybe(t, "handoff_margin"))
    p.handoff_margin = v->as_number();
  if (const Value* v = maybe(t, "preprocess_from_current"))
    p.preprocess_from_current = v->as_bool();
  if (const Value* v = maybe(t, "quadrature")) {
    cfg.energy_rule = v->as_int();
    if (cfg.energy_rule != 3 && cfg.energy_rule != 6)
      fail(v->line, "quadrature must be 3 or 6");
  }
  if (const Value* v = maybe(t, "thickness")) {
    cfg.thickness = v->as_number();
    if (cfg.thickness <= 0.0) fail(v->line, "thickness must be > 0");
  }
  if (p.mu.mu_init <= 0.0 || p.mu.rho <= 0.0 || p.mu.rho >= 1.0 || p.mu.n < 1)
    throw ConfigError("[solver]: mu schedule needs mu_init > 0, "
                      "0 < mu_factor < 1, mu_count >= 1");
}

void read_output(const Table& t, RunConfig& cfg) {
  check_keys(t, "output",
             {"directory", "snapshot_every", "reaction_nodeset",
              "reaction_axis", "deflection_node", "deflection_axis"});
  if (const Value* v = maybe(t, "directory")) cfg.output_dir = v->as_string();
  if (const Value* v = maybe(t, "snapshot_every")) {
    cfg.snapshot_every = v->as_int();
    if (cfg.snapshot_every < 0) fail(v->line, "snapshot_every must be >= 0");
  }
  const Value* rn = maybe(t, "reaction_nodeset");
  const Value* dn = maybe(t, "deflection_node");
  if (rn || dn) {
    if (!rn || !dn)
      throw ConfigError(
          "[output]: reaction_nodeset and deflection_node go together");
    cfg.monitor.enabled = true;
    cfg.monitor.reaction_nodeset = rn->as_string();
    cfg.monitor.deflection_node = dn->as_int();
    if (const Value* v = maybe(t, "reaction_axis"))
      cfg.monitor.reaction_axis = parse_axis(*v);
    if (const Value* v = maybe(t, "deflection_axis"))
      cfg.monitor.deflection_axis = parse_axis(*v);
  }
}

}  // namespace

RunConfig load_run_config(const std::string& path) {
  Document doc = parse_config_file(path);
  RunConfig cfg;

  const Table& root = doc.sections.at("");
  check_keys(root, "", {"mesh"});
  std::filesystem::path mesh =
      require(root, "", "mesh").as_string();
  if (mesh.is_relative())
    mesh = std::filesystem::path(path).parent_path() / mesh;
  cfg.mesh_path = mesh.string();

  // Materials: one block per part, or a single material.all.
  auto mats = doc.with_prefix("material.");
  if (mats.empty()) throw ConfigError("no [material.*] section");
  if (mats.size() == 1 && mats[0].first == "all") {
    cfg.material_all = true;
    cfg.materials.push_back(read_material(*mats[0].second, "material.all"));
  } else {
    cfg.materials.resize(mats.size());
    std::vector<bool> seen(mats.size(), false);
    for (const auto& [suffix, table] : mats) {
      if (suffix.rfind("part", 0) != 0)
        throw ConfigError("material sections are material.all or "
                          "material.part<N>, got material." + suffix);
      int p = -1;
      try {
        size_t used = 0;
        p = std::stoi(suffix.substr(4), &used);
        if (used != suffix.size() - 4) p = -1;
      } catch (const std::exception&) {
      }
      if (p < 0 || p >= static_cast<int>(mats.size()) || seen[p])
        throw ConfigError("material parts must be part0..part" +
                          std::to_string(mats.size() - 1) +
                          " with no gaps or repeats");
      seen[p] = true;
      cfg.materials[p] = read_material(*table, "material." + suffix);
    }
  }

  bool any_cohesive = false;
  for (const auto& m : cfg.materials) any_cohesive |= m.cohesive;
  if (const Table* t = doc.find("cohesive")) {
    check_keys(*t, "cohesive", {"sigma_c", "G_c", "beta_mix"});
    cfg.has_cohesive_block = true;
    cfg.cohesive.sigma_c = require(*t, "cohesive", "sigma_c").as_number();
    cfg.cohesive.G_c = require(*t, "cohesive", "G_c").as_number();
    if (const Value* v = maybe(*t, "beta_mix"))
      cfg.cohesive.beta_mix = v->as_number();
    if (cfg.cohesive.sigma_c <= 0.0 || cfg.cohesive.G_c <= 0.0)
      throw ConfigError("[cohesive]: sigma_c and G_c must be > 0");
  } else if (any_cohesive) {
    throw ConfigError("cohesive parts need a [cohesive] section");
  }

  for (const auto& [name, t] : doc.with_prefix("bc.")) {
    check_keys(*t, "bc." + name, {"type", "nodeset", "vx", "vy"});
    BcBlock b;
    b.name = name;
    b.nodeset = require(*t, "bc." + name, "nodeset").as_string();
    const std::string& type = require(*t, "bc." + name, "type").as_string();
    if (type == "fixed") {
      if (maybe(*t, "vx") || maybe(*t, "vy"))
        throw ConfigError("[bc." + name + "]: fixed sets take no rates");
      b.pin_x = b.pin_y = true;
    } else if (type == "velocity") {
      if (const Value* v = maybe(*t, "vx")) {
        b.pin_x = true;
        b.vx = v->as_number();
      }
      if (const Value* v = maybe(*t, "vy")) {
        b.pin_y = true;
        b.vy = v->as_number();
      }
      if (!b.pin_x && !b.pin_y)
        throw ConfigError("[bc." + name + "]: velocity sets need vx or vy");
    } else {
      throw ConfigError("[bc." + name + "]: type must be fixed or velocity");
    }
    cfg.bcs.push_back(std::move(b));
  }

  for (const auto& [name, t] : doc.with_prefix("contact.")) {
    check_keys(*t, "contact." + name, {"pairs", "axis", "gap"});
    ContactBlock c;
    c.name = name;
    c.spec.axis = parse_axis(require(*t, "contact." + name, "axis"));
    c.spec.gap_min = require(*t, "contact." + name, "gap").as_number();
    const Value& pairs = require(*t, "contact." + name, "pairs");
    for (const Value& pair : pairs.as_array()) {
      const auto& ab = pair.as_array();
      if (ab.size() != 2)
        fail(pair.line, "each contact pair is [node, node]");
      c.spec.pairs.emplace_back(ab[0].as_int(), ab[1].as_int());
    }
    if (c.spec.pairs.empty())
      throw ConfigError("[contact." + name + "]: pairs is empty");
    cfg.contacts.push_back(std::move(c));
  }

  for (const auto& [name, t] : doc.with_prefix("initial.")) {
    check_keys(*t, "initial." + name, {"nodeset", "vx", "vy"});
    InitialBlock b;
    b.name = name;
    b.nodeset = require(*t, "initial." + name, "nodeset").as_string();
    if (const Value* v = maybe(*t, "vx")) b.vx = v->as_number();
    if (const Value* v = maybe(*t, "vy")) b.vy = v->as_number();
    cfg.initials.push_back(std::move(b));
  }

  for (const auto& [name, t] : doc.with_prefix("load.")) {
    check_keys(*t, "load." + name, {"nodeset", "fx", "fy"});
    LoadBlock b;
    b.name = name;
    b.nodeset = require(*t, "load." + name, "nodeset").as_string();
    if (const Value* v = maybe(*t, "fx")) b.fx = v->as_number();
    if (const Value* v = maybe(*t, "fy")) b.fy = v->as_number();
    cfg.loads.push_back(std::move(b));
  }

  for (const auto& [suffix, t] : doc.with_prefix("body.")) {
    check_keys(*t, "body." + suffix, {"fx", "fy"});
    if (suffix.rfind("part", 0) != 0)
      throw ConfigError("body-force sections are body.part<N>");
    int p = std::stoi(suffix.substr(4));
    Eigen::Vector2d f = Eigen::Vector2d::Zero();
    if (const Value* v = maybe(*t, "fx")) f.x() = v->as_number();
    if (const Value* v = maybe(*t, "fy")) f.y() = v->as_number();
    cfg.body_force[p] = f;
  }

  const Table* ts = doc.find("timestep");
  if (!ts) throw ConfigError("missing [timestep] section");
  check_keys(*ts, "timestep", {"dt", "n_step"});
  cfg.dt = require(*ts, "timestep", "dt").as_number();
  cfg.n_step = require(*ts, "timestep", "n_step").as_int();
  if (cfg.dt <= 0.0) throw ConfigError("[timestep]: dt must be > 0");
  if (cfg.n_step < 0) throw ConfigError("[timestep]: n_step must be >= 0");

  if (const Table* t = doc.find("solver")) read_solver(*t, cfg);
  if (const Table* t = doc.find("output")) read_output(*t, cfg);

  // Reject sections this reader does not know about (likely typos).
  for (const auto& [name, table] : doc.sections) {
    if (name.empty() || name == "cohesive" || name == "timestep" ||
        name == "solver" || name == "output")
      continue;
    bool known = false;
    for (const char* prefix :
         {"material.", "bc.", "contact.", "initial.", "load.", "body."})
      known |= name.rfind(prefix, 0) == 0;
    if (!known) throw ConfigError("unknown section [" + name + "]");
  }
  return cfg;
}

namespace {

const std::vector<int>& lookup_nodeset(const mesh::FracturedMesh& fm,
                                       const std::string& set,
                                       const std::string& owner) {
  auto it = fm.nodesets.find(set);
  if (it == fm.nodesets.end())
    throw ConfigError(owner + ": nodeset '" + set + "' not in mesh");
  return it->second;
}

}  // namespace

BuiltProblem build_problem(const RunConfig& cfg) {
  mesh::Mesh m = mesh::load_mesh(cfg.mesh_path);
  if (!cfg.material_all &&
      static_cast<int>(cfg.materials.size()) != m.n_parts)
    throw ConfigError("mesh has " + std::to_string(m.n_parts) +
                      " part(s) but config defines " +
                      std::to_string(cfg.materials.size()));

  std::vector<material::BulkParams> part_material(m.n_parts);
  std::vector<bool> part_cohesive(m.n_parts);
  for (int p = 0; p < m.n_parts; ++p) {
    const MaterialBlock& blk = cfg.materials[cfg.material_all ? 0 : p];
    part_material[p] = blk.bulk;
    part_cohesive[p] = blk.cohesive;
  }

  mesh::FracturedMesh fm = mesh::insert_interfaces(m, part_cohesive);

  std::vector<mesh::DofConstraint> constraints;
  for (const auto& b : cfg.bcs) {
    const auto& nodes = lookup_nodeset(fm, b.nodeset, "[bc." + b.name + "]");
    for (int n : nodes) {
      if (b.pin_x) constraints.push_back({2 * n, 0.0, b.vx});
      if (b.pin_y) constraints.push_back({2 * n + 1, 0.0, b.vy});
    }
  }
  mesh::BoundaryOperator bc = mesh::build_bc(fm, constraints);

  std::vector<mesh::ContactSurfaceSpec> surfaces;
  surfaces.reserve(cfg.contacts.size());
  for (const auto& c : cfg.contacts) surfaces.push_back(c.spec);
  mesh::LinearInequalities contact = mesh::build_contact(fm, surfaces);

  assembly::SystemOptions opt;
  opt.energy_rule = cfg.energy_rule;
  opt.dt = cfg.dt;
  BuiltProblem out{assembly::build_system(std::move(fm), part_material,
                                          cfg.cohesive, std::move(bc),
                                          std::move(contact), opt),
                   Eigen::VectorXd(), Eigen::VectorXd()};
  assembly::System& sys = out.sys;

  // Point loads go to the unique copy of each named node; a load on a node
  // that was duplicated by interface insertion is ambiguous.
  for (const auto& b : cfg.loads) {
    const auto& nodes =
        lookup_nodeset(sys.fm, b.nodeset, "[load." + b.name + "]");
    std::map<int, int> copy_count;
    for (int n : nodes) ++copy_count[sys.fm.node_orig[n]];
    for (const auto& [orig, count] : copy_count)
      if (count > 1)
        throw ConfigError("[load." + b.name + "]: node " +
                          std::to_string(orig) +
                          " has several copies; point load is ambiguous");
    for (int n : nodes) {
      sys.fext[2 * n] += b.fx;
      sys.fext[2 * n + 1] += b.fy;
    }
  }

  // Body force: consistent load vector over the same bulk quadrature.
  if (!cfg.body_force.empty()) {
    const auto rule =
        cfg.energy_rule == 6 ? fem::tri_rule_6() : fem::tri_rule_3();
    for (size_t e = 0; e < sys.fm.elements.size(); ++e) {
      auto it = cfg.body_force.find(sys.fm.element_part[e]);
      if (it == cfg.body_force.end()) continue;
      const Eigen::Vector2d& f = it->second;
      Eigen::Matrix<double, 6, 2> X;
      for (int a = 0; a < 6; ++a)
        X.row(a) = sys.fm.nodes[sys.fm.elements[e][a]];
      for (const auto& qp : rule) {
        const auto N = fem::tri6_N(qp.xi, qp.eta);
        const Eigen::Matrix2d J = fem::tri6_jacobian(X, qp.xi, qp.eta);
        const double w = qp.w * J.determinant();
        for (int a = 0; a < 6; ++a)
          sys.fext.segment<2>(2 * sys.fm.elements[e][a]) += w * N[a] * f;
      }
    }
  }

  if (cfg.monitor.enabled) {
    lookup_nodeset(sys.fm, cfg.monitor.reaction_nodeset, "[output]");
    bool found = false;
    for (int n : sys.fm.node_orig)
      found |= (n == cfg.monitor.deflection_node);
    if (cfg.monitor.deflection_node < 0 || !found)
      throw ConfigError("[output]: deflection_node " +
                        std::to_string(cfg.monitor.deflection_node) +
                        " not in mesh");
  }

  out.u0 = Eigen::VectorXd::Zero(sys.n_dofs());
  out.v0 = Eigen::VectorXd::Zero(sys.n_dofs());
  for (const auto& b : cfg.initials) {
    const auto& nodes =
        lookup_nodeset(sys.fm, b.nodeset, "[initial." + b.name + "]");
    for (int n : nodes) {
      out.v0[2 * n] = b.vx;
      out.v0[2 * n + 1] = b.vy;
    }
  }
  return out;
}

}  // namespace conefrac::config
