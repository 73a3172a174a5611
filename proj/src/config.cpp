#include "igalbm/config.hpp"

#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

namespace igalbm {

namespace {

using nlohmann::json;

const std::vector<std::string> kCases{"taylor_green", "lid_cavity", "taylor_green_curved", "rest"};

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : ", ") + x;
  return s;
}

// Collects problems while walking the document.
struct Report {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
};

// One JSON object. Every key read is remembered so that leftovers can be
// reported as unknown.
class Section {
public:
  Section(const json* obj, std::string path, Report& rep) : obj_(obj), path_(std::move(path)), rep_(rep) {
    if (obj_ && !obj_->is_object()) {
      rep_.errors.push_back(path_ + ": expected an object");
      obj_ = nullptr;
    }
  }

  bool has(const char* key) const { return obj_ && obj_->contains(key); }

  template <class T>
  void read(const char* key, T& target) {
    used_.insert(key);
    if (!has(key)) return;
    const json& v = (*obj_)[key];
    try {
      if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw std::runtime_error("expected true or false");
        target = v.get<bool>();
      } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) throw std::runtime_error("expected an integer");
        target = v.get<T>();
      } else if constexpr (std::is_floating_point_v<T>) {
        if (!v.is_number()) throw std::runtime_error("expected a number");
        target = v.get<T>();
      } else {
        if (!v.is_string()) throw std::runtime_error("expected a string");
        target = v.get<T>();
      }
    } catch (const std::exception& e) {
      rep_.errors.push_back(name(key) + ": " + e.what());
    }
  }

  template <class T>
  void read(const char* key, std::optional<T>& target) {
    if (!has(key)) {
      used_.insert(key);
      return;
    }
    T value{};
    const std::size_t before = rep_.errors.size();
    read(key, value);
    if (rep_.errors.size() == before) target = value;
  }

  Section child(const char* key) {
    used_.insert(key);
    return Section(has(key) ? &(*obj_)[key] : nullptr, name(key), rep_);
  }

  const json* raw(const char* key) {
    used_.insert(key);
    return has(key) ? &(*obj_)[key] : nullptr;
  }

  void error(const char* key, const std::string& msg) { rep_.errors.push_back(name(key) + ": " + msg); }

  void finish() {
    if (!obj_) return;
    for (auto it = obj_->begin(); it != obj_->end(); ++it) {
      if (!used_.count(it.key())) rep_.warnings.push_back(name(it.key().c_str()) + ": unknown key ignored");
    }
  }

  std::string name(const char* key) const { return path_.empty() ? std::string(key) : path_ + "." + key; }

private:
  const json* obj_;
  std::string path_;
  Report& rep_;
  std::set<std::string> used_;
};

template <class E>
void read_enum(Section& s, const char* key, E& target, const std::vector<std::pair<std::string, E>>& names) {
  std::string v;
  if (!s.has(key)) {
    s.read(key, v);
    return;
  }
  s.read(key, v);
  if (v.empty()) return;
  std::vector<std::string> options;
  for (const auto& [n, e] : names) {
    options.push_back(n);
    if (n == v) {
      target = e;
      return;
    }
  }
  s.error(key, "unknown value \"" + v + "\" (expected one of: " + join(options) + ")");
}

void apply_case_defaults(RunConfig& c) {
  if (c.case_name == "lid_cavity") {
    c.resolution = 64;
    c.degree = 2;
    c.solver.cfl = 0.8;
    c.solver.n_max = 2000000;
    c.solver.mass_correction = true;
    c.output.interval = 1000;
  } else if (c.case_name == "taylor_green" || c.case_name == "taylor_green_curved") {
    c.resolution = 32;
    c.degree = 3;
    c.solver.cfl = 0.5;
    c.solver.n_max = 1000000;
    c.solver.stop_on_convergence = false;
    c.output.interval = 50;
    c.output.centerlines = false;
  } else if (c.case_name == "rest") {
    c.resolution = 16;
    c.degree = 2;
    c.geometry = "unit_square";
    c.solver.n_max = 100;
    c.solver.stop_on_convergence = false;
    c.output.interval = 10;
    c.output.centerlines = false;
  }
}

RunConfig parse_document(const json& doc, const std::string& source) {
  Report rep;
  RunConfig c;
  Section root(&doc, "", rep);
  root.read("case", c.case_name);
  if (!root.has("case")) {
    rep.errors.push_back("case: required (one of: " + join(kCases) + ")");
  } else if (std::find(kCases.begin(), kCases.end(), c.case_name) == kCases.end()) {
    root.error("case", "unknown case \"" + c.case_name + "\" (registered: " + join(kCases) + ")");
  }
  apply_case_defaults(c);

  root.read("resolution", c.resolution);
  root.read("degree", c.degree);
  if (c.degree < 1 || c.degree > 8) root.error("degree", "must be in [1, 8]");
  if (c.resolution < 2 || c.resolution > 512) root.error("resolution", "must be in [2, 512]");

  {
    auto g = root.child("geometry");
    g.read("builder", c.geometry);
    g.read("length", c.geometry_params.length);
    g.read("amplitude", c.geometry_params.amplitude);
    g.read("r_inner", c.geometry_params.r_inner);
    g.read("r_outer", c.geometry_params.r_outer);
    g.finish();
    if (!c.geometry.empty() && !geometry_from_name(c.geometry)) {
      rep.errors.push_back("geometry.builder: unknown geometry \"" + c.geometry +
                           "\" (registered builders: " + join(registered_geometries()) + ")");
    }
    if (!(c.geometry_params.length > 0.0)) g.error("length", "must be positive");
    if (c.geometry_params.amplitude < 0.0) g.error("amplitude", "must be >= 0");
  }

  {
    auto p = root.child("physics");
    p.read("re", c.cavity.re);
    p.read("u_lid", c.cavity.u_lid);
    p.read("u0", c.tgv.u0);
    p.read("nu", c.tgv.nu);
    p.read("rho0", c.tgv.rho0);
    p.read("lx", c.tgv.lx);
    p.read("ly", c.tgv.ly);
    p.finish();
    if (!(c.cavity.re > 0.0)) p.error("re", "must be positive");
    if (!(c.cavity.u_lid > 0.0)) p.error("u_lid", "must be positive");
    if (c.tgv.u0 < 0.0) p.error("u0", "must be >= 0");
    if (!(c.tgv.nu > 0.0)) p.error("nu", "must be positive");
    if (!(c.tgv.rho0 > 0.0)) p.error("rho0", "must be positive");
    if (!(c.tgv.lx > 0.0)) p.error("lx", "must be positive");
    if (!(c.tgv.ly > 0.0)) p.error("ly", "must be positive");
    c.tgv.p0 = c.tgv.rho0 * d2q9().cs2;
    c.cavity.length = c.geometry_params.length;
  }

  {
    auto s = root.child("solver");
    s.read("cfl", c.solver.cfl);
    s.read("dt", c.solver.dt);
    s.read("tau", c.solver.tau);
    s.read("max_steps", c.solver.n_max);
    s.read("final_time", c.solver.final_time);
    s.read("epsilon", c.solver.epsilon);
    s.read("stop_on_convergence", c.solver.stop_on_convergence);
    s.read("adaptive_dt", c.solver.adaptive_dt);
    s.read("bc_per_stage", c.solver.bc_per_stage);
    s.read("mass_correction", c.solver.mass_correction);
    read_enum(s, "convection", c.solver.convection,
              {{"advective", ConvectionForm::Advective}, {"flux", ConvectionForm::Flux}});
    read_enum(s, "relaxation", c.solver.relaxation,
              {{"continuous", RelaxationMode::Continuous}, {"lattice", RelaxationMode::Lattice}});
    read_enum(s, "kernel", c.solver.kernel, {{"parallel", KernelKind::Parallel}, {"reference", KernelKind::Reference}});
    std::string wall;
    s.read("wall", wall);
    if (!wall.empty() && wall != "bounce_back" && wall != "equilibrium") {
      s.error("wall", "unknown value \"" + wall + "\" (expected bounce_back or equilibrium)");
    }
    c.equilibrium_walls = wall == "equilibrium";
    if (const json* t = s.raw("threads")) {
      if (t->is_string() && t->get<std::string>() == "auto") {
        c.solver.threads = 0;
      } else if (t->is_number_integer() && t->get<int>() >= 1) {
        c.solver.threads = t->get<int>();
      } else {
        s.error("threads", "expected a positive integer or \"auto\"");
      }
    }
    s.finish();
    if (!(c.solver.cfl > 0.0) || c.solver.cfl > 1.0) s.error("cfl", "CFL must be in (0, 1]");
    if (c.solver.dt && !(*c.solver.dt > 0.0)) s.error("dt", "must be positive");
    if (c.solver.tau && !(*c.solver.tau > 0.0)) s.error("tau", "must be positive");
    if (c.solver.final_time && !(*c.solver.final_time > 0.0)) s.error("final_time", "must be positive");
    if (c.solver.n_max < 0) s.error("max_steps", "must be >= 0");
    if (!(c.solver.epsilon > 0.0)) s.error("epsilon", "must be positive");
  }

  {
    auto o = root.child("output");
    o.read("directory", c.output.directory);
    o.read("interval", c.output.interval);
    o.read("vtk", c.output.vtk);
    o.read("vtk_series", c.output.vtk_series);
    o.read("diagnostics", c.output.diagnostics);
    o.read("centerlines", c.output.centerlines);
    o.finish();
    if (c.output.interval < 1) o.error("interval", "must be >= 1");
    c.solver.output_every = c.output.interval;
  }

  {
    auto st = root.child("study");
    if (const json* r = st.raw("resolutions")) {
      if (!r->is_array() || r->size() < 3) {
        st.error("resolutions", "expected an array of at least three integers");
      } else {
        c.study.resolutions.clear();
        for (const auto& x : *r) {
          if (!x.is_number_integer() || x.get<int>() < 2) {
            st.error("resolutions", "entries must be integers >= 2");
            break;
          }
          c.study.resolutions.push_back(x.get<int>());
        }
      }
    }
    st.read("final_time", c.study.final_time);
    st.read("exact_injection", c.study.exact_injection);
    st.finish();
    if (c.study.final_time < 0.0) st.error("final_time", "must be >= 0");
  }
  root.finish();

  const bool tgv_family = c.case_name == "taylor_green" || c.case_name == "taylor_green_curved";
  if (tgv_family && !c.solver.final_time) c.solver.final_time = c.tgv.unit_decay_time();

  const bool clamped = c.case_name == "lid_cavity" || c.case_name == "taylor_green_curved" || c.case_name == "rest";
  if (clamped && c.resolution <= c.degree) rep.errors.push_back("resolution: must exceed the degree on clamped grids");
  if (c.case_name == "taylor_green" && c.tgv.u0 == 0.0) {
    rep.warnings.push_back("physics.u0: zero amplitude gives a rest state; errors are undefined");
  }

  c.warnings = rep.warnings;
  if (!rep.errors.empty()) {
    std::string msg = source + ": " + std::to_string(rep.errors.size()) + " configuration error(s):";
    for (const auto& e : rep.errors) msg += "\n  " + e;
    throw ConfigError(msg);
  }
  return c;
}

}  // namespace

std::vector<std::string> registered_cases() { return kCases; }

RunConfig parse_config_text(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError(source + ": parse error: " + e.what());
  }
  return parse_document(doc, source);
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open configuration file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

CaseSpec build_case(const RunConfig& c) {
  if (c.case_name == "taylor_green") return tgv_case(c.tgv, c.resolution, c.degree);
  if (c.case_name == "lid_cavity") return cavity_case(c.cavity, c.resolution, c.degree, c.equilibrium_walls);
  if (c.case_name == "taylor_green_curved") {
    return tgv_curved_case(c.tgv, c.resolution, c.degree, c.geometry_params.amplitude);
  }
  if (c.case_name == "rest") {
    const auto kind = geometry_from_name(c.geometry.empty() ? "unit_square" : c.geometry);
    if (!kind) throw ConfigError("unknown geometry " + c.geometry);
    GeometryParams g = c.geometry_params;
    g.degree = c.degree;
    const bool periodic = *kind == GeometryKind::PeriodicBox;
    g.elements_u = g.elements_v = periodic ? c.resolution : c.resolution - c.degree;
    CaseSpec s;
    s.name = "rest";
    s.patch = build_geometry(*kind, g);
    for (auto& e : s.boundaries.edges) e = periodic ? EdgeCondition::periodic() : EdgeCondition::wall();
    s.initial = [](const Vec2&, double& rho, Vec2& u) {
      rho = 1.0;
      u = Vec2::Zero();
    };
    s.nu = c.tgv.nu;
    return s;
  }
  throw ConfigError("unknown case " + c.case_name);
}

}  // namespace igalbm
