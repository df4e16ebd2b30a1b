#pragma once

// Study configuration: a JSON document parsed into StudyConfig with every
// default materialized. Unknown keys are rejected; errors carry the key path.

#include <array>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "shellgamma/errors.hpp"
#include "shellgamma/geometry.hpp"
#include "shellgamma/kinematics.hpp"

namespace shellgamma {

using Json = nlohmann::json;

enum class StudyKind { gamma_limit, expansion_order, q2_check, load_align };

inline std::string to_string(StudyKind k) {
  switch (k) {
    case StudyKind::gamma_limit: return "gamma-limit";
    case StudyKind::expansion_order: return "expansion-order";
    case StudyKind::q2_check: return "q2-check";
    case StudyKind::load_align: return "load-align";
  }
  return "?";
}

struct PatchSpec {
  PatchKind kind = PatchKind::plate;
  PatchParams params;
  bool operator==(const PatchSpec&) const = default;
};

/// c + l . u + sum of trig modes.
struct ScalarFieldSpec {
  double constant = 0.5;
  std::array<double, 2> linear{0.0, 0.0};
  std::vector<TrigMode> modes;
  bool operator==(const ScalarFieldSpec&) const = default;
};

struct ThicknessSpec {
  ScalarFieldSpec g1;
  ScalarFieldSpec g2;
  bool operator==(const ThicknessSpec&) const = default;
};

struct MaterialSpec {
  std::string type = "isotropic";  // isotropic | q3
  double mu = 1.0;
  double lambda = 1.0;
  std::array<double, 21> matrix{};
  bool operator==(const MaterialSpec&) const = default;
};

/// Sum of a linearized rigid motion, an affine map, out-of-plane modes and
/// vector modes.
struct FieldSpec {
  std::array<double, 3> omega{0.0, 0.0, 0.0};
  std::array<double, 3> translation{0.0, 0.0, 0.0};
  std::array<double, 9> affine_matrix{};
  std::array<double, 3> affine_offset{0.0, 0.0, 0.0};
  std::vector<TrigMode> out_of_plane;
  std::vector<VectorTrigMode> modes;
  bool operator==(const FieldSpec&) const = default;
};

struct EnergyScaleSpec {
  std::string type = "kappa2_h4";  // kappa2_h4 | power
  double alpha = 5.0;
  bool operator==(const EnergyScaleSpec&) const = default;
};

struct LoadSpec {
  std::string field = "constant";  // constant | radial | plate_cosine
  std::array<double, 3> vector{0.0, 0.0, 1.0};
  double scale = 1.0;  // radial: f = scale x; plate_cosine: amplitude
  double k = 1.0;      // plate_cosine: f = (0, 0, a cos(2 pi k u1) cos(2 pi k u2))
  std::string scaling = "example";  // example | power
  double exponent = 3.0;
  std::array<double, 9> rotation{1, 0, 0, 0, 1, 0, 0, 0, 1};
  double r_value = 0.0;
  int samples = 100000;
  std::uint64_t seed = 20240601;
  bool operator==(const LoadSpec&) const = default;
};

struct QuadratureSpec {
  int surface_order = kDefaultSurfaceOrder;
  int transversal_order = kDefaultTransversalOrder;
  bool operator==(const QuadratureSpec&) const = default;
};

struct Q2CheckSpec {
  int samples = 200;
  std::uint64_t seed = 12345;
  bool operator==(const Q2CheckSpec&) const = default;
};

struct ToleranceSpec {
  double gamma_raw = 0.05;
  double gamma_extrapolated = 0.02;
  double stretch_slope = 2.9;
  double bend_slope = 1.9;
  double r_squared = 0.99;
  double q2_closed_form = 1e-10;
  double q2_brute_force = 1e-8;
  double load_sampling = 1e-9;
  double isometry = 1e-8;
  bool operator==(const ToleranceSpec&) const = default;
};

struct StudyConfig {
  std::string name = "custom";
  StudyKind study = StudyKind::gamma_limit;
  PatchSpec patch;
  ThicknessSpec thickness;
  MaterialSpec material;
  FieldSpec v;
  FieldSpec w;
  double kappa = 1.0;
  EnergyScaleSpec energy_scale;
  std::vector<double> h_schedule;
  std::optional<LoadSpec> load;
  QuadratureSpec quadrature;
  Q2CheckSpec q2;
  ToleranceSpec tolerances;
  double richardson_order = 1.0;
  std::string output = "report.csv";
  bool operator==(const StudyConfig&) const = default;
};

inline std::vector<double> default_h_schedule(StudyKind k) {
  const int last = k == StudyKind::expansion_order ? 9 : 7;
  std::vector<double> hs;
  for (int e = 3; e <= last; ++e) hs.push_back(std::ldexp(1.0, -e));
  return hs;
}

// ---------------------------------------------------------------------------
// Reading

namespace detail {

inline std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

inline std::string index_path(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

inline void require_object(const Json& j, const std::string& path) {
  if (!j.is_object()) throw ParseError(path.empty() ? "<root>" : path, "expected an object");
}

inline void allow_keys(const Json& j, const std::string& path,
                       std::initializer_list<const char*> keys) {
  require_object(j, path);
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) throw ParseError(join(path, it.key()), "unknown key");
  }
}

inline double read_number(const Json& j, const std::string& path) {
  if (!j.is_number()) throw ParseError(path, "expected a number");
  return j.get<double>();
}

inline void read(const Json& obj, const char* key, const std::string& path, double& out) {
  if (obj.contains(key)) out = read_number(obj.at(key), join(path, key));
}

inline void read(const Json& obj, const char* key, const std::string& path, int& out) {
  if (!obj.contains(key)) return;
  const Json& j = obj.at(key);
  if (!j.is_number_integer()) throw ParseError(join(path, key), "expected an integer");
  out = j.get<int>();
}

inline void read(const Json& obj, const char* key, const std::string& path,
                 std::uint64_t& out) {
  if (!obj.contains(key)) return;
  const Json& j = obj.at(key);
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0)) {
    throw ParseError(join(path, key), "expected a non-negative integer");
  }
  out = j.get<std::uint64_t>();
}

inline void read(const Json& obj, const char* key, const std::string& path, bool& out) {
  if (!obj.contains(key)) return;
  const Json& j = obj.at(key);
  if (!j.is_boolean()) throw ParseError(join(path, key), "expected a boolean");
  out = j.get<bool>();
}

inline void read(const Json& obj, const char* key, const std::string& path, std::string& out) {
  if (!obj.contains(key)) return;
  const Json& j = obj.at(key);
  if (!j.is_string()) throw ParseError(join(path, key), "expected a string");
  out = j.get<std::string>();
}

template <std::size_t N>
void read(const Json& obj, const char* key, const std::string& path,
          std::array<double, N>& out) {
  if (!obj.contains(key)) return;
  const Json& j = obj.at(key);
  const std::string p = join(path, key);
  if (!j.is_array() || j.size() != N) {
    throw ParseError(p, "expected an array of " + std::to_string(N) + " numbers");
  }
  for (std::size_t i = 0; i < N; ++i) out[i] = read_number(j[i], index_path(p, i));
}

inline TrigMode read_trig_mode(const Json& j, const std::string& path) {
  allow_keys(j, path, {"amplitude", "k", "phase"});
  TrigMode m;
  read(j, "amplitude", path, m.amplitude);
  read(j, "k", path, m.k);
  read(j, "phase", path, m.phase);
  return m;
}

inline VectorTrigMode read_vector_mode(const Json& j, const std::string& path) {
  allow_keys(j, path, {"amplitude", "k", "phase"});
  VectorTrigMode m;
  read(j, "amplitude", path, m.amplitude);
  read(j, "k", path, m.k);
  read(j, "phase", path, m.phase);
  return m;
}

template <class T, class F>
void read_list(const Json& obj, const char* key, const std::string& path, std::vector<T>& out,
               F&& item) {
  if (!obj.contains(key)) return;
  const Json& j = obj.at(key);
  const std::string p = join(path, key);
  if (!j.is_array()) throw ParseError(p, "expected an array");
  out.clear();
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(item(j[i], index_path(p, i)));
}

inline ScalarFieldSpec read_scalar_field(const Json& j, const std::string& path) {
  ScalarFieldSpec s;
  if (j.is_number()) {
    s.constant = j.get<double>();
    return s;
  }
  allow_keys(j, path, {"constant", "linear", "modes"});
  read(j, "constant", path, s.constant);
  read(j, "linear", path, s.linear);
  read_list(j, "modes", path, s.modes, read_trig_mode);
  return s;
}

inline FieldSpec read_field(const Json& j, const std::string& path) {
  allow_keys(j, path, {"rigid", "affine", "out_of_plane", "modes"});
  FieldSpec f;
  if (j.contains("rigid")) {
    const std::string p = join(path, "rigid");
    allow_keys(j.at("rigid"), p, {"omega", "translation"});
    read(j.at("rigid"), "omega", p, f.omega);
    read(j.at("rigid"), "translation", p, f.translation);
  }
  if (j.contains("affine")) {
    const std::string p = join(path, "affine");
    allow_keys(j.at("affine"), p, {"matrix", "offset"});
    read(j.at("affine"), "matrix", p, f.affine_matrix);
    read(j.at("affine"), "offset", p, f.affine_offset);
  }
  read_list(j, "out_of_plane", path, f.out_of_plane, read_trig_mode);
  read_list(j, "modes", path, f.modes, read_vector_mode);
  return f;
}

inline StudyKind parse_study_kind(const std::string& s, const std::string& path) {
  for (auto k : {StudyKind::gamma_limit, StudyKind::expansion_order, StudyKind::q2_check,
                 StudyKind::load_align}) {
    if (s == to_string(k)) return k;
  }
  throw ValidationError(path, "unknown study kind '" + s + "'");
}

inline PatchKind parse_patch_kind(const std::string& s, const std::string& path) {
  for (auto k : {PatchKind::plate, PatchKind::sphere_cap, PatchKind::cylinder,
                 PatchKind::torus_patch}) {
    if (s == to_string(k)) return k;
  }
  throw ValidationError(path, "unknown patch kind '" + s + "'");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Validation

inline SurfacePatch build_patch(const PatchSpec& spec) {
  return make_builtin_patch(spec.kind, spec.params);
}

inline ScalarField build_scalar_field(const ScalarFieldSpec& s) {
  return trig_scalar_field(s.constant, Vec2(s.linear[0], s.linear[1]), s.modes);
}

inline ThicknessPair build_thickness(const ThicknessSpec& spec, const SurfaceQuadrature& squad) {
  ThicknessPair t = make_thickness(build_scalar_field(spec.g1), build_scalar_field(spec.g2), 0.0);
  t.lipschitz_bound = measured_lipschitz(t, squad);
  return t;
}

inline void validate_config(const StudyConfig& c) {
  using detail::join;
  auto positive = [](double v, const std::string& path) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError(path, "must be positive");
  };
  const PatchParams& p = c.patch.params;
  switch (c.patch.kind) {
    case PatchKind::plate:
      if (!(p.u_max[0] > p.u_min[0] && p.u_max[1] > p.u_min[1])) {
        throw ValidationError("patch.u_max", "must exceed u_min");
      }
      break;
    case PatchKind::sphere_cap:
      positive(p.radius, "patch.radius");
      if (!(p.cap_angle > 0.0 && p.cap_angle <= kPi)) {
        throw ValidationError("patch.cap_angle", "must lie in (0, pi]");
      }
      break;
    case PatchKind::cylinder:
      positive(p.radius, "patch.radius");
      positive(p.height, "patch.height");
      if (!(p.angle > 0.0 && p.angle <= 2.0 * kPi)) {
        throw ValidationError("patch.angle", "must lie in (0, 2 pi]");
      }
      break;
    case PatchKind::torus_patch:
      positive(p.minor_radius, "patch.minor_radius");
      if (!(p.radius > p.minor_radius)) {
        throw ValidationError("patch.radius", "major radius must exceed minor_radius");
      }
      if (!(p.u_max[0] > p.u_min[0] && p.u_max[1] > p.u_min[1])) {
        throw ValidationError("patch.u_max", "must exceed u_min");
      }
      break;
  }

  if (c.material.type == "isotropic") {
    positive(c.material.mu, "material.mu");
    if (!(c.material.lambda >= 0.0)) throw ValidationError("material.lambda", "must be >= 0");
  } else if (c.material.type != "q3") {
    throw ValidationError("material.type", "must be 'isotropic' or 'q3'");
  }

  if (!(c.kappa >= 0.0) || !std::isfinite(c.kappa)) {
    throw ValidationError("kappa", "must be finite and >= 0");
  }
  if (c.energy_scale.type == "power") {
    if (!(c.energy_scale.alpha > 4.0)) throw ValidationError("energy_scale.alpha", "must be > 4");
    if (c.kappa != 0.0) {
      throw ValidationError("energy_scale.type", "the 'power' scale requires kappa = 0");
    }
  } else if (c.energy_scale.type == "kappa2_h4") {
    if (!(c.kappa > 0.0)) {
      throw ValidationError("energy_scale.type", "kappa = 0 requires the 'power' scale");
    }
  } else {
    throw ValidationError("energy_scale.type", "must be 'kappa2_h4' or 'power'");
  }

  const auto& hs = c.h_schedule;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    const std::string path = detail::index_path("h_schedule", i);
    if (!(hs[i] > 0.0 && hs[i] < 1.0)) throw ValidationError(path, "h must lie in (0, 1)");
    if (i > 0 && !(hs[i] < hs[i - 1])) throw ValidationError(path, "must be strictly decreasing");
  }
  const bool needs_schedule = c.study != StudyKind::q2_check;
  if (needs_schedule && hs.size() < 4) {
    throw ValidationError("h_schedule", "needs at least 4 values for slope fits");
  }

  if (c.quadrature.surface_order < 1 || c.quadrature.surface_order > 64) {
    throw ValidationError("quadrature.surface_order", "must lie in [1, 64]");
  }
  if (c.quadrature.transversal_order < 1 || c.quadrature.transversal_order > 64) {
    throw ValidationError("quadrature.transversal_order", "must lie in [1, 64]");
  }
  if (c.q2.samples < 1) throw ValidationError("q2.samples", "must be >= 1");
  if (!(c.richardson_order > 0.0)) throw ValidationError("richardson_order", "must be > 0");
  if (c.output.empty()) throw ValidationError("output", "must be a non-empty path");

  if (c.load) {
    const LoadSpec& l = *c.load;
    if (l.field != "constant" && l.field != "radial" && l.field != "plate_cosine") {
      throw ValidationError("load.field", "must be 'constant', 'radial' or 'plate_cosine'");
    }
    if (l.scaling != "example" && l.scaling != "power") {
      throw ValidationError("load.scaling", "must be 'example' or 'power'");
    }
    if (l.samples < 1) throw ValidationError("load.samples", "must be >= 1");
    const Mat3 q = Eigen::Map<const Eigen::Matrix<double, 3, 3, Eigen::RowMajor>>(
        l.rotation.data());
    if ((q.transpose() * q - Mat3::Identity()).norm() > 1e-10 ||
        std::abs(q.determinant() - 1.0) > 1e-10) {
      throw ValidationError("load.rotation", "must be a rotation matrix");
    }
  }
  if (c.study == StudyKind::load_align && !c.load) {
    throw ValidationError("load", "the load-align study needs a load block");
  }

  // Pointwise thickness checks at the quadrature nodes of the patch.
  const SurfacePatch patch = build_patch(c.patch);
  const SurfaceQuadrature squad = make_surface_quadrature(patch, c.quadrature.surface_order);
  const ScalarField g1 = build_scalar_field(c.thickness.g1);
  const ScalarField g2 = build_scalar_field(c.thickness.g2);
  for (const auto& node : squad.nodes) {
    if (!(g1.value(node.geo.u) > 0.0)) throw ValidationError("thickness.g1", "must be positive");
    if (!(g2.value(node.geo.u) > 0.0)) throw ValidationError("thickness.g2", "must be positive");
  }
}

// ---------------------------------------------------------------------------
// Parsing and serialization

inline StudyConfig parse_config_json(const Json& root) {
  using namespace detail;
  allow_keys(root, "",
             {"name", "study", "patch", "thickness", "material", "V", "w", "kappa",
              "energy_scale", "h_schedule", "load", "quadrature", "q2", "tolerances",
              "richardson_order", "output"});
  StudyConfig c;
  read(root, "name", "", c.name);
  if (!root.contains("study")) throw ParseError("study", "missing required key");
  std::string study;
  read(root, "study", "", study);
  c.study = parse_study_kind(study, "study");

  if (root.contains("patch")) {
    const Json& j = root.at("patch");
    allow_keys(j, "patch",
               {"kind", "radius", "minor_radius", "cap_angle", "height", "angle", "u_min",
                "u_max", "flip_normal"});
    std::string kind = to_string(c.patch.kind);
    read(j, "kind", "patch", kind);
    c.patch.kind = parse_patch_kind(kind, "patch.kind");
    c.patch.params = default_patch_params(c.patch.kind);
    PatchParams& p = c.patch.params;
    read(j, "radius", "patch", p.radius);
    read(j, "minor_radius", "patch", p.minor_radius);
    read(j, "cap_angle", "patch", p.cap_angle);
    read(j, "height", "patch", p.height);
    read(j, "angle", "patch", p.angle);
    read(j, "u_min", "patch", p.u_min);
    read(j, "u_max", "patch", p.u_max);
    read(j, "flip_normal", "patch", p.flip_normal);
  }

  if (root.contains("thickness")) {
    const Json& j = root.at("thickness");
    allow_keys(j, "thickness", {"g1", "g2"});
    if (j.contains("g1")) c.thickness.g1 = read_scalar_field(j.at("g1"), "thickness.g1");
    if (j.contains("g2")) c.thickness.g2 = read_scalar_field(j.at("g2"), "thickness.g2");
  }

  if (root.contains("material")) {
    const Json& j = root.at("material");
    allow_keys(j, "material", {"type", "mu", "lambda", "matrix"});
    read(j, "type", "material", c.material.type);
    read(j, "mu", "material", c.material.mu);
    read(j, "lambda", "material", c.material.lambda);
    read(j, "matrix", "material", c.material.matrix);
    if (c.material.type == "q3" && !j.contains("matrix")) {
      throw ParseError("material.matrix", "missing required key for type 'q3'");
    }
  }

  if (root.contains("V")) c.v = read_field(root.at("V"), "V");
  if (root.contains("w")) c.w = read_field(root.at("w"), "w");
  read(root, "kappa", "", c.kappa);

  if (root.contains("energy_scale")) {
    const Json& j = root.at("energy_scale");
    allow_keys(j, "energy_scale", {"type", "alpha"});
    read(j, "type", "energy_scale", c.energy_scale.type);
    read(j, "alpha", "energy_scale", c.energy_scale.alpha);
  } else if (c.kappa == 0.0) {
    c.energy_scale.type = "power";
  }

  if (root.contains("h_schedule")) {
    const Json& j = root.at("h_schedule");
    if (!j.is_array()) throw ParseError("h_schedule", "expected an array of numbers");
    for (std::size_t i = 0; i < j.size(); ++i) {
      c.h_schedule.push_back(read_number(j[i], index_path("h_schedule", i)));
    }
  } else {
    c.h_schedule = default_h_schedule(c.study);
  }

  if (root.contains("load")) {
    const Json& j = root.at("load");
    allow_keys(j, "load",
               {"field", "vector", "scale", "k", "scaling", "exponent", "rotation", "r_value",
                "samples", "seed"});
    LoadSpec l;
    read(j, "field", "load", l.field);
    read(j, "vector", "load", l.vector);
    read(j, "scale", "load", l.scale);
    read(j, "k", "load", l.k);
    read(j, "scaling", "load", l.scaling);
    read(j, "exponent", "load", l.exponent);
    read(j, "rotation", "load", l.rotation);
    read(j, "r_value", "load", l.r_value);
    read(j, "samples", "load", l.samples);
    read(j, "seed", "load", l.seed);
    c.load = l;
  }

  if (root.contains("quadrature")) {
    const Json& j = root.at("quadrature");
    allow_keys(j, "quadrature", {"surface_order", "transversal_order"});
    read(j, "surface_order", "quadrature", c.quadrature.surface_order);
    read(j, "transversal_order", "quadrature", c.quadrature.transversal_order);
  }

  if (root.contains("q2")) {
    const Json& j = root.at("q2");
    allow_keys(j, "q2", {"samples", "seed"});
    read(j, "samples", "q2", c.q2.samples);
    read(j, "seed", "q2", c.q2.seed);
  }

  if (root.contains("tolerances")) {
    const Json& j = root.at("tolerances");
    const std::string p = "tolerances";
    allow_keys(j, p,
               {"gamma_raw", "gamma_extrapolated", "stretch_slope", "bend_slope", "r_squared",
                "q2_closed_form", "q2_brute_force", "load_sampling", "isometry"});
    ToleranceSpec& t = c.tolerances;
    read(j, "gamma_raw", p, t.gamma_raw);
    read(j, "gamma_extrapolated", p, t.gamma_extrapolated);
    read(j, "stretch_slope", p, t.stretch_slope);
    read(j, "bend_slope", p, t.bend_slope);
    read(j, "r_squared", p, t.r_squared);
    read(j, "q2_closed_form", p, t.q2_closed_form);
    read(j, "q2_brute_force", p, t.q2_brute_force);
    read(j, "load_sampling", p, t.load_sampling);
    read(j, "isometry", p, t.isometry);
  }

  read(root, "richardson_order", "", c.richardson_order);
  read(root, "output", "", c.output);
  validate_config(c);
  return c;
}

inline StudyConfig parse_config(const std::string& text) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError("<document>", std::string("malformed JSON: ") + e.what());
  }
  return parse_config_json(root);
}

namespace detail {

inline Json to_json(const TrigMode& m) {
  return Json{{"amplitude", m.amplitude}, {"k", m.k}, {"phase", m.phase}};
}

inline Json to_json(const VectorTrigMode& m) {
  return Json{{"amplitude", m.amplitude}, {"k", m.k}, {"phase", m.phase}};
}

template <class T>
Json list_json(const std::vector<T>& v) {
  Json a = Json::array();
  for (const auto& m : v) a.push_back(to_json(m));
  return a;
}

inline Json to_json(const ScalarFieldSpec& s) {
  return Json{{"constant", s.constant}, {"linear", s.linear}, {"modes", list_json(s.modes)}};
}

inline Json to_json(const FieldSpec& f) {
  return Json{{"rigid", {{"omega", f.omega}, {"translation", f.translation}}},
              {"affine", {{"matrix", f.affine_matrix}, {"offset", f.affine_offset}}},
              {"out_of_plane", list_json(f.out_of_plane)},
              {"modes", list_json(f.modes)}};
}

}  // namespace detail

inline Json config_to_json(const StudyConfig& c) {
  using detail::to_json;
  const PatchParams& p = c.patch.params;
  Json j;
  j["name"] = c.name;
  j["study"] = to_string(c.study);
  j["patch"] = {{"kind", to_string(c.patch.kind)},
                {"radius", p.radius},
                {"minor_radius", p.minor_radius},
                {"cap_angle", p.cap_angle},
                {"height", p.height},
                {"angle", p.angle},
                {"u_min", p.u_min},
                {"u_max", p.u_max},
                {"flip_normal", p.flip_normal}};
  j["thickness"] = {{"g1", to_json(c.thickness.g1)}, {"g2", to_json(c.thickness.g2)}};
  if (c.material.type == "q3") {
    j["material"] = {{"type", "q3"}, {"matrix", c.material.matrix}};
  } else {
    j["material"] = {{"type", c.material.type}, {"mu", c.material.mu},
                     {"lambda", c.material.lambda}};
  }
  j["V"] = to_json(c.v);
  j["w"] = to_json(c.w);
  j["kappa"] = c.kappa;
  j["energy_scale"] = {{"type", c.energy_scale.type}, {"alpha", c.energy_scale.alpha}};
  j["h_schedule"] = c.h_schedule;
  if (c.load) {
    const LoadSpec& l = *c.load;
    j["load"] = {{"field", l.field},       {"vector", l.vector},     {"scale", l.scale},
                 {"k", l.k},               {"scaling", l.scaling},   {"exponent", l.exponent},
                 {"rotation", l.rotation}, {"r_value", l.r_value},   {"samples", l.samples},
                 {"seed", l.seed}};
  }
  j["quadrature"] = {{"surface_order", c.quadrature.surface_order},
                     {"transversal_order", c.quadrature.transversal_order}};
  j["q2"] = {{"samples", c.q2.samples}, {"seed", c.q2.seed}};
  const ToleranceSpec& t = c.tolerances;
  j["tolerances"] = {{"gamma_raw", t.gamma_raw},
                     {"gamma_extrapolated", t.gamma_extrapolated},
                     {"stretch_slope", t.stretch_slope},
                     {"bend_slope", t.bend_slope},
                     {"r_squared", t.r_squared},
                     {"q2_closed_form", t.q2_closed_form},
                     {"q2_brute_force", t.q2_brute_force},
                     {"load_sampling", t.load_sampling},
                     {"isometry", t.isometry}};
  j["richardson_order"] = c.richardson_order;
  j["output"] = c.output;
  return j;
}

inline std::string serialize_config(const StudyConfig& c) { return config_to_json(c).dump(2); }

}  // namespace shellgamma
