#pragma once

// Study runner: builds the pipeline described by a StudyConfig, evaluates it
// over the h-schedule and writes a CSV plus a JSON summary.

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "shellgamma/config.hpp"
#include "shellgamma/convergence.hpp"
#include "shellgamma/geometry.hpp"
#include "shellgamma/kinematics.hpp"
#include "shellgamma/limit2d.hpp"
#include "shellgamma/loads.hpp"
#include "shellgamma/material.hpp"
#include "shellgamma/recovery3d.hpp"

namespace shellgamma {

// ---------------------------------------------------------------------------
// Config -> runtime objects

inline StoredEnergy build_material(const MaterialSpec& m) {
  if (m.type == "q3") return make_q3_material(m.matrix);
  return make_isotropic(m.mu, m.lambda);
}

inline DisplacementField build_field(const FieldSpec& f, const SurfacePatch& patch) {
  std::vector<DisplacementField> parts;
  const Vec3 omega(f.omega[0], f.omega[1], f.omega[2]);
  const Vec3 b(f.translation[0], f.translation[1], f.translation[2]);
  if (omega.norm() > 0.0 || b.norm() > 0.0) parts.push_back(rigid_field(patch, omega, b));
  const Mat3 m = Eigen::Map<const Eigen::Matrix<double, 3, 3, Eigen::RowMajor>>(
      f.affine_matrix.data());
  const Vec3 c(f.affine_offset[0], f.affine_offset[1], f.affine_offset[2]);
  if (m.norm() > 0.0 || c.norm() > 0.0) parts.push_back(affine_field(patch, m, c));
  if (!f.out_of_plane.empty()) parts.push_back(out_of_plane_field(f.out_of_plane));
  if (!f.modes.empty()) parts.push_back(trig_field(f.modes));
  if (parts.empty()) return zero_field();
  if (parts.size() == 1) return parts.front();
  return sum_fields(std::move(parts));
}

inline LoadField build_load(const LoadSpec& l) {
  LoadField load;
  load.scaling = l.scaling == "power" ? LoadScaling::power : LoadScaling::example;
  load.exponent = l.exponent;
  if (l.field == "radial") {
    const double s = l.scale;
    load.f = [s](const SurfacePoint& sp) { return (s * sp.x).eval(); };
  } else if (l.field == "plate_cosine") {
    const double a = l.scale, k = l.k;
    load.f = [a, k](const SurfacePoint& sp) {
      return Vec3(0.0, 0.0,
                  a * std::cos(2.0 * kPi * k * sp.u.x()) * std::cos(2.0 * kPi * k * sp.u.y()));
    };
  } else {
    const Vec3 v(l.vector[0], l.vector[1], l.vector[2]);
    load.f = [v](const SurfacePoint&) { return v; };
  }
  return load;
}

inline Mat3 load_rotation(const LoadSpec& l) {
  return Eigen::Map<const Eigen::Matrix<double, 3, 3, Eigen::RowMajor>>(l.rotation.data());
}

inline double config_energy_scale(const StudyConfig& c, double h) {
  return c.energy_scale.type == "power" ? std::pow(h, c.energy_scale.alpha)
                                        : energy_scale(h, c.kappa);
}

// ---------------------------------------------------------------------------
// Report

struct ReportRow {
  double h = std::numeric_limits<double>::quiet_NaN();
  double e_h = std::numeric_limits<double>::quiet_NaN();
  double E_h = std::numeric_limits<double>::quiet_NaN();
  double normalized = std::numeric_limits<double>::quiet_NaN();
  double I_limit = std::numeric_limits<double>::quiet_NaN();
  double rel_gap = std::numeric_limits<double>::quiet_NaN();
  double residual_stretch = std::numeric_limits<double>::quiet_NaN();
  double residual_bend = std::numeric_limits<double>::quiet_NaN();
  std::string status = "ok";
};

enum class StudyStatus { pass, fail, error };

inline std::string to_string(StudyStatus s) {
  switch (s) {
    case StudyStatus::pass: return "pass";
    case StudyStatus::fail: return "fail";
    case StudyStatus::error: return "error";
  }
  return "?";
}

struct StudyReport {
  std::string name;
  StudyKind study = StudyKind::gamma_limit;
  std::vector<ReportRow> rows;  // h descending
  StudyStatus status = StudyStatus::pass;
  Json summary = Json::object();  // fits, extrapolation, kind-specific details
};

inline const char* kCsvHeader =
    "h,e_h,E_h,normalized,I_limit,rel_gap,residual_stretch,residual_bend,status";

/// Shortest decimal that round-trips; non-finite values as nan / inf / -inf.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string report_csv(const StudyReport& r) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const auto& row : r.rows) {
    for (double v : {row.h, row.e_h, row.E_h, row.normalized, row.I_limit, row.rel_gap,
                     row.residual_stretch, row.residual_bend}) {
      out += format_double(v);
      out += ',';
    }
    out += row.status;
    out += '\n';
  }
  return out;
}

inline std::filesystem::path summary_path(const std::filesystem::path& csv) {
  std::filesystem::path p = csv;
  p.replace_extension(".summary.json");
  return p;
}

inline Json report_summary(const StudyReport& r) {
  Json s = r.summary;
  s["name"] = r.name;
  s["study"] = to_string(r.study);
  s["status"] = to_string(r.status);
  s["rows"] = r.rows.size();
  return s;
}

/// Writes the CSV to `path` and the summary to `<stem>.summary.json`.
inline void write_report(const StudyReport& r, const std::filesystem::path& path) {
  auto write = [](const std::filesystem::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + p.string() + "' for writing");
    f << text;
    f.flush();
    if (!f) throw IoError("write failed for '" + p.string() + "'");
  };
  write(path, report_csv(r));
  write(summary_path(path), report_summary(r).dump(2) + "\n");
}

/// Parses a CSV produced by report_csv back into rows.
inline std::vector<ReportRow> parse_report_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw ParseError("csv", "missing or unexpected header");
  }
  std::vector<ReportRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != 9) throw ParseError("csv", "row has " + std::to_string(cells.size()) + " fields");
    double v[8];
    for (int i = 0; i < 8; ++i) {
      const std::string& c = cells[i];
      if (c == "nan") {
        v[i] = std::numeric_limits<double>::quiet_NaN();
      } else if (c == "inf" || c == "-inf") {
        v[i] = (c[0] == '-' ? -1.0 : 1.0) * std::numeric_limits<double>::infinity();
      } else {
        const auto res = std::from_chars(c.data(), c.data() + c.size(), v[i]);
        if (res.ec != std::errc() || res.ptr != c.data() + c.size()) {
          throw ParseError("csv", "bad number '" + c + "'");
        }
      }
    }
    rows.push_back({v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], cells[8]});
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Running

namespace detail {

inline Json fit_json(const OrderFit& f, double threshold, double r2_threshold, bool pass) {
  Json j;
  j["slope"] = f.exact ? Json("exact") : Json(f.slope);
  j["r_squared"] = f.r_squared;
  j["exact"] = f.exact;
  j["points_used"] = f.points_used;
  j["zeros_excluded"] = f.zeros_excluded;
  j["slope_threshold"] = threshold;
  j["r_squared_threshold"] = r2_threshold;
  j["pass"] = pass;
  return j;
}

inline bool fit_passes(const OrderFit& f, double slope_tol, double r2_tol) {
  return f.exact || (f.slope >= slope_tol && f.r_squared >= r2_tol);
}

inline double relative_gap(double value, double limit) {
  return limit != 0.0 ? std::abs(value - limit) / std::abs(limit) : std::abs(value);
}

inline Json mat_json(const Mat3& m) {
  Json a = Json::array();
  for (int i = 0; i < 3; ++i) a.push_back({m(i, 0), m(i, 1), m(i, 2)});
  return a;
}

inline Json error_json(const Error& e, double h) {
  Json j;
  j["message"] = e.what();
  j["h"] = std::isnan(h) ? Json(nullptr) : Json(h);
  if (const auto* n = dynamic_cast<const NotAnIsometryError*>(&e)) {
    j["node"] = {n->worst_node().x(), n->worst_node().y()};
  } else if (const auto* b = dynamic_cast<const EnergyBlowupError*>(&e)) {
    j["node"] = {b->node().x(), b->node().y()};
    j["t"] = b->t();
  }
  return j;
}

struct Pipeline {
  SurfacePatch patch;
  SurfaceQuadrature squad;
  TransversalRule trule;
  ThicknessPair thick;
  StoredEnergy material;
};

inline Pipeline build_pipeline(const StudyConfig& c) {
  SurfacePatch patch = build_patch(c.patch);
  SurfaceQuadrature squad = make_surface_quadrature(patch, c.quadrature.surface_order);
  ThicknessPair thick = build_thickness(c.thickness, squad);
  validate_thickness(thick, squad);
  TransversalRule trule = make_transversal_rule(squad, thick, c.quadrature.transversal_order);
  return {std::move(patch), std::move(squad), std::move(trule), std::move(thick),
          build_material(c.material)};
}

inline void run_gamma_limit(const StudyConfig& c, const Pipeline& p, StudyReport& r) {
  const IsometryField iso =
      build_isometry(p.patch, build_field(c.v, p.patch), p.squad, c.tolerances.isometry);
  const DisplacementField w = build_field(c.w, p.patch);
  const StrainField strain = make_strain(w);
  const LimitEnergyBreakdown lim = eval_I(p.squad, p.thick, p.material, iso, strain, c.kappa);
  r.summary["I_limit"] = lim.total;
  r.summary["I_stretching"] = lim.stretching;
  r.summary["I_bending"] = lim.bending;

  std::optional<LoadField> load;
  Json load_rows = Json::array();
  if (c.load) {
    load = build_load(*c.load);
    const LimitEnergyBreakdown j = eval_J(p.squad, p.thick, p.material, iso, strain, c.kappa,
                                          load->f, load_rotation(*c.load), c.load->r_value);
    r.summary["J_limit"] = j.total;
  }

  for (double h : c.h_schedule) {
    ReportRow row;
    row.h = h;
    try {
      row.e_h = config_energy_scale(c, h);
      const RecoveryDeformation rec =
          build_recovery(p.patch, p.material, iso, strain, p.thick, h, row.e_h, c.kappa, p.squad);
      const ShellEnergyValue e = eval_shell_energy(rec, p.material, p.squad, p.trule);
      row.E_h = e.e_h_value;
      row.normalized = e.normalized;
      row.I_limit = lim.total;
      row.rel_gap = relative_gap(row.normalized, lim.total);
      row.residual_stretch =
          stretching_expansion_residual(p.squad, iso, w, p.thick, h).significant();
      row.residual_bend = bending_expansion_residual(p.squad, iso, w, p.thick, h).significant();
      if (load) {
        const double jh = eval_J_h(rec, p.material, *load, p.patch, p.thick, p.squad, p.trule);
        load_rows.push_back({{"h", h}, {"J_h_normalized", jh / row.e_h}});
      }
    } catch (const Error& e) {
      row.status = "error";
      r.rows.push_back(row);
      r.status = StudyStatus::error;
      r.summary["error"] = error_json(e, h);
      return;
    }
    r.rows.push_back(row);
  }
  if (load) r.summary["load"] = load_rows;

  const ReportRow& last = r.rows.back();
  const ReportRow& prev = r.rows[r.rows.size() - 2];
  const double extrap =
      richardson(prev.h, prev.normalized, last.h, last.normalized, c.richardson_order);
  const double extrap_gap = relative_gap(extrap, lim.total);
  const bool raw_ok = last.rel_gap <= c.tolerances.gamma_raw;
  const bool extrap_ok = extrap_gap <= c.tolerances.gamma_extrapolated;
  r.summary["raw_gap"] = last.rel_gap;
  r.summary["raw_gap_tolerance"] = c.tolerances.gamma_raw;
  r.summary["extrapolated"] = extrap;
  r.summary["extrapolated_gap"] = extrap_gap;
  r.summary["extrapolated_gap_tolerance"] = c.tolerances.gamma_extrapolated;
  r.summary["richardson_order"] = c.richardson_order;

  std::vector<std::pair<double, double>> gaps;
  for (const auto& row : r.rows) gaps.emplace_back(row.h, std::abs(row.normalized - lim.total));
  try {
    const OrderFit g = fit_order(gaps);
    r.summary["gap_order"] = g.exact ? Json("exact") : Json(g.slope);
    r.summary["gap_order_r_squared"] = g.r_squared;
  } catch (const ParameterError&) {
    r.summary["gap_order"] = nullptr;
  }
  r.status = raw_ok && extrap_ok ? StudyStatus::pass : StudyStatus::fail;
}

inline void run_expansion_order(const StudyConfig& c, const Pipeline& p, StudyReport& r) {
  const IsometryField iso =
      build_isometry(p.patch, build_field(c.v, p.patch), p.squad, c.tolerances.isometry);
  const DisplacementField w = build_field(c.w, p.patch);
  std::vector<std::pair<double, double>> st, be;
  Json deficit = Json::array();
  for (double h : c.h_schedule) {
    ReportRow row;
    row.h = h;
    try {
      row.e_h = config_energy_scale(c, h);
      row.residual_stretch =
          stretching_expansion_residual(p.squad, iso, w, p.thick, h).significant();
      row.residual_bend = bending_expansion_residual(p.squad, iso, w, p.thick, h).significant();
      deficit.push_back(tangential_deficit_residual(p.squad, iso, p.thick, h).significant());
    } catch (const Error& e) {
      row.status = "error";
      r.rows.push_back(row);
      r.status = StudyStatus::error;
      r.summary["error"] = error_json(e, h);
      return;
    }
    st.emplace_back(h, row.residual_stretch);
    be.emplace_back(h, row.residual_bend);
    r.rows.push_back(row);
  }
  const ToleranceSpec& t = c.tolerances;
  const OrderFit fs = fit_order(st), fb = fit_order(be);
  const bool ps = fit_passes(fs, t.stretch_slope, t.r_squared);
  const bool pb = fit_passes(fb, t.bend_slope, t.r_squared);
  r.summary["fits"] = {{"stretching", fit_json(fs, t.stretch_slope, t.r_squared, ps)},
                       {"bending", fit_json(fb, t.bend_slope, t.r_squared, pb)}};
  r.summary["tangential_deficit"] = deficit;
  r.status = ps && pb ? StudyStatus::pass : StudyStatus::fail;
}

inline void run_q2_check(const StudyConfig& c, const Pipeline& p, StudyReport& r) {
  const QuadForm3& q3 = require_q3(p.material);
  const bool isotropic = c.material.type == "isotropic";
  std::mt19937_64 rng(c.q2.seed);
  std::uniform_int_distribution<std::size_t> pick(0, p.squad.nodes.size() - 1);
  std::normal_distribution<double> g(0.0, 1.0);
  double worst_closed = 0.0, worst_brute = 0.0;
  for (int i = 0; i < c.q2.samples; ++i) {
    const SurfacePoint& sp = p.squad.nodes[pick(rng)].geo;
    Mat2 f;
    for (int k = 0; k < 4; ++k) f(k / 2, k % 2) = g(rng);
    const QuadForm2 q2 = reduce_q2(q3, sp.n, sp.frame);
    const double lin = q2.apply_tangential(f);
    const DescentResult brute = minimize_q2_by_descent(q3, sp.n, sp.frame, f);
    const double scale = std::max(std::abs(lin), std::numeric_limits<double>::min());
    worst_brute = std::max(worst_brute, std::abs(lin - brute.value) / scale);
    if (isotropic) {
      const double cf = isotropic_q2_closed_form(c.material.mu, c.material.lambda, f);
      worst_closed = std::max(worst_closed, std::abs(lin - cf) / scale);
    }
  }
  const bool brute_ok = worst_brute <= c.tolerances.q2_brute_force;
  const bool closed_ok = !isotropic || worst_closed <= c.tolerances.q2_closed_form;
  r.summary["samples"] = c.q2.samples;
  r.summary["max_rel_dev_brute_force"] = worst_brute;
  r.summary["brute_force_tolerance"] = c.tolerances.q2_brute_force;
  r.summary["max_rel_dev_closed_form"] = isotropic ? Json(worst_closed) : Json(nullptr);
  r.summary["closed_form_tolerance"] = c.tolerances.q2_closed_form;
  r.status = brute_ok && closed_ok ? StudyStatus::pass : StudyStatus::fail;
}

inline void run_load_align(const StudyConfig& c, const Pipeline& p, StudyReport& r) {
  const LoadField load = build_load(*c.load);
  std::mt19937_64 rng(c.load->seed);
  Json per_h = Json::array();
  bool ok = true;
  for (double h : c.h_schedule) {
    ReportRow row;
    row.h = h;
    try {
      row.e_h = config_energy_scale(c, h);
      const RotationActionResult a =
          maximize_action(p.patch, load, p.thick, h, row.e_h, p.squad, p.trule);
      const double sampled = sampled_action_max(a.moment_matrix, c.load->samples, rng);
      const bool pass = sampled <= a.m_h + c.tolerances.load_sampling * std::abs(a.m_h);
      ok = ok && pass;
      per_h.push_back({{"h", h},
                       {"m_h", a.m_h},
                       {"sampled_max", sampled},
                       {"classification", to_string(a.kind)},
                       {"optimal_rotation", mat_json(a.optimal_rotation)},
                       {"pass", pass}});
    } catch (const Error& e) {
      row.status = "error";
      r.rows.push_back(row);
      r.status = StudyStatus::error;
      r.summary["error"] = error_json(e, h);
      return;
    }
    r.rows.push_back(row);
  }
  r.summary["actions"] = per_h;
  try {
    const MaximizerSet m = example_maximizer_set(p.squad, load, p.thick);
    r.summary["maximizer_set"] = {{"classification", to_string(m.kind)},
                                  {"max_value", m.max_value},
                                  {"representative", mat_json(m.representative)},
                                  {"r_value", m.r_value}};
  } catch (const UnsupportedCaseError& e) {
    r.summary["maximizer_set"] = {{"unsupported", e.what()}};
  }
  r.status = ok ? StudyStatus::pass : StudyStatus::fail;
}

}  // namespace detail

/// Runs the study. Module errors do not propagate: they end the run with
/// status error and are recorded in the summary with the failing h.
inline StudyReport run_study(const StudyConfig& c) {
  validate_config(c);
  StudyReport r;
  r.name = c.name;
  r.study = c.study;
  r.summary["config"] = config_to_json(c);
  try {
    const detail::Pipeline p = detail::build_pipeline(c);
    switch (c.study) {
      case StudyKind::gamma_limit: detail::run_gamma_limit(c, p, r); break;
      case StudyKind::expansion_order: detail::run_expansion_order(c, p, r); break;
      case StudyKind::q2_check: detail::run_q2_check(c, p, r); break;
      case StudyKind::load_align: detail::run_load_align(c, p, r); break;
    }
  } catch (const Error& e) {
    r.status = StudyStatus::error;
    r.summary["error"] = detail::error_json(e, std::numeric_limits<double>::quiet_NaN());
  }
  return r;
}

}  // namespace shellgamma
