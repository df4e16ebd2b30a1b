#pragma once

// Builtin scenarios, addressable by name from the CLI.

#include <string>
#include <vector>

#include "shellgamma/config.hpp"

namespace shellgamma {

struct BuiltinScenario {
  std::string name;
  std::string description;
  Json document;
};

inline std::vector<BuiltinScenario> builtin_scenarios() {
  const Json bump = Json::array({{{"amplitude", 1.0}, {"k", {1.0, 1.0}}, {"phase", {0.0, 0.0}}}});
  const Json rigid_z = {{"rigid", {{"omega", {0.0, 0.0, 1.0}}}}};
  std::vector<BuiltinScenario> s;

  s.push_back({"plate-gamma-limit",
               "plate, g1 = g2 = 1/2, mu = lambda = 1, kappa = 1, V = (0, 0, sin sin), w = 0",
               {{"name", "plate-gamma-limit"},
                {"study", "gamma-limit"},
                {"patch", {{"kind", "plate"}}},
                {"thickness", {{"g1", 0.5}, {"g2", 0.5}}},
                {"material", {{"type", "isotropic"}, {"mu", 1.0}, {"lambda", 1.0}}},
                {"V", {{"out_of_plane", bump}}},
                {"kappa", 1.0},
                {"output", "plate-gamma-limit.csv"}}});

  s.push_back({"sphere-cap-gamma-limit",
               "unit hemisphere, rigid V = e3 x x, stretching-only limit",
               {{"name", "sphere-cap-gamma-limit"},
                {"study", "gamma-limit"},
                {"patch", {{"kind", "sphere_cap"}, {"cap_angle", kPi / 2.0}}},
                {"thickness", {{"g1", 0.5}, {"g2", 0.5}}},
                {"V", rigid_z},
                {"kappa", 1.0},
                {"output", "sphere-cap-gamma-limit.csv"}}});

  s.push_back({"plate-variable-thickness-gamma-limit",
               "plate, modulated thickness with g1 != g2, bending plus in-plane strain",
               {{"name", "plate-variable-thickness-gamma-limit"},
                {"study", "gamma-limit"},
                {"patch", {{"kind", "plate"}}},
                {"thickness",
                 {{"g1", {{"constant", 0.4}, {"linear", {0.05, 0.0}}}},
                  {"g2",
                   {{"constant", 0.6},
                    {"modes",
                     {{{"amplitude", 0.1}, {"k", {1.0, 1.0}}, {"phase", {0.0, 0.0}}}}}}}}},
                {"V", {{"out_of_plane", bump}, {"rigid", {{"omega", {0.2, -0.1, 0.3}}}}}},
                {"w",
                 {{"modes",
                   {{{"amplitude", {0.3, -0.2, 0.1}}, {"k", {1.0, 2.0}}, {"phase", {0.0, 0.5}}}}}}},
                {"kappa", 1.0},
                {"output", "plate-variable-thickness-gamma-limit.csv"}}});

  s.push_back({"plate-expansion-order",
               "expansion residual orders on the plate, V = (0, 0, sin sin)",
               {{"name", "plate-expansion-order"},
                {"study", "expansion-order"},
                {"patch", {{"kind", "plate"}}},
                {"V", {{"out_of_plane", bump}}},
                {"output", "plate-expansion-order.csv"}}});

  s.push_back({"sphere-expansion-order",
               "expansion residual orders on the unit hemisphere with rigid V",
               {{"name", "sphere-expansion-order"},
                {"study", "expansion-order"},
                {"patch", {{"kind", "sphere_cap"}}},
                {"V", rigid_z},
                {"output", "sphere-expansion-order.csv"}}});

  s.push_back({"cylinder-expansion-order",
               "expansion residual orders on the unit cylinder with rigid V",
               {{"name", "cylinder-expansion-order"},
                {"study", "expansion-order"},
                {"patch", {{"kind", "cylinder"}}},
                {"V", {{"rigid", {{"omega", {0.3, -0.4, 1.0}}}}}},
                {"output", "cylinder-expansion-order.csv"}}});

  s.push_back({"plate-variable-expansion-order",
               "expansion residual orders with g1 != g2 and a nonzero strain generator",
               {{"name", "plate-variable-expansion-order"},
                {"study", "expansion-order"},
                {"patch", {{"kind", "plate"}}},
                {"thickness",
                 {{"g1", 0.4},
                  {"g2",
                   {{"constant", 0.6},
                    {"modes",
                     {{{"amplitude", 0.1}, {"k", {1.0, 1.0}}, {"phase", {0.0, 0.0}}}}}}}}},
                {"V", {{"out_of_plane", bump}}},
                {"w",
                 {{"modes",
                   {{{"amplitude", {0.3, -0.2, 0.1}}, {"k", {1.0, 2.0}}, {"phase", {0.0, 0.5}}}}}}},
                {"output", "plate-variable-expansion-order.csv"}}});

  s.push_back({"q2-check-isotropic",
               "Q2 reduction against closed form and descent, mu = lambda = 1",
               {{"name", "q2-check-isotropic"},
                {"study", "q2-check"},
                {"patch", {{"kind", "torus_patch"}}},
                {"material", {{"type", "isotropic"}, {"mu", 1.0}, {"lambda", 1.0}}},
                {"output", "q2-check-isotropic.csv"}}});

  s.push_back({"sphere-load-align",
               "f(x) = x on the full unit sphere: Procrustes versus rotation sampling",
               {{"name", "sphere-load-align"},
                {"study", "load-align"},
                {"patch", {{"kind", "sphere_cap"}, {"cap_angle", kPi}}},
                {"thickness", {{"g1", 0.5}, {"g2", 0.5}}},
                {"load", {{"field", "radial"}, {"scale", 1.0}}},
                {"output", "sphere-load-align.csv"}}});

  return s;
}

inline const BuiltinScenario* find_scenario(const std::string& name) {
  static const std::vector<BuiltinScenario> all = builtin_scenarios();
  for (const auto& s : all) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

}  // namespace shellgamma
