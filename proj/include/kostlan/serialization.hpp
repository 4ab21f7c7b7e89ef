#pragma once

#include <json.hpp>
#include <string>

#include "kostlan/expansion.hpp"
#include "kostlan/norms.hpp"
#include "kostlan/poly.hpp"
#include "kostlan/topology.hpp"

namespace kostlan {

using json = nlohmann::json;  // keys serialize sorted -> deterministic bytes

inline json poly_to_json(const HomogeneousPoly& P) {
  json coeffs = json::array();
  for_each_monomial(P.n + 1, P.d, [&](const MultiIndex& a, std::size_t idx) {
    coeffs.push_back({{"alpha", a}, {"gamma", P.coeffs[idx]}});
  });
  return {{"n", P.n}, {"d", P.d}, {"coeffs", coeffs}};
}

inline HomogeneousPoly poly_from_json(const json& j) {
  HomogeneousPoly P(j.at("n").get<int>(), j.at("d").get<int>());
  for (const auto& c : j.at("coeffs")) {
    MultiIndex a = c.at("alpha").get<MultiIndex>();
    P.at(a) = c.at("gamma").get<double>();
  }
  return P;
}

inline json expansion_to_json(const HarmonicExpansion& e) {
  json comps = json::array();
  for (const auto& [l, c] : e.comps) comps.push_back({{"ell", l}, {"coeffs", c}});
  return {{"n", e.n}, {"d", e.d}, {"components", comps}};
}

inline HarmonicExpansion expansion_from_json(const json& j) {
  const int n = j.at("n").get<int>();
  const int d = j.at("d").get<int>();
  const auto& comps = j.at("components");
  int parity = d % 2;
  if (!comps.empty()) parity = comps.front().at("ell").get<int>() % 2;
  HarmonicExpansion e(n, d, parity);
  for (const auto& c : comps)
    e.set_component(c.at("ell").get<int>(), c.at("coeffs").get<std::vector<double>>());
  return e;
}

inline json extremum_to_json(const ExtremumReport& r, int n) {
  std::vector<double> arg(r.arg.x.begin(), r.arg.x.begin() + n + 1);
  return {{"value", r.value},
          {"arg", arg},
          {"grid_resolution", r.grid_resolution},
          {"refinement_iterations", r.refinement_iterations},
          {"certified", r.certified},
          {"singular", r.singular}};
}

inline json signature_to_json(const TopologySignature& s) {
  if (s.n == 1) return {{"n", 1}, {"roots", s.roots}};
  return {{"n", 2},
          {"components", s.component_count},
          {"forest", s.forest},
          {"depth", s.nest_depth},
          {"betti", s.betti_total}};
}

}  // namespace kostlan
