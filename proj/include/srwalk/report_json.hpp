#pragma once

#include <string>

#include "json.hpp"
#include "srwalk/analysis.hpp"
#include "srwalk/error.hpp"
#include "srwalk/geometry.hpp"
#include "srwalk/model_io.hpp"
#include "srwalk/reversal.hpp"
#include "srwalk/reversibility.hpp"
#include "srwalk/stationary.hpp"

namespace srw {

inline json to_json(const ValidationReport& r) {
  json v = json::array();
  for (const auto& x : r.violations) {
    v.push_back({{"face", std::string(face_name(x.face))}, {"description", x.description}});
  }
  return {{"ok", r.ok},
          {"violations", v},
          {"chain_irreducible", std::string(tri_state_name(r.chain_irreducible))},
          {"free_walk_irreducible", r.free_walk_irreducible}};
}

inline json to_json(const ConstantEstimate& c) {
  json w = json::array();
  for (const auto& x : c.witnesses) {
    w.push_back({{"step", step_key(x.step)},
                 {"numerator", x.numerator},
                 {"denominator", x.denominator},
                 {"ratio", x.denominator > 0.0 ? json(x.ratio()) : json(nullptr)}});
  }
  json out = {{"name", c.name}, {"failure", std::string(failure_name(c.failure))}, {"witnesses", w}};
  if (c.ok()) out["value"] = c.value;
  if (!c.detail.empty()) out["detail"] = c.detail;
  return out;
}

inline json to_json(const ConditionResult& c) {
  json details = json::object();
  if (!c.detail.empty()) details["message"] = c.detail;
  if (!c.values.empty()) details["values"] = c.values;
  if (!c.constants.empty()) {
    json cs = json::array();
    for (const auto& k : c.constants) cs.push_back(to_json(k));
    details["constants"] = cs;
  }
  return {{"status", std::string(status_name(c.status))}, {"details", details}};
}

inline json to_json(const ReversibilityConstants& c) {
  return {{"c1plus", c.c1plus}, {"c2plus", c.c2plus}, {"c10", c.c10},
          {"c20", c.c20},       {"c0", c.c0},         {"tolerance_used", c.tolerance_used}};
}

inline json to_json(const ConditionReport& r) {
  json out = {{"a1", to_json(r.a1)},
              {"a2", to_json(r.a2)},
              {"a3", to_json(r.a3)},
              {"b1", to_json(r.b1)},
              {"b2", to_json(r.b2)}};
  if (r.constants) out["constants"] = to_json(*r.constants);
  return out;
}

inline json residuals_json(const std::array<double, 4>& res) {
  json out = json::object();
  for (Face f : kFaces) out[std::string(face_name(f))] = res[face_index(f)];
  return out;
}

inline json to_json(const RootCandidate& c) {
  return {{"z1", c.z1}, {"z2", c.z2}, {"residuals", residuals_json(c.residuals)},
          {"verified", c.verified}};
}

inline json to_json(const GeometricSolution& s) {
  json roots = json::array();
  for (const auto& r : s.roots) roots.push_back(to_json(r));
  return {{"eta1", s.eta1},
          {"eta2", s.eta2},
          {"residuals", residuals_json(s.residuals)},
          {"multiplicity_note", s.multiplicity_note},
          {"roots", roots}};
}

inline json to_json(const StationaryDistribution& d) {
  return {{"pi00", d.pi00}, {"eta1", d.eta1},         {"eta2", d.eta2},
          {"axis_rate1", d.axis_rate1}, {"axis_rate2", d.axis_rate2},
          {"k_h", d.k_h},   {"k_v", d.k_v},           {"k_int", d.k_int}};
}

inline json to_json(const SingularSolution& s) {
  return {{"transposed", s.transposed}, {"eta1", s.eta1},     {"eta2", s.eta2},
          {"alpha1", s.alpha1},         {"c2plus", s.c2plus}, {"c10", s.c10},
          {"c20", s.c20},               {"required_zeros_ok", s.required_zeros_ok}};
}

inline json to_json(const BalanceReport& b) {
  return {{"max_residual", b.max_residual},
          {"worst_state", {b.worst_n1, b.worst_n2}},
          {"states_checked", b.states.size()},
          {"ok", b.ok}};
}

inline json to_json(const AnalysisReport& r) {
  json out = {{"verdict", std::string(verdict_name(r.verdict))},
              {"validation", to_json(r.validation)}};
  if (!r.reason.empty()) out["reason"] = r.reason;
  if (r.conditions) out["conditions"] = to_json(*r.conditions);
  if (r.solution) out["solution"] = to_json(*r.solution);
  if (!r.rejected_roots.empty()) {
    json roots = json::array();
    for (const auto& c : r.rejected_roots) roots.push_back(to_json(c));
    out["rejected_roots"] = roots;
  }
  if (r.singular) out["singular"] = to_json(*r.singular);
  if (r.stationary) {
    out["stationary"] = to_json(*r.stationary);
    out["eta1"] = r.stationary->eta1;
    out["eta2"] = r.stationary->eta2;
    out["pi00"] = r.stationary->pi00;
    out["k_h"] = r.stationary->k_h;
    out["k_v"] = r.stationary->k_v;
    out["k_int"] = r.stationary->k_int;
  }
  if (r.balance) out["balance"] = to_json(*r.balance);
  if (r.product_form) out["product_form"] = *r.product_form;
  if (r.reversed) {
    out["reversed"] = {{"homogeneity_residual", r.reversed->homogeneity_residual},
                       {"row_sum_error", r.reversed->row_sum_error},
                       {"strictly_reversible", r.reversed->strictly_reversible}};
  }
  if (r.reversed_model_path) out["reversed_model_path"] = *r.reversed_model_path;
  if (r.oracle_tv) out["oracle_tv"] = *r.oracle_tv;
  return out;
}

inline json error_json(const Error& e) {
  return {{"error", {{"kind", std::string(kind_name(e.kind()))}, {"message", e.what()}}}};
}

}  // namespace srw
