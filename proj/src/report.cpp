#include "leastgrad/report.hpp"

namespace leastgrad {

Json to_json(const EnergyBreakdown& e) {
  return {{"interior_tv", e.interior_tv},
          {"boundary_penalty", e.boundary_penalty},
          {"relaxed_total", e.relaxed_total},
          {"stencil_total", e.stencil_total}};
}

Json to_json(const GapReport& g) {
  Json j = to_json(g.energy);
  j["primal"] = g.primal;
  j["stencil_primal"] = g.stencil_primal;
  j["dual"] = g.dual;
  j["gap"] = g.gap;
  j["certified_dual"] = g.certified_dual;
  j["div_residual"] = g.div_residual;
  j["feas_residual"] = g.feas_residual;
  return j;
}

Json history_to_json(const std::vector<GapSample>& history) {
  Json out = Json::array();
  for (const GapSample& s : history) {
    out.push_back({{"iteration", s.iteration},
                   {"primal", s.primal},
                   {"dual", s.dual},
                   {"gap", s.gap},
                   {"div_residual", s.div_residual}});
  }
  return out;
}

std::vector<GapSample> history_from_json(const Json& j) {
  std::vector<GapSample> out;
  for (const auto& s : j) {
    out.push_back({s.at("iteration").get<long>(), s.at("primal").get<double>(), s.at("dual").get<double>(),
                   s.at("gap").get<double>(), s.at("div_residual").get<double>()});
  }
  return out;
}

Json to_json(const SolveReport& r, bool include_timing) {
  Json j = to_json(r.energy);
  j["primal"] = r.primal;
  j["dual"] = r.dual;
  j["gap"] = r.gap;
  j["stencil_gap"] = r.stencil_gap;
  j["relative_gap"] = r.relative_gap;
  j["certified_dual"] = r.certified_dual;
  j["div_residual"] = r.div_residual;
  j["feas_residual"] = r.feas_residual;
  j["u_min"] = r.u_min;
  j["u_max"] = r.u_max;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  if (include_timing) j["wall_seconds"] = r.wall_seconds;
  j["history"] = history_to_json(r.history);
  return j;
}

Json to_json(const MetricValidation& v) {
  Json violations = Json::array();
  for (const auto& e : v.violations) violations.push_back({{"cell", e.cell}, {"message", e.message}});
  return {{"valid", v.valid}, {"alpha", v.alpha}, {"violations", violations}};
}

Json to_json(const AlignmentReport& r) {
  return {{"weighted_mean_alignment", r.weighted_mean},
          {"min_alignment_residual", r.min_residual},
          {"total_defect", r.total_defect},
          {"cells_counted", r.cells_counted},
          {"grad_threshold", r.grad_threshold},
          {"warnings", r.warnings}};
}

Json to_json(const BoundaryJumpReport& r, const DomainMask& mask) {
  Json faces = Json::array();
  for (std::size_t k : r.jump_faces) {
    const BoundaryFace& f = mask.faces()[k];
    const Vec2 c = mask.geometry().center(f.interior_cell);
    faces.push_back({{"face", k},
                     {"dir", to_string(f.dir)},
                     {"cell_x", c.x},
                     {"cell_y", c.y},
                     {"side", r.jump[k] == FaceJump::Below ? "u<f" : "u>f"},
                     {"trace", r.trace[k]},
                     {"residual", r.residual[k]}});
  }
  std::size_t unsaturated = 0;
  for (auto v : r.unsaturated) unsaturated += v;
  return {{"jump_threshold", r.threshold},
          {"attainment_fraction", r.attainment_fraction},
          {"jump_face_count", r.jump_faces.size()},
          {"max_jump_residual", r.max_jump_residual},
          {"unsaturated_face_count", unsaturated},
          {"jumps_on_unsaturated", r.jumps_on_unsaturated},
          {"trace_note", "normal trace taken from the adjacent host cell"},
          {"jump_faces", faces}};
}

Json to_json(const std::vector<ArcClassification>& arcs) {
  Json out = Json::array();
  for (const auto& a : arcs) {
    out.push_back({{"faces", a.faces.size()},
                   {"measure", a.measure},
                   {"f_min", a.f_min},
                   {"f_max", a.f_max},
                   {"variation", a.variation},
                   {"verdict", to_string(a.verdict)}});
  }
  return out;
}

Json to_json(const BarrierReport& r, const BarrierSummary& s) {
  Json comps = Json::array();
  for (const auto& c : s.components) {
    comps.push_back({{"faces", c.faces.size()},
                     {"measure", c.measure},
                     {"pass_fraction", c.pass_fraction},
                     {"fail_fraction", c.fail_fraction},
                     {"marginal_fraction", c.marginal_fraction},
                     {"mean_S", c.mean_S}});
  }
  return {{"condition", "sufficient condition -div phi_xi(x, Dd) > 0"},
          {"verdict", to_string(s.verdict)},
          {"delta", r.delta},
          {"band_width", r.band_width},
          {"pass_fraction", r.pass_fraction},
          {"fail_fraction", r.fail_fraction},
          {"marginal_fraction", r.marginal_fraction},
          {"components", comps}};
}

Json to_json(const ImagingReport& r, bool include_timing) {
  return {{"rel_l2_error_c", r.rel_l2_error_c},
          {"rel_l2_error_u", r.rel_l2_error_u},
          {"excluded_fraction", r.recovery.excluded_fraction},
          {"grad_floor", r.recovery.grad_floor},
          {"alignment", r.alignment},
          {"forward",
           {{"cg_iterations", r.forward.cg_iterations},
            {"cg_residual", r.forward.cg_residual},
            {"flux_sum", r.forward.flux_sum},
            {"flux_scale", r.forward.flux_scale}}},
          {"inversion", to_json(r.inversion.report, include_timing)}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace leastgrad
