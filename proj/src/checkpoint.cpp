#include "leastgrad/checkpoint.hpp"

#include "leastgrad/errors.hpp"
#include "leastgrad/field_io.hpp"
#include "leastgrad/report.hpp"

namespace leastgrad {

namespace fs = std::filesystem;

void save_checkpoint(const fs::path& dir, const SolverState& state) {
  fs::create_directories(dir);
  const GridGeometry& g = state.u.geometry();
  write_field(dir / "u.csv", state.u);
  write_field(dir / "u_bar.csv", state.u_bar);
  write_field(dir / "V_x.csv", state.v.component_x());
  write_field(dir / "V_y.csv", state.v.component_y());
  write_mask(dir / "mask.csv", DomainMask(g, state.mask_flags));
  const Json meta = {{"iteration", state.iteration},
                     {"converged", state.converged},
                     {"tau", state.tau},
                     {"sigma", state.sigma},
                     {"history", history_to_json(state.history)}};
  write_file_atomic(dir / "checkpoint.json", dump(meta));
}

SolverState load_checkpoint(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw DomainError("checkpoint directory not found: " + dir.string());
  SolverState s;
  Json meta;
  try {
    meta = Json::parse(read_file(dir / "checkpoint.json"));
    s.iteration = meta.at("iteration").get<long>();
    s.converged = meta.at("converged").get<bool>();
    s.tau = meta.at("tau").get<double>();
    s.sigma = meta.at("sigma").get<double>();
    s.history = history_from_json(meta.at("history"));
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("bad checkpoint.json: ") + e.what());
  }
  s.u = read_field(dir / "u.csv");
  s.u_bar = read_field(dir / "u_bar.csv");
  s.v = VectorGrid::from_components(read_field(dir / "V_x.csv"), read_field(dir / "V_y.csv"));
  const DomainMask mask = read_mask(dir / "mask.csv");
  require_same_geometry(s.u.geometry(), mask.geometry(), "checkpoint u vs mask");
  require_same_geometry(s.u_bar.geometry(), mask.geometry(), "checkpoint u_bar vs mask");
  require_same_geometry(s.v.geometry(), mask.geometry(), "checkpoint V vs mask");
  s.mask_flags.assign(mask.flags().begin(), mask.flags().end());
  return s;
}

}  // namespace leastgrad
