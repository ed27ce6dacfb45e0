#include "leastgrad/cli/problem.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <set>
#include <sstream>

#include "leastgrad/errors.hpp"
#include "leastgrad/field_io.hpp"

namespace leastgrad::cli {

namespace pt = boost::property_tree;
namespace fs = std::filesystem;

namespace {

std::vector<double> numbers(std::string_view text, std::string_view what) {
  std::vector<double> out;
  std::string s(text);
  std::stringstream in(s);
  std::string token;
  while (std::getline(in, token, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    while (used < token.size() && std::isspace(static_cast<unsigned char>(token[used]))) ++used;
    if (used == 0 || used != token.size()) {
      throw DomainError("bad number '" + token + "' in " + std::string(what));
    }
    out.push_back(v);
  }
  return out;
}

// Splits "kind:params" into its two halves; params may be empty.
std::pair<std::string, std::string> split_kind(const std::string& spec) {
  const std::size_t colon = spec.find(':');
  if (colon == std::string::npos) return {spec, ""};
  return {spec.substr(0, colon), spec.substr(colon + 1)};
}

bool is_number(const std::string& s) {
  try {
    std::size_t used = 0;
    std::stod(s, &used);
    return used == s.size();
  } catch (const std::exception&) {
    return false;
  }
}

const std::set<std::string> kKnownKeys = {
    "problem.shape",         "problem.n",           "problem.data",        "problem.data_scale",
    "problem.set",           "metric.kind",         "metric.weight",       "metric.tensor",
    "solver.max_iters",      "solver.tol_gap",      "solver.tol_div",      "solver.tau",
    "solver.sigma",          "solver.check_every",  "solver.seed",         "barrier.band_cells",
    "barrier.delta_cells",   "barrier.from_mask",   "structure.jump_tol",  "structure.grad_tol",
    "structure.var_tol",     "imaging.phantom",     "imaging.refine_forward", "imaging.forward_tol",
    "output.dir"};

template <class T>
T get(const pt::ptree& tree, const std::string& key, T fallback) {
  try {
    return tree.get<T>(key, fallback);
  } catch (const pt::ptree_error& e) {
    throw DomainError("config key '" + key + "': " + e.what());
  }
}

}  // namespace

ProblemSpec load_config(const fs::path& path, ProblemSpec s) {
  if (!fs::is_regular_file(path)) throw DomainError("config file not found: " + path.string());
  pt::ptree tree;
  try {
    pt::read_ini(path.string(), tree);
  } catch (const pt::ptree_error& e) {
    throw DomainError(std::string("cannot parse config: ") + e.what());
  }
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw DomainError("config entry '" + section + "' outside a section");
    for (const auto& [key, value] : body) {
      if (!kKnownKeys.contains(section + "." + key)) throw DomainError("unknown config key " + section + "." + key);
    }
  }
  s.shape = get(tree, "problem.shape", s.shape);
  s.n = get(tree, "problem.n", s.n);
  s.data = get(tree, "problem.data", s.data);
  s.data_scale = get(tree, "problem.data_scale", s.data_scale);
  s.set = get(tree, "problem.set", s.set);
  s.metric.kind = parse_norm_kind(get<std::string>(tree, "metric.kind", to_string(s.metric.kind)));
  s.metric.weight = get(tree, "metric.weight", s.metric.weight);
  s.metric.tensor = get(tree, "metric.tensor", s.metric.tensor);
  s.solver.max_iters = get(tree, "solver.max_iters", s.solver.max_iters);
  s.solver.tol_gap = get(tree, "solver.tol_gap", s.solver.tol_gap);
  s.solver.tol_div = get(tree, "solver.tol_div", s.solver.tol_div);
  if (auto v = tree.get_optional<double>("solver.tau")) s.solver.tau = *v;
  if (auto v = tree.get_optional<double>("solver.sigma")) s.solver.sigma = *v;
  s.solver.check_every = get(tree, "solver.check_every", s.solver.check_every);
  if (auto v = tree.get_optional<std::uint64_t>("solver.seed")) s.solver.seed = *v;
  s.band_cells = get(tree, "barrier.band_cells", s.band_cells);
  s.delta_cells = get(tree, "barrier.delta_cells", s.delta_cells);
  s.distance_from_mask = get(tree, "barrier.from_mask", s.distance_from_mask);
  s.jump_tol = get(tree, "structure.jump_tol", s.jump_tol);
  s.grad_tol = get(tree, "structure.grad_tol", s.grad_tol);
  s.var_tol = get(tree, "structure.var_tol", s.var_tol);
  s.phantom = get(tree, "imaging.phantom", s.phantom);
  s.refine_forward = get(tree, "imaging.refine_forward", s.refine_forward);
  s.forward_tol = get(tree, "imaging.forward_tol", s.forward_tol);
  s.out = get<std::string>(tree, "output.dir", s.out.string());
  return s;
}

std::string format_config(const ProblemSpec& s) {
  std::ostringstream os;
  os << "[problem]\nshape = " << s.shape << "\nn = " << s.n << "\ndata = " << s.data
     << "\ndata_scale = " << format_double(s.data_scale) << "\nset = " << s.set << "\n\n";
  os << "[metric]\nkind = " << to_string(s.metric.kind) << "\nweight = " << s.metric.weight
     << "\ntensor = " << s.metric.tensor << "\n\n";
  os << "[solver]\nmax_iters = " << s.solver.max_iters << "\ntol_gap = " << format_double(s.solver.tol_gap)
     << "\ntol_div = " << format_double(s.solver.tol_div) << "\ncheck_every = " << s.solver.check_every << "\n";
  if (s.solver.tau) os << "tau = " << format_double(*s.solver.tau) << "\n";
  if (s.solver.sigma) os << "sigma = " << format_double(*s.solver.sigma) << "\n";
  if (s.solver.seed) os << "seed = " << *s.solver.seed << "\n";
  os << "\n[barrier]\nband_cells = " << format_double(s.band_cells) << "\ndelta_cells = " << format_double(s.delta_cells)
     << "\nfrom_mask = " << (s.distance_from_mask ? "true" : "false") << "\n\n";
  os << "[structure]\njump_tol = " << format_double(s.jump_tol) << "\ngrad_tol = " << format_double(s.grad_tol)
     << "\nvar_tol = " << format_double(s.var_tol) << "\n\n";
  os << "[imaging]\nphantom = " << s.phantom << "\nrefine_forward = " << (s.refine_forward ? "true" : "false")
     << "\nforward_tol = " << format_double(s.forward_tol) << "\n";
  return os.str();
}

void validate(const ProblemSpec& s) {
  if (s.n < 8) throw DomainError("resolution must be at least 8");
  const auto check_file = [](const std::string& spec) {
    const auto [kind, rest] = split_kind(spec);
    if (kind != "file") return;
    std::stringstream in(rest);
    std::string part;
    while (std::getline(in, part, ';')) {
      if (!fs::is_regular_file(part)) throw DomainError("file not found: " + part);
    }
  };
  check_file(s.data);
  check_file(s.metric.weight);
  check_file(s.metric.tensor);
  if (s.solver.max_iters < 0) throw DomainError("max_iters must be non-negative");
  if (s.solver.check_every < 1) throw DomainError("check_every must be positive");
}

ScalarGrid build_data(const std::string& spec, double scale, const Shape& shape, const GridGeometry& g) {
  const auto [kind, rest] = split_kind(spec);
  const BoundingBox box = bounding_box(shape);
  ScalarGrid f;
  if (kind == "linear-x") {
    f = sample(g, [](const Vec2& p) { return p.x; });
  } else if (kind == "linear-y") {
    f = sample(g, [](const Vec2& p) { return p.y; });
  } else if (kind == "top-edge" || kind == "top-edge-tilted") {
    double slope = 0.0;
    if (kind == "top-edge-tilted") {
      const auto v = rest.empty() ? std::vector<double>{0.2} : numbers(rest, "boundary data");
      if (v.size() != 1) throw DomainError("top-edge-tilted expects one slope");
      slope = v[0];
    }
    // 1 + slope x above the top edge, between the two side lines; 0 elsewhere.
    f = sample(g, [&](const Vec2& p) {
      return p.y > box.hi.y && p.x > box.lo.x && p.x < box.hi.x ? 1.0 + slope * p.x : 0.0;
    });
  } else if (kind == "file") {
    f = read_field(rest);
    require_same_geometry(f.geometry(), g, "boundary data file vs grid");
  } else {
    throw DomainError("unknown boundary data '" + spec + "'");
  }
  if (scale != 1.0) {
    for (double& v : f.values()) v *= scale;
  }
  return f;
}

Phantom parse_phantom(const std::string& spec) {
  const auto [kind, rest] = split_kind(spec);
  Phantom p;
  p.kind = parse_phantom_kind(kind);
  if (rest.empty()) return p;
  const auto v = numbers(rest, "phantom");
  switch (p.kind) {
    case PhantomKind::Constant:
      if (v.size() != 1) throw DomainError("constant phantom expects base");
      p.base = v[0];
      break;
    case PhantomKind::Layered:
      if (v.size() != 2) throw DomainError("layered phantom expects base,amp");
      p.base = v[0];
      p.amplitude = v[1];
      break;
    case PhantomKind::GaussianBump:
      if (v.size() != 5 || !(v[4] > 0.0)) throw DomainError("bump phantom expects base,amp,cx,cy,width");
      p.base = v[0];
      p.amplitude = v[1];
      p.center = {v[2], v[3]};
      p.width = v[4];
      break;
  }
  return p;
}

MetricField build_metric(const MetricSpec& spec, const DomainMask& mask) {
  const GridGeometry& g = mask.geometry();
  ScalarGrid a;
  if (is_number(spec.weight)) {
    a = ScalarGrid(g, std::stod(spec.weight));
  } else {
    const auto [kind, rest] = split_kind(spec.weight);
    if (kind == "file") {
      a = read_field(rest);
      require_same_geometry(a.geometry(), g, "weight file vs grid");
    } else {
      a = sample(g, parse_phantom(spec.weight));
    }
  }
  std::vector<Sym2> sigma;
  if (spec.kind == NormKind::Riemannian) {
    const auto [kind, rest] = split_kind(spec.tensor);
    if (kind == "file") {
      std::vector<ScalarGrid> parts;
      std::stringstream in(rest);
      std::string part;
      while (std::getline(in, part, ';')) parts.push_back(read_field(part));
      if (parts.size() != 3) throw DomainError("tensor files expect xx;xy;yy");
      for (const auto& p : parts) require_same_geometry(p.geometry(), g, "tensor file vs grid");
      sigma.resize(static_cast<std::size_t>(g.cells()));
      for (int c = 0; c < g.cells(); ++c) sigma[static_cast<std::size_t>(c)] = {parts[0][c], parts[1][c], parts[2][c]};
    } else {
      const auto v = numbers(spec.tensor, "tensor");
      if (v.size() != 3) throw DomainError("tensor expects xx,xy,yy");
      sigma.assign(static_cast<std::size_t>(g.cells()), Sym2{v[0], v[1], v[2]});
    }
  }
  MetricField m(spec.kind, std::move(a), std::move(sigma));
  const MetricValidation check = leastgrad::validate(m, mask);
  if (!check.valid) {
    throw InvalidMetricError("invalid metric at cell " + std::to_string(check.violations.front().cell) + ": " +
                             check.violations.front().message);
  }
  return m;
}

BuiltProblem build_problem(const ProblemSpec& spec) {
  validate(spec);
  BuiltProblem p;
  p.shape = parse_shape(spec.shape);
  p.mask = build_mask(p.shape, spec.n);
  p.f = build_data(spec.data, spec.data_scale, p.shape, p.mask.geometry());
  p.metric = build_metric(spec.metric, p.mask);
  return p;
}

}  // namespace leastgrad::cli
