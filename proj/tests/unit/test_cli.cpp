#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "leastgrad/cli/app.hpp"
#include "leastgrad/cli/gallery.hpp"
#include "leastgrad/cli/problem.hpp"
#include "leastgrad/cli/tasks.hpp"
#include "leastgrad/errors.hpp"

using namespace leastgrad;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int code = 0;
  std::string out;
  std::string err;
};

RunResult invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "leastgrad");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("leastgrad_cli_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("config files override defaults and reject unknown keys") {
  const fs::path dir = scratch_dir("config");
  fs::create_directories(dir);
  const fs::path ini = dir / "p.ini";
  std::ofstream(ini) << "[problem]\nshape = box:1,1\nn = 32\ndata = top-edge\n"
                        "[metric]\nkind = riemannian\ntensor = 2,0.1,1\n"
                        "[solver]\nmax_iters = 500\nseed = 9\n";
  const cli::ProblemSpec s = cli::load_config(ini);
  CHECK(s.shape == "box:1,1");
  CHECK(s.n == 32);
  CHECK(s.data == "top-edge");
  CHECK(s.metric.kind == NormKind::Riemannian);
  CHECK(s.metric.tensor == "2,0.1,1");
  CHECK(s.solver.max_iters == 500);
  REQUIRE(s.solver.seed.has_value());
  CHECK(*s.solver.seed == 9u);
  CHECK(s.solver.tol_gap == 1e-3);

  // format_config produces a file that reads back to the same problem.
  std::ofstream(dir / "round.ini") << cli::format_config(s);
  const cli::ProblemSpec back = cli::load_config(dir / "round.ini");
  CHECK(cli::format_config(back) == cli::format_config(s));

  std::ofstream(dir / "bad.ini") << "[problem]\nshape = disk:1\nresolution = 5\n";
  CHECK_THROWS_AS(cli::load_config(dir / "bad.ini"), DomainError);
  CHECK_THROWS_AS(cli::load_config(dir / "missing.ini"), DomainError);
  fs::remove_all(dir);
}

TEST_CASE("exit codes") {
  CHECK(invoke({"--no-such-flag"}).code == cli::kValidationError);
  CHECK(invoke({"solve", "--n", "4"}).code == cli::kValidationError);
  CHECK(invoke({"solve", "--shape", "hexagon:1"}).code == cli::kValidationError);
  CHECK(invoke({"gallery", "run", "no-such-entry"}).code == cli::kValidationError);

  const fs::path dir = scratch_dir("exit");
  const RunResult short_run =
      invoke({"solve", "--shape", "disk:1", "--n", "16", "--max-iters", "5", "--out", dir.string()});
  CHECK(short_run.code == cli::kNotConverged);
  CHECK(fs::exists(dir / "report.json"));
  const RunResult ok = invoke({"solve", "--shape", "disk:1", "--n", "16", "--out", dir.string()});
  CHECK(ok.code == cli::kOk);
  CHECK(invoke({"certify", "--dir", dir.string()}).code == cli::kOk);
  CHECK(invoke({"structure", "--dir", dir.string(), "--levels", "-0.5,0,0.5"}).code == cli::kOk);
  CHECK(fs::exists(dir / "contours.csv"));
  CHECK(invoke({"certify", "--dir", (dir / "nothing").string()}).code == cli::kValidationError);

  // Data large enough to overflow the iteration.
  const RunResult blowup = invoke({"solve", "--shape", "disk:1", "--n", "16", "--data-scale", "1e307", "--weight",
                                   "1e307", "--out", (dir / "big").string()});
  CHECK(blowup.code == cli::kNumericalError);
  fs::remove_all(dir);
}

TEST_CASE("repeated runs write identical reports") {
  const fs::path a = scratch_dir("det_a"), b = scratch_dir("det_b");
  for (const fs::path& d : {a, b}) {
    CHECK(invoke({"solve", "--shape", "box:1,1", "--n", "16", "--data", "top-edge", "--out", d.string()}).code ==
          cli::kOk);
  }
  CHECK(slurp(a / "report.json") == slurp(b / "report.json"));
  CHECK(slurp(a / "u.csv") == slurp(b / "u.csv"));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("gallery entries carry notes and the cheap ones pass") {
  const auto& entries = cli::gallery();
  CHECK(entries.size() >= 7);
  for (const auto& e : entries) {
    CHECK(!e.id.empty());
    CHECK(!e.expected.empty());
    for (const auto& x : e.expected) {
      CHECK(!x.note.empty());
      CHECK(x.lo <= x.hi);
    }
  }
  const RunResult list = invoke({"gallery", "list"});
  CHECK(list.code == cli::kOk);
  for (const auto& e : entries) CHECK(list.out.find(e.id) != std::string::npos);

  const cli::GalleryOutcome perim = cli::gallery_run(cli::gallery_entry("half-square-perimeter"));
  CHECK(perim.passed);
  CHECK(perim.report.contains("gallery"));
  CHECK_THROWS_AS(cli::gallery_entry("nope"), DomainError);
}

TEST_CASE("pgm output: header, orientation and black exterior") {
  const DomainMask m = build_mask(Box{1, 1, {0, 0}}, 8);
  const GridGeometry& g = m.geometry();
  const ScalarGrid y = sample(g, [](const Vec2& p) { return p.y; });
  std::istringstream in(cli::format_pgm(y, m));
  std::string magic;
  int nx = 0, ny = 0, maxval = 0;
  in >> magic >> nx >> ny >> maxval;
  CHECK(magic == "P2");
  CHECK(nx == g.nx);
  CHECK(ny == g.ny);
  CHECK(maxval == 255);
  std::vector<int> px(static_cast<std::size_t>(nx * ny));
  for (int& v : px) in >> v;
  CHECK(in.good());
  // First row written is the top of the grid: exterior, so black.
  for (int i = 0; i < nx; ++i) CHECK(px[static_cast<std::size_t>(i)] == 0);
  // Top interior row is brightest, bottom interior row darkest.
  const int pad = kGhostPadding;
  CHECK(px[static_cast<std::size_t>(pad * nx + pad)] == 255);
  CHECK(px[static_cast<std::size_t>((ny - pad - 1) * nx + pad)] == 0);
}

TEST_CASE("contour csv lists every point with its line and level") {
  Polyline open{{{0, 0}, {0, 1}}, false};
  Polyline loop{{{0, 0}, {1, 0}, {1, 1}}, true};
  const std::string csv = cli::format_contours({{0.5, {open}}, {0.25, {loop}}});
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "line,point,x,y,closed,level");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 5);
  CHECK(csv.find("1,2,1,1,1,0.25") != std::string::npos);
}
