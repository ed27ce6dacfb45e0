#include "leastgrad/field_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "leastgrad/errors.hpp"

namespace leastgrad {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_field(const ScalarGrid& field) {
  const GridGeometry& g = field.geometry();
  std::string out = "# " + std::to_string(g.nx) + " " + std::to_string(g.ny) + " " + format_double(g.h) + " " +
                    format_double(g.origin.x) + " " + format_double(g.origin.y) + "\n";
  out.reserve(out.size() + static_cast<std::size_t>(g.cells()) * 24);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (i) out += ',';
      out += format_double(field.at(i, j));
    }
    out += '\n';
  }
  return out;
}

namespace {

double parse_number(const std::string& token, int line) {
  const char* begin = token.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  while (end && (*end == ' ' || *end == '\t' || *end == '\r')) ++end;
  if (end == begin || *end != '\0') {
    throw DomainError("field file line " + std::to_string(line) + ": bad number '" + token + "'");
  }
  return v;
}

}  // namespace

ScalarGrid parse_field(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line.rfind('#', 0) != 0) {
    throw DomainError("field file must start with '# nx ny h x0 y0'");
  }
  std::istringstream header(line.substr(1));
  GridGeometry g;
  std::string h, x0, y0;
  if (!(header >> g.nx >> g.ny >> h >> x0 >> y0) || g.nx <= 0 || g.ny <= 0) {
    throw DomainError("malformed field header '" + line + "'");
  }
  g.h = parse_number(h, 1);
  g.origin = {parse_number(x0, 1), parse_number(y0, 1)};
  if (!(g.h > 0.0)) throw DomainError("field header: h must be positive");
  ScalarGrid out(g);
  for (int j = 0; j < g.ny; ++j) {
    if (!std::getline(in, line)) throw DomainError("field file ends after " + std::to_string(j) + " rows");
    std::istringstream row(line);
    std::string token;
    int i = 0;
    while (std::getline(row, token, ',')) {
      if (i >= g.nx) throw DomainError("field file row " + std::to_string(j) + " has too many values");
      out.at(i, j) = parse_number(token, j + 2);
      ++i;
    }
    if (i != g.nx) throw DomainError("field file row " + std::to_string(j) + " has too few values");
  }
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") != std::string::npos) throw DomainError("trailing data in field file");
  }
  return out;
}

void write_field(const std::filesystem::path& path, const ScalarGrid& field) {
  write_file_atomic(path, format_field(field));
}

ScalarGrid read_field(const std::filesystem::path& path) { return parse_field(read_file(path)); }

void write_mask(const std::filesystem::path& path, const DomainMask& mask) {
  ScalarGrid m(mask.geometry());
  for (int c : mask.interior_cells()) m[c] = 1.0;
  write_field(path, m);
}

DomainMask read_mask(const std::filesystem::path& path) {
  const ScalarGrid m = read_field(path);
  std::vector<std::uint8_t> flags(static_cast<std::size_t>(m.geometry().cells()));
  for (int c = 0; c < m.geometry().cells(); ++c) {
    if (m[c] != 0.0 && m[c] != 1.0) throw DomainError("mask file values must be 0 or 1");
    flags[static_cast<std::size_t>(c)] = m[c] == 1.0 ? 1 : 0;
  }
  return DomainMask(m.geometry(), std::move(flags));
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DomainError("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw DomainError("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace leastgrad
