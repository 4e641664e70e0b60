#include "charcauchy/io.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

namespace charcauchy {

std::string format_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

namespace {

const char* node_region(const SlabGrid& g, int i, int j) {
  if (i == g.i_zero) return "N";
  const double u = g.u(i);
  const double v = g.v(j);
  if (classify(g.spacetime, u, v, CausalRegion::Jplus)) return "Jplus";
  if (classify(g.spacetime, u, v, CausalRegion::Jminus)) return "Jminus";
  return "exterior";
}

}  // namespace

void write_field_csv(const std::string& path, const GridField& field) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "u,v,value,region\n";
  const SlabGrid& g = field.grid;
  for (int i = 0; i < g.nu; ++i)
    for (int j = 0; j < g.nv; ++j)
      out << format_double(g.u(i)) << ',' << format_double(g.v(j)) << ','
          << format_double(field.at(i, j)) << ',' << node_region(g, i, j)
          << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

GridField read_field_csv(const std::string& path, const SlabGrid& grid) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("u,v,value", 0) != 0)
    throw std::runtime_error("bad field CSV header in " + path);
  GridField f = make_field(grid);
  std::size_t count = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const char* p = line.c_str();
    char* end = nullptr;
    std::strtod(p, &end);  // u
    if (*end != ',') throw std::runtime_error("bad CSV row: " + line);
    p = end + 1;
    std::strtod(p, &end);  // v
    if (*end != ',') throw std::runtime_error("bad CSV row: " + line);
    p = end + 1;
    const double value = std::strtod(p, &end);
    if (count >= f.a.size()) throw std::runtime_error("too many CSV rows");
    f.a[count++] = value;
  }
  if (count != f.a.size())
    throw std::runtime_error("CSV row count does not match the grid");
  return f;
}

void write_json(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << j.dump(2) << '\n';
}

}  // namespace charcauchy
