#include "lowcon/field_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace lowcon {

namespace {

void write_grid_csv(std::ostream& os, const Grid& g,
                    const std::vector<double>& v, int cols, int rows) {
  os << "nx,ny,hx,hy\n";
  os.precision(17);
  os << g.nx << ',' << g.ny << ',' << g.hx() << ',' << g.hy() << '\n';
  for (int j = 0; j < rows; ++j) {
    for (int i = 0; i < cols; ++i) {
      if (i) os << ',';
      os << v[j * cols + i];
    }
    os << '\n';
  }
}

struct CsvData {
  int nx, ny;
  double hx, hy;
  std::vector<double> values;
};

CsvData read_grid_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  std::getline(is, line);  // header
  std::getline(is, line);
  CsvData d;
  {
    std::istringstream ls(line);
    char c;
    ls >> d.nx >> c >> d.ny >> c >> d.hx >> c >> d.hy;
    if (!ls) throw std::runtime_error("bad CSV header in " + path.string());
  }
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tok;
    while (std::getline(ls, tok, ',')) d.values.push_back(std::stod(tok));
  }
  return d;
}

template <class FieldT>
void write_pgm_impl(const std::filesystem::path& path, const FieldT& f,
                    int cols, int rows, bool invert) {
  const auto& v = f.values();
  const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
  const double lo = *mn, span = (*mx - *mn) > 0.0 ? (*mx - *mn) : 1.0;
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string());
  os << "P5\n" << cols << ' ' << rows << "\n255\n";
  // PGM rows run top-to-bottom; grid rows run bottom-to-top.
  for (int j = rows - 1; j >= 0; --j) {
    for (int i = 0; i < cols; ++i) {
      double t = (v[j * cols + i] - lo) / span;
      if (invert) t = 1.0 - t;
      os.put(static_cast<char>(static_cast<std::uint8_t>(std::lround(255.0 * t))));
    }
  }
}

}  // namespace

void write_csv(const std::filesystem::path& path, const ScalarField& f) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string());
  const Grid& g = f.grid();
  write_grid_csv(os, g, f.values(), g.nx + 1, g.ny + 1);
}

void write_csv(const std::filesystem::path& path, const CellField& f) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string());
  const Grid& g = f.grid();
  write_grid_csv(os, g, f.values(), g.nx, g.ny);
}

ScalarField read_scalar_csv(const std::filesystem::path& path) {
  CsvData d = read_grid_csv(path);
  Grid g(d.nx, d.ny, d.hx * d.nx, d.hy * d.ny);
  return ScalarField(g, std::move(d.values));
}

CellField read_cell_csv(const std::filesystem::path& path) {
  CsvData d = read_grid_csv(path);
  Grid g(d.nx, d.ny, d.hx * d.nx, d.hy * d.ny);
  return CellField(g, std::move(d.values));
}

void write_pgm(const std::filesystem::path& path, const ScalarField& f, bool invert) {
  write_pgm_impl(path, f, f.grid().nx + 1, f.grid().ny + 1, invert);
}

void write_pgm(const std::filesystem::path& path, const CellField& f, bool invert) {
  write_pgm_impl(path, f, f.grid().nx, f.grid().ny, invert);
}

}  // namespace lowcon
