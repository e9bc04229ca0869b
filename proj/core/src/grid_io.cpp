#include "amphi/grid_io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace amphi {
namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Header {
  std::string kind;
  Dims dims;
  double resolution = 1.0;
  double water_level = 0.0;
  std::uint64_t seed = 0;
  FreePlanes planes;
};

void write_grid(std::ostream& out, const Header& h, const std::vector<std::uint8_t>& cells) {
  out << "amphi-grid 1\n";
  out << "kind " << h.kind << '\n';
  out << "dims " << h.dims.nx << ' ' << h.dims.ny << ' ' << h.dims.nh << '\n';
  out << "resolution " << fmt_double(h.resolution) << '\n';
  out << "water_level " << fmt_double(h.water_level) << '\n';
  out << "seed " << h.seed << '\n';
  out << "planes " << h.planes.yz_index << ' ' << h.planes.xy_index << '\n';

  std::vector<std::pair<unsigned, std::size_t>> runs;
  for (std::uint8_t c : cells) {
    if (!runs.empty() && runs.back().first == c) {
      ++runs.back().second;
    } else {
      runs.emplace_back(c, 1);
    }
  }
  out << "runs " << runs.size() << '\n';
  for (const auto& [value, length] : runs) out << value << ' ' << length << '\n';
}

template <typename T>
void expect_field(std::istream& in, const char* name, T& value) {
  std::string key;
  if (!(in >> key) || key != name || !(in >> value)) {
    throw IoError(std::string("grid file: expected field '") + name + "'");
  }
}

std::vector<std::uint8_t> read_grid(std::istream& in, Header& h, unsigned max_value) {
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != "amphi-grid" || version != 1) {
    throw IoError("grid file: bad magic/version");
  }
  expect_field(in, "kind", h.kind);
  std::string key;
  if (!(in >> key) || key != "dims" || !(in >> h.dims.nx >> h.dims.ny >> h.dims.nh)) {
    throw IoError("grid file: expected dims");
  }
  expect_field(in, "resolution", h.resolution);
  expect_field(in, "water_level", h.water_level);
  expect_field(in, "seed", h.seed);
  if (!(in >> key) || key != "planes" || !(in >> h.planes.yz_index >> h.planes.xy_index)) {
    throw IoError("grid file: expected planes");
  }
  std::size_t nruns = 0;
  expect_field(in, "runs", nruns);

  const GridGeometry geom(h.dims, h.resolution);
  std::vector<std::uint8_t> cells;
  cells.reserve(geom.dims().volume());
  for (std::size_t r = 0; r < nruns; ++r) {
    unsigned value = 0;
    std::size_t length = 0;
    if (!(in >> value >> length) || value > max_value || length == 0) {
      throw IoError("grid file: malformed run");
    }
    if (cells.size() + length > geom.dims().volume()) throw IoError("grid file: too many cells");
    cells.insert(cells.end(), length, static_cast<std::uint8_t>(value));
  }
  if (cells.size() != geom.dims().volume()) throw IoError("grid file: cell count mismatch");
  return cells;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open for writing: " + path);
  return f;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open for reading: " + path);
  return f;
}

}  // namespace

void write_environment(std::ostream& out, const Environment& env) {
  Header h{"environment", env.geometry().dims(), env.geometry().resolution(), env.water.level,
           env.seed, env.planes};
  write_grid(out, h, env.occupancy.cells());
}

Environment read_environment(std::istream& in) {
  Header h;
  auto cells = read_grid(in, h, 1);
  if (h.kind != "environment") throw IoError("grid file: not an environment");
  Environment env;
  env.occupancy = VoxelGrid<std::uint8_t>(GridGeometry(h.dims, h.resolution), 0);
  env.occupancy.cells() = std::move(cells);
  env.water.level = h.water_level;
  env.seed = h.seed;
  env.planes = h.planes;
  return env;
}

void write_map(std::ostream& out, const WorldMap& map) {
  Header h{"map", map.geometry().dims(), map.geometry().resolution(), map.water.level, map.seed,
           FreePlanes{}};
  std::vector<std::uint8_t> raw;
  raw.reserve(map.cells.cells().size());
  for (CellState s : map.cells.cells()) raw.push_back(static_cast<std::uint8_t>(s));
  write_grid(out, h, raw);
}

WorldMap read_map(std::istream& in) {
  Header h;
  auto cells = read_grid(in, h, 3);
  if (h.kind != "map") throw IoError("grid file: not a map");
  WorldMap map;
  map.cells = VoxelGrid<CellState>(GridGeometry(h.dims, h.resolution), CellState::AssumedFree);
  for (std::size_t i = 0; i < cells.size(); ++i) map.cells[i] = static_cast<CellState>(cells[i]);
  map.water.level = h.water_level;
  map.seed = h.seed;
  return map;
}

void save_environment(const std::string& path, const Environment& env) {
  auto f = open_out(path);
  write_environment(f, env);
}

Environment load_environment(const std::string& path) {
  auto f = open_in(path);
  return read_environment(f);
}

void save_map(const std::string& path, const WorldMap& map) {
  auto f = open_out(path);
  write_map(f, map);
}

WorldMap load_map(const std::string& path) {
  auto f = open_in(path);
  return read_map(f);
}

}  // namespace amphi
