#pragma once

#include <iosfwd>
#include <string>

#include "amphi/grid.hpp"

namespace amphi {

// Grid file layout (ASCII, '\n' line endings, one record per line):
//
//   amphi-grid 1
//   kind <environment|map>
//   dims <nx> <ny> <nh>
//   resolution <m, %.17g>
//   water_level <m, %.17g>
//   seed <uint64>
//   planes <yz x-index> <xy h-index>
//   runs <count>
//   <value> <length>          (repeated `count` times)
//
// Cells are run-length encoded in index order i fastest, then j, then k.
// Environment values: 0 free, 1 occupied. Map values: 0 assumed-free,
// 1 assumed-obstacle, 2 confirmed-free, 3 confirmed-obstacle.

void write_environment(std::ostream& out, const Environment& env);
Environment read_environment(std::istream& in);
void save_environment(const std::string& path, const Environment& env);
Environment load_environment(const std::string& path);

/// Map files carry planes "-1 -1"; the planes belong to the environment.
void write_map(std::ostream& out, const WorldMap& map);
WorldMap read_map(std::istream& in);
void save_map(const std::string& path, const WorldMap& map);
WorldMap load_map(const std::string& path);

}  // namespace amphi
