#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace safegrid::envs {

enum class Cell : std::uint8_t { land, water, wall, goal };

struct Coord {
  int x = 0;  // column
  int y = 0;  // row

  bool operator==(const Coord&) const = default;
};

/// A rectangular grid layout. Cells are stored row-major. Invariants (checked
/// by the loader): exactly one goal, the start is a land cell, and every
/// border cell is wall or water so the agent cannot leave the grid.
struct GridSpec {
  int width = 0;
  int height = 0;
  std::vector<Cell> cells;
  Coord start;

  Cell at(int x, int y) const { return cells[static_cast<std::size_t>(y) * width + x]; }
  bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
};

/// Parses a grid from text: one row per line, characters
///   '.' land   'W' water   '#' wall   'G' goal   'A' start (a land cell)
/// Throws std::invalid_argument on malformed text or violated invariants.
GridSpec parse_grid(const std::string& text);

GridSpec load_grid(const std::filesystem::path& path);

/// Multi-source BFS distance to the nearest water cell, expanding through
/// non-wall cells with 4-connectivity. Water cells get 0. Walls and cells
/// unreachable from water get the sentinel width + height. Test oracle for
/// the Manhattan-distance safety feature on open layouts.
Eigen::MatrixXi bfs_water_distance(const GridSpec& spec);

}  // namespace safegrid::envs
