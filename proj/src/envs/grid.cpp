#include "safegrid/envs/grid.hpp"

#include <deque>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace safegrid::envs {

GridSpec parse_grid(const std::string& text) {
  GridSpec spec;
  std::vector<std::string> rows;
  {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
      if (!line.empty()) rows.push_back(line);
    }
  }
  if (rows.empty()) throw std::invalid_argument("grid: empty layout");

  spec.height = static_cast<int>(rows.size());
  spec.width = static_cast<int>(rows[0].size());
  spec.cells.resize(static_cast<std::size_t>(spec.width) * spec.height);

  int goals = 0;
  int starts = 0;
  for (int y = 0; y < spec.height; ++y) {
    if (static_cast<int>(rows[y].size()) != spec.width) {
      throw std::invalid_argument("grid: rows have unequal length");
    }
    for (int x = 0; x < spec.width; ++x) {
      Cell c;
      switch (rows[y][static_cast<std::size_t>(x)]) {
        case '.': c = Cell::land; break;
        case 'W': c = Cell::water; break;
        case '#': c = Cell::wall; break;
        case 'G': c = Cell::goal; ++goals; break;
        case 'A':
          c = Cell::land;
          spec.start = {x, y};
          ++starts;
          break;
        default:
          throw std::invalid_argument(std::string("grid: unknown cell character '") +
                                      rows[y][static_cast<std::size_t>(x)] + "'");
      }
      spec.cells[static_cast<std::size_t>(y) * spec.width + x] = c;
    }
  }

  if (goals != 1) throw std::invalid_argument("grid: expected exactly one goal cell");
  if (starts != 1) throw std::invalid_argument("grid: expected exactly one start cell");
  for (int y = 0; y < spec.height; ++y) {
    for (int x = 0; x < spec.width; ++x) {
      bool border = x == 0 || y == 0 || x == spec.width - 1 || y == spec.height - 1;
      if (border && spec.at(x, y) != Cell::wall && spec.at(x, y) != Cell::water) {
        throw std::invalid_argument("grid: border cells must be wall or water");
      }
    }
  }
  return spec;
}

GridSpec load_grid(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("grid: cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_grid(buf.str());
}

Eigen::MatrixXi bfs_water_distance(const GridSpec& spec) {
  const int sentinel = spec.width + spec.height;
  Eigen::MatrixXi dist = Eigen::MatrixXi::Constant(spec.height, spec.width, sentinel);

  std::deque<Coord> frontier;
  for (int y = 0; y < spec.height; ++y) {
    for (int x = 0; x < spec.width; ++x) {
      if (spec.at(x, y) == Cell::water) {
        dist(y, x) = 0;
        frontier.push_back({x, y});
      }
    }
  }
  const int dx[4] = {-1, 1, 0, 0};
  const int dy[4] = {0, 0, -1, 1};
  while (!frontier.empty()) {
    Coord c = frontier.front();
    frontier.pop_front();
    for (int k = 0; k < 4; ++k) {
      int nx = c.x + dx[k];
      int ny = c.y + dy[k];
      if (!spec.in_bounds(nx, ny)) continue;
      if (spec.at(nx, ny) == Cell::wall) continue;
      if (dist(ny, nx) <= dist(c.y, c.x) + 1) continue;
      dist(ny, nx) = dist(c.y, c.x) + 1;
      frontier.push_back({nx, ny});
    }
  }
  return dist;
}

}  // namespace safegrid::envs
