#include "oppmdp/envs/grid.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <string>

#include "oppmdp/core/types.hpp"

namespace oppmdp::robot {

std::string_view move_name(Move m) noexcept {
  switch (m) {
    case Move::stay: return "Stay";
    case Move::north: return "N";
    case Move::south: return "S";
    case Move::east: return "E";
    case Move::west: return "W";
  }
  return "?";
}

namespace {

bool in_range(Cell c) { return c >= 1 && c <= kCells; }

bool adjacent(Cell a, Cell b) {
  const int ra = (a - 1) / kCols, ca = (a - 1) % kCols;
  const int rb = (b - 1) / kCols, cb = (b - 1) % kCols;
  return std::abs(ra - rb) + std::abs(ca - cb) == 1;
}

}  // namespace

std::vector<Wall> Grid::default_walls() {
  return {{12, 13}, {3, 8}, {7, 8}, {4, 9}, {9, 10}, {9, 14}, {13, 18}};
}

Grid::Grid(std::vector<Wall> walls) : walls_(std::move(walls)) {
  for (const Wall& w : walls_) {
    if (!in_range(w.a) || !in_range(w.b) || !adjacent(w.a, w.b))
      throw ConfigError("wall " + std::to_string(w.a) + "-" + std::to_string(w.b) +
                        " does not join adjacent cells");
  }
  for (Cell s = 1; s <= kCells; ++s) {
    auto& d = dist_[s - 1];
    d.fill(-1);
    d[s - 1] = 0;
    std::deque<Cell> frontier{s};
    while (!frontier.empty()) {
      const Cell c = frontier.front();
      frontier.pop_front();
      for (Cell nb : neighbors(c)) {
        if (d[nb - 1] < 0) {
          d[nb - 1] = d[c - 1] + 1;
          frontier.push_back(nb);
        }
      }
    }
  }
}

bool Grid::blocked(Cell a, Cell b) const {
  for (const Wall& w : walls_)
    if ((w.a == a && w.b == b) || (w.a == b && w.b == a)) return true;
  return false;
}

std::optional<Cell> Grid::destination(Cell c, Move m) const {
  const int row = (c - 1) / kCols;
  const int col = (c - 1) % kCols;
  Cell to = c;
  switch (m) {
    case Move::stay: return c;
    case Move::north: if (row == 0) return std::nullopt; to = c - kCols; break;
    case Move::south: if (row == kRows - 1) return std::nullopt; to = c + kCols; break;
    case Move::east: if (col == kCols - 1) return std::nullopt; to = c + 1; break;
    case Move::west: if (col == 0) return std::nullopt; to = c - 1; break;
  }
  if (blocked(c, to)) return std::nullopt;
  return to;
}

std::vector<Cell> Grid::neighbors(Cell c) const {
  std::vector<Cell> out;
  for (Move m : kMoves) {
    if (m == Move::stay) continue;
    if (auto d = destination(c, m)) out.push_back(*d);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool Grid::connected() const {
  for (const auto& row : dist_)
    for (int d : row)
      if (d < 0) return false;
  return true;
}

Move Grid::step_toward(Cell from, Cell to) const {
  if (from == to) return Move::stay;
  const int d = distance(from, to);
  for (Move m : kMoves) {
    if (m == Move::stay) continue;
    if (auto nb = destination(from, m); nb && distance(*nb, to) == d - 1) return m;
  }
  throw ModelError("cell " + std::to_string(to) + " unreachable from " + std::to_string(from));
}

std::vector<Cell> Grid::shortest_path(Cell from, Cell to) const {
  std::vector<Cell> path{from};
  while (path.back() != to) path.push_back(*destination(path.back(), step_toward(path.back(), to)));
  return path;
}

std::uint64_t Grid::count_shortest_paths(Cell from, Cell to) const {
  if (from == to) return 1;
  std::uint64_t total = 0;
  for (Cell nb : neighbors(from))
    if (distance(nb, to) == distance(from, to) - 1) total += count_shortest_paths(nb, to);
  return total;
}

}  // namespace oppmdp::robot
