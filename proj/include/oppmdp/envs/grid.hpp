#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

namespace oppmdp::robot {

/// Cells are numbered 1..20 row-major on a 4 x 5 grid; row 1 holds cells 1..5,
/// so North is -5 and South is +5.
using Cell = int;

inline constexpr int kRows = 4;
inline constexpr int kCols = 5;
inline constexpr int kCells = kRows * kCols;
inline constexpr Cell kHomeCell = 1;

enum class Move : std::uint8_t { stay = 0, north = 1, south = 2, east = 3, west = 4 };
inline constexpr std::array<Move, 5> kMoves{Move::stay, Move::north, Move::south, Move::east,
                                            Move::west};

std::string_view move_name(Move m) noexcept;

/// A blocked pair of adjacent cells.
struct Wall {
  Cell a;
  Cell b;
};

/// The walled grid with all-pairs BFS distances.
class Grid {
 public:
  /// Throws ConfigError if a wall joins non-adjacent or out-of-range cells.
  explicit Grid(std::vector<Wall> walls);

  /// {12-13, 3-8, 7-8, 4-9, 9-10, 9-14, 13-18}
  static std::vector<Wall> default_walls();

  const std::vector<Wall>& walls() const noexcept { return walls_; }

  /// Destination of `m` from `c`, or nullopt when it leaves the grid or
  /// crosses a wall. Stay always succeeds.
  std::optional<Cell> destination(Cell c, Move m) const;

  /// Cells reachable in one move (Stay excluded), ascending.
  std::vector<Cell> neighbors(Cell c) const;

  /// BFS hop count; -1 when unreachable.
  int distance(Cell from, Cell to) const { return dist_[from - 1][to - 1]; }
  bool connected() const;

  /// First move of a shortest path (ties broken in N, S, E, W order); Stay
  /// when from == to.
  Move step_toward(Cell from, Cell to) const;
  std::vector<Cell> shortest_path(Cell from, Cell to) const;

  /// Number of distinct shortest paths between two cells.
  std::uint64_t count_shortest_paths(Cell from, Cell to) const;

 private:
  bool blocked(Cell a, Cell b) const;

  std::vector<Wall> walls_;
  std::array<std::array<int, kCells>, kCells> dist_{};
};

}  // namespace oppmdp::robot
