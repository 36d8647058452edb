#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace memetic {

/// Fixed set of word tiles shipped with the slate.
class Vocabulary {
 public:
  Vocabulary(std::vector<std::string> words, std::string version);

  /// One word per line; blank lines and lines starting with '#' are skipped.
  static Vocabulary parse(std::string_view text, std::string version);

  bool contains(std::string_view word) const noexcept;
  std::size_t size() const noexcept { return words_.size(); }
  const std::vector<std::string>& words() const noexcept { return ordered_; }
  const std::string& version() const noexcept { return version_; }

 private:
  std::set<std::string, std::less<>> words_;
  std::vector<std::string> ordered_;
  std::string version_;
};

struct Placement {
  int row;
  int col;
  std::string word;
  friend bool operator==(const Placement&, const Placement&) = default;
};

/// Grid of placed tiles. Reading order is row-major.
class Board {
 public:
  explicit Board(std::shared_ptr<const Vocabulary> vocabulary);

  void place(int row, int col, std::string_view word);
  /// Removes and returns the tile at (row, col); CellEmpty if there is none.
  std::string remove(int row, int col);
  void clear() noexcept { cells_.clear(); }

  bool empty() const noexcept { return cells_.empty(); }
  std::size_t size() const noexcept { return cells_.size(); }
  std::vector<Placement> placements() const;
  const Vocabulary& vocabulary() const noexcept { return *vocabulary_; }

  /// Placed words joined by single spaces, row-major. EmptyBoard if empty.
  std::string read() const;

  friend bool operator==(const Board& a, const Board& b) { return a.cells_ == b.cells_; }

 private:
  std::shared_ptr<const Vocabulary> vocabulary_;
  std::map<std::pair<int, int>, std::string> cells_;
};

inline std::string read_board(const Board& board) { return board.read(); }

}  // namespace memetic
