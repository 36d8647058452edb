#include "memetic/tile_slate.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "memetic/error.hpp"

namespace memetic {

Vocabulary::Vocabulary(std::vector<std::string> words, std::string version) : version_(std::move(version)) {
  for (auto& w : words) {
    if (w.empty()) throw Error(ErrorKind::ConfigError, "empty vocabulary word");
    if (std::any_of(w.begin(), w.end(), [](unsigned char c) { return std::isspace(c) || std::isupper(c); }))
      throw Error(ErrorKind::ConfigError, "vocabulary word '" + w + "' must be lowercase without whitespace");
    if (!words_.insert(w).second) throw Error(ErrorKind::ConfigError, "duplicate vocabulary word '" + w + "'");
    ordered_.push_back(std::move(w));
  }
  if (words_.empty()) throw Error(ErrorKind::ConfigError, "vocabulary is empty");
}

Vocabulary Vocabulary::parse(std::string_view text, std::string version) {
  std::vector<std::string> words;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    auto e = line.find_last_not_of(" \t\r");
    words.push_back(line.substr(b, e - b + 1));
  }
  return Vocabulary(std::move(words), std::move(version));
}

bool Vocabulary::contains(std::string_view word) const noexcept { return words_.find(word) != words_.end(); }

// ---------------------------------------------------------------------------

Board::Board(std::shared_ptr<const Vocabulary> vocabulary) : vocabulary_(std::move(vocabulary)) {
  if (!vocabulary_) throw Error(ErrorKind::ConfigError, "board needs a vocabulary");
}

void Board::place(int row, int col, std::string_view word) {
  if (row < 0 || col < 0) throw Error(ErrorKind::OutOfRange, "cell coordinates must be non-negative");
  if (!vocabulary_->contains(word)) throw Error(ErrorKind::UnknownWord, std::string(word));
  auto [it, inserted] = cells_.try_emplace({row, col}, word);
  if (!inserted)
    throw Error(ErrorKind::CellOccupied, "(" + std::to_string(row) + "," + std::to_string(col) + ") holds '" +
                                             it->second + "'");
}

std::string Board::remove(int row, int col) {
  auto it = cells_.find({row, col});
  if (it == cells_.end())
    throw Error(ErrorKind::CellEmpty, "(" + std::to_string(row) + "," + std::to_string(col) + ")");
  std::string word = std::move(it->second);
  cells_.erase(it);
  return word;
}

std::vector<Placement> Board::placements() const {
  std::vector<Placement> out;
  out.reserve(cells_.size());
  for (const auto& [cell, word] : cells_) out.push_back({cell.first, cell.second, word});
  return out;
}

std::string Board::read() const {
  if (cells_.empty()) throw Error(ErrorKind::EmptyBoard, "no tiles on the slate");
  std::string text;
  for (const auto& [cell, word] : cells_) {
    if (!text.empty()) text += ' ';
    text += word;
  }
  return text;
}

}  // namespace memetic
