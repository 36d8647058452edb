#include "memetic/error.hpp"

namespace memetic {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::UnknownControl: return "UnknownControl";
    case ErrorKind::WrongKind: return "WrongKind";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::UnknownPreset: return "UnknownPreset";
    case ErrorKind::UnknownMode: return "UnknownMode";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::UnknownWord: return "UnknownWord";
    case ErrorKind::CellOccupied: return "CellOccupied";
    case ErrorKind::CellEmpty: return "CellEmpty";
    case ErrorKind::EmptyBoard: return "EmptyBoard";
    case ErrorKind::Timeout: return "Timeout";
    case ErrorKind::RateLimited: return "RateLimited";
    case ErrorKind::AuthFailed: return "AuthFailed";
    case ErrorKind::BackendError: return "BackendError";
    case ErrorKind::Busy: return "Busy";
    case ErrorKind::CorruptLog: return "CorruptLog";
    case ErrorKind::InvalidCommand: return "InvalidCommand";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

std::optional<ErrorKind> parse_error_kind(std::string_view name) noexcept {
  for (int i = 0; i <= static_cast<int>(ErrorKind::ConfigError); ++i) {
    auto k = static_cast<ErrorKind>(i);
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

Error::Error(ErrorKind kind, const std::string& detail)
    : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind), detail_(detail) {}

}  // namespace memetic
