#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace memetic {

/// Every failure the library reports is one of these. The names returned by
/// to_string() are part of the wire protocol (error events, CLI output).
enum class ErrorKind {
  UnknownControl,
  WrongKind,
  OutOfRange,
  UnknownPreset,
  UnknownMode,
  EmptyInput,
  UnknownWord,
  CellOccupied,
  CellEmpty,
  EmptyBoard,
  Timeout,
  RateLimited,
  AuthFailed,
  BackendError,
  Busy,
  CorruptLog,
  InvalidCommand,
  ConfigError,
};

std::string_view to_string(ErrorKind kind) noexcept;
std::optional<ErrorKind> parse_error_kind(std::string_view name) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail);

  ErrorKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept { return to_string(kind_); }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

/// BackendError carries the HTTP status (0 for transport failures).
class BackendFailure : public Error {
 public:
  BackendFailure(int status, const std::string& detail)
      : Error(ErrorKind::BackendError, detail), status_(status) {}
  int status() const noexcept { return status_; }

 private:
  int status_;
};

/// CorruptLog carries the sequence number of the offending record.
class CorruptLogError : public Error {
 public:
  CorruptLogError(std::uint64_t seq, const std::string& detail)
      : Error(ErrorKind::CorruptLog, detail), seq_(seq) {}
  std::uint64_t seq() const noexcept { return seq_; }

 private:
  std::uint64_t seq_;
};

}  // namespace memetic
