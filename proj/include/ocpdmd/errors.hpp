#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace ocpdmd {

/// Bad caller input: wrong shapes, counts, or out-of-range parameters.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed snapshot/model/config file. Carries the byte offset (binary)
/// or 1-based line number (text) where parsing failed, when known.
class FormatError : public std::runtime_error {
 public:
  enum class Location { kNone, kByteOffset, kLine };

  explicit FormatError(const std::string& what);
  FormatError(const std::string& what, Location where, std::size_t position);

  Location location() const { return location_; }
  std::size_t position() const { return position_; }

 private:
  Location location_ = Location::kNone;
  std::size_t position_ = 0;
};

/// Data with no retained singular values.
class RankZeroError : public std::runtime_error {
 public:
  RankZeroError() : std::runtime_error("rank zero") {}
  explicit RankZeroError(const std::string& context)
      : std::runtime_error("rank zero: " + context) {}
};

/// Factorization or eigen-solver failure.
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what,
                       std::optional<std::size_t> pivot = std::nullopt);

  std::optional<std::size_t> pivot() const { return pivot_; }

 private:
  std::optional<std::size_t> pivot_;
};

}  // namespace ocpdmd
