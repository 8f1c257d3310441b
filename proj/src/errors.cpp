#include "ocpdmd/errors.hpp"

namespace ocpdmd {
namespace {

std::string WithLocation(const std::string& what, FormatError::Location where,
                         std::size_t position) {
  switch (where) {
    case FormatError::Location::kByteOffset:
      return what + " (at byte offset " + std::to_string(position) + ")";
    case FormatError::Location::kLine:
      return what + " (at line " + std::to_string(position) + ")";
    case FormatError::Location::kNone:
      break;
  }
  return what;
}

std::string WithPivot(const std::string& what, std::optional<std::size_t> pivot) {
  if (!pivot) return what;
  return what + " (pivot " + std::to_string(*pivot) + ")";
}

}  // namespace

FormatError::FormatError(const std::string& what) : std::runtime_error(what) {}

FormatError::FormatError(const std::string& what, Location where, std::size_t position)
    : std::runtime_error(WithLocation(what, where, position)),
      location_(where),
      position_(position) {}

SolverError::SolverError(const std::string& what, std::optional<std::size_t> pivot)
    : std::runtime_error(WithPivot(what, pivot)), pivot_(pivot) {}

}  // namespace ocpdmd
