#pragma once

#include <stdexcept>
#include <string>

namespace glyph {

// Base class for every error thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed or unusable input data (images, matrices, streams).
struct InvalidInputError : Error {
  using Error::Error;
};

// A parameter outside its documented range.
struct InvalidArgumentError : Error {
  using Error::Error;
};

// Dataset-level problems: empty roots, unknown labels, classes without samples.
struct DatasetError : Error {
  using Error::Error;
};

// Split manifest problems: parse failures, overlapping selectors.
struct ManifestError : Error {
  using Error::Error;
};

// Model file problems, split by cause so callers can react to each.
struct ModelIoError : Error {
  enum class Kind { io, corrupt, version_mismatch, dimension_mismatch };
  Kind kind;
  ModelIoError(Kind k, const std::string& msg) : Error(msg), kind(k) {}
};

}  // namespace glyph
