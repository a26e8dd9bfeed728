#pragma once

#include <stdexcept>
#include <string>

namespace imls {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The 6x6 point-to-plane normal matrix is too ill-conditioned to solve.
class DegenerateSystem : public Error {
 public:
  using Error::Error;
};

class MalformedFile : public Error {
 public:
  using Error::Error;
};

class EmptySweep : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// No voxel qualified as a ground seed.
class NoGroundFound : public Error {
 public:
  using Error::Error;
};

class TooFewPoints : public Error {
 public:
  using Error::Error;
};

/// Fewer samples than the configured minimum survived the outlier gate.
class InsufficientSamples : public Error {
 public:
  using Error::Error;
};

class LengthMismatch : public Error {
 public:
  using Error::Error;
};

/// The trajectory has no segment of the shortest evaluation length.
class TooShort : public Error {
 public:
  using Error::Error;
};

}  // namespace imls
