#pragma once

#include <stdexcept>
#include <string>

namespace subwave {

// Base class for all library failures. CLI maps these to exit code 3,
// config validation failures (ValidationError) to exit code 2.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class ValidationError : public Error {
public:
  explicit ValidationError(const std::string& what) : Error(what) {}
};

class OverlapError : public Error {
public:
  explicit OverlapError(const std::string& what) : Error(what) {}
};

// Lattice sum requested too close to a Rayleigh anomaly (alpha*L +- k*L near 2*pi*Z).
class AnomalyError : public Error {
public:
  explicit AnomalyError(const std::string& what) : Error(what) {}
};

// Lattice sum tail bound cannot meet the configured tolerance at the configured M.
class TailError : public Error {
public:
  explicit TailError(const std::string& what) : Error(what) {}
};

// A band-structure point has C_12 = 0, so theta_alpha is undefined there.
class DegenerateError : public Error {
public:
  explicit DegenerateError(const std::string& what) : Error(what) {}
};

// Phase unwrapping found a step too large for the grid resolution.
class UnderResolvedError : public Error {
public:
  explicit UnderResolvedError(const std::string& what) : Error(what) {}
};

// Characteristic-value search found fewer minima than expected.
class ShortfallError : public Error {
public:
  ShortfallError(const std::string& what, std::vector<double> found_)
      : Error(what), found(std::move(found_)) {}
  std::vector<double> found;
};

} // namespace subwave
