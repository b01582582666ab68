#pragma once

#include <stdexcept>
#include <string>

namespace relayfb {

/// Raised when an iterative solver exhausts its iteration budget without
/// meeting its tolerance. Carries the last iterate for diagnostics.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double last_iterate, int iterations)
      : std::runtime_error(what),
        last_iterate_(last_iterate),
        iterations_(iterations) {}

  double last_iterate() const { return last_iterate_; }
  int iterations() const { return iterations_; }

 private:
  double last_iterate_;
  int iterations_;
};

/// Raised when a data structure fails one of its own consistency checks
/// (e.g. tree leaf probabilities that do not sum to one).
class InternalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace relayfb
