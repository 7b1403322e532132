#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace sparseshare {

// Requested operating point lies outside what the scheme can realize
// (s_d outside the feasible range, empty parameter interval, ...).
class InfeasibleError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// The optimality polynomial had more than one admissible root. Convexity says
// this cannot happen, so it is surfaced instead of picking one.
class MultipleRootsError : public InfeasibleError {
 public:
  MultipleRootsError(const std::string& what, std::vector<double> roots)
      : InfeasibleError(what), roots_(std::move(roots)) {}
  const std::vector<double>& roots() const noexcept { return roots_; }

 private:
  std::vector<double> roots_;
};

// Malformed SPFQ file or share manifest.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Worker results that do not lie on a single degree-2 polynomial.
class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sparseshare
