#pragma once

#include <stdexcept>

namespace phs {

// Parameter point collapses the model family itself (e.g. the asymmetry
// parameter vanishes and the non-Hermitian generator has no finite matrix).
class SingularParameterError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Metric denominator vanishes: the diagonal similarity transform between the
// postselected branch and the two-level flow does not exist at this point.
class SingularMetricError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Metric exists but is not positive definite; the postselected dynamics no
// longer represents a valid quasi-Hermitian evolution there.
class MetricPositivityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Requested dip analytics where the signal is identically flat.
class NoDipError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Signal sits at 0 or 1 where a formula (Fisher information, postselected
// ratio) becomes singular.
class DegenerateSignalError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Root/extremum search could not bracket its target.
class BracketingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Iterative numerical scheme exhausted its iteration budget.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A Monte Carlo repetition retained no usable runs.
class InsufficientStatisticsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace phs
