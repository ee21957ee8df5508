#pragma once

#include <stdexcept>
#include <string>

namespace lte {

/// Raised when an invariant that the mathematics guarantees is observed to
/// fail (a state leaving the invariant domain, a rejection bound exceeded).
/// Seeing one of these means a bug, not bad input.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// The rejection loop of the exact sampler gave up after the retry cap.
class RetryCapExceeded : public InternalError {
 public:
  using InternalError::InternalError;
};

/// A numerical scheme produced NaN/inf.
class NonFiniteState : public std::runtime_error {
 public:
  NonFiniteState(const std::string& what, long step, long index)
      : std::runtime_error(what), step_(step), index_(index) {}
  long step() const noexcept { return step_; }
  long index() const noexcept { return index_; }

 private:
  long step_;
  long index_;
};

/// A Monte Carlo sample failed; wraps the message of the original error.
class SampleFailure : public std::runtime_error {
 public:
  SampleFailure(const std::string& what, unsigned long long sample)
      : std::runtime_error("sample " + std::to_string(sample) + ": " + what), sample_(sample) {}
  unsigned long long sample() const noexcept { return sample_; }

 private:
  unsigned long long sample_;
};

}  // namespace lte
