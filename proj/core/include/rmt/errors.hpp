#pragma once

#include <stdexcept>
#include <string>

namespace rmt {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidSpectrum : public Error {
 public:
  using Error::Error;
};

class NonPositiveSupport : public InvalidSpectrum {
 public:
  using InvalidSpectrum::InvalidSpectrum;
};

class MassNotOne : public InvalidSpectrum {
 public:
  using InvalidSpectrum::InvalidSpectrum;
};

/// Raised by the iterative solvers. Carries the last residual and the number
/// of iterations spent so callers can report point diagnostics.
class NoConvergence : public Error {
 public:
  NoConvergence(const std::string& what, double residual, int iterations)
      : Error(what), residual_(residual), iterations_(iterations) {}

  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

/// gamma == 1 is excluded by every boundary-value consumer.
class GammaOne : public DomainError {
 public:
  GammaOne() : DomainError("gamma = 1 is not supported (sample density may be unbounded near zero)") {}
};

class DegenerateDenominator : public Error {
 public:
  using Error::Error;
};

class ZeroBranchUnavailable : public DomainError {
 public:
  ZeroBranchUnavailable()
      : DomainError("the l = 0 branch exists only when gamma < 1") {}
};

class EmptySupport : public Error {
 public:
  using Error::Error;
};

class EmptyBin : public Error {
 public:
  using Error::Error;
};

}  // namespace rmt
