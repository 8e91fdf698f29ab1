#ifndef HRLAB_CORE_ERROR_HPP
#define HRLAB_CORE_ERROR_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hrlab {

/// Coarse failure class. The CLI maps each category onto an exit code.
enum class ErrorCategory {
  validation,  // bad input or configuration
  numeric,     // blow-up, unavailable fit, degenerate estimate
  domain,      // argument outside the mathematical domain of an operation
  io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

struct ValidationError : Error {
  explicit ValidationError(const std::string& what) : Error(ErrorCategory::validation, what) {}
};

struct IoError : Error {
  explicit IoError(const std::string& what) : Error(ErrorCategory::io, what) {}
};

struct NumericError : Error {
  explicit NumericError(const std::string& what) : Error(ErrorCategory::numeric, what) {}
};

struct DomainError : Error {
  explicit DomainError(const std::string& what) : Error(ErrorCategory::domain, what) {}
};

// geometry

struct EvaluationError : NumericError {
  EvaluationError(const std::string& what, std::size_t sample)
      : NumericError(what + " (sample " + std::to_string(sample) + ")"), sample_index(sample) {}
  std::size_t sample_index;
};

struct ConeViolation : DomainError {
  using DomainError::DomainError;
};

struct StencilError : DomainError {
  using DomainError::DomainError;
};

// dynamics

struct ScheduleError : DomainError {
  using DomainError::DomainError;
};

struct SingularReparameterization : DomainError {
  using DomainError::DomainError;
};

struct BlowUpError : NumericError {
  BlowUpError(const std::string& what, std::uint64_t step)
      : NumericError(what + " at step " + std::to_string(step)), step_index(step) {}
  std::uint64_t step_index;
};

// lipschitz / concentration

struct EstimationError : NumericError {
  using NumericError::NumericError;
};

struct ProfileError : DomainError {
  using DomainError::DomainError;
};

struct FitError : NumericError {
  using NumericError::NumericError;
};

struct DimensionError : DomainError {
  using DomainError::DomainError;
};

// observables / gravity

struct SubsetError : DomainError {
  using DomainError::DomainError;
};

struct ExperimentAborted : NumericError {
  using NumericError::NumericError;
};

struct SingularCaseError : DomainError {
  using DomainError::DomainError;
};

}  // namespace hrlab

#endif  // HRLAB_CORE_ERROR_HPP
