#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace msmm {

/// Coarse error class used by the CLI to pick an exit status.
enum class ErrorCategory { Config, Data, Numerical };

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}
  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

#define MSMM_DEFINE_ERROR(Name, Category)                       \
  class Name : public Error {                                   \
   public:                                                      \
    explicit Name(const std::string& what)                      \
        : Error(ErrorCategory::Category, what) {}               \
  };

MSMM_DEFINE_ERROR(ConfigError, Config)
MSMM_DEFINE_ERROR(SchemaError, Data)
MSMM_DEFINE_ERROR(DuplicateKeyError, Data)
MSMM_DEFINE_ERROR(DomainError, Data)
MSMM_DEFINE_ERROR(ReferenceError, Data)
MSMM_DEFINE_ERROR(ShapeError, Data)
MSMM_DEFINE_ERROR(InsufficientDataError, Data)
MSMM_DEFINE_ERROR(EmptyInputError, Data)
MSMM_DEFINE_ERROR(EmptyBasisError, Data)
MSMM_DEFINE_ERROR(RankError, Numerical)
MSMM_DEFINE_ERROR(DefinitenessError, Numerical)
MSMM_DEFINE_ERROR(DegenerateChainError, Numerical)
MSMM_DEFINE_ERROR(NumericalError, Numerical)

#undef MSMM_DEFINE_ERROR

/// Raised when a sampler produces a non-finite value.
class DivergenceError : public Error {
 public:
  DivergenceError(std::size_t iteration, const std::string& what)
      : Error(ErrorCategory::Numerical,
              what + " (iteration " + std::to_string(iteration) + ")"),
        iteration_(iteration) {}
  std::size_t iteration() const noexcept { return iteration_; }

 private:
  std::size_t iteration_;
};

}  // namespace msmm
