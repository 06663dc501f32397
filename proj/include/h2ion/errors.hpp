#pragma once

#include <stdexcept>
#include <string>

namespace h2ion {

/// Base class of every solver error. The kind() string is stable and is
/// what the CLI reports in machine-readable output.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define H2ION_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                      \
   public:                                                         \
    explicit Name(const std::string& what) : Error(#Name, what) {} \
  };

H2ION_DEFINE_ERROR(InvalidConfig)
H2ION_DEFINE_ERROR(NucleusCoincidence)
H2ION_DEFINE_ERROR(NonFiniteInput)
H2ION_DEFINE_ERROR(TruncationNotConverged)
H2ION_DEFINE_ERROR(ImaginaryRoot)
H2ION_DEFINE_ERROR(NonBoundEnergy)
H2ION_DEFINE_ERROR(ConvergenceFailed)
H2ION_DEFINE_ERROR(MatchFailed)
H2ION_DEFINE_ERROR(TooFewSamples)
H2ION_DEFINE_ERROR(QuadratureNotConverged)
H2ION_DEFINE_ERROR(RadiiOutOfRange)

#undef H2ION_DEFINE_ERROR

}  // namespace h2ion
