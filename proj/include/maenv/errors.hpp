#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "maenv/grid.hpp"
#include "maenv/report.hpp"

namespace maenv {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Iterative solver hit its iteration cap. Carries the report and, when the
/// solver has one, the best iterate.
class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, SolverReport report, std::optional<GridField> best = {})
      : Error(what), report_(std::move(report)), best_(std::move(best)) {}
  const SolverReport& report() const noexcept { return report_; }
  const std::optional<GridField>& best() const noexcept { return best_; }

 private:
  SolverReport report_;
  std::optional<GridField> best_;
};

/// Damped Newton could not find an acceptable step.
class NewtonStall : public Error {
 public:
  NewtonStall(const std::string& what, SolverReport report)
      : Error(what), report_(std::move(report)) {}
  const SolverReport& report() const noexcept { return report_; }

 private:
  SolverReport report_;
};

#define MAENV_DECLARE_ERROR(Name)    \
  class Name : public Error {        \
   public:                           \
    using Error::Error;              \
  };

MAENV_DECLARE_ERROR(EmptySupport)
MAENV_DECLARE_ERROR(DegenerateData)
MAENV_DECLARE_ERROR(NoSubsolution)
MAENV_DECLARE_ERROR(FamilyExhausted)
MAENV_DECLARE_ERROR(BoundaryTraceViolation)
MAENV_DECLARE_ERROR(InputNotSupersolution)
MAENV_DECLARE_ERROR(InfeasibleMask)
MAENV_DECLARE_ERROR(OrderViolation)
MAENV_DECLARE_ERROR(ConfigError)
MAENV_DECLARE_ERROR(ScenarioFailure)

#undef MAENV_DECLARE_ERROR

}  // namespace maenv
