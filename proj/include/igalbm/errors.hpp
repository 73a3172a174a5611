#pragma once

#include <stdexcept>
#include <string>

namespace igalbm {

/// Parameter outside the valid domain of a knot vector or patch.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Geometry map with a vanishing or negative Jacobian determinant.
class SingularMapError : public std::runtime_error {
public:
  SingularMapError(const std::string& what, double xi, double eta)
      : std::runtime_error(what), xi_(xi), eta_(eta) {}

  double xi() const { return xi_; }
  double eta() const { return eta_; }

private:
  double xi_;
  double eta_;
};

/// Invalid construction input or a failed precomputation step.
class SetupError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// The time integration produced a non-finite value or a nonpositive density.
class DivergenceError : public std::runtime_error {
public:
  DivergenceError(const std::string& what, long step)
      : std::runtime_error(what), step_(step) {}

  long step() const { return step_; }

private:
  long step_;
};

/// Bad user configuration (file, key, or value).
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace igalbm
