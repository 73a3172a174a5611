#pragma once

#include <span>
#include <vector>

namespace igalbm {

/// Values (and optionally first derivatives) of the p+1 B-spline functions
/// that are nonzero on one knot span.
///
/// `first` is the unwrapped index of the first function. For periodic knot
/// vectors it may fall outside [0, n); use KnotVector::global_index() and
/// KnotVector::wrap_count() to map it back.
struct BasisValues {
  int span = 0;
  int first = 0;
  std::vector<double> values;
  std::vector<double> derivs;
};

/// A parameter reduced into the fundamental period of a periodic knot vector.
struct ReducedParameter {
  double value;
  long periods;
};

/// Nondecreasing knot sequence with degree p and n basis functions.
///
/// Clamped vectors store n + p + 1 knots with the end knots repeated p + 1
/// times. Periodic vectors are uniform on a unit period with n basis
/// functions; they store an extended sequence of n + 2p + 1 knots so that the
/// same span arithmetic works for both kinds, and basis indices wrap modulo n.
/// Periodic knots are shifted so that Greville abscissa i sits at i / n.
class KnotVector {
public:
  KnotVector() = default;

  /// Throws SetupError on a malformed sequence.
  static KnotVector clamped(std::vector<double> knots, int degree);
  static KnotVector clamped_uniform(int degree, int n_elements, double begin = 0.0, double end = 1.0);
  static KnotVector periodic_uniform(int degree, int n_basis);

  int degree() const { return degree_; }
  int n_basis() const { return n_basis_; }
  bool periodic() const { return periodic_; }
  std::span<const double> knots() const { return knots_; }

  double domain_begin() const { return knots_[degree_]; }
  double domain_end() const { return knots_[n_basis_ + (periodic_ ? degree_ : 0)]; }
  double period() const { return domain_end() - domain_begin(); }

  /// Identity for clamped vectors. Throws DomainError outside the domain.
  ReducedParameter reduce(double xi) const;

  /// Span index s into knots() with knots[s] <= xi < knots[s+1]; the domain
  /// end maps to the last nonempty span.
  int find_span(double xi) const;

  int global_index(int unwrapped) const;
  int wrap_count(int unwrapped) const;

  BasisValues eval_basis(double xi) const;
  BasisValues eval_basis_derivs(double xi) const;

  std::vector<double> greville_points() const;

  /// Spacing attributed to each Greville point: centered half-difference in
  /// the interior, one-sided gap at clamped ends.
  std::vector<double> local_spacing() const;

  /// Trapezoidal quadrature weights on the Greville points (sum = period).
  std::vector<double> quadrature_weights() const;

private:
  std::vector<double> knots_;
  int degree_ = 0;
  int n_basis_ = 0;
  bool periodic_ = false;

  void eval(double xi, bool with_derivs, BasisValues& out) const;
};

int find_span(const KnotVector& kv, double xi);
BasisValues eval_basis(const KnotVector& kv, double xi);
BasisValues eval_basis_derivs(const KnotVector& kv, double xi);
std::vector<double> greville_points(const KnotVector& kv);

}  // namespace igalbm
