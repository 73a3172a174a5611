#include "igalbm/knot_vector.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "igalbm/errors.hpp"

namespace igalbm {

KnotVector KnotVector::clamped(std::vector<double> knots, int degree) {
  if (degree < 0) throw SetupError("knot vector: negative degree");
  const int len = static_cast<int>(knots.size());
  const int n = len - degree - 1;
  if (n < degree + 1) {
    std::ostringstream msg;
    msg << "knot vector: " << len << " knots cannot carry degree " << degree;
    throw SetupError(msg.str());
  }
  if (!std::is_sorted(knots.begin(), knots.end())) throw SetupError("knot vector: knots must be nondecreasing");
  for (int k = 1; k <= degree; ++k) {
    if (knots[k] != knots[0] || knots[len - 1 - k] != knots[len - 1])
      throw SetupError("knot vector: end knots must be repeated degree+1 times");
  }
  if (!(knots[degree] < knots[n])) throw SetupError("knot vector: degenerate (empty) parameter domain");
  if (knots[degree + 1] == knots[degree] || knots[n - 1] == knots[n])
    throw SetupError("knot vector: end knot multiplicity exceeds degree+1");

  int mult = 1;
  for (int k = degree + 2; k <= n; ++k) {
    mult = (knots[k] == knots[k - 1]) ? mult + 1 : 1;
    if (k < n && mult > degree) throw SetupError("knot vector: interior knot multiplicity exceeds degree");
  }

  KnotVector kv;
  kv.knots_ = std::move(knots);
  kv.degree_ = degree;
  kv.n_basis_ = n;
  kv.periodic_ = false;
  return kv;
}

KnotVector KnotVector::clamped_uniform(int degree, int n_elements, double begin, double end) {
  if (n_elements < 1) throw SetupError("knot vector: need at least one element");
  if (!(begin < end)) throw SetupError("knot vector: empty parameter interval");
  std::vector<double> knots;
  knots.reserve(n_elements + 2 * degree + 1);
  for (int k = 0; k < degree; ++k) knots.push_back(begin);
  for (int e = 0; e <= n_elements; ++e) {
    knots.push_back(e == n_elements ? end : begin + (end - begin) * e / n_elements);
  }
  for (int k = 0; k < degree; ++k) knots.push_back(end);
  return clamped(std::move(knots), degree);
}

KnotVector KnotVector::periodic_uniform(int degree, int n_basis) {
  if (degree < 0) throw SetupError("knot vector: negative degree");
  if (n_basis < degree + 1) throw SetupError("periodic knot vector: need at least degree+1 basis functions");
  KnotVector kv;
  kv.degree_ = degree;
  kv.n_basis_ = n_basis;
  kv.periodic_ = true;
  const double h = 1.0 / n_basis;
  const double offset = degree + 0.5 * (degree + 1);
  kv.knots_.resize(n_basis + 2 * degree + 1);
  for (int k = 0; k < static_cast<int>(kv.knots_.size()); ++k) kv.knots_[k] = (k - offset) * h;
  return kv;
}

ReducedParameter KnotVector::reduce(double xi) const {
  const double a = domain_begin();
  const double b = domain_end();
  if (!std::isfinite(xi)) throw DomainError("knot vector: non-finite parameter");
  if (!periodic_) {
    if (xi < a || xi > b) {
      std::ostringstream msg;
      msg << "parameter " << xi << " outside knot domain [" << a << ", " << b << "]";
      throw DomainError(msg.str());
    }
    return {xi, 0};
  }
  const double T = b - a;
  const double k = std::floor((xi - a) / T);
  double r = xi - k * T;
  long periods = static_cast<long>(k);
  if (r >= b) {
    r -= T;
    ++periods;
  }
  if (r < a) {
    r += T;
    --periods;
  }
  return {r, periods};
}

int KnotVector::find_span(double xi) const {
  const double x = reduce(xi).value;
  const int lo_span = degree_;
  const int hi_span = n_basis_ + (periodic_ ? degree_ : 0) - 1;
  if (x >= knots_[hi_span + 1]) {
    // Domain end (clamped): last nonempty span.
    int s = hi_span;
    while (s > lo_span && knots_[s] == knots_[s + 1]) --s;
    return s;
  }
  // Last index s in [lo, hi] with knots[s] <= x.
  auto first = knots_.begin() + lo_span;
  auto last = knots_.begin() + hi_span + 1;
  auto it = std::upper_bound(first, last, x);
  return static_cast<int>(it - knots_.begin()) - 1;
}

int KnotVector::global_index(int unwrapped) const {
  if (!periodic_) return unwrapped;
  const int m = unwrapped % n_basis_;
  return m < 0 ? m + n_basis_ : m;
}

int KnotVector::wrap_count(int unwrapped) const {
  if (!periodic_) return 0;
  return unwrapped >= 0 ? unwrapped / n_basis_ : -((-unwrapped + n_basis_ - 1) / n_basis_);
}

void KnotVector::eval(double xi, bool with_derivs, BasisValues& out) const {
  const int p = degree_;
  const double x = reduce(xi).value;
  const int s = find_span(x);
  const auto& U = knots_;

  // ndu[j][r]: upper triangle holds basis values, lower triangle knot differences.
  std::vector<double> ndu((p + 1) * (p + 1), 0.0);
  auto at = [&](int j, int r) -> double& { return ndu[j * (p + 1) + r]; };
  std::vector<double> left(p + 1), right(p + 1);
  at(0, 0) = 1.0;
  for (int j = 1; j <= p; ++j) {
    left[j] = x - U[s + 1 - j];
    right[j] = U[s + j] - x;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      at(j, r) = right[r + 1] + left[j - r];
      const double temp = at(j, r) != 0.0 ? at(r, j - 1) / at(j, r) : 0.0;
      at(r, j) = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    at(j, j) = saved;
  }

  out.span = s;
  out.first = s - p - (periodic_ ? p : 0);
  out.values.resize(p + 1);
  for (int r = 0; r <= p; ++r) out.values[r] = at(r, p);

  out.derivs.clear();
  if (!with_derivs) return;
  out.derivs.assign(p + 1, 0.0);
  if (p == 0) return;
  for (int r = 0; r <= p; ++r) {
    double d = 0.0;
    if (r >= 1 && at(p, r - 1) != 0.0) d += at(r - 1, p - 1) / at(p, r - 1);
    if (r <= p - 1 && at(p, r) != 0.0) d -= at(r, p - 1) / at(p, r);
    out.derivs[r] = p * d;
  }
}

BasisValues KnotVector::eval_basis(double xi) const {
  BasisValues out;
  eval(xi, false, out);
  return out;
}

BasisValues KnotVector::eval_basis_derivs(double xi) const {
  BasisValues out;
  eval(xi, true, out);
  return out;
}

std::vector<double> KnotVector::greville_points() const {
  std::vector<double> g(n_basis_);
  const int p = degree_;
  const int shift = periodic_ ? p : 0;
  for (int i = 0; i < n_basis_; ++i) {
    if (p == 0) {
      g[i] = 0.5 * (knots_[i + shift] + knots_[i + shift + 1]);
      continue;
    }
    double sum = 0.0;
    for (int k = 1; k <= p; ++k) sum += knots_[i + shift + k];
    g[i] = sum / p;
  }
  if (periodic_) {
    // Exact i/n instead of the rounded knot average.
    for (int i = 0; i < n_basis_; ++i) g[i] = static_cast<double>(i) / n_basis_;
  }
  return g;
}

std::vector<double> KnotVector::local_spacing() const {
  const auto g = greville_points();
  const int n = n_basis_;
  std::vector<double> h(n);
  if (periodic_) {
    std::fill(h.begin(), h.end(), period() / n);
    return h;
  }
  for (int i = 0; i < n; ++i) {
    if (i == 0) h[i] = g[1] - g[0];
    else if (i == n - 1) h[i] = g[n - 1] - g[n - 2];
    else h[i] = 0.5 * (g[i + 1] - g[i - 1]);
  }
  return h;
}

std::vector<double> KnotVector::quadrature_weights() const {
  const auto g = greville_points();
  const int n = n_basis_;
  std::vector<double> w(n);
  if (periodic_) {
    std::fill(w.begin(), w.end(), period() / n);
    return w;
  }
  for (int i = 0; i < n; ++i) {
    const double lo = i > 0 ? g[i - 1] : g[i];
    const double hi = i < n - 1 ? g[i + 1] : g[i];
    w[i] = 0.5 * (hi - lo);
  }
  return w;
}

int find_span(const KnotVector& kv, double xi) { return kv.find_span(xi); }
BasisValues eval_basis(const KnotVector& kv, double xi) { return kv.eval_basis(xi); }
BasisValues eval_basis_derivs(const KnotVector& kv, double xi) { return kv.eval_basis_derivs(xi); }
std::vector<double> greville_points(const KnotVector& kv) { return kv.greville_points(); }

}  // namespace igalbm
