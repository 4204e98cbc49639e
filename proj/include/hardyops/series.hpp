#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hardyops {

using cd = std::complex<double>;

struct NoCircleAnnulus : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotFiniteBlaschke : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct AtomSingularity : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct PoleOnCircle : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct WindowTooSmall : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

/// A finite window of Laurent coefficients together with a bound on the
/// l1 mass of the omitted coefficients.  Every boundary function in the
/// library (symbols, basis vectors, operator images) is carried in this
/// form; the tail bound is what certifies downstream residuals.
///
/// Canonical form: no zero coefficients at either end of the window, and
/// the identically-zero series stores an empty coefficient vector.
class CoeffSeries {
 public:
  CoeffSeries() = default;
  CoeffSeries(int lo, std::vector<cd> coeffs, double tail_bound = 0.0,
              bool sampled = false)
      : lo_(lo), coeffs_(std::move(coeffs)), tail_(tail_bound),
        sampled_(sampled) {
    if (!(tail_ >= 0.0))
      throw std::invalid_argument("CoeffSeries: tail_bound must be >= 0");
    canonicalize();
  }

  static CoeffSeries zero() { return {}; }
  static CoeffSeries constant(cd c) { return monomial(0, c); }
  static CoeffSeries monomial(int n, cd c = cd(1.0)) {
    return CoeffSeries(n, {c});
  }

  bool is_zero() const { return coeffs_.empty(); }
  /// Lowest stored index.  Only meaningful when !is_zero().
  int lo() const { return lo_; }
  /// Highest stored index.  Only meaningful when !is_zero().
  int hi() const { return lo_ + static_cast<int>(coeffs_.size()) - 1; }
  int stored_count() const { return static_cast<int>(coeffs_.size()); }
  const std::vector<cd>& coeffs() const { return coeffs_; }
  double tail_bound() const { return tail_; }
  bool sampled() const { return sampled_; }

  cd at(int n) const {
    long k = static_cast<long>(n) - lo_;
    if (k < 0 || k >= static_cast<long>(coeffs_.size())) return cd(0.0);
    return coeffs_[static_cast<size_t>(k)];
  }

  double abs_sum() const {
    double s = 0.0;
    for (const cd& c : coeffs_) s += std::abs(c);
    return s;
  }

  double l2_norm() const {
    double s = 0.0;
    for (const cd& c : coeffs_) s += std::norm(c);
    return std::sqrt(s);
  }

  /// Multiplication by z^k: shifts every index, exact.
  CoeffSeries shifted(int k) const {
    if (is_zero()) return with_flags(*this, tail_, sampled_);
    return CoeffSeries(lo_ + k, coeffs_, tail_, sampled_);
  }

  CoeffSeries scaled(cd a) const {
    std::vector<cd> c(coeffs_);
    for (cd& x : c) x *= a;
    return CoeffSeries(lo_, std::move(c), tail_ * std::abs(a), sampled_);
  }

  /// Restricts storage to [wlo, whi]; the l1 mass of dropped coefficients
  /// moves into the tail bound so the result still certifies the same
  /// function.
  CoeffSeries windowed(int wlo, int whi) const {
    if (is_zero() || wlo > whi) {
      double dropped = abs_sum();
      return CoeffSeries(0, {}, tail_ + dropped, sampled_);
    }
    int a = std::max(lo(), wlo), b = std::min(hi(), whi);
    double dropped = 0.0;
    std::vector<cd> kept;
    for (int n = lo(); n <= hi(); ++n) {
      double m = std::abs(at(n));
      if (n < a || n > b)
        dropped += m;
    }
    if (a <= b)
      kept.assign(coeffs_.begin() + (a - lo()), coeffs_.begin() + (b - lo() + 1));
    return CoeffSeries(a <= b ? a : 0, std::move(kept), tail_ + dropped,
                       sampled_);
  }

  friend bool operator==(const CoeffSeries& x, const CoeffSeries& y) {
    return x.lo_ == y.lo_ && x.coeffs_ == y.coeffs_ && x.tail_ == y.tail_;
  }

  /// Text record: header line `tail_bound <real>`, then one line
  /// `index value_re value_im` per stored coefficient in increasing index
  /// order.
  std::string to_text() const {
    std::ostringstream os;
    os << "tail_bound " << format_double(tail_) << "\n";
    for (int n = 0; n < stored_count(); ++n)
      os << (lo_ + n) << " " << format_double(coeffs_[n].real()) << " "
         << format_double(coeffs_[n].imag()) << "\n";
    return os.str();
  }

  static CoeffSeries from_text(std::istream& in) {
    std::string key;
    double tail = 0.0;
    if (!(in >> key) || key != "tail_bound" || !(in >> tail))
      throw std::runtime_error("CoeffSeries::from_text: bad header");
    std::vector<std::pair<int, cd>> entries;
    int n;
    double re, im;
    while (in >> n >> re >> im) entries.emplace_back(n, cd(re, im));
    if (entries.empty()) return CoeffSeries(0, {}, tail);
    for (size_t i = 1; i < entries.size(); ++i)
      if (entries[i].first <= entries[i - 1].first)
        throw std::runtime_error("CoeffSeries::from_text: indices not increasing");
    int lo = entries.front().first, hi = entries.back().first;
    std::vector<cd> c(static_cast<size_t>(hi - lo + 1), cd(0.0));
    for (auto& [idx, v] : entries) c[static_cast<size_t>(idx - lo)] = v;
    return CoeffSeries(lo, std::move(c), tail);
  }

  static CoeffSeries from_text(const std::string& s) {
    std::istringstream in(s);
    return from_text(in);
  }

  /// Copies the tail/sampled flags of an existing series onto another value.
  static CoeffSeries with_flags(CoeffSeries s, double tail, bool sampled) {
    s.tail_ = tail;
    s.sampled_ = sampled;
    return s;
  }

 private:
  void canonicalize() {
    size_t b = 0, e = coeffs_.size();
    while (b < e && coeffs_[b] == cd(0.0)) ++b;
    while (e > b && coeffs_[e - 1] == cd(0.0)) --e;
    if (b == e) {
      coeffs_.clear();
      lo_ = 0;
      return;
    }
    lo_ += static_cast<int>(b);
    if (b > 0 || e < coeffs_.size())
      coeffs_ = std::vector<cd>(coeffs_.begin() + b, coeffs_.begin() + e);
  }

  int lo_ = 0;
  std::vector<cd> coeffs_;
  double tail_ = 0.0;
  bool sampled_ = false;
};

inline CoeffSeries add(const CoeffSeries& a, const CoeffSeries& b) {
  if (a.is_zero())
    return CoeffSeries::with_flags(b, a.tail_bound() + b.tail_bound(),
                                   a.sampled() || b.sampled());
  if (b.is_zero())
    return CoeffSeries::with_flags(a, a.tail_bound() + b.tail_bound(),
                                   a.sampled() || b.sampled());
  int lo = std::min(a.lo(), b.lo()), hi = std::max(a.hi(), b.hi());
  std::vector<cd> c(static_cast<size_t>(hi - lo + 1), cd(0.0));
  for (int n = a.lo(); n <= a.hi(); ++n) c[static_cast<size_t>(n - lo)] += a.at(n);
  for (int n = b.lo(); n <= b.hi(); ++n) c[static_cast<size_t>(n - lo)] += b.at(n);
  return CoeffSeries(lo, std::move(c), a.tail_bound() + b.tail_bound(),
                     a.sampled() || b.sampled());
}

inline CoeffSeries subtract(const CoeffSeries& a, const CoeffSeries& b) {
  return add(a, b.scaled(cd(-1.0)));
}

namespace detail {
// Total order on stored data; multiply() sorts its operands with it so the
// convolution is evaluated in an operand-order-independent way and the
// product is exactly commutative in floating point.
inline bool series_before(const CoeffSeries& a, const CoeffSeries& b) {
  if (a.lo() != b.lo()) return a.lo() < b.lo();
  if (a.stored_count() != b.stored_count())
    return a.stored_count() < b.stored_count();
  for (int i = 0; i < a.stored_count(); ++i) {
    const cd &x = a.coeffs()[static_cast<size_t>(i)],
             &y = b.coeffs()[static_cast<size_t>(i)];
    if (x.real() != y.real()) return x.real() < y.real();
    if (x.imag() != y.imag()) return x.imag() < y.imag();
  }
  return false;
}
}  // namespace detail

/// Cauchy product.  Tail bound: ||a||_1 tb + ||b||_1 ta + ta tb, which
/// dominates the l1 mass of every cross term involving an omitted
/// coefficient.
inline CoeffSeries multiply(const CoeffSeries& a, const CoeffSeries& b) {
  double tail = a.abs_sum() * b.tail_bound() + b.abs_sum() * a.tail_bound() +
                a.tail_bound() * b.tail_bound();
  bool sampled = a.sampled() || b.sampled();
  if (a.is_zero() || b.is_zero()) return CoeffSeries(0, {}, tail, sampled);
  const CoeffSeries& p = detail::series_before(b, a) ? b : a;
  const CoeffSeries& q = detail::series_before(b, a) ? a : b;
  int lo = p.lo() + q.lo();
  std::vector<cd> c(static_cast<size_t>(p.stored_count() + q.stored_count() - 1),
                    cd(0.0));
  for (int i = 0; i < p.stored_count(); ++i) {
    const cd pi = p.coeffs()[static_cast<size_t>(i)];
    if (pi == cd(0.0)) continue;
    for (int j = 0; j < q.stored_count(); ++j)
      c[static_cast<size_t>(i + j)] += pi * q.coeffs()[static_cast<size_t>(j)];
  }
  return CoeffSeries(lo, std::move(c), tail, sampled);
}

inline CoeffSeries multiply(const CoeffSeries& a, const CoeffSeries& b,
                            const CoeffSeries& c) {
  return multiply(multiply(a, b), c);
}

/// Coefficient transforms of the boundary function.
///   Flip:  (n -> -n-1), values unchanged; the map f(z) -> conj(z) f(conj(z))
///          read on coefficients.  Linear, unitary, an involution.
///   Star:  conjugate values in place; f*(z) = conj(f(conj(z))).
///   Breve: (n -> -n), values unchanged; f(conj(z)) on the circle.
///   Bar:   (n -> -n) with conjugated values; the complex conjugate of f.
///   VFlip: (n -> -n-1) with conjugated values; f -> conj(z) conj(f).
///          Conjugate-linear, an involution.
enum class Transform { Flip, Star, Breve, Bar, VFlip };

inline CoeffSeries transform(const CoeffSeries& a, Transform t) {
  if (a.is_zero())
    return CoeffSeries(0, {}, a.tail_bound(), a.sampled());
  const int n = a.stored_count();
  std::vector<cd> c(static_cast<size_t>(n));
  int lo = a.lo();
  switch (t) {
    case Transform::Star:
      for (int i = 0; i < n; ++i) c[static_cast<size_t>(i)] = std::conj(a.coeffs()[static_cast<size_t>(i)]);
      break;
    case Transform::Flip:
      for (int i = 0; i < n; ++i) c[static_cast<size_t>(i)] = a.coeffs()[static_cast<size_t>(n - 1 - i)];
      lo = -a.hi() - 1;
      break;
    case Transform::Breve:
      for (int i = 0; i < n; ++i) c[static_cast<size_t>(i)] = a.coeffs()[static_cast<size_t>(n - 1 - i)];
      lo = -a.hi();
      break;
    case Transform::Bar:
      for (int i = 0; i < n; ++i) c[static_cast<size_t>(i)] = std::conj(a.coeffs()[static_cast<size_t>(n - 1 - i)]);
      lo = -a.hi();
      break;
    case Transform::VFlip:
      for (int i = 0; i < n; ++i) c[static_cast<size_t>(i)] = std::conj(a.coeffs()[static_cast<size_t>(n - 1 - i)]);
      lo = -a.hi() - 1;
      break;
  }
  return CoeffSeries(lo, std::move(c), a.tail_bound(), a.sampled());
}

/// Riesz projections: Analytic keeps indices n >= 0, CoAnalytic keeps n < 0.
enum class Part { Analytic, CoAnalytic };

inline CoeffSeries project(const CoeffSeries& a, Part part) {
  if (a.is_zero()) return CoeffSeries(0, {}, a.tail_bound(), a.sampled());
  if (part == Part::Analytic) {
    if (a.lo() >= 0) return a;
    if (a.hi() < 0) return CoeffSeries(0, {}, a.tail_bound(), a.sampled());
    std::vector<cd> c(a.coeffs().begin() + (0 - a.lo()), a.coeffs().end());
    return CoeffSeries(0, std::move(c), a.tail_bound(), a.sampled());
  }
  if (a.hi() < 0) return a;
  if (a.lo() >= 0) return CoeffSeries(0, {}, a.tail_bound(), a.sampled());
  std::vector<cd> c(a.coeffs().begin(), a.coeffs().begin() + (0 - a.lo()));
  return CoeffSeries(a.lo(), std::move(c), a.tail_bound(), a.sampled());
}

struct PairingResult {
  cd value;
  double error;  // bound on the contribution of omitted coefficients
};

/// L2 pairing <a, b> = sum_n a(n) conj(b(n)).  The error term bounds what
/// the two tails could contribute: tails pair against stored mass plus each
/// other, and |sum| <= l1 * linf <= l1 * l1.
inline PairingResult inner_product(const CoeffSeries& a, const CoeffSeries& b) {
  cd v(0.0);
  if (!a.is_zero() && !b.is_zero()) {
    int lo = std::max(a.lo(), b.lo()), hi = std::min(a.hi(), b.hi());
    for (int n = lo; n <= hi; ++n) v += a.at(n) * std::conj(b.at(n));
  }
  double err = a.tail_bound() * (b.abs_sum() + b.tail_bound()) +
               b.tail_bound() * a.abs_sum();
  return {v, err};
}

}  // namespace hardyops
