#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hardyops/series.hpp"

namespace hardyops {

/// Dense polynomial in z with complex coefficients, c[k] multiplying z^k.
/// Trailing zero coefficients are trimmed; the zero polynomial has an empty
/// coefficient vector and degree -1.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<cd> c) : c_(std::move(c)) { trim(); }

  static Poly constant(cd a) { return Poly(std::vector<cd>{a}); }
  static Poly monomial(int k, cd a = cd(1.0)) {
    std::vector<cd> c(static_cast<size_t>(k) + 1, cd(0.0));
    c.back() = a;
    return Poly(std::move(c));
  }
  static Poly from_roots(const std::vector<cd>& roots, cd lead = cd(1.0)) {
    Poly p = constant(lead);
    for (cd r : roots) p = p * Poly(std::vector<cd>{-r, cd(1.0)});
    return p;
  }

  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  cd coeff(int k) const {
    return (k >= 0 && k < static_cast<int>(c_.size()))
               ? c_[static_cast<size_t>(k)]
               : cd(0.0);
  }
  cd lead() const { return is_zero() ? cd(0.0) : c_.back(); }
  const std::vector<cd>& coeffs() const { return c_; }

  cd eval(cd z) const {
    cd v(0.0);
    for (size_t i = c_.size(); i-- > 0;) v = v * z + c_[i];
    return v;
  }

  Poly operator+(const Poly& o) const {
    std::vector<cd> c(std::max(c_.size(), o.c_.size()), cd(0.0));
    for (size_t i = 0; i < c_.size(); ++i) c[i] += c_[i];
    for (size_t i = 0; i < o.c_.size(); ++i) c[i] += o.c_[i];
    return Poly(std::move(c));
  }
  Poly operator-(const Poly& o) const { return *this + o.scaled(cd(-1.0)); }
  Poly operator*(const Poly& o) const {
    if (is_zero() || o.is_zero()) return {};
    std::vector<cd> c(c_.size() + o.c_.size() - 1, cd(0.0));
    for (size_t i = 0; i < c_.size(); ++i)
      for (size_t j = 0; j < o.c_.size(); ++j) c[i + j] += c_[i] * o.c_[j];
    return Poly(std::move(c));
  }
  Poly scaled(cd a) const {
    std::vector<cd> c(c_);
    for (cd& x : c) x *= a;
    return Poly(std::move(c));
  }

  Poly derivative() const {
    if (degree() < 1) return {};
    std::vector<cd> c(c_.size() - 1);
    for (size_t i = 1; i < c_.size(); ++i) c[i - 1] = c_[i] * cd(double(i));
    return Poly(std::move(c));
  }

  /// z^deg * p(1/z): the coefficient vector reversed.
  Poly reversed() const {
    std::vector<cd> c(c_.rbegin(), c_.rend());
    return Poly(std::move(c));
  }

  Poly conj_coeffs() const {
    std::vector<cd> c(c_);
    for (cd& x : c) x = std::conj(x);
    return Poly(std::move(c));
  }

  /// Coefficients of p(z + r), via repeated synthetic division: each pass
  /// divides the running quotient by (z - r) and the remainders are the
  /// shifted coefficients in order.
  Poly taylor_at(cd r) const {
    if (is_zero()) return {};
    std::vector<cd> work(c_);
    std::vector<cd> out(c_.size(), cd(0.0));
    const int d = degree();
    for (int k = 0; k <= d; ++k) {
      const int top = d - k;
      cd carry = work[static_cast<size_t>(top)];
      for (int i = top - 1; i >= 0; --i) {
        cd t = work[static_cast<size_t>(i)] + r * carry;
        work[static_cast<size_t>(i)] = carry;
        carry = t;
      }
      out[static_cast<size_t>(k)] = carry;
    }
    return Poly(std::move(out));
  }

  /// Quotient and remainder of *this / d.
  std::pair<Poly, Poly> divmod(const Poly& d) const {
    if (d.is_zero()) throw std::invalid_argument("Poly::divmod: zero divisor");
    std::vector<cd> rem(c_);
    int dn = static_cast<int>(rem.size()) - 1, dd = d.degree();
    if (dn < dd) return {Poly{}, *this};
    std::vector<cd> quot(static_cast<size_t>(dn - dd) + 1, cd(0.0));
    for (int k = dn - dd; k >= 0; --k) {
      cd q = rem[static_cast<size_t>(k + dd)] / d.lead();
      quot[static_cast<size_t>(k)] = q;
      for (int j = 0; j <= dd; ++j)
        rem[static_cast<size_t>(k + j)] -= q * d.coeff(j);
    }
    rem.resize(static_cast<size_t>(std::max(dd, 0)));
    return {Poly(std::move(quot)), Poly(std::move(rem))};
  }

  /// Synthetic division by (z - root); the remainder is discarded.
  Poly deflated(cd root) const {
    if (degree() < 1) return {};
    std::vector<cd> q(c_.size() - 1, cd(0.0));
    cd carry = c_.back();
    for (size_t i = c_.size() - 1; i-- > 0;) {
      q[i] = carry;
      carry = c_[i] + carry * root;
    }
    return Poly(std::move(q));
  }

  /// Roots as eigenvalues of the companion matrix.
  std::vector<cd> roots() const {
    int d = degree();
    if (d <= 0) return {};
    if (d == 1) return {-c_[0] / c_[1]};
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(d, d);
    for (int i = 1; i < d; ++i) comp(i, i - 1) = cd(1.0);
    for (int i = 0; i < d; ++i) comp(i, d - 1) = -c_[static_cast<size_t>(i)] / c_.back();
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
    if (es.info() != Eigen::Success)
      throw std::runtime_error("Poly::roots: eigensolver failed");
    std::vector<cd> r(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) r[static_cast<size_t>(i)] = es.eigenvalues()(i);
    return r;
  }

  CoeffSeries to_series() const { return CoeffSeries(0, c_); }

  std::string to_string() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int k = 0; k <= degree(); ++k) {
      cd a = coeff(k);
      if (a == cd(0.0)) continue;
      if (!first) os << " + ";
      os << "(" << format_double(a.real()) << (a.imag() < 0 ? "" : "+")
         << format_double(a.imag()) << "i)";
      if (k == 1) os << "z";
      if (k > 1) os << "z^" << k;
      first = false;
    }
    return os.str();
  }

  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == cd(0.0)) c_.pop_back();
  }
  std::vector<cd> c_;
};

}  // namespace hardyops
