#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hardyops/polynomial.hpp"
#include "hardyops/series.hpp"

namespace hardyops {

/// Distance band around |z| = 1 inside which a pole location is treated as
/// "on the circle" and rejected (or reported PoleOnCircle by classifiers).
inline constexpr double kCircleTol = 1e-9;
/// Two numerically computed roots closer than this are treated as equal
/// when cancelling numerator against denominator factors.  Companion-matrix
/// eigenvalues of an exact double root scatter by about sqrt(eps), so the
/// pairing tolerance has to sit well above 1e-8.
inline constexpr double kRootMatchTol = 1e-7;
/// Denominator roots within this distance are clustered into one multiple
/// pole for the partial-fraction expansion (companion-matrix eigenvalues of
/// a multiple root scatter like eps^(1/m)).
inline constexpr double kClusterTol = 2e-6;

/// Rational function p/q restricted to a neighbourhood of the unit circle.
/// On construction common roots of p and q are cancelled and the reduced
/// denominator is checked to have no root on the circle, so the function
/// has a genuine Laurent expansion on an annulus containing |z| = 1.
class RationalSymbol {
 public:
  RationalSymbol(Poly num, Poly den) {
    if (den.is_zero())
      throw std::invalid_argument("RationalSymbol: zero denominator");
    reduce(std::move(num), std::move(den));
    for (cd p : poles_)
      if (std::abs(std::abs(p) - 1.0) <= kCircleTol)
        throw NoCircleAnnulus("RationalSymbol: pole within " +
                              format_double(kCircleTol) + " of the unit circle");
  }

  static RationalSymbol constant(cd a) {
    return RationalSymbol(Poly::constant(a), Poly::constant(cd(1.0)));
  }
  static RationalSymbol from_poly(Poly p) {
    return RationalSymbol(std::move(p), Poly::constant(cd(1.0)));
  }

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  /// Denominator roots of the reduced form, with multiplicity.
  const std::vector<cd>& poles() const { return poles_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_constant() const { return num_.degree() <= 0 && den_.degree() == 0; }
  cd constant_value() const { return num_.coeff(0) / den_.coeff(0); }

  cd eval(cd z) const { return num_.eval(z) / den_.eval(z); }

  RationalSymbol operator*(const RationalSymbol& o) const {
    return RationalSymbol(num_ * o.num_, den_ * o.den_);
  }
  RationalSymbol operator+(const RationalSymbol& o) const {
    return RationalSymbol(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
  }
  RationalSymbol scaled(cd a) const {
    return RationalSymbol(num_.scaled(a), den_);
  }

  /// 1/f.  Throws NoCircleAnnulus if f has a zero on the circle.
  RationalSymbol reciprocal() const {
    if (num_.is_zero())
      throw std::invalid_argument("RationalSymbol: reciprocal of zero");
    return RationalSymbol(den_, num_);
  }

  /// f(1/z) as a rational function of z.
  RationalSymbol subst_inverse() const {
    int dn = std::max(num_.degree(), 0), dd = den_.degree();
    Poly n = num_.reversed(), d = den_.reversed();
    if (dd > dn)
      n = n * Poly::monomial(dd - dn);
    else if (dn > dd)
      d = d * Poly::monomial(dn - dd);
    return RationalSymbol(std::move(n), std::move(d));
  }

  /// The boundary complex conjugate conj(f) as a rational function:
  /// conj(f(z)) = fbar(1/z) on |z| = 1.
  RationalSymbol conj_reflected() const {
    return RationalSymbol(num_.conj_coeffs(), den_.conj_coeffs())
        .subst_inverse();
  }

  /// f*(z) = conj(f(conj(z))): coefficients conjugated in place.
  RationalSymbol star() const {
    return RationalSymbol(num_.conj_coeffs(), den_.conj_coeffs());
  }

  /// f(conj(z)) on the boundary, i.e. f(1/z).
  RationalSymbol breve() const { return subst_inverse(); }

 private:
  void reduce(Poly num, Poly den) {
    if (!num.is_zero() && den.degree() > 0 && num.degree() > 0) {
      std::vector<cd> nroots = num.roots();
      std::vector<cd> droots = den.roots();
      std::vector<bool> used(nroots.size(), false);
      for (cd r : droots) {
        for (size_t i = 0; i < nroots.size(); ++i) {
          if (used[i]) continue;
          if (std::abs(nroots[i] - r) <=
              kRootMatchTol * std::max(1.0, std::abs(r))) {
            used[i] = true;
            num = num.deflated(nroots[i]);
            den = den.deflated(r);
            break;
          }
        }
        if (num.degree() == 0) break;
      }
    }
    cd dl = den.lead();
    den = den.scaled(cd(1.0) / dl);
    num = num.scaled(cd(1.0) / dl);
    num_ = std::move(num);
    den_ = std::move(den);
    poles_ = den_.roots();
  }

  Poly num_, den_;
  std::vector<cd> poles_;
};

namespace detail {

struct PoleCluster {
  cd center;
  int multiplicity;
};

inline std::vector<PoleCluster> cluster_roots(const std::vector<cd>& roots) {
  std::vector<PoleCluster> out;
  std::vector<bool> taken(roots.size(), false);
  for (size_t i = 0; i < roots.size(); ++i) {
    if (taken[i]) continue;
    cd sum = roots[i];
    int count = 1;
    taken[i] = true;
    for (size_t j = i + 1; j < roots.size(); ++j) {
      if (taken[j]) continue;
      if (std::abs(roots[j] - roots[i]) <=
          kClusterTol * std::max(1.0, std::abs(roots[i]))) {
        sum += roots[j];
        ++count;
        taken[j] = true;
      }
    }
    out.push_back({sum / cd(double(count)), count});
  }
  return out;
}

/// Certified bound for sum_{n > N} C(n+k-1, k-1) x^n with 0 <= x < 1.
/// Terms are summed explicitly until the term ratio drops below 1, after
/// which a geometric bound closes the tail.
inline double binomial_tail(double x, int k, int N) {
  if (x <= 0.0) return 0.0;
  auto choose = [](long n, int r) {
    double v = 1.0;
    for (int i = 1; i <= r; ++i) v *= double(n - r + i) / double(i);
    return v;
  };
  long n = N + 1;
  double term = choose(n + k - 1, k - 1) * std::pow(x, double(n));
  double total = 0.0;
  for (int guard = 0; guard < 100000; ++guard) {
    double ratio = x * double(n + k) / double(n + 1);
    if (ratio < 1.0) {
      total += term / (1.0 - ratio);
      return total;
    }
    total += term;
    term *= ratio;
    ++n;
  }
  throw std::runtime_error("binomial_tail: did not converge");
}

}  // namespace detail

/// Laurent expansion of r on the annulus containing the unit circle,
/// stored on the window [-N, N] with a certified tail bound.  Poles
/// strictly inside the disk contribute negative powers; poles outside and
/// the polynomial part contribute non-negative powers.
inline CoeffSeries rational_to_series(const RationalSymbol& r, int N) {
  if (N < 0) throw WindowTooSmall("rational_to_series: N < 0");
  if (r.is_zero()) return CoeffSeries::zero();

  Poly num = r.num(), den = r.den();
  std::vector<cd> window(static_cast<size_t>(2 * N + 1), cd(0.0));
  double tail = 0.0;
  auto deposit = [&](int idx, cd v) {
    if (idx >= -N && idx <= N) window[static_cast<size_t>(idx + N)] += v;
  };

  if (den.degree() == 0) {
    cd d = den.coeff(0);
    for (int k = 0; k <= num.degree(); ++k) {
      if (k <= N)
        deposit(k, num.coeff(k) / d);
      else
        tail += std::abs(num.coeff(k) / d);
    }
    return CoeffSeries(-N, std::move(window), tail);
  }

  // polynomial part first
  if (num.degree() >= den.degree()) {
    auto [quot, rem] = num.divmod(den);
    for (int k = 0; k <= quot.degree(); ++k) {
      if (k <= N)
        deposit(k, quot.coeff(k));
      else
        tail += std::abs(quot.coeff(k));
    }
    num = rem;
  }
  if (num.is_zero()) return CoeffSeries(-N, std::move(window), tail);

  // principal parts at each clustered pole
  auto clusters = detail::cluster_roots(den.roots());
  for (const auto& cl : clusters) {
    Poly co = den;
    for (int i = 0; i < cl.multiplicity; ++i) co = co.deflated(cl.center);
    // Taylor expansions about the pole, then a power-series quotient gives
    // the principal-part coefficients.
    int m = cl.multiplicity;
    Poly tn = num.taylor_at(cl.center);
    Poly tc = co.taylor_at(cl.center);
    std::vector<cd> c(static_cast<size_t>(m), cd(0.0));
    cd b0 = tc.coeff(0);
    if (b0 == cd(0.0))
      throw std::runtime_error("rational_to_series: degenerate pole cluster");
    for (int n = 0; n < m; ++n) {
      cd s = tn.coeff(n);
      for (int j = 0; j < n; ++j) s -= c[static_cast<size_t>(j)] * tc.coeff(n - j);
      c[static_cast<size_t>(n)] = s / b0;
    }
    // coefficient of (z - center)^{-k} is c[m - k]
    double ar = std::abs(cl.center);
    for (int k = 1; k <= m; ++k) {
      cd A = c[static_cast<size_t>(m - k)];
      if (A == cd(0.0)) continue;
      if (ar > 1.0) {
        // 1/(z-r)^k = (-1)^k r^{-k} sum_n C(n+k-1,k-1) (z/r)^n
        cd sign = (k % 2 == 0) ? cd(1.0) : cd(-1.0);
        cd rk = std::pow(cl.center, -k);
        auto choose_run = [&] {
          double binom = 1.0;  // C(n+k-1, k-1) at n=0
          cd zpow(1.0);
          for (int n = 0; n <= N; ++n) {
            deposit(n, A * sign * rk * cd(binom) * zpow);
            binom = binom * double(n + k) / double(n + 1);
            zpow /= cl.center;
          }
        };
        choose_run();
        tail += std::abs(A) * std::pow(ar, double(-k)) *
                detail::binomial_tail(1.0 / ar, k, N);
      } else {
        // 1/(z-r)^k = sum_n C(n+k-1,k-1) r^n z^{-k-n}
        double binom = 1.0;
        cd rpow(1.0);
        for (int n = 0; n + k <= N; ++n) {
          deposit(-(k + n), A * cd(binom) * rpow);
          binom = binom * double(n + k) / double(n + 1);
          rpow *= cl.center;
        }
        // omitted indices correspond to n > N - k
        tail += std::abs(A) * detail::binomial_tail(ar, k, std::max(N - k, -1));
      }
    }
  }
  return CoeffSeries(-N, std::move(window), tail);
}

}  // namespace hardyops
