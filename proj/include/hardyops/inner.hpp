#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <istream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hardyops/rational.hpp"
#include "hardyops/sampling.hpp"
#include "hardyops/series.hpp"

namespace hardyops {

inline constexpr double kZeroRadiusMax = 1.0 - 1e-6;
inline constexpr double kAtomApproachTol = 1e-9;

struct SingularAtom {
  double angle;  // atom location exp(i*angle)
  double mass;   // weight s > 0

  friend bool operator==(const SingularAtom& a, const SingularAtom& b) {
    return a.angle == b.angle && a.mass == b.mass;
  }
};

/// Geometric series sum_{n=0..order} a^n z^n with the exact geometric tail.
inline CoeffSeries geometric_series(cd a, int order) {
  double r = std::abs(a);
  if (r >= 1.0) throw std::invalid_argument("geometric_series: |a| >= 1");
  std::vector<cd> c(static_cast<size_t>(order) + 1);
  cd p(1.0);
  for (int n = 0; n <= order; ++n) {
    c[static_cast<size_t>(n)] = p;
    p *= a;
  }
  double tail = (r == 0.0) ? 0.0 : std::pow(r, double(order) + 1.0) / (1.0 - r);
  return CoeffSeries(0, std::move(c), tail);
}

/// Expansion of the factor (z - a)/(1 - conj(a) z) on [0, order+1].
inline CoeffSeries blaschke_factor_series(cd a, int order) {
  CoeffSeries geo = geometric_series(std::conj(a), order);
  CoeffSeries lin(0, {-a, cd(1.0)});
  return multiply(lin, geo);
}

/// Inner function given by a unimodular constant, a finite Blaschke zero
/// set (with multiplicity, all |a| <= 1 - 1e-6) and finitely many atomic
/// singular factors exp(s (z + zeta)/(z - zeta)) with zeta = exp(i angle).
class InnerFunction {
 public:
  InnerFunction() = default;
  InnerFunction(cd constant, std::vector<cd> zeros,
                std::vector<SingularAtom> atoms = {})
      : constant_(constant), zeros_(std::move(zeros)), atoms_(std::move(atoms)) {
    if (std::abs(std::abs(constant_) - 1.0) > 1e-12)
      throw std::invalid_argument("InnerFunction: constant must be unimodular");
    for (cd a : zeros_)
      if (std::abs(a) > kZeroRadiusMax)
        throw std::invalid_argument(
            "InnerFunction: Blaschke zero too close to the circle");
    for (const auto& at : atoms_)
      if (!(at.mass > 0.0))
        throw std::invalid_argument("InnerFunction: atom mass must be > 0");
  }

  static InnerFunction one() { return InnerFunction(cd(1.0), {}); }
  /// z^k
  static InnerFunction shift(int k) {
    return InnerFunction(cd(1.0), std::vector<cd>(static_cast<size_t>(k), cd(0.0)));
  }
  static InnerFunction blaschke(std::vector<cd> zeros) {
    return InnerFunction(cd(1.0), std::move(zeros));
  }

  cd constant() const { return constant_; }
  const std::vector<cd>& zeros() const { return zeros_; }
  const std::vector<SingularAtom>& atoms() const { return atoms_; }
  bool has_atoms() const { return !atoms_.empty(); }
  bool is_finite_blaschke() const { return atoms_.empty(); }
  bool is_constant() const { return zeros_.empty() && atoms_.empty(); }
  /// Blaschke degree; the model space dimension when there are no atoms.
  int degree() const { return static_cast<int>(zeros_.size()); }

  cd evaluate(cd z) const {
    cd v = constant_;
    for (cd a : zeros_) v *= (z - a) / (cd(1.0) - std::conj(a) * z);
    for (const auto& at : atoms_) {
      cd zeta = std::polar(1.0, at.angle);
      if (std::abs(z - zeta) < kAtomApproachTol)
        throw AtomSingularity("InnerFunction::evaluate at an atom");
      v *= std::exp(cd(at.mass) * (z + zeta) / (z - zeta));
    }
    return v;
  }

  /// Analytic expansion on [0, N].  Exact factored series for finite
  /// Blaschke products (certified geometric tail); boundary sampling for
  /// atomic factors (heuristic tail, marks the series sampled).
  CoeffSeries expand(int N, int sample_order = 12) const {
    if (N < 0) throw WindowTooSmall("InnerFunction::expand: N < 0");
    if (is_finite_blaschke()) {
      CoeffSeries s = CoeffSeries::constant(constant_);
      for (cd a : zeros_) {
        s = multiply(s, blaschke_factor_series(a, N + 1));
        s = s.windowed(0, N);
      }
      return s;
    }
    int m = sample_order;
    while ((1 << (m - 1)) < N + 1) ++m;
    CoeffSeries s = sample_expand([this](cd z) { return evaluate(z); }, m);
    return s.windowed(0, N);
  }

  RationalSymbol to_rational() const {
    if (!is_finite_blaschke())
      throw NotFiniteBlaschke("InnerFunction::to_rational: atoms present");
    Poly num = Poly::constant(constant_);
    Poly den = Poly::constant(cd(1.0));
    for (cd a : zeros_) {
      num = num * Poly(std::vector<cd>{-a, cd(1.0)});
      den = den * Poly(std::vector<cd>{cd(1.0), -std::conj(a)});
    }
    return RationalSymbol(std::move(num), std::move(den));
  }

  InnerFunction product(const InnerFunction& o) const {
    cd c = constant_ * o.constant_;
    std::vector<cd> z = zeros_;
    z.insert(z.end(), o.zeros_.begin(), o.zeros_.end());
    std::vector<SingularAtom> a = atoms_;
    a.insert(a.end(), o.atoms_.begin(), o.atoms_.end());
    return InnerFunction(c, std::move(z), std::move(a));
  }

  /// theta*(z) = conj(theta(conj(z))): conjugated constant and zeros,
  /// atoms reflected across the real axis.
  InnerFunction star() const {
    std::vector<cd> z(zeros_);
    for (cd& a : z) a = std::conj(a);
    std::vector<SingularAtom> at(atoms_);
    for (auto& s : at) s.angle = -s.angle;
    return InnerFunction(std::conj(constant_), std::move(z), std::move(at));
  }

  /// Descriptor record: `constant re im`, then `zero re im mult` lines and
  /// `atom angle mass` lines.
  std::string to_text() const {
    std::ostringstream os;
    os << "constant " << format_double(constant_.real()) << " "
       << format_double(constant_.imag()) << "\n";
    for (size_t i = 0; i < zeros_.size();) {
      size_t j = i;
      while (j < zeros_.size() && zeros_[j] == zeros_[i]) ++j;
      os << "zero " << format_double(zeros_[i].real()) << " "
         << format_double(zeros_[i].imag()) << " " << (j - i) << "\n";
      i = j;
    }
    for (const auto& a : atoms_)
      os << "atom " << format_double(a.angle) << " " << format_double(a.mass)
         << "\n";
    return os.str();
  }

  static InnerFunction from_text(std::istream& in) {
    cd c(1.0);
    std::vector<cd> zeros;
    std::vector<SingularAtom> atoms;
    std::string key;
    while (in >> key) {
      if (key == "constant") {
        double re, im;
        if (!(in >> re >> im)) throw std::runtime_error("InnerFunction::from_text");
        c = cd(re, im);
      } else if (key == "zero") {
        double re, im;
        int mult;
        if (!(in >> re >> im >> mult) || mult < 1)
          throw std::runtime_error("InnerFunction::from_text");
        for (int i = 0; i < mult; ++i) zeros.emplace_back(re, im);
      } else if (key == "atom") {
        double angle, mass;
        if (!(in >> angle >> mass))
          throw std::runtime_error("InnerFunction::from_text");
        atoms.push_back({angle, mass});
      } else {
        throw std::runtime_error("InnerFunction::from_text: unknown key " + key);
      }
    }
    return InnerFunction(c, std::move(zeros), std::move(atoms));
  }

  static InnerFunction from_text(const std::string& s) {
    std::istringstream in(s);
    return from_text(in);
  }

  friend bool operator==(const InnerFunction& a, const InnerFunction& b) {
    return a.constant_ == b.constant_ && a.zeros_ == b.zeros_ &&
           a.atoms_ == b.atoms_;
  }

 private:
  cd constant_{1.0};
  std::vector<cd> zeros_;
  std::vector<SingularAtom> atoms_;
};

}  // namespace hardyops
