#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "hardyops/inner.hpp"
#include "hardyops/rational.hpp"

namespace hardyops {

/// Symbol classes that characterize when the compressions vanish (or, for
/// Kronecker, have finite rank).  Membership is decided by rational
/// arithmetic: form the appropriate quotient, cancel, and locate the
/// remaining poles relative to the unit circle.
enum class SymbolClass {
  EtaBarThetaHinf,        // conj(eta) theta H-infinity
  EtaBarHinf,             // conj(eta) H-infinity
  ThetaBreveEtaBarHinf,   // breve(theta) conj(eta) H-infinity
  ConjThetaHinfAndBreve,  // conj(theta H-infinity) intersect breve(theta) H-infinity
  Kronecker,              // anti-analytic part rational, poles in the open disk
  ConstMultThetaBar,      // constant multiple of conj(theta)
};

inline const char* to_string(SymbolClass c) {
  switch (c) {
    case SymbolClass::EtaBarThetaHinf: return "eta_bar_theta_hinf";
    case SymbolClass::EtaBarHinf: return "eta_bar_hinf";
    case SymbolClass::ThetaBreveEtaBarHinf: return "theta_breve_eta_bar_hinf";
    case SymbolClass::ConjThetaHinfAndBreve: return "conj_theta_hinf_and_breve";
    case SymbolClass::Kronecker: return "kronecker";
    case SymbolClass::ConstMultThetaBar: return "const_mult_theta_bar";
  }
  return "?";
}

namespace detail {

/// True when every pole of g lies strictly outside the closed disk, which
/// makes g a bounded analytic function there.
inline bool poles_all_outside(const RationalSymbol& g) {
  for (cd p : g.poles()) {
    if (std::abs(std::abs(p) - 1.0) <= kCircleTol)
      throw PoleOnCircle("classify_symbol: pole on the unit circle");
    if (std::abs(p) < 1.0) return false;
  }
  return true;
}

template <typename F>
inline bool guarded(F&& f) {
  try {
    return f();
  } catch (const NoCircleAnnulus& e) {
    throw PoleOnCircle(e.what());
  }
}

}  // namespace detail

/// Decides phi in <class>(eta, theta).  On the circle conj(eta) = 1/eta for
/// inner eta, so each class reduces to a pole-location test on a reduced
/// rational quotient.  Throws PoleOnCircle when a pole of the quotient
/// falls within tolerance of the circle, and NotFiniteBlaschke when the
/// test needs a rational form of an inner function that has atoms.
inline bool classify_symbol(const RationalSymbol& phi, const InnerFunction& eta,
                            const InnerFunction& theta, SymbolClass cls) {
  switch (cls) {
    case SymbolClass::EtaBarThetaHinf:
      return detail::guarded([&] {
        return detail::poles_all_outside(phi * eta.to_rational() *
                                         theta.to_rational().reciprocal());
      });
    case SymbolClass::EtaBarHinf:
      return detail::guarded(
          [&] { return detail::poles_all_outside(phi * eta.to_rational()); });
    case SymbolClass::ThetaBreveEtaBarHinf:
      return detail::guarded([&] {
        return detail::poles_all_outside(
            phi * eta.to_rational() * theta.to_rational().breve().reciprocal());
      });
    case SymbolClass::ConjThetaHinfAndBreve:
      return detail::guarded([&] {
        bool conj_part = detail::poles_all_outside(
            (phi * theta.to_rational()).conj_reflected());
        if (!conj_part) return false;
        return detail::poles_all_outside(
            phi * theta.to_rational().breve().reciprocal());
      });
    case SymbolClass::Kronecker:
      return detail::guarded([&] {
        // Any rational symbol with poles off the circle has an anti-analytic
        // part that is rational with poles in the open disk; the check is a
        // pole audit, not a tautology, because it rejects circle poles.
        for (cd p : phi.poles())
          if (std::abs(std::abs(p) - 1.0) <= kCircleTol)
            throw PoleOnCircle("classify_symbol: pole on the unit circle");
        return true;
      });
    case SymbolClass::ConstMultThetaBar:
      return detail::guarded(
          [&] { return (phi * theta.to_rational()).is_constant(); });
  }
  throw std::invalid_argument("classify_symbol: unknown class");
}

}  // namespace hardyops
