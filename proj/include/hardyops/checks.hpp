#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hardyops/classify.hpp"
#include "hardyops/digest.hpp"
#include "hardyops/operators.hpp"

namespace hardyops {

/// Numerical policy shared by the identity checks.  The expansion order of
/// every internal series is expansion_factor * N; identity residuals are
/// Frobenius norms over trusted windows.
struct VerifyContext {
  int N = 200;
  int expansion_factor = 4;
  double tol_identity = 1e-8;
  double tol_projection = 1e-10;
  double tol_rank = 1e-8;
  /// Required multiple of tol_identity separating a certified non-member
  /// from the zero operator; norms between the two verdicts are
  /// inconclusive.
  double separation_factor = 10.0;
  uint64_t seed = 7;

  int order() const { return expansion_factor * N; }
};

enum class CheckStatus { Certified, Heuristic };
enum class Verdict { Pass, Fail, Inconclusive };

inline const char* to_string(CheckStatus s) {
  return s == CheckStatus::Certified ? "CERTIFIED" : "HEURISTIC";
}
inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    case Verdict::Inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

/// Outcome of one verification.  `passed` is always equivalent to
/// residual <= threshold; separation-style checks (where the operator must
/// stay away from zero) store the shortfall below the required norm as the
/// residual, threshold 0, with the raw norm in observed_norm.
struct CheckReport {
  std::string check_id;
  std::string identity;  // plain-language statement of what was verified
  double residual = 0.0;
  double threshold = 0.0;
  bool passed = false;
  Verdict verdict = Verdict::Fail;
  CheckStatus status = CheckStatus::Certified;
  IndexRange trusted_rows, trusted_cols;
  std::string inputs_digest;
  double observed_norm = 0.0;
};

namespace detail {

inline CheckReport residual_report(std::string id, std::string identity,
                                   double residual, double threshold,
                                   IndexRange rows, IndexRange cols,
                                   std::string digest, bool heuristic) {
  CheckReport r;
  r.check_id = std::move(id);
  r.identity = std::move(identity);
  r.residual = residual;
  r.threshold = threshold;
  r.passed = residual <= threshold;
  r.verdict = r.passed ? Verdict::Pass : Verdict::Fail;
  r.status = heuristic ? CheckStatus::Heuristic : CheckStatus::Certified;
  r.trusted_rows = rows;
  r.trusted_cols = cols;
  r.inputs_digest = std::move(digest);
  r.observed_norm = residual;
  return r;
}

inline CheckReport separation_report(std::string id, std::string identity,
                                     double norm, double tol, double factor,
                                     IndexRange rows, IndexRange cols,
                                     std::string digest, bool heuristic) {
  CheckReport r;
  r.check_id = std::move(id);
  r.identity = std::move(identity);
  double required = factor * tol;
  r.residual = std::max(0.0, required - norm);
  r.threshold = 0.0;
  r.passed = norm >= required;
  r.verdict = r.passed ? Verdict::Pass
                       : (norm <= tol ? Verdict::Fail : Verdict::Inconclusive);
  r.status = heuristic ? CheckStatus::Heuristic : CheckStatus::Certified;
  r.trusted_rows = rows;
  r.trusted_cols = cols;
  r.inputs_digest = std::move(digest);
  r.observed_norm = norm;
  return r;
}

inline double frob(const Eigen::MatrixXcd& m) { return m.norm(); }

inline std::string digest_inputs(const std::string& tag,
                                 const CoeffSeries& phi,
                                 const InnerFunction& eta,
                                 const InnerFunction& theta,
                                 const VerifyContext& ctx) {
  std::ostringstream os;
  os << tag << "\nphi\n"
     << phi.to_text() << "eta\n"
     << eta.to_text() << "theta\n"
     << theta.to_text() << "N " << ctx.N << "\nfactor " << ctx.expansion_factor
     << "\ntol " << format_double(ctx.tol_identity) << "\nseed " << ctx.seed
     << "\n";
  return fnv1a64_hex(os.str());
}

/// Coefficient matrix of a family on rows [0, maxrow]: column k holds the
/// monomial coefficients of the k-th vector.
inline Eigen::MatrixXcd coefficient_columns(const std::vector<CoeffSeries>& v,
                                            int maxrow) {
  Eigen::MatrixXcd m =
      Eigen::MatrixXcd::Zero(maxrow + 1, static_cast<int>(v.size()));
  for (int k = 0; k < static_cast<int>(v.size()); ++k)
    for (int n = 0; n <= maxrow; ++n)
      m(n, k) = v[static_cast<size_t>(k)].at(n);
  return m;
}

}  // namespace detail

/// The backward shift applied at series level: P(conj(z) f).
inline CoeffSeries backward_shift_series(const CoeffSeries& f) {
  return project(f.shifted(-1), Part::Analytic);
}

/// Verifies that the model-space projection window agrees between its
/// closed forms: I - T S product form, the basis outer-product sum, and the
/// Hankel-product form; the conjugate side is checked against the
/// V-conjugated matrix and its own Hankel form.
inline CheckReport check_projection_identity(const InnerFunction& theta,
                                             const VerifyContext& ctx,
                                             std::string check_id) {
  const int N = ctx.N, order = ctx.order();
  const int inner = 2 * N;  // Hankel inner window
  CoeffSeries th = theta.expand(order);

  OperatorMatrix P = model_projection_matrix(theta, N, order);
  double resid = 0.0;

  // basis outer-product form
  if (theta.is_finite_blaschke()) {
    auto tm = takenaka_malmquist(theta, theta.degree(), order);
    Eigen::MatrixXcd E = detail::coefficient_columns(tm, N);
    resid = std::max(resid, detail::frob(P.entries - E * E.adjoint()));
  }

  // Hankel-product form
  Eigen::MatrixXcd hb =
      hankel(transform(th, Transform::Breve), N + 1, inner).entries;
  Eigen::MatrixXcd hc =
      hankel(transform(th, Transform::Bar), inner, N + 1).entries;
  resid = std::max(resid, detail::frob(P.entries - hb * hc));

  // conjugate side: direct entries, V-conjugation, Hankel-hat product
  OperatorMatrix Pc = conj_model_projection_matrix(theta, N, order);
  resid = std::max(resid, detail::frob(Pc.entries - P.entries.conjugate()));
  Eigen::MatrixXcd hhat =
      hankel(transform(th, Transform::Bar), N + 1, inner, HankelVariant::Hat)
          .entries;
  resid = std::max(resid, detail::frob(Pc.entries - hhat * hhat.adjoint()));

  return detail::residual_report(
      std::move(check_id),
      "model projection window: product form = basis sum = Hankel product; "
      "conjugate window matches under V-conjugation",
      resid, ctx.tol_projection, {0, N + 1}, {0, N + 1},
      detail::digest_inputs("projection", th, InnerFunction::one(), theta, ctx),
      th.sampled());
}

namespace detail {

struct DefectParts {
  OperatorMatrix lhs;       // the commutator-style difference
  OperatorMatrix coupling;  // the rank-one right-hand side
  IndexRange cols;          // trusted columns of the comparison
};

inline DefectParts rto_defect_parts(const CoeffSeries& phi,
                                    const InnerFunction& eta,
                                    const InnerFunction& theta,
                                    const VerifyContext& ctx) {
  const int m = ctx.N, order = ctx.order();
  if (m < 2) throw WindowTooSmall("rto defect: window too small");
  CoeffSeries ths = theta.expand(order);
  CoeffSeries ets = eta.expand(order);
  AssembleRequest req{OperatorKind::RTO, phi, eta, theta, m, 0, order};
  OperatorMatrix X = assemble(req);
  OperatorMatrix St = compressed_shift(theta, order);
  OperatorMatrix Se = beurling_shift(eta, m, order);
  OperatorMatrix lhs = X;
  lhs.entries = X.entries - St.entries.adjoint() * X.entries * Se.entries;

  CoeffSeries u = backward_shift_series(ths);
  CoeffSeries zpe = multiply(CoeffSeries::monomial(1), multiply(phi, ets));
  CoeffSeries v =
      project(multiply(ths, transform(zpe, Transform::Bar)), Part::Analytic);
  BasisChain fdomain{
      BasisSpec{BasisKind::MonomialH2, InnerFunction::one(), m, order}};
  OperatorMatrix R = rank_one(u, v, fdomain, X.codomain);
  return {std::move(lhs), std::move(R), {0, m - 1}};
}

inline DefectParts rho_defect_parts(const CoeffSeries& phi,
                                    const InnerFunction& eta,
                                    const InnerFunction& theta,
                                    const VerifyContext& ctx) {
  const int m = ctx.N, order = ctx.order();
  if (m < 2) throw WindowTooSmall("rho defect: window too small");
  CoeffSeries ths = theta.expand(order);
  CoeffSeries ets = eta.expand(order);
  AssembleRequest req{OperatorKind::RHO, phi, eta, theta, m, 0, order};
  OperatorMatrix X = assemble(req);
  OperatorMatrix St = compressed_shift(theta, order);
  OperatorMatrix Se = beurling_shift(eta, m, order);
  OperatorMatrix lhs = X;
  lhs.entries = X.entries * Se.entries - St.entries.adjoint() * X.entries;

  CoeffSeries u = backward_shift_series(ths);
  CoeffSeries zpe = multiply(CoeffSeries::monomial(1), multiply(phi, ets));
  CoeffSeries cap = project(multiply(transform(ths, Transform::Breve),
                                     transform(zpe, Transform::Bar)),
                            Part::Analytic);
  BasisChain fdomain{
      BasisSpec{BasisKind::MonomialH2, InnerFunction::one(), m, order}};
  OperatorMatrix R = rank_one(u, cap, fdomain, X.codomain);
  return {std::move(lhs), std::move(R), {0, m - 1}};
}

}  // namespace detail

/// The one-step defect of the restricted analytic compression: the
/// difference between X and its two-sided shift conjugate is the rank-one
/// coupling of the backward-shifted inner function against a projected
/// product symbol.  The last window column falls off the shift window and
/// is excluded.
inline CheckReport check_rto_defect(const CoeffSeries& phi,
                                    const InnerFunction& eta,
                                    const InnerFunction& theta,
                                    const VerifyContext& ctx,
                                    std::string check_id) {
  auto parts = detail::rto_defect_parts(phi, eta, theta, ctx);
  int d = parts.lhs.rows();
  Eigen::MatrixXcd diff = parts.lhs.entries - parts.coupling.entries;
  double resid =
      detail::frob(diff.block(0, parts.cols.begin, d, parts.cols.size()));
  return detail::residual_report(
      std::move(check_id),
      "restricted analytic compression: X - S_theta* X S_eta is the "
      "predicted rank-one coupling",
      resid, ctx.tol_identity, {0, d}, parts.cols,
      detail::digest_inputs("rto_defect", phi, eta, theta, ctx),
      parts.lhs.heuristic || parts.coupling.heuristic || phi.sampled());
}

/// Same shape for the flipped compression, with the shifts applied in the
/// opposite order.
inline CheckReport check_rho_defect(const CoeffSeries& phi,
                                    const InnerFunction& eta,
                                    const InnerFunction& theta,
                                    const VerifyContext& ctx,
                                    std::string check_id) {
  auto parts = detail::rho_defect_parts(phi, eta, theta, ctx);
  int d = parts.lhs.rows();
  Eigen::MatrixXcd diff = parts.lhs.entries - parts.coupling.entries;
  double resid =
      detail::frob(diff.block(0, parts.cols.begin, d, parts.cols.size()));
  return detail::residual_report(
      std::move(check_id),
      "restricted flipped compression: X S_eta - S_theta* X is the "
      "predicted rank-one coupling",
      resid, ctx.tol_identity, {0, d}, parts.cols,
      detail::digest_inputs("rho_defect", phi, eta, theta, ctx),
      parts.lhs.heuristic || parts.coupling.heuristic || phi.sampled());
}

/// Forward direction of the intertwining characterization: symbols of the
/// form conj(eta) * (bounded analytic) intertwine the two shifts.
inline CheckReport check_intertwining(const CoeffSeries& psi,
                                      const InnerFunction& eta,
                                      const InnerFunction& theta,
                                      const VerifyContext& ctx,
                                      std::string check_id) {
  const int m = ctx.N, order = ctx.order();
  if (m < 2) throw WindowTooSmall("intertwining: window too small");
  CoeffSeries phi = multiply(transform(eta.expand(order), Transform::Bar), psi);
  AssembleRequest req{OperatorKind::RTO, phi, eta, theta, m, 0, order};
  OperatorMatrix A = assemble(req);
  OperatorMatrix St = compressed_shift(theta, order);
  OperatorMatrix Se = beurling_shift(eta, m, order);
  Eigen::MatrixXcd diff = A.entries * Se.entries - St.entries * A.entries;
  int d = A.rows();
  double resid = detail::frob(diff.block(0, 0, d, m - 1));
  return detail::residual_report(
      std::move(check_id),
      "A S_eta = S_theta A for symbols conj(eta) x analytic", resid,
      ctx.tol_identity, {0, d}, {0, m - 1},
      detail::digest_inputs("intertwining", phi, eta, theta, ctx),
      A.heuristic);
}

/// Converse probe: a symbol certified outside conj(eta) H-infinity must
/// produce a commutator bounded away from zero.
inline CheckReport probe_intertwining(const CoeffSeries& phi,
                                      const RationalSymbol& phi_rational,
                                      const InnerFunction& eta,
                                      const InnerFunction& theta,
                                      const VerifyContext& ctx,
                                      std::string check_id) {
  const int m = ctx.N, order = ctx.order();
  if (m < 2) throw WindowTooSmall("intertwining probe: window too small");
  bool member =
      classify_symbol(phi_rational, eta, theta, SymbolClass::EtaBarHinf);
  AssembleRequest req{OperatorKind::RTO, phi, eta, theta, m, 0, order};
  OperatorMatrix A = assemble(req);
  OperatorMatrix St = compressed_shift(theta, order);
  OperatorMatrix Se = beurling_shift(eta, m, order);
  Eigen::MatrixXcd diff = A.entries * Se.entries - St.entries * A.entries;
  int d = A.rows();
  double norm = detail::frob(diff.block(0, 0, d, m - 1));
  std::string digest = detail::digest_inputs("probe", phi, eta, theta, ctx);
  if (member)
    return detail::residual_report(
        std::move(check_id),
        "intertwining probe: symbol is a member, commutator vanishes", norm,
        ctx.tol_identity, {0, d}, {0, m - 1}, std::move(digest), A.heuristic);
  return detail::separation_report(
      std::move(check_id),
      "intertwining probe: certified non-member keeps the commutator away "
      "from zero",
      norm, ctx.tol_identity, ctx.separation_factor, {0, d}, {0, m - 1},
      std::move(digest), A.heuristic);
}

/// The symbol class whose membership characterizes vanishing of a kind.
inline SymbolClass vanishing_class(OperatorKind k) {
  switch (k) {
    case OperatorKind::RTO: return SymbolClass::EtaBarThetaHinf;
    case OperatorKind::RHO: return SymbolClass::EtaBarHinf;
    case OperatorKind::SRHO: return SymbolClass::EtaBarHinf;
    case OperatorKind::STTO: return SymbolClass::ConstMultThetaBar;
    case OperatorKind::BTTO: return SymbolClass::ConjThetaHinfAndBreve;
    default:
      throw std::invalid_argument(
          "vanishing_class: no vanishing characterization for this kind");
  }
}

/// Assembles the operator and tests the zero/nonzero verdict predicted by
/// the symbol classifier: members must vanish within tolerance,
/// non-members must clear the separation band, anything between is
/// inconclusive.
inline CheckReport check_vanishing(OperatorKind kind, const CoeffSeries& phi,
                                   const RationalSymbol& phi_rational,
                                   const InnerFunction& eta,
                                   const InnerFunction& theta,
                                   const VerifyContext& ctx,
                                   std::string check_id) {
  const int order = ctx.order();
  bool member = classify_symbol(phi_rational, eta, theta, vanishing_class(kind));
  AssembleRequest req{kind, phi, eta, theta, ctx.N, ctx.N, order};
  OperatorMatrix M = assemble(req);
  double norm = detail::frob(M.trusted_block());
  std::ostringstream identity;
  identity << to_string(kind) << " vanishes exactly for symbols of class "
           << to_string(vanishing_class(kind));
  std::string digest = detail::digest_inputs(
      std::string("vanishing_") + to_string(kind), phi, eta, theta, ctx);
  if (member)
    return detail::residual_report(std::move(check_id), identity.str(), norm,
                                   ctx.tol_identity, M.trusted_rows,
                                   M.trusted_cols, std::move(digest),
                                   M.heuristic);
  return detail::separation_report(std::move(check_id), identity.str(), norm,
                                   ctx.tol_identity, ctx.separation_factor,
                                   M.trusted_rows, M.trusted_cols,
                                   std::move(digest), M.heuristic);
}

/// S* and the adjoint of the compressed shift agree on the model window.
inline CheckReport check_backward_shift_restriction(const InnerFunction& theta,
                                                    const VerifyContext& ctx,
                                                    std::string check_id) {
  const int order = ctx.order();
  const int d = theta.degree();
  auto tm = takenaka_malmquist(theta, d, order);
  OperatorMatrix St = compressed_shift(theta, order);
  double resid = 0.0;
  for (int k = 0; k < d; ++k) {
    CoeffSeries lhs = backward_shift_series(tm[static_cast<size_t>(k)]);
    CoeffSeries rhs = CoeffSeries::zero();
    for (int j = 0; j < d; ++j)
      rhs = add(rhs, tm[static_cast<size_t>(j)].scaled(
                         std::conj(St.entries(k, j))));
    resid = std::max(resid, subtract(lhs, rhs).l2_norm());
  }
  return detail::residual_report(
      std::move(check_id),
      "the backward shift preserves the model window and matches the "
      "compressed-shift adjoint",
      resid, ctx.tol_identity, {0, d}, {0, d},
      detail::digest_inputs("backward_shift", CoeffSeries::zero(),
                            InnerFunction::one(), theta, ctx),
      false);
}

}  // namespace hardyops
