#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "hardyops/spaces.hpp"

namespace hardyops {

/// Operators realized by the assembly engine.  The first four are the
/// classical full-space matrices with explicit coefficient formulas; the
/// rest are compressions between the windowed families in BasisKind.
enum class OperatorKind {
  Toeplitz,       // T_phi : H^2 -> H^2
  HankelFlipped,  // H_phi = P J M_phi : H^2 -> H^2
  HankelHat,      // Q M_phi : H^2 -> conj(H^2_0)
  DualToeplitz,   // Q M_phi : conj(H^2_0) -> conj(H^2_0)
  TTO,            // P_theta M_phi on the model space
  THO,            // P_theta J M_phi on the model space
  LittleTHO,      // proj to conj(z K_theta) of M_phi, domain K_theta
  BTHO,           // (I - P_theta) M_phi : K_theta -> conj(H^2_0) + theta H^2
  RTO,            // P_theta M_phi : eta H^2 -> K_theta
  RHO,            // P_theta J M_phi : eta H^2 -> K_theta
  Tau,            // P_{eta H^2} M_phi : K_theta -> eta H^2
  HSmall,         // P_{eta H^2} J M_phi : K_theta -> eta H^2
  STTO,           // (I - proj conj(z K_theta)) M_phi : K_theta -> conj(theta H^2_0) + H^2
  BTTO,           // (I - P_theta) J M_phi : K_theta -> conj(H^2_0) + theta H^2
  SRHO,           // proj to conj(z K_theta) of M_phi : eta H^2 -> conj(z K_theta)
};

inline const char* to_string(OperatorKind k) {
  switch (k) {
    case OperatorKind::Toeplitz: return "toeplitz";
    case OperatorKind::HankelFlipped: return "hankel";
    case OperatorKind::HankelHat: return "hankel_hat";
    case OperatorKind::DualToeplitz: return "dual_toeplitz";
    case OperatorKind::TTO: return "tto";
    case OperatorKind::THO: return "tho";
    case OperatorKind::LittleTHO: return "little_tho";
    case OperatorKind::BTHO: return "btho";
    case OperatorKind::RTO: return "rto";
    case OperatorKind::RHO: return "rho";
    case OperatorKind::Tau: return "tau";
    case OperatorKind::HSmall: return "h_small";
    case OperatorKind::STTO: return "stto";
    case OperatorKind::BTTO: return "btto";
    case OperatorKind::SRHO: return "srho";
  }
  return "?";
}

inline OperatorKind parse_kind(const std::string& s) {
  for (OperatorKind k :
       {OperatorKind::Toeplitz, OperatorKind::HankelFlipped,
        OperatorKind::HankelHat, OperatorKind::DualToeplitz, OperatorKind::TTO,
        OperatorKind::THO, OperatorKind::LittleTHO, OperatorKind::BTHO,
        OperatorKind::RTO, OperatorKind::RHO, OperatorKind::Tau,
        OperatorKind::HSmall, OperatorKind::STTO, OperatorKind::BTTO,
        OperatorKind::SRHO})
    if (s == to_string(k)) return k;
  throw std::invalid_argument("unknown operator kind: " + s);
}

/// T_phi in the monomial basis: entries phi_hat(j - k).
inline OperatorMatrix toeplitz(const CoeffSeries& phi, int rows, int cols) {
  OperatorMatrix m;
  m.entries = Eigen::MatrixXcd(rows, cols);
  for (int j = 0; j < rows; ++j)
    for (int k = 0; k < cols; ++k) m.entries(j, k) = phi.at(j - k);
  m.domain = {BasisSpec{BasisKind::MonomialH2, InnerFunction::one(), cols, 0}};
  m.codomain = {BasisSpec{BasisKind::MonomialH2, InnerFunction::one(), rows, 0}};
  m.entry_error = phi.tail_bound();
  m.trusted_rows = {0, rows};
  m.trusted_cols = {0, cols};
  m.heuristic = phi.sampled();
  return m;
}

enum class HankelVariant {
  Flipped,  // P J M_phi, rows indexed by z^j
  Hat,      // Q M_phi, rows indexed by conj(z)^{j+1}
};

/// Hankel matrix: entries phi_hat(-j-k-1) for both variants; they differ
/// only in the codomain labelling.
inline OperatorMatrix hankel(const CoeffSeries& phi, int rows, int cols,
                             HankelVariant variant = HankelVariant::Flipped) {
  OperatorMatrix m;
  m.entries = Eigen::MatrixXcd(rows, cols);
  for (int j = 0; j < rows; ++j)
    for (int k = 0; k < cols; ++k) m.entries(j, k) = phi.at(-j - k - 1);
  m.domain = {BasisSpec{BasisKind::MonomialH2, InnerFunction::one(), cols, 0}};
  BasisKind ck = variant == HankelVariant::Flipped ? BasisKind::MonomialH2
                                                   : BasisKind::ConjH02;
  m.codomain = {BasisSpec{ck, InnerFunction::one(), rows, 0}};
  m.entry_error = phi.tail_bound();
  m.trusted_rows = {0, rows};
  m.trusted_cols = {0, cols};
  m.heuristic = phi.sampled();
  return m;
}

/// Dual Toeplitz matrix on conj(H^2_0): entries phi_hat(k - j) in the
/// conj(z)^{j+1} labelling.
inline OperatorMatrix dual_toeplitz(const CoeffSeries& phi, int n) {
  OperatorMatrix m;
  m.entries = Eigen::MatrixXcd(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) m.entries(j, k) = phi.at(k - j);
  m.domain = {BasisSpec{BasisKind::ConjH02, InnerFunction::one(), n, 0}};
  m.codomain = m.domain;
  m.entry_error = phi.tail_bound();
  m.trusted_rows = {0, n};
  m.trusted_cols = {0, n};
  m.heuristic = phi.sampled();
  return m;
}

/// Forward shift on the monomial window: ones on the subdiagonal.  The
/// image of the last window vector falls outside the window, so the last
/// column is flagged untrusted.
inline OperatorMatrix forward_shift(int n) {
  OperatorMatrix m;
  m.entries = Eigen::MatrixXcd::Zero(n, n);
  for (int k = 0; k + 1 < n; ++k) m.entries(k + 1, k) = cd(1.0);
  m.domain = {BasisSpec{BasisKind::MonomialH2, InnerFunction::one(), n, 0}};
  m.codomain = m.domain;
  m.trusted_rows = {0, n};
  m.trusted_cols = {0, std::max(n - 1, 0)};
  return m;
}

/// Restriction of the shift to eta H^2 in the eta z^k family: exactly the
/// subdiagonal pattern of forward_shift, for any inner eta.
inline OperatorMatrix beurling_shift(const InnerFunction& eta, int n,
                                     int order) {
  OperatorMatrix m = forward_shift(n);
  m.domain = {BasisSpec{BasisKind::Beurling, eta, n, order}};
  m.codomain = m.domain;
  return m;
}

/// Compression of the shift to the model space in the Takenaka-Malmquist
/// family: entries <z e_k, e_j>.
inline OperatorMatrix compressed_shift(const InnerFunction& theta, int order) {
  const int d = theta.degree();
  auto tm = takenaka_malmquist(theta, d, order);
  OperatorMatrix m;
  m.entries = Eigen::MatrixXcd(d, d);
  double err = 0.0;
  for (int k = 0; k < d; ++k) {
    CoeffSeries img = tm[static_cast<size_t>(k)].shifted(1);
    for (int j = 0; j < d; ++j) {
      auto pr = inner_product(img, tm[static_cast<size_t>(j)]);
      m.entries(j, k) = pr.value;
      err = std::max(err, pr.error);
    }
  }
  m.domain = {BasisSpec{BasisKind::ModelTM, theta, d, order}};
  m.codomain = m.domain;
  m.entry_error = err;
  m.trusted_rows = {0, d};
  m.trusted_cols = {0, d};
  return m;
}

struct AssembleRequest {
  OperatorKind kind = OperatorKind::Toeplitz;
  CoeffSeries phi;
  InnerFunction eta;    // used by RTO / RHO / Tau / HSmall / SRHO
  InnerFunction theta;  // used by every model-space kind
  int domain_size = 0;     // window length for infinite-dimensional domains
  int codomain_size = 0;   // window length per codomain block
  int expansion_order = 0;
};

namespace detail {

inline bool kind_flips(OperatorKind k) {
  return k == OperatorKind::THO || k == OperatorKind::RHO ||
         k == OperatorKind::HSmall || k == OperatorKind::BTTO;
}

inline BasisChain assemble_domain(const AssembleRequest& r) {
  switch (r.kind) {
    case OperatorKind::RTO:
    case OperatorKind::RHO:
    case OperatorKind::SRHO:
      return {BasisSpec{BasisKind::Beurling, r.eta, r.domain_size,
                        r.expansion_order}};
    case OperatorKind::TTO:
    case OperatorKind::THO:
    case OperatorKind::LittleTHO:
    case OperatorKind::BTHO:
    case OperatorKind::Tau:
    case OperatorKind::HSmall:
    case OperatorKind::STTO:
    case OperatorKind::BTTO:
      return {BasisSpec{BasisKind::ModelTM, r.theta, r.theta.degree(),
                        r.expansion_order}};
    default:
      throw std::invalid_argument("assemble: kind has an explicit constructor");
  }
}

inline BasisChain assemble_codomain(const AssembleRequest& r) {
  switch (r.kind) {
    case OperatorKind::TTO:
    case OperatorKind::THO:
    case OperatorKind::RTO:
    case OperatorKind::RHO:
      return {BasisSpec{BasisKind::ModelTM, r.theta, r.theta.degree(),
                        r.expansion_order}};
    case OperatorKind::LittleTHO:
    case OperatorKind::SRHO:
      return {BasisSpec{BasisKind::ConjModel, r.theta, r.theta.degree(),
                        r.expansion_order}};
    case OperatorKind::Tau:
    case OperatorKind::HSmall:
      return {BasisSpec{BasisKind::Beurling, r.eta, r.codomain_size,
                        r.expansion_order}};
    case OperatorKind::BTHO:
    case OperatorKind::BTTO:
      return {BasisSpec{BasisKind::ConjH02, InnerFunction::one(),
                        r.codomain_size, r.expansion_order},
              BasisSpec{BasisKind::Beurling, r.theta, r.codomain_size,
                        r.expansion_order}};
    case OperatorKind::STTO:
      return {BasisSpec{BasisKind::ConjBeurlingH02, r.theta, r.codomain_size,
                        r.expansion_order},
              BasisSpec{BasisKind::MonomialH2, InnerFunction::one(),
                        r.codomain_size, r.expansion_order}};
    default:
      throw std::invalid_argument("assemble: kind has an explicit constructor");
  }
}

}  // namespace detail

/// Assembles the matrix of a compression P_W (flip?) M_phi between two of
/// the windowed families.  Since every codomain family is an orthonormal
/// basis of the projection target, <P_W g, w> = <g, w> and each entry
/// reduces to a multiply, an optional index flip and a pairing.
inline OperatorMatrix assemble(const AssembleRequest& r) {
  switch (r.kind) {
    case OperatorKind::Toeplitz:
      return toeplitz(r.phi, r.codomain_size, r.domain_size);
    case OperatorKind::HankelFlipped:
      return hankel(r.phi, r.codomain_size, r.domain_size,
                    HankelVariant::Flipped);
    case OperatorKind::HankelHat:
      return hankel(r.phi, r.codomain_size, r.domain_size, HankelVariant::Hat);
    case OperatorKind::DualToeplitz:
      return dual_toeplitz(r.phi, r.domain_size);
    default:
      break;
  }
  BasisChain dch = detail::assemble_domain(r);
  BasisChain cch = detail::assemble_codomain(r);
  auto dvec = materialize(dch);
  auto cvec = materialize(cch);
  const bool flip = detail::kind_flips(r.kind);
  OperatorMatrix m;
  m.entries = Eigen::MatrixXcd(static_cast<int>(cvec.size()),
                               static_cast<int>(dvec.size()));
  double err = 0.0;
  bool sampled = r.phi.sampled();
  for (size_t k = 0; k < dvec.size(); ++k) {
    CoeffSeries img = multiply(r.phi, dvec[k]);
    if (flip) img = transform(img, Transform::Flip);
    sampled = sampled || img.sampled();
    for (size_t j = 0; j < cvec.size(); ++j) {
      auto pr = inner_product(img, cvec[j]);
      m.entries(static_cast<int>(j), static_cast<int>(k)) = pr.value;
      err = std::max(err, pr.error);
    }
  }
  for (const auto& c : cvec) sampled = sampled || c.sampled();
  m.domain = std::move(dch);
  m.codomain = std::move(cch);
  m.entry_error = err;
  m.trusted_rows = {0, m.rows()};
  m.trusted_cols = {0, m.cols()};
  m.heuristic = sampled;
  return m;
}

/// Matrix of h -> <h, v> u between the given families.  The right slot is
/// conjugate-linear: coordinates of v enter conjugated.
inline OperatorMatrix rank_one(const CoeffSeries& u, const CoeffSeries& v,
                               const BasisChain& domain,
                               const BasisChain& codomain) {
  auto dvec = materialize(domain);
  auto cvec = materialize(codomain);
  Eigen::VectorXcd uc(static_cast<int>(cvec.size()));
  Eigen::VectorXcd vc(static_cast<int>(dvec.size()));
  double uerr = 0.0, verr = 0.0;
  for (size_t j = 0; j < cvec.size(); ++j) {
    auto pr = inner_product(u, cvec[j]);
    uc(static_cast<int>(j)) = pr.value;
    uerr = std::max(uerr, pr.error);
  }
  for (size_t k = 0; k < dvec.size(); ++k) {
    auto pr = inner_product(v, dvec[k]);
    vc(static_cast<int>(k)) = pr.value;
    verr = std::max(verr, pr.error);
  }
  OperatorMatrix m;
  m.entries = uc * vc.adjoint();
  m.domain = domain;
  m.codomain = codomain;
  double umax = uc.size() ? uc.cwiseAbs().maxCoeff() : 0.0;
  double vmax = vc.size() ? vc.cwiseAbs().maxCoeff() : 0.0;
  m.entry_error = uerr * vmax + verr * umax + uerr * verr;
  m.trusted_rows = {0, m.rows()};
  m.trusted_cols = {0, m.cols()};
  m.heuristic = u.sampled() || v.sampled();
  return m;
}

struct SpectralSummary {
  std::vector<double> singular_values;  // decreasing
  int numerical_rank = 0;
};

/// Singular values of the trusted block and the count above
/// max(tol_rank * sigma_max, noise_floor).
inline SpectralSummary spectral(const OperatorMatrix& m, double tol_rank = 1e-8,
                                double noise_floor = 0.0) {
  SpectralSummary out;
  Eigen::MatrixXcd block = m.trusted_block();
  if (block.rows() == 0 || block.cols() == 0) return out;
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(block);
  const auto& sv = svd.singularValues();
  out.singular_values.assign(sv.data(), sv.data() + sv.size());
  double smax = out.singular_values.empty() ? 0.0 : out.singular_values.front();
  if (smax <= 0.0) return out;
  double cut = std::max(tol_rank * smax, noise_floor);
  for (double s : out.singular_values)
    if (s > cut) ++out.numerical_rank;
  return out;
}

}  // namespace hardyops
