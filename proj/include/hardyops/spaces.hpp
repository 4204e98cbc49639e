#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hardyops/inner.hpp"
#include "hardyops/series.hpp"

namespace hardyops {

/// Concrete orthonormal families materialized as coefficient windows.
///   MonomialH2      z^k                      (H^2)
///   Beurling        eta z^k                  (eta H^2)
///   ModelTM         Takenaka-Malmquist ladder (H^2 (-) theta H^2)
///   ConjModel       conj(z) conj(e_k(z))     (image of ModelTM under V)
///   ConjH02         conj(z)^{k+1}            (conj(H^2_0))
///   ConjBeurlingH02 conj(theta) conj(z)^{k+1}
enum class BasisKind {
  MonomialH2,
  Beurling,
  ModelTM,
  ConjModel,
  ConjH02,
  ConjBeurlingH02,
};

inline const char* to_string(BasisKind k) {
  switch (k) {
    case BasisKind::MonomialH2: return "monomial_h2";
    case BasisKind::Beurling: return "beurling";
    case BasisKind::ModelTM: return "model_tm";
    case BasisKind::ConjModel: return "conj_model";
    case BasisKind::ConjH02: return "conj_h02";
    case BasisKind::ConjBeurlingH02: return "conj_beurling_h02";
  }
  return "?";
}

struct BasisSpec {
  BasisKind kind = BasisKind::MonomialH2;
  InnerFunction inner;  // ignored by MonomialH2 / ConjH02
  int size = 0;
  int expansion_order = 0;

  /// Identity of the subspace and family; the expansion order is a
  /// numerical knob and does not participate.
  friend bool operator==(const BasisSpec& a, const BasisSpec& b) {
    bool needs_inner = !(a.kind == BasisKind::MonomialH2 ||
                         a.kind == BasisKind::ConjH02);
    return a.kind == b.kind && a.size == b.size &&
           (!needs_inner || a.inner == b.inner);
  }
};

/// Ordered block structure of a domain or codomain; most operators use a
/// single entry, the half-space compressions use two.
using BasisChain = std::vector<BasisSpec>;

inline bool chains_equal(const BasisChain& a, const BasisChain& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (!(a[i] == b[i])) return false;
  return true;
}

inline int chain_size(const BasisChain& c) {
  int n = 0;
  for (const auto& s : c) n += s.size;
  return n;
}

/// Takenaka-Malmquist ladder for the zero sequence of theta:
///   e_k = sqrt(1-|a_k|^2)/(1 - conj(a_k) z) * prod_{j<k} (z-a_j)/(1-conj(a_j) z),
/// orthonormal, spanning H^2 (-) theta H^2.  Repeated zeros use the same
/// formula verbatim.  Requires a finite Blaschke product.
inline std::vector<CoeffSeries> takenaka_malmquist(const InnerFunction& theta,
                                                   int count, int order) {
  if (!theta.is_finite_blaschke())
    throw NotFiniteBlaschke("takenaka_malmquist: atoms present");
  if (count > theta.degree())
    throw std::invalid_argument(
        "takenaka_malmquist: count exceeds Blaschke degree");
  std::vector<CoeffSeries> out;
  out.reserve(static_cast<size_t>(count));
  CoeffSeries prefix = CoeffSeries::constant(cd(1.0));
  const auto& zeros = theta.zeros();
  for (int k = 0; k < count; ++k) {
    cd a = zeros[static_cast<size_t>(k)];
    double norm = std::sqrt(1.0 - std::norm(a));
    CoeffSeries kernel =
        geometric_series(std::conj(a), order).scaled(cd(norm));
    out.push_back(multiply(prefix, kernel).windowed(0, order));
    prefix = multiply(prefix, blaschke_factor_series(a, order)).windowed(0, order);
  }
  return out;
}

inline std::vector<CoeffSeries> materialize(const BasisSpec& spec) {
  std::vector<CoeffSeries> out;
  out.reserve(static_cast<size_t>(std::max(spec.size, 0)));
  const int order = spec.expansion_order;
  switch (spec.kind) {
    case BasisKind::MonomialH2:
      for (int k = 0; k < spec.size; ++k)
        out.push_back(CoeffSeries::monomial(k));
      break;
    case BasisKind::ConjH02:
      for (int k = 0; k < spec.size; ++k)
        out.push_back(CoeffSeries::monomial(-k - 1));
      break;
    case BasisKind::Beurling: {
      CoeffSeries eta = spec.inner.expand(order);
      for (int k = 0; k < spec.size; ++k) out.push_back(eta.shifted(k));
      break;
    }
    case BasisKind::ConjBeurlingH02: {
      CoeffSeries bar = transform(spec.inner.expand(order), Transform::Bar);
      for (int k = 0; k < spec.size; ++k) out.push_back(bar.shifted(-k - 1));
      break;
    }
    case BasisKind::ModelTM:
      out = takenaka_malmquist(spec.inner, spec.size, order);
      break;
    case BasisKind::ConjModel: {
      auto tm = takenaka_malmquist(spec.inner, spec.size, order);
      for (auto& e : tm) out.push_back(transform(e, Transform::VFlip));
      break;
    }
  }
  return out;
}

inline std::vector<CoeffSeries> materialize(const BasisChain& chain) {
  std::vector<CoeffSeries> out;
  for (const auto& spec : chain) {
    auto part = materialize(spec);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

inline Eigen::MatrixXcd gram(const std::vector<CoeffSeries>& vectors) {
  const int n = static_cast<int>(vectors.size());
  Eigen::MatrixXcd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      g(i, j) = inner_product(vectors[static_cast<size_t>(i)],
                              vectors[static_cast<size_t>(j)])
                    .value;
  return g;
}

struct IndexRange {
  int begin = 0;
  int end = 0;  // half-open
  int size() const { return end - begin; }
};

/// A finite matrix of an operator between two windowed orthonormal
/// families, with provenance: which entries are trusted, how large the
/// truncation error of any single entry can be, and whether any input was
/// only known through boundary sampling.
struct OperatorMatrix {
  Eigen::MatrixXcd entries;
  BasisChain domain, codomain;
  double entry_error = 0.0;
  IndexRange trusted_rows, trusted_cols;
  bool heuristic = false;

  int rows() const { return static_cast<int>(entries.rows()); }
  int cols() const { return static_cast<int>(entries.cols()); }

  Eigen::MatrixXcd trusted_block() const {
    return entries.block(trusted_rows.begin, trusted_cols.begin,
                         trusted_rows.size(), trusted_cols.size());
  }
};

inline OperatorMatrix compose(const OperatorMatrix& outer,
                              const OperatorMatrix& inner) {
  if (!chains_equal(outer.domain, inner.codomain))
    throw std::invalid_argument("compose: basis mismatch");
  OperatorMatrix m;
  m.entries = outer.entries * inner.entries;
  m.domain = inner.domain;
  m.codomain = outer.codomain;
  // crude but safe: each product entry mixes whole rows/columns
  double inner_scale =
      inner.entries.size() ? inner.entries.cwiseAbs().maxCoeff() : 0.0;
  double outer_scale =
      outer.entries.size() ? outer.entries.cwiseAbs().maxCoeff() : 0.0;
  m.entry_error = outer.entry_error * inner_scale * inner.cols() +
                  inner.entry_error * outer_scale * outer.cols() +
                  outer.entry_error * inner.entry_error * outer.cols();
  m.trusted_rows = outer.trusted_rows;
  m.trusted_cols = inner.trusted_cols;
  m.heuristic = outer.heuristic || inner.heuristic;
  return m;
}

inline OperatorMatrix adjoint_of(const OperatorMatrix& a) {
  OperatorMatrix m;
  m.entries = a.entries.adjoint();
  m.domain = a.codomain;
  m.codomain = a.domain;
  m.entry_error = a.entry_error;
  m.trusted_rows = a.trusted_cols;
  m.trusted_cols = a.trusted_rows;
  m.heuristic = a.heuristic;
  return m;
}

/// Matrix of the orthogonal projection of H^2 onto H^2 (-) theta H^2 in the
/// monomial basis, on the window [0, N]: the identity minus the analytic
/// multiplication-compression product.  The triangular structure of the two
/// factors makes the windowed product exact; only the expansion tail of
/// theta itself contributes to entry_error.
inline OperatorMatrix model_projection_matrix(const InnerFunction& theta,
                                              int N, int order = -1) {
  if (N < 0) throw WindowTooSmall("model_projection_matrix: N < 0");
  if (order < N) order = N;
  CoeffSeries th = theta.expand(order);
  const int n = N + 1;
  Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k <= j; ++k) t(j, k) = th.at(j - k);
  OperatorMatrix m;
  m.entries = Eigen::MatrixXcd::Identity(n, n) - t * t.adjoint();
  m.domain = {BasisSpec{BasisKind::MonomialH2, InnerFunction::one(), n, order}};
  m.codomain = m.domain;
  double l1 = th.abs_sum(), tb = th.tail_bound();
  m.entry_error = tb * (2.0 * l1 + tb);
  m.trusted_rows = {0, n};
  m.trusted_cols = {0, n};
  m.heuristic = th.sampled();
  return m;
}

/// Matrix of the orthogonal projection of conj(H^2_0) onto conj(z (H^2 (-)
/// theta H^2)) in the conjugate-monomial basis conj(z)^{j+1}, j = 0..N.
/// Entries: delta_{jk} - sum_{m=1..min(j,k)+1} conj(th(j+1-m)) th(k+1-m).
inline OperatorMatrix conj_model_projection_matrix(const InnerFunction& theta,
                                                   int N, int order = -1) {
  if (N < 0) throw WindowTooSmall("conj_model_projection_matrix: N < 0");
  if (order < N + 1) order = N + 1;
  CoeffSeries th = theta.expand(order);
  const int n = N + 1;
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      cd s(0.0);
      int top = std::min(j, k) + 1;
      for (int mm = 1; mm <= top; ++mm)
        s += std::conj(th.at(j + 1 - mm)) * th.at(k + 1 - mm);
      p(j, k) = (j == k ? cd(1.0) : cd(0.0)) - s;
    }
  }
  OperatorMatrix m;
  m.entries = std::move(p);
  m.domain = {BasisSpec{BasisKind::ConjH02, InnerFunction::one(), n, order}};
  m.codomain = m.domain;
  double l1 = th.abs_sum(), tb = th.tail_bound();
  m.entry_error = tb * (2.0 * l1 + tb);
  m.trusted_rows = {0, n};
  m.trusted_cols = {0, n};
  m.heuristic = th.sampled();
  return m;
}

}  // namespace hardyops
