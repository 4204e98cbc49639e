#pragma once

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "hardyops/series.hpp"

namespace hardyops {

namespace detail {

/// DFT coefficients of f sampled at the 2^m roots of unity rotated by
/// `offset` grid steps: nodes exp(2 pi i (k + offset) / 2^m).  The offset
/// keeps the grid away from boundary singularities at grid points.
inline std::vector<cd> sampled_coeffs(const std::function<cd(cd)>& f, int m,
                                      double offset) {
  const int M = 1 << m;
  const double twopi = 2.0 * std::numbers::pi;
  std::vector<cd> values(static_cast<size_t>(M));
  for (int k = 0; k < M; ++k)
    values[static_cast<size_t>(k)] =
        f(std::polar(1.0, twopi * (double(k) + offset) / double(M)));
  Eigen::FFT<double> fft;
  std::vector<cd> freq;
  fft.fwd(freq, values);
  // freq[j] = sum_k values[k] exp(-2 pi i j k / M); absorb the grid offset
  // phase and divide by M.
  std::vector<cd> out(static_cast<size_t>(M));
  for (int j = 0; j < M; ++j) {
    int n = (j < M / 2) ? j : j - M;  // signed frequency
    cd phase = std::polar(1.0, -twopi * offset * double(n) / double(M));
    out[static_cast<size_t>(j)] = freq[static_cast<size_t>(j)] * phase / cd(double(M));
  }
  return out;
}

}  // namespace detail

/// Approximate Laurent coefficients of a boundary evaluator from samples at
/// the 2^m-point rotated grid, on the window [-2^(m-1), 2^(m-1) - 1].
///
/// The tail bound is a heuristic, not a certificate: it is the l1
/// difference between the 2^m- and 2^(m+1)-point expansions on the shared
/// window, which estimates the aliasing error.  The result is flagged
/// `sampled` and everything downstream of it reports HEURISTIC status.
inline CoeffSeries sample_expand(const std::function<cd(cd)>& f, int m,
                                 double offset = 0.5) {
  if (m < 2 || m > 22) throw std::invalid_argument("sample_expand: bad m");
  const int M = 1 << m;
  std::vector<cd> coarse = detail::sampled_coeffs(f, m, offset);
  std::vector<cd> fine = detail::sampled_coeffs(f, m + 1, offset);
  double diff = 0.0;
  auto get = [](const std::vector<cd>& c, int n) {
    const int sz = static_cast<int>(c.size());
    int j = n >= 0 ? n : n + sz;
    return c[static_cast<size_t>(j)];
  };
  std::vector<cd> window(static_cast<size_t>(M));
  for (int n = -M / 2; n < M / 2; ++n) {
    cd a = get(coarse, n), b = get(fine, n);
    diff += std::abs(a - b);
    window[static_cast<size_t>(n + M / 2)] = a;
  }
  return CoeffSeries(-M / 2, std::move(window), diff, true);
}

}  // namespace hardyops
