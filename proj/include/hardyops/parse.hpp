#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hardyops/inner.hpp"
#include "hardyops/rational.hpp"

namespace hardyops {

struct ParseError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline std::string trimmed(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline bool strip_prefix(std::string& s, const std::string& prefix) {
  if (s.rfind(prefix, 0) != 0) return false;
  s = trimmed(s.substr(prefix.size()));
  return true;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  for (size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(trimmed(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

/// Reads a double at `pos` via strtod; returns nullopt when nothing parses.
inline std::optional<double> read_double(const std::string& s, size_t& pos) {
  if (pos >= s.size()) return std::nullopt;
  const char* start = s.c_str() + pos;
  char* end = nullptr;
  double v = std::strtod(start, &end);
  if (end == start) return std::nullopt;
  pos += size_t(end - start);
  return v;
}

}  // namespace detail

/// Complex literal: `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i` with decimal or
/// scientific parts.
inline cd parse_complex(const std::string& raw) {
  std::string s = detail::trimmed(raw);
  if (s.empty()) throw ParseError("empty complex literal");
  size_t pos = 0;
  auto bare_i = [&](double& out) {  // [+-]? i
    size_t p = pos;
    double sign = 1.0;
    if (p < s.size() && (s[p] == '+' || s[p] == '-'))
      sign = s[p++] == '-' ? -1.0 : 1.0;
    if (p < s.size() && s[p] == 'i') {
      out = sign;
      pos = p + 1;
      return true;
    }
    return false;
  };
  double re = 0.0, im = 0.0;
  double unit;
  if (bare_i(unit)) {
    im = unit;
  } else {
    std::optional<double> first = detail::read_double(s, pos);
    if (!first) throw ParseError("bad complex literal: " + raw);
    if (pos < s.size() && s[pos] == 'i') {
      im = *first;
      ++pos;
    } else {
      re = *first;
      if (pos < s.size()) {
        if (bare_i(unit)) {
          im = unit;
        } else {
          std::optional<double> second = detail::read_double(s, pos);
          if (!second || pos >= s.size() || s[pos] != 'i')
            throw ParseError("bad complex literal: " + raw);
          im = *second;
          ++pos;
        }
      }
    }
  }
  if (pos != s.size()) throw ParseError("trailing junk in complex literal: " + raw);
  return cd(re, im);
}

/// Laurent spec `lo:c_lo,c_{lo+1},...` (an optional `laurent:` prefix is
/// accepted and stripped).
inline CoeffSeries parse_laurent(const std::string& raw) {
  std::string s = detail::trimmed(raw);
  detail::strip_prefix(s, "laurent:");
  size_t colon = s.find(':');
  if (colon == std::string::npos)
    throw ParseError("laurent spec needs lo:coeffs, got: " + raw);
  std::string head = detail::trimmed(s.substr(0, colon));
  int lo = 0;
  try {
    size_t used = 0;
    lo = std::stoi(head, &used);
    if (used != head.size()) throw ParseError("");
  } catch (...) {
    throw ParseError("bad laurent start index: " + head);
  }
  std::vector<cd> coeffs;
  for (const std::string& tok : detail::split(s.substr(colon + 1), ','))
    coeffs.push_back(parse_complex(tok));
  if (coeffs.empty()) throw ParseError("laurent spec has no coefficients");
  return CoeffSeries(lo, std::move(coeffs));
}

namespace detail {

/// Polynomial in z: sum of terms `[coeff][z[^k]]`, coefficient a real or
/// imaginary literal or a parenthesized complex literal, juxtaposed with
/// the monomial (`0.5z`, `(1+2i)z^3`, `z^2`, `-3`).
inline Poly parse_poly(const std::string& raw) {
  std::string s = trimmed(raw);
  if (s.empty()) throw ParseError("empty polynomial");
  Poly acc;
  size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
      ++pos;
  };
  bool first = true;
  while (true) {
    skip_ws();
    if (pos == s.size()) {
      if (first) throw ParseError("empty polynomial");
      break;
    }
    double sign = 1.0;
    if (s[pos] == '+' || s[pos] == '-') {
      sign = s[pos] == '-' ? -1.0 : 1.0;
      ++pos;
      skip_ws();
    } else if (!first) {
      throw ParseError("expected + or - between terms: " + raw);
    }
    cd coeff(1.0);
    bool have_coeff = false;
    if (pos < s.size() && s[pos] == '(') {
      size_t close = s.find(')', pos);
      if (close == std::string::npos) throw ParseError("unbalanced ( in " + raw);
      coeff = parse_complex(s.substr(pos + 1, close - pos - 1));
      pos = close + 1;
      have_coeff = true;
    } else if (pos < s.size() &&
               (std::isdigit(static_cast<unsigned char>(s[pos])) ||
                s[pos] == '.')) {
      std::optional<double> d = read_double(s, pos);
      if (!d) throw ParseError("bad coefficient in " + raw);
      coeff = cd(*d);
      if (pos < s.size() && s[pos] == 'i') {
        coeff = cd(0.0, *d);
        ++pos;
      }
      have_coeff = true;
    } else if (pos < s.size() && s[pos] == 'i' &&
               (pos + 1 == s.size() || s[pos + 1] != 'z')) {
      // a lone imaginary unit; `iz` is not accepted, write 1iz or (0+1i)z
      coeff = cd(0.0, 1.0);
      ++pos;
      have_coeff = true;
    }
    skip_ws();
    if (pos < s.size() && s[pos] == '*') {  // optional explicit product
      ++pos;
      skip_ws();
    }
    int power = 0;
    if (pos < s.size() && s[pos] == 'z') {
      ++pos;
      power = 1;
      if (pos < s.size() && s[pos] == '^') {
        ++pos;
        size_t start = pos;
        while (pos < s.size() &&
               std::isdigit(static_cast<unsigned char>(s[pos])))
          ++pos;
        if (pos == start) throw ParseError("missing exponent in " + raw);
        power = std::stoi(s.substr(start, pos - start));
      }
    } else if (!have_coeff) {
      throw ParseError("expected term at '" + s.substr(pos) + "' in " + raw);
    }
    acc = acc + Poly::monomial(power, coeff * sign);
    first = false;
  }
  return acc;
}

}  // namespace detail

/// Rational spec `(num)/(den)`; a bare polynomial (with or without
/// parentheses) is treated as `(p)/(1)`.  An optional `rational:` prefix is
/// accepted and stripped.
inline RationalSymbol parse_rational(const std::string& raw) {
  std::string s = detail::trimmed(raw);
  detail::strip_prefix(s, "rational:");
  if (s.empty()) throw ParseError("empty rational spec");
  if (s.front() == '(') {
    // find the close matching the leading open; parens only nest around
    // complex coefficients, one level deep
    int depth = 0;
    size_t close = std::string::npos;
    for (size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '(') ++depth;
      if (s[i] == ')' && --depth == 0) {
        close = i;
        break;
      }
    }
    if (close == std::string::npos) throw ParseError("unbalanced ( in " + raw);
    std::string rest = detail::trimmed(s.substr(close + 1));
    if (!rest.empty()) {
      if (rest.front() != '/')
        throw ParseError("expected / after numerator in " + raw);
      rest = detail::trimmed(rest.substr(1));
      if (rest.size() < 2 || rest.front() != '(' || rest.back() != ')')
        throw ParseError("expected (denominator) in " + raw);
      return RationalSymbol(detail::parse_poly(s.substr(1, close - 1)),
                            detail::parse_poly(rest.substr(1, rest.size() - 2)));
    }
    return RationalSymbol::from_poly(detail::parse_poly(s.substr(1, close - 1)));
  }
  return RationalSymbol::from_poly(detail::parse_poly(s));
}

namespace detail {

/// `atom@...` tokens may ride after a zero with only whitespace between
/// them; peel those off so both `a, atom@t:m` and `a atom@t:m` parse.
inline std::vector<std::string> split_atom_suffixes(const std::string& tok) {
  std::vector<size_t> cuts;
  size_t pos = tok.find("atom@");
  while (pos != std::string::npos) {
    if (pos > 0 && std::isspace(static_cast<unsigned char>(tok[pos - 1])))
      cuts.push_back(pos);
    pos = tok.find("atom@", pos + 5);
  }
  std::vector<std::string> out;
  size_t start = 0;
  for (size_t c : cuts) {
    std::string piece = trimmed(tok.substr(start, c - start));
    if (!piece.empty()) out.push_back(piece);
    start = c;
  }
  std::string last = trimmed(tok.substr(start));
  if (!last.empty()) out.push_back(last);
  return out;
}

}  // namespace detail

/// Inner-function spec: `blaschke: a1,a2,...` where each token is either a
/// complex zero or `atom@angle:mass`; an empty list is the constant 1.
inline InnerFunction parse_inner(const std::string& raw) {
  std::string s = detail::trimmed(raw);
  if (s.empty() || s == "one" || s == "1") return InnerFunction::one();
  if (!detail::strip_prefix(s, "blaschke:"))
    throw ParseError("inner spec must start with blaschke: got " + raw);
  if (s.empty()) return InnerFunction::one();
  std::vector<std::string> tokens;
  for (const std::string& chunk : detail::split(s, ','))
    for (std::string& piece : detail::split_atom_suffixes(chunk))
      tokens.push_back(std::move(piece));
  std::vector<cd> zeros;
  std::vector<SingularAtom> atoms;
  for (const std::string& tok : tokens) {
    if (tok.rfind("atom@", 0) == 0) {
      std::string body = tok.substr(5);
      size_t colon = body.find(':');
      if (colon == std::string::npos)
        throw ParseError("atom token needs angle:mass, got " + tok);
      size_t p1 = 0, p2 = 0;
      std::string a = detail::trimmed(body.substr(0, colon));
      std::string m = detail::trimmed(body.substr(colon + 1));
      std::optional<double> angle = detail::read_double(a, p1);
      std::optional<double> mass = detail::read_double(m, p2);
      if (!angle || p1 != a.size() || !mass || p2 != m.size())
        throw ParseError("bad atom token: " + tok);
      atoms.push_back(SingularAtom{*angle, *mass});
    } else {
      zeros.push_back(parse_complex(tok));
    }
  }
  try {
    return InnerFunction(cd(1.0), std::move(zeros), std::move(atoms));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

/// A parsed symbol: the certified series channel, the rational channel when
/// the grammar provides one, and a boundary evaluator.
struct ParsedSymbol {
  std::string text;
  CoeffSeries series;
  std::optional<RationalSymbol> rational;
  std::function<cd(cd)> eval;
};

/// `laurent: lo:coeffs` or `rational: (num)/(den)`; the series channel is
/// expanded on [-order, order] for rational symbols and is exact for
/// Laurent ones.
inline ParsedSymbol parse_symbol(const std::string& raw, int order) {
  std::string s = detail::trimmed(raw);
  ParsedSymbol out;
  out.text = s;
  if (s.rfind("laurent:", 0) == 0) {
    CoeffSeries f = parse_laurent(s);
    out.series = f;
    int shift = std::max(0, -f.lo());
    Poly num;
    for (int n = f.lo(); n <= f.hi(); ++n)
      num = num + Poly::monomial(n + shift, f.at(n));
    out.rational = RationalSymbol(num, Poly::monomial(shift));
    out.eval = [f](cd z) {
      cd acc(0.0);
      for (int n = f.lo(); n <= f.hi(); ++n)
        acc += f.at(n) * std::pow(z, double(n));
      return acc;
    };
    return out;
  }
  if (s.rfind("rational:", 0) == 0) {
    try {
      RationalSymbol r = parse_rational(s);
      out.series = rational_to_series(r, order);
      out.rational = r;
      out.eval = [r](cd z) { return r.eval(z); };
    } catch (const NoCircleAnnulus& e) {
      // a pole on the unit circle is a spec error, not an assembly failure
      throw ParseError(e.what());
    }
    return out;
  }
  throw ParseError("symbol spec must start with laurent: or rational:, got " +
                   raw);
}

}  // namespace hardyops
