#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hardyops/suites.hpp"

namespace hardyops {

using ojson = nlohmann::ordered_json;

inline ojson to_json(const IndexRange& r) {
  return ojson::array({r.begin, r.end});
}

inline ojson to_json(const CheckReport& r, std::uint64_t seed) {
  ojson j = ojson::object();
  j["check_id"] = r.check_id;
  j["identity"] = r.identity;
  j["residual"] = r.residual;
  j["threshold"] = r.threshold;
  j["passed"] = r.passed;
  j["verdict"] = to_string(r.verdict);
  j["status"] = to_string(r.status);
  j["trusted_rows"] = to_json(r.trusted_rows);
  j["trusted_cols"] = to_json(r.trusted_cols);
  j["inputs_digest"] = r.inputs_digest;
  j["observed_norm"] = r.observed_norm;
  j["seed"] = seed;
  return j;
}

inline ojson to_json(const RankStudyReport& s, std::uint64_t seed) {
  ojson j = ojson::object();
  j["study_id"] = s.study_id;
  j["kind"] = to_string(s.kind);
  j["windows"] = s.windows;
  j["ranks"] = s.ranks;
  ojson sv = ojson::array();
  for (const auto& tops : s.top_singulars) sv.push_back(tops);
  j["top_singular_values"] = sv;
  j["verdict"] = s.verdict;
  j["status"] = to_string(s.status);
  j["notes"] = s.notes;
  j["inputs_digest"] = s.inputs_digest;
  j["seed"] = seed;
  return j;
}

/// Suite output: a JSON array, one object per check (plus one per rank
/// study when the suite ran any).
inline ojson suite_to_json(const SuiteResult& s) {
  ojson arr = ojson::array();
  for (const CheckReport& r : s.reports) arr.push_back(to_json(r, s.seed));
  for (const RankStudyReport& st : s.studies)
    arr.push_back(to_json(st, s.seed));
  return arr;
}

/// One human-readable line per check, for stderr.
inline std::string suite_summary(const SuiteResult& s) {
  std::ostringstream os;
  for (const CheckReport& r : s.reports) {
    os << to_string(r.verdict) << " " << to_string(r.status) << " "
       << r.check_id << " residual " << format_double(r.residual)
       << " threshold " << format_double(r.threshold) << "\n";
  }
  for (const RankStudyReport& st : s.studies) {
    os << st.verdict << " " << to_string(st.status) << " " << st.study_id
       << " ranks";
    for (int rk : st.ranks) os << " " << rk;
    os << "\n";
  }
  os << s.suite << ": " << s.reports.size() << " checks, " << s.failed
     << " failed, " << s.inconclusive << " inconclusive";
  if (!s.studies.empty()) os << ", " << s.studies.size() << " studies";
  os << "\n";
  return os.str();
}

namespace detail {

inline std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace detail

/// Reports as CSV, same field order as the JSON objects.
inline std::string suite_to_csv(const SuiteResult& s) {
  std::ostringstream os;
  os << "check_id,identity,residual,threshold,passed,verdict,status,"
        "trusted_rows_begin,trusted_rows_end,trusted_cols_begin,"
        "trusted_cols_end,inputs_digest,observed_norm,seed\n";
  for (const CheckReport& r : s.reports) {
    os << r.check_id << "," << detail::csv_quote(r.identity) << ","
       << format_double(r.residual) << "," << format_double(r.threshold)
       << "," << (r.passed ? "true" : "false") << "," << to_string(r.verdict)
       << "," << to_string(r.status) << "," << r.trusted_rows.begin << ","
       << r.trusted_rows.end << "," << r.trusted_cols.begin << ","
       << r.trusted_cols.end << "," << r.inputs_digest << ","
       << format_double(r.observed_norm) << "," << s.seed << "\n";
  }
  return os.str();
}

/// Matrix CSV: row-major, each entry written as `re,im`.
inline std::string matrix_to_csv(const Eigen::MatrixXcd& m) {
  std::ostringstream os;
  for (Eigen::Index j = 0; j < m.rows(); ++j) {
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      if (k) os << ",";
      os << format_double(m(j, k).real()) << ","
         << format_double(m(j, k).imag());
    }
    os << "\n";
  }
  return os.str();
}

inline ojson to_json(const BasisSpec& spec) {
  ojson j = ojson::object();
  j["kind"] = to_string(spec.kind);
  j["size"] = spec.size;
  j["inner"] = spec.inner.to_text();
  return j;
}

inline ojson to_json(const BasisChain& chain) {
  ojson arr = ojson::array();
  for (const BasisSpec& s : chain) arr.push_back(to_json(s));
  return arr;
}

/// Sidecar for a matrix dump: bases, sizes, entry error, and the trusted
/// windows.
inline ojson matrix_sidecar(const OperatorMatrix& m) {
  ojson j = ojson::object();
  j["rows"] = int(m.rows());
  j["cols"] = int(m.cols());
  j["domain"] = to_json(m.domain);
  j["codomain"] = to_json(m.codomain);
  j["entry_error"] = m.entry_error;
  j["trusted_rows"] = to_json(m.trusted_rows);
  j["trusted_cols"] = to_json(m.trusted_cols);
  j["status"] = to_string(m.heuristic ? CheckStatus::Heuristic
                                      : CheckStatus::Certified);
  return j;
}

/// Basis dump: one row per basis vector; the first line names the shared
/// coefficient window, each following row is that vector's `re,im` pairs
/// over the window.
inline std::string basis_to_csv(const std::vector<CoeffSeries>& basis) {
  int lo = 0, hi = -1;
  bool any = false;
  for (const CoeffSeries& v : basis) {
    if (v.is_zero()) continue;
    if (!any) {
      lo = v.lo();
      hi = v.hi();
      any = true;
    } else {
      lo = std::min(lo, v.lo());
      hi = std::max(hi, v.hi());
    }
  }
  std::ostringstream os;
  os << "index_lo," << lo << ",index_hi," << hi << "\n";
  for (const CoeffSeries& v : basis) {
    for (int n = lo; n <= hi; ++n) {
      if (n > lo) os << ",";
      cd c = v.at(n);
      os << format_double(c.real()) << "," << format_double(c.imag());
    }
    os << "\n";
  }
  return os.str();
}

/// Rank-study CSV: `window,rank,sv1..sv8` rows and a final verdict line.
inline std::string study_to_csv(const RankStudyReport& s) {
  std::ostringstream os;
  os << "window,rank";
  size_t width = 0;
  for (const auto& tops : s.top_singulars) width = std::max(width, tops.size());
  for (size_t i = 0; i < width; ++i) os << ",sv" << (i + 1);
  os << "\n";
  for (size_t w = 0; w < s.windows.size(); ++w) {
    os << s.windows[w] << "," << s.ranks[w];
    const auto& tops = s.top_singulars[w];
    for (size_t i = 0; i < width; ++i) {
      os << ",";
      if (i < tops.size()) os << format_double(tops[i]);
    }
    os << "\n";
  }
  os << "verdict," << s.verdict << "\n";
  return os.str();
}

inline void write_text_file(const std::string& path,
                            const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

/// Serializes with a stable layout (2-space indent, '\n' line ends).
inline std::string json_text(const ojson& j) { return j.dump(2) + "\n"; }

}  // namespace hardyops
