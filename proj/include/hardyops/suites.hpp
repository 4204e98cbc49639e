#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "hardyops/classify.hpp"
#include "hardyops/decompositions.hpp"

namespace hardyops {

/// Deterministic random source.  Only the raw mt19937_64 stream is used, so
/// the draws are identical across standard libraries (std::uniform_*
/// distributions are not portable).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return double(gen_() >> 11) * 0x1p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  int integer(int lo, int hi) {  // inclusive bounds
    int span = hi - lo + 1;
    int v = lo + int(uniform() * double(span));
    return v > hi ? hi : v;
  }
  cd unit_square() { return cd(uniform(-1.0, 1.0), uniform(-1.0, 1.0)); }
  /// Uniform on the disk of the given radius.
  cd disk(double radius) {
    double r = radius * std::sqrt(uniform());
    double t = 2.0 * std::numbers::pi * uniform();
    return std::polar(r, t);
  }

 private:
  std::mt19937_64 gen_;
};

/// Laurent polynomial with both degrees at most maxdeg and unit-square
/// coefficients; at least one strictly negative and one nonnegative index.
inline CoeffSeries random_laurent(Rng& rng, int maxdeg) {
  int neg = rng.integer(1, maxdeg);
  int pos = rng.integer(0, maxdeg);
  std::vector<cd> c;
  for (int n = -neg; n <= pos; ++n) c.push_back(rng.unit_square());
  return CoeffSeries(-neg, std::move(c));
}

inline InnerFunction random_blaschke(Rng& rng, int mindeg, int maxdeg,
                                     double radius = 0.8) {
  int deg = rng.integer(mindeg, maxdeg);
  std::vector<cd> zeros;
  for (int i = 0; i < deg; ++i) zeros.push_back(rng.disk(radius));
  return InnerFunction::blaschke(std::move(zeros));
}

/// Bounded analytic rational function: a low-degree polynomial plus a
/// simple pole outside the closed disk.
inline RationalSymbol random_hinf(Rng& rng) {
  int deg = rng.integer(0, 2);
  std::vector<cd> c;
  for (int i = 0; i <= deg; ++i) c.push_back(rng.unit_square());
  RationalSymbol p = RationalSymbol::from_poly(Poly(std::move(c)));
  cd pole = std::polar(rng.uniform(1.6, 2.4),
                       2.0 * std::numbers::pi * rng.uniform());
  RationalSymbol tail(Poly::constant(rng.unit_square()),
                      Poly(std::vector<cd>{-pole, cd(1.0)}));
  return p + tail;
}

/// Rational function with one simple pole inside the disk (radius <= 0.6),
/// used to knock a symbol out of the analytic classes.
inline RationalSymbol random_inside_pole(Rng& rng) {
  cd a = rng.disk(0.6);
  return RationalSymbol(Poly::constant(rng.unit_square()),
                        Poly(std::vector<cd>{-a, cd(1.0)}));
}

/// Blaschke product whose zero set is closed under conjugation (one real
/// zero or a conjugate pair), with a real constant.
inline InnerFunction self_conjugate_blaschke(Rng& rng) {
  if (rng.uniform() < 0.5) {
    double u = rng.uniform(-0.8, 0.8);
    return InnerFunction::blaschke({cd(u, 0.0)});
  }
  cd a = rng.disk(0.8);
  return InnerFunction::blaschke({a, std::conj(a)});
}

struct VanishingCase {
  std::string id;
  OperatorKind kind;
  CoeffSeries phi;
  RationalSymbol phi_rational;
  InnerFunction eta;
  InnerFunction theta;
  bool member;
};

namespace detail {

/// Draws until the classifier verdict matches the intended label; the
/// retries consume the shared stream deterministically.
template <typename Draw>
inline VanishingCase draw_case(Rng& rng, OperatorKind kind, bool member,
                               std::string id, const VerifyContext& ctx,
                               Draw&& draw) {
  for (int attempt = 0; attempt < 200; ++attempt) {
    try {
      auto [phi_rat, eta, theta] = draw(rng);
      if (classify_symbol(phi_rat, eta, theta, vanishing_class(kind)) !=
          member)
        continue;
      CoeffSeries phi = rational_to_series(phi_rat, ctx.order());
      return VanishingCase{std::move(id), kind,     std::move(phi),
                           phi_rat,       eta,      theta,
                           member};
    } catch (const PoleOnCircle&) {
      continue;
    } catch (const NoCircleAnnulus&) {
      continue;
    }
  }
  throw std::logic_error("vanishing corpus: no admissible draw for " + id);
}

inline std::string pad2(int n) {
  std::string s = std::to_string(n);
  return s.size() < 2 ? "0" + s : s;
}
inline std::string pad3(int n) {
  std::string s = std::to_string(n);
  while (s.size() < 3) s = "0" + s;
  return s;
}

}  // namespace detail

/// Member/non-member pairs for every kind with a vanishing
/// characterization.  Members are built inside the class by construction;
/// probes get an extra pole inside the disk or a generic Laurent symbol.
/// Both labels are re-audited by the classifier at build time.
inline std::vector<VanishingCase> vanishing_corpus(const VerifyContext& ctx,
                                                   int pairs_per_kind = 10) {
  Rng rng(ctx.seed ^ 0x76616e6973680ULL);
  std::vector<VanishingCase> out;
  using Triple = std::tuple<RationalSymbol, InnerFunction, InnerFunction>;
  const OperatorKind kinds[] = {OperatorKind::RTO, OperatorKind::RHO,
                                OperatorKind::SRHO, OperatorKind::STTO,
                                OperatorKind::BTTO};
  for (OperatorKind kind : kinds) {
    for (int i = 0; i < pairs_per_kind; ++i) {
      std::string base =
          std::string("vanishing.") + to_string(kind) + ".";
      auto member_draw = [&](Rng& r) -> Triple {
        switch (kind) {
          case OperatorKind::RTO: {
            InnerFunction eta = random_blaschke(r, 1, 3);
            InnerFunction theta = random_blaschke(r, 1, 3);
            RationalSymbol phi = eta.to_rational().conj_reflected() *
                                 theta.to_rational() * random_hinf(r);
            return {phi, eta, theta};
          }
          case OperatorKind::RHO:
          case OperatorKind::SRHO: {
            InnerFunction eta = random_blaschke(r, 1, 3);
            InnerFunction theta = random_blaschke(r, 1, 3);
            RationalSymbol phi =
                eta.to_rational().conj_reflected() * random_hinf(r);
            return {phi, eta, theta};
          }
          case OperatorKind::STTO: {
            InnerFunction theta = random_blaschke(r, 1, 3);
            RationalSymbol phi =
                theta.to_rational().conj_reflected().scaled(r.unit_square());
            return {phi, InnerFunction::one(), theta};
          }
          case OperatorKind::BTTO: {
            InnerFunction theta = self_conjugate_blaschke(r);
            RationalSymbol phi =
                theta.to_rational().breve().scaled(r.unit_square());
            return {phi, InnerFunction::one(), theta};
          }
          default:
            throw std::logic_error("vanishing corpus: bad kind");
        }
      };
      auto probe_draw = [&](Rng& r) -> Triple {
        auto [phi, eta, theta] = member_draw(r);
        if (i % 2 == 0) {
          // member construction spoiled by a pole inside the disk
          return {phi * random_inside_pole(r), eta, theta};
        }
        // generic Laurent symbol over the same spaces
        CoeffSeries l = random_laurent(r, 3);
        Poly num;
        for (int n = l.lo(); n <= l.hi(); ++n)
          num = num + Poly::monomial(n - l.lo(), l.at(n));
        return {RationalSymbol(num, Poly::monomial(-l.lo())), eta, theta};
      };
      out.push_back(detail::draw_case(rng, kind, true,
                                      base + "member." + detail::pad2(i), ctx,
                                      member_draw));
      out.push_back(detail::draw_case(rng, kind, false,
                                      base + "probe." + detail::pad2(i), ctx,
                                      probe_draw));
    }
  }
  return out;
}

struct SuiteResult {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<CheckReport> reports;       // sorted by check_id
  std::vector<RankStudyReport> studies;   // rank suite only
  int failed = 0;
  int inconclusive = 0;
  bool passed() const { return failed == 0 && inconclusive == 0; }
};

namespace detail {

struct SuiteTask {
  std::string id;
  std::function<CheckReport()> run;
};

inline void add_projection_tasks(std::vector<SuiteTask>& tasks,
                                 const VerifyContext& ctx) {
  Rng rng(ctx.seed ^ 0x70726f6aULL);
  for (int i = 0; i < 20; ++i) {
    InnerFunction theta = random_blaschke(rng, 1, 4);
    std::string id = "projections.theta." + pad2(i);
    tasks.push_back({id, [theta, ctx, id] {
                       return check_projection_identity(theta, ctx, id);
                     }});
    std::string sid = "projections.shift." + pad2(i);
    tasks.push_back({sid, [theta, ctx, sid] {
                       return check_backward_shift_restriction(theta, ctx,
                                                               sid);
                     }});
  }
}

inline void add_defect_tasks(std::vector<SuiteTask>& tasks,
                             const VerifyContext& ctx) {
  {
    VerifyContext exact = ctx;
    exact.tol_identity = 1e-12;
    InnerFunction z = InnerFunction::shift(1);
    CoeffSeries zbar = CoeffSeries::monomial(-1);
    tasks.push_back({"defects.rto.exact", [=] {
                       return check_rto_defect(zbar, z, z, exact,
                                               "defects.rto.exact");
                     }});
  }
  Rng rng(ctx.seed ^ 0x646566656374ULL);
  for (int i = 0; i < 100; ++i) {
    CoeffSeries phi = random_laurent(rng, 5);
    InnerFunction eta = random_blaschke(rng, 1, 3);
    InnerFunction theta = random_blaschke(rng, 1, 3);
    std::string id = "defects.rto." + pad3(i);
    tasks.push_back({id, [=] {
                       return check_rto_defect(phi, eta, theta, ctx, id);
                     }});
  }
  for (int i = 0; i < 100; ++i) {
    CoeffSeries phi = random_laurent(rng, 5);
    InnerFunction eta = random_blaschke(rng, 1, 3);
    InnerFunction theta = random_blaschke(rng, 1, 3);
    std::string id = "defects.rho." + pad3(i);
    tasks.push_back({id, [=] {
                       return check_rho_defect(phi, eta, theta, ctx, id);
                     }});
  }
  // symbols in breve(theta) conj(eta) H-infinity kill the defect outright
  VerifyContext strict = ctx;
  strict.tol_identity = 1e-10;
  for (int i = 0; i < 10; ++i) {
    InnerFunction eta = random_blaschke(rng, 1, 3);
    InnerFunction theta = random_blaschke(rng, 1, 3);
    RationalSymbol phi_rat = theta.to_rational().breve() *
                             eta.to_rational().conj_reflected() *
                             random_hinf(rng);
    CoeffSeries phi = rational_to_series(phi_rat, ctx.order());
    std::string id = "defects.rho.kernel." + pad2(i);
    tasks.push_back({id, [=] {
                       return check_rho_defect(phi, eta, theta, strict, id);
                     }});
  }
}

inline void add_intertwining_tasks(std::vector<SuiteTask>& tasks,
                                   const VerifyContext& ctx) {
  Rng rng(ctx.seed ^ 0x696e746572ULL);
  for (int i = 0; i < 50; ++i) {
    RationalSymbol psi_rat = random_hinf(rng);
    CoeffSeries psi = rational_to_series(psi_rat, ctx.order());
    InnerFunction eta = random_blaschke(rng, 1, 3);
    InnerFunction theta = random_blaschke(rng, 1, 3);
    std::string id = "intertwining.forward." + pad2(i);
    tasks.push_back({id, [=] {
                       return check_intertwining(psi, eta, theta, ctx, id);
                     }});
  }
  for (int i = 0; i < 20; ++i) {
    for (int attempt = 0;; ++attempt) {
      if (attempt >= 200)
        throw std::logic_error("intertwining probes: no admissible draw");
      InnerFunction eta = random_blaschke(rng, 1, 3);
      InnerFunction theta = random_blaschke(rng, 1, 3);
      RationalSymbol phi_rat = random_hinf(rng) * random_inside_pole(rng);
      try {
        if (classify_symbol(phi_rat, eta, theta, SymbolClass::EtaBarHinf))
          continue;
        CoeffSeries phi = rational_to_series(phi_rat, ctx.order());
        std::string id = "intertwining.probe." + pad2(i);
        tasks.push_back({id, [=] {
                           return probe_intertwining(phi, phi_rat, eta, theta,
                                                     ctx, id);
                         }});
        break;
      } catch (const PoleOnCircle&) {
        continue;
      } catch (const NoCircleAnnulus&) {
        continue;
      }
    }
  }
}

inline void add_vanishing_tasks(std::vector<SuiteTask>& tasks,
                                const VerifyContext& ctx) {
  for (VanishingCase& c : vanishing_corpus(ctx)) {
    std::string id = c.id;
    tasks.push_back({id, [c = std::move(c), ctx, id] {
                       return check_vanishing(c.kind, c.phi, c.phi_rational,
                                              c.eta, c.theta, ctx, id);
                     }});
  }
}

inline void add_decomposition_tasks(std::vector<SuiteTask>& tasks,
                                    const VerifyContext& ctx) {
  Rng rng(ctx.seed ^ 0x6465636f6dULL);
  for (int i = 0; i < 30; ++i) {
    CoeffSeries phi = random_laurent(rng, 5);
    InnerFunction eta = random_blaschke(rng, 1, 3);
    InnerFunction theta = random_blaschke(rng, 1, 3);
    std::string id = "decompositions." + pad3(i);
    tasks.push_back({id, [=] {
                       return check_decompositions(phi, eta, theta, ctx, id);
                     }});
  }
}

}  // namespace detail

/// Rank studies run by the `ranks` suite: the finite-rank symbol family
/// against a generic symbol, over an atomic inner function (the matrices
/// are reached through boundary sampling) and over a finite Blaschke
/// product (where the model dimension caps the rank).
inline std::vector<RankStudyReport> run_rank_studies(const VerifyContext& ctx) {
  std::vector<int> windows{50, 100, 200};
  std::vector<RankStudyReport> out;
  InnerFunction etaz = InnerFunction::shift(1);
  InnerFunction atom(cd(1.0), {}, {SingularAtom{0.0, 1.0}});
  RationalSymbol r(Poly::constant(cd(1.0)),
                   Poly(std::vector<cd>{cd(-0.4, 0.2), cd(1.0)}));
  {
    // finite-rank family: phi = conj(eta) theta r with one pole inside
    auto eval = [=](cd z) {
      return std::conj(etaz.evaluate(z)) * atom.evaluate(z) * r.eval(z);
    };
    RankStudyReport s =
        rank_study(OperatorKind::RTO, CoeffSeries::zero(), eval, etaz, atom,
                   windows, ctx, "ranks.atom.finite_rank");
    s.notes = "finite-rank symbol family over an atomic inner function; " +
              s.notes;
    out.push_back(std::move(s));
  }
  {
    // generic symbol: conj(theta) times an analytic polynomial
    Poly p(std::vector<cd>{cd(1.0), cd(0.5), cd(0.25)});
    auto eval = [=](cd z) { return std::conj(atom.evaluate(z)) * p.eval(z); };
    RankStudyReport s =
        rank_study(OperatorKind::RTO, CoeffSeries::zero(), eval, etaz, atom,
                   windows, ctx, "ranks.atom.generic");
    s.notes = "generic symbol over an atomic inner function; " + s.notes;
    out.push_back(std::move(s));
  }
  InnerFunction theta3 = InnerFunction::blaschke(
      {cd(0.5, 0.1), cd(-0.3, 0.4), cd(0.0, -0.6)});
  {
    RationalSymbol phi_rat =
        etaz.to_rational().conj_reflected() * theta3.to_rational() * r;
    CoeffSeries phi = rational_to_series(phi_rat, 4 * 200);
    RankStudyReport s = rank_study(OperatorKind::RTO, phi, etaz, theta3,
                                   windows, ctx, "ranks.blaschke.finite_rank");
    s.notes = "finite-rank symbol family over a finite Blaschke product; " +
              s.notes;
    out.push_back(std::move(s));
  }
  {
    CoeffSeries phi(-3, {cd(0.5, 0.5), cd(1.0, 0.0), cd(0.0),
                         cd(0.25, -1.0)});
    RankStudyReport s = rank_study(OperatorKind::RTO, phi, etaz, theta3,
                                   windows, ctx, "ranks.blaschke.generic");
    s.notes = "generic Laurent symbol over a finite Blaschke product; " +
              s.notes;
    out.push_back(std::move(s));
  }
  {
    // skew compression over conj(theta)(q1 + conj(q2)) and the variant
    // without the conjugate; ranks are recorded, not asserted
    RationalSymbol q1(Poly::constant(cd(1.0)),
                      Poly(std::vector<cd>{cd(-2.0), cd(1.0)}));
    RationalSymbol q2(Poly::constant(cd(0.5, 0.5)),
                      Poly(std::vector<cd>{cd(0.0, 3.0), cd(1.0)}));
    InnerFunction theta2 = InnerFunction::blaschke({cd(0.5, 0.0), cd(-0.2, 0.3)});
    RationalSymbol base = theta2.to_rational().conj_reflected();
    for (int variant = 0; variant < 2; ++variant) {
      RationalSymbol phi_rat =
          base * (variant == 0 ? q1 + q2.conj_reflected() : q1 + q2);
      CoeffSeries phi = rational_to_series(phi_rat, 4 * 200);
      std::string id = variant == 0 ? "ranks.stto.conjugate_pair"
                                    : "ranks.stto.plain_pair";
      RankStudyReport s = rank_study(OperatorKind::STTO, phi,
                                     InnerFunction::one(), theta2, windows,
                                     ctx, id);
      s.notes = std::string("skew compression, ") +
                (variant == 0 ? "conjugated" : "plain") +
                " second summand; ranks recorded for comparison; " + s.notes;
      out.push_back(std::move(s));
    }
  }
  return out;
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{
      "projections", "defects",          "intertwining",
      "vanishing",   "decompositions",   "ranks",
      "all"};
  return names;
}

/// Runs a named suite.  Instance generation is single-threaded and fully
/// determined by the seed; the independent checks then run on `jobs`
/// threads.  The report list is sorted by check id, so the output is
/// byte-identical however many threads are used.
inline SuiteResult run_suite(const std::string& name, const VerifyContext& ctx,
                             int jobs = 1) {
  SuiteResult result;
  result.suite = name;
  result.seed = ctx.seed;
  std::vector<detail::SuiteTask> tasks;
  bool known = false;
  auto want = [&](const char* n) {
    bool w = name == n || name == "all";
    known = known || name == n;
    return w;
  };
  if (want("projections")) detail::add_projection_tasks(tasks, ctx);
  if (want("defects")) detail::add_defect_tasks(tasks, ctx);
  if (want("intertwining")) detail::add_intertwining_tasks(tasks, ctx);
  if (want("vanishing")) detail::add_vanishing_tasks(tasks, ctx);
  if (want("decompositions")) detail::add_decomposition_tasks(tasks, ctx);
  if (name == "ranks") {  // studies are their own suite, not part of `all`
    known = true;
    result.studies = run_rank_studies(ctx);
  }
  if (!known && name != "all")
    throw std::invalid_argument("run_suite: unknown suite " + name);

  result.reports.resize(tasks.size());
  if (jobs < 1) jobs = 1;
  if (jobs == 1) {
    for (size_t i = 0; i < tasks.size(); ++i)
      result.reports[i] = tasks[i].run();
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t)
      pool.emplace_back([&] {
        for (;;) {
          size_t i = next.fetch_add(1);
          if (i >= tasks.size()) return;
          result.reports[i] = tasks[i].run();
        }
      });
    for (auto& th : pool) th.join();
  }
  std::sort(result.reports.begin(), result.reports.end(),
            [](const CheckReport& a, const CheckReport& b) {
              return a.check_id < b.check_id;
            });
  for (const CheckReport& r : result.reports) {
    if (r.verdict == Verdict::Fail) ++result.failed;
    if (r.verdict == Verdict::Inconclusive) ++result.inconclusive;
  }
  return result;
}

}  // namespace hardyops
