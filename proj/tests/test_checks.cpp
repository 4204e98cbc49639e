#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <set>

#include "hardyops/decompositions.hpp"
#include "hardyops/suites.hpp"
#include "oracles.hpp"

using namespace hardyops;

namespace {

VerifyContext small_ctx(int N = 40) {
  VerifyContext ctx;
  ctx.N = N;
  return ctx;
}

}  // namespace

TEST_CASE("projection identity across symbol families") {
  VerifyContext tiny = small_ctx(20);
  auto r1 = check_projection_identity(InnerFunction::shift(2), tiny, "p1");
  REQUIRE(r1.passed);
  REQUIRE(r1.residual <= 1e-12);
  REQUIRE(r1.status == CheckStatus::Certified);

  VerifyContext full;  // N = 200
  auto r2 =
      check_projection_identity(InnerFunction::blaschke({cd(0.5)}), full, "p2");
  REQUIRE(r2.passed);
  REQUIRE(r2.residual <= 1e-10);

  auto r3 = check_projection_identity(
      InnerFunction::blaschke({cd(0.5), cd(-0.3)}), full, "p3");
  REQUIRE(r3.passed);
  REQUIRE(r3.residual <= 1e-10);

  // singular factors run through sampling: reported, never certified
  InnerFunction atom(cd(1.0), {}, {SingularAtom{0.0, 0.5}});
  auto r4 = check_projection_identity(atom, small_ctx(48), "p4");
  REQUIRE(r4.status == CheckStatus::Heuristic);
  REQUIRE(r4.observed_norm > 0.0);
}

TEST_CASE("the exactly solvable compression defect") {
  VerifyContext ctx = small_ctx(60);
  auto r = check_rto_defect(CoeffSeries::monomial(-1), InnerFunction::shift(1),
                            InnerFunction::shift(1), ctx, "exact");
  REQUIRE(r.passed);
  REQUIRE(r.residual <= 1e-12);
  REQUIRE(r.status == CheckStatus::Certified);
}

TEST_CASE("compression defects for structured and random data") {
  VerifyContext ctx = small_ctx(60);
  auto member = check_rto_defect(CoeffSeries::monomial(1),
                                 InnerFunction::shift(1),
                                 InnerFunction::shift(2), ctx, "m");
  REQUIRE(member.passed);
  REQUIRE(member.residual <= 1e-10);

  VerifyContext full;
  Rng rng(1234);
  CoeffSeries phi = random_laurent(rng, 3);
  InnerFunction eta = random_blaschke(rng, 1, 2);
  InnerFunction theta = random_blaschke(rng, 1, 3);
  auto rnd = check_rto_defect(phi, eta, theta, full, "r");
  REQUIRE(rnd.passed);
  REQUIRE(rnd.residual <= 1e-8);

  auto rnd2 = check_rho_defect(phi, eta, theta, full, "r2");
  REQUIRE(rnd2.passed);
  REQUIRE(rnd2.residual <= 1e-8);
}

TEST_CASE("flipped compression defects") {
  VerifyContext ctx = small_ctx(60);
  auto r = check_rho_defect(CoeffSeries::constant(cd(1.0)),
                            InnerFunction::shift(1), InnerFunction::shift(1),
                            ctx, "c");
  REQUIRE(r.passed);
  REQUIRE(r.residual <= 1e-12);

  // kernel-class symbol: theta-breve * conj(eta) * analytic
  InnerFunction theta = InnerFunction::blaschke({cd(0.5)});
  InnerFunction eta = InnerFunction::shift(1);
  RationalSymbol sym = theta.to_rational().breve() *
                       RationalSymbol(Poly({cd(1.0), cd(0.5)}),
                                      Poly::monomial(1));
  auto k = check_rho_defect(rational_to_series(sym, 4 * ctx.N), eta, theta,
                            ctx, "k");
  REQUIRE(k.passed);
  REQUIRE(k.residual <= 1e-10);
}

TEST_CASE("forward intertwining") {
  VerifyContext ctx = small_ctx(60);
  auto r1 = check_intertwining(CoeffSeries(0, {cd(1.0), cd(1.0)}),
                               InnerFunction::shift(1),
                               InnerFunction::blaschke({cd(0.5)}), ctx, "i1");
  REQUIRE(r1.passed);
  REQUIRE(r1.residual <= 1e-8);

  auto r2 = check_intertwining(CoeffSeries::monomial(1), InnerFunction::one(),
                               InnerFunction::shift(2), ctx, "i2");
  REQUIRE(r2.passed);
  REQUIRE(r2.residual <= 1e-10);
}

TEST_CASE("intertwining probes separate non-members") {
  VerifyContext ctx = small_ctx(60);
  RationalSymbol zbar2(Poly::constant(cd(1.0)), Poly::monomial(2));
  auto probe =
      probe_intertwining(rational_to_series(zbar2, 4 * ctx.N), zbar2,
                         InnerFunction::shift(1), InnerFunction::shift(3), ctx,
                         "probe");
  REQUIRE(probe.passed);
  REQUIRE(probe.verdict == Verdict::Pass);
  REQUIRE(probe.observed_norm >= ctx.separation_factor * ctx.tol_identity);

  // a probe pointed at a member degenerates to the residual check
  RationalSymbol member(Poly({cd(1.0), cd(2.0)}), Poly::monomial(1));
  auto onmember =
      probe_intertwining(rational_to_series(member, 4 * ctx.N), member,
                         InnerFunction::shift(1), InnerFunction::shift(3), ctx,
                         "onmember");
  REQUIRE(onmember.passed);
}

TEST_CASE("vanishing checks at pinned instances") {
  VerifyContext ctx = small_ctx(40);
  RationalSymbol z(Poly::monomial(1), Poly::constant(cd(1.0)));
  auto v1 = check_vanishing(OperatorKind::RTO, rational_to_series(z, 4 * ctx.N),
                            z, InnerFunction::shift(1), InnerFunction::shift(2),
                            ctx, "v1");
  REQUIRE(v1.passed);
  REQUIRE(v1.residual <= 1e-12);

  // non-member Hankel symbol: the operator must be visibly nonzero
  RationalSymbol nm(Poly({cd(1.0), cd(1.0)}), Poly::monomial(2));
  auto v2 = check_vanishing(OperatorKind::RHO,
                            rational_to_series(nm, 4 * ctx.N), nm,
                            InnerFunction::shift(1),
                            InnerFunction::blaschke({cd(0.5)}), ctx, "v2");
  REQUIRE(v2.passed);
  REQUIRE(v2.verdict == Verdict::Pass);

  RationalSymbol ctb(Poly::constant(cd(2.0, -1.0)), Poly::monomial(1));
  auto v3 = check_vanishing(OperatorKind::STTO,
                            rational_to_series(ctb, 4 * ctx.N), ctb,
                            InnerFunction::shift(1), InnerFunction::shift(1),
                            ctx, "v3");
  REQUIRE(v3.passed);
  REQUIRE(v3.residual <= 1e-12);

  RationalSymbol zb(Poly::constant(cd(1.0)), Poly::monomial(1));
  auto v4 = check_vanishing(OperatorKind::BTTO,
                            rational_to_series(zb, 4 * ctx.N), zb,
                            InnerFunction::shift(1), InnerFunction::shift(1),
                            ctx, "v4");
  REQUIRE(v4.passed);
  REQUIRE(v4.residual <= 1e-12);
}

TEST_CASE("backward shift restriction") {
  VerifyContext ctx = small_ctx(60);
  auto r1 =
      check_backward_shift_restriction(InnerFunction::shift(3), ctx, "b1");
  REQUIRE(r1.passed);
  REQUIRE(r1.residual <= 1e-12);

  auto r2 = check_backward_shift_restriction(InnerFunction::blaschke({cd(0.5)}),
                                             ctx, "b2");
  REQUIRE(r2.passed);
  REQUIRE(r2.residual <= 1e-10);

  auto r3 = check_backward_shift_restriction(
      InnerFunction::blaschke({cd(0.5), cd(0.0, 0.3)}), ctx, "b3");
  REQUIRE(r3.passed);
  REQUIRE(r3.residual <= 1e-10);
}

TEST_CASE("decomposition batteries at pinned instances") {
  VerifyContext mid = small_ctx(100);
  CoeffSeries phi(-1, {cd(1.0), cd(1.0), cd(1.0)});
  auto r1 = check_decompositions(phi, InnerFunction::shift(1),
                                 InnerFunction::shift(2), mid, "d1");
  REQUIRE(r1.passed);
  REQUIRE(r1.residual <= 1e-10);

  VerifyContext full;
  auto r2 = check_decompositions(CoeffSeries::monomial(-2),
                                 InnerFunction::shift(1),
                                 InnerFunction::blaschke({cd(0.5)}), full,
                                 "d2");
  REQUIRE(r2.passed);
  REQUIRE(r2.residual <= 1e-8);
}

TEST_CASE("residuals improve with the expansion window") {
  InnerFunction theta = InnerFunction::blaschke({cd(0.8), cd(-0.6, 0.5)});
  VerifyContext c2 = small_ctx(24);
  c2.expansion_factor = 2;
  VerifyContext c4 = c2;
  c4.expansion_factor = 4;
  VerifyContext c8 = c2;
  c8.expansion_factor = 8;
  double r2 = check_projection_identity(theta, c2, "x").residual;
  double r4 = check_projection_identity(theta, c4, "x").residual;
  double r8 = check_projection_identity(theta, c8, "x").residual;
  REQUIRE(r4 <= r2 + 1e-13);
  REQUIRE(r8 <= r4 + 1e-13);
}

TEST_CASE("the vanishing corpus labels itself consistently") {
  VerifyContext ctx;
  auto corpus = vanishing_corpus(ctx, 10);
  REQUIRE(corpus.size() == 100);
  std::set<std::string> ids;
  int members = 0;
  for (const auto& c : corpus) {
    ids.insert(c.id);
    if (c.member) ++members;
    REQUIRE(classify_symbol(c.phi_rational, c.eta, c.theta,
                            vanishing_class(c.kind)) == c.member);
  }
  REQUIRE(ids.size() == corpus.size());
  REQUIRE(members == 50);
}

TEST_CASE("suites are deterministic under threading") {
  VerifyContext ctx = small_ctx(32);
  SuiteResult serial = run_suite("projections", ctx, 1);
  SuiteResult parallel = run_suite("projections", ctx, 3);
  REQUIRE(serial.reports.size() == parallel.reports.size());
  for (size_t i = 0; i < serial.reports.size(); ++i) {
    REQUIRE(serial.reports[i].check_id == parallel.reports[i].check_id);
    REQUIRE(serial.reports[i].residual == parallel.reports[i].residual);
    REQUIRE(serial.reports[i].inputs_digest ==
            parallel.reports[i].inputs_digest);
  }
  REQUIRE(std::is_sorted(serial.reports.begin(), serial.reports.end(),
                         [](const CheckReport& a, const CheckReport& b) {
                           return a.check_id < b.check_id;
                         }));
}

TEST_CASE("suite selection") {
  VerifyContext ctx = small_ctx(48);
  REQUIRE_THROWS_AS(run_suite("nonsense", ctx), std::invalid_argument);

  SuiteResult ranks = run_suite("ranks", ctx, 2);
  REQUIRE(ranks.reports.empty());
  REQUIRE_FALSE(ranks.studies.empty());

  SuiteResult proj = run_suite("projections", ctx, 2);
  REQUIRE(proj.studies.empty());
  REQUIRE_FALSE(proj.reports.empty());
  REQUIRE(proj.failed == 0);
}

TEST_CASE("every certified check in the batteries passes at modest size") {
  VerifyContext ctx = small_ctx(48);
  for (const char* name : {"defects", "intertwining"}) {
    SuiteResult res = run_suite(name, ctx, 4);
    REQUIRE(res.failed == 0);
    for (const auto& r : res.reports) REQUIRE(r.status ==
                                              CheckStatus::Certified);
  }
}

TEST_CASE("rank studies distinguish finite-rank from growing symbols") {
  VerifyContext ctx = small_ctx(48);
  InnerFunction theta = InnerFunction::blaschke({cd(0.5), cd(-0.3)});

  // co-analytic rational symbol: one Hankel coupling, rank stays put
  RationalSymbol low(Poly::constant(cd(1.0)),
                     Poly::from_roots({cd(0.4, -0.2)}));
  auto flat = rank_study(OperatorKind::RHO, rational_to_series(low, 4 * 48),
                         InnerFunction::shift(1), theta, {8, 16, 24, 32}, ctx,
                         "flat");
  REQUIRE(flat.verdict == "PLATEAU");
  REQUIRE(flat.ranks.back() >= 1);

  InnerFunction atom(cd(1.0), {}, {SingularAtom{0.0, 1.0}});
  RationalSymbol r(Poly::constant(cd(1.0)),
                   Poly::from_roots({cd(0.4, -0.2)}));
  auto finite = rank_study(
      OperatorKind::RHO, CoeffSeries::zero(),
      [&](cd z) { return std::conj(z) * atom.evaluate(z) * r.eval(z); },
      InnerFunction::shift(1), atom, {16, 32, 48}, ctx, "atom.flat");
  REQUIRE(finite.status == CheckStatus::Heuristic);
  REQUIRE(finite.verdict == "PLATEAU");

  // visible rank growth needs the larger windows the studies default to
  auto growing = rank_study(
      OperatorKind::RHO, CoeffSeries::zero(),
      [&](cd z) {
        return std::conj(atom.evaluate(z)) *
               (cd(1.0) + cd(0.5) * z + cd(0.25) * z * z);
      },
      InnerFunction::shift(1), atom, {50, 100, 200}, ctx, "atom.growing");
  REQUIRE(growing.verdict == "GROWING");
}

TEST_CASE("rank study guards its preconditions") {
  VerifyContext ctx = small_ctx(24);
  InnerFunction atom(cd(1.0), {}, {SingularAtom{0.0, 1.0}});
  REQUIRE_THROWS_AS(rank_study(OperatorKind::STTO, CoeffSeries::zero(),
                               [](cd z) { return z; }, InnerFunction::shift(1),
                               atom, {8, 16}, ctx),
                    NotFiniteBlaschke);
  REQUIRE_THROWS_AS(rank_study(OperatorKind::RHO, CoeffSeries::zero(),
                               InnerFunction::shift(1), atom, {8, 16}, ctx),
                    std::invalid_argument);
}
