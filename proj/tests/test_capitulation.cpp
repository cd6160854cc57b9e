#include <gtest/gtest.h>

#include <random>

#include "capk/capitulation.hpp"

using namespace capk;

namespace {

Int order(const FgAbelianGroup& g) { return *g.order(); }

std::array<Int, 4> lac_orders(const LacTerms& l) {
  return {order(l.seq.terms[0]), order(l.seq.terms[1]), order(l.seq.terms[2]), order(l.seq.terms[3])};
}

}  // namespace

TEST(Extension, SigmaValidation) {
  EXPECT_NO_THROW(make_extension(-5, -1, {}));
  EXPECT_THROW(make_extension(-1, 2, {}), DomainError);  // 2 ramifies in Q(i, sqrt 2)/Q(i)
  EXPECT_NO_THROW(make_extension(-1, 2, {2}));
  EXPECT_THROW(make_extension(-1, 2, {2, 4}), DomainError);
  EXPECT_EQ(ramified_primes(field_data(-5, -1), 0), std::vector<long>{});
  EXPECT_EQ(ramified_primes(field_data(-6, 2), 0), std::vector<long>{});
  auto e = minimal_extension(-1, 3);
  EXPECT_EQ(e.sigma, (std::vector<long>{3}));
  RelativeExtension bad = e;
  bad.f_index = -1;
  EXPECT_THROW(s_unit_module(bad), DomainError);
}

TEST(Extension, RelativeNorms) {
  auto e = make_extension(-5, -1, {});
  const auto& k = e.K;
  BiquadElement i = k.sqrt_of(1);
  EXPECT_EQ(e.relative_norm(i), QuadElement(1));
  BiquadElement eps = k.scale(k.add(k.one(), k.sqrt_of(2)), Rat(1, 2));  // (1 + sqrt 5)/2
  EXPECT_EQ(e.relative_norm(eps), QuadElement(-1));
  BiquadElement x = k.embed(0, QuadElement(3, 2));
  EXPECT_EQ(e.relative_norm(x), e.F().mul(QuadElement(3, 2), QuadElement(3, 2)));
}

TEST(Extension, ExtendIdealIsMultiplicative) {
  auto e = make_extension(-5, -1, {});
  const auto& F = e.F();
  std::vector<QuadIdeal> ps;
  for (long p : {2, 3, 5, 7, 11}) for (const auto& P : splitting(F, p).primes) ps.push_back(P);
  for (const auto& a : ps)
    for (const auto& b : ps) {
      KIdeal lhs = extend_ideal(e.K, 0, ideal_mul(F, a, b));
      KIdeal rhs = k_ideal_mul(e.K, extend_ideal(e.K, 0, a), extend_ideal(e.K, 0, b));
      EXPECT_EQ(lhs, rhs);
    }
}

TEST(Module, GaussianFlagship) {
  auto e = make_extension(-5, -1, {});
  auto m = s_unit_module(e);
  EXPECT_EQ(m.module.group, FgAbelianGroup({4}, 1));
  // tau(i) = -i is three times the generator of the roots of unity.
  const auto& k = e.K;
  EXPECT_EQ(m.units.w, 4);
  auto ti = m.units.log(k.aut(e.tau(), m.units.zeta));
  EXPECT_EQ(ti[0], 3);
  const auto& eps = m.units.free_generators.at(0);
  BiquadElement prod = k.mul(eps, k.aut(e.tau(), eps));
  EXPECT_TRUE(prod == BiquadElement(Rat(-1)) || prod == BiquadElement(Rat(1)) ||
              prod == k.sqrt_of(1) || prod == k.neg(k.sqrt_of(1)));
  // Multiplicative norm against the additive norm endomorphism.
  GroupHom N = norm_endomorphism(m.module);
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> d(-3, 3);
  for (int t = 0; t < 20; ++t) {
    Vec c{mod_pos(Int(d(rng)), 4), Int(d(rng))};
    BiquadElement x = m.units.element(c);
    Vec lhs = m.units.log(k.mul(x, k.aut(e.tau(), x)));
    EXPECT_TRUE(m.module.group.equal(lhs, N(c)));
  }
}

TEST(Capitulation, GaussianFlagship) {
  auto r = corollary_lac_report(make_extension(-5, -1, {}));
  EXPECT_TRUE(r.consistent) << (r.diagnostics.empty() ? "" : r.diagnostics[0]);
  EXPECT_EQ(r.ker_j_h1, FgAbelianGroup::cyclic(2));
  EXPECT_EQ(r.ker_j_fin, FgAbelianGroup::cyclic(2));
  EXPECT_EQ(lac_orders(r.lac), (std::array<Int, 4>{2, 2, 2, 2}));
  EXPECT_TRUE(r.lac.seq.exact);
  ASSERT_EQ(r.direct.certificates.size(), 1u);
  EXPECT_EQ(r.direct.status, "complete");
  const auto& cert = r.direct.certificates[0];
  // The class of (2, 1 + sqrt -5) is the nontrivial one.
  auto P2 = splitting(r.extension.F(), 2).primes.at(0);
  EXPECT_FALSE(is_principal(r.extension.F(), P2));
  EXPECT_EQ(class_key(r.extension.F(), cert.ideal), class_key(r.extension.F(), P2));
  KIdeal A = extend_ideal(r.extension.K, 0, cert.ideal);
  EXPECT_EQ(k_ideal(r.extension.K, {cert.generator}), A);
}

TEST(Capitulation, SqrtMinusSixFlagship) {
  auto r = corollary_lac_report(make_extension(-6, 2, {}));
  EXPECT_TRUE(r.consistent);
  EXPECT_EQ(r.ker_j_h1, FgAbelianGroup::cyclic(2));
  EXPECT_EQ(r.ker_j_fin, FgAbelianGroup::cyclic(2));
  ASSERT_EQ(r.direct.certificates.size(), 1u);
  auto P2 = splitting(r.extension.F(), 2).primes.at(0);
  KIdeal A = extend_ideal(r.extension.K, 0, P2);
  EXPECT_TRUE(is_principal_sigma(r.extension.K, A, {}, r.module.units).generator);
}

TEST(Capitulation, TrivialSigmaClassGroup) {
  auto r = corollary_lac_report(make_extension(-1, 2, {2}));
  EXPECT_TRUE(r.consistent);
  EXPECT_TRUE(r.cl_sigma_f.group.is_trivial());
  EXPECT_TRUE(r.ker_j_h1.is_trivial());
  EXPECT_TRUE(r.direct.certificates.empty());
  EXPECT_TRUE(r.lac.seq.exact);
  EXPECT_TRUE(r.lac.seq.terms[3].is_trivial());
}

TEST(Capitulation, SmallSweepIsConsistent) {
  int n = 0;
  for (long f : {-1, -2, -3, -5, -6, -7, -10, -13, -14, -15})
    for (long a : {-1, 2, 3, 5, -3}) {
      if (f == a) continue;
      if (squarefree_part(static_cast<int64_t>(f) * a) == 1) continue;
      auto e = minimal_extension(f, a);
      auto r = corollary_lac_report(e);
      EXPECT_TRUE(r.consistent) << f << " " << a << " " << (r.diagnostics.empty() ? "" : r.diagnostics[0]);
      EXPECT_NE(r.direct.status, "disagrees with H^1");
      ++n;
    }
  EXPECT_GE(n, 25);
}

TEST(RemarkFin, SyntheticModules) {
  CyclicModule neg(FgAbelianGroup::free(1), IntMatrix{{-1}}, 2);
  EXPECT_EQ(remark_fin_kernel(neg), FgAbelianGroup::cyclic(2));
  std::mt19937_64 rng(99);
  for (int t = 0; t < 200; ++t) {
    auto m = random_order2_module(rng, 512);
    EXPECT_EQ(remark_fin_kernel(m), h1_bruteforce(m));
  }
}

TEST(Lac, SyntheticZ4) {
  CyclicModule m(FgAbelianGroup::cyclic(4), IntMatrix{{3}}, 2);
  auto l = lac_terms(m);
  EXPECT_EQ(lac_orders(l), (std::array<Int, 4>{2, 2, 2, 2}));
  EXPECT_TRUE(l.seq.exact);
  EXPECT_TRUE(l.order_identity);
}

TEST(MordellWeil, Examples) {
  {
    MordellWeilInput in{FgAbelianGroup::free(1), IntMatrix{{-1}}, FgAbelianGroup::trivial(), "test"};
    auto r = mordell_weil_sequence(in);
    EXPECT_TRUE(r.claim_matches);
    EXPECT_EQ(lac_orders(r.lac), (std::array<Int, 4>{1, 1, 2, 2}));
    EXPECT_TRUE(r.lac.seq.exact);
  }
  {
    MordellWeilInput in{FgAbelianGroup::free(2), IntMatrix{{0, 1}, {1, 0}}, FgAbelianGroup::free(1), "test"};
    auto r = mordell_weil_sequence(in);
    EXPECT_TRUE(r.claim_matches);
    EXPECT_TRUE(r.lac.seq.terms[2].is_trivial());
    EXPECT_TRUE(r.lac.seq.exact);
  }
  {
    MordellWeilInput in{FgAbelianGroup::cyclic(2), IntMatrix{{1}}, FgAbelianGroup::cyclic(2), "test"};
    auto r = mordell_weil_sequence(in);
    EXPECT_EQ(lac_orders(r.lac), (std::array<Int, 4>{1, 2, 2, 1}));
    EXPECT_TRUE(r.lac.seq.exact);
  }
  MordellWeilInput bad{FgAbelianGroup::free(1), IntMatrix{{2}}, std::nullopt, ""};
  EXPECT_THROW(mordell_weil_sequence(bad), DomainError);
  MordellWeilInput wrong{FgAbelianGroup::free(1), IntMatrix{{1}}, FgAbelianGroup::trivial(), ""};
  EXPECT_FALSE(mordell_weil_sequence(wrong).claim_matches);
}
