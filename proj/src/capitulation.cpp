#include "capk/capitulation.hpp"

#include <algorithm>

namespace capk {

QuadElement RelativeExtension::relative_norm(const BiquadElement& x) const {
  return K.restrict(f_index, K.relative_norm(tau(), x));
}

std::vector<long> ramified_primes(const BiquadFieldData& k, int f_index) {
  std::vector<long> out;
  Int d = abs(k.disc);
  for (auto p : prime_divisors(to_i64(d))) {
    long P = static_cast<long>(p);
    int eF = mpz_divisible_ui_p(k.sub[f_index].disc.get_mpz_t(), static_cast<unsigned long>(P)) ? 2 : 1;
    if (ramification_index(k, P) == 2 * eF) out.push_back(P);
  }
  return out;
}

RelativeExtension make_extension(long f, long adjoin, std::vector<long> sigma) {
  RelativeExtension e;
  e.K = field_data(f, adjoin);
  e.f_index = 0;
  std::sort(sigma.begin(), sigma.end());
  sigma.erase(std::unique(sigma.begin(), sigma.end()), sigma.end());
  for (long p : sigma)
    if (p < 2 || !is_prime(static_cast<int64_t>(p))) throw DomainError(std::to_string(p) + " is not a prime");
  for (long p : ramified_primes(e.K, 0))
    if (!std::binary_search(sigma.begin(), sigma.end(), p))
      throw DomainError("Sigma must contain the primes above " + std::to_string(p) + ", which ramify in K/F");
  e.sigma = sigma;
  return e;
}

RelativeExtension minimal_extension(long f, long adjoin) {
  BiquadFieldData k = field_data(f, adjoin);
  return make_extension(f, adjoin, ramified_primes(k, 0));
}

SUnitModule s_unit_module(const RelativeExtension& e) {
  if (e.f_index < 0 || e.f_index > 2) throw DomainError("tau must be a nontrivial automorphism");
  SUnitModule m;
  m.units = s_unit_group(e.K, e.sigma);
  const KUnitGroup& U = m.units;
  const BiquadFieldData& k = e.K;
  std::vector<BiquadElement> gens{U.zeta};
  gens.insert(gens.end(), U.free_generators.begin(), U.free_generators.end());
  FgAbelianGroup G = U.group();
  IntMatrix t(G.ngens(), G.ngens());
  for (std::size_t j = 0; j < gens.size(); ++j) {
    BiquadElement img = k.aut(e.tau(), gens[j]);
    Vec c = U.log(img);
    if (!(U.element(c) == img)) throw Inconsistency("tau image does not re-multiply to itself");
    t.set_column(j, c);
  }
  m.module = CyclicModule(G, t, 2);
  return m;
}

Subquotient capitulation_kernel(const SUnitModule& m) { return h1(m.module); }

Subquotient remark_fin_kernel(const RelativeExtension& e, const SUnitModule& m) {
  const KUnitGroup& U = m.units;
  const BiquadFieldData& k = e.K;
  std::vector<BiquadElement> gens{U.zeta};
  gens.insert(gens.end(), U.free_generators.begin(), U.free_generators.end());
  FgAbelianGroup G = U.group();
  IntMatrix norm(G.ngens(), G.ngens());
  std::vector<Vec> diff;
  for (std::size_t j = 0; j < gens.size(); ++j) {
    BiquadElement t = k.aut(e.tau(), gens[j]);
    norm.set_column(j, U.log(k.mul(gens[j], t)));
    diff.push_back(U.log(k.div(gens[j], t)));
  }
  return subquotient(kernel(GroupHom(G, G, norm)), diff);
}

FgAbelianGroup remark_fin_kernel(const CyclicModule& m) { return tate_h_minus1(m).group; }

LacTerms lac_terms(const CyclicModule& m) {
  LacTerms out;
  out.seq = cool_sequence(m);
  out.two_torsion = std::all_of(out.seq.terms.begin(), out.seq.terms.end(),
                                [](const FgAbelianGroup& g) { return g.killed_by(2); });
  std::array<Int, 4> o;
  bool finite = true;
  for (int i = 0; i < 4; ++i) {
    auto x = out.seq.terms[i].order();
    if (!x) finite = false;
    else o[i] = *x;
  }
  out.order_identity = finite && o[0] * o[2] == o[1] * o[3];
  out.middle = "H^1(tau, M[2]); for unit modules M[2] = {+1, -1}";
  return out;
}

DirectResult direct_capitulation(const RelativeExtension& e, const SigmaClassGroup& cl,
                                 const KUnitGroup& units, const Int& target, long node_cap) {
  DirectResult res;
  const QuadraticFieldData& F = e.F();
  const FgAbelianGroup& G = cl.group;
  std::vector<Vec> found;
  auto generated = [&]() { return subgroup(G, found); };
  auto order_of = [&]() { return *generated().source().order(); };
  res.generated = FgAbelianGroup::trivial();
  if (target == 1) {
    res.status = "complete";
    return res;
  }
  GroupHom tors = n_torsion(G, 2);
  bool all_complete = true;
  for (const auto& x : tors.source().elements()) {
    Vec c = G.reduce(tors(x));
    if (G.is_zero(c)) continue;
    if (!found.empty() && in_image(generated(), c)) continue;
    QuadIdeal I = unit_ideal();
    for (std::size_t i = 0; i < c.size(); ++i)
      if (c[i] != 0) I = ideal_mul(F, I, ideal_pow(F, cl.generators[i], c[i].get_ui()));
    I = reduce_ideal(F, I).ideal;
    KIdeal A = extend_ideal(e.K, e.f_index, I);
    PrincipalSearch s = is_principal_sigma(e.K, A, e.sigma, units, node_cap);
    res.nodes += s.nodes;
    if (s.generator) {
      res.certificates.push_back({c, I, *s.generator});
      found.push_back(c);
      if (order_of() == target) break;
    } else if (s.complete) {
      res.non_capitulating.push_back(c);
    } else {
      all_complete = false;
    }
  }
  if (!found.empty()) res.generated = generated().source();
  Int got = found.empty() ? Int(1) : order_of();
  if (got == target) res.status = "complete";
  else if (all_complete) res.status = "disagrees with H^1";
  else res.status = "search bound insufficient";
  return res;
}

CapitulationReport corollary_lac_report(const RelativeExtension& e, long node_cap) {
  CapitulationReport r;
  r.extension = e;
  auto note = [&](bool ok, const std::string& what) {
    if (!ok) r.diagnostics.push_back(what);
    return ok;
  };
  r.cl_sigma_f = sigma_class_group(e.F(), e.sigma_f());
  r.module = s_unit_module(e);
  r.fixed_points = fixed_points(r.module.module).source();
  r.base_units = s_unit_group(e.F(), e.sigma_f()).group();
  r.ker_j_h1 = capitulation_kernel(r.module).group;
  r.ker_j_fin = remark_fin_kernel(e, r.module).group;
  r.lac = lac_terms(r.module.module);

  bool ok = true;
  ok &= note(r.fixed_points == r.base_units, "fixed points of the unit module differ from the units of F");
  ok &= note(r.ker_j_h1 == r.ker_j_fin, "H^1 and the norm-kernel formula disagree");
  ok &= note(r.lac.seq.exact, "the four-term sequence is not exact");
  ok &= note(r.lac.order_identity, "order identity of the four-term sequence fails");
  ok &= note(r.lac.two_torsion, "a term of the four-term sequence is not 2-torsion");
  ok &= note(r.lac.seq.terms[2] == r.ker_j_h1, "third term differs from the capitulation kernel");
  Int kj = *r.ker_j_h1.order();
  auto clo = r.cl_sigma_f.group.order();
  ok &= note(clo && mpz_divisible_p(clo->get_mpz_t(), kj.get_mpz_t()),
             "capitulation kernel order does not divide the class number");

  KUnitGroup units = e.sigma.empty() ? r.module.units : unit_group(e.K);
  r.direct = direct_capitulation(e, r.cl_sigma_f, units, kj, node_cap);
  ok &= note(r.direct.status != "disagrees with H^1",
             "a complete ideal search found fewer capitulating classes than H^1");
  r.consistent = ok;
  return r;
}

MordellWeilReport mordell_weil_sequence(const MordellWeilInput& in) {
  CyclicModule m(in.group, in.tau, 2);
  MordellWeilReport r;
  r.lac = lac_terms(m);
  r.lac.middle = "H^1(tau, A(K)[2]); the third term is the global H^1 containing the Sha subgroup";
  r.fixed = fixed_points(m).source();
  if (in.fixed_claim) r.claim_matches = *in.fixed_claim == r.fixed;
  return r;
}

}  // namespace capk
