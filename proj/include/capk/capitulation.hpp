#pragma once

#include <optional>
#include <string>
#include <vector>

#include "capk/biquad.hpp"
#include "capk/cyclic.hpp"

namespace capk {

// K over its subfield F = K.sub[f_index]; tau = K.aut(f_index + 1).
// Sigma is given by rational primes: Sigma_F is every prime of F above
// them plus the infinite places, so it is closed under conjugation and
// Sigma_K (all primes of K above) is closed under tau.
struct RelativeExtension {
  BiquadFieldData K;
  int f_index = 0;
  std::vector<long> sigma;

  const QuadraticFieldData& F() const { return K.sub[f_index]; }
  int tau() const { return f_index + 1; }
  std::vector<QuadIdeal> sigma_f() const { return primes_above(F(), sigma); }
  // x * tau(x) as an element of F.
  QuadElement relative_norm(const BiquadElement& x) const;
};

// Rational primes below the finite primes of F that ramify in K.
std::vector<long> ramified_primes(const BiquadFieldData& k, int f_index);

// K = Q(sqrt f, sqrt adjoin) over F = Q(sqrt f).  Throws DomainError when
// sigma misses a prime ramified in K/F.
RelativeExtension make_extension(long f, long adjoin, std::vector<long> sigma);
// Same with the smallest admissible Sigma.
RelativeExtension minimal_extension(long f, long adjoin);

struct SUnitModule {
  KUnitGroup units;
  CyclicModule module;  // additive view of O*_{K,Sigma} with tau
};

SUnitModule s_unit_module(const RelativeExtension& e);

// H^1(tau, O*_{K,Sigma}) as a subquotient of the module.
Subquotient capitulation_kernel(const SUnitModule& m);
// {u : N u = 1} / u^(1 - tau) evaluated on elements of K rather than on the
// module matrix.
Subquotient remark_fin_kernel(const RelativeExtension& e, const SUnitModule& m);
FgAbelianGroup remark_fin_kernel(const CyclicModule& m);

struct LacTerms {
  CoolSequence seq;
  bool order_identity = false;  // |t1| |t3| = |t2| |t4|
  bool two_torsion = false;
  std::string middle;           // how the second term is realized
};

LacTerms lac_terms(const CyclicModule& m);

struct DirectCertificate {
  Vec cls;               // Cl_Sigma(F) coordinates
  QuadIdeal ideal;       // representative in F
  BiquadElement generator;
};

struct DirectResult {
  std::vector<DirectCertificate> certificates;
  FgAbelianGroup generated;          // subgroup spanned by certified classes
  std::vector<Vec> non_capitulating; // proved by a complete search
  std::string status;                // "complete" or "search bound insufficient"
  long nodes = 0;
};

// Looks for capitulating classes among the 2-torsion of Cl_Sigma(F) and
// stops once they span a subgroup of the target order.
DirectResult direct_capitulation(const RelativeExtension& e, const SigmaClassGroup& cl,
                                 const KUnitGroup& units, const Int& target, long node_cap);

struct CapitulationReport {
  RelativeExtension extension;
  SigmaClassGroup cl_sigma_f;
  SUnitModule module;
  FgAbelianGroup fixed_points;  // M^tau
  FgAbelianGroup base_units;    // O*_{F,Sigma} computed in F
  FgAbelianGroup ker_j_h1;
  FgAbelianGroup ker_j_fin;
  DirectResult direct;
  LacTerms lac;
  bool consistent = false;
  std::vector<std::string> diagnostics;
};

CapitulationReport corollary_lac_report(const RelativeExtension& e, long node_cap = 4000000);

struct MordellWeilInput {
  FgAbelianGroup group;
  IntMatrix tau;
  std::optional<FgAbelianGroup> fixed_claim;
  std::string provenance;
};

struct MordellWeilReport {
  LacTerms lac;
  FgAbelianGroup fixed;  // computed A(F)
  bool claim_matches = true;
};

MordellWeilReport mordell_weil_sequence(const MordellWeilInput& in);

}  // namespace capk
