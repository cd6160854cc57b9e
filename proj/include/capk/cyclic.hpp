#pragma once

#include <array>
#include <random>

#include "capk/abelian.hpp"

namespace capk {

// A finitely generated abelian group with an automorphism sigma of order
// dividing n.  Written additively.
struct CyclicModule {
  FgAbelianGroup group;
  GroupHom sigma;
  int order_n = 2;

  CyclicModule() = default;
  // Checks sigma^n = 1 and bijectivity.
  CyclicModule(FgAbelianGroup g, GroupHom s, int n);
  CyclicModule(FgAbelianGroup g, IntMatrix s, int n)
      : CyclicModule(g, GroupHom(g, g, std::move(s)), n) {}
};

// Inclusion of M^sigma into M.
GroupHom fixed_points(const CyclicModule& m);
// 1 + sigma + ... + sigma^(n-1).
GroupHom norm_endomorphism(const CyclicModule& m);

// M^sigma / N M, with ambient coordinates in M.
Subquotient tate_h0(const CyclicModule& m);
// Ker N / (sigma - 1) M.
Subquotient tate_h_minus1(const CyclicModule& m);
// H^1 of a cyclic group, equal to the Tate group in degree -1.
Subquotient h1(const CyclicModule& m);
// H^1 by enumerating crossed homomorphisms c with
// c(s^(i+j)) = c(s^i) + s^i c(s^j), modulo c(g) = g y - y.  Finite M only.
FgAbelianGroup h1_bruteforce(const CyclicModule& m, std::size_t max_order = 1u << 16);

// Psi = {x : N x in n M^sigma} as a subgroup of M, and Psi / (M^sigma + nM).
struct PsiN {
  GroupHom subgroup;
  Subquotient quotient;
};
PsiN psi_n(const CyclicModule& m, int n);

// Restriction of sigma to the n-torsion, with its inclusion into M.
struct TorsionSubmodule {
  CyclicModule module;
  GroupHom inclusion;
};
TorsionSubmodule torsion_submodule(const CyclicModule& m, int n);

// 0 -> (M^s cap 2M)/2M^s -> H^1(M_2) -> H^1(M) -> Psi/(M^s + 2M) -> 0
struct CoolSequence {
  std::array<FgAbelianGroup, 4> terms;
  std::array<GroupHom, 3> maps;
  // term1 injects, exact at term2 and term3, term4 surjected onto.
  std::array<bool, 4> node_exact{};
  bool exact = false;
  // Ambient descriptions: term1, term3, term4 live in M, term2 in M_2.
  std::array<Subquotient, 4> detail;
  TorsionSubmodule m2;
};
CoolSequence cool_sequence(const CyclicModule& m);

// Random finite module for the property suites: invariant factors drawn
// from {2,3,4,8,9,12}, order at most max_order, sigma an involution.
CyclicModule random_order2_module(std::mt19937_64& rng, std::size_t max_order);

}  // namespace capk
