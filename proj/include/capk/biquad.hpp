#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "capk/quadfield.hpp"

namespace capk {

// x0 + x1 r1 + x2 r2 + x3 r1 r2 with r1^2 = m1, r2^2 = m2.
struct BiquadElement {
  std::array<Rat, 4> x;
  BiquadElement() = default;
  explicit BiquadElement(const Rat& c) : x{c, 0, 0, 0} {}
  BiquadElement(Rat a, Rat b, Rat c, Rat d) : x{std::move(a), std::move(b), std::move(c), std::move(d)} {}
  bool operator==(const BiquadElement& o) const { return x == o.x; }
  bool is_zero() const { return x[0] == 0 && x[1] == 0 && x[2] == 0 && x[3] == 0; }
};

using RatMatrix4 = std::array<std::array<Rat, 4>, 4>;

// K = Q(sqrt m1, sqrt m2).  sub[0..2] are Q(sqrt m1), Q(sqrt m2), Q(sqrt m3)
// with m1 m2 = c^2 m3.  Automorphism j in 1..3 fixes sub[j-1]; 0 is the
// identity.
struct BiquadFieldData {
  long m1 = 0, m2 = 0, m3 = 0;
  Int c;
  std::array<QuadraticFieldData, 3> sub;
  std::array<BiquadElement, 4> integral_basis;
  RatMatrix4 basis_matrix;   // row i = frame coordinates of basis element i
  RatMatrix4 to_basis;       // inverse of basis_matrix
  Int disc;
  int r1 = 0, r2 = 0;

  BiquadElement one() const { return BiquadElement(Rat(1)); }
  BiquadElement add(const BiquadElement& a, const BiquadElement& b) const;
  BiquadElement sub_(const BiquadElement& a, const BiquadElement& b) const;
  BiquadElement mul(const BiquadElement& a, const BiquadElement& b) const;
  BiquadElement neg(const BiquadElement& a) const;
  BiquadElement scale(const BiquadElement& a, const Rat& q) const;
  BiquadElement inv(const BiquadElement& a) const;
  BiquadElement div(const BiquadElement& a, const BiquadElement& b) const { return mul(a, inv(b)); }
  BiquadElement pow(const BiquadElement& a, long e) const;
  BiquadElement aut(int j, const BiquadElement& a) const;
  // Sign pattern of automorphism j on (r1, r2).
  std::array<int, 2> aut_signs(int j) const;
  // x * aut_j(x), an element of sub[j-1] embedded in K.
  BiquadElement relative_norm(int j, const BiquadElement& a) const;
  Rat norm(const BiquadElement& a) const;
  Rat trace(const BiquadElement& a) const { return 4 * a.x[0]; }
  // sqrt(m_i) for the subfield i in 0..2.
  BiquadElement sqrt_of(int i) const;
  BiquadElement embed(int i, const QuadElement& q) const;
  // Element of sub[i]; throws DomainError when a is not fixed by aut(i+1).
  QuadElement restrict(int i, const BiquadElement& a) const;
  bool in_subfield(int i, const BiquadElement& a) const;
  // Coordinates in the integral basis.
  std::array<Rat, 4> basis_coords(const BiquadElement& a) const;
  std::optional<Vec> integral_coords(const BiquadElement& a) const;
  BiquadElement from_basis(const Vec& v) const;
  bool is_integral(const BiquadElement& a) const { return integral_coords(a).has_value(); }
  // Algebraic-integer test independent of the integral basis (relative
  // trace and norm to sub[0] must be integral there).
  bool is_algebraic_integer(const BiquadElement& a) const;
  // Sum of |sigma(a)|^2 over the four embeddings.
  Rat t2(const BiquadElement& a) const;
  // log|sigma(a)| for the four embeddings in sign order (+,+), (+,-), (-,+), (-,-).
  std::array<double, 4> log_abs(const BiquadElement& a) const;
  std::string to_string(const BiquadElement& a) const;
};

BiquadFieldData field_data(long m1, long m2);

// Primes p with their ramification index in K.
int ramification_index(const BiquadFieldData& k, long p);

// Generator and order of the roots of unity in K.
std::pair<BiquadElement, int> roots_of_unity(const BiquadFieldData& k);

// Square root in K, if it exists.
std::optional<BiquadElement> sqrt_in(const BiquadFieldData& k, const BiquadElement& a);
std::optional<QuadElement> sqrt_in(const QuadraticFieldData& f, const QuadElement& a);

// Integral ideal of O_K as a 4x4 row Hermite form over the integral basis.
struct KIdeal {
  IntMatrix hnf;
  Int norm() const;
  bool operator==(const KIdeal& o) const { return hnf == o.hnf; }
};

KIdeal k_ideal(const BiquadFieldData& k, const std::vector<BiquadElement>& gens);
KIdeal k_ideal_mul(const BiquadFieldData& k, const KIdeal& a, const KIdeal& b);
bool k_ideal_contains(const BiquadFieldData& k, const KIdeal& a, const BiquadElement& x);
// a O_K for an ideal a of sub[i].
KIdeal extend_ideal(const BiquadFieldData& k, int i, const QuadIdeal& a);

// T-unit group of K, T = primes above a set of rational primes.
struct KUnitGroup {
  BiquadFieldData field;
  std::vector<long> primes;
  BiquadElement zeta;
  int w = 2;
  std::vector<BiquadElement> free_generators;
  std::array<SUnitLattice, 3> sub;
  IntMatrix psi_matrix;  // columns: psi of the free generators
  Int index;             // [E : mu_K * E1 E2 E3] over subfield groups
  Int torsion_index;     // [mu_K : roots of unity of the subfields]
  // Pairs (root, square) verified by exact squaring.
  std::vector<std::pair<BiquadElement, BiquadElement>> square_roots;

  FgAbelianGroup group() const;
  // Free parts of the subfield discrete logs of the three relative norms.
  Vec psi(const BiquadElement& x) const;
  // Coordinates (zeta exponent, free exponents).
  Vec log(const BiquadElement& x) const;
  BiquadElement element(const Vec& coords) const;
};

KUnitGroup s_unit_group(const BiquadFieldData& k, const std::vector<long>& primes);
inline KUnitGroup unit_group(const BiquadFieldData& k) { return s_unit_group(k, {}); }

struct PrincipalSearch {
  std::optional<BiquadElement> generator;
  bool complete = false;  // exhaustive under a proven bound
  long nodes = 0;
  double bound = 0;
};

// Looks for alpha in A with |N(alpha)| / N(A) supported on the given
// rational primes (exactly 1 when the list is empty).  With an empty list
// and the unit group of K, the search bound is proven, so a negative
// result is complete.
PrincipalSearch is_principal_sigma(const BiquadFieldData& k, const KIdeal& a,
                                   const std::vector<long>& primes, const KUnitGroup& units,
                                   long node_cap = 4000000);

}  // namespace capk
