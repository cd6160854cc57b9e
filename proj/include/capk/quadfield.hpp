#pragma once

#include <tuple>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "capk/abelian.hpp"

namespace capk {

// Hard cap on |D| for class-group work.
inline constexpr long kMaxQuadDisc = 1000000;

// a + b*omega with rational coordinates.
struct QuadElement {
  Rat a, b;
  QuadElement() = default;
  QuadElement(Rat x, Rat y = 0) : a(std::move(x)), b(std::move(y)) {}
  bool operator==(const QuadElement& o) const { return a == o.a && b == o.b; }
  bool is_zero() const { return a == 0 && b == 0; }
};

// Q(sqrt m) with integral basis (1, omega), omega^2 = t*omega - n.
struct QuadraticFieldData {
  long m = 0;
  Int disc;
  bool half = false;  // omega = (1 + sqrt m)/2
  Int t, n;           // trace and norm of omega
  int r1 = 0, r2 = 0;

  QuadElement one() const { return {1, 0}; }
  QuadElement omega() const { return {0, 1}; }
  // sqrt m itself
  QuadElement root() const { return half ? QuadElement(-1, 2) : QuadElement(0, 1); }

  QuadElement add(const QuadElement& x, const QuadElement& y) const;
  QuadElement sub(const QuadElement& x, const QuadElement& y) const;
  QuadElement mul(const QuadElement& x, const QuadElement& y) const;
  QuadElement neg(const QuadElement& x) const { return {-x.a, -x.b}; }
  QuadElement scale(const QuadElement& x, const Rat& q) const { return {x.a * q, x.b * q}; }
  QuadElement conj(const QuadElement& x) const;
  QuadElement inv(const QuadElement& x) const;
  QuadElement div(const QuadElement& x, const QuadElement& y) const { return mul(x, inv(y)); }
  QuadElement pow(const QuadElement& x, long e) const;
  Rat norm(const QuadElement& x) const;
  Rat trace(const QuadElement& x) const;
  bool is_integral(const QuadElement& x) const;
  // Coordinates over (1, sqrt m).
  std::pair<Rat, Rat> sqrt_coords(const QuadElement& x) const;
  QuadElement from_sqrt_coords(const Rat& u, const Rat& v) const;
  // Value under the embedding sqrt m > 0 (real fields only).
  double approx(const QuadElement& x) const;
  std::string to_string(const QuadElement& x) const;
};

QuadraticFieldData field_data(long m);

// Integral ideal with Z-basis {a, b + c*omega}, 0 <= b < a, c | a, c | b.
struct QuadIdeal {
  Int a = 1, b = 0, c = 1;
  Int norm() const { return a * c; }
  IntMatrix hnf() const;  // rows are the basis vectors over (1, omega)
  bool operator==(const QuadIdeal& o) const { return a == o.a && b == o.b && c == o.c; }
  bool operator!=(const QuadIdeal& o) const { return !(*this == o); }
  bool operator<(const QuadIdeal& o) const { return std::tie(a, b, c) < std::tie(o.a, o.b, o.c); }
  std::string to_string() const;
};

QuadIdeal ideal_from_generators(const QuadraticFieldData& f, const std::vector<QuadElement>& gens);
QuadIdeal principal_ideal(const QuadraticFieldData& f, const QuadElement& x);
QuadIdeal unit_ideal();
QuadIdeal ideal_mul(const QuadraticFieldData& f, const QuadIdeal& x, const QuadIdeal& y);
QuadIdeal ideal_pow(const QuadraticFieldData& f, const QuadIdeal& x, unsigned long e);
QuadIdeal ideal_conj(const QuadraticFieldData& f, const QuadIdeal& x);
bool ideal_contains(const QuadraticFieldData& f, const QuadIdeal& I, const QuadElement& x);
// Is the Z-module closed under multiplication by omega?
bool is_ideal(const QuadraticFieldData& f, const QuadIdeal& I);

enum class SplitType { split, inert, ramified };

struct Splitting {
  int symbol = 0;  // Kronecker (D/p)
  SplitType type = SplitType::inert;
  std::vector<QuadIdeal> primes;
};

Splitting splitting(const QuadraticFieldData& f, const Int& p);
// Valuation of a nonzero element at a prime ideal above p.
int valuation(const QuadraticFieldData& f, const QuadIdeal& P, const QuadElement& x);
// Rational prime below a prime ideal.
Int prime_below(const QuadIdeal& P);

struct Form {
  Int A, B, C;
  bool operator==(const Form& o) const { return A == o.A && B == o.B && C == o.C; }
  bool operator!=(const Form& o) const { return !(*this == o); }
  bool operator<(const Form& o) const { return std::tie(A, B, C) < std::tie(o.A, o.B, o.C); }
  std::string to_string() const;
};

// Form N(x a1 + y a2)/N(I) attached to the HNF basis of a primitive-free ideal.
Form ideal_form(const QuadraticFieldData& f, const QuadIdeal& I);
QuadIdeal form_ideal(const QuadraticFieldData& f, const Form& q);

// J = gamma * I with N(J) small.
struct ReducedIdeal {
  QuadIdeal ideal;
  QuadElement gamma;
  Form form;
};
ReducedIdeal reduce_ideal(const QuadraticFieldData& f, const QuadIdeal& I);

// A generator of I, or nullopt when I is not principal.  Decided by the
// reduction theory of forms, so a negative answer is a proof.
std::optional<QuadElement> is_principal(const QuadraticFieldData& f, const QuadIdeal& I);

// Key identifying the (wide) ideal class.
Form class_key(const QuadraticFieldData& f, const QuadIdeal& I);

// Fundamental unit > 1 of a real quadratic field.
QuadElement fundamental_unit(const QuadraticFieldData& f);
// log|x| at each infinite place: (sqrt m -> +sqrt m, sqrt m -> -sqrt m) for
// real fields, log N(x) for the complex place.  Computed without cancellation.
std::vector<double> log_embeddings(const QuadraticFieldData& f, const QuadElement& x);
// Generator of the roots of unity and its order.
std::pair<QuadElement, int> roots_of_unity(const QuadraticFieldData& f);

struct ClassGroup {
  FgAbelianGroup group;
  std::vector<QuadIdeal> generators;  // one ideal per group generator
  std::vector<QuadIdeal> base;        // small primes spanning the group
  Quotient presentation;              // base coordinates -> group
  std::map<Form, std::vector<long>> table;  // class key -> base exponents

  // Class of an ideal in group coordinates.
  Vec dlog(const QuadraticFieldData& f, const QuadIdeal& I) const;
  // Ideal in the class with the given base exponents.
  QuadIdeal ideal_of(const QuadraticFieldData& f, const Vec& base_exponents) const;
};

ClassGroup class_group(const QuadraticFieldData& f);

// Places: "inf" plus finite prime ideals.
struct SigmaClassGroup {
  FgAbelianGroup group;
  std::vector<QuadIdeal> generators;
  GroupHom projection;  // Cl -> Cl_Sigma
  ClassGroup cl;
};

SigmaClassGroup sigma_class_group(const QuadraticFieldData& f, const std::vector<QuadIdeal>& sigma);

struct SUnitLattice {
  QuadraticFieldData field;
  QuadElement torsion_generator;
  int torsion_order = 2;
  // Fundamental unit first for real fields, then one generator per
  // finite Sigma direction.
  std::vector<QuadElement> free_generators;
  std::vector<QuadIdeal> primes;
  IntMatrix valuation_matrix;                 // primes x free generators
  std::vector<std::vector<double>> log_matrix;  // infinite places x free generators

  FgAbelianGroup group() const;
  // Coordinates (torsion, free) of a Sigma-unit; throws DomainError otherwise.
  Vec log(const QuadElement& x) const;
  QuadElement element(const Vec& coords) const;
};

SUnitLattice s_unit_group(const QuadraticFieldData& f, const std::vector<QuadIdeal>& sigma);

// Prime ideals of F above a list of rational primes, in a stable order.
std::vector<QuadIdeal> primes_above(const QuadraticFieldData& f, const std::vector<long>& ps);

}  // namespace capk
