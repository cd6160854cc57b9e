#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "capk/integer.hpp"
#include "capk/matrix.hpp"

namespace capk {

// Finitely generated abelian group  Z/d_1 + ... + Z/d_k + Z^rank  with
// d_1 | d_2 | ... | d_k and every d_i >= 2.  Coordinates of an element are
// ordered torsion first, free last.
class FgAbelianGroup {
 public:
  FgAbelianGroup() = default;
  FgAbelianGroup(Vec torsion, std::size_t rank);

  static FgAbelianGroup trivial() { return {}; }
  static FgAbelianGroup cyclic(const Int& n);
  static FgAbelianGroup free(std::size_t r) { return FgAbelianGroup({}, r); }
  // Normalizes an arbitrary list of cyclic orders (0 = infinite cyclic).
  static FgAbelianGroup from_orders(const Vec& orders);

  const Vec& torsion() const { return torsion_; }
  std::size_t rank() const { return rank_; }
  std::size_t ngens() const { return torsion_.size() + rank_; }
  // Order of the i-th generator, 0 for free generators.
  Int generator_order(std::size_t i) const;

  bool is_trivial() const { return torsion_.empty() && rank_ == 0; }
  bool is_finite() const { return rank_ == 0; }
  std::optional<Int> order() const;
  bool killed_by(const Int& n) const;

  Vec zero() const { return Vec(ngens()); }
  Vec reduce(Vec v) const;
  bool is_zero(const Vec& v) const;
  bool equal(const Vec& a, const Vec& b) const;
  // Diagonal relation matrix (ngens x ngens).
  IntMatrix relations() const;
  // All elements of a finite group in lexicographic coordinate order.
  std::vector<Vec> elements() const;

  std::string to_string() const;
  bool operator==(const FgAbelianGroup& o) const {
    return torsion_ == o.torsion_ && rank_ == o.rank_;
  }

  std::vector<std::string> labels;

 private:
  Vec torsion_;
  std::size_t rank_ = 0;
};

// Homomorphism given on generators: column j is the image of generator j.
class GroupHom {
 public:
  GroupHom() = default;
  GroupHom(FgAbelianGroup source, FgAbelianGroup target, IntMatrix matrix);

  static GroupHom zero(const FgAbelianGroup& s, const FgAbelianGroup& t);
  static GroupHom identity(const FgAbelianGroup& g);
  static GroupHom multiplication(const FgAbelianGroup& g, const Int& n);

  const FgAbelianGroup& source() const { return source_; }
  const FgAbelianGroup& target() const { return target_; }
  const IntMatrix& matrix() const { return matrix_; }

  Vec operator()(const Vec& x) const;
  // (next o this)
  GroupHom then(const GroupHom& next) const;
  GroupHom operator+(const GroupHom& o) const;
  GroupHom operator-(const GroupHom& o) const;
  bool is_zero() const;
  bool operator==(const GroupHom& o) const;

 private:
  FgAbelianGroup source_, target_;
  IntMatrix matrix_;
};

// Z^n / (column span of relations) in normal form.  proj maps Z^n
// coordinates to group coordinates, lift maps group generators back.
struct Quotient {
  FgAbelianGroup group;
  IntMatrix proj;  // group.ngens x n
  IntMatrix lift;  // n x group.ngens
  Vec project(const Vec& x) const { return group.reduce(proj * x); }
};

Quotient present(std::size_t n, const IntMatrix& relations);

struct Cokernel {
  GroupHom projection;  // target -> coker
  IntMatrix lift;       // coker generators -> target coordinates
};

// Kernel as an inclusion hom  Ker h -> h.source.
GroupHom kernel(const GroupHom& h);
Cokernel cokernel(const GroupHom& h);
// Image as an inclusion hom  Im h -> h.target.
GroupHom image(const GroupHom& h);
// Subgroup generated by gens, as an inclusion into g.
GroupHom subgroup(const FgAbelianGroup& g, const std::vector<Vec>& gens);
// Intersection of two subgroups given by inclusions into the same group.
GroupHom intersect(const GroupHom& a, const GroupHom& b);

std::optional<Vec> preimage(const GroupHom& h, const Vec& y);
bool in_image(const GroupHom& h, const Vec& y);
bool is_injective(const GroupHom& h);
bool is_surjective(const GroupHom& h);
// in: X -> Y, out: Y -> Z.  Checks out o in = 0 and Ker out within Im in.
bool is_exact_at(const GroupHom& in, const GroupHom& out);
// Same question answered by listing the elements of a finite middle group;
// nullopt when the middle group is infinite or larger than limit.
std::optional<bool> exact_by_enumeration(const GroupHom& in, const GroupHom& out,
                                         std::size_t limit = 1u << 16);

// Numerator subgroup (inclusion into an ambient group) modulo a subgroup of
// it given by ambient-coordinate generators.
struct Subquotient {
  FgAbelianGroup group;
  GroupHom numerator;  // numerator group -> ambient
  Quotient quotient;   // numerator coordinates -> group

  // Class of an ambient element lying in the numerator.
  Vec classify(const Vec& ambient) const;
  // Ambient representative of a class.
  Vec representative(const Vec& cls) const;
};

Subquotient subquotient(const GroupHom& numerator,
                        const std::vector<Vec>& denominator);

// Hom between subquotients induced by a map on ambient representatives.
GroupHom induced_hom(const Subquotient& from, const Subquotient& to,
                     const std::function<Vec(const Vec&)>& on_representatives);

GroupHom n_torsion(const FgAbelianGroup& g, const Int& n);
Cokernel mod_n(const FgAbelianGroup& g, const Int& n);

struct SixTermSequence {
  // Ker f, Ker gf, Ker g, Coker f, Coker gf, Coker g
  std::array<FgAbelianGroup, 6> groups;
  // Ker f -> Ker gf -> Ker g -> Coker f -> Coker gf -> Coker g
  std::array<GroupHom, 5> maps;
  // Exactness at each of the six nodes, endpoints included
  // (injective first map, surjective last map).
  std::array<bool, 6> node_exact{};
  bool exact = false;
};

SixTermSequence six_term(const GroupHom& f, const GroupHom& g);

}  // namespace capk
