#include "capk/abelian.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace capk {

FgAbelianGroup::FgAbelianGroup(Vec torsion, std::size_t rank)
    : torsion_(std::move(torsion)), rank_(rank) {
  for (std::size_t i = 0; i < torsion_.size(); ++i) {
    if (torsion_[i] < 2) throw DomainError("invariant factor below 2");
    if (i > 0 && !mpz_divisible_p(torsion_[i].get_mpz_t(),
                                  torsion_[i - 1].get_mpz_t()))
      throw DomainError("invariant factors must divide each other");
  }
}

FgAbelianGroup FgAbelianGroup::cyclic(const Int& n) {
  if (n == 0) return free(1);
  if (n == 1) return trivial();
  return FgAbelianGroup({abs(n)}, 0);
}

FgAbelianGroup FgAbelianGroup::from_orders(const Vec& orders) {
  Vec d(orders.size());
  for (std::size_t i = 0; i < orders.size(); ++i) d[i] = abs(orders[i]);
  return present(orders.size(), IntMatrix::diagonal(d)).group;
}

Int FgAbelianGroup::generator_order(std::size_t i) const {
  return i < torsion_.size() ? torsion_[i] : Int(0);
}

std::optional<Int> FgAbelianGroup::order() const {
  if (rank_ > 0) return std::nullopt;
  Int o = 1;
  for (const auto& d : torsion_) o *= d;
  return o;
}

bool FgAbelianGroup::killed_by(const Int& n) const {
  if (rank_ > 0) return n == 0;
  for (const auto& d : torsion_)
    if (!mpz_divisible_p(n.get_mpz_t(), d.get_mpz_t())) return false;
  return true;
}

Vec FgAbelianGroup::reduce(Vec v) const {
  if (v.size() != ngens()) throw ShapeError("element has wrong length");
  for (std::size_t i = 0; i < torsion_.size(); ++i) v[i] = mod_pos(v[i], torsion_[i]);
  return v;
}

bool FgAbelianGroup::is_zero(const Vec& v) const {
  Vec r = reduce(v);
  for (const auto& x : r)
    if (x != 0) return false;
  return true;
}

bool FgAbelianGroup::equal(const Vec& a, const Vec& b) const {
  return reduce(a) == reduce(b);
}

IntMatrix FgAbelianGroup::relations() const {
  IntMatrix r(ngens(), ngens());
  for (std::size_t i = 0; i < torsion_.size(); ++i) r(i, i) = torsion_[i];
  return r;
}

std::vector<Vec> FgAbelianGroup::elements() const {
  if (!is_finite()) throw Unsupported("cannot enumerate an infinite group");
  std::vector<Vec> out;
  Vec cur(ngens());
  for (;;) {
    out.push_back(cur);
    std::size_t i = ngens();
    while (i > 0) {
      --i;
      cur[i] += 1;
      if (cur[i] < torsion_[i]) break;
      cur[i] = 0;
      if (i == 0) return out;
    }
    if (ngens() == 0) return out;
  }
}

std::string FgAbelianGroup::to_string() const {
  if (is_trivial()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& d : torsion_) {
    os << (first ? "" : " + ") << "Z/" << d;
    first = false;
  }
  if (rank_ > 0) {
    os << (first ? "" : " + ") << "Z";
    if (rank_ > 1) os << "^" << rank_;
  }
  return os.str();
}

GroupHom::GroupHom(FgAbelianGroup source, FgAbelianGroup target, IntMatrix matrix)
    : source_(std::move(source)), target_(std::move(target)), matrix_(std::move(matrix)) {
  if (matrix_.rows() != target_.ngens() || matrix_.cols() != source_.ngens())
    throw ShapeError("hom matrix is " + std::to_string(matrix_.rows()) + "x" +
                     std::to_string(matrix_.cols()) + ", expected " +
                     std::to_string(target_.ngens()) + "x" +
                     std::to_string(source_.ngens()));
  for (std::size_t j = 0; j < matrix_.cols(); ++j) {
    Vec col = target_.reduce(matrix_.column(j));
    matrix_.set_column(j, col);
    Int d = source_.generator_order(j);
    if (d != 0) {
      Vec killed = col;
      for (auto& x : killed) x *= d;
      if (!target_.is_zero(killed))
        throw DomainError("hom does not respect torsion of generator " +
                          std::to_string(j));
    }
  }
}

GroupHom GroupHom::zero(const FgAbelianGroup& s, const FgAbelianGroup& t) {
  return GroupHom(s, t, IntMatrix(t.ngens(), s.ngens()));
}

GroupHom GroupHom::identity(const FgAbelianGroup& g) {
  return GroupHom(g, g, IntMatrix::identity(g.ngens()));
}

GroupHom GroupHom::multiplication(const FgAbelianGroup& g, const Int& n) {
  IntMatrix m = IntMatrix::identity(g.ngens());
  for (std::size_t i = 0; i < g.ngens(); ++i) m(i, i) = n;
  return GroupHom(g, g, m);
}

Vec GroupHom::operator()(const Vec& x) const {
  return target_.reduce(matrix_ * x);
}

GroupHom GroupHom::then(const GroupHom& next) const {
  if (!(next.source_ == target_)) throw ShapeError("composition of incompatible homs");
  return GroupHom(source_, next.target_, next.matrix_ * matrix_);
}

GroupHom GroupHom::operator+(const GroupHom& o) const {
  if (!(source_ == o.source_ && target_ == o.target_)) throw ShapeError("sum of incompatible homs");
  return GroupHom(source_, target_, matrix_ + o.matrix_);
}

GroupHom GroupHom::operator-(const GroupHom& o) const {
  if (!(source_ == o.source_ && target_ == o.target_)) throw ShapeError("difference of incompatible homs");
  return GroupHom(source_, target_, matrix_ - o.matrix_);
}

bool GroupHom::is_zero() const {
  for (std::size_t j = 0; j < matrix_.cols(); ++j)
    if (!target_.is_zero(matrix_.column(j))) return false;
  return true;
}

bool GroupHom::operator==(const GroupHom& o) const {
  if (!(source_ == o.source_ && target_ == o.target_)) return false;
  return (*this - o).is_zero();
}

Quotient present(std::size_t n, const IntMatrix& relations) {
  if (relations.rows() != n) throw ShapeError("relations must have n rows");
  SmithForm s = smith_normal_form(relations);
  std::vector<std::size_t> keep;
  Vec torsion;
  std::size_t rank = 0;
  for (std::size_t i = 0; i < n; ++i) {
    Int d = i < s.diag.size() ? s.diag[i] : Int(0);
    if (d == 1) continue;
    keep.push_back(i);
    if (d == 0)
      ++rank;
    else
      torsion.push_back(d);
  }
  Quotient q;
  q.group = FgAbelianGroup(torsion, rank);
  q.proj = IntMatrix(keep.size(), n);
  q.lift = IntMatrix(n, keep.size());
  for (std::size_t k = 0; k < keep.size(); ++k) {
    for (std::size_t j = 0; j < n; ++j) {
      q.proj(k, j) = s.U(keep[k], j);
      q.lift(j, k) = s.Uinv(j, keep[k]);
    }
  }
  for (std::size_t k = 0; k < q.group.torsion().size(); ++k)
    for (std::size_t j = 0; j < n; ++j) q.proj(k, j) = mod_pos(q.proj(k, j), q.group.torsion()[k]);
  return q;
}

namespace {

// Column parts x of the integer solutions (x, t) of M x + R t = 0, where R
// is the relation matrix of the target.  They generate the preimage of zero.
std::vector<Vec> kernel_lattice(const IntMatrix& m, const FgAbelianGroup& target) {
  IntMatrix a = m.hconcat(target.relations());
  IntMatrix k = integer_kernel(a);
  std::vector<Vec> out;
  for (std::size_t j = 0; j < k.cols(); ++j) {
    Vec x(m.cols());
    bool nonzero = false;
    for (std::size_t i = 0; i < m.cols(); ++i) {
      x[i] = k(i, j);
      if (x[i] != 0) nonzero = true;
    }
    if (nonzero) out.push_back(std::move(x));
  }
  return out;
}

}  // namespace

GroupHom subgroup(const FgAbelianGroup& g, const std::vector<Vec>& gens) {
  const std::size_t k = gens.size();
  if (k == 0) return GroupHom::zero(FgAbelianGroup::trivial(), g);
  IntMatrix gm = IntMatrix::from_columns(g.ngens(), gens);
  std::vector<Vec> rel = kernel_lattice(gm, g);
  IntMatrix r = rel.empty() ? IntMatrix(k, 0) : IntMatrix::from_columns(k, rel);
  Quotient q = present(k, r);
  return GroupHom(q.group, g, gm * q.lift);
}

GroupHom kernel(const GroupHom& h) {
  return subgroup(h.source(), kernel_lattice(h.matrix(), h.target()));
}

Cokernel cokernel(const GroupHom& h) {
  const FgAbelianGroup& b = h.target();
  Quotient q = present(b.ngens(), b.relations().hconcat(h.matrix()));
  return {GroupHom(b, q.group, q.proj), q.lift};
}

GroupHom image(const GroupHom& h) {
  std::vector<Vec> cols;
  for (std::size_t j = 0; j < h.matrix().cols(); ++j) cols.push_back(h.matrix().column(j));
  return subgroup(h.target(), cols);
}

GroupHom intersect(const GroupHom& a, const GroupHom& b) {
  if (!(a.target() == b.target())) throw ShapeError("intersection in different groups");
  Cokernel cb = cokernel(b);
  GroupHom k = kernel(a.then(cb.projection));
  return k.then(a);
}

std::optional<Vec> preimage(const GroupHom& h, const Vec& y) {
  IntMatrix a = h.matrix().hconcat(h.target().relations());
  auto sol = solve_integer(a, h.target().reduce(y));
  if (!sol) return std::nullopt;
  Vec x(sol->begin(), sol->begin() + static_cast<long>(h.source().ngens()));
  return h.source().reduce(x);
}

bool in_image(const GroupHom& h, const Vec& y) { return preimage(h, y).has_value(); }

bool is_injective(const GroupHom& h) { return kernel(h).source().is_trivial(); }

bool is_surjective(const GroupHom& h) {
  return cokernel(h).projection.target().is_trivial();
}

bool is_exact_at(const GroupHom& in, const GroupHom& out) {
  if (!(in.target() == out.source())) throw ShapeError("exactness at mismatched node");
  if (!in.then(out).is_zero()) return false;
  GroupHom k = kernel(out);
  for (std::size_t j = 0; j < k.matrix().cols(); ++j)
    if (!in_image(in, k.matrix().column(j))) return false;
  return true;
}

namespace {

constexpr long kSmall = 1L << 40;

// Machine-word version: elements of g are numbered in mixed radix with the
// first coordinate fastest.  nullopt when some value does not fit.
std::optional<bool> exact_by_enumeration_small(const GroupHom& in, const GroupHom& out, std::size_t n) {
  const FgAbelianGroup& g = in.target();
  const FgAbelianGroup& t = out.target();
  std::size_t k = g.ngens();
  std::vector<long> d(k), stride(k);
  long s = 1;
  for (std::size_t i = 0; i < k; ++i) {
    d[i] = g.torsion()[i].get_si();
    stride[i] = s;
    s *= d[i];
  }
  std::vector<long> tmod;
  for (const auto& x : t.torsion()) {
    if (x >= kSmall) return std::nullopt;
    tmod.push_back(x.get_si());
  }
  std::vector<std::vector<long>> gens;
  for (std::size_t j = 0; j < in.source().ngens(); ++j) {
    Vec e(in.source().ngens());
    e[j] = 1;
    Vec y = g.reduce(in(e));
    std::vector<long> v(k);
    for (std::size_t i = 0; i < k; ++i) v[i] = y[i].get_si();
    gens.push_back(v);
  }
  std::vector<std::vector<long>> cols;
  for (std::size_t j = 0; j < k; ++j) {
    Vec e(k);
    e[j] = 1;
    Vec y = t.reduce(out(e));
    for (std::size_t i = tmod.size(); i < y.size(); ++i)
      if (y[i] != 0) return std::nullopt;  // a finite group has no free image
    std::vector<long> v(tmod.size());
    for (std::size_t i = 0; i < tmod.size(); ++i) v[i] = y[i].get_si();
    cols.push_back(v);
  }

  std::vector<char> image(n, 0);
  image[0] = 1;
  std::vector<long> frontier{0}, next;
  std::vector<long> x(k);
  while (!frontier.empty()) {
    next.clear();
    for (long idx : frontier) {
      for (std::size_t i = 0; i < k; ++i) x[i] = (idx / stride[i]) % d[i];
      for (const auto& y : gens) {
        long z = 0;
        for (std::size_t i = 0; i < k; ++i) z += ((x[i] + y[i]) % d[i]) * stride[i];
        if (!image[z]) {
          image[z] = 1;
          next.push_back(z);
        }
      }
    }
    frontier.swap(next);
  }

  // Odometer walk keeping out(x) up to date.
  std::vector<long> c(k, 0), v(tmod.size(), 0);
  for (std::size_t idx = 0; idx < n; ++idx) {
    bool zero = std::all_of(v.begin(), v.end(), [](long a) { return a == 0; });
    if (zero != (image[idx] != 0)) return false;
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t r = 0; r < v.size(); ++r) v[r] = (v[r] + cols[i][r]) % tmod[r];
      if (++c[i] < d[i]) break;
      c[i] = 0;
    }
  }
  return true;
}

}  // namespace

std::optional<bool> exact_by_enumeration(const GroupHom& in, const GroupHom& out,
                                         std::size_t limit) {
  const FgAbelianGroup& g = in.target();
  if (!g.is_finite() || *g.order() > limit) return std::nullopt;
  if (auto r = exact_by_enumeration_small(in, out, g.order()->get_ui())) return r;
  std::set<Vec> image{g.zero()};
  std::vector<Vec> frontier{g.zero()}, gens;
  for (std::size_t j = 0; j < in.source().ngens(); ++j) {
    Vec e(in.source().ngens());
    e[j] = 1;
    gens.push_back(in(e));
  }
  while (!frontier.empty()) {
    std::vector<Vec> next;
    for (const auto& x : frontier)
      for (const auto& y : gens) {
        Vec z(x.size());
        for (std::size_t i = 0; i < z.size(); ++i) z[i] = x[i] + y[i];
        z = g.reduce(z);
        if (image.insert(z).second) next.push_back(std::move(z));
      }
    frontier.swap(next);
  }
  for (const auto& x : g.elements())
    if (out.target().is_zero(out(x)) != (image.count(x) > 0)) return false;
  return true;
}

Vec Subquotient::classify(const Vec& ambient) const {
  auto x = preimage(numerator, ambient);
  if (!x) throw Inconsistency("element outside the numerator subgroup");
  return quotient.project(*x);
}

Vec Subquotient::representative(const Vec& cls) const {
  return numerator(quotient.lift * cls);
}

Subquotient subquotient(const GroupHom& numerator, const std::vector<Vec>& denominator) {
  const FgAbelianGroup& n = numerator.source();
  IntMatrix rel = n.relations();
  if (!denominator.empty()) {
    std::vector<Vec> cols;
    for (const auto& d : denominator) {
      auto x = preimage(numerator, d);
      if (!x) throw Inconsistency("denominator not contained in numerator");
      cols.push_back(*x);
    }
    rel = rel.hconcat(IntMatrix::from_columns(n.ngens(), cols));
  }
  Subquotient sq;
  sq.numerator = numerator;
  sq.quotient = present(n.ngens(), rel);
  sq.group = sq.quotient.group;
  return sq;
}

GroupHom induced_hom(const Subquotient& from, const Subquotient& to,
                     const std::function<Vec(const Vec&)>& on_representatives) {
  IntMatrix m(to.group.ngens(), from.group.ngens());
  for (std::size_t j = 0; j < from.group.ngens(); ++j) {
    Vec e(from.group.ngens());
    e[j] = 1;
    m.set_column(j, to.classify(on_representatives(from.representative(e))));
  }
  return GroupHom(from.group, to.group, m);
}

GroupHom n_torsion(const FgAbelianGroup& g, const Int& n) {
  if (n < 1) throw DomainError("n-torsion needs n >= 1");
  return kernel(GroupHom::multiplication(g, n));
}

Cokernel mod_n(const FgAbelianGroup& g, const Int& n) {
  if (n < 1) throw DomainError("mod n needs n >= 1");
  return cokernel(GroupHom::multiplication(g, n));
}

SixTermSequence six_term(const GroupHom& f, const GroupHom& g) {
  if (!(f.target() == g.source()))
    throw ShapeError("six_term: target of f differs from source of g");
  GroupHom gf = f.then(g);
  GroupHom kf = kernel(f), kgf = kernel(gf), kg = kernel(g);
  Cokernel cf = cokernel(f), cgf = cokernel(gf), cg = cokernel(g);

  SixTermSequence s;
  s.groups = {kf.source(), kgf.source(), kg.source(), cf.projection.target(),
              cgf.projection.target(), cg.projection.target()};

  auto build = [](const FgAbelianGroup& src, const FgAbelianGroup& dst,
                  const std::function<Vec(const Vec&)>& on_gen) {
    IntMatrix m(dst.ngens(), src.ngens());
    for (std::size_t j = 0; j < src.ngens(); ++j) {
      Vec e(src.ngens());
      e[j] = 1;
      m.set_column(j, on_gen(e));
    }
    return GroupHom(src, dst, m);
  };
  auto must = [](std::optional<Vec> v) {
    if (!v) throw Inconsistency("six_term: induced map is not defined");
    return *v;
  };

  s.maps[0] = build(s.groups[0], s.groups[1],
                    [&](const Vec& e) { return must(preimage(kgf, kf(e))); });
  s.maps[1] = build(s.groups[1], s.groups[2],
                    [&](const Vec& e) { return must(preimage(kg, f(kgf(e)))); });
  s.maps[2] = build(s.groups[2], s.groups[3],
                    [&](const Vec& e) { return cf.projection(kg(e)); });
  s.maps[3] = build(s.groups[3], s.groups[4],
                    [&](const Vec& e) { return cgf.projection(g(cf.lift * e)); });
  s.maps[4] = build(s.groups[4], s.groups[5],
                    [&](const Vec& e) { return cg.projection(cgf.lift * e); });

  // Algebraic check everywhere, and enumeration on top at small finite nodes.
  s.node_exact[0] = is_injective(s.maps[0]);
  for (std::size_t i = 1; i < 5; ++i) {
    s.node_exact[i] = is_exact_at(s.maps[i - 1], s.maps[i]);
    if (auto e = exact_by_enumeration(s.maps[i - 1], s.maps[i])) s.node_exact[i] = s.node_exact[i] && *e;
  }
  s.node_exact[5] = is_surjective(s.maps[4]);
  s.exact = true;
  for (bool b : s.node_exact) s.exact = s.exact && b;
  return s;
}

}  // namespace capk
