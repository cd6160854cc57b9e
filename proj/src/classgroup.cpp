#include <mpfr.h>

#include <algorithm>
#include <cmath>

#include "capk/quadfield.hpp"

namespace capk {

namespace {

double log_rat(const Rat& q) {
  mpfr_t x;
  mpfr_init2(x, 128);
  mpfr_set_q(x, q.get_mpq_t(), MPFR_RNDN);
  mpfr_abs(x, x, MPFR_RNDN);
  mpfr_log(x, x, MPFR_RNDN);
  double d = mpfr_get_d(x, MPFR_RNDN);
  mpfr_clear(x);
  return d;
}

// log(|u| + |v| sqrt m): the embedding without cancellation.
double log_big_embedding(const Rat& u, const Rat& v, long m) {
  mpfr_t a, b;
  mpfr_inits2(192, a, b, static_cast<mpfr_ptr>(nullptr));
  mpfr_set_si(b, m, MPFR_RNDN);
  mpfr_sqrt(b, b, MPFR_RNDN);
  mpfr_set_q(a, v.get_mpq_t(), MPFR_RNDN);
  mpfr_abs(a, a, MPFR_RNDN);
  mpfr_mul(b, b, a, MPFR_RNDN);
  mpfr_set_q(a, u.get_mpq_t(), MPFR_RNDN);
  mpfr_abs(a, a, MPFR_RNDN);
  mpfr_add(a, a, b, MPFR_RNDN);
  mpfr_log(a, a, MPFR_RNDN);
  double d = mpfr_get_d(a, MPFR_RNDN);
  mpfr_clears(a, b, static_cast<mpfr_ptr>(nullptr));
  return d;
}

}  // namespace

std::vector<double> log_embeddings(const QuadraticFieldData& f, const QuadElement& x) {
  Rat nx = f.norm(x);
  if (nx == 0) throw DomainError("log of zero");
  if (f.disc < 0) return {log_rat(nx)};
  auto [u, v] = f.sqrt_coords(x);
  double big = log_big_embedding(u, v, f.m);
  double small = log_rat(nx) - big;
  bool plus_is_big = sgn(u) * sgn(v) >= 0;
  return plus_is_big ? std::vector<double>{big, small} : std::vector<double>{small, big};
}

// ---- class group ----------------------------------------------------------

namespace {

long minkowski_prime_bound(const QuadraticFieldData& f) {
  double d = std::sqrt(std::fabs(f.disc.get_d()));
  double b = f.disc < 0 ? 2.0 / M_PI * d : d / 2.0;
  return static_cast<long>(std::floor(b));
}

QuadIdeal small(const QuadraticFieldData& f, const QuadIdeal& I) { return reduce_ideal(f, I).ideal; }

}  // namespace

Vec ClassGroup::dlog(const QuadraticFieldData& f, const QuadIdeal& I) const {
  auto it = table.find(class_key(f, I));
  if (it == table.end()) throw Inconsistency("ideal class missing from the class table");
  Vec e(it->second.begin(), it->second.end());
  return presentation.project(e);
}

QuadIdeal ClassGroup::ideal_of(const QuadraticFieldData& f, const Vec& exps) const {
  QuadIdeal r = unit_ideal();
  for (std::size_t i = 0; i < exps.size(); ++i) {
    if (exps[i] == 0) continue;
    QuadIdeal p = exps[i] > 0 ? base[i] : ideal_conj(f, base[i]);
    unsigned long k = Int(abs(exps[i])).get_ui();
    for (unsigned long j = 0; j < k; ++j) r = small(f, ideal_mul(f, r, p));
  }
  return r;
}

ClassGroup class_group(const QuadraticFieldData& f) {
  if (abs(f.disc) > kMaxQuadDisc)
    throw BoundExceeded("|D| = " + Int(abs(f.disc)).get_str() + " exceeds the configured cap");
  ClassGroup cg;
  long bound = minkowski_prime_bound(f);
  for (long p = 2; p <= bound; ++p) {
    if (!is_prime(Int(p))) continue;
    Splitting s = splitting(f, p);
    if (s.type == SplitType::inert) continue;
    cg.base.push_back(s.primes.front());
  }
  const std::size_t k = cg.base.size();

  struct Entry {
    QuadIdeal ideal;
    std::vector<long> exps;
  };
  std::vector<Entry> elems{{unit_ideal(), std::vector<long>(k, 0)}};
  cg.table[class_key(f, unit_ideal())] = elems[0].exps;
  IntMatrix rel(k, k);

  for (std::size_t i = 0; i < k; ++i) {
    // Smallest e with base[i]^e in the subgroup found so far.
    std::vector<QuadIdeal> powers{unit_ideal()};
    QuadIdeal x = small(f, cg.base[i]);
    long e = 1;
    for (;;) {
      auto it = cg.table.find(class_key(f, x));
      if (it != cg.table.end()) {
        for (std::size_t j = 0; j < k; ++j) rel(j, i) = -it->second[j];
        rel(i, i) += e;
        break;
      }
      powers.push_back(x);
      x = small(f, ideal_mul(f, x, cg.base[i]));
      ++e;
    }
    const std::size_t old = elems.size();
    for (long j = 1; j < e; ++j)
      for (std::size_t h = 0; h < old; ++h) {
        Entry n{small(f, ideal_mul(f, elems[h].ideal, powers[j])), elems[h].exps};
        n.exps[i] += j;
        auto [pos, fresh] = cg.table.emplace(class_key(f, n.ideal), n.exps);
        if (!fresh) throw Inconsistency("coset enumeration met a class twice");
        elems.push_back(std::move(n));
      }
  }

  cg.presentation = present(k, rel);
  cg.group = cg.presentation.group;
  for (std::size_t g = 0; g < cg.group.ngens(); ++g)
    cg.generators.push_back(cg.ideal_of(f, cg.presentation.lift.column(g)));
  if (*cg.group.order() != Int(static_cast<unsigned long>(cg.table.size())))
    throw Inconsistency("class table size differs from the group order");
  return cg;
}

SigmaClassGroup sigma_class_group(const QuadraticFieldData& f, const std::vector<QuadIdeal>& sigma) {
  SigmaClassGroup s;
  s.cl = class_group(f);
  std::vector<Vec> cols;
  for (const auto& P : sigma) cols.push_back(s.cl.dlog(f, P));
  GroupHom h(FgAbelianGroup::free(sigma.size()), s.cl.group,
             IntMatrix::from_columns(s.cl.group.ngens(), cols));
  Cokernel ck = cokernel(h);
  s.projection = ck.projection;
  s.group = ck.projection.target();
  for (std::size_t g = 0; g < s.group.ngens(); ++g)
    s.generators.push_back(s.cl.ideal_of(f, s.cl.presentation.lift * ck.lift.column(g)));
  return s;
}

// ---- S-units --------------------------------------------------------------

FgAbelianGroup SUnitLattice::group() const {
  Vec orders{Int(torsion_order)};
  for (std::size_t i = 0; i < free_generators.size(); ++i) orders.push_back(0);
  return FgAbelianGroup::from_orders(orders);
}

QuadElement SUnitLattice::element(const Vec& coords) const {
  const QuadraticFieldData& f = field;
  QuadElement x = f.pow(torsion_generator, mod_pos(coords.at(0), torsion_order).get_si());
  for (std::size_t i = 0; i < free_generators.size(); ++i)
    x = f.mul(x, f.pow(free_generators[i], to_i64(coords.at(i + 1))));
  return x;
}

namespace {

bool is_unit(const QuadraticFieldData& f, const QuadElement& x) {
  Rat n = f.norm(x);
  return f.is_integral(x) && (n == 1 || n == -1);
}

}  // namespace

Vec SUnitLattice::log(const QuadElement& x) const {
  const QuadraticFieldData& f = field;
  if (x.is_zero()) throw DomainError("zero is not a Sigma-unit");
  const std::size_t s = primes.size();
  const std::size_t off = f.disc > 0 ? 1 : 0;
  Vec v(s);
  for (std::size_t i = 0; i < s; ++i) v[i] = valuation(f, primes[i], x);
  Vec c(s);
  if (s > 0) {
    IntMatrix L = valuation_matrix.submatrix(0, off, s, s);
    auto sol = solve_integer(L, v);
    if (!sol) throw DomainError("valuations outside the Sigma-unit lattice");
    c = *sol;
  }
  QuadElement r = x;
  for (std::size_t j = 0; j < s; ++j)
    r = f.mul(r, f.pow(free_generators[off + j], -to_i64(c[j])));
  if (!is_unit(f, r)) throw DomainError("element is not a Sigma-unit");

  Vec out(1 + free_generators.size());
  for (std::size_t j = 0; j < s; ++j) out[1 + off + j] = c[j];
  if (off) {
    const QuadElement& eps = free_generators[0];
    double le = log_embeddings(f, eps)[0];
    double lr = log_embeddings(f, r)[0];
    long k = std::lround(lr / le);
    QuadElement q = f.mul(r, f.pow(eps, -k));
    if (q == f.one()) {
      out[0] = 0;
    } else if (q == QuadElement(-1)) {
      out[0] = 1;
    } else {
      throw Inconsistency("unit exponent recovery failed");
    }
    out[1] = k;
    return out;
  }
  QuadElement z = f.one();
  for (int k = 0; k < torsion_order; ++k) {
    if (z == r) {
      out[0] = k;
      return out;
    }
    z = f.mul(z, torsion_generator);
  }
  throw Inconsistency("unit of an imaginary field is not a root of unity");
}

SUnitLattice s_unit_group(const QuadraticFieldData& f, const std::vector<QuadIdeal>& sigma) {
  SUnitLattice u;
  u.field = f;
  auto [zeta, w] = roots_of_unity(f);
  u.torsion_generator = zeta;
  u.torsion_order = w;
  u.primes = sigma;
  const std::size_t s = sigma.size();
  if (f.disc > 0) u.free_generators.push_back(fundamental_unit(f));

  IntMatrix kernel_basis(s, s);
  if (s > 0) {
    ClassGroup cl = class_group(f);
    std::vector<Vec> cols;
    for (const auto& P : sigma) cols.push_back(cl.dlog(f, P));
    GroupHom h(FgAbelianGroup::free(s), cl.group, IntMatrix::from_columns(cl.group.ngens(), cols));
    GroupHom k = kernel(h);
    if (k.source().ngens() != s || !k.source().torsion().empty())
      throw Inconsistency("Sigma-valuation lattice has the wrong rank");
    kernel_basis = k.matrix();
  }

  for (std::size_t j = 0; j < s; ++j) {
    QuadIdeal pos = unit_ideal(), neg = unit_ideal(), num = unit_ideal();
    Int d = 1;
    for (std::size_t i = 0; i < s; ++i) {
      const Int& v = kernel_basis(i, j);
      if (v == 0) continue;
      unsigned long k = Int(abs(v)).get_ui();
      if (v > 0) {
        pos = ideal_mul(f, pos, ideal_pow(f, sigma[i], k));
        num = ideal_mul(f, num, ideal_pow(f, sigma[i], k));
      } else {
        neg = ideal_mul(f, neg, ideal_pow(f, sigma[i], k));
        num = ideal_mul(f, num, ideal_pow(f, ideal_conj(f, sigma[i]), k));
        d *= pow_int(sigma[i].norm(), k);
      }
    }
    auto x = is_principal(f, num);
    if (!x) throw Inconsistency("kernel vector of the class map gives a non-principal ideal");
    // (x) * prod_{v<0} P^|v| = (d) * prod_{v>0} P^v certifies the divisor.
    if (ideal_mul(f, principal_ideal(f, *x), neg) != ideal_mul(f, principal_ideal(f, QuadElement(d)), pos))
      throw Inconsistency("S-unit divisor certificate failed");
    u.free_generators.push_back(f.scale(*x, Rat(1) / Rat(d)));
  }

  const std::size_t r = u.free_generators.size();
  const std::size_t off = f.disc > 0 ? 1 : 0;
  u.valuation_matrix = IntMatrix(s, r);
  for (std::size_t j = 0; j < s; ++j)
    for (std::size_t i = 0; i < s; ++i) {
      u.valuation_matrix(i, off + j) = kernel_basis(i, j);
      if (valuation(f, sigma[i], u.free_generators[off + j]) != kernel_basis(i, j))
        throw Inconsistency("S-unit valuation mismatch");
    }
  std::size_t places = f.disc > 0 ? 2 : 1;
  u.log_matrix.assign(places, std::vector<double>(r));
  for (std::size_t j = 0; j < r; ++j) {
    auto l = log_embeddings(f, u.free_generators[j]);
    for (std::size_t p = 0; p < places; ++p) u.log_matrix[p][j] = l[p];
  }
  return u;
}

}  // namespace capk
