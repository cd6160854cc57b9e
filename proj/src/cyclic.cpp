#include "capk/cyclic.hpp"

#include <set>

namespace capk {

namespace {

GroupHom power(const GroupHom& s, int k) {
  GroupHom r = GroupHom::identity(s.source());
  for (int i = 0; i < k; ++i) r = r.then(s);
  return r;
}

Vec unit(std::size_t n, std::size_t j) {
  Vec e(n);
  e[j] = 1;
  return e;
}

std::vector<Vec> columns(const IntMatrix& m) {
  std::vector<Vec> out;
  for (std::size_t j = 0; j < m.cols(); ++j) out.push_back(m.column(j));
  return out;
}

Vec add(const FgAbelianGroup& g, const Vec& a, const Vec& b) {
  Vec c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
  return g.reduce(c);
}

// Greedy generating set of a list of elements of a finite group.
std::vector<Vec> greedy_generators(const FgAbelianGroup& g, const std::vector<Vec>& elems) {
  std::set<Vec> span{g.zero()};
  std::vector<Vec> gens;
  for (const auto& x : elems) {
    if (span.count(x)) continue;
    gens.push_back(x);
    std::vector<Vec> frontier(span.begin(), span.end());
    while (!frontier.empty()) {
      std::vector<Vec> next;
      for (const auto& y : frontier)
        for (const auto& z : gens) {
          Vec w = add(g, y, z);
          if (span.insert(w).second) next.push_back(std::move(w));
        }
      frontier.swap(next);
    }
  }
  return gens;
}

bool check_node(const GroupHom& in, const GroupHom& out) {
  bool ok = is_exact_at(in, out);
  if (auto e = exact_by_enumeration(in, out)) ok = ok && *e;
  return ok;
}

}  // namespace

CyclicModule::CyclicModule(FgAbelianGroup g, GroupHom s, int n)
    : group(std::move(g)), sigma(std::move(s)), order_n(n) {
  if (n < 1) throw DomainError("module order must be at least 1");
  if (!(sigma.source() == group) || !(sigma.target() == group))
    throw ShapeError("sigma must be an endomorphism of the module");
  if (!(power(sigma, n) == GroupHom::identity(group)))
    throw DomainError("sigma^" + std::to_string(n) + " is not the identity");
  if (!is_injective(sigma) || !is_surjective(sigma))
    throw DomainError("sigma is not an automorphism");
}

GroupHom fixed_points(const CyclicModule& m) {
  return kernel(m.sigma - GroupHom::identity(m.group));
}

GroupHom norm_endomorphism(const CyclicModule& m) {
  GroupHom n = GroupHom::zero(m.group, m.group);
  GroupHom p = GroupHom::identity(m.group);
  for (int i = 0; i < m.order_n; ++i) {
    n = n + p;
    p = p.then(m.sigma);
  }
  return n;
}

Subquotient tate_h0(const CyclicModule& m) {
  return subquotient(fixed_points(m), columns(norm_endomorphism(m).matrix()));
}

Subquotient tate_h_minus1(const CyclicModule& m) {
  GroupHom d = m.sigma - GroupHom::identity(m.group);
  return subquotient(kernel(norm_endomorphism(m)), columns(d.matrix()));
}

Subquotient h1(const CyclicModule& m) { return tate_h_minus1(m); }

FgAbelianGroup h1_bruteforce(const CyclicModule& m, std::size_t max_order) {
  const FgAbelianGroup& g = m.group;
  if (!g.is_finite()) throw Unsupported("cocycle enumeration needs a finite module");
  if (*g.order() > max_order) throw Unsupported("module too large for cocycle enumeration");
  const int n = m.order_n;
  std::vector<GroupHom> pw{GroupHom::identity(g)};
  for (int i = 1; i < n; ++i) pw.push_back(pw.back().then(m.sigma));

  std::vector<Vec> elems = g.elements();
  std::vector<Vec> cocycles, coboundaries;
  for (const auto& x : elems) {
    // The value on the generator determines c on every power of it.
    std::vector<Vec> c{g.zero()};
    for (int i = 0; i < n; ++i) c.push_back(add(g, c.back(), pw[i](x)));
    if (!g.is_zero(c[n])) continue;
    bool ok = true;
    for (int i = 0; i < n && ok; ++i)
      for (int j = 0; j < n && ok; ++j)
        ok = c[(i + j) % n] == add(g, c[i], pw[i](c[j]));
    if (ok) cocycles.push_back(x);
  }
  for (const auto& y : elems) {
    Vec b = m.sigma(y);
    for (std::size_t i = 0; i < b.size(); ++i) b[i] -= y[i];
    coboundaries.push_back(g.reduce(b));
  }
  GroupHom z1 = subgroup(g, greedy_generators(g, cocycles));
  return subquotient(z1, greedy_generators(g, coboundaries)).group;
}

PsiN psi_n(const CyclicModule& m, int n) {
  if (n < 2) throw DomainError("psi_n needs n >= 2");
  GroupHom fix = fixed_points(m);
  GroupHom norm = norm_endomorphism(m);
  IntMatrix nm(fix.source().ngens(), m.group.ngens());
  for (std::size_t j = 0; j < m.group.ngens(); ++j) {
    auto x = preimage(fix, norm(unit(m.group.ngens(), j)));
    if (!x) throw Inconsistency("norm does not land in the fixed points");
    nm.set_column(j, *x);
  }
  GroupHom to_fixed(m.group, fix.source(), nm);
  Cokernel mod = mod_n(fix.source(), n);
  PsiN out;
  out.subgroup = kernel(to_fixed.then(mod.projection));
  std::vector<Vec> denom = columns(fix.matrix());
  for (std::size_t j = 0; j < m.group.ngens(); ++j) {
    Vec e = unit(m.group.ngens(), j);
    e[j] = n;
    denom.push_back(m.group.reduce(e));
  }
  out.quotient = subquotient(out.subgroup, denom);
  return out;
}

TorsionSubmodule torsion_submodule(const CyclicModule& m, int n) {
  GroupHom inc = n_torsion(m.group, n);
  const FgAbelianGroup& t = inc.source();
  IntMatrix s(t.ngens(), t.ngens());
  for (std::size_t j = 0; j < t.ngens(); ++j) {
    auto x = preimage(inc, m.sigma(inc(unit(t.ngens(), j))));
    if (!x) throw Inconsistency("sigma does not preserve the torsion subgroup");
    s.set_column(j, *x);
  }
  return {CyclicModule(t, s, m.order_n), inc};
}

CoolSequence cool_sequence(const CyclicModule& m) {
  if (m.order_n != 2) throw Unsupported("the four-term sequence is implemented for order 2 only");
  const FgAbelianGroup& g = m.group;
  CoolSequence c;
  GroupHom fix = fixed_points(m);
  GroupHom two = GroupHom::multiplication(g, 2);

  std::vector<Vec> twice_fixed;
  for (const auto& v : columns(fix.matrix())) {
    Vec w = v;
    for (auto& x : w) x *= 2;
    twice_fixed.push_back(g.reduce(w));
  }
  c.detail[0] = subquotient(intersect(fix, image(two)), twice_fixed);
  c.m2 = torsion_submodule(m, 2);
  c.detail[1] = h1(c.m2.module);
  c.detail[2] = h1(m);
  c.detail[3] = psi_n(m, 2).quotient;
  for (std::size_t i = 0; i < 4; ++i) c.terms[i] = c.detail[i].group;

  // y = 2x in M^s: send it to s(x) - x, which is killed by 2.
  c.maps[0] = induced_hom(c.detail[0], c.detail[1], [&](const Vec& y) {
    auto x = preimage(two, y);
    if (!x) throw Inconsistency("element of 2M without a half");
    Vec d = m.sigma(*x);
    for (std::size_t i = 0; i < d.size(); ++i) d[i] -= (*x)[i];
    auto t = preimage(c.m2.inclusion, g.reduce(d));
    if (!t) throw Inconsistency("connecting map leaves the 2-torsion");
    return *t;
  });
  c.maps[1] = induced_hom(c.detail[1], c.detail[2],
                          [&](const Vec& t) { return c.m2.inclusion(t); });
  c.maps[2] = induced_hom(c.detail[2], c.detail[3], [](const Vec& x) { return x; });

  GroupHom in0 = GroupHom::zero(FgAbelianGroup::trivial(), c.terms[0]);
  GroupHom out3 = GroupHom::zero(c.terms[3], FgAbelianGroup::trivial());
  c.node_exact[0] = check_node(in0, c.maps[0]);
  c.node_exact[1] = check_node(c.maps[0], c.maps[1]);
  c.node_exact[2] = check_node(c.maps[1], c.maps[2]);
  c.node_exact[3] = check_node(c.maps[2], out3);
  c.exact = c.node_exact[0] && c.node_exact[1] && c.node_exact[2] && c.node_exact[3];
  return c;
}

CyclicModule random_order2_module(std::mt19937_64& rng, std::size_t max_order) {
  static const long factors[] = {2, 3, 4, 8, 9, 12};
  for (;;) {
    Vec orders;
    Int total = 1;
    std::size_t k = 1 + rng() % 5;
    for (std::size_t i = 0; i < k; ++i) {
      long d = factors[rng() % 6];
      if (total * d > Int(static_cast<unsigned long>(max_order))) break;
      total *= d;
      orders.push_back(d);
    }
    FgAbelianGroup g = FgAbelianGroup::from_orders(orders);
    const std::size_t r = g.ngens();
    if (r == 0) return CyclicModule(g, IntMatrix(0, 0), 2);

    // Standard involution: units of square one, swaps of equal factors,
    // and transvections by half the order.
    IntMatrix s = IntMatrix::identity(r);
    for (std::size_t i = 0; i < r; ++i) {
      std::vector<long> roots;
      long d = g.torsion()[i].get_si();
      for (long u = 1; u < d; ++u)
        if ((u * u) % d == 1) roots.push_back(u);
      s(i, i) = roots[rng() % roots.size()];
    }
    for (std::size_t i = 0; i + 1 < r; ++i)
      if (g.torsion()[i] == g.torsion()[i + 1] && rng() % 3 == 0) {
        s(i, i) = 0;
        s(i + 1, i + 1) = 0;
        s(i, i + 1) = 1;
        s(i + 1, i) = 1;
        ++i;
      }
    if (rng() % 3 == 0) {
      std::size_t i = rng() % r, j = rng() % r;
      const Int& di = g.torsion()[i];
      const Int& dj = g.torsion()[j];
      if (i != j && di % 2 == 0 && dj % 2 == 0) s(i, j) += di / 2;
    }

    // Conjugate by a random automorphism.
    IntMatrix a(r, r);
    bool found = false;
    for (int attempt = 0; attempt < 40 && !found; ++attempt) {
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) {
          Int step = g.torsion()[i] / gcd(g.torsion()[i], g.torsion()[j]);
          a(i, j) = step * Int(static_cast<long>(rng() % 12));
        }
      GroupHom h(g, g, a);
      found = is_injective(h);
    }
    GroupHom conj = found ? GroupHom(g, g, a) : GroupHom::identity(g);
    IntMatrix inv(r, r);
    for (std::size_t j = 0; j < r; ++j) inv.set_column(j, *preimage(conj, unit(r, j)));
    GroupHom sigma = GroupHom(g, g, inv).then(GroupHom(g, g, s)).then(conj);
    if (!(sigma.then(sigma) == GroupHom::identity(g))) continue;
    return CyclicModule(g, sigma, 2);
  }
}

}  // namespace capk
