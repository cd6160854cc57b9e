#include <algorithm>
#include <numeric>

#include "capk/biquad.hpp"

namespace capk {

namespace {

// Number of primes of K above p: 4 / |decomposition group|.
int primes_above_count(const BiquadFieldData& k, long p) {
  int split = 0;
  for (const auto& f : k.sub)
    if (kronecker(f.disc, Int(p)) == 1) ++split;
  return split == 3 ? 4 : split == 1 ? 2 : 1;
}

// Reduction K -> F_q at a prime of degree one, or nullopt when an element
// is not q-integral in the frame.
struct Character {
  long q;
  long s1, s2;  // images of r1, r2
  std::optional<long> eval(const BiquadElement& a) const {
    Int Q(q), acc = 0;
    const Int frame[4] = {1, s1, s2, Int(s1) * s2};
    for (int i = 0; i < 4; ++i) {
      Int den = a.x[i].get_den();
      if (mpz_divisible_ui_p(den.get_mpz_t(), static_cast<unsigned long>(q))) return std::nullopt;
      Int inv;
      mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), Q.get_mpz_t());
      acc += a.x[i].get_num() * inv * frame[i];
    }
    return to_i64(mod_pos(acc, Q));
  }
};

long sqrt_mod_small(long a, long q) {
  a %= q;
  if (a < 0) a += q;
  for (long x = 0; x < q; ++x)
    if ((x * x) % q == a) return x;
  return -1;
}

// Characters at primes q that split completely, skipping q in `avoid`.
std::vector<Character> next_characters(const BiquadFieldData& k, long& q, std::size_t count,
                                       const std::vector<long>& avoid) {
  std::vector<Character> out;
  while (out.size() < count) {
    q += 2;
    if (!is_prime(static_cast<int64_t>(q))) continue;
    if (std::find(avoid.begin(), avoid.end(), q) != avoid.end()) continue;
    if (k.m1 % q == 0 || k.m2 % q == 0) continue;
    if (kronecker(Int(k.m1), Int(q)) != 1 || kronecker(Int(k.m2), Int(q)) != 1) continue;
    out.push_back({q, sqrt_mod_small(k.m1, q), sqrt_mod_small(k.m2, q)});
  }
  return out;
}

// Basis of the F2 null space of the rows (each row is a bit vector over
// the columns).
std::vector<std::vector<int>> f2_kernel(std::vector<std::vector<int>> rows, std::size_t ncols) {
  std::vector<int> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < ncols && r < rows.size(); ++c) {
    std::size_t p = r;
    while (p < rows.size() && !rows[p][c]) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[r]);
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (i != r && rows[i][c])
        for (std::size_t j = 0; j < ncols; ++j) rows[i][j] ^= rows[r][j];
    pivot_col.push_back(static_cast<int>(c));
    ++r;
  }
  std::vector<std::vector<int>> basis;
  for (std::size_t f = 0; f < ncols; ++f) {
    if (std::find(pivot_col.begin(), pivot_col.end(), static_cast<int>(f)) != pivot_col.end()) continue;
    std::vector<int> v(ncols, 0);
    v[f] = 1;
    for (std::size_t i = 0; i < pivot_col.size(); ++i)
      if (rows[i][f]) v[pivot_col[i]] = 1;
    basis.push_back(v);
  }
  return basis;
}

// Rational solution of P c = v, P given by columns.
std::optional<std::vector<Rat>> solve_rational(const std::vector<Vec>& cols, const Vec& v) {
  std::size_t n = cols.size(), R = v.size();
  std::vector<std::vector<Rat>> a(R, std::vector<Rat>(n + 1));
  for (std::size_t i = 0; i < R; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i][j] = cols[j][i];
    a[i][n] = v[i];
  }
  std::vector<int> piv;
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < R; ++c) {
    std::size_t p = r;
    while (p < R && a[p][c] == 0) ++p;
    if (p == R) continue;
    std::swap(a[p], a[r]);
    Rat d = a[r][c];
    for (auto& e : a[r]) e /= d;
    for (std::size_t i = 0; i < R; ++i)
      if (i != r && a[i][c] != 0) {
        Rat f = a[i][c];
        for (std::size_t j = 0; j <= n; ++j) a[i][j] -= f * a[r][j];
      }
    piv.push_back(static_cast<int>(c));
    ++r;
  }
  for (std::size_t i = r; i < R; ++i)
    if (a[i][n] != 0) return std::nullopt;
  std::vector<Rat> c(n);
  for (std::size_t i = 0; i < piv.size(); ++i) c[piv[i]] = a[i][n];
  return c;
}

BiquadElement product(const BiquadFieldData& k, const std::vector<BiquadElement>& g, const Vec& e) {
  BiquadElement r = k.one();
  for (std::size_t i = 0; i < g.size(); ++i)
    if (e[i] != 0) r = k.mul(r, k.pow(g[i], to_i64(e[i])));
  return r;
}

Vec add_scaled(Vec a, const Vec& b, const Int& s) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += s * b[i];
  return a;
}

}  // namespace

FgAbelianGroup KUnitGroup::group() const {
  return FgAbelianGroup({Int(w)}, free_generators.size());
}

Vec KUnitGroup::psi(const BiquadElement& x) const {
  const BiquadFieldData& k = field;
  if (x.is_zero()) throw DomainError("zero is not a Sigma-unit");
  Vec out;
  for (int i = 0; i < 3; ++i) {
    Vec l = sub[i].log(k.restrict(i, k.relative_norm(i + 1, x)));
    out.insert(out.end(), l.begin() + 1, l.end());
  }
  return out;
}

Vec KUnitGroup::log(const BiquadElement& x) const {
  const BiquadFieldData& k = field;
  Vec v = psi(x);
  Vec c(free_generators.size());
  if (!free_generators.empty()) {
    auto sol = solve_integer(psi_matrix, v);
    if (!sol) throw DomainError("element outside the Sigma-unit group");
    c = *sol;
  }
  BiquadElement r = k.div(x, product(k, free_generators, c));
  BiquadElement z = k.one();
  for (int e = 0; e < w; ++e) {
    if (z == r) {
      Vec out{Int(e)};
      out.insert(out.end(), c.begin(), c.end());
      return out;
    }
    z = k.mul(z, zeta);
  }
  throw Inconsistency("unit remainder is not a root of unity");
}

BiquadElement KUnitGroup::element(const Vec& coords) const {
  const BiquadFieldData& k = field;
  if (coords.size() != 1 + free_generators.size()) throw ShapeError("coordinate length mismatch");
  BiquadElement r = k.pow(zeta, to_i64(mod_pos(coords[0], Int(w))));
  Vec free(coords.begin() + 1, coords.end());
  return k.mul(r, product(k, free_generators, free));
}

KUnitGroup s_unit_group(const BiquadFieldData& k, const std::vector<long>& primes_in) {
  KUnitGroup U;
  U.field = k;
  std::vector<long> primes = primes_in;
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  for (long p : primes)
    if (!is_prime(static_cast<int64_t>(p))) throw DomainError(std::to_string(p) + " is not prime");
  U.primes = primes;

  for (int i = 0; i < 3; ++i) U.sub[i] = s_unit_group(k.sub[i], primes_above(k.sub[i], primes));
  std::tie(U.zeta, U.w) = roots_of_unity(k);

  // Subfield generators; every Sigma-unit squared lies in their span.
  std::vector<BiquadElement> wgens;
  long wsub = 1;
  for (int i = 0; i < 3; ++i) {
    wgens.push_back(k.embed(i, U.sub[i].torsion_generator));
    wsub = std::lcm(wsub, static_cast<long>(U.sub[i].torsion_order));
    for (const auto& g : U.sub[i].free_generators) wgens.push_back(k.embed(i, g));
  }
  U.torsion_index = U.w / wsub;

  // Square classes: F2 kernel of quadratic characters, each kernel vector
  // confirmed by an exact square root.
  std::vector<BiquadElement> sq{U.zeta};
  sq.insert(sq.end(), wgens.begin(), wgens.end());
  std::vector<long> avoid = primes;
  long q = 1;
  std::vector<std::vector<int>> rows;
  std::vector<BiquadElement> roots;
  for (int round = 0;; ++round) {
    if (round > 40) throw Inconsistency("square class search did not settle");
    std::size_t want = round == 0 ? 2 * sq.size() + 16 : 16;
    for (const auto& ch : next_characters(k, q, want, avoid)) {
      std::vector<int> row;
      bool ok = true;
      for (const auto& g : sq) {
        auto v = ch.eval(g);
        if (!v || *v == 0) { ok = false; break; }
        row.push_back(kronecker(Int(*v), Int(ch.q)) == 1 ? 0 : 1);
      }
      if (ok) rows.push_back(row);
    }
    auto ker = f2_kernel(rows, sq.size());
    roots.clear();
    bool all = true;
    for (const auto& v : ker) {
      Vec e(sq.size());
      for (std::size_t i = 0; i < sq.size(); ++i) e[i] = v[i];
      BiquadElement u = product(k, sq, e);
      auto r = sqrt_in(k, u);
      if (!r) { all = false; break; }
      U.square_roots.push_back({*r, u});
      roots.push_back(*r);
    }
    if (all) break;
    U.square_roots.clear();
  }

  // Saturate: subfield generators first, then the square roots.
  std::vector<BiquadElement> cand = wgens;
  cand.insert(cand.end(), roots.begin(), roots.end());
  std::vector<BiquadElement> basis;
  std::vector<Vec> pv;
  for (const auto& g : cand) {
    Vec v = U.psi(g);
    if (std::all_of(v.begin(), v.end(), [](const Int& t) { return t == 0; })) continue;
    auto c = solve_rational(pv, v);
    if (!c) {
      basis.push_back(g);
      pv.push_back(v);
      continue;
    }
    Int d = 1;
    for (const auto& t : *c) d = lcm(d, t.get_den());
    if (d == 1) continue;
    // Primitive relation  sum r_j b_j - d g = 0.
    std::size_t n = basis.size();
    Vec rel(n + 1);
    for (std::size_t j = 0; j < n; ++j) rel[j] = Int((*c)[j] * Rat(d));
    rel[n] = -d;
    Int gg = 0;
    for (const auto& t : rel) gg = gcd(gg, t);
    for (auto& t : rel) t /= gg;
    std::size_t drop = n;
    for (std::size_t j = 0; j < n; ++j)
      if (abs(rel[j]) == 1) { drop = j; break; }
    if (drop < n) {
      basis[drop] = g;
      pv[drop] = v;
      continue;
    }
    IntMatrix R(n + 1, 1);
    for (std::size_t j = 0; j <= n; ++j) R(j, 0) = rel[j];
    Quotient Q = present(n + 1, R);
    if (!Q.group.torsion().empty() || Q.group.rank() != n)
      throw Inconsistency("saturation produced an unexpected quotient");
    std::vector<BiquadElement> old = basis;
    old.push_back(g);
    std::vector<Vec> oldv = pv;
    oldv.push_back(v);
    basis.clear();
    pv.clear();
    for (std::size_t j = 0; j < n; ++j) {
      Vec e = Q.lift.column(j);
      basis.push_back(product(k, old, e));
      Vec s(v.size());
      for (std::size_t i = 0; i <= n; ++i) s = add_scaled(s, oldv[i], e[i]);
      pv.push_back(s);
    }
  }

  // The free rank is fixed by Dirichlet's theorem.
  std::size_t expected = (k.r1 + k.r2 - 1);
  for (long p : primes) expected += primes_above_count(k, p);
  if (basis.size() != expected) throw Inconsistency("Sigma-unit rank differs from the Dirichlet rank");

  U.free_generators = basis;
  std::size_t R = pv.empty() ? 0 : pv[0].size();
  U.psi_matrix = IntMatrix(R, basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j) {
    if (U.psi(basis[j]) != pv[j]) throw Inconsistency("psi is not a homomorphism on the basis");
    U.psi_matrix.set_column(j, pv[j]);
  }
  for (const auto& [r, u] : U.square_roots)
    if (!(k.mul(r, r) == u)) throw Inconsistency("square root certificate failed");

  // Index of the subfield groups.
  FgAbelianGroup G = U.group();
  IntMatrix cols(G.ngens(), wgens.size());
  for (std::size_t j = 0; j < wgens.size(); ++j) cols.set_column(j, U.log(wgens[j]));
  Cokernel ck = cokernel(GroupHom(FgAbelianGroup::free(wgens.size()), G, cols));
  auto order = ck.projection.target().order();
  if (!order) throw Inconsistency("subfield Sigma-units have infinite index");
  U.index = *order;
  // Squares of units lie in the subfield group, so the index is a power of 2;
  // for plain units it divides 8 (totally real) or 2 (otherwise).
  if (mpz_popcount(U.index.get_mpz_t()) != 1) throw Inconsistency("unit index is not a power of 2");
  if (primes.empty() && U.index > (k.r2 == 0 ? 8 : 2)) throw Inconsistency("unit index exceeds its bound");
  return U;
}

}  // namespace capk
