#include "capk/quadfield.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace capk {

// ---- elements -------------------------------------------------------------

QuadElement QuadraticFieldData::add(const QuadElement& x, const QuadElement& y) const {
  return {x.a + y.a, x.b + y.b};
}

QuadElement QuadraticFieldData::sub(const QuadElement& x, const QuadElement& y) const {
  return {x.a - y.a, x.b - y.b};
}

QuadElement QuadraticFieldData::mul(const QuadElement& x, const QuadElement& y) const {
  Rat bd = x.b * y.b;
  return {x.a * y.a - Rat(n) * bd, x.a * y.b + x.b * y.a + Rat(t) * bd};
}

QuadElement QuadraticFieldData::conj(const QuadElement& x) const {
  return {x.a + x.b * Rat(t), -x.b};
}

Rat QuadraticFieldData::norm(const QuadElement& x) const {
  return x.a * x.a + x.a * x.b * Rat(t) + x.b * x.b * Rat(n);
}

Rat QuadraticFieldData::trace(const QuadElement& x) const { return 2 * x.a + x.b * Rat(t); }

QuadElement QuadraticFieldData::inv(const QuadElement& x) const {
  Rat nx = norm(x);
  if (nx == 0) throw DomainError("inverse of zero");
  return scale(conj(x), 1 / nx);
}

QuadElement QuadraticFieldData::pow(const QuadElement& x, long e) const {
  QuadElement base = e < 0 ? inv(x) : x;
  unsigned long k = e < 0 ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
  QuadElement r = one();
  while (k) {
    if (k & 1) r = mul(r, base);
    k >>= 1;
    if (k) base = mul(base, base);
  }
  return r;
}

bool QuadraticFieldData::is_integral(const QuadElement& x) const {
  return x.a.get_den() == 1 && x.b.get_den() == 1;
}

std::pair<Rat, Rat> QuadraticFieldData::sqrt_coords(const QuadElement& x) const {
  if (!half) return {x.a, x.b};
  return {x.a + x.b / 2, x.b / 2};
}

QuadElement QuadraticFieldData::from_sqrt_coords(const Rat& u, const Rat& v) const {
  if (!half) return {u, v};
  return {u - v, 2 * v};
}

double QuadraticFieldData::approx(const QuadElement& x) const {
  auto [u, v] = sqrt_coords(x);
  return u.get_d() + v.get_d() * std::sqrt(static_cast<double>(m));
}

std::string QuadraticFieldData::to_string(const QuadElement& x) const {
  auto [u, v] = sqrt_coords(x);
  std::ostringstream os;
  os << capk::to_string(u);
  if (v != 0) os << (v > 0 ? " + " : " - ") << capk::to_string(Rat(abs(v))) << "*sqrt(" << m << ")";
  return os.str();
}

QuadraticFieldData field_data(long m) {
  if (m == 0 || m == 1) throw DomainError("m must differ from 0 and 1");
  if (!is_squarefree(m)) throw DomainError("m = " + std::to_string(m) + " is not squarefree");
  QuadraticFieldData f;
  f.m = m;
  f.half = ((m % 4) + 4) % 4 == 1;
  f.t = f.half ? 1 : 0;
  f.n = f.half ? Int((1 - m) / 4) : Int(-m);
  f.disc = f.half ? Int(m) : Int(4 * m);
  if (m > 0) {
    f.r1 = 2;
    f.r2 = 0;
  } else {
    f.r1 = 0;
    f.r2 = 1;
  }
  return f;
}

// ---- ideals ---------------------------------------------------------------

IntMatrix QuadIdeal::hnf() const {
  IntMatrix h(2, 2);
  h(0, 0) = a;
  h(1, 0) = b;
  h(1, 1) = c;
  return h;
}

std::string QuadIdeal::to_string() const {
  std::ostringstream os;
  os << "[" << a << ", " << b << " + " << c << "w]";
  return os.str();
}

QuadIdeal ideal_from_generators(const QuadraticFieldData& f, const std::vector<QuadElement>& gens) {
  std::vector<Vec> rows;
  for (const auto& g : gens) {
    if (!f.is_integral(g)) throw DomainError("ideal generator is not integral");
    for (const auto& x : {g, f.mul(g, f.omega())})
      rows.push_back({x.b.get_num(), x.a.get_num()});
  }
  IntMatrix m(rows.size(), 2);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    m(i, 0) = rows[i][0];
    m(i, 1) = rows[i][1];
  }
  IntMatrix h = hermite_rows(m);
  if (h.rows() != 2) throw DomainError("zero ideal");
  QuadIdeal I;
  I.c = h(0, 0);
  I.b = h(0, 1);
  I.a = h(1, 1);
  return I;
}

QuadIdeal principal_ideal(const QuadraticFieldData& f, const QuadElement& x) {
  return ideal_from_generators(f, {x});
}

QuadIdeal unit_ideal() { return {}; }

QuadIdeal ideal_mul(const QuadraticFieldData& f, const QuadIdeal& x, const QuadIdeal& y) {
  QuadElement xa(x.a), xb(x.b, x.c), ya(y.a), yb(y.b, y.c);
  return ideal_from_generators(f, {f.mul(xa, ya), f.mul(xa, yb), f.mul(xb, ya), f.mul(xb, yb)});
}

QuadIdeal ideal_pow(const QuadraticFieldData& f, const QuadIdeal& x, unsigned long e) {
  QuadIdeal r = unit_ideal(), base = x;
  while (e) {
    if (e & 1) r = ideal_mul(f, r, base);
    e >>= 1;
    if (e) base = ideal_mul(f, base, base);
  }
  return r;
}

QuadIdeal ideal_conj(const QuadraticFieldData& f, const QuadIdeal& x) {
  return ideal_from_generators(f, {QuadElement(x.a), f.conj(QuadElement(x.b, x.c))});
}

bool ideal_contains(const QuadraticFieldData& f, const QuadIdeal& I, const QuadElement& x) {
  if (!f.is_integral(x)) return false;
  Int xb = x.b.get_num(), xa = x.a.get_num();
  if (!mpz_divisible_p(xb.get_mpz_t(), I.c.get_mpz_t())) return false;
  Int v = xb / I.c;
  Int u = xa - v * I.b;
  return mpz_divisible_p(u.get_mpz_t(), I.a.get_mpz_t()) != 0;
}

bool is_ideal(const QuadraticFieldData& f, const QuadIdeal& I) {
  return ideal_contains(f, I, f.mul(QuadElement(I.a), f.omega())) &&
         ideal_contains(f, I, f.mul(QuadElement(I.b, I.c), f.omega()));
}

// ---- primes ---------------------------------------------------------------

namespace {

// Square root of a modulo an odd prime p (Tonelli-Shanks).
Int sqrt_mod(Int a, const Int& p) {
  a = mod_pos(a, p);
  if (a == 0) return 0;
  Int q = p - 1;
  unsigned long s = 0;
  while (q % 2 == 0) {
    q /= 2;
    ++s;
  }
  Int z = 2;
  while (kronecker(z, p) != -1) ++z;
  auto powm = [&](const Int& b, const Int& e) {
    Int r;
    mpz_powm(r.get_mpz_t(), b.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
    return r;
  };
  Int c = powm(z, q), x = powm(a, (q + 1) / 2), tt = powm(a, q);
  unsigned long mm = s;
  while (tt != 1) {
    unsigned long i = 0;
    Int t2 = tt;
    while (t2 != 1) {
      t2 = mod_pos(t2 * t2, p);
      ++i;
    }
    Int b = powm(c, pow_int(2, mm - i - 1));
    x = mod_pos(x * b, p);
    c = mod_pos(b * b, p);
    tt = mod_pos(tt * c, p);
    mm = i;
  }
  return x;
}

// Roots of x^2 - t x + n modulo p.
std::vector<Int> omega_roots(const QuadraticFieldData& f, const Int& p) {
  std::vector<Int> roots;
  if (p == 2) {
    for (long r = 0; r < 2; ++r)
      if (mod_pos(Int(r * r) - f.t * r + f.n, 2) == 0) roots.push_back(r);
    return roots;
  }
  Int d = mod_pos(f.disc, p);
  if (d != 0 && kronecker(d, p) != 1) return roots;
  Int s = sqrt_mod(d, p);
  Int inv2 = (p + 1) / 2;
  roots.push_back(mod_pos((f.t + s) * inv2, p));
  Int r2 = mod_pos((f.t - s) * inv2, p);
  if (r2 != roots[0]) roots.push_back(r2);
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace

Splitting splitting(const QuadraticFieldData& f, const Int& p) {
  if (!is_prime(p)) throw DomainError("splitting needs a prime, got " + p.get_str());
  Splitting s;
  s.symbol = kronecker(f.disc, p);
  if (s.symbol == -1) {
    s.type = SplitType::inert;
    s.primes.push_back(QuadIdeal{p, 0, p});
    return s;
  }
  s.type = s.symbol == 0 ? SplitType::ramified : SplitType::split;
  for (const auto& r : omega_roots(f, p))
    s.primes.push_back(ideal_from_generators(f, {QuadElement(p), QuadElement(-r, 1)}));
  std::sort(s.primes.begin(), s.primes.end());
  if (s.primes.size() != (s.symbol == 0 ? 1u : 2u))
    throw Inconsistency("prime decomposition disagrees with the Kronecker symbol at " + p.get_str());
  return s;
}

Int prime_below(const QuadIdeal& P) { return P.a; }

std::vector<QuadIdeal> primes_above(const QuadraticFieldData& f, const std::vector<long>& ps) {
  std::vector<QuadIdeal> out;
  for (long p : ps)
    for (const auto& P : splitting(f, p).primes) out.push_back(P);
  return out;
}

int valuation(const QuadraticFieldData& f, const QuadIdeal& P, const QuadElement& x) {
  if (x.is_zero()) throw DomainError("valuation of zero");
  Int p = prime_below(P);
  Int d = lcm(x.a.get_den(), x.b.get_den());
  QuadElement y = f.scale(x, Rat(d));
  int e = (P.norm() == p && mpz_divisible_p(f.disc.get_mpz_t(), p.get_mpz_t())) ? 2 : 1;
  int v = -e * capk::valuation(d, p);
  QuadIdeal pk = P;
  while (ideal_contains(f, pk, y)) {
    ++v;
    pk = ideal_mul(f, pk, P);
  }
  return v;
}

// ---- forms and reduction --------------------------------------------------

std::string Form::to_string() const {
  std::ostringstream os;
  os << "(" << A << ", " << B << ", " << C << ")";
  return os.str();
}

Form ideal_form(const QuadraticFieldData& f, const QuadIdeal& I) {
  Int a = I.a / I.c, b = I.b / I.c;
  Rat nb = f.norm(QuadElement(b, 1));
  Rat c = nb / Rat(a);
  if (c.get_den() != 1) throw Inconsistency("ideal basis does not give an integral form");
  return {a, 2 * b + f.t, c.get_num()};
}

QuadIdeal form_ideal(const QuadraticFieldData& f, const Form& q) {
  if (q.A <= 0) throw DomainError("form_ideal needs A > 0");
  Int b = q.B - f.t;
  if (b % 2 != 0) throw DomainError("form parity does not match the discriminant");
  QuadIdeal I = ideal_from_generators(f, {QuadElement(q.A), QuadElement(b / 2, 1)});
  if (I.norm() != q.A) throw DomainError("form does not come from a primitive ideal");
  return I;
}

namespace {

struct Basis {
  QuadElement a1, a2;
  Int A, B, C;
};

Basis basis_of(const QuadraticFieldData& f, const QuadIdeal& I) {
  Basis s{QuadElement(I.a), QuadElement(I.b, I.c), 0, 0, 0};
  Form q = ideal_form(f, I);
  s.A = q.A;
  s.B = q.B;
  s.C = q.C;
  return s;
}

// x -> x, y -> y + k x : a2 += k a1.
void translate(const QuadraticFieldData& f, Basis& s, const Int& k) {
  if (k == 0) return;
  s.a2 = f.add(s.a2, f.scale(s.a1, Rat(k)));
  s.C = s.C + k * s.B + k * k * s.A;
  s.B = s.B + 2 * k * s.A;
}

// (a1, a2) -> (a2, -a1)
void swap_basis(const QuadraticFieldData& f, Basis& s) {
  QuadElement t = s.a1;
  s.a1 = s.a2;
  s.a2 = f.neg(t);
  std::swap(s.A, s.C);
  s.B = -s.B;
}

void reduce_definite(const QuadraticFieldData& f, Basis& s) {
  for (;;) {
    Int two_a = 2 * s.A;
    Int nb = mod_pos(s.B, two_a);
    if (nb > s.A) nb -= two_a;
    translate(f, s, (nb - s.B) / two_a);
    if (s.A > s.C || (s.A == s.C && s.B < 0)) {
      swap_basis(f, s);
      continue;
    }
    return;
  }
}

bool is_reduced_indefinite(const Int& D, const Basis& s) {
  Int absA = abs(s.A);
  if (s.B <= 0 || s.B * s.B >= D) return false;
  Int hi = 2 * absA + s.B;
  if (hi * hi <= D) return false;  // sqrt D - B < 2|A|
  Int lo = 2 * absA - s.B;
  return lo < 0 || lo * lo < D;    // 2|A| < sqrt D + B
}

// Reduction operator: (A, B, C) -> (C, B', A') with basis (a2, -a1 + s a2).
void rho(const QuadraticFieldData& f, const Int& sqrtD, Basis& s) {
  const Int& D = f.disc;
  Int absC = abs(s.C);
  Int c2 = 2 * absC;
  Int nb;
  if (s.C * s.C > D) {
    nb = mod_pos(-s.B, c2);
    if (nb > absC) nb -= c2;
  } else {
    nb = -s.B + c2 * floor_div(sqrtD + s.B, c2);
  }
  Int k = (nb + s.B) / (2 * s.C);
  QuadElement a1 = s.a2;
  QuadElement a2 = f.add(f.neg(s.a1), f.scale(s.a2, Rat(k)));
  Int nA = s.C, nC = s.A - k * s.B + k * k * s.C;
  s.a1 = a1;
  s.a2 = a2;
  s.A = nA;
  s.B = nb;
  s.C = nC;
}

void reduce_indefinite(const QuadraticFieldData& f, const Int& sqrtD, Basis& s) {
  int guard = 0;
  while (!is_reduced_indefinite(f.disc, s)) {
    rho(f, sqrtD, s);
    if (++guard > 100000) throw Inconsistency("indefinite reduction does not terminate");
  }
}

// Walks the cycle of reduced forms; fn returns true to stop early.
template <class Fn>
void walk_cycle(const QuadraticFieldData& f, const Int& sqrtD, Basis s, Fn fn) {
  reduce_indefinite(f, sqrtD, s);
  Form start{s.A, s.B, s.C};
  for (long guard = 0;; ++guard) {
    if (fn(s)) return;
    rho(f, sqrtD, s);
    if (Form{s.A, s.B, s.C} == start) return;
    if (guard > 10000000) throw Inconsistency("cycle of reduced forms does not close");
  }
}

Form cycle_min(const QuadraticFieldData& f, const QuadIdeal& I) {
  Int sqrtD = isqrt(f.disc);
  std::optional<Form> best;
  walk_cycle(f, sqrtD, basis_of(f, I), [&](const Basis& s) {
    Form q{s.A, s.B, s.C};
    if (!best || q < *best) best = q;
    return false;
  });
  return *best;
}

}  // namespace

ReducedIdeal reduce_ideal(const QuadraticFieldData& f, const QuadIdeal& I) {
  Basis s = basis_of(f, I);
  if (f.disc < 0)
    reduce_definite(f, s);
  else
    reduce_indefinite(f, isqrt(f.disc), s);
  ReducedIdeal r;
  r.gamma = f.scale(f.conj(s.a1), Rat(1) / Rat(I.norm()));
  r.ideal = ideal_from_generators(f, {f.mul(r.gamma, s.a1), f.mul(r.gamma, s.a2)});
  r.form = {s.A, s.B, s.C};
  return r;
}

std::optional<QuadElement> is_principal(const QuadraticFieldData& f, const QuadIdeal& I) {
  std::optional<QuadElement> gen;
  if (f.disc < 0) {
    Basis s = basis_of(f, I);
    reduce_definite(f, s);
    if (s.A == 1) gen = s.a1;
  } else {
    walk_cycle(f, isqrt(f.disc), basis_of(f, I), [&](const Basis& s) {
      if (abs(s.A) == 1) {
        gen = s.a1;
        return true;
      }
      return false;
    });
  }
  if (gen && principal_ideal(f, *gen) != I)
    throw Inconsistency("principal generator does not reproduce the ideal");
  return gen;
}

Form class_key(const QuadraticFieldData& f, const QuadIdeal& I) {
  if (f.disc < 0) {
    Basis s = basis_of(f, I);
    reduce_definite(f, s);
    return {s.A, s.B, s.C};
  }
  Form k1 = cycle_min(f, I);
  Form k2 = cycle_min(f, ideal_mul(f, I, principal_ideal(f, f.root())));
  return std::min(k1, k2);
}

// ---- units ----------------------------------------------------------------

QuadElement fundamental_unit(const QuadraticFieldData& f) {
  if (f.disc < 0) throw DomainError("fundamental unit of an imaginary field");
  const Int& D = f.disc;
  Int s = isqrt(D);
  // Continued fraction of omega = (P + sqrt D)/Q.
  Int P = f.t, Q = 2;
  Int pm2 = 0, pm1 = 1, qm2 = 1, qm1 = 0;
  for (long k = 0; k < 10000000; ++k) {
    Int a = Q > 0 ? floor_div(P + s, Q) : floor_div(P + s + 1, Q);
    Int p = a * pm1 + pm2, q = a * qm1 + qm2;
    pm2 = pm1;
    pm1 = p;
    qm2 = qm1;
    qm1 = q;
    // p/q approximates omega, so p - q*omega is small and its conjugate
    // p - q*conj(omega) is the candidate unit.
    Rat nc = f.norm(QuadElement(Rat(p), Rat(-q)));
    if (nc == 1 || nc == -1) return QuadElement(Rat(p - q * f.t), Rat(q));
    P = a * Q - P;
    Q = (D - P * P) / Q;
  }
  throw BoundExceeded("continued fraction period too long");
}

std::pair<QuadElement, int> roots_of_unity(const QuadraticFieldData& f) {
  if (f.disc == -4) return {f.omega(), 4};
  if (f.disc == -3) return {f.omega(), 6};
  return {QuadElement(-1), 2};
}

}  // namespace capk
