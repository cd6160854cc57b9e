#include "capk/biquad.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace capk {

// ---- arithmetic -------------------------------------------------------------

BiquadElement BiquadFieldData::add(const BiquadElement& a, const BiquadElement& b) const {
  return {a.x[0] + b.x[0], a.x[1] + b.x[1], a.x[2] + b.x[2], a.x[3] + b.x[3]};
}

BiquadElement BiquadFieldData::sub_(const BiquadElement& a, const BiquadElement& b) const {
  return {a.x[0] - b.x[0], a.x[1] - b.x[1], a.x[2] - b.x[2], a.x[3] - b.x[3]};
}

BiquadElement BiquadFieldData::neg(const BiquadElement& a) const {
  return {-a.x[0], -a.x[1], -a.x[2], -a.x[3]};
}

BiquadElement BiquadFieldData::scale(const BiquadElement& a, const Rat& q) const {
  return {a.x[0] * q, a.x[1] * q, a.x[2] * q, a.x[3] * q};
}

// r1 r2 = r3 (the frame element), r1 r3 = m1 r2, r2 r3 = m2 r1, r3^2 = m1 m2.
BiquadElement BiquadFieldData::mul(const BiquadElement& a, const BiquadElement& b) const {
  const auto& p = a.x;
  const auto& q = b.x;
  Rat M1(m1), M2(m2), M12(m1 * m2);
  return {p[0] * q[0] + M1 * p[1] * q[1] + M2 * p[2] * q[2] + M12 * p[3] * q[3],
          p[0] * q[1] + p[1] * q[0] + M2 * (p[2] * q[3] + p[3] * q[2]),
          p[0] * q[2] + p[2] * q[0] + M1 * (p[1] * q[3] + p[3] * q[1]),
          p[0] * q[3] + p[3] * q[0] + p[1] * q[2] + p[2] * q[1]};
}

std::array<int, 2> BiquadFieldData::aut_signs(int j) const {
  switch (j) {
    case 0: return {1, 1};
    case 1: return {1, -1};
    case 2: return {-1, 1};
    case 3: return {-1, -1};
  }
  throw DomainError("automorphism index out of range");
}

BiquadElement BiquadFieldData::aut(int j, const BiquadElement& a) const {
  auto [s1, s2] = aut_signs(j);
  return {a.x[0], s1 * a.x[1], s2 * a.x[2], s1 * s2 * a.x[3]};
}

BiquadElement BiquadFieldData::relative_norm(int j, const BiquadElement& a) const {
  return mul(a, aut(j, a));
}

Rat BiquadFieldData::norm(const BiquadElement& a) const {
  BiquadElement n1 = relative_norm(1, a);
  return mul(n1, aut(2, n1)).x[0];
}

BiquadElement BiquadFieldData::inv(const BiquadElement& a) const {
  Rat n = norm(a);
  if (n == 0) throw DomainError("division by zero in a biquadratic field");
  BiquadElement c = mul(aut(1, a), mul(aut(2, a), aut(3, a)));
  return scale(c, 1 / n);
}

BiquadElement BiquadFieldData::pow(const BiquadElement& a, long e) const {
  BiquadElement base = e < 0 ? inv(a) : a;
  unsigned long k = e < 0 ? -static_cast<unsigned long>(e) : static_cast<unsigned long>(e);
  BiquadElement r = one();
  while (k) {
    if (k & 1) r = mul(r, base);
    k >>= 1;
    if (k) base = mul(base, base);
  }
  return r;
}

BiquadElement BiquadFieldData::sqrt_of(int i) const {
  switch (i) {
    case 0: return {0, 1, 0, 0};
    case 1: return {0, 0, 1, 0};
    case 2: return {0, 0, 0, Rat(1) / Rat(c)};
  }
  throw DomainError("subfield index out of range");
}

BiquadElement BiquadFieldData::embed(int i, const QuadElement& q) const {
  auto [u, v] = sub[i].sqrt_coords(q);
  return add(BiquadElement(u), scale(sqrt_of(i), v));
}

bool BiquadFieldData::in_subfield(int i, const BiquadElement& a) const {
  return aut(i + 1, a) == a;
}

QuadElement BiquadFieldData::restrict(int i, const BiquadElement& a) const {
  if (!in_subfield(i, a)) throw DomainError("element is not in the subfield");
  switch (i) {
    case 0: return sub[0].from_sqrt_coords(a.x[0], a.x[1]);
    case 1: return sub[1].from_sqrt_coords(a.x[0], a.x[2]);
    default: return sub[2].from_sqrt_coords(a.x[0], a.x[3] * Rat(c));
  }
}

std::array<Rat, 4> BiquadFieldData::basis_coords(const BiquadElement& a) const {
  std::array<Rat, 4> r;
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 4; ++i) r[j] += a.x[i] * to_basis[i][j];
  return r;
}

std::optional<Vec> BiquadFieldData::integral_coords(const BiquadElement& a) const {
  auto r = basis_coords(a);
  Vec v(4);
  for (int j = 0; j < 4; ++j) {
    if (r[j].get_den() != 1) return std::nullopt;
    v[j] = r[j].get_num();
  }
  return v;
}

BiquadElement BiquadFieldData::from_basis(const Vec& v) const {
  BiquadElement r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r.x[j] += Rat(v[i]) * basis_matrix[i][j];
  return r;
}

bool BiquadFieldData::is_algebraic_integer(const BiquadElement& a) const {
  BiquadElement t = add(a, aut(1, a));
  BiquadElement n = relative_norm(1, a);
  return sub[0].is_integral(restrict(0, t)) && sub[0].is_integral(restrict(0, n));
}

Rat BiquadFieldData::t2(const BiquadElement& a) const {
  Rat M1(std::labs(m1)), M2(std::labs(m2));
  return 4 * (a.x[0] * a.x[0] + M1 * a.x[1] * a.x[1] + M2 * a.x[2] * a.x[2] +
              M1 * M2 * a.x[3] * a.x[3]);
}

std::array<double, 4> BiquadFieldData::log_abs(const BiquadElement& a) const {
  if (a.is_zero()) throw DomainError("log of zero");
  std::size_t bits = 0;
  for (const auto& q : a.x)
    bits = std::max({bits, mpz_sizeinbase(q.get_num_mpz_t(), 2), mpz_sizeinbase(q.get_den_mpz_t(), 2)});
  mpfr_prec_t prec = static_cast<mpfr_prec_t>(256 + 4 * bits);
  mpfr_t r1, r2, re, im, t;
  mpfr_inits2(prec, r1, r2, re, im, t, static_cast<mpfr_ptr>(nullptr));
  mpfr_set_si(r1, std::labs(m1), MPFR_RNDN);
  mpfr_sqrt(r1, r1, MPFR_RNDN);
  mpfr_set_si(r2, std::labs(m2), MPFR_RNDN);
  mpfr_sqrt(r2, r2, MPFR_RNDN);
  std::array<double, 4> out{};
  // Each frame element maps to +-(real or imaginary) times |r1|^e1 |r2|^e2.
  for (int j = 0; j < 4; ++j) {
    auto [s1, s2] = aut_signs(j);
    mpfr_set_q(re, a.x[0].get_mpq_t(), MPFR_RNDN);
    mpfr_set_zero(im, 1);
    for (int k = 1; k < 4; ++k) {
      bool e1 = k & 1, e2 = k & 2;
      mpfr_set_q(t, a.x[k].get_mpq_t(), MPFR_RNDN);
      int sign = (e1 ? s1 : 1) * (e2 ? s2 : 1);
      int imag = (e1 && m1 < 0) + (e2 && m2 < 0);
      if (imag == 2) sign = -sign;  // i * i
      if (e1) mpfr_mul(t, t, r1, MPFR_RNDN);
      if (e2) mpfr_mul(t, t, r2, MPFR_RNDN);
      if (sign < 0) mpfr_neg(t, t, MPFR_RNDN);
      if (imag == 1)
        mpfr_add(im, im, t, MPFR_RNDN);
      else
        mpfr_add(re, re, t, MPFR_RNDN);
    }
    mpfr_hypot(t, re, im, MPFR_RNDN);
    mpfr_log(t, t, MPFR_RNDN);
    out[j] = mpfr_get_d(t, MPFR_RNDN);
  }
  mpfr_clears(r1, r2, re, im, t, static_cast<mpfr_ptr>(nullptr));
  return out;
}

std::string BiquadFieldData::to_string(const BiquadElement& a) const {
  std::ostringstream os;
  const std::string names[4] = {"", "sqrt(" + std::to_string(m1) + ")", "sqrt(" + std::to_string(m2) + ")",
                                "sqrt(" + std::to_string(m1) + ")*sqrt(" + std::to_string(m2) + ")"};
  bool first = true;
  for (int i = 0; i < 4; ++i) {
    if (a.x[i] == 0) continue;
    Rat v = a.x[i];
    if (!first) os << (v < 0 ? " - " : " + ");
    else if (v < 0) os << "-";
    Rat av = abs(v);
    if (i == 0) os << capk::to_string(av);
    else if (av == 1) os << names[i];
    else os << capk::to_string(av) << "*" << names[i];
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

// ---- construction -------------------------------------------------------------

namespace {

std::optional<RatMatrix4> invert(RatMatrix4 a) {
  RatMatrix4 inv{};
  for (int i = 0; i < 4; ++i) inv[i][i] = 1;
  for (int col = 0; col < 4; ++col) {
    int piv = -1;
    for (int r = col; r < 4; ++r)
      if (a[r][col] != 0) { piv = r; break; }
    if (piv < 0) return std::nullopt;
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    Rat p = a[col][col];
    for (int j = 0; j < 4; ++j) {
      a[col][j] /= p;
      inv[col][j] /= p;
    }
    for (int r = 0; r < 4; ++r) {
      if (r == col || a[r][col] == 0) continue;
      Rat f = a[r][col];
      for (int j = 0; j < 4; ++j) {
        a[r][j] -= f * a[col][j];
        inv[r][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

Rat det4(RatMatrix4 a) {
  Rat d = 1;
  for (int col = 0; col < 4; ++col) {
    int piv = -1;
    for (int r = col; r < 4; ++r)
      if (a[r][col] != 0) { piv = r; break; }
    if (piv < 0) return 0;
    if (piv != col) {
      std::swap(a[piv], a[col]);
      d = -d;
    }
    d *= a[col][col];
    for (int r = col + 1; r < 4; ++r) {
      Rat f = a[r][col] / a[col][col];
      for (int j = col; j < 4; ++j) a[r][j] -= f * a[col][j];
    }
  }
  return d;
}

// Z-basis (as frame vectors) of the lattice spanned by gens.
std::array<BiquadElement, 4> lattice_basis(const std::vector<BiquadElement>& gens) {
  Int L = 1;
  for (const auto& g : gens)
    for (const auto& q : g.x) L = lcm(L, q.get_den());
  IntMatrix m(gens.size(), 4);
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (int j = 0; j < 4; ++j) m(i, j) = Int(gens[i].x[j] * Rat(L));
  IntMatrix h = hermite_rows(m);
  if (h.rows() != 4) throw Inconsistency("order generators do not span a lattice of rank 4");
  std::array<BiquadElement, 4> out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out[i].x[j] = Rat(h(i, j)) / Rat(L);
  return out;
}

Rat trace_disc(const BiquadFieldData& k, const std::array<BiquadElement, 4>& b) {
  RatMatrix4 g;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g[i][j] = k.trace(k.mul(b[i], b[j]));
  return det4(g);
}

}  // namespace

BiquadFieldData field_data(long m1, long m2) {
  if (m1 == m2) throw DomainError("m1 and m2 must differ");
  BiquadFieldData k;
  k.sub[0] = field_data(m1);
  k.sub[1] = field_data(m2);
  long m3 = static_cast<long>(squarefree_part(static_cast<int64_t>(m1) * m2));
  if (m3 == 1) throw DomainError("m1 m2 is a square, the field is not biquadratic");
  k.m1 = m1;
  k.m2 = m2;
  k.m3 = m3;
  k.c = isqrt(Int(m1 * m2 / m3));
  if (k.c * k.c * m3 != Int(m1) * m2) throw Inconsistency("m1 m2 != c^2 m3");
  k.sub[2] = field_data(m3);
  if (m1 > 0 && m2 > 0) {
    k.r1 = 4;
    k.r2 = 0;
  } else {
    k.r1 = 0;
    k.r2 = 2;
  }

  // Orders of the three subfields and their products, then saturation.
  std::vector<BiquadElement> gens;
  gens.push_back(k.one());
  std::array<BiquadElement, 3> w;
  for (int i = 0; i < 3; ++i) {
    w[i] = k.embed(i, k.sub[i].omega());
    gens.push_back(w[i]);
  }
  gens.push_back(k.mul(w[0], w[1]));

  Int target = k.sub[0].disc * k.sub[1].disc * k.sub[2].disc;
  k.disc = target;
  for (int round = 0;; ++round) {
    if (round > 16) throw Inconsistency("integral basis saturation did not terminate");
    auto b = lattice_basis(gens);
    Rat d = trace_disc(k, b);
    if (d.get_den() != 1) throw Inconsistency("non-integral trace form");
    Int q = d.get_num() / target;
    if (q * target != d.get_num() || q < 0 || !is_perfect_square(q))
      throw Inconsistency("order discriminant is not a square multiple of the field discriminant");
    Int index = isqrt(q);
    if (index == 1) {
      k.integral_basis = b;
      break;
    }
    bool grown = false;
    for (auto p : prime_divisors(to_i64(index))) {
      long P = static_cast<long>(p);
      long total = 1;
      for (int i = 0; i < 4; ++i) total *= P;
      for (long code = 1; code < total && !grown; ++code) {
        BiquadElement x;
        long cc = code;
        for (int i = 0; i < 4; ++i) {
          x = k.add(x, k.scale(b[i], Rat(cc % P)));
          cc /= P;
        }
        x = k.scale(x, Rat(1, P));
        if (k.is_algebraic_integer(x)) {
          gens.push_back(x);
          grown = true;
        }
      }
      if (grown) break;
    }
    if (!grown) throw Inconsistency("order index > 1 but no integral element found");
  }
  for (int i = 0; i < 4; ++i) k.basis_matrix[i] = k.integral_basis[i].x;
  auto inv = invert(k.basis_matrix);
  if (!inv) throw Inconsistency("singular integral basis");
  k.to_basis = *inv;
  if (trace_disc(k, k.integral_basis) != Rat(k.disc))
    throw Inconsistency("integral basis discriminant mismatch");
  return k;
}

int ramification_index(const BiquadFieldData& k, long p) {
  int count = 0;
  for (const auto& f : k.sub)
    if (mpz_divisible_ui_p(f.disc.get_mpz_t(), static_cast<unsigned long>(p))) ++count;
  if (count == 0) return 1;
  return count == 3 ? 4 : 2;
}

std::pair<BiquadElement, int> roots_of_unity(const BiquadFieldData& k) {
  auto find = [&](long m) -> int {
    for (int i = 0; i < 3; ++i)
      if (k.sub[i].m == m) return i;
    return -1;
  };
  int im1 = find(-1), i2 = find(2), im2 = find(-2), i3 = find(3), im3 = find(-3);
  BiquadElement z(Rat(-1));
  int w = 2;
  if (im1 >= 0 && i2 >= 0 && im2 >= 0) {
    z = k.scale(k.add(k.sqrt_of(i2), k.sqrt_of(im2)), Rat(1, 2));
    w = 8;
  } else if (im1 >= 0 && i3 >= 0 && im3 >= 0) {
    z = k.scale(k.add(k.sqrt_of(i3), k.sqrt_of(im1)), Rat(1, 2));
    w = 12;
  } else if (im1 >= 0) {
    z = k.sqrt_of(im1);
    w = 4;
  } else if (im3 >= 0) {
    z = k.scale(k.add(k.one(), k.sqrt_of(im3)), Rat(1, 2));
    w = 6;
  }
  if (!(k.pow(z, w) == k.one())) throw Inconsistency("root of unity has the wrong order");
  for (int d = 1; d < w; ++d)
    if (w % d == 0 && k.pow(z, d) == k.one()) throw Inconsistency("root of unity is not primitive");
  return {z, w};
}

// ---- square roots ---------------------------------------------------------------

std::optional<QuadElement> sqrt_in(const QuadraticFieldData& f, const QuadElement& a) {
  if (a.is_zero()) return a;
  auto [u, v] = f.sqrt_coords(a);
  Rat n = u * u - Rat(f.m) * v * v;
  auto r = rational_sqrt(n);
  if (!r) return std::nullopt;
  for (const Rat& s : {*r, Rat(-*r)}) {
    std::optional<QuadElement> y;
    if (auto p = rational_sqrt((u + s) / 2); p && *p != 0) {
      y = f.from_sqrt_coords(*p, v / (2 * *p));
    } else if (auto q = rational_sqrt(u / Rat(f.m)); q && v == 0) {
      y = f.from_sqrt_coords(0, *q);
    }
    if (y && f.mul(*y, *y) == a) return y;
  }
  return std::nullopt;
}

std::optional<BiquadElement> sqrt_in(const BiquadFieldData& k, const BiquadElement& a) {
  if (a.is_zero()) return a;
  const QuadraticFieldData& f = k.sub[0];
  // a = A + B r2 with A, B in sub[0].
  QuadElement A = f.from_sqrt_coords(a.x[0], a.x[1]);
  QuadElement B = f.from_sqrt_coords(a.x[2], a.x[3]);
  QuadElement M2(Rat(k.m2));
  QuadElement N = f.sub(f.mul(A, A), f.mul(M2, f.mul(B, B)));
  auto n = sqrt_in(f, N);
  if (!n) return std::nullopt;
  auto lift = [&](const QuadElement& C, const QuadElement& D) {
    auto [c0, c1] = f.sqrt_coords(C);
    auto [d0, d1] = f.sqrt_coords(D);
    return BiquadElement(c0, c1, d0, d1);
  };
  for (const QuadElement& s : {*n, f.neg(*n)}) {
    QuadElement half = f.scale(f.add(A, s), Rat(1, 2));
    std::optional<BiquadElement> y;
    if (auto C = sqrt_in(f, half); C && !C->is_zero()) {
      QuadElement D = f.div(B, f.scale(*C, 2));
      y = lift(*C, D);
    } else if (B.is_zero()) {
      if (auto D = sqrt_in(f, f.div(A, M2))) y = lift(QuadElement(0), *D);
    }
    if (y && k.mul(*y, *y) == a) return y;
  }
  return std::nullopt;
}

// ---- ideals -----------------------------------------------------------------

Int KIdeal::norm() const {
  Int n = 1;
  for (std::size_t i = 0; i < hnf.rows(); ++i) n *= hnf(i, i);
  return n;
}

KIdeal k_ideal(const BiquadFieldData& k, const std::vector<BiquadElement>& gens) {
  std::vector<Vec> rows;
  for (const auto& g : gens) {
    if (g.is_zero()) continue;
    for (const auto& b : k.integral_basis) {
      auto v = k.integral_coords(k.mul(g, b));
      if (!v) throw DomainError("ideal generator is not integral");
      rows.push_back(*v);
    }
  }
  IntMatrix m(rows.size(), 4);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (int j = 0; j < 4; ++j) m(i, j) = rows[i][j];
  IntMatrix h = hermite_rows(m);
  if (h.rows() != 4) throw DomainError("zero ideal");
  return {h};
}

KIdeal k_ideal_mul(const BiquadFieldData& k, const KIdeal& a, const KIdeal& b) {
  std::vector<BiquadElement> gens;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) gens.push_back(k.mul(k.from_basis(a.hnf.row(i)), k.from_basis(b.hnf.row(j))));
  return k_ideal(k, gens);
}

bool k_ideal_contains(const BiquadFieldData& k, const KIdeal& a, const BiquadElement& x) {
  auto v = k.integral_coords(x);
  if (!v) return false;
  return solve_integer(a.hnf.transpose(), *v).has_value();
}

KIdeal extend_ideal(const BiquadFieldData& k, int i, const QuadIdeal& a) {
  return k_ideal(k, {k.embed(i, QuadElement(Rat(a.a))), k.embed(i, QuadElement(Rat(a.b), Rat(a.c)))});
}

// ---- principality -------------------------------------------------------------

namespace {

// Bilinear form attached to T2.
Rat t2_dot(const BiquadFieldData& k, const BiquadElement& a, const BiquadElement& b) {
  Rat M1(std::labs(k.m1)), M2(std::labs(k.m2));
  return 4 * (a.x[0] * b.x[0] + M1 * a.x[1] * b.x[1] + M2 * a.x[2] * b.x[2] + M1 * M2 * a.x[3] * b.x[3]);
}

struct GramSchmidt {
  std::array<std::array<Rat, 4>, 4> mu;
  std::array<Rat, 4> B;
};

GramSchmidt gram_schmidt(const BiquadFieldData& k, const std::array<BiquadElement, 4>& b) {
  GramSchmidt gs;
  std::array<std::array<Rat, 4>, 4> g;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g[i][j] = t2_dot(k, b[i], b[j]);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < i; ++j) {
      Rat s = g[i][j];
      for (int l = 0; l < j; ++l) s -= gs.mu[j][l] * gs.mu[i][l] * gs.B[l];
      gs.mu[i][j] = s / gs.B[j];
    }
    Rat s = g[i][i];
    for (int l = 0; l < i; ++l) s -= gs.mu[i][l] * gs.mu[i][l] * gs.B[l];
    gs.B[i] = s;
  }
  return gs;
}

Int round_rat(const Rat& q) {
  Int num = 2 * q.get_num() + q.get_den();
  Int den = 2 * q.get_den();
  return floor_div(num, den);
}

// Exact LLL with delta = 3/4 on a rank 4 lattice.
void lll(const BiquadFieldData& k, std::array<BiquadElement, 4>& b) {
  const Rat delta(3, 4);
  int i = 1;
  int guard = 0;
  while (i < 4) {
    if (++guard > 100000) throw BoundExceeded("lattice reduction did not converge");
    GramSchmidt gs = gram_schmidt(k, b);
    for (int j = i - 1; j >= 0; --j) {
      Int r = round_rat(gs.mu[i][j]);
      if (r != 0) {
        b[i] = k.sub_(b[i], k.scale(b[j], Rat(r)));
        gs = gram_schmidt(k, b);
      }
    }
    if (gs.B[i] >= (delta - gs.mu[i][i - 1] * gs.mu[i][i - 1]) * gs.B[i - 1]) {
      ++i;
    } else {
      std::swap(b[i], b[i - 1]);
      i = std::max(i - 1, 1);
    }
  }
}

bool supported_on(Int n, const std::vector<long>& primes) {
  n = abs(n);
  if (n == 0) return false;
  for (long p : primes)
    while (mpz_divisible_ui_p(n.get_mpz_t(), static_cast<unsigned long>(p))) n /= p;
  return n == 1;
}

}  // namespace

PrincipalSearch is_principal_sigma(const BiquadFieldData& k, const KIdeal& a,
                                   const std::vector<long>& primes, const KUnitGroup& units,
                                   long node_cap) {
  if (!units.primes.empty()) throw DomainError("the unit group of K is required for the search bound");
  PrincipalSearch res;
  Int na = a.norm();

  // Bound on T2 of a generator reduced modulo units.
  double spread_sum = 0;
  std::array<double, 4> spread{};
  for (const auto& u : units.free_generators) {
    auto l = k.log_abs(u);
    for (int i = 0; i < 4; ++i) spread[i] += std::fabs(l[i]);
  }
  for (int i = 0; i < 4; ++i) spread_sum += std::exp(spread[i]);
  double scale = std::sqrt(na.get_d());
  if (!primes.empty()) {
    double extra = 1;
    for (long p : primes) extra *= static_cast<double>(p);
    scale *= extra;
  }
  double bound = scale * spread_sum * 1.01 + 1e-6;
  res.bound = bound;
  res.complete = primes.empty();

  std::array<BiquadElement, 4> b;
  for (int i = 0; i < 4; ++i) b[i] = k.from_basis(a.hnf.row(i));
  lll(k, b);
  GramSchmidt gs = gram_schmidt(k, b);
  long double q[4][4];
  long double Bd[4];
  for (int i = 0; i < 4; ++i) {
    Bd[i] = static_cast<long double>(gs.B[i].get_d());
    for (int j = 0; j < 4; ++j) q[i][j] = j < i ? static_cast<long double>(gs.mu[i][j].get_d()) : 0;
  }
  const long double B = static_cast<long double>(bound) * (1 + 1e-9L);

  auto accept = [&](const BiquadElement& x) {
    Rat n = k.norm(x);
    if (n.get_den() != 1) return false;
    Int nx = abs(n.get_num());
    if (!mpz_divisible_p(nx.get_mpz_t(), na.get_mpz_t())) return false;
    Int r = nx / na;
    return primes.empty() ? r == 1 : supported_on(r, primes);
  };

  // Enumerate x with sum_i B_i (x_i + sum_{j>i} mu_ji x_j)^2 <= bound.
  std::array<long, 4> x{};
  std::function<bool(int, long double)> rec = [&](int i, long double rem) -> bool {
    long double c = 0;
    for (int j = i + 1; j < 4; ++j) c += q[j][i] * x[j];
    long double r = std::sqrt(std::max(rem, 0.0L) / Bd[i]);
    long lo = static_cast<long>(std::ceil(-c - r - 1e-9L));
    long hi = static_cast<long>(std::floor(-c + r + 1e-9L));
    for (long v = lo; v <= hi; ++v) {
      if (++res.nodes > node_cap) return true;
      x[i] = v;
      long double t = v + c;
      long double left = rem - Bd[i] * t * t;
      if (left < -1e-9L * B) continue;
      if (i > 0) {
        if (rec(i - 1, left)) return true;
        continue;
      }
      if (x[0] == 0 && x[1] == 0 && x[2] == 0 && x[3] == 0) continue;
      BiquadElement e;
      for (int j = 0; j < 4; ++j) e = k.add(e, k.scale(b[j], Rat(x[j])));
      if (accept(e)) {
        res.generator = e;
        return true;
      }
    }
    x[i] = 0;
    return false;
  };
  rec(3, B);
  if (res.nodes > node_cap && !res.generator) res.complete = false;
  if (res.generator && !k_ideal_contains(k, a, *res.generator))
    throw Inconsistency("principal generator outside the ideal");
  return res;
}

}  // namespace capk
