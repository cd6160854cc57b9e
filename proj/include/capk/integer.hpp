#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace capk {

using Int = mpz_class;
using Rat = mpq_class;
using Vec = std::vector<Int>;

// Error taxonomy shared by every module.  The class name doubles as the
// machine-readable error class reported by the command line front end.
class Error : public std::runtime_error {
 public:
  Error(std::string cls, const std::string& what)
      : std::runtime_error(what), cls_(std::move(cls)) {}
  const std::string& error_class() const noexcept { return cls_; }

 private:
  std::string cls_;
};

struct DomainError : Error {
  explicit DomainError(const std::string& w) : Error("domain_error", w) {}
};
struct ShapeError : Error {
  explicit ShapeError(const std::string& w) : Error("shape_error", w) {}
};
struct Unsupported : Error {
  explicit Unsupported(const std::string& w) : Error("unsupported", w) {}
};
struct BoundExceeded : Error {
  explicit BoundExceeded(const std::string& w) : Error("bound_exceeded", w) {}
};
struct Inconsistency : Error {
  explicit Inconsistency(const std::string& w) : Error("inconsistency", w) {}
};

inline Int floor_div(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

// Representative in [0, |m|).
inline Int mod_pos(const Int& a, const Int& m) {
  Int r;
  mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

inline Int isqrt(const Int& a) {
  Int r;
  mpz_sqrt(r.get_mpz_t(), a.get_mpz_t());
  return r;
}

inline bool is_perfect_square(const Int& a) {
  return sgn(a) >= 0 && mpz_perfect_square_p(a.get_mpz_t()) != 0;
}

inline std::optional<Rat> rational_sqrt(const Rat& q) {
  if (sgn(q) < 0) return std::nullopt;
  if (!is_perfect_square(q.get_num()) || !is_perfect_square(q.get_den()))
    return std::nullopt;
  Rat r(isqrt(q.get_num()), isqrt(q.get_den()));
  r.canonicalize();
  return r;
}

inline Int gcd(const Int& a, const Int& b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline Int lcm(const Int& a, const Int& b) {
  Int l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

inline bool is_prime(const Int& p) {
  return p >= 2 && mpz_probab_prime_p(p.get_mpz_t(), 40) > 0;
}

inline bool is_prime(int64_t p) { return is_prime(Int(static_cast<long>(p))); }

inline Int pow_int(const Int& b, unsigned long e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

inline bool fits_int64(const Int& a) { return a.fits_slong_p(); }

inline int64_t to_i64(const Int& a) {
  if (!a.fits_slong_p()) throw DomainError("integer does not fit in 64 bits");
  return a.get_si();
}

bool is_squarefree(int64_t n);
std::vector<int64_t> prime_divisors(int64_t n);
// Squarefree kernel with sign: n = core * s^2.
int64_t squarefree_part(int64_t n);
// Kronecker symbol (a/n) for n > 0.
int kronecker(const Int& a, const Int& n);
// Valuation of a nonzero integer at a prime.
int valuation(Int a, const Int& p);
std::string to_string(const Rat& q);
std::string to_string(const Int& a);

}  // namespace capk
