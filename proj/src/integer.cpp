#include "capk/integer.hpp"

#include <cstdlib>

namespace capk {

bool is_squarefree(int64_t n) {
  if (n == 0) return false;
  uint64_t a = static_cast<uint64_t>(std::llabs(n));
  for (uint64_t p = 2; p * p <= a; ++p) {
    if (a % p == 0) {
      a /= p;
      if (a % p == 0) return false;
    }
  }
  return true;
}

std::vector<int64_t> prime_divisors(int64_t n) {
  std::vector<int64_t> out;
  uint64_t a = static_cast<uint64_t>(std::llabs(n));
  for (uint64_t p = 2; p * p <= a; ++p) {
    if (a % p == 0) {
      out.push_back(static_cast<int64_t>(p));
      while (a % p == 0) a /= p;
    }
  }
  if (a > 1) out.push_back(static_cast<int64_t>(a));
  return out;
}

int64_t squarefree_part(int64_t n) {
  if (n == 0) throw DomainError("squarefree part of zero");
  int64_t sign = n < 0 ? -1 : 1;
  uint64_t a = static_cast<uint64_t>(std::llabs(n));
  uint64_t core = 1;
  for (uint64_t p = 2; p * p <= a; ++p) {
    int e = 0;
    while (a % p == 0) {
      a /= p;
      ++e;
    }
    if (e % 2) core *= p;
  }
  core *= a;
  return sign * static_cast<int64_t>(core);
}

int kronecker(const Int& a, const Int& n) {
  return mpz_kronecker(a.get_mpz_t(), n.get_mpz_t());
}

int valuation(Int a, const Int& p) {
  if (a == 0) throw DomainError("valuation of zero");
  int v = 0;
  while (mpz_divisible_p(a.get_mpz_t(), p.get_mpz_t())) {
    a /= p;
    ++v;
  }
  return v;
}

std::string to_string(const Int& a) { return a.get_str(); }

std::string to_string(const Rat& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

}  // namespace capk
