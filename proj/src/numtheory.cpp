#include "qsim/numtheory.hpp"

#include <numeric>

#include "qsim/statevec.hpp"  // Error

namespace qsim {

u64 gcd(u64 a, u64 b) { return std::gcd(a, b); }

u64 mod_mul(u64 a, u64 b, u64 mod) {
  return static_cast<u64>(static_cast<unsigned __int128>(a) * b % mod);
}

u64 mod_exp(u64 base, u64 exponent, u64 mod) {
  if (mod == 0) throw Error("mod_exp modulus must be positive");
  if (mod == 1) return 0;
  u64 result = 1;
  base %= mod;
  while (exponent > 0) {
    if (exponent & 1u) result = mod_mul(result, base, mod);
    base = mod_mul(base, base, mod);
    exponent >>= 1;
  }
  return result;
}

u64 multiplicative_order(u64 q, u64 n) {
  if (n < 2) throw Error("multiplicative_order modulus must exceed 1");
  if (gcd(q % n, n) != 1)
    throw Error("multiplicative_order requires gcd(q, n) = 1");
  u64 x = q % n, k = 1;
  while (x != 1) {
    x = mod_mul(x, q % n, n);
    ++k;
  }
  return k;
}

std::vector<u64> cycle_of(u64 q, u64 n) {
  u64 k = multiplicative_order(q, n);
  std::vector<u64> cycle(k);
  u64 x = 1;
  for (u64 i = 0; i < k; ++i) {
    cycle[i] = x;
    x = mod_mul(x, q % n, n);
  }
  return cycle;
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 small : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                    23ull, 29ull, 31ull, 37ull}) {
    if (n == small) return true;
    if (n % small == 0) return false;
  }
  // Deterministic Miller-Rabin for 64-bit inputs with the standard witness set.
  u64 d = n - 1;
  int s = 0;
  while ((d & 1u) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                29ull, 31ull, 37ull}) {
    u64 x = mod_exp(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int r = 1; r < s; ++r) {
      x = mod_mul(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

namespace {

u64 integer_root(u64 n, unsigned e) {
  // Largest r with r^e <= n, found by binary search with overflow guards.
  u64 lo = 1, hi = n;
  while (lo < hi) {
    u64 mid = lo + (hi - lo + 1) / 2;
    unsigned __int128 p = 1;
    bool over = false;
    for (unsigned i = 0; i < e; ++i) {
      p *= mid;
      if (p > n) {
        over = true;
        break;
      }
    }
    if (over)
      hi = mid - 1;
    else
      lo = mid;
  }
  return lo;
}

}  // namespace

std::optional<u64> prime_power_root(u64 n) {
  if (n < 2) return std::nullopt;
  if (is_prime(n)) return n;  // k = 1
  for (unsigned e = 2; (u64{1} << e) <= n; ++e) {
    u64 r = integer_root(n, e);
    if (r < 2) break;
    unsigned __int128 p = 1;
    for (unsigned i = 0; i < e; ++i) p *= r;
    if (p == n && is_prime(r)) return r;
  }
  return std::nullopt;
}

std::optional<Fraction> recover_fraction(u64 a, unsigned m, u64 k_upper) {
  if (m == 0 || m >= 63) throw Error("recover_fraction requires 0 < m < 63");
  if (k_upper == 0) throw Error("recover_fraction requires k_upper > 0");
  const u64 two_m = u64{1} << m;
  if (a >= two_m) throw Error("recover_fraction requires a < 2^m");

  auto qualifies = [&](u64 l, u64 k) {
    // |a/2^m - l/k| <= 1/2^(m+1), cleared of denominators:
    // 2 |a k - l 2^m| <= k.
    unsigned __int128 lhs = static_cast<unsigned __int128>(a) * k;
    unsigned __int128 rhs = static_cast<unsigned __int128>(l) * two_m;
    unsigned __int128 diff = lhs > rhs ? lhs - rhs : rhs - lhs;
    return 2 * diff <= k;
  };

  // Continued-fraction expansion of a / 2^m. The recurrence seeds are the
  // formal convergents 0/1 and 1/0; Euclid steps then yield the true
  // convergents in increasing-denominator order.
  u64 num = a, den = two_m;
  u64 l_prev = 0, k_prev = 1;
  u64 l_cur = 1, k_cur = 0;
  while (den != 0) {
    u64 digit = num / den;
    u64 rem = num % den;
    u64 l_next = digit * l_cur + l_prev;
    u64 k_next = digit * k_cur + k_prev;
    l_prev = l_cur;
    k_prev = k_cur;
    l_cur = l_next;
    k_cur = k_next;
    num = den;
    den = rem;
    if (k_cur > k_upper) return std::nullopt;
    if (qualifies(l_cur, k_cur)) return Fraction{l_cur, k_cur};
  }
  return std::nullopt;
}

}  // namespace qsim
