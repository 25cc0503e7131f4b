#pragma once

// Classical number theory used by the factoring pipeline: modular arithmetic,
// orders and multiplicative cycles, primality screening, and continued
// fraction recovery of l/k from a phase measurement.

#include <cstdint>
#include <optional>
#include <vector>

namespace qsim {

using u64 = std::uint64_t;

u64 gcd(u64 a, u64 b);

// (a*b) mod N with a 128-bit intermediate, so any N < 2^63 is safe.
u64 mod_mul(u64 a, u64 b, u64 N);

// q^e mod N by repeated squaring.
u64 mod_exp(u64 q, u64 e, u64 N);

// Smallest k >= 1 with q^k = 1 mod N, by direct iteration. Requires
// gcd(q, N) = 1. This is the reference the quantum path is checked against.
u64 multiplicative_order(u64 q, u64 N);

// [1, q, q^2 mod N, ..., q^{k-1} mod N] where k is the order.
std::vector<u64> cycle_of(u64 q, u64 N);

// Deterministic for every 64-bit input (Miller-Rabin over the known-complete
// witness set, after small trial divisions).
bool is_prime(u64 N);

// p when N = p^k for a prime p (k >= 1, so primes return themselves);
// nullopt otherwise.
std::optional<u64> prime_power_root(u64 N);

struct Fraction {
  u64 num = 0;
  u64 den = 1;  // stored reduced: gcd(num, den) = 1
  bool operator==(const Fraction& other) const {
    return num == other.num && den == other.den;
  }
};

// Walks the continued-fraction convergents of a/2^m and returns the first one
// with denominator <= k_upper and |a/2^m - l/k| <= 1/2^{m+1} (an exact integer
// comparison). When 2^m > k_upper^2 at most one fraction can satisfy both
// bounds, so this is the unique candidate; nullopt means no convergent
// qualifies and the caller should retry with a fresh measurement.
std::optional<Fraction> recover_fraction(u64 a, unsigned m, u64 k_upper);

}  // namespace qsim
