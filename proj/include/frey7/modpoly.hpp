#pragma once

// Dense univariate polynomial arithmetic over F_p (p an odd word-size prime)
// plus the factorization toolkit needed elsewhere: distinct-degree and
// equal-degree (Cantor-Zassenhaus) splitting, root extraction, and modular
// resultants for the CRT norm path.

#include <cstdint>
#include <tuple>
#include <utility>
#include <vector>

#include "frey7/intutil.hpp"

namespace frey7 {

// Coefficients constant-first, normalized (no trailing zeros); empty = 0.
using PolyFp = std::vector<std::uint64_t>;

namespace fp {

PolyFp normalize(PolyFp a);
PolyFp add(const PolyFp& a, const PolyFp& b, std::uint64_t p);
PolyFp sub(const PolyFp& a, const PolyFp& b, std::uint64_t p);
PolyFp mul(const PolyFp& a, const PolyFp& b, std::uint64_t p);
PolyFp scale(const PolyFp& a, std::uint64_t c, std::uint64_t p);
// division with remainder by monic-or-general nonzero divisor
std::pair<PolyFp, PolyFp> divmod(const PolyFp& a, const PolyFp& b, std::uint64_t p);
PolyFp mod(const PolyFp& a, const PolyFp& b, std::uint64_t p);
PolyFp gcd(PolyFp a, PolyFp b, std::uint64_t p);  // monic gcd
// extended gcd: returns (g, s, t) with s*a + t*b = g, g monic
std::tuple<PolyFp, PolyFp, PolyFp> xgcd(PolyFp a, PolyFp b, std::uint64_t p);
PolyFp monic(PolyFp a, std::uint64_t p);
PolyFp powmod(PolyFp base, Int e, const PolyFp& m, std::uint64_t p);
PolyFp derivative(const PolyFp& a, std::uint64_t p);
std::uint64_t eval(const PolyFp& a, std::uint64_t x, std::uint64_t p);
inline int deg(const PolyFp& a) { return static_cast<int>(a.size()) - 1; }

// Resultant of a and b over F_p (via Euclidean remainder sequence).
std::uint64_t resultant(PolyFp a, PolyFp b, std::uint64_t p);

// Distinct-degree factorization of squarefree monic a: list of (product, d).
std::vector<std::pair<PolyFp, int>> ddf(const PolyFp& a, std::uint64_t p);

// Full factorization of squarefree monic a into monic irreducibles.
std::vector<PolyFp> factor_squarefree(const PolyFp& a, std::uint64_t p, Rng& rng);

// All roots in F_p of arbitrary nonzero a (each listed once).
std::vector<std::uint64_t> roots(const PolyFp& a, std::uint64_t p);

bool is_squarefree(const PolyFp& a, std::uint64_t p);

// Reduce an integer (resp. rational) coefficient vector mod p; rationals
// require denominators prime to p.
PolyFp reduce_int_poly(const std::vector<Int>& c, std::uint64_t p);
PolyFp reduce_rat_poly(const std::vector<Rat>& c, std::uint64_t p);

}  // namespace fp

}  // namespace frey7
