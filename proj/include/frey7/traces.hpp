#pragma once

// Frobenius trace oracles: point counts for E over F_q, F^{(delta)} over
// residue fields of K, C_7 over F_{q^k}; L-polynomial reconstruction from
// counts; and the trace sets T_q of the GL_2(K)-type Jacobian.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "frey7/frey.hpp"
#include "frey7/kresidue.hpp"

namespace frey7 {

struct BadReductionError : Error {
    BadReductionError(const std::string& what, int marker)
        : Error(what), mult_marker(marker) {}
    int mult_marker;  // ±1: split/non-split multiplicative trace
};

// a_q(E_{a,b}) = q + 1 - #E(F_q); throws BadReductionError at primes dividing
// phi7(a,b). q must avoid {2,7}.
long count_points_E(const Int& a, const Int& b, std::uint64_t q);

// a_P(F_{a,b}^{(delta)}) over the residue field of P (char not in {2,7}).
long count_points_F(const Int& a, const Int& b, const KElem& delta, const PrimeIdealK& P,
                    std::uint64_t cap = kDefaultEnumCap);

// #C_7(a,b)(F_{q^k}) by enumeration (odd-degree model: one point at infinity).
std::uint64_t count_points_C7(const Int& a, const Int& b, std::uint64_t q, int k,
                              std::uint64_t cap = kDefaultEnumCap);

// Genus-3 L-polynomial over F_q: 1 + c1 T + ... + c6 T^6.
struct LPoly {
    std::uint64_t q = 0;
    std::array<Int, 7> c;  // c[0] = 1
};

// Reconstruction from (N1, N2, N3) = #C(F_{q^i}) via Newton's identities and
// the functional equation c_{6-i} = q^{3-i} c_i; verifies the root moduli
// numerically (1e-8) and throws on violation.
LPoly lpoly_from_counts(const std::array<std::uint64_t, 3>& counts, std::uint64_t q);

// coefficients (e1, e2, e3) of the real Weil cubic h(X) = X^3 - e1 X^2 + e2 X - e3
// whose roots a_i satisfy L(T) = prod (1 - a_i T + q T^2).
std::array<Int, 3> real_weil_cubic(const LPoly& L);

struct TraceSet {
    std::uint64_t q = 0;
    bool split = false;
    std::vector<KElem> elems;  // 1 element (in Z) or 3 conjugates, sorted
};

// T_q(x, y) = { a_P(J(x,y)) : P | q }. Requires q not in {2,3,7} and
// q ∤ x^7 + y^7. Cached per (q, x mod q, y mod q).
TraceSet trace_set(const Int& x, const Int& y, std::uint64_t q,
                   std::uint64_t cap = kDefaultEnumCap);

// chi_7(Frob_P): +1 iff q^{f} = 1 (mod 7), -1 iff = -1 (mod 7).
int chi7_sign(const PrimeIdealK& P);

// (-1 | q)^{f}: relates a_P(J(a,b)) = sign * a_P(J(b,a)).
int symmetry_sign(const PrimeIdealK& P);

// CSV dump of (q, x, y, trace set) rows for fixture generation.
void dump_trace_table(std::ostream& os, std::uint64_t q, std::uint64_t cap = kDefaultEnumCap);

void clear_trace_caches();

}  // namespace frey7
