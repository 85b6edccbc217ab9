#pragma once

// Exact arithmetic in K = Q(zeta_7)^+ = Q(w), w = zeta_7 + zeta_7^{-1}, with
// defining polynomial X^3 + X^2 - 2X - 1, and in general Hecke coefficient
// fields given by a monic integral polynomial. Also: splitting of rational
// primes in K, the cyclic Galois action, unit-power gcd primes, residue maps
// modulo p, and detection of K inside a Hecke field.

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "frey7/intutil.hpp"
#include "frey7/modpoly.hpp"

namespace frey7 {

// ----------------------------------------------------------------- KElem

struct KElem {
    std::array<Rat, 3> c{};  // c[0] + c[1] w + c[2] w^2

    KElem() = default;
    KElem(Rat c0, Rat c1, Rat c2) : c{std::move(c0), std::move(c1), std::move(c2)} {}
    static KElem from_int(long v) { return KElem(Rat(v), Rat(0), Rat(0)); }
    static KElem omega() { return KElem(Rat(0), Rat(1), Rat(0)); }
    static KElem omega2() { return KElem(Rat(-2), Rat(0), Rat(1)); }      // w2 = w^2 - 2
    static KElem omega3() { return KElem(Rat(1), Rat(-1), Rat(-1)); }     // w3 = 1 - w - w^2
    static KElem unit_eps1() { return KElem(Rat(1), Rat(0), Rat(-1)); }   // 1 - w^2
    static KElem unit_eps2() { return KElem(Rat(1), Rat(1), Rat(0)); }    // 1 + w
    static KElem q7_uniformizer() { return KElem(Rat(2), Rat(2), Rat(-1)); }  // 2 + 2w - w^2

    bool operator==(const KElem&) const = default;
    bool is_zero() const { return c[0] == 0 && c[1] == 0 && c[2] == 0; }
    bool is_integral() const;
    bool is_rational() const { return c[1] == 0 && c[2] == 0; }
};

KElem k_add(const KElem& x, const KElem& y);
KElem k_sub(const KElem& x, const KElem& y);
KElem k_neg(const KElem& x);
KElem k_mul(const KElem& x, const KElem& y);
KElem k_scale(const Rat& s, const KElem& x);
KElem k_pow(KElem x, unsigned long e);
KElem k_inv(const KElem& x);
Rat k_norm(const KElem& x);
Rat k_trace(const KElem& x);

// Galois generator sigma_0 : w -> w^2 - 2 (sends w1 -> w2 -> w3 -> w1).
KElem k_sigma(const KElem& x, int power = 1);

// q7-adic valuation of a nonzero integral element (q7 totally ramified,
// uniformizer 2 + 2w - w^2, so v(7) = 3). q2 is inert: v_{q2} = min_i v_2(c_i).
int k_val_q7(const KElem& x);
int k_val_q2(const KElem& x);

// Primes p >= 5, p != 7 dividing gcd(N(eps1^e - 1), N(eps2^e - 1)).
std::set<std::uint64_t> unit_gcd_primes(unsigned long exponent);

// ----------------------------------------------------------- PrimeIdealK

struct PrimeIdealK {
    std::uint64_t q = 0;     // rational prime below
    int f = 1;               // residue degree (1 or 3); q=7: f=1 with ramified=true
    bool ramified = false;   // only for q = 7
    std::uint64_t root = 0;  // root of the cubic mod q defining w -> root (f == 1)
    int index = 0;           // position among the sorted roots (split case)

    Int norm() const;
    bool operator==(const PrimeIdealK&) const = default;
};

// Factorization type of q in K. Split: three primes ordered by root; inert:
// one prime with f = 3; q = 7: the unique ramified prime (root 2).
std::vector<PrimeIdealK> split_prime(std::uint64_t q);

// sigma_0 acting on primes above a split q: sigma(P_r) = P_s where s^2 - 2 = r.
PrimeIdealK sigma_prime(const PrimeIdealK& P, int power = 1);

// Hilbert-style residue-degree data: f_q = order of q in (Z/7)^x / {±1}.
int residue_degree_in_K(std::uint64_t q);

// ------------------------------------------------------- NumberFieldSpec

struct NumberFieldSpec {
    std::vector<Int> coeffs;  // monic, constant first; degree = coeffs.size() - 1

    explicit NumberFieldSpec(std::vector<Int> c);
    static NumberFieldSpec rationals() { return NumberFieldSpec({Int(0), Int(1)}); }
    static NumberFieldSpec k_cubic() {
        return NumberFieldSpec({Int(-1), Int(-2), Int(1), Int(1)});
    }
    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    bool operator==(const NumberFieldSpec&) const = default;
};

struct NFElem {
    std::shared_ptr<const NumberFieldSpec> field;
    std::vector<Rat> coords;  // length == degree, constant first

    bool is_zero() const;
    bool operator==(const NFElem& o) const { return coords == o.coords; }
};

NFElem nf_make(std::shared_ptr<const NumberFieldSpec> field, std::vector<Rat> coords);
NFElem nf_from_rat(std::shared_ptr<const NumberFieldSpec> field, const Rat& v);
NFElem nf_add(const NFElem& x, const NFElem& y);
NFElem nf_sub(const NFElem& x, const NFElem& y);
NFElem nf_mul(const NFElem& x, const NFElem& y);
NFElem nf_scale(const Rat& s, const NFElem& x);

// Exact norm via modular resultants + CRT (Hadamard-style bound).
Rat nf_norm(const NFElem& x);

// Image of a K-element under the embedding w -> root (root a verified root of
// K's cubic in the target field).
NFElem k_embed(const KElem& u, const NFElem& root);

// Numeric real/complex embeddings of the field (all roots of the defining
// polynomial), for Weil-bound sanity checks. Aberth iteration on doubles.
std::vector<std::pair<double, double>> field_embeddings(const NumberFieldSpec& spec);

// ------------------------------------------------------------ ResidueMap

// Reduction of a Hecke field modulo a prime P | p, i.e. modulo an irreducible
// factor of the defining polynomial mod p. Images live in F_{p^d} represented
// as polynomials mod `factor`.
struct ResidueMapNF {
    std::uint64_t p = 0;
    PolyFp factor;  // monic irreducible of degree d
    int degree() const { return fp::deg(factor); }
    PolyFp image(const NFElem& x) const;
    PolyFp image_rat(const Rat& v) const;
};

struct IndexDivisorError : Error {
    using Error::Error;
};

// One map per irreducible factor of the defining polynomial mod p; throws
// IndexDivisorError when the polynomial is not squarefree mod p.
std::vector<ResidueMapNF> residue_maps_mod_p(const NumberFieldSpec& spec, std::uint64_t p);

// ------------------------------------------------------- K inside K_g

enum class ContainsK { yes, no, inconclusive };

struct KEmbeddingResult {
    ContainsK status = ContainsK::inconclusive;
    std::vector<NFElem> roots;  // exactly 3 when status == yes, else empty
};

// Finds the roots of X^3 + X^2 - 2X - 1 in the given field, if any. Hensel
// lift at a split prime + exact verification; "no" is certified either by a
// degree obstruction (3 ∤ n) or by factorization patterns at primes inert in
// K; otherwise bounded effort ends in "inconclusive".
KEmbeddingResult find_K_embeddings(const NumberFieldSpec& spec);

}  // namespace frey7
