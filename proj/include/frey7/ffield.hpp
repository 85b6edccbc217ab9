#pragma once

// Arithmetic and enumeration in F_q and F_{q^k}, k <= 3, for small q. Used by
// all point-counting paths. Small extensions are driven by log/antilog tables
// (a generator power table); larger ones fall back to schoolbook reduction.

#include <array>
#include <cstdint>
#include <vector>

#include "frey7/intutil.hpp"
#include "frey7/modpoly.hpp"

namespace frey7 {

inline constexpr std::uint64_t kDefaultEnumCap = 2'000'000;

// Element of F_{q^k}: k coefficients, constant first (unused tail = 0).
using FqElem = std::array<std::uint64_t, 3>;

enum class SquareClass { square, nonsquare, zero };

class Tower {
  public:
    // Deterministic modulus: smallest lexicographic (c0, c1, ..., 1) monic
    // irreducible of degree k over F_q.
    static Tower build_extension(std::uint64_t q, int k,
                                 std::uint64_t cap = kDefaultEnumCap);
    // Custom irreducible modulus (e.g. K's cubic mod q for residue fields).
    static Tower with_modulus(std::uint64_t q, PolyFp modulus,
                              std::uint64_t cap = kDefaultEnumCap);

    std::uint64_t q() const { return q_; }
    int k() const { return k_; }
    std::uint64_t size() const { return size_; }
    const PolyFp& modulus() const { return modulus_; }

    FqElem zero() const { return {0, 0, 0}; }
    FqElem one() const { return {1, 0, 0}; }
    FqElem from_int(std::int64_t v) const;
    FqElem element(std::uint64_t index) const;  // base-q digits
    std::uint64_t index_of(const FqElem& x) const;

    FqElem add(const FqElem& a, const FqElem& b) const;
    FqElem sub(const FqElem& a, const FqElem& b) const;
    FqElem neg(const FqElem& a) const;
    FqElem mul(const FqElem& a, const FqElem& b) const;
    FqElem scale(std::uint64_t c, const FqElem& a) const;
    FqElem pow(FqElem a, Int e) const;
    FqElem frobenius(const FqElem& a) const { return pow(a, Int(static_cast<unsigned long>(q_))); }
    bool is_zero(const FqElem& a) const { return a[0] == 0 && a[1] == 0 && a[2] == 0; }

    SquareClass is_square(const FqElem& a) const;

    // value of sum coeffs[i] * x^i with integer coefficients
    FqElem eval_int_poly(const std::vector<Int>& coeffs, const FqElem& x) const;

  private:
    Tower() = default;
    void init_tables();

    std::uint64_t q_ = 0;
    int k_ = 1;
    std::uint64_t size_ = 0;
    PolyFp modulus_;
    bool tables_ = false;
    std::vector<std::uint32_t> log_;   // index -> discrete log (generator based)
    std::vector<std::uint32_t> exp_;   // log -> index
};

// smallest lexicographic monic irreducible of degree k over F_q
PolyFp smallest_irreducible(std::uint64_t q, int k);

}  // namespace frey7
