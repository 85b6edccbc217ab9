#pragma once

// Exact integer/rational utilities on top of GMP: primality, factorization,
// CRT reconstruction and rational reconstruction. Everything here is plumbing
// shared by the number-field and elimination layers.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace frey7 {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Int = mpz_class;
using Rat = mpq_class;

inline Int to_int_exact(const Rat& r) {
    if (r.get_den() != 1) throw Error("expected integral rational");
    return r.get_num();
}

bool is_prime(const Int& n);
bool is_prime_u64(std::uint64_t n);

// Next prime > n (GMP's probabilistic next_prime; fine for word-size use).
std::uint64_t next_prime_u64(std::uint64_t n);

// Full factorization: trial division to `trial_bound`, then Pollard-Brent rho
// on the cofactor. Throws if the cofactor resists (never expected for the
// sizes this artifact produces on purpose-built inputs).
std::map<Int, unsigned> factorize(Int n, std::uint64_t trial_bound = 1'000'000);

// Factor out primes <= bound only; returns (factors, remaining cofactor >= 1).
std::pair<std::map<std::uint64_t, unsigned>, Int> trial_factor(Int n, std::uint64_t bound);

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m);
std::uint64_t invmod_u64(std::uint64_t a, std::uint64_t m);

// Balanced CRT: given residues r_i mod coprime moduli m_i, returns the value
// in (-M/2, M/2], M = prod m_i.
Int crt_balanced(const std::vector<std::uint64_t>& residues,
                 const std::vector<std::uint64_t>& moduli);

// Rational reconstruction of x mod m with |num|, den <= bound (den > 0,
// gcd(den, m) = 1). Returns nullopt if no representative exists.
std::optional<Rat> rational_reconstruct(const Int& x, const Int& m, const Int& bound);

// Deterministic splitmix-style generator for property tests and sampling.
struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    std::uint64_t below(std::uint64_t n) { return next() % n; }
    std::int64_t range(std::int64_t lo, std::int64_t hi) {  // inclusive
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }
};

std::string sha256_hex(const std::string& data);
std::string sha256_file_hex(const std::string& path);

}  // namespace frey7
