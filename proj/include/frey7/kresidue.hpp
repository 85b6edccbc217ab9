#pragma once

// Reduction of K-integers modulo a prime of K: split primes land in F_q via
// w -> root, inert primes land in F_{q^3} built on K's cubic mod q.

#include "frey7/ffield.hpp"
#include "frey7/numfield.hpp"

namespace frey7 {

struct KResidue {
    PrimeIdealK prime;
    Tower field;
    FqElem omega;  // image of w

    static KResidue make(const PrimeIdealK& P, std::uint64_t cap = kDefaultEnumCap);
    FqElem map(const KElem& x) const;
};

}  // namespace frey7
