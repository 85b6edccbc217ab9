#pragma once

// The three Frey objects attached to x^7 + y^7 = d z^p (d = 1 or 3):
// E_{a,b}/Q, the twisted F_{a,b}^{(delta)}/K, and Kraus' hyperelliptic
// C_7(a,b)/Q with Jacobian J. Closed-form invariants, conductor exponents,
// Serre levels, the twist table, and the per-case routing of the proofs.

#include <optional>
#include <string>
#include <vector>

#include "frey7/kresidue.hpp"
#include "frey7/numfield.hpp"

namespace frey7 {

Int phi7(const Int& a, const Int& b);  // (a^7 + b^7) / (a + b) as a form

// ------------------------------------------------------------------ FreyE

struct FreyE {
    Int a, b;
    Int a2, a4, a6;      // y^2 = x^3 + a2 x^2 + a4 x + a6
    Int c4, c6, disc;

    static FreyE make(const Int& a, const Int& b);
};

// ------------------------------------------------------------------ FreyF

struct FreyF {
    Int a, b;
    KElem delta;
    KElem A, B, C;          // untwisted: y^2 = x (x - A)(x + B), C = -(A+B)
    KElem c4, c6, disc;     // invariants of the delta-twist
    KElem model_A, model_B;  // twisted model: y^2 = x (x - delta A)(x + delta B)

    static FreyF make(const Int& a, const Int& b, const KElem& delta);
};

// ------------------------------------------------------------------ FreyC7

struct FreyC7 {
    Int a, b;
    std::vector<Int> coeffs;  // septic, constant first: y^2 = x^7 + ... (monic)
    Int disc;                 // -2^12 * 7^7 * (a^7+b^7)^6

    static FreyC7 make(const Int& a, const Int& b);
};

// ------------------------------------------------------------ case routing

enum class TwoCase { odd_ab, two_exact, four_divides };
enum class SevenCase { no_seven, seven_divides };
enum class Route { elliptic_only, j_max, fastest };
enum class FreyKind { E, F, J };

struct CaseDescriptor {
    int d = 3;  // coefficient of z^p: 3 (main) or 1 (second application)
    TwoCase two_case = TwoCase::odd_ab;
    SevenCase seven_case = SevenCase::no_seven;
    Route route = Route::fastest;
};

// Level of a Hilbert newform space over K as exponents of q2, q3, q7.
struct LevelK {
    int q2 = 0, q3 = 0, q7 = 0;
    bool chi7_twist = false;  // forms are to be twisted by chi_7 (J, 7 | a+b)
    bool operator==(const LevelK&) const = default;
    std::string str() const;
};

// One step of a proof plan: which Frey object at which level.
struct PlanStep {
    FreyKind kind = FreyKind::F;
    KElem delta;                  // for F
    std::optional<LevelK> level_K;  // F / J
    long level_Q = 0;             // E: 2^alpha * 7^2
    std::string technique;
};

// alpha in N(E_{a,b}) = 2^alpha 7^2 rad_7(phi7): 2 if 4|ab; 3 if 2||ab or
// 4|a+b; 4 if 2||a+b. Convention: 0 is divisible by everything.
int conductor_exponent_E_at_2(const Int& a, const Int& b);

// (e2, e7): e2 = 6 if ab even else 24; e7 = 3 if 7|a+b else 6.
std::pair<int, int> semistability_defects_E(const Int& a, const Int& b);

// Twist table ("values of delta"): rows 2|ab-type, columns 7|(a+b).
KElem delta_for_case(const CaseDescriptor& c);

LevelK serre_level_F(const CaseDescriptor& c);

// J-route levels; requires the normalization a = 0 (2), b = 1 (4).
LevelK serre_level_J(const CaseDescriptor& c);

// Conductor exponents of F^{(delta)} at q2 and q7 per the proposition's four
// bullets; throws on delta congruence classes outside the supported table.
std::pair<int, int> conductor_F_at_q2_q7(const Int& a, const Int& b, const KElem& delta);

enum class Reduction { good, multiplicative };

Reduction classify_reduction_E(const FreyE& e, std::uint64_t q);
Reduction classify_reduction_F(const FreyF& f, const PrimeIdealK& P);

// Validates d-specific constraints on a residue pair (3 | a+b and 8 | a+b
// when 2 | a+b, for d = 3).
bool residue_pair_admissible(const Int& a, const Int& b, int d);

CaseDescriptor make_case(const Int& a, const Int& b, int d, Route route);

// The bold entries of the three proof tables (d = 3).
std::vector<PlanStep> route_case(const CaseDescriptor& c);

}  // namespace frey7
