#include "frey7/frey.hpp"

#include <cassert>

namespace frey7 {

Int phi7(const Int& a, const Int& b) {
    Int s = 0;
    for (int i = 0; i <= 6; ++i) {
        Int t = 1;
        for (int j = 0; j < 6 - i; ++j) t *= a;
        for (int j = 0; j < i; ++j) t *= b;
        s += (i % 2 == 0) ? t : -t;
    }
    return s;
}

namespace {

Int pow_int(const Int& x, int e) {
    Int r = 1;
    for (int i = 0; i < e; ++i) r *= x;
    return r;
}

bool divides(long m, const Int& x) { return mpz_divisible_ui_p(x.get_mpz_t(), m) != 0; }

int v2_of(const Int& x) {  // v2(0) = large
    if (x == 0) return 1 << 20;
    return static_cast<int>(mpz_scan1(x.get_mpz_t(), 0));
}

}  // namespace

FreyE FreyE::make(const Int& a, const Int& b) {
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    if (g != 1) throw Error("FreyE: a, b must be coprime");
    FreyE e;
    e.a = a;
    e.b = b;
    e.a2 = -pow_int(a - b, 2);
    e.a4 = -2 * pow_int(a, 4) + pow_int(a, 3) * b - 5 * a * a * b * b + a * pow_int(b, 3) -
           2 * pow_int(b, 4);
    e.a6 = pow_int(a, 6) - 6 * pow_int(a, 5) * b + 8 * pow_int(a, 4) * b * b -
           13 * pow_int(a, 3) * pow_int(b, 3) + 8 * a * a * pow_int(b, 4) -
           6 * a * pow_int(b, 5) + pow_int(b, 6);
    e.c4 = 16 * 7 * (pow_int(a, 4) - pow_int(a, 3) * b + 3 * a * a * b * b - a * pow_int(b, 3) +
                     pow_int(b, 4));
    e.c6 = 32 * 7 *
           (pow_int(a, 6) - 15 * pow_int(a, 5) * b + 15 * pow_int(a, 4) * b * b -
            29 * pow_int(a, 3) * pow_int(b, 3) + 15 * a * a * pow_int(b, 4) -
            15 * a * pow_int(b, 5) + pow_int(b, 6));
    e.disc = 16 * 49 * pow_int(phi7(a, b), 2);
    if (e.c4 * e.c4 * e.c4 - e.c6 * e.c6 != 1728 * e.disc)
        throw Error("FreyE: invariant identity failed");
    return e;
}

FreyF FreyF::make(const Int& a, const Int& b, const KElem& delta) {
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    if (g != 1) throw Error("FreyF: a, b must be coprime");
    if (delta.is_zero()) throw Error("FreyF: delta must be nonzero");
    FreyF f;
    f.a = a;
    f.b = b;
    f.delta = delta;
    const KElem w1 = KElem::omega();
    const KElem w2 = KElem::omega2();
    const Rat ab(a * b), aa_bb(a * a + b * b), apb2((a + b) * (a + b));
    f.A = k_scale(Rat(apb2), k_sub(w2, w1));
    f.B = k_mul(k_sub(KElem::from_int(2), w2),
                k_add(KElem(aa_bb, Rat(0), Rat(0)), k_scale(ab, w1)));
    f.C = k_neg(k_add(f.A, f.B));
    // displayed identity: C = (w1 - 2)(a^2 + w2 ab + b^2)
    KElem c_check = k_mul(k_sub(w1, KElem::from_int(2)),
                          k_add(KElem(aa_bb, Rat(0), Rat(0)), k_scale(ab, w2)));
    if (!(c_check == f.C)) throw Error("FreyF: C identity failed");

    KElem c4_plain = k_scale(Rat(16), k_add(k_add(k_mul(f.A, f.A), k_mul(f.A, f.B)),
                                            k_mul(f.B, f.B)));
    KElem twoA3 = k_scale(Rat(2), k_mul(f.A, k_mul(f.A, f.A)));
    KElem threeA2B = k_scale(Rat(3), k_mul(k_mul(f.A, f.A), f.B));
    KElem threeAB2 = k_scale(Rat(3), k_mul(f.A, k_mul(f.B, f.B)));
    KElem twoB3 = k_scale(Rat(2), k_mul(f.B, k_mul(f.B, f.B)));
    KElem c6_plain = k_scale(Rat(32), k_sub(k_sub(k_add(twoA3, threeA2B), threeAB2), twoB3));
    KElem abc = k_mul(f.A, k_mul(f.B, f.C));
    KElem disc_plain = k_scale(Rat(16), k_mul(abc, abc));

    KElem d2 = k_mul(delta, delta);
    KElem d3 = k_mul(d2, delta);
    f.c4 = k_mul(d2, c4_plain);
    f.c6 = k_mul(d3, c6_plain);
    f.disc = k_mul(k_mul(d3, d3), disc_plain);
    f.model_A = k_mul(delta, f.A);
    f.model_B = k_mul(delta, f.B);
    KElem lhs = k_sub(k_mul(f.c4, k_mul(f.c4, f.c4)), k_mul(f.c6, f.c6));
    if (!(lhs == k_scale(Rat(1728), f.disc))) throw Error("FreyF: invariant identity failed");
    return f;
}

FreyC7 FreyC7::make(const Int& a, const Int& b) {
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    if (g != 1) throw Error("FreyC7: a, b must be coprime");
    FreyC7 c;
    c.a = a;
    c.b = b;
    c.coeffs = {pow_int(b, 7) - pow_int(a, 7),
                7 * pow_int(a, 3) * pow_int(b, 3),
                Int(0),
                14 * a * a * b * b,
                Int(0),
                7 * a * b,
                Int(0),
                Int(1)};
    c.disc = -pow_int(Int(2), 12) * pow_int(Int(7), 7) * pow_int(pow_int(a, 7) + pow_int(b, 7), 6);
    return c;
}

int conductor_exponent_E_at_2(const Int& a, const Int& b) {
    Int ab = a * b, apb = a + b;
    if (divides(4, ab)) return 2;
    if (v2_of(ab) == 1 || divides(4, apb)) return 3;
    if (v2_of(apb) == 1) return 4;
    // remaining: ab odd and a+b odd — impossible for integers
    throw Error("conductor_exponent_E_at_2: impossible parity");
}

std::pair<int, int> semistability_defects_E(const Int& a, const Int& b) {
    int e2 = divides(2, a * b) ? 6 : 24;
    int e7 = divides(7, a + b) ? 3 : 6;
    return {e2, e7};
}

namespace {

TwoCase two_case_of(const Int& a, const Int& b) {
    Int ab = a * b;
    if (!divides(2, ab)) return TwoCase::odd_ab;
    return v2_of(ab) == 1 ? TwoCase::two_exact : TwoCase::four_divides;
}

}  // namespace

KElem delta_for_case(const CaseDescriptor& c) {
    const bool seven = c.seven_case == SevenCase::seven_divides;
    switch (c.two_case) {
        case TwoCase::odd_ab:
        case TwoCase::four_divides:
            return seven ? KElem::from_int(1) : KElem::from_int(-7);
        case TwoCase::two_exact:
            return seven ? KElem::omega2() : k_scale(Rat(-7), KElem::omega2());
    }
    throw Error("unreachable");
}

std::string LevelK::str() const {
    std::string s;
    auto app = [&](const char* name, int e) {
        if (e <= 0) return;
        if (!s.empty()) s += "*";
        s += name;
        if (e > 1) s += "^" + std::to_string(e);
    };
    app("q2", q2);
    app("q3", q3);
    app("q7", q7);
    if (s.empty()) s = "(1)";
    if (chi7_twist) s += " (x chi7)";
    return s;
}

LevelK serre_level_F(const CaseDescriptor& c) {
    LevelK l;
    l.q2 = (c.two_case == TwoCase::odd_ab) ? 1 : 3;
    l.q3 = (c.d == 3) ? 1 : 0;
    l.q7 = (c.seven_case == SevenCase::seven_divides) ? 1 : 0;
    return l;
}

LevelK serre_level_J(const CaseDescriptor& c) {
    if (c.two_case == TwoCase::odd_ab)
        throw Error("serre_level_J: requires a = 0 (2), b = 1 (4), so ab is even");
    LevelK l;
    l.q2 = 2;
    if (c.d == 1) {
        l.q3 = 0;
        l.q7 = 2;
        return l;
    }
    l.q3 = 1;
    if (c.seven_case == SevenCase::seven_divides) {
        l.q7 = 1;
        l.chi7_twist = true;
    } else {
        l.q7 = 2;
    }
    return l;
}

std::pair<int, int> conductor_F_at_q2_q7(const Int& a, const Int& b, const KElem& delta) {
    if (!delta.is_integral() || delta.is_zero()) throw Error("delta must be a nonzero integer of K");
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    if (g != 1) throw Error("conductor_F: a, b must be coprime");
    const Int apb = a + b, ab = a * b;

    int v7d = k_val_q7(delta);
    int v7;
    if (v7d == 0) {
        v7 = divides(7, apb) ? 1 : 2;
    } else if (!divides(7, apb) && v7d % 2 == 1) {
        v7 = 0;
    } else {
        throw Error("conductor_F: unsupported delta class at q7");
    }

    auto congruent_mod_4 = [](const KElem& x, const KElem& y) {
        KElem d = k_sub(x, y);
        if (!d.is_integral()) return false;
        return k_val_q2(d) >= 2;
    };
    int v2;
    if (congruent_mod_4(delta, KElem::from_int(1))) {
        if (v2_of(apb) == 2)
            v2 = 0;
        else if (divides(8, apb))
            v2 = 1;
        else if (divides(4, ab))
            v2 = 3;
        else
            v2 = 4;  // 2 || a+b or 2 || ab
    } else if (two_case_of(a, b) == TwoCase::two_exact &&
               congruent_mod_4(delta, KElem::omega2())) {
        v2 = 3;
    } else {
        throw Error("conductor_F: unsupported delta class at q2");
    }

#ifndef NDEBUG
    // spot-check the proof's intermediate valuation triples
    FreyF f = FreyF::make(a, b, delta);
    if (divides(2, ab) && k_val_q2(delta) == 0 && !f.disc.is_zero()) {
        assert(k_val_q2(f.c4) == 4 && k_val_q2(f.c6) == 5 && k_val_q2(f.disc) == 4);
    }
    if (divides(7, apb) && v7d == 0 && apb != 0 && !f.disc.is_zero()) {
        Int a7b7 = apb;  // v7(a+b)
        int v7apb = 0;
        while (divides(7, a7b7)) {
            a7b7 /= 7;
            ++v7apb;
        }
        assert(k_val_q7(f.c4) == 4 && k_val_q7(f.disc) == 10 + 12 * v7apb);
    }
#endif
    return {v2, v7};
}

Reduction classify_reduction_E(const FreyE& e, std::uint64_t q) {
    if (q == 2 || q == 7) throw Error("classify_reduction_E: q must avoid {2,7}");
    return divides(static_cast<long>(q), phi7(e.a, e.b)) ? Reduction::multiplicative
                                                         : Reduction::good;
}

Reduction classify_reduction_F(const FreyF& f, const PrimeIdealK& P) {
    if (P.q == 2 || P.q == 7) throw Error("classify_reduction_F: residue char must avoid {2,7}");
    KResidue res = KResidue::make(P);
    // bad iff P | (a+b)(a^2 + w1 ab + b^2)(a^2 + w2 ab + b^2)
    const Rat ab(f.a * f.b), aabb(f.a * f.a + f.b * f.b);
    KElem f1 = k_add(KElem(aabb, Rat(0), Rat(0)), k_scale(ab, KElem::omega()));
    KElem f2 = k_add(KElem(aabb, Rat(0), Rat(0)), k_scale(ab, KElem::omega2()));
    KElem prod = k_mul(KElem(Rat(f.a + f.b), Rat(0), Rat(0)), k_mul(f1, f2));
    return res.field.is_zero(res.map(prod)) ? Reduction::multiplicative : Reduction::good;
}

bool residue_pair_admissible(const Int& a, const Int& b, int d) {
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    if (g != 1) return false;
    if (d == 1) return true;
    const Int apb = a + b;
    if (!divides(3, apb)) return false;
    if (divides(2, apb) && !divides(8, apb)) return false;
    return true;
}

CaseDescriptor make_case(const Int& a, const Int& b, int d, Route route) {
    if (d != 1 && d != 3) throw Error("d must be 1 or 3");
    if (!residue_pair_admissible(a, b, d))
        throw Error("residue pair violates the d=" + std::to_string(d) + " constraints");
    CaseDescriptor c;
    c.d = d;
    c.route = route;
    c.two_case = two_case_of(a, b);
    c.seven_case = divides(7, a + b) ? SevenCase::seven_divides : SevenCase::no_seven;
    return c;
}

std::vector<PlanStep> route_case(const CaseDescriptor& c) {
    if (c.d != 3) throw Error("route_case covers the d = 3 proof tables");
    const bool seven = c.seven_case == SevenCase::seven_divides;

    auto stepF = [&](const KElem& delta) {
        PlanStep s;
        s.kind = FreyKind::F;
        s.delta = delta;
        s.level_K = serre_level_F(c);
        s.technique = "standard+refined";
        return s;
    };
    auto stepE = [&]() {
        PlanStep s;
        s.kind = FreyKind::E;
        // ab odd forces 8 | a+b here, so alpha = 3; 2||ab also gives alpha = 3
        s.level_Q = (c.two_case == TwoCase::four_divides ? 4L : 8L) * 49L;
        s.technique = "standard+defect";
        return s;
    };
    auto stepJ = [&]() {
        PlanStep s;
        s.kind = FreyKind::J;
        s.level_K = serre_level_J(c);
        s.technique = "trace-set";
        return s;
    };

    switch (c.route) {
        case Route::elliptic_only:
            return {stepF(delta_for_case(c))};
        case Route::j_max:
            if (c.two_case == TwoCase::odd_ab)
                return {stepF(delta_for_case(c))};
            return {stepJ()};
        case Route::fastest:
            if (c.two_case == TwoCase::odd_ab)
                return seven ? std::vector<PlanStep>{stepF(delta_for_case(c))}
                             : std::vector<PlanStep>{stepE()};
            if (c.two_case == TwoCase::two_exact)
                return seven ? std::vector<PlanStep>{stepJ()} : std::vector<PlanStep>{stepE()};
            return seven ? std::vector<PlanStep>{stepJ()}
                         : std::vector<PlanStep>{stepF(delta_for_case(c))};
    }
    throw Error("unreachable");
}

}  // namespace frey7
