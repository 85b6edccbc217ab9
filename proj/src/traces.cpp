#include "frey7/traces.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <ostream>
#include <shared_mutex>

namespace frey7 {

// ---------------------------------------------------------------- KResidue

KResidue KResidue::make(const PrimeIdealK& P, std::uint64_t cap) {
    KResidue r;
    r.prime = P;
    if (P.ramified) {
        r.field = Tower::with_modulus(7, PolyFp{0, 1}, cap);
        r.omega = {2, 0, 0};
        return r;
    }
    if (P.f == 1) {
        r.field = Tower::with_modulus(P.q, PolyFp{0, 1}, cap);
        r.omega = {P.root, 0, 0};
    } else {
        PolyFp cubic = fp::reduce_int_poly({Int(-1), Int(-2), Int(1), Int(1)}, P.q);
        r.field = Tower::with_modulus(P.q, cubic, cap);
        r.omega = {0, 1, 0};
    }
    return r;
}

FqElem KResidue::map(const KElem& x) const {
    const std::uint64_t q = field.q();
    FqElem w2 = field.mul(omega, omega);
    FqElem out = field.zero();
    const FqElem pows[3] = {field.one(), omega, w2};
    for (int i = 0; i < 3; ++i) {
        std::uint64_t num = mpz_fdiv_ui(x.c[i].get_num().get_mpz_t(), q);
        std::uint64_t den = mpz_fdiv_ui(x.c[i].get_den().get_mpz_t(), q);
        if (den == 0) throw Error("KResidue: denominator divisible by q");
        std::uint64_t v = mulmod_u64(num, invmod_u64(den, q), q);
        out = field.add(out, field.scale(v, pows[i]));
    }
    return out;
}

// ------------------------------------------------------------- счёт helpers

namespace {

// square table over the tower: index -> is nonzero square
std::vector<bool> square_table(const Tower& F) {
    std::vector<bool> sq(F.size(), false);
    for (std::uint64_t i = 1; i < F.size(); ++i) {
        FqElem e = F.element(i);
        sq[F.index_of(F.mul(e, e))] = true;
    }
    return sq;
}

// #points of y^2 = sum coeffs[i] x^i over the tower, +1 at infinity (odd deg)
std::uint64_t count_odd_model(const Tower& F, const std::vector<FqElem>& coeffs) {
    auto sq = square_table(F);
    std::uint64_t n = 1;
    for (std::uint64_t i = 0; i < F.size(); ++i) {
        FqElem x = F.element(i);
        FqElem v = F.zero();
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = F.add(F.mul(v, x), *it);
        if (F.is_zero(v))
            n += 1;
        else if (sq[F.index_of(v)])
            n += 2;
    }
    return n;
}

struct CountCache {
    std::map<std::tuple<std::uint64_t, int, std::uint64_t, std::uint64_t>, std::uint64_t> c7;
    std::map<std::tuple<std::uint64_t, std::uint64_t, std::uint64_t>, TraceSet> tsets;
    std::shared_mutex mtx;
};

CountCache& cache() {
    static CountCache c;
    return c;
}

}  // namespace

void clear_trace_caches() {
    auto& c = cache();
    std::unique_lock lk(c.mtx);
    c.c7.clear();
    c.tsets.clear();
}

long count_points_E(const Int& a, const Int& b, std::uint64_t q) {
    if (q == 2 || q == 7) throw Error("count_points_E: q must avoid {2,7}");
    FreyE e = FreyE::make(a, b);
    if (mpz_divisible_ui_p(phi7(a, b).get_mpz_t(), q)) {
        // multiplicative: y^2 = (x - r0)^2 (x - r1); split iff r0 - r1 is square
        Tower F = Tower::with_modulus(q, PolyFp{0, 1});
        PolyFp cub = fp::reduce_int_poly({e.a6, e.a4, e.a2, Int(1)}, q);
        PolyFp dcub = fp::derivative(cub, q);
        std::uint64_t r0 = q;
        for (std::uint64_t xv = 0; xv < q; ++xv)
            if (fp::eval(cub, xv, q) == 0 && fp::eval(dcub, xv, q) == 0) {
                r0 = xv;
                break;
            }
        if (r0 == q) throw Error("count_points_E: no double root at bad prime");
        // sum of roots = -a2, so r1 = -a2 - 2 r0
        std::uint64_t a2m = mpz_fdiv_ui(e.a2.get_mpz_t(), q);
        std::uint64_t r1 = ((3 * q - a2m - 2 * (r0 % q)) % q);
        if (r1 == r0) throw Error("count_points_E: additive degeneration (impossible here)");
        std::uint64_t d = (r0 + q - r1) % q;
        int marker = (F.is_square({d, 0, 0}) == SquareClass::square) ? 1 : -1;
        throw BadReductionError("E has multiplicative reduction at q", marker);
    }
    Tower F = Tower::with_modulus(q, PolyFp{0, 1});
    std::vector<FqElem> coeffs = {F.from_int(0), F.from_int(0), F.from_int(0), F.one()};
    coeffs[0] = {mpz_fdiv_ui(e.a6.get_mpz_t(), q), 0, 0};
    coeffs[1] = {mpz_fdiv_ui(e.a4.get_mpz_t(), q), 0, 0};
    coeffs[2] = {mpz_fdiv_ui(e.a2.get_mpz_t(), q), 0, 0};
    std::uint64_t n = count_odd_model(F, coeffs);
    return static_cast<long>(q) + 1 - static_cast<long>(n);
}

long count_points_F(const Int& a, const Int& b, const KElem& delta, const PrimeIdealK& P,
                    std::uint64_t cap) {
    if (P.q == 2 || P.q == 7) throw Error("count_points_F: residue char must avoid {2,7}");
    FreyF f = FreyF::make(a, b, delta);
    KResidue res = KResidue::make(P, cap);
    const Tower& F = res.field;
    FqElem mA = res.map(f.model_A), mB = res.map(f.model_B);
    FqElem dsc = res.map(f.disc);
    if (F.is_zero(dsc)) {
        // roots {0, mA, -mB}; find repeated r0 and simple r1
        FqElem r[3] = {F.zero(), mA, F.neg(mB)};
        int i0 = -1, i1 = -1;
        for (int i = 0; i < 3 && i0 < 0; ++i)
            for (int j = i + 1; j < 3; ++j)
                if (r[i] == r[j]) {
                    i0 = i;
                    i1 = 3 - i - j;
                }
        if (i0 < 0) throw Error("count_points_F: zero disc but distinct roots");
        FqElem diff = F.sub(r[i0], r[i1]);
        int marker = (F.is_square(diff) == SquareClass::square) ? 1 : -1;
        throw BadReductionError("F has multiplicative reduction at P", marker);
    }
    // y^2 = x(x - mA)(x + mB) = x^3 + (mB - mA) x^2 - mA mB x
    std::vector<FqElem> coeffs = {F.zero(), F.neg(F.mul(mA, mB)), F.sub(mB, mA), F.one()};
    std::uint64_t n = count_odd_model(F, coeffs);
    Int N = P.norm();
    return static_cast<long>(N.get_ui()) + 1 - static_cast<long>(n);
}

std::uint64_t count_points_C7(const Int& a, const Int& b, std::uint64_t q, int k,
                              std::uint64_t cap) {
    if (q == 2 || q == 7) throw Error("count_points_C7: q must be odd, not 7");
    Int a7b7 = a * a * a * a * a * a * a + b * b * b * b * b * b * b;
    if (mpz_divisible_ui_p(a7b7.get_mpz_t(), q))
        throw BadReductionError("C7 has bad reduction at q", 0);
    std::uint64_t am = mpz_fdiv_ui(a.get_mpz_t(), q), bm = mpz_fdiv_ui(b.get_mpz_t(), q);
    auto key = std::make_tuple(q, k, am, bm);
    {
        std::shared_lock lk(cache().mtx);
        auto it = cache().c7.find(key);
        if (it != cache().c7.end()) return it->second;
    }
    FreyC7 c = FreyC7::make(a, b);
    Tower F = Tower::build_extension(q, k, cap);
    std::vector<FqElem> coeffs;
    for (const auto& ic : c.coeffs) coeffs.push_back(F.from_int(0)), coeffs.back()[0] = mpz_fdiv_ui(ic.get_mpz_t(), q);
    std::uint64_t n = count_odd_model(F, coeffs);
    {
        std::unique_lock lk(cache().mtx);
        cache().c7[key] = n;
    }
    return n;
}

LPoly lpoly_from_counts(const std::array<std::uint64_t, 3>& counts, std::uint64_t q) {
    LPoly L;
    L.q = q;
    Int qi(static_cast<unsigned long>(q));
    Int s1 = qi + 1 - counts[0];
    Int s2 = qi * qi + 1 - counts[1];
    Int s3 = qi * qi * qi + 1 - counts[2];
    Int e1 = s1;
    Int twoe2 = e1 * s1 - s2;
    if (!mpz_divisible_ui_p(twoe2.get_mpz_t(), 2)) throw Error("lpoly: e2 not integral");
    Int e2 = twoe2 / 2;
    Int threee3 = e2 * s1 - e1 * s2 + s3;
    if (!mpz_divisible_ui_p(threee3.get_mpz_t(), 3)) throw Error("lpoly: e3 not integral");
    Int e3 = threee3 / 3;
    L.c = {Int(1), -e1, e2, -e3, qi * e2, qi * qi * (-e1), qi * qi * qi};
    // numeric sanity: all inverse roots on |z| = sqrt(q)
    std::vector<Int> rev = {L.c[6], L.c[5], L.c[4], L.c[3], L.c[2], L.c[1], L.c[0]};
    NumberFieldSpec fake(rev);  // monic since c[0] = 1
    for (auto& [re, im] : field_embeddings(fake)) {
        double mod = std::hypot(re, im);
        if (std::abs(mod - std::sqrt(double(q))) > 1e-8 * std::sqrt(double(q)))
            throw Error("lpoly: functional-equation root check failed (counting bug?)");
    }
    return L;
}

std::array<Int, 3> real_weil_cubic(const LPoly& L) {
    Int q(static_cast<unsigned long>(L.q));
    Int e1 = -L.c[1];
    Int e2 = L.c[2] - 3 * q;
    Int e3 = -L.c[3] - 2 * q * e1;
    return {e1, e2, e3};
}

namespace {

bool k_less(const KElem& x, const KElem& y) { return x.c < y.c; }

KElem k_from_ints(long c0, long c1, long c2) { return KElem(Rat(c0), Rat(c1), Rat(c2)); }

// h(u) for monic integer cubic X^3 - e1 X^2 + e2 X - e3
KElem eval_weil_cubic(const std::array<Int, 3>& e, const KElem& u) {
    KElem u2 = k_mul(u, u);
    KElem v = k_mul(u2, u);
    v = k_sub(v, k_scale(Rat(e[0]), u2));
    v = k_add(v, k_scale(Rat(e[1]), u));
    v = k_sub(v, KElem(Rat(e[2]), Rat(0), Rat(0)));
    return v;
}

constexpr double kOmega1 = 1.2469796037174672;   // 2cos(2pi/7)
constexpr double kOmega2 = -0.4450418679126287;  // 2cos(4pi/7)
constexpr double kOmega3 = -1.8019377358048383;  // 2cos(6pi/7)

}  // namespace

TraceSet trace_set(const Int& x, const Int& y, std::uint64_t q, std::uint64_t cap) {
    if (q == 2 || q == 3 || q == 7) throw Error("trace_set: q must avoid {2,3,7}");
    std::uint64_t xm = mpz_fdiv_ui(x.get_mpz_t(), q), ym = mpz_fdiv_ui(y.get_mpz_t(), q);
    auto key = std::make_tuple(q, xm, ym);
    {
        std::shared_lock lk(cache().mtx);
        auto it = cache().tsets.find(key);
        if (it != cache().tsets.end()) return it->second;
    }
    TraceSet T;
    T.q = q;
    T.split = residue_degree_in_K(q) == 1;
    const double weil = 2 * std::sqrt(double(q));

    if (!T.split) {
        std::uint64_t n3 = count_points_C7(x, y, q, 3, cap);
        Int num = Int(static_cast<unsigned long>(q));
        num = num * num * num + 1 - n3;
        if (!mpz_divisible_ui_p(num.get_mpz_t(), 3))
            throw Error("trace_set: inert trace (q^3 + 1 - N)/3 not integral");
        Int a = num / 3;
        double bound = 2 * std::pow(double(q), 1.5) + 1e-9;
        if (std::abs(a.get_d()) > bound) throw Error("trace_set: Weil bound violated (inert)");
        T.elems = {KElem(Rat(a), Rat(0), Rat(0))};
    } else {
        std::array<std::uint64_t, 3> N{count_points_C7(x, y, q, 1, cap),
                                       count_points_C7(x, y, q, 2, cap),
                                       count_points_C7(x, y, q, 3, cap)};
        LPoly L = lpoly_from_counts(N, q);
        auto e = real_weil_cubic(L);

        // triple rational root?
        if (mpz_divisible_ui_p(e[0].get_mpz_t(), 3)) {
            Int r = e[0] / 3;
            if (e[1] == 3 * r * r && e[2] == r * r * r) {
                if (std::abs(r.get_d()) > weil + 1e-9)
                    throw Error("trace_set: Weil bound violated");
                T.elems = {KElem(Rat(r), Rat(0), Rat(0))};
            }
        }
        if (T.elems.empty()) {
            // roots of h numerically, then all 6 assignments to (w1,w2,w3)
            NumberFieldSpec hspec({-e[2], e[1], -e[0], Int(1)});
            auto hr = field_embeddings(hspec);
            if (hr.size() != 3) throw Error("trace_set: bad cubic");
            double rr[3];
            for (int i = 0; i < 3; ++i) {
                if (std::abs(hr[i].second) > 1e-6)
                    throw Error("trace_set: real Weil cubic has complex roots");
                rr[i] = hr[i].first;
            }
            const double w[3] = {kOmega1, kOmega2, kOmega3};
            int perm[3] = {0, 1, 2};
            std::vector<KElem> found;
            std::sort(perm, perm + 3);
            do {
                // solve Vandermonde: t0 + t1 w_j + t2 w_j^2 = rr[perm[j]]
                double V[3][4];
                for (int j = 0; j < 3; ++j) {
                    V[j][0] = 1;
                    V[j][1] = w[j];
                    V[j][2] = w[j] * w[j];
                    V[j][3] = rr[perm[j]];
                }
                for (int col = 0; col < 3; ++col) {
                    int piv = col;
                    for (int r2 = col + 1; r2 < 3; ++r2)
                        if (std::abs(V[r2][col]) > std::abs(V[piv][col])) piv = r2;
                    std::swap(V[col], V[piv]);
                    for (int r2 = 0; r2 < 3; ++r2) {
                        if (r2 == col) continue;
                        double f = V[r2][col] / V[col][col];
                        for (int c2 = col; c2 < 4; ++c2) V[r2][c2] -= f * V[col][c2];
                    }
                }
                long t[3];
                bool ok = true;
                for (int i2 = 0; i2 < 3; ++i2) {
                    double val = V[i2][3] / V[i2][i2];
                    t[i2] = std::lround(val);
                    if (std::abs(val - t[i2]) > 1e-4) ok = false;
                }
                if (ok) {
                    KElem u = k_from_ints(t[0], t[1], t[2]);
                    if (eval_weil_cubic(e, u).is_zero()) {
                        if (std::find(found.begin(), found.end(), u) == found.end())
                            found.push_back(u);
                    }
                }
            } while (std::next_permutation(perm, perm + 3));
            if (found.empty())
                throw Error("trace_set: not GL2(K)-type-compatible (no roots of h in K)");
            // close under sigma and verify we get the full root set
            KElem u = found[0];
            std::vector<KElem> orbit{u, k_sigma(u, 1), k_sigma(u, 2)};
            for (const auto& v : orbit) {
                if (!eval_weil_cubic(e, v).is_zero())
                    throw Error("trace_set: orbit element is not a root (labeling bug)");
                if (!v.is_integral()) throw Error("trace_set: non-integral trace");
            }
            std::sort(orbit.begin(), orbit.end(), k_less);
            orbit.erase(std::unique(orbit.begin(), orbit.end()), orbit.end());
            if (orbit.size() != 3) throw Error("trace_set: set has size 2 (impossible orbit)");
            T.elems = orbit;
        }
        // Weil bound under all embeddings
        for (const auto& u : T.elems) {
            double c0 = u.c[0].get_d(), c1 = u.c[1].get_d(), c2 = u.c[2].get_d();
            for (double wv : {kOmega1, kOmega2, kOmega3}) {
                if (std::abs(c0 + c1 * wv + c2 * wv * wv) > weil + 1e-6)
                    throw Error("trace_set: Weil bound violated (split)");
            }
        }
    }
    {
        std::unique_lock lk(cache().mtx);
        cache().tsets[key] = T;
    }
    return T;
}

int chi7_sign(const PrimeIdealK& P) {
    if (P.q == 7) throw Error("chi7_sign: q = 7 is ramified");
    std::uint64_t v = powmod_u64(P.q % 7, P.f, 7);
    if (v == 1) return 1;
    if (v == 6) return -1;
    throw Error("chi7_sign: impossible residue");
}

int symmetry_sign(const PrimeIdealK& P) {
    if (P.q == 2) throw Error("symmetry_sign: q must be odd");
    std::uint64_t v = powmod_u64(P.q % 4, P.f, 4);
    return v == 1 ? 1 : -1;
}

void dump_trace_table(std::ostream& os, std::uint64_t q, std::uint64_t cap) {
    os << "q,x,y,traces\n";
    for (std::uint64_t xv = 0; xv < q; ++xv) {
        for (std::uint64_t yv = 0; yv < q; ++yv) {
            if (xv == 0 && yv == 0) continue;
            Int x(static_cast<unsigned long>(xv)), y(static_cast<unsigned long>(yv));
            Int a7b7;
            {
                Int x7 = x, y7 = y;
                for (int i = 0; i < 6; ++i) {
                    x7 *= x;
                    y7 *= y;
                }
                a7b7 = x7 + y7;
            }
            if (mpz_divisible_ui_p(a7b7.get_mpz_t(), q)) continue;
            TraceSet T = trace_set(x, y, q, cap);
            os << q << "," << xv << "," << yv << ",\"";
            for (std::size_t i = 0; i < T.elems.size(); ++i) {
                if (i) os << ";";
                const auto& u = T.elems[i];
                os << u.c[0] << "+" << u.c[1] << "w+" << u.c[2] << "w2";
            }
            os << "\"\n";
        }
    }
}

}  // namespace frey7
