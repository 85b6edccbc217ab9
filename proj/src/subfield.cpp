// Detection of K = Q(w) inside a Hecke field: Hensel lifting at a prime that
// splits in K, degree-weighted coloring of the factor set, rational
// reconstruction, exact verification. "no" answers are certified by degree
// obstructions at primes inert in K (every residue degree of K_g would have
// to be divisible by 3) or by coloring infeasibility at split primes.

#include <algorithm>
#include <map>

#include "frey7/numfield.hpp"

namespace frey7 {

namespace {

using ZPoly = std::vector<Int>;  // constant-first, coefficients in [0, M)

ZPoly z_trim(ZPoly a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
    return a;
}

ZPoly z_from_fp(const PolyFp& a) {
    ZPoly out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = Int(static_cast<unsigned long>(a[i]));
    return out;
}

ZPoly z_mod_coeffs(ZPoly a, const Int& M) {
    for (auto& c : a) {
        c %= M;
        if (c < 0) c += M;
    }
    return z_trim(std::move(a));
}

ZPoly z_add(const ZPoly& a, const ZPoly& b, const Int& M) {
    ZPoly c(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < c.size(); ++i) {
        Int v = (i < a.size() ? a[i] : Int(0)) + (i < b.size() ? b[i] : Int(0));
        if (v >= M) v -= M;
        c[i] = v;
    }
    return z_trim(std::move(c));
}

ZPoly z_sub(const ZPoly& a, const ZPoly& b, const Int& M) {
    ZPoly c(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < c.size(); ++i) {
        Int v = (i < a.size() ? a[i] : Int(0)) - (i < b.size() ? b[i] : Int(0));
        if (v < 0) v += M;
        c[i] = v;
    }
    return z_trim(std::move(c));
}

ZPoly z_mul(const ZPoly& a, const ZPoly& b, const Int& M) {
    if (a.empty() || b.empty()) return {};
    ZPoly c(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    }
    return z_mod_coeffs(std::move(c), M);
}

ZPoly z_scale(const Int& s, const ZPoly& a, const Int& M) {
    ZPoly c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        c[i] = s * a[i] % M;
        if (c[i] < 0) c[i] += M;
    }
    return z_trim(std::move(c));
}

// division by a monic divisor over Z/M
std::pair<ZPoly, ZPoly> z_divmod_monic(const ZPoly& a, const ZPoly& b, const Int& M) {
    if (b.empty() || b.back() != 1) throw Error("z_divmod: divisor must be monic");
    if (a.size() < b.size()) return {{}, a};
    ZPoly r = a, q(a.size() - b.size() + 1, 0);
    for (int i = static_cast<int>(r.size()) - 1; i >= static_cast<int>(b.size()) - 1; --i) {
        Int coef = r[i];
        if (coef == 0) continue;
        q[i - (b.size() - 1)] = coef;
        for (std::size_t j = 0; j < b.size(); ++j) {
            Int& ri = r[i - (b.size() - 1) + j];
            ri = (ri - coef * b[j]) % M;
            if (ri < 0) ri += M;
        }
    }
    return {z_trim(std::move(q)), z_trim(std::move(r))};
}

Int z_eval(const ZPoly& a, const Int& x, const Int& M) {
    Int v = 0;
    for (auto it = a.rbegin(); it != a.rend(); ++it) v = (v * x + *it) % M;
    return v;
}

Int int_inv_mod(const Int& a, const Int& M) {
    Int g, s, t;
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), M.get_mpz_t());
    if (g != 1) throw Error("not invertible");
    s %= M;
    if (s < 0) s += M;
    return s;
}

// inverse of w modulo (phi, M) by Newton from the inverse mod p
ZPoly z_inv_mod(const ZPoly& w, const ZPoly& phi, std::uint64_t p, const Int& M) {
    PolyFp wp = fp::reduce_int_poly(w, p);
    PolyFp php = fp::reduce_int_poly(phi, p);
    auto [g, s, t] = fp::xgcd(wp, php, p);
    if (fp::deg(g) != 0) throw Error("z_inv_mod: not invertible mod p");
    ZPoly inv = z_from_fp(s);
    Int m(static_cast<unsigned long>(p));
    while (m < M) {
        m = m * m;
        if (m > M) m = M;  // cap; all identities hold modulo any divisor-free cap
        ZPoly prod = z_divmod_monic(z_mul(w, inv, m), phi, m).second;
        ZPoly two{Int(2) % m};
        ZPoly corr = z_sub(two, prod, m);
        inv = z_divmod_monic(z_mul(inv, corr, m), phi, m).second;
    }
    return inv;
}

// quadratic Hensel lift of a coprime pair: f = g*h (mod p), lifted mod >= M.
struct PairLift {
    ZPoly g, h;
};

PairLift hensel_pair(const ZPoly& f, const PolyFp& g0, const PolyFp& h0, std::uint64_t p,
                     const Int& M) {
    auto [d, s0, t0] = fp::xgcd(g0, h0, p);
    if (fp::deg(d) != 0) throw Error("hensel: factors not coprime");
    ZPoly g = z_from_fp(g0), h = z_from_fp(h0);
    ZPoly s = z_from_fp(s0), t = z_from_fp(t0);
    Int m(static_cast<unsigned long>(p));
    while (m < M) {
        m = m * m;
        if (m > M) m = M;
        ZPoly fm = z_mod_coeffs(f, m);
        ZPoly e = z_sub(fm, z_mul(g, h, m), m);
        auto [q, r] = z_divmod_monic(z_mul(s, e, m), h, m);
        ZPoly gstar = z_add(g, z_add(z_mul(t, e, m), z_mul(q, g, m), m), m);
        ZPoly hstar = z_add(h, r, m);
        if (hstar.empty() || hstar.back() != 1) throw Error("hensel: h lost monicity");
        // bezout update
        ZPoly b = z_sub(z_add(z_mul(s, gstar, m), z_mul(t, hstar, m), m), ZPoly{Int(1)}, m);
        auto [c, dd] = z_divmod_monic(z_mul(s, b, m), hstar, m);
        ZPoly sstar = z_sub(s, dd, m);
        ZPoly tstar = z_sub(z_sub(t, z_mul(t, b, m), m), z_mul(c, gstar, m), m);
        g = std::move(gstar);
        h = std::move(hstar);
        s = std::move(sstar);
        t = std::move(tstar);
        if (!z_sub(z_mod_coeffs(f, m), z_mul(g, h, m), m).empty())
            throw Error("hensel: lift verification failed");
    }
    return {z_mod_coeffs(g, M), z_mod_coeffs(h, M)};
}

void lift_factor_tree(const ZPoly& f, const std::vector<PolyFp>& factors, std::size_t lo,
                      std::size_t hi, std::uint64_t p, const Int& M, std::vector<ZPoly>& out) {
    if (hi - lo == 1) {
        out[lo] = z_mod_coeffs(f, M);
        return;
    }
    std::size_t mid = lo + (hi - lo) / 2;
    PolyFp gp{1}, hp{1};
    for (std::size_t i = lo; i < mid; ++i) gp = fp::mul(gp, factors[i], p);
    for (std::size_t i = mid; i < hi; ++i) hp = fp::mul(hp, factors[i], p);
    PairLift pl = hensel_pair(f, gp, hp, p, M);
    lift_factor_tree(pl.g, factors, lo, mid, p, M, out);
    lift_factor_tree(pl.h, factors, mid, hi, p, M, out);
}

Int lift_root_newton(const ZPoly& poly, std::uint64_t r0, std::uint64_t p, const Int& M) {
    ZPoly deriv;
    for (std::size_t i = 1; i < poly.size(); ++i) deriv.push_back(Int(static_cast<long>(i)) * poly[i]);
    Int r(static_cast<unsigned long>(r0));
    Int m(static_cast<unsigned long>(p));
    while (m < M) {
        m = m * m;
        if (m > M) m = M;
        Int fv = z_eval(z_mod_coeffs(poly, m), r, m);
        Int dv = z_eval(z_mod_coeffs(deriv, m), r, m);
        r = (r - fv * int_inv_mod(dv, m)) % m;
        if (r < 0) r += m;
    }
    return r;
}

struct ColoringSearch {
    const std::vector<int>& degs;
    int target;
    std::vector<int> colors;
    std::vector<std::vector<int>> found;
    std::size_t cap;

    ColoringSearch(const std::vector<int>& d, int t, std::size_t cap_)
        : degs(d), target(t), colors(d.size(), -1), cap(cap_) {}

    void run(std::size_t j, std::array<int, 3> sums) {
        if (found.size() >= cap) return;
        if (j == degs.size()) {
            if (sums[0] == target && sums[1] == target && sums[2] == target)
                found.push_back(colors);
            return;
        }
        int maxc = (j == 0) ? 1 : 3;  // fix first factor's color to 0
        for (int c = 0; c < maxc; ++c) {
            if (sums[c] + degs[j] > target) continue;
            sums[c] += degs[j];
            colors[j] = c;
            run(j + 1, sums);
            sums[c] -= degs[j];
        }
    }
};

const std::vector<Int> kCubic{Int(-1), Int(-2), Int(1), Int(1)};

}  // namespace

KEmbeddingResult find_K_embeddings(const NumberFieldSpec& spec) {
    const int n = spec.degree();
    if (n % 3 != 0) return {ContainsK::no, {}};

    // Stage A: degree obstructions at primes inert in K.
    int checked = 0;
    for (std::uint64_t p = 11; checked < 20 && p < 20000; p = next_prime_u64(p)) {
        if (residue_degree_in_K(p) != 3) continue;
        PolyFp f = fp::reduce_int_poly(spec.coeffs, p);
        if (fp::deg(f) != n || !fp::is_squarefree(f, p)) continue;
        ++checked;
        for (auto& [prod, d] : fp::ddf(f, p))
            if (d % 3 != 0) {
                (void)prod;
                return {ContainsK::no, {}};
            }
    }

    // Stage B: construct a root by Hensel lifting at a prime split in K.
    struct Cand {
        std::uint64_t p;
        std::vector<PolyFp> factors;
    };
    std::vector<Cand> cands;
    bool any_feasible = false;
    int scanned = 0;
    for (std::uint64_t p = 29; scanned < 8 && p < 100000; p = next_prime_u64(p)) {
        if (residue_degree_in_K(p) != 1 || p == 7) continue;
        PolyFp f = fp::reduce_int_poly(spec.coeffs, p);
        if (fp::deg(f) != n || !fp::is_squarefree(f, p)) continue;
        ++scanned;
        Rng rng(0xabcdULL * p);
        auto factors = fp::factor_squarefree(f, p, rng);
        // feasibility: degrees must admit a 3-partition with equal sums
        std::vector<int> degs;
        for (auto& fac : factors) degs.push_back(fp::deg(fac));
        ColoringSearch feas(degs, n / 3, 1);
        feas.run(0, {0, 0, 0});
        if (!feas.found.empty()) any_feasible = true;
        cands.push_back({p, std::move(factors)});
    }
    if (scanned > 0 && !any_feasible) return {ContainsK::no, {}};

    std::sort(cands.begin(), cands.end(),
              [](const Cand& a, const Cand& b) { return a.factors.size() < b.factors.size(); });
    if (cands.size() > 3) cands.resize(3);

    auto field = std::make_shared<NumberFieldSpec>(spec);
    const Int den_bound = Int("1000000000000");  // spec: denominator bound 10^12

    for (const auto& cand : cands) {
        const std::uint64_t p = cand.p;
        std::vector<int> degs;
        for (auto& fac : cand.factors) degs.push_back(fp::deg(fac));
        ColoringSearch cs(degs, n / 3, 200000);
        cs.run(0, {0, 0, 0});
        if (cs.found.empty()) continue;

        PolyFp cubicp = fp::reduce_int_poly(kCubic, p);
        auto cubic_roots = fp::roots(cubicp, p);
        if (cubic_roots.size() != 3) continue;

        int k0 = static_cast<int>(std::ceil(30.0 * std::log(10.0) / std::log(double(p)))) + 1;
        for (int stage = 0; stage < 3; ++stage) {
            int K = k0 << stage;
            Int M = 1;
            for (int i = 0; i < K; ++i) M *= static_cast<unsigned long>(p);

            ZPoly fz;
            for (const auto& c : spec.coeffs) fz.push_back(c);
            fz = z_mod_coeffs(fz, M);
            std::vector<ZPoly> lifted(cand.factors.size());
            lift_factor_tree(fz, cand.factors, 0, cand.factors.size(), p, M, lifted);

            // idempotent-style CRT basis: E_j == 1 mod phi_j, == 0 mod phi_k
            std::vector<ZPoly> E(lifted.size());
            for (std::size_t j = 0; j < lifted.size(); ++j) {
                auto [quot, rem] = z_divmod_monic(fz, lifted[j], M);
                if (!rem.empty()) throw Error("factor does not divide f in lift");
                ZPoly w = z_divmod_monic(quot, lifted[j], M).second;
                ZPoly winv = z_inv_mod(w, lifted[j], p, M);
                E[j] = z_divmod_monic(z_mul(quot, winv, M), fz, M).second;
            }
            std::array<Int, 3> rl;
            for (int i = 0; i < 3; ++i) rl[i] = lift_root_newton(
                [&] { ZPoly c; for (const auto& v : kCubic) c.push_back(v); return z_mod_coeffs(c, M); }(),
                cubic_roots[i], p, M);

            Int recon_bound;
            mpz_sqrt(recon_bound.get_mpz_t(), Int(M / 2).get_mpz_t());

            for (const auto& colors : cs.found) {
                ZPoly t;
                for (std::size_t j = 0; j < E.size(); ++j)
                    t = z_add(t, z_scale(rl[colors[j]], E[j], M), M);
                std::vector<Rat> coords(n, Rat(0));
                bool ok = true;
                for (int i = 0; i < n && ok; ++i) {
                    Int ci = i < static_cast<int>(t.size()) ? t[i] : Int(0);
                    auto rec = rational_reconstruct(ci, M, recon_bound);
                    if (!rec || rec->get_den() > den_bound) {
                        ok = false;
                        break;
                    }
                    coords[i] = *rec;
                }
                if (!ok) continue;
                NFElem theta = nf_make(field, coords);
                // exact verification: theta^3 + theta^2 - 2 theta - 1 == 0
                NFElem th2 = nf_mul(theta, theta);
                NFElem val = nf_add(nf_mul(th2, theta), th2);
                val = nf_sub(val, nf_scale(Rat(2), theta));
                val = nf_sub(val, nf_from_rat(field, Rat(1)));
                if (!val.is_zero()) continue;

                // conjugates: theta^2 - 2 and 1 - theta - theta^2
                NFElem r2 = nf_sub(th2, nf_from_rat(field, Rat(2)));
                NFElem r3 = nf_sub(nf_from_rat(field, Rat(1)), nf_add(theta, th2));
                std::vector<NFElem> roots{theta, r2, r3};
                std::sort(roots.begin(), roots.end(), [](const NFElem& a, const NFElem& b) {
                    return a.coords < b.coords;
                });
                if (roots[0] == roots[1] || roots[1] == roots[2])
                    throw Error("conjugate roots collapsed");
                return {ContainsK::yes, std::move(roots)};
            }
        }
    }
    return {ContainsK::inconclusive, {}};
}

}  // namespace frey7
