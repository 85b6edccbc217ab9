#include "frey7/numfield.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace frey7 {

// ------------------------------------------------------------------ KElem

bool KElem::is_integral() const {
    return c[0].get_den() == 1 && c[1].get_den() == 1 && c[2].get_den() == 1;
}

KElem k_add(const KElem& x, const KElem& y) {
    return KElem(x.c[0] + y.c[0], x.c[1] + y.c[1], x.c[2] + y.c[2]);
}

KElem k_sub(const KElem& x, const KElem& y) {
    return KElem(x.c[0] - y.c[0], x.c[1] - y.c[1], x.c[2] - y.c[2]);
}

KElem k_neg(const KElem& x) { return KElem(-x.c[0], -x.c[1], -x.c[2]); }

KElem k_scale(const Rat& s, const KElem& x) {
    return KElem(s * x.c[0], s * x.c[1], s * x.c[2]);
}

KElem k_mul(const KElem& x, const KElem& y) {
    // w^3 = -w^2 + 2w + 1, w^4 = 3w^2 - w - 1
    Rat d0 = x.c[0] * y.c[0];
    Rat d1 = x.c[0] * y.c[1] + x.c[1] * y.c[0];
    Rat d2 = x.c[0] * y.c[2] + x.c[1] * y.c[1] + x.c[2] * y.c[0];
    Rat d3 = x.c[1] * y.c[2] + x.c[2] * y.c[1];
    Rat d4 = x.c[2] * y.c[2];
    return KElem(d0 + d3 - d4, d1 + 2 * d3 - d4, d2 - d3 + 3 * d4);
}

KElem k_pow(KElem x, unsigned long e) {
    KElem r = KElem::from_int(1);
    while (e) {
        if (e & 1) r = k_mul(r, x);
        x = k_mul(x, x);
        e >>= 1;
    }
    return r;
}

KElem k_sigma(const KElem& x, int power) {
    KElem r = x;
    int k = ((power % 3) + 3) % 3;
    for (int i = 0; i < k; ++i)
        r = KElem(r.c[0] - 2 * r.c[1] + 3 * r.c[2], -r.c[2], r.c[1] - r.c[2]);
    return r;
}

Rat k_norm(const KElem& x) {
    KElem prod = k_mul(x, k_mul(k_sigma(x, 1), k_sigma(x, 2)));
    if (prod.c[1] != 0 || prod.c[2] != 0) throw Error("norm: conjugate product not rational");
    return prod.c[0];
}

Rat k_trace(const KElem& x) {
    // Tr(1) = 3, Tr(w) = -1, Tr(w^2) = e1^2 - 2e2 = 1 + 4 = 5
    return 3 * x.c[0] - x.c[1] + 5 * x.c[2];
}

KElem k_inv(const KElem& x) {
    Rat n = k_norm(x);
    if (n == 0) throw Error("division by zero in K");
    return k_scale(1 / n, k_mul(k_sigma(x, 1), k_sigma(x, 2)));
}

int k_val_q7(const KElem& x) {
    if (x.is_zero()) throw Error("valuation of zero");
    if (!x.is_integral()) throw Error("q7 valuation needs an integral element");
    const KElem uinv = k_inv(KElem::q7_uniformizer());
    KElem y = x;
    int v = 0;
    while (true) {
        KElem z = k_mul(y, uinv);
        if (!z.is_integral()) return v;
        y = z;
        ++v;
        if (v > 10000) throw Error("runaway q7 valuation");
    }
}

int k_val_q2(const KElem& x) {
    if (x.is_zero()) throw Error("valuation of zero");
    if (!x.is_integral()) throw Error("q2 valuation needs an integral element");
    auto v2 = [](const Int& n) {
        return n == 0 ? INT_MAX : static_cast<int>(mpz_scan1(n.get_mpz_t(), 0));
    };
    return std::min({v2(x.c[0].get_num()), v2(x.c[1].get_num()), v2(x.c[2].get_num())});
}

std::set<std::uint64_t> unit_gcd_primes(unsigned long exponent) {
    if (exponent == 0) throw Error("exponent must be positive");
    KElem one = KElem::from_int(1);
    KElem a = k_sub(k_pow(KElem::unit_eps1(), exponent), one);
    KElem b = k_sub(k_pow(KElem::unit_eps2(), exponent), one);
    Int na = abs(to_int_exact(k_norm(a)));
    Int nb = abs(to_int_exact(k_norm(b)));
    Int g;
    mpz_gcd(g.get_mpz_t(), na.get_mpz_t(), nb.get_mpz_t());
    std::set<std::uint64_t> out;
    if (g <= 1) return out;
    for (auto& [p, e] : factorize(g)) {
        (void)e;
        if (p >= 5 && p != 7) {
            if (!p.fits_ulong_p()) throw Error("unexpectedly large unit-gcd prime");
            out.insert(p.get_ui());
        }
    }
    return out;
}

// ------------------------------------------------------------ PrimeIdealK

Int PrimeIdealK::norm() const {
    Int q_(static_cast<unsigned long>(q));
    if (ramified) return q_;
    Int n = 1;
    for (int i = 0; i < f; ++i) n *= q_;
    return n;
}

std::vector<PrimeIdealK> split_prime(std::uint64_t q) {
    if (!is_prime_u64(q)) throw Error("split_prime: not a prime");
    if (q == 7) return {PrimeIdealK{7, 1, true, 2, 0}};
    const PolyFp cubic = fp::reduce_int_poly({Int(-1), Int(-2), Int(1), Int(1)}, q);
    auto rs = fp::roots(cubic, q);
    if (rs.empty()) return {PrimeIdealK{q, 3, false, 0, 0}};
    if (rs.size() != 3) throw Error("cubic must have 0 or 3 roots away from 7");
    std::vector<PrimeIdealK> out;
    for (int i = 0; i < 3; ++i) out.push_back(PrimeIdealK{q, 1, false, rs[i], i});
    return out;
}

PrimeIdealK sigma_prime(const PrimeIdealK& P, int power) {
    int k = ((power % 3) + 3) % 3;
    if (k == 0 || P.f == 3 || P.ramified) return P;
    auto all = split_prime(P.q);
    PrimeIdealK cur = P;
    for (int step = 0; step < k; ++step) {
        bool found = false;
        for (const auto& cand : all) {
            if (mulmod_u64(cand.root, cand.root, P.q) == (cur.root + 2) % P.q) {
                cur = cand;  // sigma(P_r) = P_s with s^2 - 2 = r
                found = true;
                break;
            }
        }
        if (!found) throw Error("sigma_prime: orbit walk failed");
    }
    return cur;
}

int residue_degree_in_K(std::uint64_t q) {
    if (q == 7) return 1;
    std::uint64_t m = q % 7;
    return (m == 1 || m == 6) ? 1 : 3;
}

// -------------------------------------------------------- NumberFieldSpec

NumberFieldSpec::NumberFieldSpec(std::vector<Int> c) : coeffs(std::move(c)) {
    if (coeffs.size() < 2) throw Error("field spec needs degree >= 1");
    if (coeffs.back() != 1) throw Error("field spec polynomial must be monic");
}

bool NFElem::is_zero() const {
    return std::all_of(coords.begin(), coords.end(), [](const Rat& r) { return r == 0; });
}

NFElem nf_make(std::shared_ptr<const NumberFieldSpec> field, std::vector<Rat> coords) {
    if (static_cast<int>(coords.size()) != field->degree()) throw Error("coordinate length");
    return NFElem{std::move(field), std::move(coords)};
}

NFElem nf_from_rat(std::shared_ptr<const NumberFieldSpec> field, const Rat& v) {
    std::vector<Rat> c(field->degree(), Rat(0));
    c[0] = v;
    return NFElem{std::move(field), std::move(c)};
}

namespace {

void check_same_field(const NFElem& x, const NFElem& y) {
    if (x.field != y.field && !(*x.field == *y.field)) throw Error("field mismatch");
}

}  // namespace

NFElem nf_add(const NFElem& x, const NFElem& y) {
    check_same_field(x, y);
    NFElem out = x;
    for (std::size_t i = 0; i < out.coords.size(); ++i) out.coords[i] += y.coords[i];
    return out;
}

NFElem nf_sub(const NFElem& x, const NFElem& y) {
    check_same_field(x, y);
    NFElem out = x;
    for (std::size_t i = 0; i < out.coords.size(); ++i) out.coords[i] -= y.coords[i];
    return out;
}

NFElem nf_scale(const Rat& s, const NFElem& x) {
    NFElem out = x;
    for (auto& c : out.coords) c *= s;
    return out;
}

NFElem nf_mul(const NFElem& x, const NFElem& y) {
    check_same_field(x, y);
    const int n = x.field->degree();
    std::vector<Rat> prod(2 * n - 1, Rat(0));
    for (int i = 0; i < n; ++i) {
        if (x.coords[i] == 0) continue;
        for (int j = 0; j < n; ++j) {
            if (y.coords[j] == 0) continue;
            prod[i + j] += x.coords[i] * y.coords[j];
        }
    }
    // reduce modulo the monic defining polynomial
    const auto& f = x.field->coeffs;
    for (int i = 2 * n - 2; i >= n; --i) {
        if (prod[i] == 0) continue;
        Rat lead = prod[i];
        prod[i] = 0;
        for (int j = 0; j < n; ++j) prod[i - n + j] -= lead * Rat(f[j]);
    }
    prod.resize(n);
    return NFElem{x.field, std::move(prod)};
}

Rat nf_norm(const NFElem& x) {
    const int n = x.field->degree();
    // clear denominators: G = D * x with integer coefficients
    Int D = 1;
    for (const auto& c : x.coords) mpz_lcm(D.get_mpz_t(), D.get_mpz_t(), c.get_den().get_mpz_t());
    std::vector<Int> G(n);
    int degG = -1;
    for (int i = 0; i < n; ++i) {
        G[i] = x.coords[i].get_num() * (D / x.coords[i].get_den());
        if (G[i] != 0) degG = i;
    }
    Int Dn = 1;
    for (int i = 0; i < n; ++i) Dn *= D;
    if (degG < 0) return Rat(0);
    if (degG == 0) {
        Int v = 1;
        for (int i = 0; i < n; ++i) v *= G[0];
        Rat out(v);
        out /= Rat(Dn);
        out.canonicalize();
        return out;
    }
    G.resize(degG + 1);

    // Hadamard-style bound: |Res|^2 <= (sum f_i^2)^degG * (sum G_i^2)^n
    Int sf = 0, sg = 0;
    for (const auto& c : x.field->coeffs) sf += c * c;
    for (const auto& c : G) sg += c * c;
    Int bound2 = 1;
    for (int i = 0; i < degG; ++i) bound2 *= sf;
    for (int i = 0; i < n; ++i) bound2 *= sg;
    bound2 *= 4;  // need M^2 > 4 * |Res|^2

    static std::vector<std::uint64_t> prime_pool;
    std::vector<std::uint64_t> primes, residues;
    Int M2 = 1;
    std::size_t idx = 0;
    while (M2 <= bound2) {
        while (idx >= prime_pool.size()) {
            std::uint64_t last = prime_pool.empty() ? (1ULL << 62) : prime_pool.back();
            prime_pool.push_back(next_prime_u64(last));
        }
        std::uint64_t p = prime_pool[idx++];
        PolyFp gp = fp::reduce_int_poly(G, p);
        if (fp::deg(gp) != degG) continue;  // lc vanished; skip
        PolyFp fpoly = fp::reduce_int_poly(x.field->coeffs, p);
        residues.push_back(fp::resultant(fpoly, gp, p));
        primes.push_back(p);
        M2 *= Int(static_cast<unsigned long>(p));
        M2 *= Int(static_cast<unsigned long>(p));
    }
    Int res = crt_balanced(residues, primes);
    Rat out(res);
    out /= Rat(Dn);
    out.canonicalize();
    return out;
}

NFElem k_embed(const KElem& u, const NFElem& root) {
    NFElem th2 = nf_mul(root, root);
    NFElem out = nf_from_rat(root.field, u.c[0]);
    out = nf_add(out, nf_scale(u.c[1], root));
    out = nf_add(out, nf_scale(u.c[2], th2));
    return out;
}

std::vector<std::pair<double, double>> field_embeddings(const NumberFieldSpec& spec) {
    const int n = spec.degree();
    std::vector<std::complex<double>> z(n), cs(n + 1);
    for (int i = 0; i <= n; ++i) cs[i] = spec.coeffs[i].get_d();
    // Aberth-Ehrlich with perturbed-circle start
    double radius = 1.0;
    for (int i = 0; i < n; ++i)
        radius = std::max(radius, 1.0 + std::abs(cs[i]) / std::abs(cs[n]));
    for (int i = 0; i < n; ++i)
        z[i] = std::polar(radius * (0.5 + 0.5 * (i + 1.0) / n), 2 * M_PI * i / n + 0.4);
    auto eval = [&](std::complex<double> x, std::complex<double>& d) {
        std::complex<double> v = cs[n];
        d = 0;
        for (int i = n - 1; i >= 0; --i) {
            d = d * x + v;
            v = v * x + cs[i];
        }
        return v;
    };
    for (int iter = 0; iter < 400; ++iter) {
        double moved = 0;
        for (int i = 0; i < n; ++i) {
            std::complex<double> d, v = eval(z[i], d);
            std::complex<double> s = 0;
            for (int j = 0; j < n; ++j)
                if (j != i) s += 1.0 / (z[i] - z[j]);
            std::complex<double> corr = v / (d - v * s);
            z[i] -= corr;
            moved = std::max(moved, std::abs(corr));
        }
        if (moved < 1e-14) break;
    }
    std::vector<std::pair<double, double>> out;
    out.reserve(n);
    for (auto& r : z) out.emplace_back(r.real(), r.imag());
    std::sort(out.begin(), out.end());
    return out;
}

// -------------------------------------------------------------- ResidueMap

PolyFp ResidueMapNF::image(const NFElem& x) const {
    PolyFp red = fp::reduce_rat_poly(x.coords, p);
    return fp::mod(red, factor, p);
}

PolyFp ResidueMapNF::image_rat(const Rat& v) const {
    return fp::mod(fp::reduce_rat_poly({v}, p), factor, p);
}

std::vector<ResidueMapNF> residue_maps_mod_p(const NumberFieldSpec& spec, std::uint64_t p) {
    PolyFp f = fp::reduce_int_poly(spec.coeffs, p);
    if (fp::deg(f) != spec.degree())
        throw Error("residue_maps: leading coefficient vanished (non-monic reduction)");
    if (!fp::is_squarefree(f, p))
        throw IndexDivisorError("defining polynomial not squarefree mod p");
    Rng rng(0x9e37'79b9ULL ^ p);
    auto factors = fp::factor_squarefree(f, p, rng);
    std::sort(factors.begin(), factors.end(), [](const PolyFp& a, const PolyFp& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    std::vector<ResidueMapNF> out;
    for (auto& phi : factors) out.push_back(ResidueMapNF{p, phi});
    return out;
}

}  // namespace frey7
