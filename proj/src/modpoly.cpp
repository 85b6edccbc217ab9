#include "frey7/modpoly.hpp"

#include <algorithm>
#include <utility>

namespace frey7::fp {

PolyFp normalize(PolyFp a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
    return a;
}

PolyFp add(const PolyFp& a, const PolyFp& b, std::uint64_t p) {
    PolyFp c(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < c.size(); ++i) {
        std::uint64_t v = (i < a.size() ? a[i] : 0) + (i < b.size() ? b[i] : 0);
        c[i] = v >= p ? v - p : v;
    }
    return normalize(std::move(c));
}

PolyFp sub(const PolyFp& a, const PolyFp& b, std::uint64_t p) {
    PolyFp c(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < c.size(); ++i) {
        std::uint64_t x = i < a.size() ? a[i] : 0;
        std::uint64_t y = i < b.size() ? b[i] : 0;
        c[i] = x >= y ? x - y : x + p - y;
    }
    return normalize(std::move(c));
}

PolyFp mul(const PolyFp& a, const PolyFp& b, std::uint64_t p) {
    if (a.empty() || b.empty()) return {};
    std::vector<unsigned __int128> acc(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (std::size_t j = 0; j < b.size(); ++j) {
            acc[i + j] += static_cast<unsigned __int128>(a[i]) * b[j] % p;
            if (acc[i + j] >> 126) acc[i + j] %= p;
        }
    }
    PolyFp c(acc.size());
    for (std::size_t i = 0; i < acc.size(); ++i) c[i] = static_cast<std::uint64_t>(acc[i] % p);
    return normalize(std::move(c));
}

PolyFp scale(const PolyFp& a, std::uint64_t c, std::uint64_t p) {
    PolyFp out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = mulmod_u64(a[i], c % p, p);
    return normalize(std::move(out));
}

std::pair<PolyFp, PolyFp> divmod(const PolyFp& a, const PolyFp& b, std::uint64_t p) {
    if (b.empty()) throw Error("poly division by zero");
    if (a.size() < b.size()) return {{}, a};
    PolyFp r = a;
    PolyFp q(a.size() - b.size() + 1, 0);
    const std::uint64_t lead_inv = invmod_u64(b.back(), p);
    for (int i = static_cast<int>(r.size()) - 1; i >= static_cast<int>(b.size()) - 1; --i) {
        std::uint64_t coef = mulmod_u64(r[i], lead_inv, p);
        if (!coef) continue;
        q[i - (b.size() - 1)] = coef;
        for (std::size_t j = 0; j < b.size(); ++j) {
            std::uint64_t subv = mulmod_u64(coef, b[j], p);
            std::uint64_t& ri = r[i - (b.size() - 1) + j];
            ri = ri >= subv ? ri - subv : ri + p - subv;
        }
    }
    return {normalize(std::move(q)), normalize(std::move(r))};
}

PolyFp mod(const PolyFp& a, const PolyFp& b, std::uint64_t p) { return divmod(a, b, p).second; }

PolyFp monic(PolyFp a, std::uint64_t p) {
    if (a.empty()) return a;
    return scale(a, invmod_u64(a.back(), p), p);
}

PolyFp gcd(PolyFp a, PolyFp b, std::uint64_t p) {
    while (!b.empty()) {
        a = mod(a, b, p);
        std::swap(a, b);
    }
    return monic(std::move(a), p);
}

std::tuple<PolyFp, PolyFp, PolyFp> xgcd(PolyFp a, PolyFp b, std::uint64_t p) {
    PolyFp s0{1}, s1{}, t0{}, t1{1};
    while (!b.empty()) {
        auto [q, r] = divmod(a, b, p);
        a = std::exchange(b, r);
        PolyFp ns = sub(s0, mul(q, s1, p), p);
        s0 = std::exchange(s1, ns);
        PolyFp nt = sub(t0, mul(q, t1, p), p);
        t0 = std::exchange(t1, nt);
    }
    if (a.empty()) return {a, s0, t0};
    std::uint64_t inv = invmod_u64(a.back(), p);
    return {scale(a, inv, p), scale(s0, inv, p), scale(t0, inv, p)};
}

PolyFp powmod(PolyFp base, Int e, const PolyFp& m, std::uint64_t p) {
    PolyFp r{1};
    base = mod(base, m, p);
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) r = mod(mul(r, base, p), m, p);
        base = mod(mul(base, base, p), m, p);
        e >>= 1;
    }
    return r;
}

PolyFp derivative(const PolyFp& a, std::uint64_t p) {
    if (a.size() < 2) return {};
    PolyFp d(a.size() - 1);
    for (std::size_t i = 1; i < a.size(); ++i) d[i - 1] = mulmod_u64(a[i], i % p, p);
    return normalize(std::move(d));
}

std::uint64_t eval(const PolyFp& a, std::uint64_t x, std::uint64_t p) {
    std::uint64_t v = 0;
    for (auto it = a.rbegin(); it != a.rend(); ++it) v = (mulmod_u64(v, x, p) + *it) % p;
    return v;
}

std::uint64_t resultant(PolyFp a, PolyFp b, std::uint64_t p) {
    // Res(a,b) via PRS; standard sign/leading-coefficient bookkeeping.
    if (a.empty() || b.empty()) return 0;
    std::uint64_t res = 1;
    bool neg = false;
    while (true) {
        if (b.empty()) return 0;
        if (deg(b) == 0) {
            res = mulmod_u64(res, powmod_u64(b[0], deg(a), p), p);
            break;
        }
        PolyFp r = mod(a, b, p);
        // Res(a,b) = (-1)^(da*db) * lc(b)^(da - dr) * Res(b,r)
        int da = deg(a), db = deg(b), dr = r.empty() ? -1 : deg(r);
        if ((da & 1) && (db & 1)) neg = !neg;
        if (r.empty()) return 0;
        res = mulmod_u64(res, powmod_u64(b.back(), da - dr, p), p);
        a = std::move(b);
        b = std::move(r);
    }
    if (neg && res) res = p - res;
    return res;
}

bool is_squarefree(const PolyFp& a, std::uint64_t p) {
    if (a.empty()) return false;
    return deg(gcd(a, derivative(a, p), p)) == 0;
}

std::vector<std::pair<PolyFp, int>> ddf(const PolyFp& a, std::uint64_t p) {
    std::vector<std::pair<PolyFp, int>> out;
    PolyFp f = monic(a, p);
    PolyFp x{0, 1};
    PolyFp h = x;  // x^(p^d) mod f, built incrementally
    int d = 0;
    while (deg(f) > 0) {
        ++d;
        if (2 * d > deg(f)) {
            out.emplace_back(f, deg(f));
            break;
        }
        h = powmod(h, Int(static_cast<unsigned long>(p)), f, p);
        PolyFp g = gcd(sub(h, x, p), f, p);
        if (deg(g) > 0) {
            out.emplace_back(g, d);
            f = divmod(f, g, p).first;
            h = mod(h, f, p);
        }
    }
    return out;
}

namespace {

// Cantor-Zassenhaus equal-degree splitting for odd p.
void edf(const PolyFp& f, int d, std::uint64_t p, Rng& rng, std::vector<PolyFp>& out) {
    if (deg(f) == d) {
        out.push_back(f);
        return;
    }
    Int pd = 1;
    for (int i = 0; i < d; ++i) pd *= static_cast<unsigned long>(p);
    Int e = (pd - 1) / 2;
    while (true) {
        PolyFp r(deg(f) + 1);
        for (auto& c : r) c = rng.below(p);
        r = normalize(std::move(r));
        if (deg(r) < 1) continue;
        PolyFp g = gcd(r, f, p);
        if (deg(g) > 0 && deg(g) < deg(f)) {
            edf(g, d, p, rng, out);
            edf(divmod(f, g, p).first, d, p, rng, out);
            return;
        }
        PolyFp t = powmod(r, e, f, p);
        t = sub(t, PolyFp{1}, p);
        g = gcd(t, f, p);
        if (deg(g) > 0 && deg(g) < deg(f)) {
            edf(g, d, p, rng, out);
            edf(divmod(f, g, p).first, d, p, rng, out);
            return;
        }
    }
}

}  // namespace

std::vector<PolyFp> factor_squarefree(const PolyFp& a, std::uint64_t p, Rng& rng) {
    std::vector<PolyFp> out;
    for (auto& [prod, d] : ddf(a, p)) {
        if (deg(prod) == d) {
            out.push_back(prod);
        } else {
            edf(prod, d, p, rng, out);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::uint64_t> roots(const PolyFp& a, std::uint64_t p) {
    std::vector<std::uint64_t> out;
    if (a.empty()) throw Error("roots of zero polynomial");
    if (p < 512) {
        for (std::uint64_t x = 0; x < p; ++x)
            if (eval(a, x, p) == 0) out.push_back(x);
        return out;
    }
    // gcd with x^p - x isolates the linear part, then split
    PolyFp f = monic(a, p);
    PolyFp xp = powmod(PolyFp{0, 1}, Int(static_cast<unsigned long>(p)), f, p);
    PolyFp lin = gcd(sub(xp, PolyFp{0, 1}, p), f, p);
    if (deg(lin) <= 0) return out;
    Rng rng(0xf007'ba11ULL);
    std::vector<PolyFp> facs;
    edf(lin, 1, p, rng, facs);
    for (auto& g : facs) out.push_back(g[0] ? p - g[0] : 0);
    std::sort(out.begin(), out.end());
    return out;
}

PolyFp reduce_int_poly(const std::vector<Int>& c, std::uint64_t p) {
    PolyFp out(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) out[i] = mpz_fdiv_ui(c[i].get_mpz_t(), p);
    return normalize(std::move(out));
}

PolyFp reduce_rat_poly(const std::vector<Rat>& c, std::uint64_t p) {
    PolyFp out(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        std::uint64_t num = mpz_fdiv_ui(c[i].get_num().get_mpz_t(), p);
        std::uint64_t den = mpz_fdiv_ui(c[i].get_den().get_mpz_t(), p);
        if (den == 0) throw Error("denominator divisible by p");
        out[i] = mulmod_u64(num, invmod_u64(den, p), p);
    }
    return normalize(std::move(out));
}

}  // namespace frey7::fp
