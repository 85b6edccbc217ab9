#include "frey7/intutil.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <utility>

namespace frey7 {

bool is_prime(const Int& n) {
    if (n < 2) return false;
    return mpz_probab_prime_p(n.get_mpz_t(), 30) != 0;
}

bool is_prime_u64(std::uint64_t n) { return is_prime(Int(static_cast<unsigned long>(n))); }

std::uint64_t next_prime_u64(std::uint64_t n) {
    Int z(static_cast<unsigned long>(n));
    mpz_nextprime(z.get_mpz_t(), z.get_mpz_t());
    if (!z.fits_ulong_p()) throw Error("next_prime_u64 overflow");
    return z.get_ui();
}

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    return r;
}

std::uint64_t invmod_u64(std::uint64_t a, std::uint64_t m) {
    std::int64_t t = 0, newt = 1;
    std::int64_t r = static_cast<std::int64_t>(m), newr = static_cast<std::int64_t>(a % m);
    while (newr != 0) {
        std::int64_t q = r / newr;
        t = std::exchange(newt, t - q * newt);
        r = std::exchange(newr, r - q * newr);
    }
    if (r != 1) throw Error("invmod: not invertible");
    return static_cast<std::uint64_t>(t < 0 ? t + static_cast<std::int64_t>(m) : t);
}

std::pair<std::map<std::uint64_t, unsigned>, Int> trial_factor(Int n, std::uint64_t bound) {
    std::map<std::uint64_t, unsigned> fac;
    if (n < 0) n = -n;
    if (n == 0) throw Error("trial_factor(0)");
    for (std::uint64_t p = 2; p <= bound && Int(p) * p <= n; p = (p == 2 ? 3 : p + 2)) {
        while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            ++fac[p];
            mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
        }
    }
    if (n <= bound && n > 1) {  // leftover small prime
        ++fac[n.get_ui()];
        n = 1;
    }
    return {fac, n};
}

namespace {

Int pollard_rho(const Int& n, Rng& rng) {
    if (mpz_even_p(n.get_mpz_t())) return 2;
    while (true) {
        Int x = Int(static_cast<unsigned long>(rng.next())) % n;
        Int c = Int(static_cast<unsigned long>(rng.next())) % n + 1;
        Int y = x, d = 1, diff, prod = 1;
        int count = 0;
        while (d == 1) {
            x = (x * x + c) % n;
            y = (y * y + c) % n;
            y = (y * y + c) % n;
            diff = x - y;
            if (diff == 0) break;
            prod = prod * diff % n;
            if (++count % 64 == 0) {
                mpz_gcd(d.get_mpz_t(), prod.get_mpz_t(), n.get_mpz_t());
                if (d > 1 && d < n) return d;
            }
        }
        mpz_gcd(d.get_mpz_t(), prod.get_mpz_t(), n.get_mpz_t());
        if (d > 1 && d < n) return d;
    }
}

void factor_rec(Int n, std::map<Int, unsigned>& out, Rng& rng, int depth) {
    if (n == 1) return;
    if (is_prime(n)) {
        ++out[n];
        return;
    }
    if (depth > 64) throw Error("factorize: recursion limit");
    Int d = pollard_rho(n, rng);
    factor_rec(d, out, rng, depth + 1);
    factor_rec(n / d, out, rng, depth + 1);
}

}  // namespace

std::map<Int, unsigned> factorize(Int n, std::uint64_t trial_bound) {
    if (n < 0) n = -n;
    if (n == 0) throw Error("factorize(0)");
    auto [small, rest] = trial_factor(n, trial_bound);
    std::map<Int, unsigned> out;
    for (auto& [p, e] : small) out[Int(static_cast<unsigned long>(p))] = e;
    if (rest > 1) {
        Rng rng(0x5eed'f00dULL);
        factor_rec(rest, out, rng, 0);
    }
    return out;
}

Int crt_balanced(const std::vector<std::uint64_t>& residues,
                 const std::vector<std::uint64_t>& moduli) {
    if (residues.size() != moduli.size() || residues.empty()) throw Error("crt: bad input");
    Int acc(static_cast<unsigned long>(residues[0]));
    Int mod(static_cast<unsigned long>(moduli[0]));
    for (std::size_t i = 1; i < residues.size(); ++i) {
        const std::uint64_t mi = moduli[i];
        // acc + mod * t ≡ r_i (mod m_i)
        std::uint64_t a = mpz_fdiv_ui(acc.get_mpz_t(), mi);
        std::uint64_t m = mpz_fdiv_ui(mod.get_mpz_t(), mi);
        std::uint64_t t = mulmod_u64((residues[i] + mi - a) % mi, invmod_u64(m, mi), mi);
        acc += mod * Int(static_cast<unsigned long>(t));
        mod *= Int(static_cast<unsigned long>(mi));
    }
    Int half = mod / 2;
    acc %= mod;
    if (acc < 0) acc += mod;
    if (acc > half) acc -= mod;
    return acc;
}

std::optional<Rat> rational_reconstruct(const Int& x, const Int& m, const Int& bound) {
    Int r0 = m, r1 = ((x % m) + m) % m;
    Int t0 = 0, t1 = 1;
    while (r1 > bound) {
        Int q = r0 / r1;
        r0 = std::exchange(r1, r0 - q * r1);
        t0 = std::exchange(t1, t0 - q * t1);
    }
    if (t1 == 0) return std::nullopt;
    if (t1 < 0) {
        t1 = -t1;
        r1 = -r1;
    }
    if (t1 > bound) return std::nullopt;
    Int g;
    mpz_gcd(g.get_mpz_t(), t1.get_mpz_t(), m.get_mpz_t());
    if (g != 1) return std::nullopt;
    Rat out(r1);
    out /= Rat(t1);
    out.canonicalize();
    return out;
}

std::string sha256_hex(const std::string& data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr))
        throw Error("sha256 failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 15]);
    }
    return out;
}

std::string sha256_file_hex(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return sha256_hex(data);
}

}  // namespace frey7
