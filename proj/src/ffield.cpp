#include "frey7/ffield.hpp"

#include <algorithm>

namespace frey7 {

namespace {

bool irreducible_small(const PolyFp& m, std::uint64_t q, int k) {
    if (k == 1) return true;
    if (k > 3) throw Error("towers limited to degree <= 3");
    for (std::uint64_t x = 0; x < q; ++x)
        if (fp::eval(m, x, q) == 0) return false;
    return true;  // degree 2 or 3 with no roots
}

}  // namespace

PolyFp smallest_irreducible(std::uint64_t q, int k) {
    if (k == 1) return PolyFp{0, 1};
    PolyFp m(k + 1, 0);
    m[k] = 1;
    // odometer over (c0, ..., c_{k-1}) in lexicographic order
    while (true) {
        if (irreducible_small(m, q, k)) return m;
        int i = k - 1;
        while (i >= 0) {
            if (++m[i] < q) break;
            m[i] = 0;
            --i;
        }
        if (i < 0) throw Error("no irreducible found (impossible)");
    }
}

Tower Tower::build_extension(std::uint64_t q, int k, std::uint64_t cap) {
    return with_modulus(q, smallest_irreducible(q, k), cap);
}

Tower Tower::with_modulus(std::uint64_t q, PolyFp modulus, std::uint64_t cap) {
    if (!is_prime_u64(q)) throw Error("tower: q must be prime");
    int k = fp::deg(modulus);
    if (k < 1 || k > 3) throw Error("tower: degree must be 1..3");
    if (modulus.back() != 1) throw Error("tower: modulus must be monic");
    if (!irreducible_small(modulus, q, k)) throw Error("tower: modulus not irreducible");
    Tower t;
    t.q_ = q;
    t.k_ = k;
    t.size_ = 1;
    for (int i = 0; i < k; ++i) {
        t.size_ *= q;
        if (t.size_ > cap) throw Error("tower: enumeration cap exceeded");
    }
    t.modulus_ = std::move(modulus);
    if (t.k_ > 1 && t.size_ < 4096) t.init_tables();
    return t;
}

FqElem Tower::from_int(std::int64_t v) const {
    std::int64_t m = v % static_cast<std::int64_t>(q_);
    if (m < 0) m += q_;
    return {static_cast<std::uint64_t>(m), 0, 0};
}

FqElem Tower::element(std::uint64_t index) const {
    FqElem x{0, 0, 0};
    for (int i = 0; i < k_; ++i) {
        x[i] = index % q_;
        index /= q_;
    }
    return x;
}

std::uint64_t Tower::index_of(const FqElem& x) const {
    std::uint64_t idx = 0;
    for (int i = k_ - 1; i >= 0; --i) idx = idx * q_ + x[i];
    return idx;
}

FqElem Tower::add(const FqElem& a, const FqElem& b) const {
    FqElem c{0, 0, 0};
    for (int i = 0; i < k_; ++i) {
        std::uint64_t v = a[i] + b[i];
        c[i] = v >= q_ ? v - q_ : v;
    }
    return c;
}

FqElem Tower::sub(const FqElem& a, const FqElem& b) const {
    FqElem c{0, 0, 0};
    for (int i = 0; i < k_; ++i) c[i] = a[i] >= b[i] ? a[i] - b[i] : a[i] + q_ - b[i];
    return c;
}

FqElem Tower::neg(const FqElem& a) const { return sub(zero(), a); }

FqElem Tower::scale(std::uint64_t s, const FqElem& a) const {
    s %= q_;
    FqElem c{0, 0, 0};
    for (int i = 0; i < k_; ++i) c[i] = mulmod_u64(a[i], s, q_);
    return c;
}

FqElem Tower::mul(const FqElem& a, const FqElem& b) const {
    if (k_ == 1) return {mulmod_u64(a[0], b[0], q_), 0, 0};
    if (tables_) {
        std::uint64_t ia = index_of(a), ib = index_of(b);
        if (log_[ia] == UINT32_MAX || log_[ib] == UINT32_MAX) return zero();
        std::uint64_t l = (log_[ia] + log_[ib]) % (size_ - 1);
        return element(exp_[l]);
    }
    std::uint64_t prod[5] = {0, 0, 0, 0, 0};
    for (int i = 0; i < k_; ++i) {
        if (!a[i]) continue;
        for (int j = 0; j < k_; ++j) prod[i + j] = (prod[i + j] + mulmod_u64(a[i], b[j], q_)) % q_;
    }
    // reduce by monic modulus
    for (int i = 2 * k_ - 2; i >= k_; --i) {
        std::uint64_t coef = prod[i];
        if (!coef) continue;
        prod[i] = 0;
        for (int j = 0; j < k_; ++j) {
            std::uint64_t sv = mulmod_u64(coef, modulus_[j], q_);
            std::uint64_t& t = prod[i - k_ + j];
            t = t >= sv ? t - sv : t + q_ - sv;
        }
    }
    return {prod[0], prod[1], prod[2]};
}

FqElem Tower::pow(FqElem a, Int e) const {
    FqElem r = one();
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) r = mul(r, a);
        a = mul(a, a);
        e >>= 1;
    }
    return r;
}

void Tower::init_tables() {
    tables_ = false;  // plain mul during construction
    const std::uint64_t n = size_ - 1;
    auto order_factors = factorize(Int(static_cast<unsigned long>(n)));
    for (std::uint64_t gi = 1; gi < size_; ++gi) {
        FqElem g = element(gi);
        if (is_zero(g)) continue;
        bool primitive = true;
        for (auto& [pf, e] : order_factors) {
            (void)e;
            FqElem t = pow(g, Int(static_cast<unsigned long>(n)) / pf);
            if (t == one()) {
                primitive = false;
                break;
            }
        }
        if (!primitive) continue;
        log_.assign(size_, UINT32_MAX);
        exp_.assign(n, 0);
        FqElem cur = one();
        for (std::uint64_t l = 0; l < n; ++l) {
            std::uint64_t idx = index_of(cur);
            log_[idx] = static_cast<std::uint32_t>(l);
            exp_[l] = static_cast<std::uint32_t>(idx);
            cur = mul(cur, g);
        }
        tables_ = true;
        return;
    }
    throw Error("no primitive element found (impossible)");
}

SquareClass Tower::is_square(const FqElem& a) const {
    if (q_ == 2) throw Error("is_square unsupported in characteristic 2");
    if (is_zero(a)) return SquareClass::zero;
    if (tables_) {
        std::uint32_t l = log_[index_of(a)];
        return (l % 2 == 0) ? SquareClass::square : SquareClass::nonsquare;
    }
    FqElem t = pow(a, Int(static_cast<unsigned long>((size_ - 1) / 2)));
    return t == one() ? SquareClass::square : SquareClass::nonsquare;
}

FqElem Tower::eval_int_poly(const std::vector<Int>& coeffs, const FqElem& x) const {
    FqElem v = zero();
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        v = mul(v, x);
        std::uint64_t c = mpz_fdiv_ui(it->get_mpz_t(), q_);
        v = add(v, FqElem{c, 0, 0});
    }
    return v;
}

}  // namespace frey7
