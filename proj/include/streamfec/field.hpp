// Finite-field arithmetic for all sub-symbols. Two kinds:
//   - prime fields GF(p), residues mod p (randomized constituent codes want a
//     large prime, >= 2^20 by default, so that random parity matrices have the
//     needed rank properties with overwhelming probability);
//   - binary extension fields GF(2^m) with log/antilog tables (Reed-Solomon
//     backends; default m=8 with polynomial 0x11D).
// Elements are canonical uint64_t values (least residue / polynomial bits) so
// serialized matrices and traces are deterministic.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace streamfec {

struct FieldError : std::runtime_error {
    explicit FieldError(const std::string& w) : std::runtime_error(w) {}
};

namespace detail {

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return std::uint64_t((__uint128_t)a * b % p);
}

inline std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
    std::uint64_t r = 1 % p;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, p);
        a = mulmod_u64(a, a, p);
        e >>= 1;
    }
    return r;
}

// Deterministic Miller-Rabin for 64-bit inputs.
inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                            23ull, 29ull, 31ull, 37ull}) {
        if (n == q) return true;
        if (n % q == 0) return false;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                            23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

// Carry-less product of GF(2) polynomials (software clmul).
inline std::uint64_t clmul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r = 0;
    while (b) {
        if (b & 1) r ^= a;
        a <<= 1;
        b >>= 1;
    }
    return r;
}

inline int deg(std::uint64_t x) {
    return x == 0 ? -1 : 63 - __builtin_clzll(x);
}

inline std::uint64_t clmod(std::uint64_t a, std::uint64_t f) {
    int df = deg(f);
    for (int d = deg(a); d >= df; d = deg(a)) a ^= f << (d - df);
    return a;
}

inline std::uint64_t gf2_mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t f) {
    return clmod(clmul(a, b), f);
}

inline std::uint64_t gf2_gcd(std::uint64_t a, std::uint64_t b) {
    while (b) { a = clmod(a, b); std::swap(a, b); }
    return a;
}

// f irreducible over GF(2) iff x^(2^m) == x (mod f) and
// gcd(x^(2^(m/d)) - x, f) == 1 for every prime divisor d of m.
inline bool gf2_irreducible(std::uint64_t f) {
    int m = deg(f);
    if (m < 1) return false;
    auto xpow2k = [&](int k) {  // x^(2^k) mod f
        std::uint64_t x = clmod(2, f);
        for (int i = 0; i < k; ++i) x = gf2_mulmod(x, x, f);
        return x;
    };
    if (xpow2k(m) != clmod(2, f)) return false;
    for (int d = 2; d <= m; ++d) {
        if (m % d != 0) continue;
        bool prime_d = true;
        for (int e = 2; e * e <= d; ++e)
            if (d % e == 0) { prime_d = false; break; }
        if (!prime_d) continue;
        std::uint64_t g = gf2_gcd(xpow2k(m / d) ^ clmod(2, f), f);
        if (g != 1) return false;
    }
    return true;
}

}  // namespace detail

class Field {
public:
    enum class Kind { Prime, Gf2 };

    static Field prime(std::uint64_t p) {
        if (!detail::is_prime_u64(p))
            throw FieldError("field: modulus " + std::to_string(p) + " is not prime");
        Field f;
        f.kind_ = Kind::Prime;
        f.p_ = p;
        f.small_ = p < (std::uint64_t(1) << 32);
        return f;
    }

    static Field gf2(unsigned m = 8, std::uint64_t poly = 0x11D) {
        if (m < 1 || m > 16) throw FieldError("field: GF(2^m) supports 1 <= m <= 16");
        if (detail::deg(poly) != int(m))
            throw FieldError("field: polynomial degree does not match m");
        if (!detail::gf2_irreducible(poly))
            throw FieldError("field: polynomial is reducible over GF(2)");
        Field f;
        f.kind_ = Kind::Gf2;
        f.m_ = m;
        f.poly_ = poly;
        f.p_ = std::uint64_t(1) << m;
        f.build_tables();
        return f;
    }

    Kind kind() const { return kind_; }
    std::uint64_t size() const { return p_; }        // q
    std::uint64_t modulus() const { return p_; }     // prime kind
    unsigned degree() const { return m_; }           // binary kind
    std::uint64_t poly() const { return poly_; }

    bool valid(std::uint64_t a) const { return a < p_; }

    std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
        if (kind_ == Kind::Gf2) return a ^ b;
        std::uint64_t s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    std::uint64_t sub(std::uint64_t a, std::uint64_t b) const {
        if (kind_ == Kind::Gf2) return a ^ b;
        return a >= b ? a - b : a + p_ - b;
    }
    std::uint64_t neg(std::uint64_t a) const {
        if (kind_ == Kind::Gf2) return a;
        return a == 0 ? 0 : p_ - a;
    }
    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
        if (kind_ == Kind::Gf2) {
            if (a == 0 || b == 0) return 0;
            return exp_[log_[a] + log_[b]];
        }
        if (small_) return a * b % p_;
        return detail::mulmod_u64(a, b, p_);
    }
    std::uint64_t inv(std::uint64_t a) const {
        if (a == 0) throw FieldError("field: inverse of zero");
        if (kind_ == Kind::Gf2) return exp_[(p_ - 1) - log_[a]];
        // extended Euclid on (a, p)
        std::int64_t t = 0, nt = 1;
        std::int64_t r = std::int64_t(p_), nr = std::int64_t(a);
        while (nr != 0) {
            std::int64_t q = r / nr;
            std::int64_t tmp = t - q * nt; t = nt; nt = tmp;
            tmp = r - q * nr; r = nr; nr = tmp;
        }
        if (t < 0) t += std::int64_t(p_);
        return std::uint64_t(t);
    }
    std::uint64_t div(std::uint64_t a, std::uint64_t b) const {
        if (b == 0) throw FieldError("field: division by zero");
        return mul(a, inv(b));
    }
    std::uint64_t pow(std::uint64_t a, std::uint64_t e) const {
        std::uint64_t r = 1;
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }
    std::uint64_t from_int(std::int64_t v) const {
        std::int64_t m = std::int64_t(p_);
        std::int64_t r = v % m;
        if (r < 0) r += m;
        if (kind_ == Kind::Gf2) return std::uint64_t(r);  // bit pattern, already < 2^m
        return std::uint64_t(r);
    }

    // Reference multiply for the binary kind: carry-less product reduced by the
    // field polynomial. Cross-checked against the table path in tests.
    std::uint64_t mul_clmul(std::uint64_t a, std::uint64_t b) const {
        if (kind_ != Kind::Gf2) throw FieldError("field: mul_clmul is binary-only");
        return detail::gf2_mulmod(a, b, poly_);
    }

    friend bool operator==(const Field& a, const Field& b) {
        return a.kind_ == b.kind_ && a.p_ == b.p_ && a.poly_ == b.poly_;
    }
    friend bool operator!=(const Field& a, const Field& b) { return !(a == b); }

private:
    Field() = default;

    void build_tables() {
        std::size_t q = std::size_t(p_);
        log_.assign(q, 0);
        exp_.assign(2 * q, 0);
        // find a generator of the multiplicative group
        std::uint64_t g = 2;
        for (;; ++g) {
            std::uint64_t x = 1;
            std::size_t order = 0;
            do {
                x = detail::gf2_mulmod(x, g, poly_);
                ++order;
            } while (x != 1);
            if (order == q - 1) break;
        }
        std::uint64_t x = 1;
        for (std::size_t i = 0; i < q - 1; ++i) {
            exp_[i] = x;
            exp_[i + (q - 1)] = x;
            log_[x] = std::uint32_t(i);
            x = detail::gf2_mulmod(x, g, poly_);
        }
    }

    Kind kind_ = Kind::Prime;
    std::uint64_t p_ = 2;      // field size q
    unsigned m_ = 0;
    std::uint64_t poly_ = 0;
    bool small_ = true;        // p < 2^32: products fit in uint64
    std::vector<std::uint32_t> log_;
    std::vector<std::uint64_t> exp_;
};

// Default fields used throughout.
inline const Field& default_prime_field() {
    static const Field f = Field::prime(1048583);  // smallest prime above 2^20
    return f;
}
inline const Field& default_gf256() {
    static const Field f = Field::gf2(8, 0x11D);
    return f;
}

}  // namespace streamfec
