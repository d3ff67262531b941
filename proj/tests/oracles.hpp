#pragma once

// Slow reference implementations used only to check the library.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace oracle {

using u64 = std::uint64_t;

inline bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 k = 2; k * k <= n; ++k)
        if (n % k == 0) return false;
    return true;
}

inline std::vector<std::pair<u64, unsigned>> factor(u64 n) {
    std::vector<std::pair<u64, unsigned>> out;
    for (u64 k = 2; k * k <= n; ++k) {
        unsigned e = 0;
        while (n % k == 0) {
            n /= k;
            ++e;
        }
        if (e) out.emplace_back(k, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

/// Smallest k >= 1 with q^k = 1 mod m by repeated multiplication.
inline u64 order(u64 q, u64 m) {
    const unsigned __int128 qm = q % m;
    unsigned __int128 x = qm;
    for (u64 k = 1;; ++k) {
        if (x % m == 1 % m) return k;
        x = x * qm % m;
    }
}

// dense polynomials mod p, lowest degree first, p < 2^31

using Poly = std::vector<u64>;

inline void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline Poly mul(const Poly& a, const Poly& b, u64 p) {
    if (a.empty() || b.empty()) return {};
    Poly out(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = (out[i + j] + a[i] * b[j]) % p;
    trim(out);
    return out;
}

inline u64 inv(u64 a, u64 p) {
    u64 r = 1, e = p - 2;
    a %= p;
    while (e) {
        if (e & 1) r = r * a % p;
        a = a * a % p;
        e >>= 1;
    }
    return r;
}

/// a mod m, m nonzero
inline Poly rem(Poly a, const Poly& m, u64 p) {
    trim(a);
    const u64 li = inv(m.back(), p);
    while (a.size() >= m.size()) {
        const u64 q = a.back() * li % p;
        const std::size_t shift = a.size() - m.size();
        for (std::size_t i = 0; i < m.size(); ++i) a[shift + i] = (a[shift + i] + p - q * m[i] % p) % p;
        trim(a);
    }
    return a;
}

inline Poly sub(Poly a, const Poly& b, u64 p) {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + p - b[i]) % p;
    trim(a);
    return a;
}

inline Poly pow_mod(Poly base, u64 e, const Poly& m, u64 p) {
    Poly r = rem(Poly{1}, m, p);
    base = rem(base, m, p);
    while (e) {
        if (e & 1) r = rem(mul(r, base, p), m, p);
        base = rem(mul(base, base, p), m, p);
        e >>= 1;
    }
    return r;
}

inline u64 eval(const Poly& a, u64 x, u64 p) {
    u64 r = 0;
    for (std::size_t i = a.size(); i-- > 0;) r = (r * x + a[i]) % p;
    return r;
}

/// Roots in F_p by evaluating at every residue.
inline std::vector<u64> roots(const Poly& a, u64 p) {
    std::vector<u64> out;
    for (u64 x = 0; x < p; ++x)
        if (eval(a, x, p) == 0) out.push_back(x);
    return out;
}

/// Smallest e with every irreducible factor of g dividing x^(p^e) - x,
/// tested as g | (x^(p^e) - x)^deg g.
inline u64 splitting_degree(const Poly& g, u64 p) {
    const std::size_t n = g.size() - 1;
    const Poly x = rem(Poly{0, 1}, g, p);
    Poly h = x;
    for (u64 e = 1;; ++e) {
        h = pow_mod(h, p, g, p);
        const Poly diff = sub(h, x, p);
        Poly acc = rem(Poly{1}, g, p);
        for (std::size_t k = 0; k < n && !acc.empty(); ++k) acc = rem(mul(acc, diff, p), g, p);
        if (acc.empty()) return e;
    }
}

/// x -> x^d - c iterated from 0 mod p; minimal n with f^n(0) = 0.
inline std::optional<u64> period_of_zero(u64 p, u64 d, u64 c) {
    u64 z = 0;
    for (u64 n = 1; n <= p; ++n) {
        u64 t = 1;
        for (u64 i = 0; i < d; ++i) t = t * z % p;
        z = (t + p - c % p) % p;
        if (z == 0) return n;
    }
    return std::nullopt;
}

}  // namespace oracle
