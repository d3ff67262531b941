#include "fp_kernels.hpp"

#include <limits>
#include <string>

#include "arboreal/errors.hpp"

namespace arboreal::detail {

void trim(Raw& v) {
    while (!v.empty() && v.back() == 0) v.pop_back();
}

std::uint64_t add_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    std::uint64_t s = a + b;
    return s >= p ? s - p : s;
}

std::uint64_t sub_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p) { return a >= b ? a - b : a + (p - b); }

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p) {
    if (a % p == 0) throw InvalidArgument("inverse of zero modulo " + std::to_string(p));
    return pow_mod_u64(a, p - 2, p);
}

std::uint64_t lazy_budget(std::uint64_t p) {
    std::uint64_t sq = (p - 1) * (p - 1);
    if (sq == 0) return std::numeric_limits<std::uint64_t>::max();
    return (std::numeric_limits<std::uint64_t>::max() - p) / sq;
}

Raw mul_raw(const Raw& a, const Raw& b, std::uint64_t p) {
    if (a.empty() || b.empty()) return {};
    const Raw& s = a.size() <= b.size() ? a : b;
    const Raw& l = a.size() <= b.size() ? b : a;
    Raw out(a.size() + b.size() - 1, 0);
    const std::size_t nl = l.size();
    if (p < kLazyModulus) {
        const std::uint64_t budget = lazy_budget(p);
        std::size_t pending = 0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            const std::uint64_t si = s[i];
            if (si == 0) continue;
            if (pending == budget) {
                for (auto& v : out) v %= p;
                pending = 0;
            }
            std::uint64_t* o = out.data() + i;
            const std::uint64_t* lp = l.data();
            for (std::size_t j = 0; j < nl; ++j) o[j] += si * lp[j];
            ++pending;
        }
        for (auto& v : out) v %= p;
    } else {
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] == 0) continue;
            for (std::size_t j = 0; j < nl; ++j) out[i + j] = add_mod(out[i + j], mul_mod_u64(s[i], l[j], p), p);
        }
    }
    trim(out);
    return out;
}

/// Long division by a nonzero divisor. Writes the quotient when requested.
Raw rem_raw(Raw r, const Raw& b, std::uint64_t p, Raw* quotient) {
    if (b.empty()) throw InvalidArgument("polynomial division by zero");
    const std::size_t m = b.size() - 1;
    if (quotient) quotient->clear();
    if (r.size() < b.size()) {
        trim(r);
        return r;
    }
    if (quotient) quotient->assign(r.size() - m, 0);
    const std::uint64_t inv = inv_mod(b.back(), p);
    Raw neg(m);
    for (std::size_t j = 0; j < m; ++j) neg[j] = b[j] == 0 ? 0 : p - b[j];

    if (p < kLazyModulus && m <= lazy_budget(p)) {
        for (std::size_t i = r.size() - 1; i + 1 > m && i >= m; --i) {
            std::uint64_t c = r[i] % p;
            r[i] = 0;
            if (c != 0) {
                c = c * inv % p;
                if (quotient) (*quotient)[i - m] = c;
                std::uint64_t* base = r.data() + (i - m);
                for (std::size_t j = 0; j < m; ++j) base[j] += c * neg[j];
            }
            if (i == m) break;
        }
        r.resize(m);
        for (auto& v : r) v %= p;
    } else {
        for (std::size_t i = r.size() - 1; i >= m; --i) {
            std::uint64_t c = r[i] % p;
            r[i] = 0;
            if (c != 0) {
                c = mul_mod_u64(c, inv, p);
                if (quotient) (*quotient)[i - m] = c;
                for (std::size_t j = 0; j < m; ++j)
                    r[i - m + j] = add_mod(r[i - m + j] % p, mul_mod_u64(c, neg[j], p), p);
            }
            if (i == m) break;
        }
        r.resize(m);
        for (auto& v : r) v %= p;
    }
    trim(r);
    if (quotient) trim(*quotient);
    return r;
}

}  // namespace arboreal::detail
