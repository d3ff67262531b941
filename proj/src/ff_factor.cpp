#include "arboreal/ff_factor.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "arboreal/errors.hpp"
#include "fp_kernels.hpp"

namespace arboreal {

namespace {

using detail::Raw;

PolyFp from_raw(std::uint64_t p, Raw r) {
    PolyFp out(p);
    PolyFpAccess::raw(out) = std::move(r);
    return out;
}

const Raw& raw(const PolyFp& f) { return PolyFpAccess::raw(f); }

/// h -> h^p mod g. Small characteristic uses the matrix of x^(jp) mod g,
/// otherwise square-and-multiply.
class Frobenius {
public:
    explicit Frobenius(const PolyFp& g) : p_(g.modulus()), g_(raw(g)) {
        const std::size_t n = g_.size() - 1;
        use_matrix_ = n >= 8 && n <= 2048 && p_ <= 2 * n;
        if (!use_matrix_) return;
        rows_.resize(n);
        rows_[0] = Raw{1};
        for (std::size_t j = 1; j < n; ++j) {
            Raw shifted(p_, 0);
            shifted.insert(shifted.end(), rows_[j - 1].begin(), rows_[j - 1].end());
            rows_[j] = detail::rem_raw(std::move(shifted), g_, p_);
        }
        if (p_ < detail::kLazyModulus) budget_ = detail::lazy_budget(p_);
    }

    Raw apply(const Raw& h) const {
        if (!use_matrix_) {
            PolyFp base = from_raw(p_, h);
            return raw(pow_mod(base, integer_from_u64(p_), from_raw(p_, g_)));
        }
        const std::size_t n = g_.size() - 1;
        std::vector<std::uint64_t> acc(n, 0);
        if (budget_ > 0) {
            std::uint64_t pending = 0;
            for (std::size_t j = 0; j < h.size(); ++j) {
                const std::uint64_t c = h[j];
                if (c == 0) continue;
                if (pending == budget_) {
                    for (auto& v : acc) v %= p_;
                    pending = 0;
                }
                const Raw& row = rows_[j];
                for (std::size_t k = 0; k < row.size(); ++k) acc[k] += c * row[k];
                ++pending;
            }
            for (auto& v : acc) v %= p_;
        } else {
            for (std::size_t j = 0; j < h.size(); ++j) {
                const std::uint64_t c = h[j];
                if (c == 0) continue;
                const Raw& row = rows_[j];
                for (std::size_t k = 0; k < row.size(); ++k)
                    acc[k] = detail::add_mod(acc[k], mul_mod_u64(c, row[k], p_), p_);
            }
        }
        detail::trim(acc);
        return acc;
    }

private:
    std::uint64_t p_;
    Raw g_;
    bool use_matrix_ = false;
    std::uint64_t budget_ = 0;
    std::vector<Raw> rows_;
};

/// f = sum a_{pk} x^{pk}  ->  sum a_{pk} x^k
PolyFp pth_root(const PolyFp& f) {
    const std::uint64_t p = f.modulus();
    const Raw& c = raw(f);
    Raw out;
    for (std::size_t i = 0; i < c.size(); i += p) out.push_back(c[i]);
    detail::trim(out);
    return from_raw(p, std::move(out));
}

void squarefree_monic(const PolyFp& f, unsigned scale, std::vector<SquarefreeFactor>& out) {
    const std::uint64_t p = f.modulus();
    PolyFp c = gcd(f, derivative(f));
    PolyFp w = exact_div(f, c);
    unsigned i = 1;
    while (w.degree() > 0) {
        PolyFp y = gcd(w, c);
        PolyFp z = exact_div(w, y);
        if (z.degree() > 0) out.push_back({z, i * scale});
        ++i;
        w = std::move(y);
        c = exact_div(c, w);
    }
    if (c.degree() > 0) squarefree_monic(pth_root(c), scale * static_cast<unsigned>(p), out);
}

void sort_canonical(std::vector<PolyFp>& v) { std::sort(v.begin(), v.end(), canonical_less); }

std::uint64_t next_random(std::mt19937_64& rng, std::uint64_t p) { return rng() % p; }

void split_equal_degree(const PolyFp& u, unsigned k, std::mt19937_64& rng, std::vector<PolyFp>& out) {
    const std::uint64_t p = u.modulus();
    const int n = u.degree();
    if (n <= static_cast<int>(k)) {
        out.push_back(u);
        return;
    }
    Integer half = 0;
    if (p != 2) {
        mpz_ui_pow_ui(half.get_mpz_t(), p, k);
        half = (half - 1) / 2;
    }
    for (;;) {
        Raw a(static_cast<std::size_t>(n));
        for (auto& v : a) v = next_random(rng, p);
        detail::trim(a);
        if (a.size() <= 1) continue;
        PolyFp ap = from_raw(p, std::move(a));
        PolyFp b(p);
        if (p == 2) {
            // trace from F_{2^k} to F_2
            PolyFp t = ap;
            b = ap;
            for (unsigned i = 1; i < k; ++i) {
                t = (t * t) % u;
                b += t;
            }
        } else {
            b = pow_mod(ap, half, u) - PolyFp::constant(p, 1);
        }
        PolyFp d = gcd(u, b);
        if (d.degree() > 0 && d.degree() < n) {
            split_equal_degree(d, k, rng, out);
            split_equal_degree(exact_div(u, d), k, rng, out);
            return;
        }
    }
}

PolyFp x_poly(std::uint64_t p) { return PolyFp::x(p); }

std::uint64_t lcm_checked(std::uint64_t a, std::uint64_t b) {
    std::uint64_t g = std::gcd(a, b);
    unsigned __int128 l = static_cast<unsigned __int128>(a / g) * b;
    if (l > UINT64_MAX) throw WorkLimitError("splitting degree exceeds 64 bits");
    return static_cast<std::uint64_t>(l);
}

void require_positive_degree(const PolyFp& g, const char* op) {
    if (g.degree() < 1) throw InvalidArgument(std::string(op) + ": polynomial of degree < 1: " + g.str());
}

}  // namespace

std::vector<SquarefreeFactor> squarefree_decomposition(const PolyFp& g) {
    require_positive_degree(g, "squarefree_decomposition");
    std::vector<SquarefreeFactor> out;
    squarefree_monic(g.monic(), 1, out);
    std::sort(out.begin(), out.end(), [](const SquarefreeFactor& a, const SquarefreeFactor& b) {
        return a.multiplicity < b.multiplicity;
    });
    return out;
}

std::vector<DegreeBlock> distinct_degree_factorization(const PolyFp& g) {
    require_positive_degree(g, "distinct_degree_factorization");
    PolyFp f = g.monic();
    if (gcd(f, derivative(f)).degree() > 0)
        throw InvalidArgument("distinct_degree_factorization: input is not squarefree: " + g.str());
    const std::uint64_t p = f.modulus();
    const Frobenius frob(f);
    const PolyFp x = x_poly(p);
    std::vector<DegreeBlock> blocks;
    Raw h = raw(x % f);
    unsigned i = 0;
    while (f.degree() >= 2 * static_cast<int>(i + 1)) {
        ++i;
        h = frob.apply(h);
        PolyFp G = gcd(f, from_raw(p, h) - x);
        if (G.degree() > 0) {
            blocks.push_back({i, G});
            f = exact_div(f, G);
        }
    }
    if (f.degree() > 0) blocks.push_back({static_cast<unsigned>(f.degree()), f});
    return blocks;
}

std::vector<PolyFp> equal_degree_factorization(const PolyFp& block, unsigned k, std::uint64_t seed) {
    require_positive_degree(block, "equal_degree_factorization");
    if (k == 0 || block.degree() % static_cast<int>(k) != 0)
        throw InvalidArgument("equal_degree_factorization: degree " + std::to_string(block.degree()) +
                              " is not a multiple of " + std::to_string(k));
    std::mt19937_64 rng(seed);
    std::vector<PolyFp> out;
    split_equal_degree(block.monic(), k, rng, out);
    sort_canonical(out);
    return out;
}

PolyFp FactorizationFp::product() const {
    PolyFp out = PolyFp::constant(modulus, unit);
    for (const auto& f : factors)
        for (unsigned i = 0; i < f.multiplicity; ++i) out = out * f.factor;
    return out;
}

FactorizationFp factor(const PolyFp& g, std::uint64_t seed) {
    FactorizationFp out;
    out.modulus = g.modulus();
    if (g.is_zero()) throw InvalidArgument("factor: zero polynomial");
    out.unit = g.leading();
    if (g.degree() == 0) return out;
    std::mt19937_64 rng(seed);
    for (const auto& sf : squarefree_decomposition(g)) {
        for (const auto& block : distinct_degree_factorization(sf.factor)) {
            std::vector<PolyFp> parts;
            split_equal_degree(block.product, block.degree, rng, parts);
            for (auto& f : parts) out.factors.push_back({std::move(f), sf.multiplicity});
        }
    }
    std::sort(out.factors.begin(), out.factors.end(), [](const IrreducibleFactor& a, const IrreducibleFactor& b) {
        if (a.factor == b.factor) return a.multiplicity < b.multiplicity;
        return canonical_less(a.factor, b.factor);
    });
    return out;
}

std::vector<PolyFp> distinct_irreducible_factors(const PolyFp& g, std::uint64_t seed) {
    std::vector<PolyFp> out;
    for (auto& f : factor(g, seed).factors) out.push_back(std::move(f.factor));
    return out;
}

std::uint64_t splitting_degree(const PolyFp& g) {
    require_positive_degree(g, "splitting_degree");
    std::uint64_t e = 1;
    for (const auto& sf : squarefree_decomposition(g))
        for (const auto& block : distinct_degree_factorization(sf.factor)) e = lcm_checked(e, block.degree);
    return e;
}

bool splits_completely_distinct(const PolyFp& g) {
    require_positive_degree(g, "splits_completely_distinct");
    const std::uint64_t p = g.modulus();
    if (g.degree() > 0 && static_cast<std::uint64_t>(g.degree()) > p) return false;
    if (!is_separable(g)) return false;
    PolyFp f = g.monic();
    PolyFp xp = pow_mod(x_poly(p), integer_from_u64(p), f);
    return gcd(f, xp - x_poly(p)).degree() == f.degree();
}

std::vector<std::uint64_t> roots_in_fp(const PolyFp& g, std::uint64_t seed) {
    if (g.is_zero()) throw InvalidArgument("roots_in_fp: zero polynomial");
    if (g.degree() < 1) return {};
    const std::uint64_t p = g.modulus();
    PolyFp f = g.monic();
    PolyFp xp = pow_mod(x_poly(p), integer_from_u64(p), f);
    PolyFp linear = gcd(f, xp - x_poly(p));
    std::vector<std::uint64_t> roots;
    if (linear.degree() < 1) return roots;
    for (const auto& l : equal_degree_factorization(linear, 1, seed)) roots.push_back((p - l.coeff(0)) % p);
    std::sort(roots.begin(), roots.end());
    return roots;
}

bool is_irreducible(const PolyFp& g) {
    if (g.degree() < 1) return false;
    const std::uint64_t p = g.modulus();
    const PolyFp f = g.monic();
    const unsigned n = static_cast<unsigned>(f.degree());
    const Frobenius frob(f);
    const PolyFp x = x_poly(p);
    std::vector<unsigned> maximal;  // n / r for primes r | n
    for (const auto& pf : factor_integer(n).factors) maximal.push_back(n / static_cast<unsigned>(pf.prime.get_ui()));
    Raw h = raw(x % f);
    for (unsigned i = 1; i <= n; ++i) {
        h = frob.apply(h);
        if (i < n && std::find(maximal.begin(), maximal.end(), i) != maximal.end()) {
            if (gcd(f, from_raw(p, h) - x).degree() > 0) return false;
        }
    }
    return (from_raw(p, h) - x).is_zero() || ((from_raw(p, h) - x) % f).is_zero();
}

}  // namespace arboreal
