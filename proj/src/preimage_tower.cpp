#include <numeric>
#include <random>

#include "arboreal/errors.hpp"
#include "arboreal/ff_factor.hpp"

namespace arboreal {

namespace {

PolyFp inverse_mod(const PolyFp& a, const PolyFp& m) {
    const std::uint64_t p = m.modulus();
    PolyFp r0 = m, r1 = a % m;
    PolyFp s0(p), s1 = PolyFp::constant(p, 1);
    while (!r1.is_zero()) {
        DivModFp qr = divmod(r0, r1);
        r0 = std::move(r1);
        r1 = std::move(qr.remainder);
        PolyFp s = s0 - qr.quotient * s1;
        s0 = std::move(s1);
        s1 = std::move(s);
    }
    if (r0.degree() != 0) throw InvalidArgument("inverse_mod: not invertible");
    return (s0 * pow_mod_u64(r0.leading(), p - 2, p)) % m;
}

/// w(x^l - shift)
PolyFp substitute(const PolyFp& w, unsigned l, std::uint64_t shift) {
    const std::uint64_t p = w.modulus();
    PolyFp lin = PolyFp::from_signed(p, {0, 1}) - PolyFp::constant(p, shift);
    PolyFp v = compose(w, lin);
    std::vector<std::uint64_t> out(v.coefficients().size() == 0 ? 0 : (v.coefficients().size() - 1) * l + 1, 0);
    for (std::size_t k = 0; k < v.coefficients().size(); ++k) out[k * l] = v.coefficients()[k];
    return PolyFp(p, std::move(out));
}

struct Step {
    unsigned l;
    std::uint64_t shift;
};

class Expander {
public:
    Expander(std::uint64_t q, std::uint64_t seed) : q_(q), rng_(seed) {}

    /// Children of the node with minimal polynomial g under x -> x^l - shift.
    /// Degrees are always reported; factors only when wanted.
    void expand(const PolyFp& g, const Step& st, bool want, std::vector<PolyFp>& kids,
                std::vector<std::uint64_t>& degrees) {
        const unsigned L = static_cast<unsigned>(g.degree());
        const unsigned l = st.l;
        const std::uint64_t minus_shift = (q_ - st.shift % q_) % q_;
        if (L == 1 && g.evaluate(minus_shift) == 0) {
            degrees.push_back(1);
            if (want) kids.push_back(PolyFp::x(q_));
            return;
        }
        Integer Q;
        mpz_ui_pow_ui(Q.get_mpz_t(), q_, L);
        const Integer Qm1 = Q - 1;
        const PolyFp a = (PolyFp::x(q_) + PolyFp::constant(q_, st.shift)) % g;

        if (Qm1 % l != 0) {
            // the l-th power map is bijective on F_Q^*: one root in F_Q, the
            // others twisted by the l-th roots of unity
            const unsigned o = static_cast<unsigned>(mult_order(Q % l, Integer(l)).get_ui());
            degrees.push_back(L);
            for (unsigned i = 0; i < (l - 1) / o; ++i) degrees.push_back(std::uint64_t{o} * L);
            if (!want) return;
            Integer inv_l;
            mpz_invert(inv_l.get_mpz_t(), Integer(l).get_mpz_t(), Qm1.get_mpz_t());
            const PolyFp h = substitute(g, l, st.shift);
            const PolyFp w0 = pow_mod(a, inv_l, g);
            PolyFp h1 = gcd(h, PolyFp::x(q_) - substitute(w0, l, st.shift));
            PolyFp rest = exact_div(h, h1);
            kids.push_back(std::move(h1));
            if ((l - 1) / o == 1) {
                kids.push_back(std::move(rest));
            } else {
                for (auto& k : equal_degree_factorization(rest, o * L, rng_())) kids.push_back(std::move(k));
            }
            return;
        }

        if (!is_lth_power(g, a, l, Qm1)) {
            degrees.push_back(std::uint64_t{l} * L);
            if (want) kids.push_back(substitute(g, l, st.shift));
            return;
        }
        for (unsigned i = 0; i < l; ++i) degrees.push_back(L);
        if (!want) return;
        auto [s, zeta] = lth_root(g, a, l, Qm1);
        PolyFp h = substitute(g, l, st.shift);
        PolyFp root = s;
        for (unsigned i = 0; i + 1 < l; ++i) {
            PolyFp k = gcd(h, PolyFp::x(q_) - substitute(root, l, st.shift));
            h = exact_div(h, k);
            kids.push_back(std::move(k));
            root = (root * zeta) % g;
        }
        kids.push_back(h.monic());
    }

private:
    /// b^((Q-1)/l) == 1 for b in F_q[Y]/(g); l | Q - 1.
    bool is_lth_power(const PolyFp& g, const PolyFp& b, unsigned l, const Integer& Qm1) {
        if ((q_ - 1) % l == 0) {
            // b^((Q-1)/l) = N(b)^((q-1)/l) with N(b) = Res(g, b) for monic g
            std::uint64_t norm = resultant(g, b);
            return pow_mod_u64(norm, (q_ - 1) / l, q_) == 1;
        }
        return pow_mod(b, Qm1 / l, g).is_one();
    }

    PolyFp random_element(const PolyFp& g) {
        for (;;) {
            std::vector<std::uint64_t> c(static_cast<std::size_t>(g.degree()));
            for (auto& v : c) v = rng_() % q_;
            PolyFp b(q_, std::move(c));
            if (!b.is_zero()) return b;
        }
    }

    /// An l-th root of a and a primitive l-th root of unity in F_q[Y]/(g).
    std::pair<PolyFp, PolyFp> lth_root(const PolyFp& g, const PolyFp& a, unsigned l, const Integer& Qm1) {
        unsigned S = 0;
        Integer T = Qm1;
        while (T % l == 0) {
            T /= l;
            ++S;
        }
        PolyFp b = random_element(g);
        while (is_lth_power(g, b, l, Qm1)) b = random_element(g);
        const PolyFp z = pow_mod(b, T, g);  // generates the l-Sylow subgroup
        Integer lpow;
        mpz_ui_pow_ui(lpow.get_mpz_t(), l, S - 1);
        const PolyFp zeta = pow_mod(z, lpow, g);

        Integer u = 0;
        if (T != 1) mpz_invert(u.get_mpz_t(), Integer(l).get_mpz_t(), T.get_mpz_t());
        const PolyFp x0 = pow_mod(a, u, g);
        const PolyFp e = (pow_mod(x0, Integer(l), g) * inverse_mod(a, g)) % g;

        // e = z^j with l | j, digit by digit
        const PolyFp zinv = inverse_mod(z, g);
        Integer j = 0, lk = 1;
        for (unsigned k = 0; k < S; ++k) {
            Integer ex;
            mpz_ui_pow_ui(ex.get_mpz_t(), l, S - 1 - k);
            PolyFp t = pow_mod((e * pow_mod(zinv, j, g)) % g, ex, g);
            PolyFp acc = PolyFp::constant(q_, 1);
            unsigned digit = 0;
            while (!(acc == t)) {
                acc = (acc * zeta) % g;
                if (++digit >= l) throw FalsificationError("lth_root: discrete log failed", g.str());
            }
            j += lk * digit;
            lk *= l;
        }
        const PolyFp y = pow_mod(zinv, j / l, g);
        return {(x0 * y) % g, zeta};
    }

    std::uint64_t q_;
    std::mt19937_64 rng_;
};

}  // namespace

std::vector<std::uint64_t> unicritical_splitting_degrees(std::uint64_t q, std::uint64_t d, std::uint64_t c,
                                                         std::uint64_t alpha, unsigned n_max,
                                                         std::uint64_t seed) {
    if (!is_prime_u64(q)) throw InvalidArgument("modulus " + std::to_string(q) + " is not prime");
    if (d < 2) throw InvalidArgument("degree must be at least 2");
    if (std::gcd(d, q) != 1) throw InvalidArgument("gcd(d, q) must be 1");
    std::vector<Step> steps;
    for (const auto& pf : factor_integer(integer_from_u64(d)).factors)
        for (unsigned i = 0; i < pf.exponent; ++i)
            steps.push_back({static_cast<unsigned>(pf.prime.get_ui()), steps.empty() ? c % q : 0});

    Expander ex(q, seed);
    std::vector<PolyFp> nodes{PolyFp::x(q) - PolyFp::constant(q, alpha % q)};
    std::vector<std::uint64_t> out;
    for (unsigned N = 1; N <= n_max; ++N) {
        for (std::size_t si = 0; si < steps.size(); ++si) {
            const bool last = N == n_max && si + 1 == steps.size();
            std::vector<PolyFp> next;
            std::vector<std::uint64_t> degrees;
            for (const auto& g : nodes) ex.expand(g, steps[si], !last, next, degrees);
            if (si + 1 == steps.size()) {
                std::uint64_t e = 1;
                for (auto k : degrees) e = std::lcm(e, k);
                out.push_back(e);
            }
            nodes = std::move(next);
        }
    }
    return out;
}

}  // namespace arboreal
