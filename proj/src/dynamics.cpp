#include "arboreal/dynamics.hpp"

#include <algorithm>
#include <unordered_map>

#include "arboreal/errors.hpp"

namespace arboreal {

namespace {

void require_monic(const PolyQ& f, int min_degree, const char* op) {
    if (f.degree() < min_degree || !f.is_monic())
        throw InvalidArgument(std::string(op) + ": need a monic polynomial of degree >= " +
                              std::to_string(min_degree) + ", got " + f.str());
}

std::vector<Integer> divisors(const Integer& n) {
    IntegerFactorization fac = factor_integer(n);
    if (!fac.complete()) throw WorkLimitError("cannot factor " + n.get_str() + " for the rational-root sieve");
    std::vector<Integer> out{1};
    for (const auto& pf : fac.factors) {
        const std::size_t base = out.size();
        Integer pk = 1;
        for (unsigned e = 1; e <= pf.exponent; ++e) {
            pk *= pf.prime;
            for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
        }
    }
    return out;
}

/// Distinct rational roots, ascending.
std::vector<Rational> rational_roots(const PolyQ& g) {
    std::vector<Integer> z;
    Integer den = 1;
    for (const auto& c : g.coefficients()) den = lcm(den, c.denominator());
    for (const auto& c : g.coefficients()) z.push_back(c.numerator() * (den / c.denominator()));
    std::vector<Rational> roots;
    std::size_t low = 0;
    while (low < z.size() && z[low] == 0) ++low;
    if (low > 0) roots.push_back(Rational(0));
    if (z.size() - low > 1) {
        const Integer a0 = abs(z[low]);
        const Integer an = abs(z.back());
        const auto us = divisors(a0);
        const auto vs = divisors(an);
        if (us.size() * vs.size() > 2000000) throw WorkLimitError("rational-root sieve has too many candidates");
        for (const auto& u : us)
            for (const auto& v : vs) {
                if (gcd(u, v) != 1) continue;
                for (int s : {1, -1}) {
                    Rational r(u * s, v);
                    if (g.evaluate(r).is_zero()) roots.push_back(r);
                }
            }
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

std::vector<Integer> primes_of(const Integer& n, const FactorBudget& budget = {}) {
    if (n == 0) throw InvalidArgument("primes_of: zero");
    return prime_support(abs(n), budget);
}

}  // namespace

PolyQ unicritical(unsigned d, const Rational& c) {
    if (d < 2) throw InvalidArgument("unicritical: degree must be at least 2");
    return PolyQ::monomial(Rational(1), d) - PolyQ::constant(c);
}

CriticalPoints critical_points(const PolyQ& f) {
    require_monic(f, 2, "critical_points");
    const PolyQ g = derivative(f);
    CriticalPoints out;
    out.rational = rational_roots(g);
    const int distinct = g.degree() - gcd(g, derivative(g)).degree();
    out.has_irrational = static_cast<int>(out.rational.size()) < distinct;
    return out;
}

bool CriticalOrbit::contains(const Rational& x) const {
    return std::find(orbit_values.begin(), orbit_values.end(), x) != orbit_values.end();
}

CriticalOrbit forward_orbit(const PolyQ& f, const Rational& z0, std::size_t step_budget) {
    require_monic(f, 2, "forward_orbit");
    const auto& a = f.coefficients();
    const long d = f.degree();

    CriticalOrbit out;
    out.critical_point = z0;
    out.bound = Rational(2);
    for (long i = 0; i < d; ++i) out.bound += a[i].abs();

    // primes where f is not integral, with the valuations of its coefficients
    std::vector<Integer> bad;
    for (const auto& c : a)
        if (!c.is_integer())
            for (const auto& p : primes_of(c.denominator())) bad.push_back(p);
    std::sort(bad.begin(), bad.end());
    bad.erase(std::unique(bad.begin(), bad.end()), bad.end());

    // v_p(z) < 0 and (d - i) v_p(z) < v_p(a_i) for all i < d: then v_p(f(z)) = d v_p(z)
    auto p_adic_escape = [&](const Rational& z, const Integer& p) {
        const Valuation vz = valuation(z, p);
        if (vz.is_infinite() || vz.value() >= 0) return false;
        for (long i = 0; i < d; ++i) {
            if (a[i].is_zero()) continue;
            if ((d - i) * vz.value() >= valuation(a[i], p).value()) return false;
        }
        return true;
    };

    std::unordered_map<Rational, std::size_t, RationalHash> seen;
    Rational z = z0;
    for (std::size_t k = 0; k <= step_budget; ++k) {
        out.orbit_values.push_back(z);
        if (auto it = seen.find(z); it != seen.end()) {
            out.kind = OrbitKind::periodic;
            out.tail = it->second;
            out.cycle = k - it->second;
            return out;
        }
        seen.emplace(z, k);
        if (z.abs() > out.bound) {
            out.kind = OrbitKind::escaped;
            out.escape_step = k;
            out.witness = EscapeWitness::archimedean;
            return out;
        }
        if (!z.is_integer()) {
            Integer rest = z.denominator();
            for (const auto& p : bad) {
                if (p_adic_escape(z, p)) {
                    out.kind = OrbitKind::escaped;
                    out.escape_step = k;
                    out.witness = EscapeWitness::p_adic;
                    out.witness_prime = p;
                    return out;
                }
                mpz_remove(rest.get_mpz_t(), rest.get_mpz_t(), p.get_mpz_t());
            }
            if (rest > 1) {
                // a prime where every coefficient is integral but z is not
                IntegerFactorization fac = factor_integer(rest);
                out.kind = OrbitKind::escaped;
                out.escape_step = k;
                out.witness = EscapeWitness::p_adic;
                out.witness_prime = fac.factors.empty() ? fac.cofactor : fac.factors.front().prime;
                return out;
            }
        }
        z = f.evaluate(z);
    }
    throw WorkLimitError("forward_orbit: step budget " + std::to_string(step_budget) + " exhausted from " + z0.str());
}

std::vector<CriticalOrbit> critical_orbits(const PolyQ& f) {
    CriticalPoints cps = critical_points(f);
    if (cps.has_irrational) throw UnsupportedError("irrational critical points: " + f.str());
    std::vector<CriticalOrbit> out;
    for (const auto& g : cps.rational) out.push_back(forward_orbit(f, g));
    return out;
}

bool is_pcf(const PolyQ& f) {
    for (const auto& o : critical_orbits(f))
        if (o.kind != OrbitKind::periodic) return false;
    return true;
}

std::optional<unsigned> unicritical_period(unsigned d, const Rational& c) {
    CriticalOrbit o = forward_orbit(unicritical(d, c), Rational(0));
    if (o.kind == OrbitKind::periodic && o.tail == 0) return static_cast<unsigned>(o.cycle);
    return std::nullopt;
}

namespace {

std::size_t checked_degree(const PolyQ& f, unsigned N, std::size_t cap) {
    std::size_t deg = 1;
    for (unsigned i = 0; i < N; ++i) {
        deg *= static_cast<std::size_t>(f.degree());
        if (deg > cap)
            throw WorkLimitError("degree of f^" + std::to_string(N) + " exceeds the cap " + std::to_string(cap));
    }
    return deg;
}

}  // namespace

bool preimage_separability(const PolyQ& f, const Rational& alpha, unsigned N, std::size_t degree_cap) {
    require_monic(f, 2, "preimage_separability");
    if (N < 1) throw InvalidArgument("preimage_separability: N must be >= 1");
    checked_degree(f, N, degree_cap);
    return is_separable(iterate(f, N) - PolyQ::constant(alpha));
}

SupportSet support_set(const PolyQ& f, const Rational& alpha, unsigned N_max, const SupportLimits& limits) {
    require_monic(f, 2, "support_set");
    if (N_max < 1) throw InvalidArgument("support_set: N_max must be >= 1");
    const std::vector<CriticalOrbit> orbits = critical_orbits(f);
    for (const auto& o : orbits) {
        if (o.kind == OrbitKind::escaped)
            throw WorkLimitError("post-critically infinite: the critical orbit of " + o.critical_point.str() +
                                 " never closes, so the orbit route does not terminate");
        if (o.contains(alpha))
            throw InvalidArgument("alpha = " + alpha.str() + " lies in the critical orbit of " +
                                  o.critical_point.str());
    }

    SupportSet out;
    auto add = [&](const Integer& n, const std::string& why) {
        if (n == 0 || abs(n) == 1) return;
        for (const auto& p : primes_of(n, limits.budget)) out.provenance.emplace(p, why);
    };
    add(Integer(f.degree()), "degree");
    const Rational df = discriminant(f);
    add(df.numerator(), "disc(f)");
    add(df.denominator(), "disc(f)");
    for (std::size_t i = 0; i < f.coefficients().size(); ++i)
        add(f.coefficients()[i].denominator(), "denominator of coefficient " + std::to_string(i));
    add(alpha.denominator(), "denominator of alpha");
    for (const auto& o : orbits) {
        const std::size_t distinct = o.tail + o.cycle;
        for (std::size_t n = 0; n < distinct; ++n) {
            const Rational diff = o.orbit_values[n] - alpha;
            const std::string why = "f^" + std::to_string(n) + "(" + o.critical_point.str() + ") - alpha";
            add(diff.numerator(), why);
            add(diff.denominator(), why);
        }
    }
    for (const auto& [p, why] : out.provenance) out.primes.push_back(p);

    std::size_t deg = 1;
    for (unsigned N = 1; N <= N_max; ++N) {
        deg *= static_cast<std::size_t>(f.degree());
        if (deg > limits.discriminant_cap) {
            out.truncated = true;
            break;
        }
        const Rational disc = discriminant(iterate(f, N) - PolyQ::constant(alpha));
        if (disc.is_zero())
            throw FalsificationError("disc(f^N - alpha) = 0 with alpha outside the critical orbits",
                                     "f = " + f.str() + ", alpha = " + alpha.str() + ", N = " + std::to_string(N));
        // strip the orbit-route primes first; anything left is outside S
        Integer rest = abs(disc.numerator());
        std::vector<Integer> support;
        for (const auto& p : out.primes) {
            if (mpz_remove(rest.get_mpz_t(), rest.get_mpz_t(), p.get_mpz_t()) > 0) support.push_back(p);
        }
        if (rest != 1) {
            out.resultant_within_orbit = false;
            IntegerFactorization fac = factor_integer(rest, limits.budget);
            for (const auto& pf : fac.factors) support.push_back(pf.prime);
            if (!fac.complete()) support.push_back(fac.cofactor);
            std::sort(support.begin(), support.end());
        }
        for (const auto& p : support) {
            if (out.first_seen.emplace(p, N).second) out.stabilized_at = N;
        }
        out.computed_N.push_back(N);
        out.numerator_support.push_back(std::move(support));
    }
    for (const auto& [p, n] : out.first_seen) out.resultant_primes.push_back(p);
    return out;
}

}  // namespace arboreal
