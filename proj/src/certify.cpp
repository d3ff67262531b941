#include "arboreal/certify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_set>

#include "arboreal/dynamics.hpp"
#include "arboreal/errors.hpp"

namespace arboreal {

namespace {

constexpr std::uint64_t kMaxFieldPrime = 1ULL << 63;

std::uint64_t lcm_u64(std::uint64_t a, std::uint64_t b) {
    const std::uint64_t g = std::gcd(a, b);
    const unsigned __int128 l = static_cast<unsigned __int128>(a / g) * b;
    if (l > UINT64_MAX) throw WorkLimitError("lcm of splitting degrees exceeds 64 bits");
    return static_cast<std::uint64_t>(l);
}

Integer power(std::uint64_t base, unsigned e) {
    Integer out;
    mpz_ui_pow_ui(out.get_mpz_t(), base, e);
    return out;
}

/// p | d, v_p(c) < 0 or v_p(alpha + c) != 0 make p useless for the certificate.
bool admissible(const Integer& p, unsigned d, const Rational& c, const Rational& alpha) {
    if (p >= integer_from_u64(kMaxFieldPrime)) return false;  // beyond PolyFp
    if (d % p.get_ui() == 0) return false;
    if (const Valuation vc = valuation(c, p); !vc.is_infinite() && vc.value() < 0) return false;
    const Valuation v = valuation(alpha + c, p);
    return !v.is_infinite() && v.value() == 0;
}

std::string describe(unsigned d, const Rational& c, const Rational& alpha) {
    return "x^" + std::to_string(d) + " - (" + c.str() + "), alpha = " + alpha.str();
}

void check_prime_record(unsigned d, const Rational& c, const Rational& alpha, const PeriodicReductionPrime& r) {
    const Integer p = integer_from_u64(r.p);
    if (!is_prime_u64(r.p)) throw InvalidArgument(std::to_string(r.p) + " is not prime");
    if (!admissible(p, d, c, alpha))
        throw InvalidArgument("p = " + std::to_string(r.p) + " is not admissible for " + describe(d, c, alpha));
    const auto n0 = period_of_zero_mod(r.p, d, reduce_mod_p(c, r.p), r.n0);
    if (!n0 || *n0 != r.n0)
        throw InvalidArgument("0 does not have period " + std::to_string(r.n0) + " mod " + std::to_string(r.p));
}

AsymptoticClaim build_claim(unsigned d, const std::vector<PeriodicReductionPrime>& primes, unsigned offset) {
    AsymptoticClaim claim;
    claim.N_offset = offset;
    const auto best = std::min_element(primes.begin(), primes.end(), [](const auto& a, const auto& b) {
        return a.n0 != b.n0 ? a.n0 < b.n0 : a.p < b.p;
    });
    claim.n0_min = best->n0;
    claim.p = best->p;
    claim.m0 = order_constant(d, integer_from_u64(best->p)).m0;
    const std::string n = offset == 0 ? "N" : "(N - " + std::to_string(offset) + ")";
    claim.statement = "D_N >= " + std::to_string(d) + "^(floor(" + n + "/" + std::to_string(claim.n0_min) +
                      ") - " + std::to_string(claim.m0) + ")";
    return claim;
}

}  // namespace

long AsymptoticClaim::exponent_at(unsigned N) const {
    const long shifted = static_cast<long>(N) - static_cast<long>(N_offset);
    if (shifted < 0) return -static_cast<long>(m0);
    return shifted / static_cast<long>(n0_min) - static_cast<long>(m0);
}

std::optional<unsigned> period_of_zero_mod(std::uint64_t q, std::uint64_t d, std::uint64_t c,
                                           std::uint64_t max_steps) {
    if (!is_prime_u64(q)) throw InvalidArgument("period_of_zero_mod: " + std::to_string(q) + " is not prime");
    c %= q;
    std::uint64_t z = 0;
    for (std::uint64_t n = 1; n <= std::min(q, max_steps); ++n) {
        z = pow_mod_u64(z, d, q);
        z = z >= c ? z - c : z + q - c;
        if (z == 0) return static_cast<unsigned>(n);
    }
    return std::nullopt;
}

unsigned root_of_unity_exponent(unsigned N, unsigned n0) {
    if (n0 == 0) throw InvalidArgument("root_of_unity_exponent: n0 must be >= 1");
    const unsigned k = N / n0;
    return (k >= 1 ? k - 1 : 0) + 1;
}

PeriodicReductionPrime find_periodic_prime(unsigned d, const Rational& c, const Rational& alpha,
                                           const PrimeSearchLimits& limits) {
    if (d < 2) throw InvalidArgument("find_periodic_prime: d must be >= 2");
    if (alpha == -c) throw InvalidArgument("find_periodic_prime: alpha = -c is excluded (" + describe(d, c, alpha) + ")");

    if (const auto period = unicritical_period(d, c)) {
        // 0 periodic over Q: it stays periodic mod every prime of good reduction
        std::set<Integer> bad;
        auto exclude = [&](const Integer& n) {
            if (n != 0 && abs(n) != 1)
                for (const auto& p : prime_support(abs(n), limits.budget)) bad.insert(p);
        };
        exclude(Integer(d));
        exclude(c.numerator());
        exclude(c.denominator());
        exclude(alpha.denominator());
        const CriticalOrbit orbit = forward_orbit(unicritical(d, c), Rational(0));
        for (std::size_t n = 0; n < *period; ++n) {
            const Rational diff = orbit.orbit_values[n] - alpha;
            exclude(diff.numerator());
            exclude(diff.denominator());
        }
        for (std::uint64_t p = 2;; ++p) {
            if (!is_prime_u64(p)) continue;
            const Integer P = integer_from_u64(p);
            if (bad.count(P) || !admissible(P, d, c, alpha)) continue;
            const auto n0 = period_of_zero_mod(p, d, reduce_mod_p(c, p), *period);
            return {p, *n0, *period, true};
        }
    }

    const PolyQ f = unicritical(d, c);
    std::set<Integer> seen;
    std::unordered_set<Rational, RationalHash> visited{Rational(0)};
    Rational z(0);
    for (unsigned n = 1; n <= limits.n_search_max; ++n) {
        z = f.evaluate(z);
        if (!visited.insert(z).second)
            throw NotFoundError("find_periodic_prime: the orbit of 0 under " + f.str() +
                                " is preperiodic; no new primes after n = " + std::to_string(n - 1));
        const Integer num = abs(z.numerator());
        if (mpz_sizeinbase(num.get_mpz_t(), 2) > limits.max_numerator_bits)
            throw NotFoundError("find_periodic_prime: numerator of f^" + std::to_string(n) +
                                "(0) exceeds " + std::to_string(limits.max_numerator_bits) +
                                " bits; scanned n = 1.." + std::to_string(n - 1));
        if (num == 1) continue;
        const IntegerFactorization fac = factor_integer(num, limits.budget);
        for (const auto& pf : fac.factors) {
            if (!seen.insert(pf.prime).second) continue;
            if (!admissible(pf.prime, d, c, alpha)) continue;
            const std::uint64_t p = pf.prime.get_ui();
            const auto n0 = period_of_zero_mod(p, d, reduce_mod_p(c, p), n);
            if (!n0 || n % *n0 != 0)
                throw FalsificationError("p divides f^n(0) but 0 is not periodic mod p with period dividing n",
                                         describe(d, c, alpha) + ", p = " + std::to_string(p) +
                                             ", n = " + std::to_string(n));
            return {p, *n0, n, false};
        }
    }
    throw NotFoundError("find_periodic_prime: no admissible prime among numerators of f^n(0), n = 1.." +
                        std::to_string(limits.n_search_max) + " for " + describe(d, c, alpha));
}

std::vector<CertificateRow> root_of_unity_rows(std::uint64_t q, std::uint64_t d, std::uint64_t c,
                                               std::uint64_t alpha, unsigned N_max, std::uint64_t seed) {
    if (!is_prime_u64(q) || q >= kMaxFieldPrime)
        throw InvalidArgument("root_of_unity_rows: q = " + std::to_string(q) + " is not a prime below 2^63");
    if (d < 2 || std::gcd(d, q) != 1)
        throw InvalidArgument("root_of_unity_rows: need d >= 2 and gcd(d, q) = 1");
    if (c >= q || alpha >= q) throw InvalidArgument("root_of_unity_rows: c and alpha must be residues mod q");
    if (N_max < 1) throw InvalidArgument("root_of_unity_rows: N must be >= 1");
    const auto n0 = period_of_zero_mod(q, d, c);
    if (!n0)
        throw InvalidArgument("root_of_unity_rows: 0 is not periodic under x^" + std::to_string(d) + " - " +
                              std::to_string(c) + " mod " + std::to_string(q));
    if ((alpha + c) % q == 0) throw InvalidArgument("root_of_unity_rows: alpha = -c mod q");

    const std::vector<std::uint64_t> e = unicritical_splitting_degrees(q, d, c, alpha, N_max, seed);
    std::vector<CertificateRow> rows;
    for (unsigned N = 1; N <= N_max; ++N) {
        CertificateRow r;
        r.p = q;
        r.N = N;
        r.e_N = e[N - 1];
        r.m_N = root_of_unity_exponent(N, *n0);
        const Integer dm = power(d, r.m_N);
        r.ru_check = pow_mod(integer_from_u64(q), integer_from_u64(r.e_N), dm) == 1;
        r.bound = r.e_N;
        r.order_bound = mult_order(integer_from_u64(q), dm);
        if (!r.ru_check || r.order_bound > integer_from_u64(r.e_N)) {
            std::ostringstream t;
            t << "q = " << q << ", d = " << d << ", c = " << c << ", alpha = " << alpha << ", n0 = " << *n0
              << ", N = " << N << ", e_N = " << r.e_N << ", m_N = " << r.m_N << ", d^m_N = " << dm
              << ", q^e_N mod d^m_N = " << pow_mod(integer_from_u64(q), integer_from_u64(r.e_N), dm)
              << ", ord(q mod d^m_N) = " << r.order_bound;
            throw FalsificationError("d^m_N does not divide q^e_N - 1", t.str());
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

CertificateRow verify_root_of_unity(std::uint64_t q, std::uint64_t d, std::uint64_t c, std::uint64_t alpha,
                                    unsigned N, std::uint64_t seed) {
    return root_of_unity_rows(q, d, c, alpha, N, seed).back();
}

LowerBoundCertificate degree_lower_bound_table(unsigned d, const Rational& c, const Rational& alpha,
                                               const std::vector<PeriodicReductionPrime>& primes, unsigned N_max,
                                               std::size_t degree_cap, std::uint64_t seed) {
    if (d < 2) throw InvalidArgument("degree_lower_bound_table: d must be >= 2");
    if (alpha == -c) throw InvalidArgument("degree_lower_bound_table: alpha = -c is excluded");
    if (primes.empty()) throw InvalidArgument("degree_lower_bound_table: no primes");
    for (const auto& r : primes) check_prime_record(d, c, alpha, r);

    LowerBoundCertificate cert;
    cert.d = d;
    cert.c = c;
    cert.alpha = alpha;
    cert.alpha_used = alpha;
    cert.seed = seed;
    cert.N_max = N_max;
    cert.degree_cap = degree_cap;
    cert.primes = primes;
    std::sort(cert.primes.begin(), cert.primes.end(), [](const auto& a, const auto& b) { return a.p < b.p; });
    cert.primes.erase(std::unique(cert.primes.begin(), cert.primes.end(),
                                  [](const auto& a, const auto& b) { return a.p == b.p; }),
                      cert.primes.end());

    unsigned N_eff = 0;
    for (Integer deg = d; N_eff < N_max && deg <= degree_cap; deg *= d) ++N_eff;
    if (N_eff < N_max) cert.truncated_at = N_eff;

    std::vector<std::uint64_t> agg(N_eff, 1);
    for (const auto& pr : cert.primes) {
        if (N_eff == 0) break;
        auto rows = root_of_unity_rows(pr.p, d, reduce_mod_p(c, pr.p), reduce_mod_p(alpha, pr.p), N_eff, seed);
        for (auto& r : rows) {
            agg[r.N - 1] = lcm_u64(agg[r.N - 1], r.e_N);
            cert.rows.push_back(std::move(r));
        }
    }
    for (unsigned N = 1; N <= N_eff; ++N) cert.aggregate.push_back({N, agg[N - 1]});
    cert.claim = build_claim(d, cert.primes, 0);
    return cert;
}

LowerBoundCertificate certify_unicritical(unsigned d, const Rational& c, const Rational& alpha,
                                          const CertifyOptions& options) {
    if (alpha != -c) {
        const PeriodicReductionPrime p = find_periodic_prime(d, c, alpha, options.search);
        LowerBoundCertificate cert =
            degree_lower_bound_table(d, c, alpha, {p}, options.N_max, options.degree_cap, options.seed);
        cert.n_search_max = options.search.n_search_max;
        return cert;
    }
    if (c.is_zero()) throw InvalidArgument("(x^d, 0) is exceptional: the backward orbit of 0 is finite");
    // f^-1(-c) = {0}, so K_N(f, -c) = K_(N-1)(f, 0)
    const PeriodicReductionPrime p = find_periodic_prime(d, c, Rational(0), options.search);
    const unsigned N_inner = options.N_max > 0 ? options.N_max - 1 : 0;
    LowerBoundCertificate cert =
        degree_lower_bound_table(d, c, Rational(0), {p}, N_inner, options.degree_cap, options.seed);
    cert.alpha = alpha;
    cert.shifted = true;
    cert.N_max = options.N_max;
    cert.n_search_max = options.search.n_search_max;
    cert.claim = build_claim(d, cert.primes, 1);
    return cert;
}

SplitScanReport split_scan(const PolyQ& f, const Rational& alpha, unsigned N, std::uint64_t p_max,
                           const std::vector<Integer>& S, std::size_t degree_cap) {
    if (f.degree() < 2 || !f.is_monic()) throw InvalidArgument("split_scan: f must be monic of degree >= 2");
    if (N < 1) throw InvalidArgument("split_scan: N must be >= 1");
    Integer deg = 1;
    for (unsigned i = 0; i < N; ++i) deg *= f.degree();
    if (deg > degree_cap)
        throw WorkLimitError("split_scan: d^N = " + deg.get_str() + " exceeds the cap " + std::to_string(degree_cap));
    const PolyQ g = iterate(f, N) - PolyQ::constant(alpha);
    const std::set<Integer> excluded(S.begin(), S.end());

    SplitScanReport out;
    out.N = N;
    out.degree = deg.get_ui();
    out.p_max = p_max;
    for (std::uint64_t p : primes_up_to(p_max)) {
        if (excluded.count(integer_from_u64(p))) continue;
        PolyFp gp(p);
        try {
            gp = reduce_mod_p(g, p);
        } catch (const BadReduction&) {
            continue;  // not integral at p, so p belongs in S
        }
        ++out.primes_scanned;
        if (gp.degree() != g.degree() || !splits_completely_distinct(gp)) continue;
        if (p < out.degree)
            throw FalsificationError("a prime below d^N splits completely",
                                     "f = " + f.str() + ", alpha = " + alpha.str() + ", N = " +
                                         std::to_string(N) + ", p = " + std::to_string(p));
        out.split_primes.push_back(p);
    }
    if (!out.split_primes.empty()) out.least = out.split_primes.front();
    return out;
}

std::uint64_t serre_degree_bound(const std::vector<Integer>& S, double log_dE) {
    if (!(log_dE >= 0)) throw InvalidArgument("serre_degree_bound: log d_E must be >= 0");
    if (log_dE == 0) return 1;
    if (S.empty()) throw InvalidArgument("serre_degree_bound: S is empty but log d_E > 0");
    double c1 = 0;
    for (const auto& p : S) {
        if (!is_prime(p)) throw InvalidArgument("serre_degree_bound: " + p.get_str() + " is not prime");
        c1 += std::log(p.get_d());
    }
    const double c2 = static_cast<double>(S.size());
    auto ok = [&](std::uint64_t n) {
        const double x = static_cast<double>(n);
        return x * (c1 + c2 * std::log(x)) >= log_dE;
    };
    std::uint64_t hi = 1;
    while (!ok(hi)) hi *= 2;
    std::uint64_t lo = hi / 2;  // ok(lo) is false, or lo = 0
    while (hi - lo > 1) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        (ok(mid) ? hi : lo) = mid;
    }
    return hi;
}

GrowthReport grh_growth_report(const PolyQ& f, const Rational& alpha, unsigned N_max, std::uint64_t p_max,
                               const GrowthLimits& limits) {
    SupportLimits sl;
    sl.discriminant_cap = 1;  // orbit route only; discriminants are computed below
    GrowthReport out;
    out.S = support_set(f, alpha, 1, sl).primes;
    Integer deg = 1;
    for (unsigned N = 1; N <= N_max; ++N) {
        deg *= f.degree();
        GrowthRow row;
        row.N = N;
        if (deg <= limits.scan_degree_cap) {
            row.scanned = true;
            row.least_split_prime = split_scan(f, alpha, N, p_max, out.S, limits.scan_degree_cap).least;
        }
        if (deg <= limits.discriminant_cap) {
            const Rational disc = discriminant(iterate(f, N) - PolyQ::constant(alpha));
            const Integer num = abs(disc.numerator());
            long exp2 = 0;
            const double mant = mpz_get_d_2exp(&exp2, num.get_mpz_t());
            row.log_disc = std::log(mant) + static_cast<double>(exp2) * std::log(2.0);
            row.serre_bound = serre_degree_bound(out.S, *row.log_disc);
        }
        out.rows.push_back(row);
    }
    return out;
}

}  // namespace arboreal
