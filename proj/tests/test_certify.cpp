#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "arboreal/certificate_json.hpp"
#include "arboreal/certify.hpp"
#include "arboreal/dynamics.hpp"
#include "arboreal/errors.hpp"
#include "oracles.hpp"

using namespace arboreal;

namespace {

Rational R(long n, long d = 1) { return Rational(Integer(n), Integer(d)); }

/// e_N straight from the definition: Frobenius iteration on f^N - alpha mod q.
std::uint64_t direct_e(std::uint64_t q, std::uint64_t d, std::uint64_t c, std::uint64_t alpha, unsigned N) {
    const PolyFp f = PolyFp::monomial(q, 1, d) - PolyFp::constant(q, c);
    const PolyFp g = iterate(f, N) - PolyFp::constant(q, alpha);
    return oracle::splitting_degree(g.coefficients(), q);
}

}  // namespace

TEST_CASE("find_periodic_prime") {
    PeriodicReductionPrime r = find_periodic_prime(2, R(-1), R(0));
    CHECK(r.p == 5);
    CHECK(r.n0 == 3);
    CHECK(r.found_at_n == 3);
    CHECK_FALSE(r.periodic_shortcut);

    r = find_periodic_prime(2, R(1), R(3));
    CHECK(r.p == 5);
    CHECK(r.n0 == 2);
    CHECK(r.periodic_shortcut);

    CHECK_THROWS_AS(find_periodic_prime(2, R(-1), R(1)), InvalidArgument);
    // x^2 - 2: 0 -> -2 -> 2 -> 2 only ever shows the prime 2 | d
    CHECK_THROWS_AS(find_periodic_prime(2, R(2), R(1)), NotFoundError);
    PrimeSearchLimits narrow;
    narrow.n_search_max = 2;
    CHECK_THROWS_AS(find_periodic_prime(2, R(-1), R(0), narrow), NotFoundError);
}

TEST_CASE("periodic primes re-verify from scratch") {
    std::mt19937_64 rng(8);
    int found = 0;
    for (int t = 0; t < 60; ++t) {
        const unsigned d = 2 + static_cast<unsigned>(rng() % 3);
        const Rational c(Integer(static_cast<long>(rng() % 21) - 10), Integer(static_cast<long>(rng() % 3) + 1));
        const Rational alpha(Integer(static_cast<long>(rng() % 21) - 10), Integer(static_cast<long>(rng() % 2) + 1));
        if (alpha == -c) continue;
        PeriodicReductionPrime r;
        try {
            r = find_periodic_prime(d, c, alpha);
        } catch (const NotFoundError&) {
            continue;
        }
        ++found;
        const Integer p = integer_from_u64(r.p);
        CHECK(oracle::is_prime(r.p));
        CHECK(d % r.p != 0);
        CHECK(valuation(c, p) >= Valuation(0));
        CHECK(valuation(alpha + c, p) == Valuation(0));
        const auto n0 = oracle::period_of_zero(r.p, d, reduce_mod_p(c, r.p));
        REQUIRE(n0.has_value());
        CHECK(*n0 == r.n0);
        if (!r.periodic_shortcut) CHECK(r.found_at_n % r.n0 == 0);
    }
    CHECK(found > 20);
}

TEST_CASE("root-of-unity exponent") {
    const unsigned want[] = {1, 1, 1, 2, 2};
    for (unsigned N = 1; N <= 5; ++N) CHECK(root_of_unity_exponent(N, 2) == want[N - 1]);
    CHECK(root_of_unity_exponent(6, 3) == 2);
    CHECK(root_of_unity_exponent(12, 3) == 4);
}

TEST_CASE("verify_root_of_unity") {
    CertificateRow r = verify_root_of_unity(7, 2, 1, 3, 4);
    CHECK(r.m_N == 2);
    CHECK(r.e_N == direct_e(7, 2, 1, 3, 4));
    CHECK(r.ru_check);
    CHECK(r.bound == r.e_N);

    r = verify_root_of_unity(5, 2, 4, 0, 1);  // c = -1 mod 5
    CHECK(r.m_N == 1);
    CHECK(r.ru_check);
    r = verify_root_of_unity(5, 2, 4, 0, 6);
    CHECK(r.m_N == 2);
    CHECK(r.e_N == 16);
    CHECK(r.e_N == direct_e(5, 2, 4, 0, 6));

    CHECK_THROWS_AS(verify_root_of_unity(7, 7, 1, 3, 2), InvalidArgument);   // gcd(d, q) > 1
    CHECK_THROWS_AS(verify_root_of_unity(8, 3, 1, 3, 2), InvalidArgument);   // q not prime
    CHECK_THROWS_AS(verify_root_of_unity(7, 2, 1, 6, 2), InvalidArgument);   // alpha = -c
    CHECK_THROWS_AS(verify_root_of_unity(7, 2, 3, 1, 2), InvalidArgument);   // 0 not periodic
}

TEST_CASE("certificate rows match direct Frobenius iteration") {
    for (std::uint64_t q : {5, 7, 11, 13}) {
        for (std::uint64_t d : {2, 3}) {
            if (std::gcd(d, q) != 1) continue;
            for (std::uint64_t c = 0; c < q; ++c) {
                if (!oracle::period_of_zero(q, d, c)) continue;
                for (std::uint64_t alpha = 0; alpha < q; ++alpha) {
                    if ((alpha + c) % q == 0) continue;
                    unsigned n_max = 0;
                    for (std::uint64_t deg = d; deg <= 32; deg *= d) ++n_max;
                    const auto rows = root_of_unity_rows(q, d, c, alpha, n_max);
                    for (const auto& r : rows) {
                        CHECK(r.e_N == direct_e(q, d, c, alpha, r.N));
                        CHECK(r.order_bound <= integer_from_u64(r.e_N));
                        CHECK(integer_from_u64(r.e_N) % r.order_bound == 0);
                    }
                }
            }
        }
    }
}

TEST_CASE("degree lower bound table") {
    const PeriodicReductionPrime p5 = find_periodic_prime(2, R(-1), R(0));
    const LowerBoundCertificate cert = degree_lower_bound_table(2, R(-1), R(0), {p5}, 12);
    REQUIRE(cert.rows.size() == 12);
    const std::uint64_t frozen[] = {1, 2, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024};
    for (const auto& r : cert.rows) {
        CHECK(r.ru_check);
        CHECK(r.e_N == frozen[r.N - 1]);
        Integer dm;
        mpz_ui_pow_ui(dm.get_mpz_t(), 2, r.m_N);
        CHECK(integer_from_u64(r.e_N) >= mult_order(5, dm));
    }
    CHECK(cert.claim.n0_min == 3);
    CHECK(cert.claim.m0 == 2);
    CHECK(cert.claim.statement == "D_N >= 2^(floor(N/3) - 2)");
    CHECK_FALSE(cert.truncated_at.has_value());

    const PeriodicReductionPrime x2m1 = find_periodic_prime(2, R(1), R(3));
    const LowerBoundCertificate c2 = degree_lower_bound_table(2, R(1), R(3), {x2m1}, 3);
    CHECK(c2.rows.front().e_N == 1);
    CHECK(c2.rows.front().bound == 1);

    const LowerBoundCertificate cut = degree_lower_bound_table(2, R(-1), R(0), {p5}, 12, 256);
    CHECK(cut.rows.size() == 8);
    CHECK(cut.truncated_at == 8u);

    PeriodicReductionPrime wrong = p5;
    wrong.n0 = 2;
    CHECK_THROWS_AS(degree_lower_bound_table(2, R(-1), R(0), {wrong}, 3), InvalidArgument);
}

TEST_CASE("aggregate is the lcm over primes") {
    // x^2 + 1 = x^2 - (-1): 0 is periodic mod 5 (period 3) and mod 13 (0 -> 1 -> 2 -> 5 -> 26 = 0)
    const std::vector<PeriodicReductionPrime> primes = {{5, 3, 3, false}, {13, 4, 4, false}};
    const LowerBoundCertificate cert = degree_lower_bound_table(2, R(-1), R(0), primes, 8);
    REQUIRE(cert.rows.size() == 16);
    for (const auto& a : cert.aggregate) {
        std::uint64_t l = 1, mx = 0;
        for (const auto& r : cert.rows)
            if (r.N == a.N) {
                l = std::lcm(l, r.e_N);
                mx = std::max(mx, r.e_N);
                CHECK(a.lcm_e_N % r.e_N == 0);
            }
        CHECK(a.lcm_e_N == l);
        CHECK(mx <= a.lcm_e_N);
    }
    CHECK(cert.claim.n0_min == 3);
    CHECK(cert.claim.p == 5);
}

TEST_CASE("alpha = -c is certified through alpha' = 0") {
    CertifyOptions opt;
    opt.N_max = 6;
    const LowerBoundCertificate cert = certify_unicritical(2, R(-1), R(1), opt);
    CHECK(cert.shifted);
    CHECK(cert.alpha == R(1));
    CHECK(cert.alpha_used == R(0));
    CHECK(cert.rows.size() == 5);
    CHECK(cert.claim.N_offset == 1);
    CHECK(cert.claim.exponent_at(7) == 2 - 2);
    CHECK_THROWS_AS(certify_unicritical(2, R(0), R(0), opt), InvalidArgument);
}

TEST_CASE("certificate JSON round trip and tamper detection") {
    CertifyOptions opt;
    opt.N_max = 8;
    const std::string text = certificate_to_json(certify_unicritical(2, R(-1), R(0), opt));
    const CertificateCheck ok = verify_certificate_json(text);
    CHECK(ok.byte_identical);
    CHECK(ok.differences.empty());
    CHECK(certificate_to_json(certify_unicritical(2, R(-1), R(0), opt)) == text);

    std::string bad = text;
    const auto pos = bad.find("\"e_N\": 8");
    REQUIRE(pos != std::string::npos);
    bad.replace(pos, 8, "\"e_N\": 9");
    try {
        verify_certificate_json(bad);
        FAIL("tampered certificate verified");
    } catch (const FalsificationError& e) {
        CHECK(std::string(e.transcript()).find("/rows/4/e_N") != std::string::npos);
    }
    CHECK_THROWS_AS(verify_certificate_json("{not json"), InvalidArgument);
    CHECK_THROWS_AS(verify_certificate_json("{\"format\": \"other\"}"), InvalidArgument);
}

TEST_CASE("split scan") {
    const PolyQ f = unicritical(2, R(1));
    SplitScanReport r = split_scan(f, R(3), 2, 100, {2, 3});
    REQUIRE(r.least.has_value());
    CHECK(*r.least == 13);
    for (auto p : r.split_primes) CHECK(p % 12 == 1);
    // p = 1 mod 12 below 100
    CHECK(r.split_primes == std::vector<std::uint64_t>{13, 37, 61, 73, 97});

    r = split_scan(f, R(3), 1, 20, {2, 3});
    CHECK(r.split_primes == std::vector<std::uint64_t>{5, 7, 11, 13, 17, 19});

    r = split_scan(f, R(3), 8, 100, {2, 3});
    CHECK(r.split_primes.empty());
    CHECK_THROWS_AS(split_scan(f, R(3), 13, 100, {2, 3}), WorkLimitError);
}

TEST_CASE("serre degree bound") {
    CHECK(serre_degree_bound({2, 3}, 0) == 1);
    CHECK(serre_degree_bound({2, 3}, 100) == 15);
    // 14 (log 6 + 2 log 14) < 100 <= 15 (log 6 + 2 log 15)
    CHECK(14 * (std::log(6.0) + 2 * std::log(14.0)) < 100);
    CHECK(15 * (std::log(6.0) + 2 * std::log(15.0)) >= 100);
    CHECK(serre_degree_bound({2}, std::log(8.0)) == 2);
    CHECK_THROWS_AS(serre_degree_bound({2}, -1), InvalidArgument);
    CHECK_THROWS_AS(serre_degree_bound({}, 1), InvalidArgument);
}

TEST_CASE("serre degree bound is monotone") {
    std::uint64_t prev = 0;
    for (double L = 0; L <= 2000; L += 7.5) {
        const std::uint64_t n = serre_degree_bound({2, 3}, L);
        CHECK(n >= prev);
        prev = n;
    }
    for (double L : {10.0, 100.0, 1000.0}) {
        CHECK(serre_degree_bound({2, 3}, L) >= serre_degree_bound({5, 7}, L));
        CHECK(serre_degree_bound({5, 7}, L) >= serre_degree_bound({101, 103}, L));
    }
}

TEST_CASE("growth report") {
    GrowthReport g = grh_growth_report(unicritical(2, R(1)), R(3), 3, 1000);
    CHECK(std::string(GrowthReport::label) == "EMPIRICAL");
    CHECK(g.rows[1].least_split_prime == 13u);

    g = grh_growth_report(unicritical(2, R(0)), R(2), 1, 100);
    CHECK(g.S == std::vector<Integer>{2});
    CHECK(g.rows[0].least_split_prime == 7u);
    CHECK(g.rows[0].serre_bound == 2u);

    GrowthLimits tight;
    tight.discriminant_cap = 4;
    g = grh_growth_report(unicritical(2, R(1)), R(3), 4, 1000, tight);
    CHECK(g.rows[1].log_disc.has_value());
    CHECK_FALSE(g.rows[2].log_disc.has_value());
    CHECK(g.rows[2].scanned);
}
