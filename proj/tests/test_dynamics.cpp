#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "arboreal/dynamics.hpp"
#include "arboreal/errors.hpp"
#include "arboreal/ff_factor.hpp"

using namespace arboreal;

namespace {

PolyQ P(std::initializer_list<long> c) {
    std::vector<Rational> v;
    for (long x : c) v.emplace_back(x);
    return PolyQ(std::move(v));
}

Rational R(long n, long d = 1) { return Rational(Integer(n), Integer(d)); }

std::vector<std::string> values(const CriticalOrbit& o) {
    std::vector<std::string> out;
    for (const auto& v : o.orbit_values) out.push_back(v.str());
    return out;
}

}  // namespace

TEST_CASE("critical points") {
    CHECK(critical_points(P({-1, 0, 1})).rational == std::vector<Rational>{R(0)});
    const CriticalPoints cp = critical_points(P({0, -3, 0, 1}));
    CHECK(cp.rational == std::vector<Rational>{R(-1), R(1)});
    CHECK_FALSE(cp.has_irrational);
    CHECK(critical_points(P({0, -1, 0, 1})).has_irrational);
    CHECK_THROWS_AS(is_pcf(P({0, -1, 0, 1})), UnsupportedError);
}

TEST_CASE("forward orbits") {
    CriticalOrbit o = forward_orbit(P({-1, 0, 1}), R(0));
    CHECK(o.kind == OrbitKind::periodic);
    CHECK(o.tail == 0);
    CHECK(o.cycle == 2);
    CHECK(values(o) == std::vector<std::string>{"0", "-1", "0"});

    o = forward_orbit(P({-2, 0, 1}), R(0));
    CHECK(o.kind == OrbitKind::periodic);
    CHECK(o.tail == 2);
    CHECK(o.cycle == 1);
    CHECK(values(o) == std::vector<std::string>{"0", "-2", "2", "2"});

    o = forward_orbit(P({1, 0, 1}), R(0));
    CHECK(o.kind == OrbitKind::escaped);
    CHECK(o.witness == EscapeWitness::archimedean);
    CHECK(o.escape_step == 3);
    CHECK(o.bound == R(3));
    CHECK(values(o) == std::vector<std::string>{"0", "1", "2", "5"});

    // x^2 + 1/2: 0 -> 1/2 -> 3/4 -> ..., bounded in absolute value but 2-adically escaping
    o = forward_orbit(PolyQ(std::vector<Rational>{R(1, 2), R(0), R(1)}), R(0));
    CHECK(o.kind == OrbitKind::escaped);
    CHECK(o.witness == EscapeWitness::p_adic);
    CHECK(o.witness_prime == 2);
}

TEST_CASE("p-adic escape witnesses are genuine") {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 400; ++t) {
        std::vector<Rational> c;
        const int deg = 2 + static_cast<int>(rng() % 3);
        for (int i = 0; i < deg; ++i) {
            const long n = static_cast<long>(rng() % 101) - 50;
            const long d = static_cast<long>(rng() % 50) + 1;
            c.emplace_back(Integer(n), Integer(d));
        }
        c.emplace_back(1);
        const PolyQ f(c);
        const Rational z0(Integer(static_cast<long>(rng() % 21) - 10), Integer(static_cast<long>(rng() % 5) + 1));
        const CriticalOrbit o = forward_orbit(f, z0);
        if (o.kind == OrbitKind::periodic) {
            CHECK(o.orbit_values[o.tail + o.cycle] == o.orbit_values[o.tail]);
            continue;
        }
        const Rational z = o.orbit_values[o.escape_step];
        if (o.witness == EscapeWitness::archimedean) {
            CHECK(z.abs() > o.bound);
            // |z| keeps growing
            CHECK(f.evaluate(z).abs() > z.abs());
            continue;
        }
        const Valuation v = valuation(z, o.witness_prime);
        CHECK(v.value() < 0);
        // the valuation drops by the factor d on the next two steps
        const Rational z1 = f.evaluate(z);
        CHECK(valuation(z1, o.witness_prime) == Valuation(v.value() * deg));
    }
}

TEST_CASE("pcf and unicritical periods") {
    CHECK(is_pcf(P({-1, 0, 1})));
    CHECK_FALSE(is_pcf(P({1, 0, 1})));
    CHECK(is_pcf(P({0, 0, 1})));
    CHECK(is_pcf(P({-2, 0, 1})));
    CHECK(is_pcf(P({0, -3, 0, 1})));  // Chebyshev: 1 -> -2 -> -2, -1 -> 2 -> 2
    CHECK(unicritical_period(2, R(1)) == 2u);
    CHECK(unicritical_period(2, R(0)) == 1u);
    CHECK_FALSE(unicritical_period(2, R(-2)).has_value());
    CHECK_FALSE(unicritical_period(2, R(2)).has_value());
}

TEST_CASE("preimage separability") {
    CHECK_FALSE(preimage_separability(P({0, 0, 1}), R(0), 2));
    CHECK(preimage_separability(P({-1, 0, 1}), R(3), 2));
    CHECK(preimage_separability(P({-1, 0, 1}), R(3), 1));
    CHECK_THROWS_AS(preimage_separability(P({-1, 0, 1}), R(3), 13), WorkLimitError);
}

TEST_CASE("support set") {
    SupportSet s = support_set(P({-1, 0, 1}), R(3), 6);
    CHECK(s.primes == std::vector<Integer>{2, 3});
    CHECK(s.resultant_within_orbit);
    CHECK(s.resultant_primes == std::vector<Integer>{2, 3});
    CHECK(s.stabilized_at == 2);

    s = support_set(P({0, 0, 1}), R(2), 6);
    CHECK(s.primes == std::vector<Integer>{2});
    CHECK(s.resultant_primes == std::vector<Integer>{2});

    s = support_set(P({-1, 0, 1}), R(3, 5), 2);
    CHECK(std::count(s.primes.begin(), s.primes.end(), Integer(5)) == 1);

    CHECK_THROWS_AS(support_set(P({0, 0, 1}), R(0), 3), InvalidArgument);
    CHECK_THROWS_AS(support_set(P({1, 0, 1}), R(3), 3), WorkLimitError);
    CHECK(support_set(P({-1, 0, 1}), R(3), 12).truncated);
}

TEST_CASE("outside S the reduction of f^N - alpha is squarefree") {
    const std::vector<std::pair<PolyQ, Rational>> cases = {
        {P({-1, 0, 1}), R(3)}, {P({0, 0, 1}), R(2)}, {P({-2, 0, 1}), R(1)}, {P({0, -3, 0, 1}), R(5)}};
    for (const auto& [f, alpha] : cases) {
        const SupportSet s = support_set(f, alpha, 1);
        for (unsigned N = 1; std::pow(f.degree(), N) <= 256; ++N) {
            const PolyQ g = iterate(f, N) - PolyQ::constant(alpha);
            for (std::uint64_t p : primes_up_to(200)) {
                if (std::find(s.primes.begin(), s.primes.end(), integer_from_u64(p)) != s.primes.end()) continue;
                CHECK(is_separable(reduce_mod_p(g, p)));
            }
        }
    }
}
