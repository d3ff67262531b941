// One pass/fail line per acceptance criterion. Exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "arboreal/certificate_json.hpp"
#include "arboreal/certify.hpp"
#include "arboreal/dynamics.hpp"
#include "arboreal/errors.hpp"
#include "arboreal/ff_factor.hpp"
#include "cli.hpp"
#include "oracles.hpp"

using namespace arboreal;

namespace {

// wall-clock budgets in seconds
constexpr double kBudget[] = {0, 1, 600, 120, 60, 120, 60, 10, 30, 10};

struct Outcome {
    bool pass = false;
    std::string detail;
};

Rational R(long n, long d = 1) { return Rational(Integer(n), Integer(d)); }

PolyQ P(std::initializer_list<long> c) {
    std::vector<Rational> v;
    for (long x : c) v.emplace_back(x);
    return PolyQ(std::move(v));
}

Outcome period_anchors() {
    const auto p1 = unicritical_period(2, R(1));
    const auto p0 = unicritical_period(2, R(0));
    const CriticalOrbit o = forward_orbit(P({-2, 0, 1}), R(0));
    const bool ok = p1 == 2u && p0 == 1u && is_pcf(P({-2, 0, 1})) && o.tail == 2 && o.cycle == 1;
    return {ok, "period(x^2-1) = " + (p1 ? std::to_string(*p1) : "none") + ", period(x^2) = " +
                    (p0 ? std::to_string(*p0) : "none") + ", x^2-2 tail " + std::to_string(o.tail) + " cycle " +
                    std::to_string(o.cycle)};
}

Outcome desk_verification() {
    std::size_t instances = 0, rows = 0, failures = 0;
    for (std::uint64_t q : primes_up_to(31)) {
        for (std::uint64_t d : {2, 3, 4, 5}) {
            if (std::gcd(d, q) != 1) continue;
            unsigned n_max = 0;
            for (std::uint64_t deg = d; deg <= 2048; deg *= d) ++n_max;
            for (std::uint64_t c = 0; c < q; ++c) {
                if (!period_of_zero_mod(q, d, c)) continue;
                for (std::uint64_t alpha = 0; alpha < q; ++alpha) {
                    if ((alpha + c) % q == 0) continue;
                    ++instances;
                    try {
                        for (const auto& r : root_of_unity_rows(q, d, c, alpha, n_max)) {
                            ++rows;
                            if (!r.ru_check) ++failures;
                        }
                    } catch (const FalsificationError& e) {
                        ++failures;
                        std::cerr << e.what() << "\n" << e.transcript() << "\n";
                    }
                }
            }
        }
    }
    return {failures == 0 && instances > 0, std::to_string(instances) + " (q, d, c, alpha) instances, " +
                                                 std::to_string(rows) + " rows, " + std::to_string(failures) +
                                                 " failures"};
}

Outcome theorem_certificate() {
    const PeriodicReductionPrime p = find_periodic_prime(2, R(-1), R(0));
    if (p.p != 5 || p.n0 != 3) return {false, "periodic prime " + std::to_string(p.p) + ", n0 " + std::to_string(p.n0)};
    const LowerBoundCertificate cert = degree_lower_bound_table(2, R(-1), R(0), {p}, 12);
    // frozen after the first derivation; equal to direct DDF on x^2+1 iterates mod 5
    const std::uint64_t frozen[] = {1, 2, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024};
    bool ok = cert.rows.size() == 12;
    for (const auto& r : cert.rows) {
        Integer dm;
        mpz_ui_pow_ui(dm.get_mpz_t(), 2, r.m_N);
        ok = ok && r.ru_check && integer_from_u64(r.e_N) >= mult_order(5, dm) && r.e_N == frozen[r.N - 1];
    }
    const std::string base = std::to_string(cert.d) + "^(1/" + std::to_string(cert.claim.n0_min) + ")";
    ok = ok && base == "2^(1/3)";
    return {ok, "p = 5, n0 = 3, 12 rows, e_12 = " + std::to_string(cert.rows.back().e_N) + ", claim " +
                    cert.claim.statement + ", base " + base};
}

Outcome split_scan_anchor() {
    const PolyQ f = unicritical(2, R(1));
    SupportLimits orbit_only;
    orbit_only.discriminant_cap = 1;
    const std::vector<Integer> S = support_set(f, R(3), 1, orbit_only).primes;
    std::optional<std::uint64_t> least2;
    std::string counts;
    for (unsigned N = 1; N <= 4; ++N) {
        // a completely split prime below 2^N would throw FalsificationError
        const SplitScanReport r = split_scan(f, R(3), N, 100000, S);
        for (auto p : r.split_primes)
            if (p < r.degree) return {false, "p = " + std::to_string(p) + " splits below 2^N"};
        if (N == 2) least2 = r.least;
        counts += (N > 1 ? ", " : "") + std::to_string(r.split_primes.size());
    }
    return {least2 == 13u, "least split prime at N = 2: " + (least2 ? std::to_string(*least2) : "none") +
                               "; split counts N = 1..4: " + counts};
}

Outcome stabilization() {
    std::string detail;
    bool ok = true;
    const std::pair<PolyQ, Rational> cases[] = {{P({-1, 0, 1}), R(3)}, {P({0, 0, 1}), R(2)}};
    for (const auto& [f, alpha] : cases) {
        const SupportSet s = support_set(f, alpha, 64);
        const std::set<Integer> orbit(s.primes.begin(), s.primes.end());
        for (std::size_t i = 0; i < s.computed_N.size(); ++i) {
            if (s.computed_N[i] >= 2 && s.numerator_support[i] != s.numerator_support[1]) ok = false;
            for (const auto& p : s.numerator_support[i]) ok = ok && orbit.count(p);
        }
        std::string support;
        for (const auto& p : s.numerator_support.back()) support += (support.empty() ? "" : " ") + p.get_str();
        detail += (detail.empty() ? "" : "; ") + f.str() + " alpha " + alpha.str() + ": N = 1.." +
                  std::to_string(s.computed_N.back()) + ", support {" + support + "}";
    }
    return {ok, detail};
}

Outcome separability() {
    const std::vector<PolyQ> pcf = {P({-1, 0, 1}), P({0, 0, 1}), P({-2, 0, 1}), P({0, -3, 0, 1}), P({0, 0, 0, 1})};
    std::mt19937_64 rng(2024);
    std::size_t checked = 0;
    for (const auto& f : pcf) {
        std::vector<Rational> orbit;
        for (const auto& o : critical_orbits(f)) orbit.insert(orbit.end(), o.orbit_values.begin(), o.orbit_values.end());
        for (int k = 0; k < 50;) {
            const long num = static_cast<long>(rng() % 41) - 20;
            const long den = static_cast<long>(rng() % 20) + 1;
            const Rational alpha{Integer(num), Integer(den)};
            if (std::find(orbit.begin(), orbit.end(), alpha) != orbit.end()) continue;
            ++k;
            for (unsigned N = 1; std::pow(f.degree(), N) <= 256; ++N) {
                ++checked;
                if (!preimage_separability(f, alpha, N))
                    return {false, f.str() + "^" + std::to_string(N) + " - " + alpha.str() + " is inseparable"};
            }
        }
    }
    const bool boundary = !preimage_separability(P({0, 0, 1}), R(0), 1) && !preimage_separability(P({0, 0, 1}), R(0), 3);
    return {boundary, std::to_string(checked) + " separable (f, alpha, N) triples; (x^2, 0) inseparable: " +
                          (boundary ? "yes" : "no")};
}

Outcome order_constants() {
    std::mt19937_64 rng(77);
    const auto primes = primes_up_to(200);
    int pairs = 0;
    bool ok = true;
    while (pairs < 20) {
        const std::uint64_t d = 2 + rng() % 11;
        const std::uint64_t q = primes[rng() % primes.size()];
        if (std::gcd(d, q) != 1) continue;
        ++pairs;
        const unsigned m0 = order_constant(d, integer_from_u64(q)).m0;
        Integer ds = 1;
        for (unsigned s = 1; s <= 12; ++s) {
            ds *= d;
            Integer lhs = mult_order(integer_from_u64(q), ds);
            for (unsigned i = 0; i < m0; ++i) lhs *= d;
            ok = ok && lhs >= ds;
        }
    }
    const OrderConstant k = order_constant(2, 7);
    for (unsigned s = 2; s <= 12; ++s) {
        const std::uint64_t want = 2ULL << (s > 4 ? s - 4 : 0);
        ok = ok && mult_order(7, Integer(1) << s) == integer_from_u64(want) && oracle::order(7, 1ULL << s) == want;
    }
    return {ok && k.m0 == 3, "20 (d, q) pairs, s <= 12; m0(2, 7) = " + std::to_string(k.m0)};
}

Outcome oracle_equivalence() {
    std::mt19937_64 rng(8);
    const std::uint64_t ps[] = {2, 3, 5, 13};
    int mismatches = 0;
    for (int t = 0; t < 200; ++t) {
        const std::uint64_t p = ps[t % 4];
        std::vector<std::uint64_t> c(2 + rng() % 16);
        for (auto& x : c) x = rng() % p;
        c.back() = 1 + rng() % (p - 1);
        const PolyFp g(p, c);
        if (splitting_degree(g) != oracle::splitting_degree(g.coefficients(), p)) ++mismatches;
    }
    return {mismatches == 0, "200 random polynomials, " + std::to_string(mismatches) + " mismatches"};
}

Outcome determinism() {
    const std::vector<std::string> args = {"certify", "--unicritical", "2", "--c", "-1", "--alpha", "0", "--N-max", "12"};
    std::ostringstream a, b, err;
    if (cli::run(args, a, err) != 0 || cli::run(args, b, err) != 0) return {false, "certify failed: " + err.str()};
    if (a.str() != b.str()) return {false, "two certify runs differ"};

    const auto dir = std::filesystem::temp_directory_path() / "arboreal_acceptance";
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "cert.json") << a.str();
    std::ostringstream vout, verr;
    const int ok_code = cli::run({"verify", (dir / "cert.json").string()}, vout, verr);
    const bool identical = vout.str().find("\"byte_identical\": true") != std::string::npos;

    std::string bad = a.str();
    const auto pos = bad.find("\"e_N\": 64");
    bad.replace(pos, 9, "\"e_N\": 65");
    std::ofstream(dir / "bad.json") << bad;
    std::ostringstream bout, berr;
    const int bad_code = cli::run({"verify", (dir / "bad.json").string()}, bout, berr);
    return {ok_code == 0 && identical && bad_code == 4,
            "verify exit " + std::to_string(ok_code) + (identical ? " (byte-identical)" : " (not identical)") +
                ", mutated row exit " + std::to_string(bad_code)};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"period anchors", period_anchors},
        {"root-of-unity desk verification", desk_verification},
        {"x^2+1 degree certificate", theorem_certificate},
        {"completely split prime scan", split_scan_anchor},
        {"discriminant support stabilization", stabilization},
        {"preimage separability", separability},
        {"order constant", order_constants},
        {"splitting degree oracle", oracle_equivalence},
        {"certificate determinism and verification", determinism},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const FalsificationError& e) {
            o = {false, std::string("falsification: ") + e.what() + " | " + e.transcript()};
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = secs <= kBudget[i + 1];
        const bool pass = o.pass && in_time;
        if (!pass) ++failures;
        char timing[64];
        std::snprintf(timing, sizeof timing, "%.2f s of %.0f s", secs, kBudget[i + 1]);
        std::cout << "criterion " << i + 1 << " " << (pass ? "PASS" : "FAIL") << "  " << criteria[i].first << ": "
                  << o.detail << " [" << timing << (in_time ? "" : ", over budget") << "]" << std::endl;
    }
    return failures;
}
