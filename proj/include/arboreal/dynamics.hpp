#pragma once

// Critical orbits of monic polynomials over Q, the PCF decision, preimage
// separability and the discriminant support set S(f, alpha).

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "arboreal/exact_arith.hpp"
#include "arboreal/poly.hpp"

namespace arboreal {

/// x^d - c
PolyQ unicritical(unsigned d, const Rational& c);

struct CriticalPoints {
    std::vector<Rational> rational;  // ascending
    bool has_irrational = false;     // f' has roots outside Q
};

CriticalPoints critical_points(const PolyQ& f);

enum class OrbitKind { periodic, escaped };
enum class EscapeWitness { archimedean, p_adic };

struct CriticalOrbit {
    Rational critical_point;
    /// z0, f(z0), f^2(z0), ... up to the first repeat or the escape step.
    std::vector<Rational> orbit_values;
    OrbitKind kind = OrbitKind::periodic;
    // periodic: orbit_values[tail + cycle] == orbit_values[tail], cycle minimal
    std::size_t tail = 0;
    std::size_t cycle = 0;
    // escaped: orbit_values[escape_step] is the witness value
    std::size_t escape_step = 0;
    EscapeWitness witness = EscapeWitness::archimedean;
    Integer witness_prime = 0;  // p_adic only
    Rational bound;             // archimedean escape radius B

    bool contains(const Rational& x) const;
};

/// Iterates until a repeat or a certified escape. The step budget only
/// guards against a bug; the escape rules make the loop finite.
CriticalOrbit forward_orbit(const PolyQ& f, const Rational& z0, std::size_t step_budget = 100000);

/// Throws UnsupportedError when f' has irrational roots.
bool is_pcf(const PolyQ& f);
std::vector<CriticalOrbit> critical_orbits(const PolyQ& f);

/// Minimal n0 >= 1 with f^n0(0) = 0 for f = x^d - c.
std::optional<unsigned> unicritical_period(unsigned d, const Rational& c);

/// f^N - alpha separable over Q. WorkLimitError when d^N > degree_cap.
bool preimage_separability(const PolyQ& f, const Rational& alpha, unsigned N, std::size_t degree_cap = 4096);

struct SupportSet {
    /// Orbit route: primes of d, disc(f), denominators of f and alpha, and
    /// of (f^n(gamma) - alpha) over all critical orbit values.
    std::vector<Integer> primes;
    std::map<Integer, std::string> provenance;
    /// Primes of numerator(disc(f^N - alpha)) over the computed N.
    std::vector<Integer> resultant_primes;
    std::map<Integer, unsigned> first_seen;  // prime -> first N on the resultant route
    std::vector<unsigned> computed_N;
    std::vector<std::vector<Integer>> numerator_support;  // per computed N, ascending
    unsigned stabilized_at = 0;  // last N adding a prime on the resultant route
    bool resultant_within_orbit = true;
    bool truncated = false;  // N_max cut by the discriminant cap
};

struct SupportLimits {
    /// Largest d^N whose discriminant is computed exactly.
    std::size_t discriminant_cap = 1024;
    FactorBudget budget;
};

/// Requires f PCF (else WorkLimitError: the orbit route would not end) with
/// rational critical points, and alpha outside every critical orbit.
SupportSet support_set(const PolyQ& f, const Rational& alpha, unsigned N_max, const SupportLimits& limits = {});

}  // namespace arboreal
