#pragma once

// Periodic-reduction primes, root-of-unity certificate rows, degree lower
// bound tables, completely split prime scans and the discriminant-degree
// inequality for extensions unramified outside S.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "arboreal/exact_arith.hpp"
#include "arboreal/ff_factor.hpp"
#include "arboreal/poly.hpp"

namespace arboreal {

struct PeriodicReductionPrime {
    std::uint64_t p = 0;
    unsigned n0 = 0;          // minimal period of 0 under x^d - c mod p
    unsigned found_at_n = 0;  // iterate whose numerator exposed p
    /// 0 is strictly periodic over Q and p was taken as the least good prime.
    bool periodic_shortcut = false;

    friend bool operator==(const PeriodicReductionPrime&, const PeriodicReductionPrime&) = default;
};

struct PrimeSearchLimits {
    unsigned n_search_max = 64;
    /// Numerators of f^n(0) wider than this end the search.
    std::size_t max_numerator_bits = 1u << 14;
    FactorBudget budget;
};

/// f = x^d - c. Requires alpha != -c. NotFoundError when the budget runs out.
PeriodicReductionPrime find_periodic_prime(unsigned d, const Rational& c, const Rational& alpha,
                                           const PrimeSearchLimits& limits = {});

/// Minimal n >= 1 with 0 -> ... -> 0 under x^d - c mod q, if 0 is periodic
/// with period at most max_steps.
std::optional<unsigned> period_of_zero_mod(std::uint64_t q, std::uint64_t d, std::uint64_t c,
                                           std::uint64_t max_steps = UINT64_MAX);

/// max(floor(N / n0) - 1, 0) + 1
unsigned root_of_unity_exponent(unsigned N, unsigned n0);

struct CertificateRow {
    std::uint64_t p = 0;
    unsigned N = 0;
    std::uint64_t e_N = 0;  // splitting degree of f^N - alpha over F_p
    unsigned m_N = 0;
    bool ru_check = false;  // d^m_N | p^e_N - 1
    std::uint64_t bound = 0;
    Integer order_bound;  // ord(p mod d^m_N), at most e_N

    friend bool operator==(const CertificateRow&, const CertificateRow&) = default;
};

/// Residues mod q. Throws InvalidArgument on a precondition failure and
/// FalsificationError if the divisibility fails.
CertificateRow verify_root_of_unity(std::uint64_t q, std::uint64_t d, std::uint64_t c, std::uint64_t alpha,
                                    unsigned N, std::uint64_t seed = kDefaultSeed);

/// Rows for N = 1..N_max at one prime, sharing a single preimage-tree walk.
std::vector<CertificateRow> root_of_unity_rows(std::uint64_t q, std::uint64_t d, std::uint64_t c,
                                               std::uint64_t alpha, unsigned N_max,
                                               std::uint64_t seed = kDefaultSeed);

struct AsymptoticClaim {
    unsigned n0_min = 0;
    std::uint64_t p = 0;  // prime realizing n0_min
    unsigned m0 = 0;      // ord(p mod d^s) >= d^(s - m0)
    unsigned N_offset = 0;  // 1 when alpha = -c was replaced by 0
    std::string statement;

    /// floor((N - N_offset) / n0_min) - m0, the exponent of d in the bound.
    long exponent_at(unsigned N) const;
};

struct AggregateRow {
    unsigned N = 0;
    std::uint64_t lcm_e_N = 0;
};

struct LowerBoundCertificate {
    unsigned d = 0;
    Rational c;
    Rational alpha;  // as requested
    /// alpha = -c: rows certify alpha' = 0, and D_N(f, -c) = D_(N-1)(f, 0).
    bool shifted = false;
    Rational alpha_used;
    std::uint64_t seed = kDefaultSeed;
    unsigned N_max = 0;
    std::size_t degree_cap = 0;
    unsigned n_search_max = 0;  // set by certify_unicritical
    std::vector<PeriodicReductionPrime> primes;
    std::vector<CertificateRow> rows;  // prime ascending, N ascending
    std::vector<AggregateRow> aggregate;
    AsymptoticClaim claim;
    /// Largest N with d^N <= degree_cap when that cut N_max short.
    std::optional<unsigned> truncated_at;
};

/// Rows N = 1..N_max (d^N <= degree_cap) for alpha != -c.
LowerBoundCertificate degree_lower_bound_table(unsigned d, const Rational& c, const Rational& alpha,
                                               const std::vector<PeriodicReductionPrime>& primes, unsigned N_max,
                                               std::size_t degree_cap = 4096, std::uint64_t seed = kDefaultSeed);

struct CertifyOptions {
    unsigned N_max = 12;
    std::size_t degree_cap = 4096;
    std::uint64_t seed = kDefaultSeed;
    PrimeSearchLimits search;
};

/// find_periodic_prime + degree_lower_bound_table, including the alpha = -c
/// reduction to alpha' = 0 (rows are then labelled by the original N).
LowerBoundCertificate certify_unicritical(unsigned d, const Rational& c, const Rational& alpha,
                                          const CertifyOptions& options = {});

struct SplitScanReport {
    unsigned N = 0;
    std::uint64_t degree = 0;  // d^N
    std::uint64_t p_max = 0;
    std::size_t primes_scanned = 0;
    std::vector<std::uint64_t> split_primes;
    std::optional<std::uint64_t> least;
};

/// Primes p <= p_max outside S where f^N - alpha has deg distinct roots mod p.
/// FalsificationError if one of them is below d^N.
SplitScanReport split_scan(const PolyQ& f, const Rational& alpha, unsigned N, std::uint64_t p_max,
                           const std::vector<Integer>& S, std::size_t degree_cap = 4096);

/// Least n with n (c1 + c2 log n) >= log_dE, c1 = sum of log p, c2 = #S.
std::uint64_t serre_degree_bound(const std::vector<Integer>& S, double log_dE);

struct GrowthRow {
    unsigned N = 0;
    std::optional<std::uint64_t> least_split_prime;
    bool scanned = false;
    std::optional<double> log_disc;  // log |numerator(disc(f^N - alpha))|
    std::optional<std::uint64_t> serre_bound;
};

struct GrowthReport {
    std::vector<Integer> S;
    std::vector<GrowthRow> rows;
    static constexpr const char* label = "EMPIRICAL";
};

struct GrowthLimits {
    std::size_t scan_degree_cap = 256;
    std::size_t discriminant_cap = 1024;
};

GrowthReport grh_growth_report(const PolyQ& f, const Rational& alpha, unsigned N_max, std::uint64_t p_max,
                               const GrowthLimits& limits = {});

}  // namespace arboreal
