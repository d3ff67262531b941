#pragma once

// Factorization over prime fields: squarefree decomposition, distinct-degree
// and equal-degree (Cantor-Zassenhaus) factorization, splitting degrees.

#include <cstdint>
#include <vector>

#include "arboreal/poly.hpp"

namespace arboreal {

constexpr std::uint64_t kDefaultSeed = 0x5eed2024ULL;

struct SquarefreeFactor {
    PolyFp factor;  // monic, squarefree
    unsigned multiplicity = 0;
};

/// g = lc(g) * prod factor^multiplicity, ascending multiplicity.
std::vector<SquarefreeFactor> squarefree_decomposition(const PolyFp& g);

struct DegreeBlock {
    unsigned degree = 0;
    PolyFp product;  // product of all monic irreducible factors of this degree
};

/// Input must be squarefree; a non-monic input is made monic first.
std::vector<DegreeBlock> distinct_degree_factorization(const PolyFp& g);

/// Splits a product of distinct irreducibles of degree k. Canonical order.
std::vector<PolyFp> equal_degree_factorization(const PolyFp& block, unsigned k, std::uint64_t seed = kDefaultSeed);

struct IrreducibleFactor {
    PolyFp factor;
    unsigned multiplicity = 0;
};

struct FactorizationFp {
    std::uint64_t modulus = 0;
    std::uint64_t unit = 0;
    std::vector<IrreducibleFactor> factors;  // canonical order

    PolyFp product() const;
};

FactorizationFp factor(const PolyFp& g, std::uint64_t seed = kDefaultSeed);

/// Monic irreducible factors of g without multiplicity, canonical order.
std::vector<PolyFp> distinct_irreducible_factors(const PolyFp& g, std::uint64_t seed = kDefaultSeed);

/// lcm of the degrees of the distinct irreducible factors; DDF only.
/// Throws WorkLimitError if the lcm leaves 64 bits.
std::uint64_t splitting_degree(const PolyFp& g);

/// deg g distinct roots in F_p.
bool splits_completely_distinct(const PolyFp& g);

/// Distinct roots in F_p, ascending.
std::vector<std::uint64_t> roots_in_fp(const PolyFp& g, std::uint64_t seed = kDefaultSeed);

/// Splitting degrees e_1, ..., e_n_max of f^N - alpha over F_q, f = x^d - c
/// iterated N times. Walks the preimage
/// tree one prime l | d at a time: x^l = beta + c' over F_q(beta) is decided
/// by an l-th power residue test, and children are split off with l-th roots.
/// Requires gcd(d, q) = 1.
std::vector<std::uint64_t> unicritical_splitting_degrees(std::uint64_t q, std::uint64_t d, std::uint64_t c,
                                                         std::uint64_t alpha, unsigned n_max,
                                                         std::uint64_t seed = kDefaultSeed);

/// Irreducibility by Rabin's test.
bool is_irreducible(const PolyFp& g);

}  // namespace arboreal
