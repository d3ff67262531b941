#pragma once

// Raw coefficient-vector kernels shared by PolyFp and the factorization code.

#include <cstdint>
#include <vector>

#include "arboreal/exact_arith.hpp"
#include "arboreal/poly.hpp"

namespace arboreal::detail {

using Raw = std::vector<std::uint64_t>;

constexpr std::uint64_t kLazyModulus = 1ULL << 32;

void trim(Raw& v);
std::uint64_t add_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p);
std::uint64_t sub_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p);
std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p);
/// Number of (p-1)^2 products that fit on top of a reduced residue.
std::uint64_t lazy_budget(std::uint64_t p);
Raw mul_raw(const Raw& a, const Raw& b, std::uint64_t p);
/// r mod b for nonzero b; fills quotient when given.
Raw rem_raw(Raw r, const Raw& b, std::uint64_t p, Raw* quotient = nullptr);

}  // namespace arboreal::detail

namespace arboreal {

struct PolyFpAccess {
    static detail::Raw& raw(PolyFp& f) { return f.coeffs_; }
    static const detail::Raw& raw(const PolyFp& f) { return f.coeffs_; }
};

}  // namespace arboreal
