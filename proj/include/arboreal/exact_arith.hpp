#pragma once

// Exact integers and rationals (GMP-backed), p-adic valuations, primality,
// integer factorization and multiplicative orders modulo prime powers.

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace arboreal {

using Integer = mpz_class;

Integer integer_from_u64(std::uint64_t v);
std::uint64_t integer_to_u64(const Integer& v);  // throws InvalidArgument if out of range
bool fits_u64(const Integer& v);

/// Exact fraction in lowest terms with positive denominator; zero is 0/1.
class Rational {
public:
    Rational() = default;
    Rational(long v) : q_(v) {}  // NOLINT(google-explicit-constructor)
    Rational(const Integer& v) : q_(v) {}  // NOLINT(google-explicit-constructor)
    Rational(const Integer& num, const Integer& den);

    /// Accepts "p", "-p", "p/q" with optional surrounding whitespace.
    static Rational parse(std::string_view text);

    const Integer& numerator() const { return q_.get_num(); }
    const Integer& denominator() const { return q_.get_den(); }

    bool is_zero() const { return sgn(q_) == 0; }
    bool is_integer() const { return q_.get_den() == 1; }
    int sign() const { return sgn(q_); }
    Rational abs() const;

    /// "p" for integers, "p/q" otherwise.
    std::string str() const;
    double to_double() const { return q_.get_d(); }

    Rational& operator+=(const Rational& o);
    Rational& operator-=(const Rational& o);
    Rational& operator*=(const Rational& o);
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    Rational operator-() const;

    friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        int c = cmp(a.q_, b.q_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    std::size_t hash() const;

private:
    explicit Rational(mpq_class q) : q_(std::move(q)) {}
    mpq_class q_;
};

struct RationalHash {
    std::size_t operator()(const Rational& r) const { return r.hash(); }
};

/// v_p of a rational: either a finite integer or +infinity (for zero).
class Valuation {
public:
    explicit Valuation(long v) : value_(v), infinite_(false) {}
    static Valuation infinity() { return Valuation(); }

    bool is_infinite() const { return infinite_; }
    long value() const;  // throws InvalidArgument on infinity

    friend bool operator==(const Valuation& a, const Valuation& b) {
        return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
    }
    friend std::strong_ordering operator<=>(const Valuation& a, const Valuation& b);
    friend Valuation operator+(const Valuation& a, const Valuation& b);

    std::string str() const;

private:
    Valuation() : value_(0), infinite_(true) {}
    long value_;
    bool infinite_;
};

Valuation valuation(const Rational& x, const Integer& p);
/// Exponent of p in a nonzero integer, without the primality check.
unsigned long valuation_unchecked(const Integer& x, const Integer& p);

enum class Primality { composite, prime, probable_prime };

/// Deterministic Miller-Rabin below 2^64. Above that: Baillie-PSW followed
/// by 64 random-base Miller-Rabin rounds (error < 2^-128), reported as
/// probable_prime.
Primality primality(const Integer& n);
bool is_prime(const Integer& n);
bool is_prime_u64(std::uint64_t n);

struct PrimeFactor {
    Integer prime;
    unsigned exponent = 0;
    bool probable = false;  // prime above 2^64, certified only probabilistically

    friend bool operator==(const PrimeFactor&, const PrimeFactor&) = default;
};

struct FactorBudget {
    std::uint64_t trial_bound = 1u << 16;
    /// Pollard-Brent iterations per composite split attempt.
    std::uint64_t rho_iterations = 1u << 22;
    /// Composites wider than this are left unfactored after trial division.
    std::size_t max_rho_bits = 320;
};

struct IntegerFactorization {
    std::vector<PrimeFactor> factors;  // ascending by prime
    Integer cofactor = 1;              // composite part left unsplit; 1 if complete

    bool complete() const { return cofactor == 1; }
    /// Product of prime^exponent times the cofactor.
    Integer product() const;
};

/// |n| = prod p^e * cofactor. Trial division, then Pollard-Brent rho.
IntegerFactorization factor_integer(const Integer& n, const FactorBudget& budget = {});

/// Smallest k >= 1 with q^k = 1 mod m, from the factored group exponent.
Integer mult_order(const Integer& q, const Integer& m);

struct OrderPrimeData {
    std::uint64_t prime = 0;           // l | d
    unsigned exponent_in_d = 0;        // l^a || d
    Integer base_order;                // ord(q mod l); ord(q mod 4) when l = 2
    unsigned stable_exponent = 0;      // t with ord(q mod l^k) = base * l^max(0, k - t)
    /// t - v_l(base): ord(q mod l^k) >= l^(k - deficit) for every k >= 1.
    unsigned deficit = 0;
};

/// m0 with mult_order(q, d^s) >= d^(s - m0) for all s >= 1.
struct OrderConstant {
    std::uint64_t d = 0;
    Integer q;
    unsigned m0 = 0;
    std::vector<OrderPrimeData> per_prime;

    /// ord(q mod d^s) reassembled from the per-prime formulas.
    Integer predicted_order(unsigned s) const;
};

OrderConstant order_constant(std::uint64_t d, const Integer& q);

Integer pow_mod(const Integer& base, const Integer& exp, const Integer& mod);
std::uint64_t pow_mod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t mod);
std::uint64_t mul_mod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t mod);

/// Primes <= limit, ascending.
std::vector<std::uint64_t> primes_up_to(std::uint64_t limit);

/// Distinct primes of the factorization of |n| (must factor completely).
std::vector<Integer> prime_support(const Integer& n, const FactorBudget& budget = {});

}  // namespace arboreal

template <>
struct std::hash<arboreal::Rational> {
    std::size_t operator()(const arboreal::Rational& r) const { return r.hash(); }
};
