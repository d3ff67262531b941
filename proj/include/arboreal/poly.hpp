#pragma once

// Dense univariate polynomials over Q and over prime fields F_p.
// Coefficients are stored lowest degree first with no trailing zeros.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "arboreal/exact_arith.hpp"

namespace arboreal {

class PolyQ {
public:
    PolyQ() = default;
    explicit PolyQ(std::vector<Rational> coefficients);

    static PolyQ x();
    static PolyQ constant(const Rational& c);
    /// c * x^degree
    static PolyQ monomial(const Rational& c, std::size_t degree);
    /// "[-1, 0, 1]" for x^2 - 1; entries are integers or p/q.
    static PolyQ parse(std::string_view text);

    std::string str() const;

    /// -1 for the zero polynomial.
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    bool is_monic() const { return !is_zero() && coeffs_.back() == Rational(1); }
    const std::vector<Rational>& coefficients() const { return coeffs_; }
    const Rational& coeff(std::size_t i) const;
    const Rational& leading() const;

    Rational evaluate(const Rational& at) const;

    PolyQ& operator+=(const PolyQ& o);
    PolyQ& operator-=(const PolyQ& o);
    friend PolyQ operator+(PolyQ a, const PolyQ& b) { return a += b; }
    friend PolyQ operator-(PolyQ a, const PolyQ& b) { return a -= b; }
    friend PolyQ operator*(const PolyQ& a, const PolyQ& b);
    friend PolyQ operator*(const PolyQ& a, const Rational& s);
    PolyQ operator-() const;

    friend bool operator==(const PolyQ&, const PolyQ&) = default;

private:
    void normalize();
    std::vector<Rational> coeffs_;
};

/// Residues are kept in [0, p). The modulus must be a prime below 2^63.
class PolyFp {
public:
    explicit PolyFp(std::uint64_t modulus);
    PolyFp(std::uint64_t modulus, std::vector<std::uint64_t> coefficients);
    /// Signed coefficients, reduced into [0, p).
    static PolyFp from_signed(std::uint64_t modulus, const std::vector<long long>& coefficients);

    static PolyFp x(std::uint64_t modulus);
    static PolyFp constant(std::uint64_t modulus, std::uint64_t c);
    static PolyFp monomial(std::uint64_t modulus, std::uint64_t c, std::size_t degree);

    std::string str() const;

    std::uint64_t modulus() const { return p_; }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    bool is_one() const { return coeffs_.size() == 1 && coeffs_[0] == 1; }
    bool is_monic() const { return !is_zero() && coeffs_.back() == 1; }
    const std::vector<std::uint64_t>& coefficients() const { return coeffs_; }
    std::uint64_t coeff(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : 0; }
    std::uint64_t leading() const;

    /// Divides by the leading coefficient; zero stays zero.
    PolyFp monic() const;
    std::uint64_t evaluate(std::uint64_t at) const;

    PolyFp& operator+=(const PolyFp& o);
    PolyFp& operator-=(const PolyFp& o);
    friend PolyFp operator+(PolyFp a, const PolyFp& b) { return a += b; }
    friend PolyFp operator-(PolyFp a, const PolyFp& b) { return a -= b; }
    friend PolyFp operator*(const PolyFp& a, const PolyFp& b);
    friend PolyFp operator*(const PolyFp& a, std::uint64_t s);
    PolyFp operator-() const;

    friend bool operator==(const PolyFp&, const PolyFp&) = default;
    /// Degree first, then coefficients from the constant term up.
    friend bool canonical_less(const PolyFp& a, const PolyFp& b);

private:
    friend struct PolyFpAccess;
    void normalize();
    std::uint64_t p_;
    std::vector<std::uint64_t> coeffs_;
};

bool canonical_less(const PolyFp& a, const PolyFp& b);

struct DivModFp {
    PolyFp quotient;
    PolyFp remainder;
};

DivModFp divmod(const PolyFp& a, const PolyFp& b);
PolyFp operator%(const PolyFp& a, const PolyFp& b);
/// Exact quotient; throws InvalidArgument if b does not divide a.
PolyFp exact_div(const PolyFp& a, const PolyFp& b);
/// Monic gcd (zero only when both inputs are zero).
PolyFp gcd(const PolyFp& a, const PolyFp& b);
/// base^exponent mod modulus, by repeated squaring.
PolyFp pow_mod(const PolyFp& base, const Integer& exponent, const PolyFp& modulus);

/// Monic gcd over Q.
PolyQ gcd(const PolyQ& a, const PolyQ& b);

PolyQ compose(const PolyQ& g, const PolyQ& h);
PolyFp compose(const PolyFp& g, const PolyFp& h);
PolyQ iterate(const PolyQ& f, unsigned n);
PolyFp iterate(const PolyFp& f, unsigned n);
PolyQ derivative(const PolyQ& g);
PolyFp derivative(const PolyFp& g);

/// Sylvester resultant, computed by the subresultant PRS over Z.
Rational resultant(const PolyQ& g, const PolyQ& h);
std::uint64_t resultant(const PolyFp& g, const PolyFp& h);
/// (-1)^(n(n-1)/2) Res(g, g') / lc(g), with g' taken at formal degree n - 1.
Rational discriminant(const PolyQ& g);
std::uint64_t discriminant(const PolyFp& g);

std::uint64_t reduce_mod_p(const Rational& x, std::uint64_t p);
/// Coefficientwise reduction; BadReduction names the first coefficient with v_p < 0.
PolyFp reduce_mod_p(const PolyQ& g, std::uint64_t p);

/// gcd(g, g') is constant.
bool is_separable(const PolyQ& g);
bool is_separable(const PolyFp& g);

}  // namespace arboreal
