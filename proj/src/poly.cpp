#include "arboreal/poly.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <sstream>

#include "arboreal/errors.hpp"
#include "fp_kernels.hpp"

namespace arboreal {

namespace {

using detail::Raw;
using detail::add_mod;
using detail::sub_mod;
using detail::inv_mod;
using detail::mul_raw;
using detail::rem_raw;
using detail::trim;

constexpr std::uint64_t kMaxModulus = 1ULL << 63;

void check_same_modulus(const PolyFp& a, const PolyFp& b) {
    if (a.modulus() != b.modulus())
        throw InvalidArgument("mixed moduli: " + std::to_string(a.modulus()) + " vs " + std::to_string(b.modulus()));
}

// ---------------------------------------------------------------------------
// Integer polynomials, used behind PolyQ

using ZPoly = std::vector<Integer>;

void trim(ZPoly& v) {
    while (!v.empty() && v.back() == 0) v.pop_back();
}

/// g = z / denominator with z integral.
struct Cleared {
    ZPoly z;
    Integer denominator;
};

Cleared clear_denominators(const std::vector<Rational>& c) {
    Cleared out;
    out.denominator = 1;
    for (const auto& r : c) {
        if (!r.is_integer()) out.denominator = lcm(out.denominator, r.denominator());
    }
    out.z.reserve(c.size());
    for (const auto& r : c) {
        if (out.denominator == 1) {
            out.z.push_back(r.numerator());
        } else {
            Integer scaled = out.denominator / r.denominator();
            out.z.push_back(r.numerator() * scaled);
        }
    }
    return out;
}

std::vector<Rational> from_cleared(const ZPoly& z, const Integer& denominator) {
    std::vector<Rational> out;
    out.reserve(z.size());
    for (const auto& c : z) out.push_back(denominator == 1 ? Rational(c) : Rational(c, denominator));
    return out;
}

ZPoly zmul(const ZPoly& a, const ZPoly& b) {
    if (a.empty() || b.empty()) return {};
    ZPoly out(a.size() + b.size() - 1);
    for (auto& v : out) v = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) {
            mpz_addmul(out[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
        }
    }
    trim(out);
    return out;
}

Integer content(const ZPoly& a) {
    Integer g = 0;
    for (const auto& c : a) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
        if (g == 1) break;
    }
    return g;
}

void divexact_all(ZPoly& a, const Integer& d) {
    if (d == 1) return;
    for (auto& c : a) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), d.get_mpz_t());
}

ZPoly primitive_part(ZPoly a) {
    Integer c = content(a);
    if (c == 0) return a;
    if (sgn(a.back()) < 0) c = -c;
    divexact_all(a, c);
    return a;
}

/// lc(B)^(deg A - deg B + 1) * A mod B.
ZPoly prem(ZPoly r, const ZPoly& b) {
    const std::size_t db = b.size() - 1;
    if (r.size() < b.size()) return r;
    const Integer& lb = b.back();
    long e = static_cast<long>(r.size() - b.size()) + 1;
    Integer t;
    while (!r.empty() && r.size() >= b.size()) {
        t = r.back();
        const std::size_t shift = r.size() - 1 - db;
        for (auto& c : r) c *= lb;
        for (std::size_t j = 0; j < db; ++j) mpz_submul(r[shift + j].get_mpz_t(), t.get_mpz_t(), b[j].get_mpz_t());
        r.pop_back();
        trim(r);
        --e;
    }
    if (e > 0) {
        Integer scale;
        mpz_pow_ui(scale.get_mpz_t(), lb.get_mpz_t(), static_cast<unsigned long>(e));
        for (auto& c : r) c *= scale;
    }
    return r;
}

Integer pow_int(const Integer& b, unsigned long e) {
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

/// Subresultant PRS resultant of nonzero integer polynomials.
Integer resultant_z(ZPoly a, ZPoly b) {
    int sign = 1;
    auto deg = [](const ZPoly& v) { return static_cast<long>(v.size()) - 1; };
    if (deg(a) < deg(b)) {
        std::swap(a, b);
        if ((deg(a) & 1) && (deg(b) & 1)) sign = -sign;
    }
    if (deg(b) == 0) return pow_int(b[0], static_cast<unsigned long>(deg(a))) * sign;

    Integer ca = content(a), cb = content(b);
    divexact_all(a, ca);
    divexact_all(b, cb);
    Integer t = pow_int(ca, static_cast<unsigned long>(deg(b))) * pow_int(cb, static_cast<unsigned long>(deg(a)));
    Integer g = 1, h = 1;
    for (;;) {
        long delta = deg(a) - deg(b);
        if ((deg(a) & 1) && (deg(b) & 1)) sign = -sign;
        ZPoly r = prem(a, b);
        if (r.empty()) return 0;
        a = std::move(b);
        Integer divisor = g * pow_int(h, static_cast<unsigned long>(delta));
        divexact_all(r, divisor);
        b = std::move(r);
        g = a.back();
        if (delta == 1) {
            h = g;
        } else if (delta > 1) {
            Integer num = pow_int(g, static_cast<unsigned long>(delta));
            Integer den = pow_int(h, static_cast<unsigned long>(delta - 1));
            mpz_divexact(h.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        }
        if (deg(b) == 0) {
            long da = deg(a);
            Integer num = pow_int(b.back(), static_cast<unsigned long>(da));
            if (da > 1) {
                Integer den = pow_int(h, static_cast<unsigned long>(da - 1));
                mpz_divexact(num.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
            }
            return num * t * sign;
        }
    }
}

ZPoly zgcd_primitive(ZPoly a, ZPoly b) {
    a = primitive_part(std::move(a));
    b = primitive_part(std::move(b));
    if (a.size() < b.size()) std::swap(a, b);
    while (!b.empty()) {
        ZPoly r = prem(a, b);
        a = std::move(b);
        b = primitive_part(std::move(r));
    }
    return a;
}

// Primes just below 2^31 for separability screening.
constexpr std::uint64_t kScreenPrimes[] = {2147483647ULL, 2147483629ULL, 2147483587ULL, 2147483579ULL};

}  // namespace

// ---------------------------------------------------------------------------
// PolyQ

PolyQ::PolyQ(std::vector<Rational> coefficients) : coeffs_(std::move(coefficients)) { normalize(); }

void PolyQ::normalize() {
    while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

PolyQ PolyQ::x() { return PolyQ({Rational(0), Rational(1)}); }
PolyQ PolyQ::constant(const Rational& c) { return PolyQ({c}); }
PolyQ PolyQ::monomial(const Rational& c, std::size_t degree) {
    std::vector<Rational> v(degree + 1, Rational(0));
    v[degree] = c;
    return PolyQ(std::move(v));
}

PolyQ PolyQ::parse(std::string_view text) {
    std::string s(text);
    auto first = s.find_first_not_of(" \t\r\n");
    auto last = s.find_last_not_of(" \t\r\n");
    if (first == std::string::npos) throw InvalidArgument("empty polynomial literal");
    s = s.substr(first, last - first + 1);
    if (s.front() == '[') {
        if (s.back() != ']') throw InvalidArgument("polynomial literal missing ']': " + std::string(text));
        s = s.substr(1, s.size() - 2);
    }
    std::vector<Rational> coeffs;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::erase_if(item, [](char ch) { return ch == '"' || ch == '\''; });
        coeffs.push_back(Rational::parse(item));
    }
    if (coeffs.empty()) throw InvalidArgument("polynomial literal has no coefficients: " + std::string(text));
    return PolyQ(std::move(coeffs));
}

std::string PolyQ::str() const {
    std::string out = "[";
    if (coeffs_.empty()) out += "0";
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (i) out += ", ";
        out += coeffs_[i].str();
    }
    return out + "]";
}

const Rational& PolyQ::coeff(std::size_t i) const {
    static const Rational zero(0);
    return i < coeffs_.size() ? coeffs_[i] : zero;
}

const Rational& PolyQ::leading() const {
    if (coeffs_.empty()) throw InvalidArgument("leading coefficient of the zero polynomial");
    return coeffs_.back();
}

Rational PolyQ::evaluate(const Rational& at) const {
    Rational acc(0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * at + *it;
    return acc;
}

PolyQ& PolyQ::operator+=(const PolyQ& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), Rational(0));
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    normalize();
    return *this;
}

PolyQ& PolyQ::operator-=(const PolyQ& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), Rational(0));
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    normalize();
    return *this;
}

PolyQ PolyQ::operator-() const {
    PolyQ out = *this;
    for (auto& c : out.coeffs_) c = -c;
    return out;
}

PolyQ operator*(const PolyQ& a, const PolyQ& b) {
    if (a.is_zero() || b.is_zero()) return PolyQ();
    Cleared ca = clear_denominators(a.coeffs_);
    Cleared cb = clear_denominators(b.coeffs_);
    return PolyQ(from_cleared(zmul(ca.z, cb.z), ca.denominator * cb.denominator));
}

PolyQ operator*(const PolyQ& a, const Rational& s) {
    if (s.is_zero()) return PolyQ();
    PolyQ out = a;
    for (auto& c : out.coeffs_) c *= s;
    return out;
}

// ---------------------------------------------------------------------------
// PolyFp

PolyFp::PolyFp(std::uint64_t modulus) : p_(modulus) {
    if (modulus < 2 || modulus >= kMaxModulus) throw InvalidArgument("PolyFp modulus out of range: " + std::to_string(modulus));
}

PolyFp::PolyFp(std::uint64_t modulus, std::vector<std::uint64_t> coefficients) : PolyFp(modulus) {
    coeffs_ = std::move(coefficients);
    for (auto& c : coeffs_) c %= p_;
    normalize();
}

PolyFp PolyFp::from_signed(std::uint64_t modulus, const std::vector<long long>& coefficients) {
    PolyFp out(modulus);
    const auto m = static_cast<long long>(modulus < (1ULL << 62) ? modulus : 0);
    for (long long c : coefficients) {
        if (m != 0) {
            long long r = c % m;
            out.coeffs_.push_back(static_cast<std::uint64_t>(r < 0 ? r + m : r));
        } else {
            out.coeffs_.push_back(c >= 0 ? static_cast<std::uint64_t>(c) % modulus
                                         : modulus - (static_cast<std::uint64_t>(-(c + 1)) + 1) % modulus);
        }
    }
    for (auto& c : out.coeffs_) c %= modulus;
    out.normalize();
    return out;
}

PolyFp PolyFp::x(std::uint64_t modulus) { return PolyFp(modulus, {0, 1}); }
PolyFp PolyFp::constant(std::uint64_t modulus, std::uint64_t c) { return PolyFp(modulus, {c}); }
PolyFp PolyFp::monomial(std::uint64_t modulus, std::uint64_t c, std::size_t degree) {
    std::vector<std::uint64_t> v(degree + 1, 0);
    v[degree] = c;
    return PolyFp(modulus, std::move(v));
}

void PolyFp::normalize() { trim(coeffs_); }

std::string PolyFp::str() const {
    std::string out = "[";
    if (coeffs_.empty()) out += "0";
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (i) out += ", ";
        out += std::to_string(coeffs_[i]);
    }
    return out + "] mod " + std::to_string(p_);
}

std::uint64_t PolyFp::leading() const {
    if (coeffs_.empty()) throw InvalidArgument("leading coefficient of the zero polynomial");
    return coeffs_.back();
}

PolyFp PolyFp::monic() const {
    if (is_zero() || is_monic()) return *this;
    std::uint64_t inv = inv_mod(leading(), p_);
    return *this * inv;
}

std::uint64_t PolyFp::evaluate(std::uint64_t at) const {
    at %= p_;
    std::uint64_t acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = add_mod(mul_mod_u64(acc, at, p_), *it, p_);
    return acc;
}

PolyFp& PolyFp::operator+=(const PolyFp& o) {
    check_same_modulus(*this, o);
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), 0);
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] = add_mod(coeffs_[i], o.coeffs_[i], p_);
    normalize();
    return *this;
}

PolyFp& PolyFp::operator-=(const PolyFp& o) {
    check_same_modulus(*this, o);
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), 0);
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] = sub_mod(coeffs_[i], o.coeffs_[i], p_);
    normalize();
    return *this;
}

PolyFp PolyFp::operator-() const {
    PolyFp out = *this;
    for (auto& c : out.coeffs_) c = c == 0 ? 0 : p_ - c;
    return out;
}

PolyFp operator*(const PolyFp& a, const PolyFp& b) {
    check_same_modulus(a, b);
    PolyFp out(a.p_);
    out.coeffs_ = mul_raw(a.coeffs_, b.coeffs_, a.p_);
    return out;
}

PolyFp operator*(const PolyFp& a, std::uint64_t s) {
    PolyFp out(a.p_);
    s %= a.p_;
    out.coeffs_.reserve(a.coeffs_.size());
    for (auto c : a.coeffs_) out.coeffs_.push_back(mul_mod_u64(c, s, a.p_));
    out.normalize();
    return out;
}

bool canonical_less(const PolyFp& a, const PolyFp& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    return a.coeffs_ < b.coeffs_;
}

DivModFp divmod(const PolyFp& a, const PolyFp& b) {
    check_same_modulus(a, b);
    DivModFp out{PolyFp(a.modulus()), PolyFp(a.modulus())};
    Raw q;
    PolyFpAccess::raw(out.remainder) = rem_raw(PolyFpAccess::raw(a), PolyFpAccess::raw(b), a.modulus(), &q);
    PolyFpAccess::raw(out.quotient) = std::move(q);
    return out;
}

PolyFp operator%(const PolyFp& a, const PolyFp& b) {
    check_same_modulus(a, b);
    PolyFp out(a.modulus());
    PolyFpAccess::raw(out) = rem_raw(PolyFpAccess::raw(a), PolyFpAccess::raw(b), a.modulus());
    return out;
}

PolyFp exact_div(const PolyFp& a, const PolyFp& b) {
    DivModFp qr = divmod(a, b);
    if (!qr.remainder.is_zero()) throw InvalidArgument("exact_div: divisor does not divide dividend");
    return qr.quotient;
}

PolyFp gcd(const PolyFp& a, const PolyFp& b) {
    check_same_modulus(a, b);
    const std::uint64_t p = a.modulus();
    Raw x = PolyFpAccess::raw(a), y = PolyFpAccess::raw(b);
    while (!y.empty()) {
        Raw r = rem_raw(std::move(x), y, p);
        x = std::move(y);
        y = std::move(r);
    }
    PolyFp out(p);
    PolyFpAccess::raw(out) = std::move(x);
    return out.monic();
}

PolyFp pow_mod(const PolyFp& base, const Integer& exponent, const PolyFp& modulus) {
    check_same_modulus(base, modulus);
    if (sgn(exponent) < 0) throw InvalidArgument("pow_mod: negative exponent");
    const std::uint64_t p = base.modulus();
    const Raw& m = PolyFpAccess::raw(modulus);
    Raw result = rem_raw(Raw{1}, m, p);
    Raw b = rem_raw(PolyFpAccess::raw(base), m, p);
    const std::size_t bits = mpz_sizeinbase(exponent.get_mpz_t(), 2);
    if (sgn(exponent) != 0) {
        for (std::size_t i = bits; i-- > 0;) {
            result = rem_raw(mul_raw(result, result, p), m, p);
            if (mpz_tstbit(exponent.get_mpz_t(), i)) result = rem_raw(mul_raw(result, b, p), m, p);
        }
    }
    PolyFp out(p);
    PolyFpAccess::raw(out) = std::move(result);
    return out;
}

// ---------------------------------------------------------------------------
// Composition and calculus

PolyQ compose(const PolyQ& g, const PolyQ& h) {
    if (g.is_zero()) return PolyQ();
    const auto& gc = g.coefficients();
    // Horner on integer-scaled h: g(h) = sum g_i (H/D)^i.
    Cleared ch = clear_denominators(h.coefficients());
    ZPoly acc{};
    Integer acc_den = 1;
    const std::size_t n = gc.size() - 1;
    // acc / acc_den holds the partial Horner value.
    acc = {gc[n].numerator()};
    acc_den = gc[n].denominator();
    for (std::size_t i = n; i-- > 0;) {
        acc = zmul(acc, ch.z);
        acc_den *= ch.denominator;
        // acc/acc_den + gc[i]
        const Rational& gi = gc[i];
        if (!gi.is_zero()) {
            Integer new_den = lcm(acc_den, gi.denominator());
            Integer scale = new_den / acc_den;
            if (scale != 1)
                for (auto& c : acc) c *= scale;
            if (acc.empty()) acc.push_back(0);
            acc[0] += gi.numerator() * (new_den / gi.denominator());
            acc_den = new_den;
        }
        trim(acc);
        if (acc_den != 1) {
            Integer common = gcd(content(acc), acc_den);
            if (common > 1) {
                divexact_all(acc, common);
                mpz_divexact(acc_den.get_mpz_t(), acc_den.get_mpz_t(), common.get_mpz_t());
            }
        }
    }
    return PolyQ(from_cleared(acc, acc_den));
}

PolyFp compose(const PolyFp& g, const PolyFp& h) {
    check_same_modulus(g, h);
    PolyFp acc(g.modulus());
    const auto& gc = g.coefficients();
    for (std::size_t i = gc.size(); i-- > 0;) {
        acc = acc * h + PolyFp::constant(g.modulus(), gc[i]);
    }
    return acc;
}

PolyQ iterate(const PolyQ& f, unsigned n) {
    PolyQ acc = PolyQ::x();
    for (unsigned i = 0; i < n; ++i) acc = compose(f, acc);
    return acc;
}

PolyFp iterate(const PolyFp& f, unsigned n) {
    PolyFp acc = PolyFp::x(f.modulus());
    for (unsigned i = 0; i < n; ++i) acc = compose(f, acc);
    return acc;
}

PolyQ derivative(const PolyQ& g) {
    const auto& c = g.coefficients();
    if (c.size() <= 1) return PolyQ();
    std::vector<Rational> d;
    d.reserve(c.size() - 1);
    for (std::size_t i = 1; i < c.size(); ++i) d.push_back(c[i] * Rational(static_cast<long>(i)));
    return PolyQ(std::move(d));
}

PolyFp derivative(const PolyFp& g) {
    const auto& c = g.coefficients();
    const std::uint64_t p = g.modulus();
    if (c.size() <= 1) return PolyFp(p);
    std::vector<std::uint64_t> d;
    d.reserve(c.size() - 1);
    for (std::size_t i = 1; i < c.size(); ++i) d.push_back(mul_mod_u64(c[i], i % p, p));
    return PolyFp(p, std::move(d));
}

// ---------------------------------------------------------------------------
// Resultants and discriminants

Rational resultant(const PolyQ& g, const PolyQ& h) {
    if (g.is_zero() && h.is_zero()) throw InvalidArgument("resultant: both polynomials are zero");
    if (g.is_zero() || h.is_zero()) return Rational(0);
    Cleared cg = clear_denominators(g.coefficients());
    Cleared ch = clear_denominators(h.coefficients());
    Integer r = resultant_z(cg.z, ch.z);
    // Res(G/a, H/b) = Res(G, H) / (a^deg h * b^deg g)
    Integer den = pow_int(cg.denominator, static_cast<unsigned long>(h.degree())) *
                  pow_int(ch.denominator, static_cast<unsigned long>(g.degree()));
    return Rational(r, den);
}

std::uint64_t resultant(const PolyFp& g, const PolyFp& h) {
    check_same_modulus(g, h);
    if (g.is_zero() && h.is_zero()) throw InvalidArgument("resultant: both polynomials are zero");
    if (g.is_zero() || h.is_zero()) return 0;
    const std::uint64_t p = g.modulus();
    Raw a = PolyFpAccess::raw(g), b = PolyFpAccess::raw(h);
    std::uint64_t acc = 1;
    auto deg = [](const Raw& v) { return static_cast<long>(v.size()) - 1; };
    auto negate_if = [&](bool odd) {
        if (odd && acc != 0) acc = p - acc;
    };
    if (deg(a) < deg(b)) {
        negate_if((deg(a) & 1) && (deg(b) & 1));
        std::swap(a, b);
    }
    while (deg(b) > 0) {
        Raw r = rem_raw(a, b, p);
        if (r.empty()) return 0;
        // Res(A, B) = (-1)^(deg A deg B) lc(B)^(deg A - deg R) Res(B, R)
        negate_if((deg(a) & 1) && (deg(b) & 1));
        acc = mul_mod_u64(acc, pow_mod_u64(b.back(), static_cast<std::uint64_t>(deg(a) - deg(r)), p), p);
        a = std::move(b);
        b = std::move(r);
    }
    return mul_mod_u64(acc, pow_mod_u64(b[0], static_cast<std::uint64_t>(deg(a)), p), p);
}

Rational discriminant(const PolyQ& g) {
    const int n = g.degree();
    if (n < 1) throw InvalidArgument("discriminant of a constant polynomial");
    Rational res = resultant(g, derivative(g));
    Rational out = res / g.leading();
    if ((static_cast<long>(n) * (n - 1) / 2) % 2 != 0) out = -out;
    return out;
}

std::uint64_t discriminant(const PolyFp& g) {
    const int n = g.degree();
    if (n < 1) throw InvalidArgument("discriminant of a constant polynomial");
    const std::uint64_t p = g.modulus();
    PolyFp dg = derivative(g);
    if (dg.is_zero()) return 0;
    std::uint64_t res = resultant(g, dg);
    // Sylvester matrix uses the formal degree n - 1 of g'.
    res = mul_mod_u64(res, pow_mod_u64(g.leading(), static_cast<std::uint64_t>(n - 1 - dg.degree()), p), p);
    std::uint64_t out = mul_mod_u64(res, inv_mod(g.leading(), p), p);
    if ((static_cast<long>(n) * (n - 1) / 2) % 2 != 0 && out != 0) out = p - out;
    return out;
}

// ---------------------------------------------------------------------------
// Reduction and separability

std::uint64_t reduce_mod_p(const Rational& x, std::uint64_t p) {
    Integer pz = integer_from_u64(p);
    if (mpz_divisible_p(x.denominator().get_mpz_t(), pz.get_mpz_t()))
        throw InvalidArgument("reduce_mod_p: " + x.str() + " is not " + std::to_string(p) + "-integral");
    Integer num = x.numerator() % pz;
    if (num < 0) num += pz;
    Integer den = x.denominator() % pz;
    std::uint64_t n = integer_to_u64(num), d = integer_to_u64(den);
    return d == 1 ? n : mul_mod_u64(n, inv_mod(d, p), p);
}

PolyFp reduce_mod_p(const PolyQ& g, std::uint64_t p) {
    if (!is_prime_u64(p)) throw InvalidArgument("reduce_mod_p: " + std::to_string(p) + " is not prime");
    PolyFp out(p);
    std::vector<std::uint64_t> c;
    c.reserve(g.coefficients().size());
    Integer pz = integer_from_u64(p);
    for (std::size_t i = 0; i < g.coefficients().size(); ++i) {
        const Rational& r = g.coefficients()[i];
        if (mpz_divisible_p(r.denominator().get_mpz_t(), pz.get_mpz_t()))
            throw BadReduction(i, "bad reduction at " + std::to_string(p) + ": coefficient of x^" + std::to_string(i) +
                                      " is " + r.str());
        c.push_back(reduce_mod_p(r, p));
    }
    return PolyFp(p, std::move(c));
}

bool is_separable(const PolyFp& g) {
    if (g.degree() < 1) throw InvalidArgument("is_separable: constant polynomial");
    return gcd(g, derivative(g)).degree() == 0;
}

bool is_separable(const PolyQ& g) {
    if (g.degree() < 1) throw InvalidArgument("is_separable: constant polynomial");
    // A squarefree reduction of the same degree certifies separability.
    for (std::uint64_t p : kScreenPrimes) {
        Integer pz = integer_from_u64(p);
        bool good = true;
        for (const auto& c : g.coefficients()) {
            if (mpz_divisible_p(c.denominator().get_mpz_t(), pz.get_mpz_t())) good = false;
        }
        if (!good || mpz_divisible_p(g.leading().numerator().get_mpz_t(), pz.get_mpz_t())) continue;
        PolyFp gp = reduce_mod_p(g, p);
        if (is_separable(gp)) return true;
    }
    return gcd(g, derivative(g)).degree() == 0;
}

PolyQ gcd(const PolyQ& a, const PolyQ& b) {
    if (a.is_zero() && b.is_zero()) return PolyQ();
    if (a.is_zero()) return b * (Rational(1) / b.leading());
    if (b.is_zero()) return a * (Rational(1) / a.leading());
    ZPoly g = zgcd_primitive(clear_denominators(a.coefficients()).z, clear_denominators(b.coefficients()).z);
    PolyQ out(from_cleared(g, 1));
    return out * (Rational(1) / out.leading());
}

}  // namespace arboreal
