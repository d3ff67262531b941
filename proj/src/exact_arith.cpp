#include "arboreal/exact_arith.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <map>
#include <numeric>

#include "arboreal/errors.hpp"

namespace arboreal {

Integer integer_from_u64(std::uint64_t v) {
    Integer r;
    mpz_import(r.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
    return r;
}

bool fits_u64(const Integer& v) {
    return sgn(v) >= 0 && mpz_sizeinbase(v.get_mpz_t(), 2) <= 64;
}

std::uint64_t integer_to_u64(const Integer& v) {
    if (!fits_u64(v)) throw InvalidArgument("integer does not fit in 64 bits: " + v.get_str());
    std::uint64_t out = 0;
    mpz_export(&out, nullptr, 1, sizeof(out), 0, 0, v.get_mpz_t());
    return out;
}

// ---------------------------------------------------------------------------
// Rational

Rational::Rational(const Integer& num, const Integer& den) {
    if (den == 0) throw InvalidArgument("rational with zero denominator");
    q_ = mpq_class(num, den);
    q_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
    auto trim = [](std::string_view s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
        return s;
    };
    auto parse_int = [&](std::string_view s) {
        s = trim(s);
        std::string digits(s);
        if (!digits.empty() && digits.front() == '+') digits.erase(0, 1);
        std::size_t start = (!digits.empty() && digits.front() == '-') ? 1 : 0;
        if (digits.size() == start) throw InvalidArgument("malformed rational: '" + std::string(text) + "'");
        for (std::size_t i = start; i < digits.size(); ++i) {
            if (!std::isdigit(static_cast<unsigned char>(digits[i])))
                throw InvalidArgument("malformed rational: '" + std::string(text) + "'");
        }
        return Integer(digits, 10);
    };
    std::string_view t = trim(text);
    auto slash = t.find('/');
    if (slash == std::string_view::npos) return Rational(parse_int(t));
    Integer den = parse_int(t.substr(slash + 1));
    if (den == 0) throw InvalidArgument("malformed rational (zero denominator): '" + std::string(text) + "'");
    return Rational(parse_int(t.substr(0, slash)), den);
}

Rational Rational::abs() const { return Rational(mpq_class(::abs(q_))); }

std::string Rational::str() const {
    if (is_integer()) return q_.get_num().get_str();
    return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

Rational& Rational::operator+=(const Rational& o) { q_ += o.q_; return *this; }
Rational& Rational::operator-=(const Rational& o) { q_ -= o.q_; return *this; }
Rational& Rational::operator*=(const Rational& o) { q_ *= o.q_; return *this; }
Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) throw InvalidArgument("division by zero rational");
    q_ /= o.q_;
    return *this;
}
Rational Rational::operator-() const { return Rational(mpq_class(-q_)); }

std::size_t Rational::hash() const {
    // Low limbs of numerator and denominator are enough for bucketing.
    auto limb = [](const Integer& z) -> std::size_t {
        if (z == 0) return 0;
        return static_cast<std::size_t>(mpz_getlimbn(z.get_mpz_t(), 0)) ^
               static_cast<std::size_t>(mpz_size(z.get_mpz_t()) * 0x9e3779b97f4a7c15ULL) ^
               (sgn(z) < 0 ? 0x5bd1e995ULL : 0);
    };
    std::size_t h = limb(q_.get_num());
    h ^= limb(q_.get_den()) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
}

// ---------------------------------------------------------------------------
// Valuation

long Valuation::value() const {
    if (infinite_) throw InvalidArgument("valuation of zero is infinite");
    return value_;
}

std::strong_ordering operator<=>(const Valuation& a, const Valuation& b) {
    if (a.infinite_ || b.infinite_) {
        if (a.infinite_ && b.infinite_) return std::strong_ordering::equal;
        return a.infinite_ ? std::strong_ordering::greater : std::strong_ordering::less;
    }
    return a.value_ <=> b.value_;
}

Valuation operator+(const Valuation& a, const Valuation& b) {
    if (a.infinite_ || b.infinite_) return Valuation::infinity();
    return Valuation(a.value_ + b.value_);
}

std::string Valuation::str() const { return infinite_ ? "inf" : std::to_string(value_); }

unsigned long valuation_unchecked(const Integer& x, const Integer& p) {
    if (x == 0) throw InvalidArgument("valuation_unchecked of zero");
    Integer rest;
    return mpz_remove(rest.get_mpz_t(), x.get_mpz_t(), p.get_mpz_t());
}

Valuation valuation(const Rational& x, const Integer& p) {
    if (!is_prime(p)) throw InvalidArgument("valuation: modulus " + p.get_str() + " is not prime");
    if (x.is_zero()) return Valuation::infinity();
    long up = static_cast<long>(valuation_unchecked(x.numerator(), p));
    long down = static_cast<long>(valuation_unchecked(x.denominator(), p));
    return Valuation(up - down);
}

// ---------------------------------------------------------------------------
// Modular helpers

std::uint64_t mul_mod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t mod) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % mod);
}

std::uint64_t pow_mod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) {
    if (mod == 1) return 0;
    std::uint64_t result = 1;
    base %= mod;
    while (exp > 0) {
        if (exp & 1) result = mul_mod_u64(result, base, mod);
        base = mul_mod_u64(base, base, mod);
        exp >>= 1;
    }
    return result;
}

Integer pow_mod(const Integer& base, const Integer& exp, const Integer& mod) {
    Integer r;
    mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), mod.get_mpz_t());
    return r;
}

// ---------------------------------------------------------------------------
// Primality

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    static constexpr std::uint64_t small[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (std::uint64_t p : small) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    std::uint64_t d = n - 1;
    int r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    // Bases known to be deterministic for every n < 2^64.
    static constexpr std::uint64_t bases[] = {2, 325, 9375, 28178, 450775, 9780504, 1795265022};
    for (std::uint64_t a : bases) {
        std::uint64_t x = pow_mod_u64(a % n, d, n);
        if (x == 0 || x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < r; ++i) {
            x = mul_mod_u64(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

Primality primality(const Integer& n) {
    if (sgn(n) < 0) return Primality::composite;
    if (fits_u64(n)) return is_prime_u64(integer_to_u64(n)) ? Primality::prime : Primality::composite;
    // reps - 24 Miller-Rabin rounds follow GMP's Baillie-PSW stage.
    int verdict = mpz_probab_prime_p(n.get_mpz_t(), 88);
    return verdict == 0 ? Primality::composite : Primality::probable_prime;
}

bool is_prime(const Integer& n) { return primality(n) != Primality::composite; }

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit) {
    std::vector<std::uint64_t> out;
    if (limit < 2) return out;
    std::vector<bool> composite(limit + 1, false);
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        out.push_back(i);
        for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Factorization

namespace {

std::uint64_t rho_u64(std::uint64_t n, std::uint64_t budget, std::uint64_t seed) {
    if (n % 2 == 0) return 2;
    // Brent's cycle finding with batched gcds.
    for (std::uint64_t c = seed; c < seed + 64; ++c) {
        std::uint64_t y = c + 1, x = y, ys = y, q = 1, g = 1;
        std::uint64_t r = 1, iters = 0;
        constexpr std::uint64_t m = 128;
        auto f = [&](std::uint64_t v) {
            return static_cast<std::uint64_t>((static_cast<unsigned __int128>(v) * v + c) % n);
        };
        while (g == 1 && iters < budget) {
            x = y;
            for (std::uint64_t i = 0; i < r; ++i) y = f(y);
            std::uint64_t k = 0;
            while (k < r && g == 1) {
                ys = y;
                for (std::uint64_t i = 0; i < std::min(m, r - k); ++i) {
                    y = f(y);
                    q = mul_mod_u64(q, x > y ? x - y : y - x, n);
                }
                g = std::gcd(q, n);
                k += m;
            }
            iters += r;
            r *= 2;
        }
        if (g == n) {
            do {
                ys = f(ys);
                g = std::gcd(x > ys ? x - ys : ys - x, n);
            } while (g == 1);
        }
        if (g != 1 && g != n) return g;
        if (iters >= budget) return 0;
    }
    return 0;
}

Integer rho_big(const Integer& n, std::uint64_t budget, unsigned long seed) {
    for (unsigned long c = seed; c < seed + 16; ++c) {
        Integer y = c + 1, x, ys, q = 1, g = 1, diff;
        std::uint64_t r = 1, iters = 0;
        constexpr std::uint64_t m = 128;
        auto step = [&](Integer& v) {
            v = v * v + c;
            mpz_mod(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
        };
        while (g == 1 && iters < budget) {
            x = y;
            for (std::uint64_t i = 0; i < r; ++i) step(y);
            std::uint64_t k = 0;
            while (k < r && g == 1) {
                ys = y;
                for (std::uint64_t i = 0; i < std::min(m, r - k); ++i) {
                    step(y);
                    diff = x - y;
                    q *= diff;
                    mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
                }
                g = gcd(q, n);
                k += m;
            }
            iters += r;
            r *= 2;
        }
        if (g == n) {
            do {
                step(ys);
                diff = x - ys;
                g = gcd(diff, n);
            } while (g == 1);
        }
        if (g != 1 && g != n) return g;
        if (iters >= budget) return 0;
    }
    return 0;
}

void split_composite(const Integer& n, const FactorBudget& budget, std::map<Integer, unsigned>& primes,
                     std::map<Integer, bool>& probable, Integer& cofactor) {
    if (n == 1) return;
    Primality pr = primality(n);
    if (pr != Primality::composite) {
        primes[n] += 1;
        if (pr == Primality::probable_prime) probable[n] = true;
        return;
    }
    // Perfect powers defeat rho; peel them first.
    if (mpz_perfect_power_p(n.get_mpz_t()))
    for (unsigned k = 2; k <= mpz_sizeinbase(n.get_mpz_t(), 2); ++k) {
        Integer root;
        if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), k) != 0) {
            std::map<Integer, unsigned> sub;
            std::map<Integer, bool> sub_probable;
            Integer sub_cofactor = 1;
            split_composite(root, budget, sub, sub_probable, sub_cofactor);
            for (auto& [p, e] : sub) primes[p] += e * k;
            for (auto& [p, b] : sub_probable) probable[p] = b;
            Integer powered;
            mpz_pow_ui(powered.get_mpz_t(), sub_cofactor.get_mpz_t(), k);
            cofactor *= powered;
            return;
        }
    }
    Integer d = 0;
    if (fits_u64(n)) {
        std::uint64_t g = rho_u64(integer_to_u64(n), budget.rho_iterations, 1);
        if (g != 0) d = integer_from_u64(g);
    } else if (mpz_sizeinbase(n.get_mpz_t(), 2) <= budget.max_rho_bits) {
        d = rho_big(n, budget.rho_iterations, 1);
    }
    if (d == 0) {
        cofactor *= n;
        return;
    }
    split_composite(d, budget, primes, probable, cofactor);
    split_composite(Integer(n / d), budget, primes, probable, cofactor);
}

}  // namespace

Integer IntegerFactorization::product() const {
    Integer acc = cofactor;
    for (const auto& f : factors) {
        Integer pw;
        mpz_pow_ui(pw.get_mpz_t(), f.prime.get_mpz_t(), f.exponent);
        acc *= pw;
    }
    return acc;
}

IntegerFactorization factor_integer(const Integer& n, const FactorBudget& budget) {
    if (n == 0) throw InvalidArgument("factor_integer: cannot factor zero");
    Integer m = ::abs(n);
    std::map<Integer, unsigned> primes;
    std::map<Integer, bool> probable;

    auto strip = [&](std::uint64_t p) {
        Integer pz = integer_from_u64(p);
        unsigned long e = mpz_remove(m.get_mpz_t(), m.get_mpz_t(), pz.get_mpz_t());
        if (e > 0) primes[pz] += static_cast<unsigned>(e);
    };
    strip(2);
    for (std::uint64_t p = 3; p <= budget.trial_bound; p += 2) {
        if (m == 1) break;
        if (mpz_divisible_ui_p(m.get_mpz_t(), p)) strip(p);
        if (mpz_cmp_ui(m.get_mpz_t(), p * p) < 0) break;
    }

    Integer cofactor = 1;
    split_composite(m, budget, primes, probable, cofactor);

    IntegerFactorization out;
    for (auto& [p, e] : primes) out.factors.push_back({p, e, probable.count(p) > 0});
    out.cofactor = cofactor;
    return out;
}

std::vector<Integer> prime_support(const Integer& n, const FactorBudget& budget) {
    IntegerFactorization f = factor_integer(n, budget);
    if (!f.complete())
        throw WorkLimitError("prime_support: could not factor " + f.cofactor.get_str() + " within budget");
    std::vector<Integer> out;
    for (const auto& pf : f.factors) out.push_back(pf.prime);
    return out;
}

// ---------------------------------------------------------------------------
// Multiplicative orders

namespace {

/// Exponent of (Z/mZ)^* as a factored integer: prime -> exponent.
std::map<Integer, unsigned> carmichael_factored(const IntegerFactorization& mf) {
    std::map<Integer, unsigned> lambda;
    auto merge_max = [&](const Integer& p, unsigned e) {
        auto& slot = lambda[p];
        slot = std::max(slot, e);
    };
    FactorBudget generous;
    generous.max_rho_bits = 4096;
    for (const auto& pf : mf.factors) {
        if (pf.prime == 2) {
            unsigned e = pf.exponent;
            if (e == 2) merge_max(2, 1);
            if (e >= 3) merge_max(2, e - 2);
            continue;
        }
        if (pf.exponent > 1) merge_max(pf.prime, pf.exponent - 1);
        IntegerFactorization pm1 = factor_integer(pf.prime - 1, generous);
        if (!pm1.complete()) throw WorkLimitError("mult_order: cannot factor p-1 for p = " + pf.prime.get_str());
        for (const auto& qf : pm1.factors) merge_max(qf.prime, qf.exponent);
    }
    return lambda;
}

}  // namespace

Integer mult_order(const Integer& q, const Integer& m) {
    if (m < 2) throw InvalidArgument("mult_order: modulus must be >= 2");
    Integer qm = q % m;
    if (qm < 0) qm += m;
    if (gcd(qm, m) != 1) throw InvalidArgument("mult_order: gcd(" + q.get_str() + ", " + m.get_str() + ") != 1");
    FactorBudget generous;
    generous.max_rho_bits = 4096;
    IntegerFactorization mf = factor_integer(m, generous);
    if (!mf.complete()) throw WorkLimitError("mult_order: cannot factor modulus " + m.get_str());
    std::map<Integer, unsigned> lambda = carmichael_factored(mf);

    Integer order = 1;
    for (auto& [p, e] : lambda) {
        Integer pw;
        mpz_pow_ui(pw.get_mpz_t(), p.get_mpz_t(), e);
        order *= pw;
    }
    for (auto& [p, e] : lambda) {
        for (unsigned i = 0; i < e; ++i) {
            Integer trial = order / p;
            if (pow_mod(qm, trial, m) != 1) break;
            order = trial;
        }
    }
    return order;
}

OrderConstant order_constant(std::uint64_t d, const Integer& q) {
    if (d < 2) throw InvalidArgument("order_constant: d must be >= 2");
    if (!is_prime(q)) throw InvalidArgument("order_constant: q = " + q.get_str() + " is not prime");
    Integer dz = integer_from_u64(d);
    if (gcd(dz, q) != 1) throw InvalidArgument("order_constant: gcd(d, q) != 1");

    OrderConstant oc;
    oc.d = d;
    oc.q = q;
    IntegerFactorization df = factor_integer(dz);
    Integer deficit_product = 1;
    for (const auto& pf : df.factors) {
        OrderPrimeData data;
        data.prime = integer_to_u64(pf.prime);
        data.exponent_in_d = pf.exponent;
        Integer l = pf.prime;
        if (data.prime == 2) {
            if (q % 4 == 1) {
                data.base_order = 1;
                data.stable_exponent = static_cast<unsigned>(valuation_unchecked(q - 1, 2));
            } else {
                data.base_order = 2;
                data.stable_exponent = static_cast<unsigned>(valuation_unchecked(Integer(q * q - 1), 2));
            }
        } else {
            data.base_order = mult_order(q, l);
            Integer lifted;
            mpz_pow_ui(lifted.get_mpz_t(), q.get_mpz_t(), integer_to_u64(data.base_order));
            data.stable_exponent = static_cast<unsigned>(valuation_unchecked(Integer(lifted - 1), l));
        }
        unsigned base_val = data.base_order == 1 ? 0 : static_cast<unsigned>(valuation_unchecked(data.base_order, l));
        data.deficit = data.stable_exponent - base_val;
        Integer pw;
        mpz_pow_ui(pw.get_mpz_t(), l.get_mpz_t(), data.deficit);
        deficit_product *= pw;
        oc.per_prime.push_back(std::move(data));
    }
    Integer dm = 1;
    while (dm < deficit_product) {
        dm *= dz;
        ++oc.m0;
    }
    return oc;
}

Integer OrderConstant::predicted_order(unsigned s) const {
    Integer order = 1;
    for (const auto& data : per_prime) {
        unsigned k = data.exponent_in_d * s;
        Integer l = integer_from_u64(data.prime);
        Integer local;
        if (data.prime == 2 && data.base_order == 2 && k == 1) {
            local = 1;
        } else {
            Integer pw;
            mpz_pow_ui(pw.get_mpz_t(), l.get_mpz_t(), k > data.stable_exponent ? k - data.stable_exponent : 0);
            local = data.base_order * pw;
        }
        order = lcm(order, local);
    }
    return order;
}

}  // namespace arboreal
