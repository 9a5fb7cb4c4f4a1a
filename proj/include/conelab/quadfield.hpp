// Exact arithmetic in the real quadratic field Q(sqrt(d)).
//
// Group relations, form preservation and word-ball deduplication are all
// decided on these scalars, so every operation here is bit-exact. Integers
// are arbitrary precision (GMP); entries of deep word-ball elements grow
// exponentially and would silently overflow any fixed-width type.

#pragma once

#include <gmpxx.h>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace conelab {

/// Thrown on malformed scalar input (den = 0, b != 0 with d = 1, ...).
struct quadfield_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Value (a + b*sqrt(d)) / den with a, b integers, den >= 1, gcd(a,b,den) = 1.
///
/// d is a square-free positive integer fixed per generator system; d = 1
/// encodes plain rationals and forces b = 0. Two values are equal iff their
/// normalized triples (and d) are identical. Immutable after construction.
class QuadRational {
public:
    QuadRational() : a_(0), b_(0), den_(1), d_(1) {}

    QuadRational(mpz_class a, mpz_class b, mpz_class den, long d)
        : a_(std::move(a)), b_(std::move(b)), den_(std::move(den)), d_(d) {
        normalize();
    }

    static QuadRational integer(long v, long d) {
        return QuadRational(mpz_class(v), 0, 1, d);
    }
    static QuadRational fraction(long num, long den, long d) {
        return QuadRational(mpz_class(num), 0, mpz_class(den), d);
    }
    /// b * sqrt(d) / den
    static QuadRational surd(long b, long den, long d) {
        return QuadRational(0, mpz_class(b), mpz_class(den), d);
    }

    const mpz_class& num_a() const { return a_; }
    const mpz_class& num_b() const { return b_; }
    const mpz_class& den() const { return den_; }
    long disc() const { return d_; }

    bool is_zero() const { return a_ == 0 && b_ == 0; }
    bool is_one() const { return b_ == 0 && den_ == 1 && a_ == 1; }
    bool is_integer() const { return b_ == 0 && den_ == 1; }

    QuadRational operator-() const;
    QuadRational operator+(const QuadRational& o) const;
    QuadRational operator-(const QuadRational& o) const;
    QuadRational operator*(const QuadRational& o) const;
    /// Field inverse; throws on zero.
    QuadRational inverse() const;
    QuadRational operator/(const QuadRational& o) const { return *this * o.inverse(); }

    bool operator==(const QuadRational& o) const {
        return d_ == o.d_ && a_ == o.a_ && b_ == o.b_ && den_ == o.den_;
    }
    bool operator!=(const QuadRational& o) const { return !(*this == o); }

    /// Exact sign of the real value (+1, 0, -1).
    int sign() const;
    bool operator<(const QuadRational& o) const { return (*this - o).sign() < 0; }

    /// Double embedding plus a rigorous relative error bound.
    /// |embedded - exact| <= rel_bound * |exact|, rel_bound <= 4 * DBL_EPSILON.
    struct Embedded {
        double value;
        double rel_bound;
    };
    Embedded embed() const;
    double to_double() const { return embed().value; }

    /// Serialization as "a b den" (d lives in the enclosing file header).
    std::string to_string() const;
    static QuadRational from_string(const std::string& s, long d);

private:
    void normalize();

    mpz_class a_, b_, den_;
    long d_;
};

/// Exact sign of p + q*sqrt(d) for integers p, q.
int surd_sign(const mpz_class& p, const mpz_class& q, long d);

/// True if v is square-free and positive (valid session discriminant).
bool valid_discriminant(long d);

} // namespace conelab
