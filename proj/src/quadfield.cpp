#include "conelab/quadfield.hpp"

#include <mpfr.h>
#include <cfloat>
#include <cmath>
#include <sstream>

namespace conelab {

bool valid_discriminant(long d) {
    if (d < 1) return false;
    for (long p = 2; p * p <= d; ++p) {
        if (d % (p * p) == 0) return false;
    }
    return true;
}

void QuadRational::normalize() {
    if (den_ == 0) throw quadfield_error("QuadRational: zero denominator");
    if (!valid_discriminant(d_)) throw quadfield_error("QuadRational: d must be a square-free positive integer");
    if (d_ == 1 && b_ != 0) throw quadfield_error("QuadRational: b must be 0 when d = 1 (rational mode)");
    if (a_ == 0 && b_ == 0) {
        den_ = 1;
        return;
    }
    if (den_ < 0) {
        a_ = -a_;
        b_ = -b_;
        den_ = -den_;
    }
    if (den_ == 1) return; // already reduced: gcd(x, 1) = 1
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), a_.get_mpz_t(), b_.get_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), den_.get_mpz_t());
    if (g > 1) {
        mpz_divexact(a_.get_mpz_t(), a_.get_mpz_t(), g.get_mpz_t());
        mpz_divexact(b_.get_mpz_t(), b_.get_mpz_t(), g.get_mpz_t());
        mpz_divexact(den_.get_mpz_t(), den_.get_mpz_t(), g.get_mpz_t());
    }
}

QuadRational QuadRational::operator-() const {
    QuadRational r(*this);
    r.a_ = -r.a_;
    r.b_ = -r.b_;
    return r;
}

QuadRational QuadRational::operator+(const QuadRational& o) const {
    if (d_ != o.d_) throw quadfield_error("QuadRational: mixed discriminants");
    if (den_ == o.den_) return QuadRational(a_ + o.a_, b_ + o.b_, den_, d_);
    return QuadRational(a_ * o.den_ + o.a_ * den_, b_ * o.den_ + o.b_ * den_, den_ * o.den_, d_);
}

QuadRational QuadRational::operator-(const QuadRational& o) const {
    if (d_ != o.d_) throw quadfield_error("QuadRational: mixed discriminants");
    if (den_ == o.den_) return QuadRational(a_ - o.a_, b_ - o.b_, den_, d_);
    return QuadRational(a_ * o.den_ - o.a_ * den_, b_ * o.den_ - o.b_ * den_, den_ * o.den_, d_);
}

QuadRational QuadRational::operator*(const QuadRational& o) const {
    if (d_ != o.d_) throw quadfield_error("QuadRational: mixed discriminants");
    return QuadRational(a_ * o.a_ + mpz_class(d_) * b_ * o.b_, a_ * o.b_ + b_ * o.a_, den_ * o.den_, d_);
}

QuadRational QuadRational::inverse() const {
    if (is_zero()) throw quadfield_error("QuadRational: inverse of zero");
    // 1 / ((a + b sqrt d)/den) = den (a - b sqrt d) / (a^2 - d b^2)
    mpz_class nrm = a_ * a_ - mpz_class(d_) * b_ * b_; // nonzero: sqrt(d) irrational for d > 1
    return QuadRational(den_ * a_, -den_ * b_, nrm, d_);
}

int surd_sign(const mpz_class& p, const mpz_class& q, long d) {
    int sp = sgn(p), sq = sgn(q);
    if (d == 1) {
        mpz_class s = p + q;
        return sgn(s);
    }
    if (sq == 0) return sp;
    if (sp == 0) return sq;
    if (sp == sq) return sp;
    // opposite signs: sign(p + q sqrt d) = sp * sign(p^2 - d q^2)
    mpz_class t = p * p - mpz_class(d) * q * q;
    return sp * sgn(t);
}

int QuadRational::sign() const { return surd_sign(a_, b_, d_); }

QuadRational::Embedded QuadRational::embed() const {
    // All conversions mpz -> double are rounded to nearest through MPFR
    // (mpz_get_d truncates, which would lose half an ulp per conversion).
    auto z_to_d = [](const mpz_class& z) {
        mpfr_t t;
        mpfr_init2(t, 53);
        mpfr_set_z(t, z.get_mpz_t(), MPFR_RNDN);
        double r = mpfr_get_d(t, MPFR_RNDN);
        mpfr_clear(t);
        return r;
    };
    if (a_ == 0 && b_ == 0) return {0.0, 0.0};

    const double eps = DBL_EPSILON; // 2^-52; each nearest rounding costs eps/2
    double den_d = z_to_d(den_);
    double num_d;
    int sa = sgn(a_), sb = sgn(b_);
    if (d_ == 1 || sb == 0) {
        num_d = z_to_d(a_); // single rounding
    } else if (sa == 0) {
        num_d = z_to_d(b_) * std::sqrt(double(d_)); // 1.5 roundings
    } else if (sa == sb) {
        // same-sign sum: relative errors add without cancellation
        num_d = z_to_d(a_) + z_to_d(b_) * std::sqrt(double(d_));
    } else {
        // opposite signs would cancel catastrophically; route through the
        // conjugate: a + b sqrt d = (a^2 - d b^2) / (a - b sqrt d), where the
        // numerator is exact in Z and the denominator is a same-sign sum.
        mpz_class nrm = a_ * a_ - mpz_class(d_) * b_ * b_;
        double lo = z_to_d(a_) - z_to_d(b_) * std::sqrt(double(d_));
        num_d = z_to_d(nrm) / lo;
    }
    double v = num_d / den_d;
    return {v, 4.0 * eps};
}

std::string QuadRational::to_string() const {
    std::ostringstream os;
    os << a_.get_str() << ' ' << b_.get_str() << ' ' << den_.get_str();
    return os.str();
}

QuadRational QuadRational::from_string(const std::string& s, long d) {
    std::istringstream is(s);
    std::string sa, sb, sden;
    if (!(is >> sa >> sb >> sden)) throw quadfield_error("QuadRational: bad triple '" + s + "'");
    return QuadRational(mpz_class(sa), mpz_class(sb), mpz_class(sden), d);
}

} // namespace conelab
