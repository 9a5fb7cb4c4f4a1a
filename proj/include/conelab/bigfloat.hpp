// Thin RAII wrapper over MPFR, used where doubles run out of range or
// precision: recomputed float copies of deep word-ball matrices and the
// high-precision oracles in the test suite.

#pragma once

#include <mpfr.h>
#include <gmpxx.h>
#include <string>

namespace conelab {

class BigFloat {
public:
    static constexpr mpfr_prec_t kDefaultPrec = 128;

    explicit BigFloat(mpfr_prec_t prec = kDefaultPrec) { mpfr_init2(x_, prec); mpfr_set_zero(x_, 1); }
    BigFloat(double v, mpfr_prec_t prec = kDefaultPrec) { mpfr_init2(x_, prec); mpfr_set_d(x_, v, MPFR_RNDN); }
    BigFloat(const mpz_class& z, mpfr_prec_t prec = kDefaultPrec) {
        mpfr_init2(x_, prec);
        mpfr_set_z(x_, z.get_mpz_t(), MPFR_RNDN);
    }
    BigFloat(const BigFloat& o) { mpfr_init2(x_, mpfr_get_prec(o.x_)); mpfr_set(x_, o.x_, MPFR_RNDN); }
    BigFloat(BigFloat&& o) noexcept { mpfr_init2(x_, mpfr_get_prec(o.x_)); mpfr_swap(x_, o.x_); }
    BigFloat& operator=(const BigFloat& o) {
        if (this != &o) mpfr_set(x_, o.x_, MPFR_RNDN);
        return *this;
    }
    BigFloat& operator=(BigFloat&& o) noexcept {
        if (this != &o) mpfr_swap(x_, o.x_);
        return *this;
    }
    ~BigFloat() { mpfr_clear(x_); }

    mpfr_prec_t prec() const { return mpfr_get_prec(x_); }

    BigFloat operator+(const BigFloat& o) const { BigFloat r(prec()); mpfr_add(r.x_, x_, o.x_, MPFR_RNDN); return r; }
    BigFloat operator-(const BigFloat& o) const { BigFloat r(prec()); mpfr_sub(r.x_, x_, o.x_, MPFR_RNDN); return r; }
    BigFloat operator*(const BigFloat& o) const { BigFloat r(prec()); mpfr_mul(r.x_, x_, o.x_, MPFR_RNDN); return r; }
    BigFloat operator/(const BigFloat& o) const { BigFloat r(prec()); mpfr_div(r.x_, x_, o.x_, MPFR_RNDN); return r; }
    BigFloat operator-() const { BigFloat r(prec()); mpfr_neg(r.x_, x_, MPFR_RNDN); return r; }

    BigFloat& operator+=(const BigFloat& o) { mpfr_add(x_, x_, o.x_, MPFR_RNDN); return *this; }
    BigFloat& operator-=(const BigFloat& o) { mpfr_sub(x_, x_, o.x_, MPFR_RNDN); return *this; }
    BigFloat& operator*=(const BigFloat& o) { mpfr_mul(x_, x_, o.x_, MPFR_RNDN); return *this; }

    BigFloat sqrt() const { BigFloat r(prec()); mpfr_sqrt(r.x_, x_, MPFR_RNDN); return r; }
    BigFloat abs() const { BigFloat r(prec()); mpfr_abs(r.x_, x_, MPFR_RNDN); return r; }
    BigFloat log() const { BigFloat r(prec()); mpfr_log(r.x_, x_, MPFR_RNDN); return r; }

    int cmp(const BigFloat& o) const { return mpfr_cmp(x_, o.x_); }
    bool operator<(const BigFloat& o) const { return cmp(o) < 0; }
    bool operator>(const BigFloat& o) const { return cmp(o) > 0; }
    bool is_zero() const { return mpfr_zero_p(x_) != 0; }
    int sign() const { return mpfr_sgn(x_); }

    double to_double() const { return mpfr_get_d(x_, MPFR_RNDN); }
    std::string to_string(size_t digits = 20) const {
        char buf[256];
        mpfr_snprintf(buf, sizeof(buf), "%.*Rg", (int)digits, x_);
        return buf;
    }

    mpfr_ptr raw() { return x_; }
    mpfr_srcptr raw() const { return x_; }

private:
    mpfr_t x_;
};

inline BigFloat fma_add(BigFloat acc, const BigFloat& a, const BigFloat& b) {
    mpfr_fma(acc.raw(), a.raw(), b.raw(), acc.raw(), MPFR_RNDN);
    return acc;
}

} // namespace conelab
