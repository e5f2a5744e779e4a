#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <complex>
#include <string>
#include <utility>

namespace mfq {

/// Bits of mantissa.
using Precision = long;

/// Owning wrapper around an mpfr_t. Each value carries its own precision;
/// binary operations produce a result at the larger operand precision.
class Real {
public:
    explicit Real(Precision bits = 128) { mpfr_init2(v_, bits); mpfr_set_zero(v_, 1); }
    Real(double x, Precision bits) { mpfr_init2(v_, bits); mpfr_set_d(v_, x, MPFR_RNDN); }
    Real(long x, Precision bits) { mpfr_init2(v_, bits); mpfr_set_si(v_, x, MPFR_RNDN); }
    Real(int x, Precision bits) : Real(static_cast<long>(x), bits) {}
    Real(const mpz_class& x, Precision bits) { mpfr_init2(v_, bits); mpfr_set_z(v_, x.get_mpz_t(), MPFR_RNDN); }
    Real(const mpq_class& x, Precision bits) { mpfr_init2(v_, bits); mpfr_set_q(v_, x.get_mpq_t(), MPFR_RNDN); }
    Real(const Real& o) { mpfr_init2(v_, o.prec()); mpfr_set(v_, o.v_, MPFR_RNDN); }
    Real(const Real& o, Precision bits) { mpfr_init2(v_, bits); mpfr_set(v_, o.v_, MPFR_RNDN); }
    Real(Real&& o) noexcept { mpfr_init2(v_, MPFR_PREC_MIN); mpfr_swap(v_, o.v_); }
    ~Real() { mpfr_clear(v_); }

    Real& operator=(const Real& o) {
        if (this != &o) {
            mpfr_set_prec(v_, o.prec());
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    Real& operator=(Real&& o) noexcept { mpfr_swap(v_, o.v_); return *this; }

    Precision prec() const { return mpfr_get_prec(v_); }
    /// Changes precision, rounding the current value.
    void set_prec_round(Precision bits) { mpfr_prec_round(v_, bits, MPFR_RNDN); }

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    long double to_long_double() const { return mpfr_get_ld(v_, MPFR_RNDN); }
    /// Returns (mantissa in [0.5,1), exponent) so that value = m * 2^e.
    std::pair<double, long> frexp() const {
        long e = 0;
        double m = mpfr_get_d_2exp(&e, v_, MPFR_RNDN);
        return {m, e};
    }
    /// Natural log of |x| as a double; -inf for zero.
    double log_abs() const;
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }
    /// Binary exponent (floor(log2|x|)+1); very negative for zero.
    long exponent() const { return is_zero() ? -(1L << 40) : mpfr_get_exp(v_); }

    std::string to_string(int digits) const;
    static Real from_string(const std::string& s, Precision bits);

    Real& operator+=(const Real& o) { grow(o); mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
    Real& operator-=(const Real& o) { grow(o); mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
    Real& operator*=(const Real& o) { grow(o); mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
    Real& operator/=(const Real& o) { grow(o); mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }
    Real& operator*=(long x) { mpfr_mul_si(v_, v_, x, MPFR_RNDN); return *this; }
    Real& operator/=(long x) { mpfr_div_si(v_, v_, x, MPFR_RNDN); return *this; }
    Real& operator*=(const mpz_class& x) { mpfr_mul_z(v_, v_, x.get_mpz_t(), MPFR_RNDN); return *this; }

    /// this += a * b without a temporary at the call site.
    void add_mul(const Real& a, const Real& b);
    void add_mul(const Real& a, const mpz_class& b);

    friend Real operator-(const Real& a) { Real r(a); mpfr_neg(r.v_, r.v_, MPFR_RNDN); return r; }
    friend Real operator+(Real a, const Real& b) { a += b; return a; }
    friend Real operator-(Real a, const Real& b) { a -= b; return a; }
    friend Real operator*(Real a, const Real& b) { a *= b; return a; }
    friend Real operator/(Real a, const Real& b) { a /= b; return a; }
    friend Real operator*(Real a, long b) { a *= b; return a; }
    friend Real operator/(Real a, long b) { a /= b; return a; }

    friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
    friend bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
    friend bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
    friend bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }
    friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }

private:
    void grow(const Real& o) {
        if (o.prec() > prec()) mpfr_prec_round(v_, o.prec(), MPFR_RNDN);
    }
    mpfr_t v_;
};

Real abs(const Real& x);
Real sqrt(const Real& x);
Real log(const Real& x);
Real exp(const Real& x);
Real pow(const Real& x, const Real& y);
Real pow(const Real& x, long n);
Real pi(Precision bits);

/// n^e for a positive integer n and real exponent e.
Real ui_pow(unsigned long n, const Real& e);

/// Complex pair at extended precision. Only what the decomposition code needs.
struct ComplexReal {
    Real re;
    Real im;

    explicit ComplexReal(Precision bits = 128) : re(bits), im(bits) {}
    ComplexReal(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}

    Precision prec() const { return re.prec(); }
    std::complex<double> to_complex() const { return {re.to_double(), im.to_double()}; }
    bool is_zero() const { return re.is_zero() && im.is_zero(); }
};

}  // namespace mfq
