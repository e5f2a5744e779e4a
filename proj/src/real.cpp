#include "mfq/real.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

namespace mfq {

double Real::log_abs() const {
    if (is_zero()) return -std::numeric_limits<double>::infinity();
    auto [m, e] = frexp();
    return std::log(std::fabs(m)) + static_cast<double>(e) * std::log(2.0);
}

std::string Real::to_string(int digits) const {
    if (is_zero()) return "0";
    char* buf = nullptr;
    mpfr_asprintf(&buf, "%.*Re", digits, v_);
    std::string s(buf);
    mpfr_free_str(buf);
    return s;
}

Real Real::from_string(const std::string& s, Precision bits) {
    Real r(bits);
    if (mpfr_set_str(r.v_, s.c_str(), 10, MPFR_RNDN) != 0)
        throw std::invalid_argument("not a decimal number: '" + s + "'");
    return r;
}

void Real::add_mul(const Real& a, const Real& b) {
    Real t(std::max(a.prec(), b.prec()));
    mpfr_mul(t.v_, a.v_, b.v_, MPFR_RNDN);
    *this += t;
}

void Real::add_mul(const Real& a, const mpz_class& b) {
    Real t(a.prec());
    mpfr_mul_z(t.v_, a.v_, b.get_mpz_t(), MPFR_RNDN);
    *this += t;
}

Real abs(const Real& x) {
    Real r(x);
    mpfr_abs(r.get(), r.get(), MPFR_RNDN);
    return r;
}

Real sqrt(const Real& x) {
    Real r(x.prec());
    mpfr_sqrt(r.get(), x.get(), MPFR_RNDN);
    return r;
}

Real log(const Real& x) {
    Real r(x.prec());
    mpfr_log(r.get(), x.get(), MPFR_RNDN);
    return r;
}

Real exp(const Real& x) {
    Real r(x.prec());
    mpfr_exp(r.get(), x.get(), MPFR_RNDN);
    return r;
}

Real pow(const Real& x, const Real& y) {
    Real r(std::max(x.prec(), y.prec()));
    mpfr_pow(r.get(), x.get(), y.get(), MPFR_RNDN);
    return r;
}

Real pow(const Real& x, long n) {
    Real r(x.prec());
    mpfr_pow_si(r.get(), x.get(), n, MPFR_RNDN);
    return r;
}

Real pi(Precision bits) {
    Real r(bits);
    mpfr_const_pi(r.get(), MPFR_RNDN);
    return r;
}

Real ui_pow(unsigned long n, const Real& e) {
    Real r(e.prec());
    mpfr_ui_pow(r.get(), n, e.get(), MPFR_RNDN);
    return r;
}

}  // namespace mfq
