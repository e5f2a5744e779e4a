#include "mfq/polymul.hpp"

#include <gmp.h>

#include <algorithm>
#include <cstring>

namespace mfq {
namespace {

static_assert(GMP_NUMB_BITS == 64, "Kronecker packing assumes 64-bit limbs");

size_t max_bits(const std::vector<mpz_class>& v, size_t len) {
    size_t bits = 0;
    for (size_t i = 0; i < len; ++i)
        if (v[i] != 0) bits = std::max(bits, mpz_sizeinbase(v[i].get_mpz_t(), 2));
    return bits;
}

size_t ceil_log2(size_t n) {
    size_t b = 0;
    while ((size_t{1} << b) < n) ++b;
    return b;
}

// Sets z = sum v[i] * 2^(64*slot*i) for i < len.
void pack(mpz_class& z, const std::vector<mpz_class>& v, size_t len, size_t slot) {
    const size_t total = len * slot;
    std::vector<mp_limb_t> pos(total, 0), neg(total, 0);
    bool any_neg = false;
    for (size_t i = 0; i < len; ++i) {
        const mpz_srcptr c = v[i].get_mpz_t();
        const int s = mpz_sgn(c);
        if (s == 0) continue;
        const size_t n = mpz_size(c);
        auto& dst = s > 0 ? pos : neg;
        if (s < 0) any_neg = true;
        std::memcpy(dst.data() + i * slot, mpz_limbs_read(c), n * sizeof(mp_limb_t));
    }
    auto load = [total](mpz_ptr out, const std::vector<mp_limb_t>& buf) {
        mp_limb_t* w = mpz_limbs_write(out, static_cast<mp_size_t>(total));
        std::memcpy(w, buf.data(), total * sizeof(mp_limb_t));
        mpz_limbs_finish(out, static_cast<mp_size_t>(total));
    };
    load(z.get_mpz_t(), pos);
    if (any_neg) {
        mpz_class n;
        load(n.get_mpz_t(), neg);
        z -= n;
    }
}

std::vector<mpz_class> unpack(const mpz_class& z, size_t len, size_t slot) {
    std::vector<mpz_class> out(len);
    const int sign = mpz_sgn(z.get_mpz_t());
    if (sign == 0) return out;
    const size_t size = mpz_size(z.get_mpz_t());
    const mp_limb_t* limbs = mpz_limbs_read(z.get_mpz_t());
    const size_t s_bits = slot * 64;
    mpz_class full, half;
    mpz_ui_pow_ui(full.get_mpz_t(), 2, s_bits);
    mpz_ui_pow_ui(half.get_mpz_t(), 2, s_bits - 1);
    unsigned long carry = 0;
    for (size_t m = 0; m < len; ++m) {
        const size_t lo = m * slot;
        mpz_class t;
        if (lo < size) {
            const size_t n = std::min(slot, size - lo);
            mpz_t view;
            mpz_roinit_n(view, limbs + lo, static_cast<mp_size_t>(n));
            mpz_add_ui(t.get_mpz_t(), view, carry);
        } else {
            t = carry;
        }
        if (t >= half) {
            t -= full;
            carry = 1;
        } else {
            carry = 0;
        }
        if (sign < 0) t = -t;
        out[m] = std::move(t);
    }
    return out;
}

}  // namespace

std::vector<mpz_class> mul_trunc_schoolbook(const std::vector<mpz_class>& a,
                                            const std::vector<mpz_class>& b, size_t len) {
    std::vector<mpz_class> out(len, 0);
    const size_t la = std::min(a.size(), len), lb = std::min(b.size(), len);
    for (size_t i = 0; i < la; ++i) {
        if (a[i] == 0) continue;
        const size_t jmax = std::min(lb, len - i);
        for (size_t j = 0; j < jmax; ++j)
            mpz_addmul(out[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
    }
    return out;
}

std::vector<mpz_class> mul_trunc(const std::vector<mpz_class>& a,
                                 const std::vector<mpz_class>& b, size_t len) {
    const size_t la = std::min(a.size(), len), lb = std::min(b.size(), len);
    if (la == 0 || lb == 0) return std::vector<mpz_class>(len, 0);
    if (std::min(la, lb) < 24) return mul_trunc_schoolbook(a, b, len);

    const size_t ba = max_bits(a, la), bb = max_bits(b, lb);
    if (ba == 0 || bb == 0) return std::vector<mpz_class>(len, 0);
    // |c_m| <= min(la,lb) * 2^(ba+bb), and balanced digits need one spare bit.
    const size_t need = ba + bb + ceil_log2(std::min(la, lb)) + 2;
    const size_t slot = (need + 63) / 64;

    mpz_class za, zb, zc;
    pack(za, a, la, slot);
    if (&a == &b && la == lb) {
        mpz_mul(zc.get_mpz_t(), za.get_mpz_t(), za.get_mpz_t());
    } else {
        pack(zb, b, lb, slot);
        mpz_mul(zc.get_mpz_t(), za.get_mpz_t(), zb.get_mpz_t());
    }
    return unpack(zc, len, slot);
}

}  // namespace mfq
