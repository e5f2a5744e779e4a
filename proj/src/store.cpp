#include "mfq/store.hpp"

#include "mfq/analytic.hpp"

#include <algorithm>

namespace mfq {

int EigenStore::effective_trunc(const StoreRequest& req) {
    const int d = dim_cusp(req.k);
    int n = std::max({req.min_trunc, 2 * d, d + 26, req.l_sym2_cutoff});
    if (req.norms) n = std::max(n, quadrature_min_trunc(req.k));
    return n;
}

EigenStore::Slot& EigenStore::slot(int k) {
    std::lock_guard<std::mutex> lk(mu_);
    auto& s = slots_[k];
    if (!s) s = std::make_unique<Slot>();
    return *s;
}

std::shared_ptr<const EigenBasis> EigenStore::get(const StoreRequest& req) {
    Slot& s = slot(req.k);
    std::lock_guard<std::mutex> lk(s.mu);
    const int trunc = effective_trunc(req);
    const Precision bits = precision_ ? precision_(req.k) : default_precision(req.k);

    if (dim_cusp(req.k) == 0) {
        if (!s.basis) {
            s.basis = std::make_shared<EigenBasis>();
            s.basis->k = req.k;
            s.basis->precision = bits;
        }
        return s.basis;
    }

    bool changed = false;
    if (!s.basis || s.basis->trunc < trunc || s.basis->precision != bits) {
        std::shared_ptr<EigenBasis> b;
        if (load_) b = load_(req.k, trunc, bits);
        if (!b || b->trunc < trunc || b->precision != bits) {
            b = std::make_shared<EigenBasis>(eigenforms(miller_basis(req.k, trunc), bits, threads_));
            changed = true;
        }
        s.basis = std::move(b);
    }

    const bool need_norms = req.norms && std::any_of(s.basis->forms.begin(), s.basis->forms.end(),
                                                     [](const Eigenform& h) { return !h.norm; });
    const bool need_l = req.l_sym2_cutoff > 0 &&
                        std::any_of(s.basis->forms.begin(), s.basis->forms.end(), [&](const Eigenform& h) {
                            return !h.l_sym2 || h.l_sym2->cutoff_P < std::min(req.l_sym2_cutoff, max_cutoff(h));
                        });
    if (need_norms || need_l) {
        // Copy-on-write: snapshots already handed out stay untouched.
        auto copy = std::make_shared<EigenBasis>(*s.basis);
        if (need_norms) attach_quadrature_norms(*copy, threads_);
        if (need_l) attach_l_sym2(*copy, req.l_sym2_cutoff, threads_);
        s.basis = std::move(copy);
        changed = true;
    }
    if (changed && save_) save_(*s.basis);
    return s.basis;
}

}  // namespace mfq
