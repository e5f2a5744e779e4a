#pragma once

#include "mfq/hecke.hpp"

#include <functional>
#include <map>
#include <memory>
#include <mutex>

namespace mfq {

struct StoreRequest {
    int k = 0;
    int min_trunc = 0;
    bool norms = false;      // quadrature Petersson norms
    int l_sym2_cutoff = 0;   // 0: no L(1, sym^2) values
};

/// Thread-safe memo of eigenbases by weight. Each weight is computed by a
/// single writer; callers receive shared, immutable snapshots. An optional
/// loader/saver pair lets the CLI persist entries.
class EigenStore {
public:
    using Loader = std::function<std::shared_ptr<EigenBasis>(int k, int trunc, Precision bits)>;
    using Saver = std::function<void(const EigenBasis&)>;

    explicit EigenStore(unsigned threads = 0) : threads_(threads) {}

    void set_persistence(Loader load, Saver save) {
        load_ = std::move(load);
        save_ = std::move(save);
    }
    /// Overrides the 64 + 2k default.
    void set_precision(std::function<Precision(int)> f) { precision_ = std::move(f); }

    /// Returns an eigenbasis of weight k with at least the requested
    /// truncation and attachments. dim 0 gives an empty basis.
    std::shared_ptr<const EigenBasis> get(const StoreRequest& req);

    /// Truncation used for a request: large enough for T_2, for the
    /// decomposition margin, and for quadrature norms when asked.
    static int effective_trunc(const StoreRequest& req);

private:
    struct Slot {
        std::mutex mu;
        std::shared_ptr<EigenBasis> basis;
    };
    Slot& slot(int k);

    unsigned threads_;
    std::mutex mu_;
    std::map<int, std::unique_ptr<Slot>> slots_;
    Loader load_;
    Saver save_;
    std::function<Precision(int)> precision_;
};

}  // namespace mfq
