#pragma once

#include "mfq/hecke.hpp"
#include "mfq/space.hpp"
#include "mfq/store.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

namespace mfq {

/// JSON entries on disk, one file per key:
///   {"schema_version", "kind", "key", "checksum", "payload"}
/// checksum is the zlib crc32 of payload.dump(). Writes go to a temp file
/// renamed into place under an exclusive flock; reads take a shared lock.
/// A file that fails to parse, has another schema version, a different key
/// or a bad checksum is reported on stderr and treated as missing.
class DiskCache {
public:
    static constexpr int kSchemaVersion = 1;

    explicit DiskCache(std::filesystem::path dir);
    const std::filesystem::path& dir() const { return dir_; }

    std::optional<nlohmann::json> load(const std::string& file, const std::string& kind,
                                       const nlohmann::json& key) const;
    void store(const std::string& file, const std::string& kind, const nlohmann::json& key,
               const nlohmann::json& payload) const;

    std::shared_ptr<CuspSpace> load_space(int k, int trunc) const;
    void save_space(const CuspSpace& s) const;

    /// Smallest cached truncation >= trunc at exactly this precision.
    std::shared_ptr<EigenBasis> load_eigen(int k, int trunc, Precision bits) const;
    void save_eigen(const EigenBasis& b) const;

    /// Routes the store's loader/saver through this cache.
    void attach(EigenStore& store) const;

    static std::string space_file(int k, int trunc);
    static std::string eigen_file(int k, int trunc, Precision bits);
    static std::uint32_t checksum(const std::string& bytes);

private:
    std::filesystem::path dir_;
};

}  // namespace mfq
