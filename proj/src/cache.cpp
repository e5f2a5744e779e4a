#include "mfq/cache.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>
#include <zlib.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>
#include <stdexcept>

namespace mfq {

namespace fs = std::filesystem;

namespace {

class FileLock {
public:
    FileLock(const fs::path& p, int op) {
        fd_ = ::open(p.c_str(), O_RDWR | O_CREAT, 0644);
        if (fd_ >= 0) ::flock(fd_, op);
    }
    ~FileLock() {
        if (fd_ >= 0) {
            ::flock(fd_, LOCK_UN);
            ::close(fd_);
        }
    }
    FileLock(const FileLock&) = delete;
    FileLock& operator=(const FileLock&) = delete;

private:
    int fd_ = -1;
};

fs::path lock_path(const fs::path& p) { return p.string() + ".lock"; }

}  // namespace

DiskCache::DiskCache(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

std::uint32_t DiskCache::checksum(const std::string& bytes) {
    uLong c = crc32(0L, Z_NULL, 0);
    c = crc32(c, reinterpret_cast<const Bytef*>(bytes.data()), static_cast<uInt>(bytes.size()));
    return static_cast<std::uint32_t>(c);
}

std::optional<nlohmann::json> DiskCache::load(const std::string& file, const std::string& kind,
                                              const nlohmann::json& key) const {
    const fs::path p = dir_ / file;
    if (!fs::exists(p)) return std::nullopt;
    FileLock lock(lock_path(p), LOCK_SH);
    auto reject = [&](const std::string& why) -> std::optional<nlohmann::json> {
        std::cerr << "cache: ignoring " << p.string() << " (" << why << "), recomputing\n";
        return std::nullopt;
    };
    nlohmann::json j;
    try {
        std::ifstream in(p);
        j = nlohmann::json::parse(in);
    } catch (const std::exception&) {
        return reject("unreadable JSON");
    }
    if (!j.is_object() || !j.contains("schema_version") || !j.contains("payload") || !j.contains("checksum"))
        return reject("missing fields");
    if (j["schema_version"] != kSchemaVersion) return reject("schema version mismatch");
    if (j.value("kind", "") != kind || j.value("key", nlohmann::json()) != key) return reject("key mismatch");
    char want[16];
    std::snprintf(want, sizeof want, "%08x", checksum(j["payload"].dump()));
    if (j["checksum"] != want) return reject("checksum mismatch");
    return j["payload"];
}

void DiskCache::store(const std::string& file, const std::string& kind, const nlohmann::json& key,
                      const nlohmann::json& payload) const {
    const fs::path p = dir_ / file;
    char sum[16];
    std::snprintf(sum, sizeof sum, "%08x", checksum(payload.dump()));
    const nlohmann::json j = {{"schema_version", kSchemaVersion}, {"kind", kind}, {"key", key},
                              {"checksum", sum}, {"payload", payload}};
    FileLock lock(lock_path(p), LOCK_EX);
    const fs::path tmp = p.string() + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp);
        out << j.dump() << '\n';
        if (!out) throw std::runtime_error("cache: cannot write " + tmp.string());
    }
    fs::rename(tmp, p);
}

std::string DiskCache::space_file(int k, int trunc) {
    return "space_k" + std::to_string(k) + "_n" + std::to_string(trunc) + ".json";
}

std::string DiskCache::eigen_file(int k, int trunc, Precision bits) {
    return "eigen_k" + std::to_string(k) + "_p" + std::to_string(bits) + "_n" + std::to_string(trunc) + ".json";
}

std::shared_ptr<CuspSpace> DiskCache::load_space(int k, int trunc) const {
    const nlohmann::json key = {{"k", k}, {"trunc", trunc}};
    auto j = load(space_file(k, trunc), "space", key);
    if (!j) return nullptr;
    try {
        return std::make_shared<CuspSpace>(cusp_space_from_json(*j));
    } catch (const std::exception& e) {
        std::cerr << "cache: bad space payload for k=" << k << " (" << e.what() << "), recomputing\n";
        return nullptr;
    }
}

void DiskCache::save_space(const CuspSpace& s) const {
    store(space_file(s.k, s.trunc()), "space", {{"k", s.k}, {"trunc", s.trunc()}}, to_json(s));
}

std::shared_ptr<EigenBasis> DiskCache::load_eigen(int k, int trunc, Precision bits) const {
    const std::regex re("eigen_k" + std::to_string(k) + "_p" + std::to_string(bits) + "_n([0-9]+)\\.json");
    std::vector<int> truncs;
    for (const auto& e : fs::directory_iterator(dir_)) {
        std::smatch m;
        const std::string name = e.path().filename().string();
        if (std::regex_match(name, m, re)) {
            const int n = std::stoi(m[1]);
            if (n >= trunc) truncs.push_back(n);
        }
    }
    std::sort(truncs.begin(), truncs.end());
    for (int n : truncs) {
        const nlohmann::json key = {{"k", k}, {"trunc", n}, {"precision", bits}};
        auto j = load(eigen_file(k, n, bits), "eigenbasis", key);
        if (!j) continue;
        try {
            return std::make_shared<EigenBasis>(eigen_basis_from_json(*j));
        } catch (const std::exception& e) {
            std::cerr << "cache: bad eigenbasis payload for k=" << k << " (" << e.what() << "), recomputing\n";
        }
    }
    return nullptr;
}

void DiskCache::save_eigen(const EigenBasis& b) const {
    store(eigen_file(b.k, b.trunc, b.precision), "eigenbasis",
          {{"k", b.k}, {"trunc", b.trunc}, {"precision", b.precision}}, to_json(b));
}

void DiskCache::attach(EigenStore& store) const {
    store.set_persistence([this](int k, int trunc, Precision bits) { return load_eigen(k, trunc, bits); },
                          [this](const EigenBasis& b) { save_eigen(b); });
}

}  // namespace mfq
