#pragma once

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "etalab/etaeval.hpp"

namespace etalab {

/// Exact decimal expansion of a binary floating-point number.
std::string exact_decimal(mpfr_srcptr x);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view data);

struct CacheKey {
    std::string point_re;  // exact decimal of the midpoint
    std::string point_im;
    Function function = Function::eta;
    Method method = Method::euler_maclaurin;
    int K = 0;
    int digits = 0;

    static CacheKey of(const Ball& point, Function f, Method m, int K, int digits);
    static CacheKey of(const DerivVector& v);

    std::string canonical() const;
    /// File stem derived from the canonical form.
    std::string file_stem() const;

    friend bool operator==(const CacheKey&, const CacheKey&) = default;
};

/// Persistent derivative store: one JSON file per key.
///
/// Writes go through a temporary file and a rename, so readers only ever
/// see complete documents.  A file failing its checksum is moved aside
/// and reported once as CacheCorrupt; later lookups are plain misses.
class DerivCache {
public:
    explicit DerivCache(std::filesystem::path dir);

    /// $ETALAB_CACHE_DIR, else ~/.cache/etalab.
    static std::filesystem::path default_dir();

    const std::filesystem::path& dir() const { return dir_; }

    std::optional<DerivVector> get(const CacheKey& key) const;
    void put(const DerivVector& v);

    struct Entry {
        std::string name;
        std::uintmax_t bytes = 0;
    };
    std::vector<Entry> list() const;
    /// Removes every entry (and quarantined files); returns the count removed.
    std::size_t clear();

private:
    std::filesystem::path path_for(const CacheKey& key) const;
    void quarantine(const std::filesystem::path& file) const;

    std::filesystem::path dir_;
    mutable std::mutex write_mu_;
};

}  // namespace etalab
