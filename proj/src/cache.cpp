#include "etalab/cache.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include <json.hpp>

namespace etalab {

namespace fs = std::filesystem;
using nlohmann::json;

std::string exact_decimal(mpfr_srcptr x) {
    if (mpfr_zero_p(x)) {
        return "0";
    }
    if (!mpfr_number_p(x)) {
        throw Error(ErrorCode::InvalidArgument, "non-finite value has no decimal form");
    }
    mpz_class m;
    const mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), x);
    const bool neg = m < 0;
    if (neg) {
        m = -m;
    }
    std::string digits;
    std::size_t frac = 0;
    if (e >= 0) {
        m <<= static_cast<mp_bitcnt_t>(e);
        digits = m.get_str();
    } else {
        // m / 2^k = m 5^k / 10^k
        const auto k = static_cast<unsigned long>(-e);
        mpz_class p;
        mpz_ui_pow_ui(p.get_mpz_t(), 5, k);
        digits = mpz_class(m * p).get_str();
        frac = k;
    }
    if (frac > 0) {
        if (digits.size() <= frac) {
            digits.insert(0, frac - digits.size() + 1, '0');
        }
        digits.insert(digits.size() - frac, ".");
        while (digits.back() == '0') {
            digits.pop_back();
        }
        if (digits.back() == '.') {
            digits.pop_back();
        }
    }
    return neg ? "-" + digits : digits;
}

std::uint64_t fnv1a(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

CacheKey CacheKey::of(const Ball& point, Function f, Method m, int K, int digits) {
    return {exact_decimal(point.mid_re().get()), exact_decimal(point.mid_im().get()), f, m, K, digits};
}

CacheKey CacheKey::of(const DerivVector& v) {
    return of(v.point(), v.function(), v.method(), v.order(), v.digits());
}

std::string CacheKey::canonical() const {
    std::ostringstream o;
    o << point_re << '|' << point_im << '|' << to_string(function) << '|' << to_string(method) << '|' << K << '|'
      << digits;
    return o.str();
}

std::string CacheKey::file_stem() const {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(canonical())));
    return std::string(to_string(function)) + "-" + buf;
}

namespace {

// Radius as "mantissa*2^exponent" with an integer mantissa: exact.
std::string mag_text(const Mag& m) {
    if (m.is_zero()) {
        return "0";
    }
    const auto mant = static_cast<long long>(std::ldexp(m.mantissa(), 53));
    return std::to_string(mant) + "*2^" + std::to_string(m.exponent() - 53);
}

Mag parse_mag(const std::string& s) {
    if (s == "0") {
        return {};
    }
    const auto star = s.find("*2^");
    if (star == std::string::npos) {
        throw Error(ErrorCode::CacheCorrupt, "bad radius '" + s + "'");
    }
    Float t(64);
    mpfr_set_si(t.get(), std::stoll(s.substr(0, star)), MPFR_RNDN);
    mpfr_mul_2si(t.get(), t.get(), std::stol(s.substr(star + 3)), MPFR_RNDN);
    return Mag::from_mpfr_up(t.get());
}

json ball_json(const Ball& b) {
    return json{{"re", exact_decimal(b.mid_re().get())},
                {"im", exact_decimal(b.mid_im().get())},
                {"rad", mag_text(b.rad())},
                {"prec", b.prec()}};
}

Ball json_ball(const json& j) {
    const auto prec = j.at("prec").get<Prec>();
    if (prec < MPFR_PREC_MIN || prec > kMaxPrec) {
        throw Error(ErrorCode::CacheCorrupt, "bad precision");
    }
    Float re(prec);
    Float im(prec);
    if (mpfr_set_str(re.get(), j.at("re").get<std::string>().c_str(), 10, MPFR_RNDN) != 0 ||
        mpfr_set_str(im.get(), j.at("im").get<std::string>().c_str(), 10, MPFR_RNDN) != 0) {
        throw Error(ErrorCode::CacheCorrupt, "bad midpoint");
    }
    return Ball::from_parts(re, im, parse_mag(j.at("rad").get<std::string>()));
}

json key_json(const CacheKey& k) {
    return json{{"point_re", k.point_re}, {"point_im", k.point_im}, {"function", std::string(to_string(k.function))},
                {"method", std::string(to_string(k.method))}, {"K", k.K}, {"digits", k.digits}};
}

std::string checksum_of(const json& body) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(body.dump())));
    return buf;
}

}  // namespace

DerivCache::DerivCache(fs::path dir) : dir_(std::move(dir)) {}

fs::path DerivCache::default_dir() {
    if (const char* env = std::getenv("ETALAB_CACHE_DIR"); env != nullptr && *env != '\0') {
        return env;
    }
    if (const char* home = std::getenv("HOME"); home != nullptr && *home != '\0') {
        return fs::path(home) / ".cache" / "etalab";
    }
    return fs::temp_directory_path() / "etalab-cache";
}

fs::path DerivCache::path_for(const CacheKey& key) const { return dir_ / (key.file_stem() + ".json"); }

void DerivCache::quarantine(const fs::path& file) const {
    std::error_code ec;
    const fs::path q = dir_ / "quarantine";
    fs::create_directories(q, ec);
    fs::rename(file, q / (file.filename().string() + ".corrupt"), ec);
    if (ec) {
        fs::remove(file, ec);
    }
}

std::optional<DerivVector> DerivCache::get(const CacheKey& key) const {
    const fs::path file = path_for(key);
    std::ifstream in(file, std::ios::binary);
    if (!in) {
        return std::nullopt;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    in.close();
    try {
        json doc = json::parse(buf.str());
        const std::string sum = doc.at("checksum").get<std::string>();
        doc.erase("checksum");
        if (sum != checksum_of(doc)) {
            throw Error(ErrorCode::CacheCorrupt, "checksum mismatch");
        }
        if (doc.at("key") != key_json(key)) {
            return std::nullopt;  // hash collision with another key
        }
        std::vector<Ball> values;
        for (const auto& v : doc.at("values")) {
            values.push_back(json_ball(v));
        }
        return DerivVector(json_ball(doc.at("point")), std::move(values), key.function, key.method, key.digits);
    } catch (const Error& e) {
        quarantine(file);
        throw Error(ErrorCode::CacheCorrupt, file.string() + ": " + e.what());
    } catch (const std::exception& e) {
        quarantine(file);
        throw Error(ErrorCode::CacheCorrupt, file.string() + ": " + e.what());
    }
}

void DerivCache::put(const DerivVector& v) {
    const CacheKey key = CacheKey::of(v);
    json doc;
    doc["key"] = key_json(key);
    doc["point"] = ball_json(v.point());
    json vals = json::array();
    for (const Ball& b : v.values()) {
        vals.push_back(ball_json(b));
    }
    doc["values"] = std::move(vals);
    doc["checksum"] = checksum_of(doc);

    static std::atomic<unsigned> counter{0};
    std::lock_guard lock(write_mu_);
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) {
        throw Error(ErrorCode::IoError, "cannot create cache directory " + dir_.string() + ": " + ec.message());
    }
    const fs::path target = path_for(key);
    const fs::path tmp = dir_ / (target.filename().string() + ".tmp." + std::to_string(::getpid()) + "." +
                                 std::to_string(counter++));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << doc.dump();
        if (!out) {
            throw Error(ErrorCode::IoError, "cannot write " + tmp.string());
        }
    }
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw Error(ErrorCode::IoError, "cannot publish " + target.string());
    }
}

std::vector<DerivCache::Entry> DerivCache::list() const {
    std::vector<Entry> out;
    std::error_code ec;
    if (!fs::is_directory(dir_, ec)) {
        return out;
    }
    for (const auto& e : fs::directory_iterator(dir_, ec)) {
        if (e.is_regular_file() && e.path().extension() == ".json") {
            out.push_back({e.path().filename().string(), e.file_size()});
        }
    }
    std::sort(out.begin(), out.end(), [](const Entry& a, const Entry& b) { return a.name < b.name; });
    return out;
}

std::size_t DerivCache::clear() {
    std::lock_guard lock(write_mu_);
    std::error_code ec;
    if (!fs::is_directory(dir_, ec)) {
        return 0;
    }
    // Move the contents aside first so a concurrent reader never sees a half-emptied directory.
    const fs::path trash = dir_.parent_path() / (dir_.filename().string() + ".trash." + std::to_string(::getpid()));
    std::size_t n = list().size();
    fs::rename(dir_, trash, ec);
    if (ec) {
        throw Error(ErrorCode::IoError, "cannot clear " + dir_.string() + ": " + ec.message());
    }
    fs::create_directories(dir_, ec);
    fs::remove_all(trash, ec);
    if (ec) {
        throw Error(ErrorCode::IoError, "cannot remove " + trash.string() + ": " + ec.message());
    }
    return n;
}

}  // namespace etalab
