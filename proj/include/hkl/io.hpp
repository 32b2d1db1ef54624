#pragma once

// Serialization of tables, matrices and descriptors, and the on-disk cache
// of discrete-log tables.

#include "hkl/classify.hpp"
#include "hkl/kloosterman.hpp"
#include "hkl/matrix.hpp"

#include "json.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <unistd.h>

namespace hkl::io {

using nlohmann::json;

inline json field_to_json(const FieldCtx& F) {
    return {{"p", F.p()}, {"k", F.k()}, {"modulus", F.modulus()}, {"generator", F.generator_code()}};
}

/// {"p","k","n","conductor","values":[{"a_dlog":j,"coeffs":["..."]}]}
inline json table_to_json(const KlTable& t) {
    json values = json::array();
    for (std::size_t j = 0; j < t.values.size(); ++j) {
        json coeffs = json::array();
        for (const auto& c : t.values[j].coeffs) coeffs.push_back(c.str());
        values.push_back({{"a_dlog", j}, {"coeffs", std::move(coeffs)}});
    }
    return {{"p", t.p()}, {"k", t.ctx->k()}, {"n", t.n}, {"conductor", t.ring.m()}, {"values", std::move(values)}};
}

/// Rows a_dlog,re,im,abs with 17 significant digits.
inline std::string float_table_csv(const std::vector<std::complex<double>>& v) {
    std::ostringstream os;
    os << "a_dlog,re,im,abs\n" << std::setprecision(17);
    for (std::size_t j = 0; j < v.size(); ++j) os << j << ',' << v[j].real() << ',' << v[j].imag() << ',' << std::abs(v[j]) << '\n';
    return os.str();
}

inline json matrix_to_json(const FieldCtx& F, const MatFin& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows; ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols; ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return {{"field", field_to_json(F)}, {"rows", std::move(rows)}};
}

inline json cyclo_matrix_to_json(const Mat<CycloInt>& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows; ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols; ++j) {
            json c = json::array();
            for (const auto& x : m(i, j).coeffs) c.push_back(x.str());
            row.push_back(std::move(c));
        }
        rows.push_back(std::move(row));
    }
    return {{"conductor", m.rows ? m(0, 0).m : 0}, {"rows", std::move(rows)}};
}

inline json descriptor_to_json(const GroupDescriptor& d) {
    json j{{"family", to_string(d.family)}, {"l", d.l}, {"a", d.a}, {"m_S", m_lower(d)}};
    try {
        j["out_order"] = out_order(d);
    } catch (const DomainError&) {
        j["out_order"] = nullptr;
    }
    return j;
}

inline void write_file(const std::filesystem::path& path, const std::string& data) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
    f << data;
    if (!f) throw std::runtime_error("write failed for " + path.string());
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

// --- dlog cache --------------------------------------------------------------------

inline constexpr char kCacheMagic[8] = {'H', 'K', 'L', 'D', 'L', 'O', 'G', '1'};

inline std::uint64_t fnv1a64(const std::string& data, std::size_t len) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= static_cast<unsigned char>(data[i]);
        h *= 0x100000001b3ull;
    }
    return h;
}

enum class CacheStatus { hit, miss, rebuilt };

inline std::string to_string(CacheStatus s) {
    switch (s) {
        case CacheStatus::hit: return "hit";
        case CacheStatus::miss: return "miss";
        case CacheStatus::rebuilt: return "rebuilt";
    }
    return "?";
}

struct CacheResult {
    std::shared_ptr<const FieldCtx> ctx;
    CacheStatus status = CacheStatus::miss;
    std::filesystem::path file;
    std::string note;  ///< why a present file was rejected
};

/// Directory from HKL_CACHE_DIR, if set and nonempty.
inline std::optional<std::filesystem::path> cache_dir_from_env() {
    const char* v = std::getenv("HKL_CACHE_DIR");
    if (!v || !*v) return std::nullopt;
    return std::filesystem::path(v);
}

namespace detail {

template <class T>
void put(std::string& s, T v) {
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    s.append(buf, sizeof(T));
}

template <class T>
T get(const std::string& s, std::size_t& pos) {
    if (pos + sizeof(T) > s.size()) throw std::runtime_error("truncated");
    T v;
    std::memcpy(&v, s.data() + pos, sizeof(T));
    pos += sizeof(T);
    return v;
}

inline std::string serialize(const FieldCtx& F) {
    std::string s(kCacheMagic, 8);
    put<std::uint64_t>(s, F.p());
    put<std::uint64_t>(s, F.k());
    for (unsigned i = 0; i <= F.k(); ++i) put<std::uint64_t>(s, F.modulus()[i]);
    put<std::uint32_t>(s, F.generator_code());
    // one entry per nonzero element, codes 1..q-1
    put<std::uint64_t>(s, F.q() - 1);
    for (std::uint64_t c = 1; c < F.q(); ++c) put<std::uint32_t>(s, F.dlog_table()[c]);
    put<std::uint64_t>(s, fnv1a64(s, s.size()));
    return s;
}

inline FieldCtx deserialize(const std::string& s, std::uint64_t p, unsigned k, const Poly& modulus) {
    if (s.size() < 8 + 8 || std::memcmp(s.data(), kCacheMagic, 8) != 0) throw std::runtime_error("bad magic");
    if (fnv1a64(s, s.size() - 8) != [&] {
            std::size_t pos = s.size() - 8;
            return get<std::uint64_t>(s, pos);
        }())
        throw std::runtime_error("checksum mismatch");
    std::size_t pos = 8;
    if (get<std::uint64_t>(s, pos) != p || get<std::uint64_t>(s, pos) != k) throw std::runtime_error("key mismatch");
    Poly mod(k + 1);
    for (auto& c : mod) c = get<std::uint64_t>(s, pos);
    if (mod != modulus) throw std::runtime_error("modulus mismatch");
    const auto g = get<std::uint32_t>(s, pos);
    const auto count = get<std::uint64_t>(s, pos);
    if (s.size() != pos + count * 4 + 8) throw std::runtime_error("size mismatch");
    std::vector<FieldCtx::Code> dlog(count + 1, 0);
    for (std::uint64_t c = 1; c <= count; ++c) dlog[c] = get<std::uint32_t>(s, pos);
    return FieldCtx(GaloisField::make(p, k, modulus), g, std::move(dlog));
}

}  // namespace detail

inline std::filesystem::path cache_file(const std::filesystem::path& dir, std::uint64_t p, unsigned k) {
    return dir / ("dlog_p" + std::to_string(p) + "_k" + std::to_string(k) + ".bin");
}

/// Loads the dlog table for F_{p^k} (canonical modulus) from `dir`, or builds
/// it and writes it by atomic rename. A file failing validation is rebuilt.
inline CacheResult cached_field(std::uint64_t p, unsigned k, const std::filesystem::path& dir) {
    const Poly modulus = GaloisField::canonical_modulus(p, k);
    CacheResult r;
    r.file = cache_file(dir, p, k);
    std::error_code ec;
    if (std::filesystem::exists(r.file, ec)) {
        try {
            r.ctx = std::make_shared<const FieldCtx>(detail::deserialize(read_file(r.file), p, k, modulus));
            r.status = CacheStatus::hit;
            return r;
        } catch (const std::exception& e) {
            r.status = CacheStatus::rebuilt;
            r.note = e.what();
        }
    }
    r.ctx = std::make_shared<const FieldCtx>(FieldCtx::make(p, k, modulus));
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create cache directory " + dir.string() + ": " + ec.message());
    static std::atomic<unsigned> counter{0};
    const auto tmp = dir / (r.file.filename().string() + ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++));
    write_file(tmp, detail::serialize(*r.ctx));
    std::filesystem::rename(tmp, r.file, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw std::runtime_error("cannot move cache file into place at " + r.file.string() + ": " + ec.message());
    }
    return r;
}

}  // namespace hkl::io
