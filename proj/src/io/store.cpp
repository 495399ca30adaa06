#include "voltaic/io/store.hpp"

#include "voltaic/common/csv.hpp"
#include "voltaic/common/error.hpp"
#include "voltaic/common/strings.hpp"

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <fmt/core.h>
#include <fstream>
#include <iterator>

namespace voltaic {

namespace fs = std::filesystem;

std::string store_key(const std::string& name, ValueKind kind)
{
    return kind == ValueKind::marginal ? name + ".m" : name;
}

std::string symbol_to_csv(const Symbol& s)
{
    CsvRow header(s.dims.begin(), s.dims.end());
    header.push_back("value");
    std::string out = csv_line(header);
    // std::map keeps tuples in lexicographic order already
    for (const auto& [key, v] : s.records) {
        CsvRow row(key.begin(), key.end());
        row.push_back(format_exact(v));
        out += csv_line(row);
    }
    return out;
}

namespace {

std::string meta_value(std::string v)
{
    std::replace(v.begin(), v.end(), '\n', ' ');
    std::replace(v.begin(), v.end(), '\r', ' ');
    return v;
}

// ---- binary ----------------------------------------------------------------

constexpr char magic[] = "VCOL1";

class Writer {
public:
    void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
    void u32(std::uint32_t v)
    {
        for (int i = 0; i < 4; ++i) {
            u8(static_cast<std::uint8_t>(v >> (8 * i)));
        }
    }
    void u64(std::uint64_t v)
    {
        for (int i = 0; i < 8; ++i) {
            u8(static_cast<std::uint8_t>(v >> (8 * i)));
        }
    }
    void f64(double v)
    {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof bits);
        u64(bits);
    }
    void str(const std::string& s)
    {
        u32(static_cast<std::uint32_t>(s.size()));
        buf_ += s;
    }
    void raw(std::string_view s) { buf_ += s; }
    const std::string& data() const { return buf_; }

private:
    std::string buf_;
};

class Reader {
public:
    Reader(std::string data, std::string file) : data_(std::move(data)), file_(std::move(file)) {}

    std::uint8_t u8()
    {
        need(1);
        return static_cast<std::uint8_t>(data_[pos_++]);
    }
    std::uint32_t u32()
    {
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) {
            v |= static_cast<std::uint32_t>(u8()) << (8 * i);
        }
        return v;
    }
    std::uint64_t u64()
    {
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) {
            v |= static_cast<std::uint64_t>(u8()) << (8 * i);
        }
        return v;
    }
    double f64()
    {
        std::uint64_t bits = u64();
        double v;
        std::memcpy(&v, &bits, sizeof v);
        return v;
    }
    std::string str()
    {
        auto n = u32();
        need(n);
        std::string s = data_.substr(pos_, n);
        pos_ += n;
        return s;
    }
    std::string raw(std::size_t n)
    {
        need(n);
        std::string s = data_.substr(pos_, n);
        pos_ += n;
        return s;
    }
    bool done() const { return pos_ == data_.size(); }

private:
    void need(std::size_t n) const
    {
        if (data_.size() - pos_ < n) {
            throw IoError(fmt::format("{}: truncated file", file_));
        }
    }
    std::string data_;
    std::string file_;
    std::size_t pos_ = 0;
};

std::string encode_binary(const SymbolStore& store)
{
    Writer w;
    w.raw(magic);
    w.str(store.run_id);
    w.u32(static_cast<std::uint32_t>(store.meta.size()));
    for (const auto& [k, v] : store.meta) {
        w.str(k);
        w.str(v);
    }
    w.u32(static_cast<std::uint32_t>(store.symbols.size()));
    for (const auto& [key, s] : store.symbols) {
        w.str(key);
        w.str(s.name);
        w.u8(static_cast<std::uint8_t>(s.kind));
        w.str(s.unit);
        w.u32(static_cast<std::uint32_t>(s.dims.size()));
        for (const auto& d : s.dims) {
            w.str(d);
        }
        w.u64(s.records.size());
        // one dictionary-coded column per dim, then the value column
        for (std::size_t d = 0; d < s.dims.size(); ++d) {
            std::vector<std::string> dict;
            for (const auto& [k, v] : s.records) {
                dict.push_back(k[d]);
            }
            std::sort(dict.begin(), dict.end());
            dict.erase(std::unique(dict.begin(), dict.end()), dict.end());
            w.u32(static_cast<std::uint32_t>(dict.size()));
            for (const auto& e : dict) {
                w.str(e);
            }
            for (const auto& [k, v] : s.records) {
                w.u32(static_cast<std::uint32_t>(std::lower_bound(dict.begin(), dict.end(), k[d]) - dict.begin()));
            }
        }
        for (const auto& [k, v] : s.records) {
            w.f64(v);
        }
    }
    return w.data();
}

SymbolStore decode_binary(std::string data, const std::string& file)
{
    Reader r(std::move(data), file);
    if (r.raw(sizeof magic - 1) != magic) {
        throw IoError(fmt::format("{}: not a VCOL1 file", file));
    }
    SymbolStore store;
    store.run_id = r.str();
    for (auto n = r.u32(); n > 0; --n) {
        auto k = r.str();
        store.meta[k] = r.str();
    }
    for (auto n = r.u32(); n > 0; --n) {
        auto key = r.str();
        Symbol s;
        s.name = r.str();
        auto kind = r.u8();
        if (kind > static_cast<std::uint8_t>(ValueKind::parameter)) {
            throw IoError(fmt::format("{}: bad value kind for '{}'", file, key));
        }
        s.kind = static_cast<ValueKind>(kind);
        s.unit = r.str();
        for (auto d = r.u32(); d > 0; --d) {
            s.dims.push_back(r.str());
        }
        auto count = r.u64();
        std::vector<Tuple> keys(count, Tuple(s.dims.size()));
        for (std::size_t d = 0; d < s.dims.size(); ++d) {
            std::vector<std::string> dict(r.u32());
            for (auto& e : dict) {
                e = r.str();
            }
            for (std::uint64_t i = 0; i < count; ++i) {
                auto code = r.u32();
                if (code >= dict.size()) {
                    throw IoError(fmt::format("{}: bad dictionary code in '{}'", file, key));
                }
                keys[i][d] = dict[code];
            }
        }
        for (std::uint64_t i = 0; i < count; ++i) {
            s.records[keys[i]] = r.f64();
        }
        store.symbols.emplace(key, std::move(s));
    }
    if (!r.done()) {
        throw IoError(fmt::format("{}: trailing bytes", file));
    }
    return store;
}

void write_bytes(const fs::path& p, const std::string& data)
{
    std::ofstream out(p, std::ios::binary);
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) {
        throw IoError(fmt::format("{}: cannot write", p.string()));
    }
}

std::string read_bytes(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    if (!in) {
        throw IoError(fmt::format("{}: cannot read", p.string()));
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace

void write_store(const SymbolStore& store, const fs::path& results_dir, StoreFormats formats)
{
    if (store.run_id.empty() || store.run_id.find_first_of("/\\") != std::string::npos || store.run_id == "." ||
        store.run_id == "..") {
        throw IoError(fmt::format("run id '{}' cannot be used as a directory name", store.run_id));
    }
    const fs::path dir = results_dir / store.run_id;
    std::error_code ec;
    fs::remove_all(dir, ec);
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw IoError(fmt::format("{}: cannot create directory", dir.string()));
    }

    auto meta = store.meta;
    meta["run_id"] = store.run_id;
    for (const auto& [key, s] : store.symbols) {
        meta["symbol." + key + ".kind"] = to_string(s.kind);
        meta["symbol." + key + ".name"] = s.name;
        if (!s.unit.empty()) {
            meta["symbol." + key + ".unit"] = s.unit;
        }
    }
    try {
        if (formats.text) {
            for (const auto& [key, s] : store.symbols) {
                write_text_file((dir / (key + ".csv")).string(), symbol_to_csv(s));
            }
            std::string text;
            for (const auto& [k, v] : meta) {
                text += k + "=" + meta_value(v) + "\n";
            }
            write_text_file((dir / "run.meta").string(), text);
        }
        if (formats.binary) {
            write_bytes(dir / "run.vcol", encode_binary(store));
        }
    } catch (const IoError&) {
        throw;
    } catch (const std::exception& e) {
        throw IoError(fmt::format("{}: {}", dir.string(), e.what()));
    }
}

SymbolStore read_store(const fs::path& run_dir, StoreFormat format)
{
    if (format == StoreFormat::binary) {
        auto p = run_dir / "run.vcol";
        if (!fs::exists(p)) {
            throw IoError(fmt::format("{}: no binary store", run_dir.string()));
        }
        return decode_binary(read_bytes(p), p.string());
    }

    auto meta_path = run_dir / "run.meta";
    if (!fs::exists(meta_path)) {
        throw IoError(fmt::format("{}: no run.meta", run_dir.string()));
    }
    SymbolStore store;
    store.run_id = run_dir.filename().string();
    std::map<std::string, std::string> all;
    {
        auto text = read_text_file(meta_path.string());
        std::size_t start = 0;
        while (start < text.size()) {
            auto end = text.find('\n', start);
            if (end == std::string::npos) {
                end = text.size();
            }
            auto line = text.substr(start, end - start);
            start = end + 1;
            if (line.empty()) {
                continue;
            }
            auto eq = line.find('=');
            if (eq == std::string::npos) {
                throw IoError(fmt::format("{}: bad line '{}'", meta_path.string(), line));
            }
            all[line.substr(0, eq)] = line.substr(eq + 1);
        }
    }
    // symbol.<key>.* entries describe files; everything else is run metadata
    std::map<std::string, std::map<std::string, std::string>> described;
    for (const auto& [k, v] : all) {
        if (k.rfind("symbol.", 0) == 0) {
            auto dot = k.rfind('.');
            described[k.substr(7, dot - 7)][k.substr(dot + 1)] = v;
        } else if (k != "run_id") {
            store.meta[k] = v;
        }
    }
    for (const auto& [key, attrs] : described) {
        auto p = run_dir / (key + ".csv");
        auto rows = parse_csv(read_text_file(p.string()));
        if (rows.empty() || rows[0].empty() || rows[0].back() != "value") {
            throw IoError(fmt::format("{}: header must end with 'value'", p.string()));
        }
        Symbol s;
        auto name = attrs.find("name");
        s.name = name != attrs.end() ? name->second : key;
        auto kind = attrs.find("kind");
        if (kind != attrs.end()) {
            auto k = parse_value_kind(kind->second);
            if (!k) {
                throw IoError(fmt::format("{}: bad kind '{}' for '{}'", meta_path.string(), kind->second, key));
            }
            s.kind = *k;
        }
        if (auto unit = attrs.find("unit"); unit != attrs.end()) {
            s.unit = unit->second;
        }
        s.dims.assign(rows[0].begin(), rows[0].end() - 1);
        for (std::size_t r = 1; r < rows.size(); ++r) {
            const auto& row = rows[r];
            if (row.size() != s.dims.size() + 1) {
                throw IoError(fmt::format("{}: row {} has {} cells", p.string(), r + 1, row.size()));
            }
            auto v = parse_number(row.back());
            if (!v) {
                throw IoError(fmt::format("{}: row {}: '{}' is not a number", p.string(), r + 1, row.back()));
            }
            s.records[Tuple(row.begin(), row.end() - 1)] = *v;
        }
        store.symbols.emplace(key, std::move(s));
    }
    return store;
}

std::vector<SymbolStore> read_stores(const fs::path& results_dir)
{
    std::vector<SymbolStore> out;
    if (fs::is_directory(results_dir)) {
        std::vector<fs::path> dirs;
        for (const auto& e : fs::directory_iterator(results_dir)) {
            if (e.is_directory()) {
                dirs.push_back(e.path());
            }
        }
        std::sort(dirs.begin(), dirs.end());
        for (const auto& d : dirs) {
            if (fs::exists(d / "run.meta")) {
                out.push_back(read_store(d, StoreFormat::text));
            } else if (fs::exists(d / "run.vcol")) {
                out.push_back(read_store(d, StoreFormat::binary));
            }
        }
    }
    if (out.empty()) {
        throw IoError(fmt::format("{}: no result stores found", results_dir.string()));
    }
    return out;
}

} // namespace voltaic
