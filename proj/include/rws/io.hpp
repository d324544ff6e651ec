#ifndef RWS_IO_HPP
#define RWS_IO_HPP

// Plain-text artifact plumbing: '#'-prefixed key=value manifests and
// streamed CSV emission with round-trip-exact numeric rendering.

#include <cstdio>
#include <cstdlib>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "rws/common.hpp"

namespace rws {

// 17 significant digits: enough for double round trips, without locale traps.
inline std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline double parse_number(const std::string& s) {
    const char* p = s.c_str();
    char* end = nullptr;
    double v = std::strtod(p, &end);
    if (end == p) throw input_error("parse_number: not a number: '" + s + "'");
    return v;
}

// Ordered key=value block. Insertion order is the emission order, so equal
// manifests produce byte-equal headers.
class Manifest {
  public:
    void set(const std::string& key, const std::string& value) {
        if (key.empty() || key.find('=') != std::string::npos ||
            key.find('\n') != std::string::npos || value.find('\n') != std::string::npos)
            throw input_error("Manifest: key/value must be single-line, key without '='");
        for (auto& kv : items_)
            if (kv.first == key) {
                kv.second = value;
                return;
            }
        items_.emplace_back(key, value);
    }
    void set(const std::string& key, double value) { set(key, format_number(value)); }
    void set(const std::string& key, int value) { set(key, std::to_string(value)); }
    void set(const std::string& key, long long value) { set(key, std::to_string(value)); }
    void set(const std::string& key, unsigned long long value) { set(key, std::to_string(value)); }

    bool has(const std::string& key) const { return find(key) != nullptr; }

    std::string get(const std::string& key) const {
        const std::string* v = find(key);
        if (!v) throw input_error("Manifest: missing key '" + key + "'");
        return *v;
    }
    std::string get_or(const std::string& key, const std::string& fallback) const {
        const std::string* v = find(key);
        return v ? *v : fallback;
    }
    double get_number(const std::string& key) const { return parse_number(get(key)); }
    long long get_int(const std::string& key) const {
        return static_cast<long long>(std::strtoll(get(key).c_str(), nullptr, 10));
    }

    const std::vector<std::pair<std::string, std::string>>& items() const { return items_; }

    void emit(std::ostream& os) const {
        for (const auto& kv : items_) os << "# " << kv.first << "=" << kv.second << "\n";
    }

    std::string emit_string() const {
        std::ostringstream os;
        emit(os);
        return os.str();
    }

    // Reads consecutive '#' lines; stops at the first line without the prefix
    // (data rows). Blank '#' lines are ignored.
    static Manifest parse(std::istream& is) {
        Manifest m;
        std::string line;
        while (is.peek() == '#' && std::getline(is, line)) {
            std::size_t start = 1;
            while (start < line.size() && line[start] == ' ') ++start;
            if (start >= line.size()) continue;
            std::size_t eq = line.find('=', start);
            if (eq == std::string::npos)
                throw input_error("Manifest: malformed line '" + line + "'");
            m.set(line.substr(start, eq - start), line.substr(eq + 1));
        }
        return m;
    }

    static Manifest parse(const std::string& text) {
        std::istringstream is(text);
        return parse(is);
    }

    friend bool operator==(const Manifest& a, const Manifest& b) { return a.items_ == b.items_; }
    friend bool operator!=(const Manifest& a, const Manifest& b) { return !(a == b); }

  private:
    const std::string* find(const std::string& key) const {
        for (const auto& kv : items_)
            if (kv.first == key) return &kv.second;
        return nullptr;
    }

    std::vector<std::pair<std::string, std::string>> items_;
};

// Streams the manifest header and then one comma-separated line per row
// produced by `next`; `next` fills its argument and returns false when
// exhausted, so memory stays independent of the row count.
inline std::size_t emit_csv(std::ostream& os, const Manifest& header,
                            const std::function<bool(std::vector<double>&)>& next) {
    std::vector<double> row;
    if (!next(row)) throw input_error("emit_csv: no rows");
    header.emit(os);
    std::size_t count = 0;
    do {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ',';
            os << format_number(row[i]);
        }
        os << '\n';
        ++count;
        row.clear();
    } while (next(row));
    if (!os) throw resource_error("emit_csv: write failure");
    return count;
}

}  // namespace rws

#endif
