#ifndef HIDDENEP_IO_CSV_HPP
#define HIDDENEP_IO_CSV_HPP

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "hiddenep/errors.hpp"

namespace hiddenep::io {

inline constexpr int kCsvFormatVersion = 1;

// 17 significant digits: round-trips every double.
inline std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string fmt(long long x) { return std::to_string(x); }
inline std::string fmt(int x) { return std::to_string(x); }
inline std::string fmt(std::size_t x) { return std::to_string(x); }
inline std::string fmt(bool x) { return x ? "1" : "0"; }

// UTF-8, LF line ends, one versioned comment line then the header row.
class CsvTable {
public:
    CsvTable(std::string schema, std::vector<std::string> columns)
        : schema_(std::move(schema)), columns_(std::move(columns)) {}

    template <typename... Ts>
    void row(const Ts&... values) {
        static_assert(sizeof...(Ts) > 0);
        std::vector<std::string> r{fmt(values)...};
        add(std::move(r));
    }

    void add(std::vector<std::string> r) {
        if (r.size() != columns_.size())
            throw size_error("CSV row width differs from the header of " + schema_);
        rows_.push_back(std::move(r));
    }

    std::size_t size() const { return rows_.size(); }
    const std::string& schema() const { return schema_; }

    std::string str() const {
        std::ostringstream os;
        os << "# hiddenep " << schema_ << " v" << kCsvFormatVersion << '\n';
        write_line(os, columns_);
        for (const auto& r : rows_)
            write_line(os, r);
        return os.str();
    }

private:
    static void write_line(std::ostringstream& os, const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i)
                os << ',';
            os << cells[i];
        }
        os << '\n';
    }

    std::string schema_;
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

// Writes to a sibling temporary and renames it into place, so readers never
// see a partial file.
inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    const auto tmp = path.string() + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f)
            throw error("io_error", "cannot open " + tmp + " for writing");
        f << content;
        if (!f)
            throw error("io_error", "short write to " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw error("io_error", "cannot read " + path.string());
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

} // namespace hiddenep::io

#endif
