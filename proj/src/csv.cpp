#include "elc/csv.hpp"

#include <charconv>
#include <cstdio>
#include <stdexcept>

namespace elc {

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(std::vector<std::string> header) : width_(header.size()) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) buf_ += ',';
        buf_ += header[i];
    }
    buf_ += '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
    if (values.size() != width_) throw std::runtime_error("csv row width mismatch");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) buf_ += ',';
        buf_ += format_double(values[i]);
    }
    buf_ += '\n';
}

void CsvWriter::raw_row(const std::vector<std::string>& cells) {
    if (cells.size() != width_) throw std::runtime_error("csv row width mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) buf_ += ',';
        buf_ += cells[i];
    }
    buf_ += '\n';
}

void CsvWriter::write_file(const std::string& path) const {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    std::fwrite(buf_.data(), 1, buf_.size(), f);
    std::fclose(f);
}

}  // namespace elc
