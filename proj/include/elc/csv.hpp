#pragma once

#include <string>
#include <vector>

namespace elc {

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double v);

/// Minimal CSV emitter: comma-separated, LF line endings, UTF-8.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);

    void row(const std::vector<double>& values);
    void raw_row(const std::vector<std::string>& cells);

    const std::string& str() const { return buf_; }
    void write_file(const std::string& path) const;

private:
    std::string buf_;
    std::size_t width_;
};

}  // namespace elc
