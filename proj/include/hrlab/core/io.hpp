#ifndef HRLAB_CORE_IO_HPP
#define HRLAB_CORE_IO_HPP

#include <array>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <system_error>
#include <unistd.h>
#include <vector>

#include "hrlab/core/error.hpp"

namespace hrlab::io {

/// Shortest decimal string that round-trips to the same double.
inline std::string format_double(double value) {
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) throw IoError("double formatting failed");
  return std::string(buf.data(), end);
}

/// Accumulates a CSV document in memory; rows are written with `.` as the
/// decimal separator and shortest round-trip doubles.
class CsvWriter {
 public:
  explicit CsvWriter(const std::vector<std::string>& header) : columns_(header.size()) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i) text_ += ',';
      text_ += header[i];
    }
    text_ += '\n';
  }

  CsvWriter& cell(double v) {
    sep();
    text_ += format_double(v);
    return *this;
  }
  CsvWriter& cell(long long v) {
    sep();
    text_ += std::to_string(v);
    return *this;
  }
  CsvWriter& cell(std::size_t v) { return cell(static_cast<long long>(v)); }
  CsvWriter& cell(int v) { return cell(static_cast<long long>(v)); }
  CsvWriter& cell(std::string_view v) {
    sep();
    text_ += v;
    return *this;
  }

  void end_row() {
    if (in_row_ != columns_)
      throw IoError("csv row has " + std::to_string(in_row_) + " cells, expected " +
                    std::to_string(columns_));
    text_ += '\n';
    in_row_ = 0;
    ++rows_;
  }

  std::size_t rows() const { return rows_; }
  const std::string& str() const { return text_; }

 private:
  void sep() {
    if (in_row_++) text_ += ',';
  }

  std::size_t columns_;
  std::size_t in_row_ = 0;
  std::size_t rows_ = 0;
  std::string text_;
};

/// Writes `content` to a sibling temp file and renames it over `path`, so a
/// reader never observes a partially written file under the final name.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  fs::path tmp = path;
  tmp += ".tmp-" + std::to_string(static_cast<long long>(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      out.close();
      fs::remove(tmp, ec);
      throw IoError("write failed for " + tmp.string());
    }
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw IoError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace hrlab::io

#endif  // HRLAB_CORE_IO_HPP
