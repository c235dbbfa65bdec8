#pragma once

// Deterministic text output. Numeric fields go through fixed printf formats
// (C locale digits), rows end in '\n', and files are written atomically via a
// temp file and rename so a rerun either fully replaces an output or leaves
// it untouched. No timestamps or environment data ever enter an output file.

#include <string>
#include <vector>

namespace mimodos {

std::string fmt_g9(double v);   // %.9g, for reported measurements
std::string fmt_g17(double v);  // %.17g, round-trip exact

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);

  void add_row(const std::vector<std::string>& cells);  // throws IoError on arity
  const std::string& str() const { return buf_; }

 private:
  std::size_t columns_;
  std::string buf_;
};

// Writes content to path via temp-file + rename; creates no directories.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);  // throws IoError

}  // namespace mimodos
