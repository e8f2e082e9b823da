#pragma once

#include <filesystem>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace spde_bayes {

/// Shortest-form-independent rendering with 17 significant digits, so every
/// double round-trips exactly.
std::string format_double(double x);

/// Shortest text that round-trips; used for labels and config files.
std::string format_shortest(double x);

/// Quotes a cell containing a comma, quote or line break.
std::string csv_escape(std::string_view cell);

/// Row-oriented CSV builder with a fixed header.
class CsvTable {
public:
  explicit CsvTable(std::vector<std::string> header);

  CsvTable &add_row(std::vector<std::string> cells);
  const std::vector<std::string> &header() const { return header_; }
  std::size_t rows() const { return rows_.size(); }

  std::string str() const;
  /// Writes atomically enough for our purposes; throws IoError on failure.
  void write(const std::filesystem::path &file) const;

private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

} // namespace spde_bayes
