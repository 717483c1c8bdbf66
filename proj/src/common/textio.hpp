#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace decopt {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat "key = value" text document with '#' comments. Used for config,
// instance and dataset files; values may be scalars, strings or
// comma-separated arrays.
class KvDoc {
 public:
  void set(const std::string& key, const std::string& value);
  void set_num(const std::string& key, double value);
  void set_int(const std::string& key, long long value);
  void set_array(const std::string& key, const std::vector<double>& values);

  bool has(const std::string& key) const;
  std::string get(const std::string& key) const;
  std::string get(const std::string& key, const std::string& fallback) const;
  double get_num(const std::string& key) const;
  double get_num(const std::string& key, double fallback) const;
  long long get_int(const std::string& key) const;
  long long get_int(const std::string& key, long long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_array(const std::string& key) const;

  const std::map<std::string, std::string>& entries() const { return entries_; }

  std::string serialize() const;
  static KvDoc parse(const std::string& text);

  void save(const std::string& path) const;
  static KvDoc load(const std::string& path);

 private:
  std::map<std::string, std::string> entries_;
};

// Exact-round-trip formatting for doubles (shortest form is not required,
// "%.17g" always reparses to the same bits).
std::string format_double(double v);
double parse_double(const std::string& s);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// Minimal CSV emitter: quoting is unnecessary because all cell content in
// this project is numeric or simple identifiers.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void add_row(const std::vector<std::string>& cells);
  const std::string& text() const { return text_; }
  void save(const std::string& path) const;
  static std::string cell(double v);

 private:
  std::size_t width_;
  std::string text_;
};

}  // namespace decopt
