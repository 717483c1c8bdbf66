#include "common/textio.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace decopt {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str()) throw IoError("not a number: '" + s + "'");
  return v;
}

namespace {
std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}
}  // namespace

void KvDoc::set(const std::string& key, const std::string& value) { entries_[key] = value; }
void KvDoc::set_num(const std::string& key, double value) { entries_[key] = format_double(value); }
void KvDoc::set_int(const std::string& key, long long value) { entries_[key] = std::to_string(value); }

void KvDoc::set_array(const std::string& key, const std::vector<double>& values) {
  std::string joined;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) joined += ",";
    joined += format_double(values[i]);
  }
  entries_[key] = joined;
}

bool KvDoc::has(const std::string& key) const { return entries_.count(key) != 0; }

std::string KvDoc::get(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw IoError("missing key: " + key);
  return it->second;
}

std::string KvDoc::get(const std::string& key, const std::string& fallback) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second;
}

double KvDoc::get_num(const std::string& key) const { return parse_double(get(key)); }
double KvDoc::get_num(const std::string& key, double fallback) const {
  return has(key) ? parse_double(get(key)) : fallback;
}
long long KvDoc::get_int(const std::string& key) const { return std::llround(parse_double(get(key))); }
long long KvDoc::get_int(const std::string& key, long long fallback) const {
  return has(key) ? get_int(key) : fallback;
}

bool KvDoc::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string v = get(key);
  return v == "1" || v == "true" || v == "yes" || v == "on";
}

std::vector<double> KvDoc::get_array(const std::string& key) const {
  std::vector<double> out;
  std::stringstream ss(get(key));
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_double(item));
  }
  return out;
}

std::string KvDoc::serialize() const {
  std::string out;
  for (const auto& [k, v] : entries_) {
    out += k;
    out += " = ";
    out += v;
    out += "\n";
  }
  return out;
}

KvDoc KvDoc::parse(const std::string& text) {
  KvDoc doc;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw IoError("line " + std::to_string(lineno) + ": expected 'key = value'");
    doc.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return doc;
}

void KvDoc::save(const std::string& path) const { write_text_file(path, serialize()); }
KvDoc KvDoc::load(const std::string& path) { return parse(read_text_file(path)); }

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << content;
  if (!out) throw IoError("write failed: " + path);
}

CsvWriter::CsvWriter(std::vector<std::string> header) : width_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) text_ += ",";
    text_ += header[i];
  }
  text_ += "\n";
}

void CsvWriter::add_row(const std::vector<std::string>& cells) {
  if (cells.size() != width_) throw IoError("csv row width mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) text_ += ",";
    text_ += cells[i];
  }
  text_ += "\n";
}

void CsvWriter::save(const std::string& path) const { write_text_file(path, text_); }

std::string CsvWriter::cell(double v) { return format_double(v); }

}  // namespace decopt
