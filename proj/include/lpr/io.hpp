#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lpr/error.hpp"
#include "lpr/interval.hpp"
#include "lpr/lattice.hpp"

namespace lpr::io {

using json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

/// Shortest text that reads back to the same double: 17 significant digits.
inline std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double parse_double(const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError("not a number: '" + s + "'");
  }
  if (used != s.size()) throw ConfigError("not a number: '" + s + "'");
  return v;
}

/// Integers or "n/d" strings.
inline Rational parse_rational(const json& j) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_string()) {
    static const std::regex form(R"(^\s*(-?\d+)\s*(/\s*(\d+)\s*)?$)");
    const std::string s = j.get<std::string>();
    std::smatch m;
    if (!std::regex_match(s, m, form)) throw ConfigError("not a rational: '" + s + "'");
    const Integer num(m[1].str());
    const Integer den(m[3].matched ? m[3].str() : std::string("1"));
    if (den == 0) throw ConfigError("zero denominator in '" + s + "'");
    return Rational(num, den);
  }
  throw ConfigError("expected an integer or an \"n/d\" string, got " + j.dump());
}

inline json rational_json(const Rational& r) { return to_string(r); }

/// [lower, upper] as a two-element array.
inline Interval parse_interval(const json& j) {
  if (!j.is_array() || j.size() != 2) throw ConfigError("an interval is a [lower, upper] pair, got " + j.dump());
  try {
    return Interval(parse_rational(j[0]), parse_rational(j[1]));
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
}

inline json interval_json(const Interval& i) {
  if (i.is_empty()) return "empty";
  return json::array({rational_json(i.lower()), rational_json(i.upper())});
}

inline DisjointFamily parse_family(const json& j) {
  if (!j.is_array()) throw ConfigError("a family is an array of intervals");
  std::vector<Interval> out;
  for (const auto& i : j) out.push_back(parse_interval(i));
  try {
    return DisjointFamily(std::move(out));
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

inline json family_json(const DisjointFamily& f) {
  json out = json::array();
  for (const auto& i : f) out.push_back(interval_json(i));
  return out;
}

/// Reads an object field by field and rejects keys nobody asked for.
class Reader {
 public:
  explicit Reader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw ConfigError(where_ + ": expected an object");
  }

  template <class T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
      throw ConfigError(where_ + "." + key + ": wrong type " + j_.at(key).dump());
    }
  }

  template <class Parse>
  void get_with(const char* key, Parse&& parse) {
    seen_.insert(key);
    if (j_.contains(key)) parse(j_.at(key));
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) throw ConfigError(where_ + ": unknown key '" + it.key() + "'");
  }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

inline double parse_exponent(const json& j) {
  if (j.is_string() && j.get<std::string>() == "inf") return kInfinity;
  if (j.is_number()) return j.get<double>();
  throw ConfigError("expected an exponent (number or \"inf\"), got " + j.dump());
}

inline json exponent_json(double r) { return std::isinf(r) ? json("inf") : json(r); }

/// Comma-separated rows under a fixed header. Fields never contain commas.
class Csv {
 public:
  explicit Csv(std::vector<std::string> header) : header_(std::move(header)) {}

  void add(std::vector<std::string> row) {
    if (row.size() != header_.size()) throw Error("Csv: row width differs from header");
    rows_.push_back(std::move(row));
  }

  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }

  std::string str() const {
    std::string out;
    auto line = [&out](const std::vector<std::string>& fields) {
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        out += fields[i];
      }
      out += '\n';
    };
    line(header_);
    for (const auto& r : rows_) line(r);
    return out;
  }

  static Csv parse(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    auto split = [](const std::string& l) {
      std::vector<std::string> out;
      std::string field;
      std::istringstream s(l);
      while (std::getline(s, field, ',')) out.push_back(field);
      if (!l.empty() && l.back() == ',') out.emplace_back();
      return out;
    };
    if (!std::getline(in, line)) throw IoError("Csv: missing header");
    Csv csv(split(line));
    while (std::getline(in, line))
      if (!line.empty()) csv.add(split(line));
    return csv;
  }

  std::size_t column(const std::string& name) const {
    for (std::size_t i = 0; i < header_.size(); ++i)
      if (header_[i] == name) return i;
    throw IoError("Csv: no column '" + name + "'");
  }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  out.close();
  if (!out) throw IoError("write to " + path.string() + " failed");
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline json read_json(const std::filesystem::path& path) {
  try {
    return json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

}  // namespace lpr::io
