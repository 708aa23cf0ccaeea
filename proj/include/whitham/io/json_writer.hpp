#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "whitham/io/format.hpp"

namespace whitham::io {

/// Compact JSON emitter whose doubles carry 17 significant digits (the
/// library-default shortest form would change the text when values change in
/// the last ulp of their shortest representation).
class JsonWriter {
public:
  JsonWriter& begin_object() {
    separator();
    out_ += '{';
    first_.push_back(true);
    return *this;
  }
  JsonWriter& end_object() {
    out_ += '}';
    first_.pop_back();
    return *this;
  }
  JsonWriter& begin_array() {
    separator();
    out_ += '[';
    first_.push_back(true);
    return *this;
  }
  JsonWriter& end_array() {
    out_ += ']';
    first_.pop_back();
    return *this;
  }
  JsonWriter& key(const std::string& k) {
    separator();
    string_literal(k);
    out_ += ':';
    after_key_ = true;
    return *this;
  }
  JsonWriter& value(double v) {
    separator();
    out_ += fmt17(v);
    return *this;
  }
  JsonWriter& value(std::int64_t v) {
    separator();
    out_ += std::to_string(v);
    return *this;
  }
  JsonWriter& value(int v) { return value(static_cast<std::int64_t>(v)); }
  JsonWriter& value(std::size_t v) { return value(static_cast<std::int64_t>(v)); }
  JsonWriter& value(bool v) {
    separator();
    out_ += v ? "true" : "false";
    return *this;
  }
  JsonWriter& value(const std::string& s) {
    separator();
    string_literal(s);
    return *this;
  }
  JsonWriter& value(const char* s) { return value(std::string(s)); }

  template <class T> JsonWriter& field(const std::string& k, const T& v) { return key(k).value(v); }

  JsonWriter& field(const std::string& k, const std::vector<double>& v) {
    key(k).begin_array();
    for (double x : v) value(x);
    return end_array();
  }

  const std::string& str() const { return out_; }

private:
  void separator() {
    if (after_key_) {
      after_key_ = false;
      return;
    }
    if (first_.empty()) return;
    if (!first_.back()) out_ += ',';
    first_.back() = false;
  }

  void string_literal(const std::string& s) {
    out_ += '"';
    for (char c : s) {
      switch (c) {
      case '"': out_ += "\\\""; break;
      case '\\': out_ += "\\\\"; break;
      case '\n': out_ += "\\n"; break;
      case '\t': out_ += "\\t"; break;
      case '\r': out_ += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out_ += buf;
        } else {
          out_ += c;
        }
      }
    }
    out_ += '"';
  }

  std::string out_;
  std::vector<bool> first_;
  bool after_key_ = false;
};

} // namespace whitham::io
