#include "probprem/format.hpp"

#include <cmath>
#include <cstdio>

namespace probprem {

std::string fmt_g17(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";  // fold away the sign of -0
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string json_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c; break;
    }
  }
  return out;
}

namespace {
std::string json_number(double v) {
  if (!std::isfinite(v)) return "null";
  return fmt_g17(v);
}
}  // namespace

void JsonObject::key(std::string_view k) {
  if (!body_.empty()) body_ += ',';
  body_ += '"';
  body_ += json_escape(k);
  body_ += "\":";
}

JsonObject& JsonObject::field(std::string_view k, double v) {
  key(k);
  body_ += json_number(v);
  return *this;
}

JsonObject& JsonObject::field(std::string_view k, int v) {
  key(k);
  body_ += std::to_string(v);
  return *this;
}

JsonObject& JsonObject::field(std::string_view k, bool v) {
  key(k);
  body_ += v ? "true" : "false";
  return *this;
}

JsonObject& JsonObject::field(std::string_view k, std::string_view s) {
  key(k);
  body_ += '"';
  body_ += json_escape(s);
  body_ += '"';
  return *this;
}

JsonObject& JsonObject::field_raw(std::string_view k, std::string_view raw) {
  key(k);
  body_ += raw;
  return *this;
}

std::string JsonObject::str() const { return "{" + body_ + "}"; }

void JsonArray::sep() {
  if (!body_.empty()) body_ += ',';
}

JsonArray& JsonArray::push(double v) {
  sep();
  body_ += json_number(v);
  return *this;
}

JsonArray& JsonArray::push_raw(std::string_view raw) {
  sep();
  body_ += raw;
  return *this;
}

std::string JsonArray::str() const { return "[" + body_ + "]"; }

}  // namespace probprem
