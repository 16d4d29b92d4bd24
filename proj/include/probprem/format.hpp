#pragma once
#include <string>
#include <string_view>

namespace probprem {

// Locale-independent "%.17g" rendering; round-trips any finite double.
std::string fmt_g17(double v);

std::string json_escape(std::string_view s);

// Minimal ordered JSON emitters. Fields appear in insertion order and
// doubles are rendered with fmt_g17, so identical inputs produce
// byte-identical output. NaN/Inf map to null.
class JsonObject {
 public:
  JsonObject& field(std::string_view key, double v);
  JsonObject& field(std::string_view key, int v);
  JsonObject& field(std::string_view key, bool v);
  JsonObject& field(std::string_view key, std::string_view s);
  JsonObject& field(std::string_view key, const char* s) {
    return field(key, std::string_view(s));
  }
  JsonObject& field_raw(std::string_view key, std::string_view raw_json);
  std::string str() const;

 private:
  std::string body_;
  void key(std::string_view k);
};

class JsonArray {
 public:
  JsonArray& push(double v);
  JsonArray& push_raw(std::string_view raw_json);
  std::string str() const;

 private:
  std::string body_;
  void sep();
};

}  // namespace probprem
