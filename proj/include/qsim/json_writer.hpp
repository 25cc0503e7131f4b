#pragma once

// Minimal JSON document builder. Exists because the CLI promises byte-identical
// reruns and numbers printed with 15 significant digits; general-purpose JSON
// libraries emit shortest-round-trip doubles instead. Object keys keep
// insertion order. Output is compact (no whitespace).

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace qsim {

class Json {
 public:
  Json() : kind_(Kind::Null) {}

  static Json null() { return Json(); }
  static Json boolean(bool v);
  static Json integer(std::int64_t v);
  static Json unsigned_integer(std::uint64_t v);
  static Json real(double v);
  static Json string(std::string v);
  static Json array();
  static Json object();

  bool is_array() const { return kind_ == Kind::Array; }
  bool is_object() const { return kind_ == Kind::Object; }

  // Array append. Only valid on arrays.
  void push(Json v);
  // Object field append (no duplicate checking). Only valid on objects.
  void set(std::string key, Json v);

  std::string dump() const;

 private:
  enum class Kind { Null, Bool, Int, Uint, Real, String, Array, Object };

  void dump_to(std::string& out) const;
  static void dump_string(const std::string& s, std::string& out);
  static void dump_real(double v, std::string& out);

  Kind kind_;
  bool bool_ = false;
  std::int64_t int_ = 0;
  std::uint64_t uint_ = 0;
  double real_ = 0.0;
  std::string str_;
  std::vector<Json> items_;
  std::vector<std::pair<std::string, Json>> fields_;
};

}  // namespace qsim
