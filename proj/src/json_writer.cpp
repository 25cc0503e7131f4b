#include "qsim/json_writer.hpp"

#include <cmath>
#include <cstdio>

namespace qsim {

Json Json::boolean(bool v) {
  Json j;
  j.kind_ = Kind::Bool;
  j.bool_ = v;
  return j;
}

Json Json::integer(std::int64_t v) {
  Json j;
  j.kind_ = Kind::Int;
  j.int_ = v;
  return j;
}

Json Json::unsigned_integer(std::uint64_t v) {
  Json j;
  j.kind_ = Kind::Uint;
  j.uint_ = v;
  return j;
}

Json Json::real(double v) {
  Json j;
  j.kind_ = Kind::Real;
  j.real_ = v;
  return j;
}

Json Json::string(std::string v) {
  Json j;
  j.kind_ = Kind::String;
  j.str_ = std::move(v);
  return j;
}

Json Json::array() {
  Json j;
  j.kind_ = Kind::Array;
  return j;
}

Json Json::object() {
  Json j;
  j.kind_ = Kind::Object;
  return j;
}

void Json::push(Json v) { items_.push_back(std::move(v)); }

void Json::set(std::string key, Json v) {
  fields_.emplace_back(std::move(key), std::move(v));
}

void Json::dump_string(const std::string& s, std::string& out) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

void Json::dump_real(double v, std::string& out) {
  if (!std::isfinite(v)) {
    out += "null";  // JSON has no Inf/NaN; nothing we emit should hit this
    return;
  }
  if (v == 0.0) v = 0.0;  // collapse negative zero so reruns match
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  out += buf;
}

void Json::dump_to(std::string& out) const {
  switch (kind_) {
    case Kind::Null: out += "null"; break;
    case Kind::Bool: out += bool_ ? "true" : "false"; break;
    case Kind::Int: out += std::to_string(int_); break;
    case Kind::Uint: out += std::to_string(uint_); break;
    case Kind::Real: dump_real(real_, out); break;
    case Kind::String: dump_string(str_, out); break;
    case Kind::Array: {
      out += '[';
      for (std::size_t i = 0; i < items_.size(); ++i) {
        if (i) out += ',';
        items_[i].dump_to(out);
      }
      out += ']';
      break;
    }
    case Kind::Object: {
      out += '{';
      for (std::size_t i = 0; i < fields_.size(); ++i) {
        if (i) out += ',';
        dump_string(fields_[i].first, out);
        out += ':';
        fields_[i].second.dump_to(out);
      }
      out += '}';
      break;
    }
  }
}

std::string Json::dump() const {
  std::string out;
  dump_to(out);
  return out;
}

}  // namespace qsim
