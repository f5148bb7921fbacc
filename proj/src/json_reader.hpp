#pragma once

#include <set>
#include <string>

#include <json.hpp>

#include "vsearch/errors.hpp"

namespace vsearch::detail {

using nlohmann::json;

/// Field accessor over one JSON object that remembers which keys were read so
/// leftovers can be rejected.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j.is_object()) throw ParseError(path_ + " must be an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json& required(const std::string& key) {
    seen_.insert(key);
    if (!j_.contains(key)) throw ParseError(field(key) + " required");
    return j_.at(key);
  }

  const json* optional(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
  }

  double number(const std::string& key) { return as_number(required(key), field(key)); }
  std::string string(const std::string& key) { return as_string(required(key), field(key)); }

  void number_opt(const std::string& key, double& out) {
    if (const json* v = optional(key)) out = as_number(*v, field(key));
  }
  void int_opt(const std::string& key, int& out) {
    if (const json* v = optional(key)) {
      if (!v->is_number_integer()) throw ParseError(field(key) + " must be an integer");
      out = v->get<int>();
    }
  }
  void bool_opt(const std::string& key, bool& out) {
    if (const json* v = optional(key)) {
      if (!v->is_boolean()) throw ParseError(field(key) + " must be a boolean");
      out = v->get<bool>();
    }
  }

  void finish() const {
    for (const auto& [k, v] : j_.items())
      if (!seen_.count(k)) throw ParseError("unknown key " + field(k));
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  static double as_number(const json& v, const std::string& name) {
    if (!v.is_number()) throw ParseError(name + " must be a number");
    return v.get<double>();
  }
  static std::string as_string(const json& v, const std::string& name) {
    if (!v.is_string()) throw ParseError(name + " must be a string");
    return v.get<std::string>();
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

}  // namespace vsearch::detail
