#pragma once

// Strict field access over nlohmann::json objects: every key must be read or
// finish() reports it as unexpected.

#include <cstdint>
#include <set>
#include <string>
#include <string_view>

#include "json.hpp"

#include "instructkit/errors.hpp"

namespace instructkit::detail {

template <class ErrorT = SchemaError>
class ObjectReader {
 public:
  ObjectReader(const nlohmann::json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ErrorT(path_ + ": expected an object");
  }

  const std::string& path() const noexcept { return path_; }
  std::string child(std::string_view key) const { return path_ + "." + std::string(key); }

  const nlohmann::json& required(std::string_view key) {
    const auto it = j_.find(std::string(key));
    if (it == j_.end()) throw ErrorT(path_ + ": missing required field '" + std::string(key) + "'");
    seen_.insert(std::string(key));
    return *it;
  }

  /// nullptr when absent or null.
  const nlohmann::json* optional(std::string_view key) {
    const auto it = j_.find(std::string(key));
    if (it == j_.end()) return nullptr;
    seen_.insert(std::string(key));
    return it->is_null() ? nullptr : &*it;
  }

  double number(std::string_view key) { return as_number(required(key), child(key)); }
  int integer(std::string_view key) { return as_int(required(key), child(key)); }
  bool boolean(std::string_view key) { return as_bool(required(key), child(key)); }
  std::string string(std::string_view key) { return as_string(required(key), child(key)); }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.contains(it.key())) {
        throw ErrorT(path_ + ": unexpected field '" + it.key() + "'");
      }
    }
  }

  static double as_number(const nlohmann::json& v, const std::string& where) {
    if (!v.is_number()) throw ErrorT(where + ": expected a number");
    return v.get<double>();
  }
  static int as_int(const nlohmann::json& v, const std::string& where) {
    if (!v.is_number_integer()) throw ErrorT(where + ": expected an integer");
    const auto value = v.get<std::int64_t>();
    if (value < INT32_MIN || value > INT32_MAX) throw ErrorT(where + ": integer out of range");
    return static_cast<int>(value);
  }
  static bool as_bool(const nlohmann::json& v, const std::string& where) {
    if (!v.is_boolean()) throw ErrorT(where + ": expected a boolean");
    return v.get<bool>();
  }
  static std::string as_string(const nlohmann::json& v, const std::string& where) {
    if (!v.is_string()) throw ErrorT(where + ": expected a string");
    return v.get<std::string>();
  }
  static const nlohmann::json& as_array(const nlohmann::json& v, const std::string& where) {
    if (!v.is_array()) throw ErrorT(where + ": expected an array");
    return v;
  }

 private:
  const nlohmann::json& j_;
  std::string path_;
  std::set<std::string, std::less<>> seen_;
};

}  // namespace instructkit::detail
