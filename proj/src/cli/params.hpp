#pragma once

#include <set>
#include <string>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "ltd/cli.hpp"
#include "ltd/errors.hpp"

namespace ltd::cli {

nlohmann::json resolved_object(const RunConfig& cfg, std::string& scenario, std::string& preset);

/// Typed access to the merged parameter object; keys never read are
/// reported by finish().
class ParamReader {
 public:
  explicit ParamReader(nlohmann::json j) : j_(std::move(j)) {}

  bool has(const std::string& key) const { return j_.contains(key); }

  template <class T>
  T get(const std::string& key, T fallback) {
    used_.insert(key);
    if (!j_.contains(key)) return fallback;
    try {
      return j_.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
      fail(ErrorKind::parameter, fmt::format("parameter '{}' has the wrong type", key));
    }
  }

  template <class T>
  std::optional<T> opt(const std::string& key) {
    if (!j_.contains(key)) {
      used_.insert(key);
      return std::nullopt;
    }
    return get<T>(key, T{});
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!used_.count(it.key()))
        fail(ErrorKind::parameter, fmt::format("unknown parameter '{}'", it.key()));
  }

 private:
  nlohmann::json j_;
  std::set<std::string> used_;
};

}  // namespace ltd::cli
