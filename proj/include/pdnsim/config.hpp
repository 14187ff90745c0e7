#pragma once

#include <nlohmann/json.hpp>
#include <stdexcept>
#include <string>

namespace pdnsim {

using json = nlohmann::json;

// ============================================================================
// Scenario configuration
//
// Every scenario ships a complete default document. User input (a config file
// or a command line override) can only change values that already exist, with
// a matching type; anything else is reported with its full dotted path rather
// than silently ignored.
// ============================================================================

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline bool same_value_kind(const json& defaults, const json& candidate) {
    if (defaults.is_number() && candidate.is_number()) {
        if (defaults.is_number_float()) return true;
        if (candidate.is_number_float()) return false;
        if (defaults.is_number_unsigned())
            return candidate.is_number_unsigned() ||
                   (candidate.is_number_integer() && candidate.get<std::int64_t>() >= 0);
        return true;
    }
    return defaults.type() == candidate.type();
}

inline void merge_into(json& target, const json& user, const std::string& path) {
    if (!user.is_object())
        throw ConfigError("config value at '" + (path.empty() ? "<root>" : path) +
                          "' must be an object");
    for (const auto& [key, value] : user.items()) {
        std::string here = path.empty() ? key : path + "." + key;
        auto it = target.find(key);
        if (it == target.end()) throw ConfigError("unknown config key '" + here + "'");
        if (it->is_object()) {
            merge_into(*it, value, here);
            continue;
        }
        if (!same_value_kind(*it, value))
            throw ConfigError("config key '" + here + "' expects " +
                              std::string(it->type_name()) + ", got " +
                              std::string(value.type_name()));
        if (it->is_number_float() && value.is_number())
            *it = value.get<double>();
        else
            *it = value;
    }
}

}  // namespace detail

class Config {
  public:
    explicit Config(json defaults) : values_(std::move(defaults)) {}

    // Deep-merges a user-supplied document over the defaults.
    void merge(const json& user) { detail::merge_into(values_, user, ""); }

    // Applies one "dotted.path=value" override. The value is parsed as JSON
    // when possible so numbers, booleans, and arrays work; otherwise it is
    // taken as a string.
    void set(const std::string& assignment) {
        auto eq = assignment.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ConfigError("override '" + assignment + "' is not of the form key=value");
        std::string path = assignment.substr(0, eq);
        std::string raw = assignment.substr(eq + 1);

        json value = json::parse(raw, nullptr, false);
        if (value.is_discarded()) value = raw;

        json* slot = &values_;
        std::size_t start = 0;
        while (true) {
            std::size_t dot = path.find('.', start);
            std::string key = path.substr(start, dot - start);
            if (!slot->is_object() || !slot->contains(key))
                throw ConfigError("unknown config key '" + path.substr(0, dot) + "'");
            slot = &(*slot)[key];
            if (dot == std::string::npos) break;
            start = dot + 1;
        }
        if (slot->is_object()) throw ConfigError("config key '" + path + "' is a section");
        if (slot->is_string() && !value.is_string()) value = raw;
        if (!detail::same_value_kind(*slot, value))
            throw ConfigError("config key '" + path + "' expects " +
                              std::string(slot->type_name()) + ", got " +
                              std::string(value.type_name()));
        if (slot->is_number_float() && value.is_number())
            *slot = value.get<double>();
        else
            *slot = value;
    }

    const json& values() const { return values_; }
    const json& at(const std::string& key) const { return values_.at(key); }

    std::uint64_t u64(const std::string& section, const std::string& key) const {
        return values_.at(section).at(key).get<std::uint64_t>();
    }
    double dbl(const std::string& section, const std::string& key) const {
        return values_.at(section).at(key).get<double>();
    }
    std::string str(const std::string& section, const std::string& key) const {
        return values_.at(section).at(key).get<std::string>();
    }
    std::uint64_t u64(const std::string& key) const { return values_.at(key).get<std::uint64_t>(); }
    double dbl(const std::string& key) const { return values_.at(key).get<double>(); }
    std::string str(const std::string& key) const { return values_.at(key).get<std::string>(); }

  private:
    json values_;
};

}  // namespace pdnsim
