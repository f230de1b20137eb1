#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qfp/errors.hpp"

namespace qfp::cli {

/// Bad flag, unknown key, unreadable file or malformed value. Exit code 2.
class ConfigError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Ordered key -> default value table for one command.
using Schema = std::vector<std::pair<std::string, std::string>>;

/// Resolved key=value settings. Sources, lowest priority first: schema defaults,
/// top-level and [command] section of the --config file, then --key value flags.
class Config {
public:
    static Config resolve(const std::string& command, const Schema& schema, const std::vector<std::string>& flags);

    [[nodiscard]] const std::string& text(const std::string& key) const;
    [[nodiscard]] double number(const std::string& key) const;
    [[nodiscard]] std::size_t count(const std::string& key) const;
    [[nodiscard]] std::vector<std::string> list(const std::string& key) const;
    [[nodiscard]] std::vector<double> numbers(const std::string& key) const;
    /// Resolved entries in schema order.
    [[nodiscard]] const std::vector<std::pair<std::string, std::string>>& entries() const noexcept { return entries_; }

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

/// Strict parse of a finite double; ConfigError naming the key otherwise.
[[nodiscard]] double parse_number(const std::string& key, const std::string& value);

}  // namespace qfp::cli
