#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "beliefnet/markov.hpp"

namespace beliefnet::cli {

/// Bad input: unknown field, unparsable value, or out-of-range value. The
/// message always starts with the offending field name.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Kind { integer, count, real, real_list, int_list, text, flag, rational };

struct Field {
    std::string key;
    Kind kind = Kind::real;
    std::string fallback;  // default, in canonical form
    std::string help;
    std::optional<double> min;      // inclusive
    std::optional<double> max;      // inclusive
    bool min_exclusive = false;
    std::vector<std::string> choices;  // allowed text values
    bool list = false;                  // text: comma-separated values allowed
};

struct Schema {
    std::string command;
    std::string summary;
    std::vector<Field> fields;

    /// Nullptr for an unknown key.
    const Field* find(std::string_view key) const;
};

/// simulate, fig2, fig4, markov, validate.
const std::vector<Schema>& schemas();
/// Throws ConfigError for an unknown command.
const Schema& schema_for(std::string_view command);

/// Default master seed of every command.
inline constexpr std::uint64_t kDefaultSeed = 20'240'611;

using Values = std::vector<std::pair<std::string, std::string>>;

/// A fully resolved configuration: every schema field in schema order, each
/// value in canonical text form.
class Config {
public:
    Config(std::string command, Values entries);

    const std::string& command() const noexcept { return command_; }
    const Values& entries() const noexcept { return entries_; }

    const std::string& text(std::string_view key) const;
    std::int64_t integer(std::string_view key) const;
    std::uint64_t count(std::string_view key) const;
    double real(std::string_view key) const;
    std::vector<double> reals(std::string_view key) const;
    std::vector<int> ints(std::string_view key) const;
    /// Comma-separated text values.
    std::vector<std::string> texts(std::string_view key) const;
    bool flag(std::string_view key) const;
    markov::Rational rational(std::string_view key) const;

    friend bool operator==(const Config&, const Config&) = default;

private:
    std::string command_;
    Values entries_;
};

/// Parses and range-checks one value, returning its canonical form.
std::string canonicalize(const Field& field, std::string_view raw);

/// Key-value INI text. Keys may sit at top level or under [config]; a [run]
/// section (written by manifests) is skipped unless its command disagrees
/// with `command`.
Values read_config(std::istream& in, std::string_view command);
Values read_config_file(const std::filesystem::path& path, std::string_view command);

/// Defaults, then `file`, then `overrides`; later layers win.
Config resolve(std::string_view command, const Values& file = {}, const Values& overrides = {});

struct RunManifest {
    Config config;
    std::string version;
    std::vector<std::string> outputs;
    unsigned workers = 1;
    double duration_seconds = 0.0;
};

/// [config] with every resolved field (seed included), then [run].
void write_manifest(const RunManifest& m, std::ostream& out);

std::string_view version();

}  // namespace beliefnet::cli
