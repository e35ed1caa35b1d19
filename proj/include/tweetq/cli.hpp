#pragma once

#include "tweetq/bench.hpp"
#include "tweetq/qlearn.hpp"
#include "tweetq/synth.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tweetq::cli {

/// Flat key=value settings shared by every subcommand. Layers are applied as
/// defaults, then a config file, then command-line flags.
class RunConfig {
public:
    static const std::vector<std::string>& keys();
    static bool is_key(std::string_view key);

    /// Throws ArgumentError for an unknown key.
    void set(const std::string& key, std::string value);

    /// `key = value` lines; blank lines and lines starting with '#' are
    /// skipped. Throws ArgumentError naming the line on syntax errors or
    /// unknown keys.
    void merge(std::istream& in, const std::string& source);
    void merge_file(const std::filesystem::path& path);

    bool has(const std::string& key) const;
    std::optional<std::string> get(const std::string& key) const;
    std::string text(const std::string& key, std::string fallback) const;
    double number(const std::string& key, double fallback) const;
    long long integer(const std::string& key, long long fallback) const;
    std::filesystem::path path(const std::string& key) const; ///< throws ArgumentError if unset

    AgentConfig agent() const;
    SynthConfig synth() const;
    BenchConfig bench() const;
    RewardKind reward() const;
    CorpusFormat format() const;

    /// Parses every present value and validates the derived configs.
    void validate() const;

    const std::map<std::string, std::string>& values() const noexcept { return values_; }

private:
    std::map<std::string, std::string> values_;
};

/// Runs one subcommand. Returns 0 on success, 2 on usage errors and 1 on
/// runtime errors; errors are written to `err` as a one-line JSON object.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace tweetq::cli
