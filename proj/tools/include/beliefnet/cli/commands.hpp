#pragma once

#include <filesystem>
#include <iosfwd>

#include "beliefnet/cli/config.hpp"
#include "beliefnet/experiments.hpp"

namespace beliefnet::cli {

struct RunOptions {
    std::filesystem::path out_dir = ".";
    unsigned workers = 1;
};

/// Thrown by validate when a check fails; maps to exit status 2.
class CheckFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Campaign configs built from a resolved Config. Cross-field violations
/// throw ConfigError.
experiments::Fig2Config fig2_config(const Config& cfg, int scenario, experiments::Variant variant);
experiments::Fig4Config fig4_config(const Config& cfg);

/// Runs cfg.command(), writes its outputs plus <command>_manifest.ini into
/// opts.out_dir and a human-readable summary to `log`.
RunManifest execute(const Config& cfg, const RunOptions& opts, std::ostream& log);

std::filesystem::path manifest_path(const std::filesystem::path& out_dir, const std::string& command);

}  // namespace beliefnet::cli
