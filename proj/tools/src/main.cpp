#include <algorithm>
#include <cstdio>
#include <iostream>
#include <map>
#include <memory>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "beliefnet/cli/commands.hpp"
#include "beliefnet/cli/config.hpp"

namespace cli = beliefnet::cli;

namespace {

struct Subcommand {
    const cli::Schema* schema = nullptr;
    CLI::App* app = nullptr;
    std::string config;
    std::string out_dir = ".";
    unsigned workers = 1;
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> options;
};

std::unique_ptr<Subcommand> add_subcommand(CLI::App& app, const cli::Schema& schema) {
    auto s = std::make_unique<Subcommand>();
    s->schema = &schema;
    s->app = app.add_subcommand(schema.command, schema.summary);
    s->app->add_option("--config", s->config, "key-value config file or a previous run manifest");
    s->app->add_option("--out-dir", s->out_dir, "output directory")->capture_default_str();
    s->app->add_option("--workers", s->workers, "worker threads, 0 for all cores")
        ->capture_default_str();
    for (const auto& f : schema.fields) {
        std::string names = "--" + f.key;
        std::string dashed = f.key;
        std::replace(dashed.begin(), dashed.end(), '_', '-');
        if (dashed != f.key) names += ",--" + dashed;
        s->options[f.key] =
            s->app->add_option(names, s->values[f.key], fmt::format("{} [{}]", f.help, f.fallback));
    }
    return s;
}

int dispatch(const Subcommand& s) {
    const std::string& command = s.schema->command;
    try {
        cli::Values file;
        if (!s.config.empty()) file = cli::read_config_file(s.config, command);
        cli::Values overrides;
        for (const auto& f : s.schema->fields)
            if (s.options.at(f.key)->count() > 0) overrides.emplace_back(f.key, s.values.at(f.key));
        const auto cfg = cli::resolve(command, file, overrides);
        const auto manifest = cli::execute(cfg, {s.out_dir, s.workers}, std::cout);
        std::cout.flush();
        fmt::print(stderr, "{}: wrote {} ({:.2f}s)\n", command,
                   cli::manifest_path(s.out_dir, command).string(), manifest.duration_seconds);
        return 0;
    } catch (const cli::ConfigError& e) {
        fmt::print(stderr, "{}: config error: {}\n", command, e.what());
        return 1;
    } catch (const std::exception& e) {
        fmt::print(stderr, "{}: failed: {}\n", command, e.what());
        return 2;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Belief-network contagion simulator and exact star Markov chain"};
    app.set_version_flag("--version", std::string(cli::version()));
    app.require_subcommand(1);

    std::vector<std::unique_ptr<Subcommand>> subcommands;
    for (const auto& schema : cli::schemas()) subcommands.push_back(add_subcommand(app, schema));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }
    for (const auto& s : subcommands)
        if (s->app->parsed()) return dispatch(*s);
    return 1;
}
