#include "beliefnet/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include <boost/algorithm/string/join.hpp>
#include <boost/algorithm/string/split.hpp>
#include <boost/algorithm/string/trim.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "beliefnet/experiments.hpp"

namespace beliefnet::cli {
namespace {

std::string join_reals(const std::vector<double>& xs) {
    std::vector<std::string> parts;
    for (double x : xs) parts.push_back(fmt::format("{}", x));
    return boost::algorithm::join(parts, ",");
}

Field seed_field() {
    return {"seed", Kind::count, std::to_string(kDefaultSeed), "master seed", {}, {}, false, {}, false};
}

Field nonneg(std::string key, std::string fallback, std::string help) {
    return {std::move(key), Kind::real, std::move(fallback), std::move(help), 0.0, {}, false, {}};
}

Field unit(std::string key, std::string fallback, std::string help) {
    return {std::move(key), Kind::real, std::move(fallback), std::move(help), 0.0, 1.0, false, {}};
}

Field positive_count(std::string key, std::string fallback, std::string help) {
    return {std::move(key), Kind::count, std::move(fallback), std::move(help), 1.0, {}, false, {}};
}

const std::vector<std::string> kVariants = {"zealot-similar", "free-similar"};

// Every numeric default lives here. Campaign values follow the published
// protocols: star N=40, sigma=0.2, alpha=1.5, beta=1, 50 runs x 10 repeats;
// two-community N=100, M=1500, sigma=0.2, alpha=2, beta=1, 40 ensembles.
std::vector<Schema> build_schemas() {
    const experiments::Fig4Config fig4;
    std::vector<Schema> out;

    out.push_back({"simulate",
                   "single run, trajectory CSV",
                   {
                       seed_field(),
                       {"graph", Kind::text, "star", "star or two-community", {}, {}, false,
                        {"star", "two-community"}},
                       {"n", Kind::integer, "40", "number of nodes", 2.0, {}, false, {}},
                       {"scenario", Kind::integer, "1", "star scenario (1 or 2)", 1.0, 2.0, false, {}},
                       {"m", Kind::integer, "0", "dissimilar zealots on the star", 0.0, {}, false, {}},
                       {"variant", Kind::text, "zealot-similar", "similar leaves held fixed or free",
                        {}, {}, false, kVariants},
                       {"m_edges", Kind::count, "1500", "edges of the two-community graph", {}, {},
                        false, {}},
                       unit("omega", "0.3", "fraction of inter-community edges"),
                       unit("rho0", "0.09", "zealot fraction in community 0"),
                       nonneg("alpha", "1.5", "social influence"),
                       nonneg("beta", "1", "internal coherence"),
                       nonneg("sigma", "0.2", "noise standard deviation"),
                       {"steps", Kind::count, "10000", "interaction budget", {}, {}, false, {}},
                       positive_count("window", "1000", "events per stationarity check"),
                       nonneg("tol", "0.01", "stationarity tolerance"),
                       {"stop_at_stationarity", Kind::flag, "false", "stop early once stationary",
                        {}, {}, false, {}},
                       {"snapshot_every", Kind::count, "1", "events between trajectory rows", {}, {},
                        false, {}},
                       {"track", Kind::integer, "0", "node whose beliefs are recorded (-1: none)",
                        -1.0, {}, false, {}},
                       {"export_graph", Kind::flag, "false", "also write graph.edges", {}, {}, false,
                        {}},
                   }});

    out.push_back({"fig2",
                   "star flip-probability campaign",
                   {
                       seed_field(),
                       {"n", Kind::integer, "40", "star size", 2.0, {}, false, {}},
                       nonneg("sigma", "0.2", "noise standard deviation"),
                       nonneg("alpha", "1.5", "social influence"),
                       nonneg("beta", "1", "internal coherence"),
                       positive_count("runs", "50", "runs per point"),
                       positive_count("repeats", "10", "repeats per point"),
                       {"scenario", Kind::int_list, "1,2", "scenarios to run", 1.0, 2.0, false, {}},
                       {"variant", Kind::text, "zealot-similar", "variants to run (comma list)", {},
                        {}, false, kVariants, true},
                       {"steps", Kind::count, "10000", "events per run", {}, {}, false, {}},
                   }});

    out.push_back({"fig4",
                   "two-community modularity sweep",
                   {
                       seed_field(),
                       {"n", Kind::integer, std::to_string(fig4.n), "nodes", 2.0, {}, false, {}},
                       {"m_edges", Kind::count, std::to_string(fig4.m_edges), "edges", 1.0, {},
                        false, {}},
                       nonneg("sigma", fmt::format("{}", fig4.sigma), "noise standard deviation"),
                       nonneg("alpha", fmt::format("{}", fig4.alpha), "social influence"),
                       nonneg("beta", fmt::format("{}", fig4.beta), "internal coherence"),
                       positive_count("ensembles", std::to_string(fig4.ensembles),
                                      "graphs per point"),
                       {"rho0_grid", Kind::real_list, join_reals(fig4.rho0_grid),
                        "zealot fractions", 0.0, 0.5, false, {}},
                       {"omega_grid", Kind::real_list, join_reals(fig4.omega_grid),
                        "mixing parameters", 0.0, 1.0, false, {}},
                       {"cross_rho0", Kind::real_list, join_reals(fig4.cross_rho0),
                        "cross-section zealot fractions", 0.0, 0.5, false, {}},
                       positive_count("budget_per_node", std::to_string(fig4.budget_per_node),
                                      "events per node and run"),
                       positive_count("window_per_node", std::to_string(fig4.window_per_node),
                                      "averaging window per node"),
                       nonneg("stationarity_tol", fmt::format("{}", fig4.stationarity_tol),
                              "stationarity tolerance"),
                       {"stop_at_stationarity", Kind::flag, "false", "stop early once stationary",
                        {}, {}, false, {}},
                       unit("global_min", fmt::format("{}", fig4.thresholds.global_min),
                            "global phase threshold"),
                       unit("local_min", fmt::format("{}", fig4.thresholds.local_min),
                            "local phase lower bound"),
                       unit("local_max", fmt::format("{}", fig4.thresholds.local_max),
                            "local phase upper bound"),
                       unit("none_margin", fmt::format("{}", fig4.thresholds.none_margin),
                            "no-spread margin above rho0"),
                   }});

    out.push_back({"markov",
                   "exact star Markov chain",
                   {
                       seed_field(),
                       {"scenario", Kind::integer, "1", "star scenario (1 or 2)", 1.0, 2.0, false, {}},
                       {"alpha", Kind::rational, "1.5", "social influence (exact)", 0.0, {}, false, {}},
                       {"beta", Kind::rational, "1", "internal coherence (exact)", 0.0, {}, false, {}},
                       {"k", Kind::integer, "39", "hub degree", 1.0, {}, false, {}},
                       {"export_m", Kind::integer, "-1", "write the numeric matrix at this m (-1: off)",
                        -1.0, {}, false, {}},
                   }});

    out.push_back({"validate",
                   "quick invariant suite",
                   {
                       seed_field(),
                       {"full", Kind::flag, "false", "also run the campaign-scale checks", {}, {},
                        false, {}},
                       positive_count("events", "1000000", "events for the zealot/bounds check"),
                       positive_count("networks", "1000", "networks for the gradient check"),
                   }});
    return out;
}

[[noreturn]] void fail(const Field& f, const std::string& what, std::string_view raw) {
    throw ConfigError(fmt::format("{}: {} (got '{}')", f.key, what, raw));
}

std::string trimmed(std::string_view raw) {
    return boost::algorithm::trim_copy(std::string(raw));
}

std::vector<std::string> split_list(std::string_view raw) {
    std::vector<std::string> parts;
    const std::string text = trimmed(raw);
    if (text.empty()) return parts;
    boost::algorithm::split(parts, text, [](char c) { return c == ','; });
    for (auto& p : parts) boost::algorithm::trim(p);
    return parts;
}

template <typename T>
bool parse_number(const std::string& text, T& out) {
    const char* first = text.data();
    const char* last = first + text.size();
    if (first != last && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last && first != last;
}

void check_range(const Field& f, double x, std::string_view raw) {
    if (f.min) {
        if (f.min_exclusive ? !(x > *f.min) : !(x >= *f.min))
            fail(f, fmt::format("must be {} {}", f.min_exclusive ? ">" : ">=", *f.min), raw);
    }
    if (f.max && !(x <= *f.max)) fail(f, fmt::format("must be <= {}", *f.max), raw);
}

double parse_real(const Field& f, const std::string& text, std::string_view raw) {
    double x = 0.0;
    if (!parse_number(text, x) || !std::isfinite(x)) fail(f, "expected a finite number", raw);
    check_range(f, x, raw);
    return x;
}

std::int64_t parse_integer(const Field& f, const std::string& text, std::string_view raw) {
    std::int64_t x = 0;
    if (!parse_number(text, x)) fail(f, "expected an integer", raw);
    check_range(f, static_cast<double>(x), raw);
    return x;
}

const std::string& lookup(const Values& entries, std::string_view key) {
    for (const auto& [k, v] : entries)
        if (k == key) return v;
    throw std::out_of_range(fmt::format("no config field '{}'", key));
}

}  // namespace

const Field* Schema::find(std::string_view key) const {
    for (const auto& f : fields)
        if (f.key == key) return &f;
    return nullptr;
}

const std::vector<Schema>& schemas() {
    static const std::vector<Schema> all = build_schemas();
    return all;
}

const Schema& schema_for(std::string_view command) {
    for (const auto& s : schemas())
        if (s.command == command) return s;
    throw ConfigError(fmt::format("command: unknown command '{}'", command));
}

std::string canonicalize(const Field& f, std::string_view raw) {
    const std::string text = trimmed(raw);
    switch (f.kind) {
    case Kind::integer:
        return std::to_string(parse_integer(f, text, raw));
    case Kind::count: {
        std::uint64_t x = 0;
        if (!parse_number(text, x)) fail(f, "expected a non-negative integer", raw);
        check_range(f, static_cast<double>(x), raw);
        return std::to_string(x);
    }
    case Kind::real:
        return fmt::format("{}", parse_real(f, text, raw));
    case Kind::real_list: {
        std::vector<double> xs;
        for (const auto& p : split_list(text)) xs.push_back(parse_real(f, p, raw));
        if (xs.empty()) fail(f, "expected at least one value", raw);
        return join_reals(xs);
    }
    case Kind::int_list: {
        std::vector<std::string> parts;
        for (const auto& p : split_list(text)) parts.push_back(std::to_string(parse_integer(f, p, raw)));
        if (parts.empty()) fail(f, "expected at least one value", raw);
        return boost::algorithm::join(parts, ",");
    }
    case Kind::text: {
        const auto parts = split_list(text);
        if (parts.empty()) fail(f, "expected a value", raw);
        if (parts.size() > 1 && !f.list) fail(f, "expected a single value", raw);
        if (!f.choices.empty()) {
            for (const auto& p : parts)
                if (std::find(f.choices.begin(), f.choices.end(), p) == f.choices.end())
                    fail(f, fmt::format("must be one of {}", boost::algorithm::join(f.choices, ", ")),
                         raw);
        }
        return boost::algorithm::join(parts, ",");
    }
    case Kind::flag: {
        std::string lower = text;
        std::transform(lower.begin(), lower.end(), lower.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (lower == "true" || lower == "1" || lower == "yes" || lower == "on") return "true";
        if (lower == "false" || lower == "0" || lower == "no" || lower == "off") return "false";
        fail(f, "expected true or false", raw);
    }
    case Kind::rational: {
        markov::Rational r;
        try {
            r = markov::parse_rational(text);
        } catch (const std::invalid_argument&) {
            fail(f, "expected a number or fraction", raw);
        }
        check_range(f, markov::to_double(r), raw);
        return markov::format_rational(r);
    }
    }
    fail(f, "unsupported field kind", raw);
}

Config::Config(std::string command, Values entries)
    : command_(std::move(command)), entries_(std::move(entries)) {}

const std::string& Config::text(std::string_view key) const { return lookup(entries_, key); }

std::int64_t Config::integer(std::string_view key) const { return std::stoll(text(key)); }

std::uint64_t Config::count(std::string_view key) const { return std::stoull(text(key)); }

double Config::real(std::string_view key) const { return std::stod(text(key)); }

std::vector<double> Config::reals(std::string_view key) const {
    std::vector<double> out;
    for (const auto& p : split_list(text(key))) out.push_back(std::stod(p));
    return out;
}

std::vector<int> Config::ints(std::string_view key) const {
    std::vector<int> out;
    for (const auto& p : split_list(text(key))) out.push_back(std::stoi(p));
    return out;
}

std::vector<std::string> Config::texts(std::string_view key) const { return split_list(text(key)); }

bool Config::flag(std::string_view key) const { return text(key) == "true"; }

markov::Rational Config::rational(std::string_view key) const {
    return markov::parse_rational(text(key));
}

Values read_config(std::istream& in, std::string_view command) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(fmt::format("config: line {}: {}", e.line(), e.message()));
    }
    Values out;
    for (const auto& [name, node] : tree) {
        if (node.empty()) {
            out.emplace_back(name, node.data());
        } else if (name == "config") {
            for (const auto& [key, value] : node) {
                if (!value.empty()) throw ConfigError(fmt::format("{}: nested sections are not allowed", key));
                out.emplace_back(key, value.data());
            }
        } else if (name == "run") {
            const auto recorded = node.get_optional<std::string>("command");
            if (recorded && *recorded != command)
                throw ConfigError(fmt::format("command: manifest was written by '{}', not '{}'",
                                              *recorded, command));
        } else {
            throw ConfigError(fmt::format("[{}]: unknown section", name));
        }
    }
    return out;
}

Values read_config_file(const std::filesystem::path& path, std::string_view command) {
    std::ifstream in(path);
    if (!in) throw ConfigError(fmt::format("config: cannot open '{}'", path.string()));
    return read_config(in, command);
}

Config resolve(std::string_view command, const Values& file, const Values& overrides) {
    const Schema& schema = schema_for(command);
    Values entries;
    for (const auto& f : schema.fields) entries.emplace_back(f.key, canonicalize(f, f.fallback));
    auto apply = [&](const Values& layer) {
        for (const auto& [key, raw] : layer) {
            const Field* f = schema.find(key);
            if (!f) throw ConfigError(fmt::format("{}: unknown field for '{}'", key, command));
            const auto pos = static_cast<std::size_t>(f - schema.fields.data());
            entries[pos].second = canonicalize(*f, raw);
        }
    };
    apply(file);
    apply(overrides);
    return Config(std::string(command), std::move(entries));
}

void write_manifest(const RunManifest& m, std::ostream& out) {
    out << "[config]\n";
    for (const auto& [k, v] : m.config.entries()) out << k << " = " << v << '\n';
    out << "\n[run]\n";
    out << "command = " << m.config.command() << '\n';
    out << "version = " << m.version << '\n';
    out << "outputs = " << boost::algorithm::join(m.outputs, ",") << '\n';
    out << "workers = " << m.workers << '\n';
    out << "duration_seconds = " << fmt::format("{:.3f}", m.duration_seconds) << '\n';
}

std::string_view version() { return BELIEFNET_VERSION; }

}  // namespace beliefnet::cli
