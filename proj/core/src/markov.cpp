#include "beliefnet/markov.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <deque>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

#include <fmt/format.h>

namespace beliefnet::markov {

using boost::multiprecision::cpp_int;

namespace {

cpp_int pow10(unsigned k) {
    cpp_int p = 1;
    for (unsigned i = 0; i < k; ++i) p *= 10;
    return p;
}

cpp_int parse_integer(std::string_view digits, std::string_view whole) {
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(),
                                       [](unsigned char c) { return std::isdigit(c); }))
        throw std::invalid_argument("not a rational number: \"" + std::string(whole) + "\"");
    return cpp_int(std::string(digits));
}

}  // namespace

Rational parse_rational(std::string_view text) {
    std::string_view s = text;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }

    Rational r;
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        const cpp_int den = parse_integer(s.substr(slash + 1), text);
        if (den == 0) throw std::invalid_argument("zero denominator in \"" + std::string(text) + "\"");
        r = Rational(parse_integer(s.substr(0, slash), text), den);
    } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
        const auto int_part = s.substr(0, dot);
        const auto frac_part = s.substr(dot + 1);
        if (int_part.empty() && frac_part.empty())
            throw std::invalid_argument("not a rational number: \"" + std::string(text) + "\"");
        const cpp_int whole = int_part.empty() ? cpp_int(0) : parse_integer(int_part, text);
        const cpp_int frac = frac_part.empty() ? cpp_int(0) : parse_integer(frac_part, text);
        const cpp_int scale = pow10(static_cast<unsigned>(frac_part.size()));
        r = Rational(whole * scale + frac, scale);
    } else {
        r = Rational(parse_integer(s, text));
    }
    return negative ? Rational(-r) : r;
}

Rational to_rational(double x) {
    if (!std::isfinite(x) || std::abs(x) > 1e12)
        throw std::invalid_argument("cannot represent " + std::to_string(x) + " exactly");
    for (unsigned k = 0; k <= 12; ++k) {
        const double scale = std::pow(10.0, k);
        const double scaled = std::nearbyint(x * scale);
        if (scaled / scale == x)
            return Rational(cpp_int(static_cast<long long>(scaled)), pow10(k));
    }
    throw std::invalid_argument(fmt::format("{} has no short decimal expansion; pass it as a "
                                            "fraction",
                                            x));
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

std::string format_rational(const Rational& r) {
    const cpp_int num = numerator(r);
    const cpp_int den = denominator(r);
    if (den == 1) return num.str();

    cpp_int rest = den;
    unsigned twos = 0, fives = 0;
    while (rest % 2 == 0) { rest /= 2; ++twos; }
    while (rest % 5 == 0) { rest /= 5; ++fives; }
    if (rest != 1) return num.str() + "/" + den.str();

    const unsigned digits = std::max(twos, fives);
    const cpp_int scaled = abs(num) * pow10(digits) / den;
    std::string body = scaled.str();
    if (body.size() <= digits) body.insert(0, digits + 1 - body.size(), '0');
    body.insert(body.size() - digits, ".");
    while (body.back() == '0') body.pop_back();
    return (num < 0 ? "-" : "") + body;
}

ExactBeliefState::ExactBeliefState(std::vector<Rational> w) : weights(std::move(w)) {
    ConceptGraph::concepts_for_edges(weights.size());
    for (const auto& x : weights)
        if (x < -1 || x > 1)
            throw std::invalid_argument("exact belief " + format_rational(x) +
                                        " outside [-1, 1]");
}

ExactBeliefState ExactBeliefState::from(const BeliefNetwork& b) {
    std::vector<Rational> w;
    for (double x : b.weights()) w.push_back(to_rational(x));
    return ExactBeliefState(std::move(w));
}

BeliefNetwork ExactBeliefState::to_network() const {
    std::vector<double> w;
    for (const auto& x : weights) w.push_back(to_double(x));
    return BeliefNetwork(std::move(w));
}

SignPattern ExactBeliefState::signs() const {
    SignPattern p;
    for (const auto& x : weights) p.push_back(x > 0 ? Sign::positive : x < 0 ? Sign::negative : Sign::zero);
    return p;
}

std::size_t ExactBeliefStateHash::operator()(const ExactBeliefState& s) const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (const auto& x : s.weights) {
        const auto part = std::hash<std::string>{}(numerator(x).str() + "/" + denominator(x).str());
        h ^= part + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
}

std::string to_string(const ExactBeliefState& s) {
    std::string out = "{";
    for (std::size_t i = 0; i < s.weights.size(); ++i) {
        if (i) out += ",";
        out += format_rational(s.weights[i]);
    }
    return out + "}";
}

ExactBeliefState deterministic_update(const ExactBeliefState& receiver,
                                      const ExactBeliefState& sender, EdgeId edge,
                                      const Rational& alpha, const Rational& beta) {
    if (receiver.weights.size() != sender.weights.size())
        throw std::invalid_argument("sender and receiver belief networks differ in size");
    const auto graph = ConceptGraph::of(ConceptGraph::concepts_for_edges(receiver.weights.size()));
    const Rational grad = gradient_of<Rational>(*graph, receiver.weights, edge);
    Rational next = receiver.weights[edge.index] + alpha * sender.weights[edge.index] - beta * grad;
    if (next > 1) next = 1;
    if (next < -1) next = -1;
    ExactBeliefState out = receiver;
    out.weights[edge.index] = std::move(next);
    return out;
}

std::vector<ExactBeliefState> enumerate_states(const ExactBeliefState& initial,
                                               const SenderSet& senders, const Rational& alpha,
                                               const Rational& beta, std::size_t state_cap) {
    std::vector<ExactBeliefState> order{initial};
    std::unordered_map<ExactBeliefState, std::size_t, ExactBeliefStateHash> seen{{initial, 0}};
    std::deque<std::size_t> frontier{0};

    auto visit = [&](const ExactBeliefState& from, const ExactBeliefState& sender) {
        for (std::size_t e = 0; e < from.weights.size(); ++e) {
            auto next = deterministic_update(from, sender, EdgeId{e}, alpha, beta);
            if (seen.contains(next)) continue;
            if (order.size() >= state_cap)
                throw std::runtime_error("state enumeration exceeded " + std::to_string(state_cap) +
                                         " states; the dynamics do not close");
            seen.emplace(next, order.size());
            frontier.push_back(order.size());
            order.push_back(std::move(next));
        }
    };

    while (!frontier.empty()) {
        const ExactBeliefState current = order[frontier.front()];
        frontier.pop_front();
        for (const auto& s : senders.dissimilar) visit(current, s);
        for (const auto& s : senders.similar) visit(current, s);
    }
    return order;
}

TransitionMatrix::TransitionMatrix(std::vector<ExactBeliefState> states,
                                   std::vector<std::vector<Coefficient>> entries)
    : states_(std::move(states)), entries_(std::move(entries)) {
    if (entries_.size() != states_.size())
        throw std::invalid_argument("transition matrix is not square");
    for (const auto& row : entries_)
        if (row.size() != states_.size())
            throw std::invalid_argument("transition matrix is not square");
}

Coefficient TransitionMatrix::column_sum(std::size_t src) const {
    Coefficient c;
    for (const auto& row : entries_) {
        c.u += row.at(src).u;
        c.v += row.at(src).v;
    }
    return c;
}

std::size_t TransitionMatrix::index_of(const ExactBeliefState& s) const {
    auto it = std::find(states_.begin(), states_.end(), s);
    if (it == states_.end())
        throw std::out_of_range("state " + to_string(s) + " is not in the transition matrix");
    return static_cast<std::size_t>(it - states_.begin());
}

Eigen::MatrixXd TransitionMatrix::numeric(double u, double v) const {
    const auto n = static_cast<Eigen::Index>(size());
    Eigen::MatrixXd p(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto& c = entries_[i][j];
            p(i, j) = c.u * u + c.v * v;
        }
    return p;
}

TransitionMatrix build_transition_matrix(const std::vector<ExactBeliefState>& states,
                                         const SenderSet& senders, const Rational& alpha,
                                         const Rational& beta) {
    std::unordered_map<ExactBeliefState, std::size_t, ExactBeliefStateHash> index;
    for (std::size_t i = 0; i < states.size(); ++i) index.emplace(states[i], i);

    std::vector<std::vector<Coefficient>> entries(states.size(),
                                                  std::vector<Coefficient>(states.size()));
    for (std::size_t src = 0; src < states.size(); ++src) {
        auto accumulate = [&](const ExactBeliefState& sender, int Coefficient::*slot) {
            for (std::size_t e = 0; e < states[src].weights.size(); ++e) {
                const auto next = deterministic_update(states[src], sender, EdgeId{e}, alpha, beta);
                auto it = index.find(next);
                if (it == index.end())
                    throw std::runtime_error("transition from " + to_string(states[src]) + " to " +
                                             to_string(next) + " leaves the state set");
                ++(entries[it->second][src].*slot);
            }
        };
        for (const auto& s : senders.dissimilar) accumulate(s, &Coefficient::u);
        for (const auto& s : senders.similar) accumulate(s, &Coefficient::v);
    }
    return TransitionMatrix(states, std::move(entries));
}

Eigen::VectorXd stationary_from(const TransitionMatrix& matrix, double u, double v,
                                const ExactBeliefState& initial) {
    const std::size_t start = matrix.index_of(initial);
    Eigen::MatrixXd p = matrix.numeric(u, v);
    for (Eigen::Index j = 0; j < p.cols(); ++j) {
        const double total = p.col(j).sum();
        if (std::abs(total - 1.0) > 1e-12)
            throw std::invalid_argument(fmt::format(
                "column {} sums to {:.17g}; u and v must make every column sum to 1", j, total));
    }

    constexpr int kMaxSquarings = 128;
    Eigen::VectorXd previous = Eigen::VectorXd::Unit(p.rows(), static_cast<Eigen::Index>(start));
    for (int k = 0; k < kMaxSquarings; ++k) {
        Eigen::VectorXd current = p.col(static_cast<Eigen::Index>(start));
        if ((current - previous).cwiseAbs().maxCoeff() < 1e-12) {
            current = current.cwiseMax(0.0);
            return current / current.sum();
        }
        previous = std::move(current);
        p = p * p;
        // Rounding would otherwise compound over 2^k steps.
        for (Eigen::Index j = 0; j < p.cols(); ++j) p.col(j) /= p.col(j).sum();
    }
    throw std::runtime_error("stationary distribution did not converge; the chain may be periodic");
}

double flip_probability(const Eigen::VectorXd& pi, const TransitionMatrix& matrix,
                        const std::vector<ExactBeliefState>& targets) {
    double total = 0.0;
    for (const auto& t : targets) total += pi(static_cast<Eigen::Index>(matrix.index_of(t)));
    return std::clamp(total, 0.0, 1.0);
}

std::vector<ExactBeliefState> states_matching(const TransitionMatrix& matrix,
                                              const SignPattern& pattern) {
    std::vector<ExactBeliefState> out;
    for (const auto& s : matrix.states())
        if (s.signs() == pattern) out.push_back(s);
    return out;
}

StarScenario star_scenario(int id) {
    switch (id) {
        case 1: return {1, {-1, 1, 1}, {1, 1, 1}};
        case 2: return {2, {-1, -1, 1}, {1, 1, 1}};
        default:
            throw std::invalid_argument("scenario must be 1 or 2, got " + std::to_string(id));
    }
}

std::vector<CurvePoint> analytical_curve(const StarScenario& scenario, int k,
                                         const Rational& alpha, const Rational& beta) {
    if (k < 1) throw std::invalid_argument("k must be >= 1, got " + std::to_string(k));
    const auto senders = scenario.senders();
    const auto states = enumerate_states(scenario.hub_initial, senders, alpha, beta);
    const auto matrix = build_transition_matrix(states, senders, alpha, beta);
    const auto targets = states_matching(matrix, scenario.target());
    const auto sums = matrix.column_sum(0);

    std::vector<CurvePoint> curve;
    for (int m = 0; m <= k; ++m) {
        CurvePoint pt;
        pt.m = m;
        pt.u = static_cast<double>(m) / (static_cast<double>(k) * sums.u);
        pt.v = static_cast<double>(k - m) / (static_cast<double>(k) * sums.v);
        pt.flip = flip_probability(stationary_from(matrix, pt.u, pt.v, scenario.hub_initial),
                                   matrix, targets);
        curve.push_back(pt);
    }
    return curve;
}

void write_numeric_csv(const TransitionMatrix& matrix, double u, double v, std::ostream& out) {
    const auto p = matrix.numeric(u, v);
    out << "to\\from";
    for (const auto& s : matrix.states()) out << ",\"" << to_string(s) << '"';
    out << '\n';
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
        out << '"' << to_string(matrix.states()[i]) << '"';
        for (Eigen::Index j = 0; j < p.cols(); ++j) out << ',' << fmt::format("{:.6g}", p(i, j));
        out << '\n';
    }
}

namespace {

std::string format_coefficient(const Coefficient& c) {
    auto term = [](int a, char sym) {
        if (a == 0) return std::string();
        return (a == 1 ? std::string() : std::to_string(a)) + sym;
    };
    std::string s = term(c.u, 'u');
    const std::string tv = term(c.v, 'v');
    if (!s.empty() && !tv.empty()) s += "+";
    s += tv;
    return s.empty() ? "0" : s;
}

}  // namespace

void write_symbolic_table(const TransitionMatrix& matrix, std::ostream& out) {
    const std::size_t n = matrix.size();
    std::vector<std::string> labels;
    std::size_t width = 0;
    for (const auto& s : matrix.states()) {
        labels.push_back(to_string(s));
        width = std::max(width, labels.back().size());
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            width = std::max(width, format_coefficient(matrix.entry(i, j)).size());

    out << fmt::format("{:>{}}", "to\\from", width);
    for (const auto& l : labels) out << "  " << fmt::format("{:>{}}", l, width);
    out << '\n';
    for (std::size_t i = 0; i < n; ++i) {
        out << fmt::format("{:>{}}", labels[i], width);
        for (std::size_t j = 0; j < n; ++j)
            out << "  " << fmt::format("{:>{}}", format_coefficient(matrix.entry(i, j)), width);
        out << '\n';
    }
}

}  // namespace beliefnet::markov
