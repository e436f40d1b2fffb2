#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "beliefnet/belief.hpp"

using namespace beliefnet;

namespace {

// Independent brute-force energy over concept triples, used as an oracle.
double brute_energy(const BeliefNetwork& b) {
    const int c = b.concept_count();
    double sum = 0.0;
    int triads = 0;
    for (int x = 0; x < c; ++x)
        for (int y = x + 1; y < c; ++y)
            for (int z = y + 1; z < c; ++z) {
                sum += b.weight(x, y) * b.weight(x, z) * b.weight(y, z);
                ++triads;
            }
    return -sum / triads;
}

BeliefNetwork random_network(std::mt19937_64& rng, int concepts) {
    std::uniform_real_distribution<double> w(-1.0, 1.0);
    std::vector<double> weights(static_cast<std::size_t>(concepts * (concepts - 1) / 2));
    for (auto& x : weights) x = w(rng);
    return BeliefNetwork(weights);
}

constexpr EdgeId kX{0}, kY{1}, kZ{2};

}  // namespace

TEST(BeliefNetwork, CanonicalEdgeOrder) {
    BeliefNetwork b{0.1, 0.2, 0.3};
    EXPECT_EQ(b.weight(0, 1), 0.1);
    EXPECT_EQ(b.weight(0, 2), 0.2);
    EXPECT_EQ(b.weight(1, 2), 0.3);
    EXPECT_EQ(b.weight(2, 1), 0.3);

    const auto g = ConceptGraph::of(5);
    for (std::size_t e = 0; e < g->edge_count(); ++e) {
        auto [a, c] = g->endpoints(EdgeId{e});
        EXPECT_EQ(g->edge(a, c).index, e);
        EXPECT_EQ(g->edge(c, a).index, e);
    }
    EXPECT_EQ(g->triad_count(), 10u);
}

TEST(BeliefNetwork, RejectsInvalidConstruction) {
    EXPECT_THROW(BeliefNetwork(2), std::invalid_argument);
    EXPECT_THROW((BeliefNetwork{1.0}), std::invalid_argument);
    EXPECT_THROW((BeliefNetwork{1.0, 1.5, 0.0}), std::invalid_argument);
    EXPECT_THROW((BeliefNetwork{1.0, NAN, 0.0}), std::invalid_argument);
    EXPECT_THROW((BeliefNetwork{0.0, 0.0, 0.0, 0.0}), std::invalid_argument);
    EXPECT_NO_THROW(BeliefNetwork(std::vector<double>(6, 0.5)));
}

TEST(InternalEnergy, SingleTriadExamples) {
    EXPECT_EQ(internal_energy({1, 1, 1}), -1.0);
    EXPECT_EQ(internal_energy({-1, 1, 1}), 1.0);
    EXPECT_EQ(internal_energy({-1, -1, 1}), -1.0);
}

TEST(InternalEnergy, MatchesBruteForceAndStaysBounded) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 500; ++trial) {
        const auto b = random_network(rng, 3 + trial % 4);
        const double e = internal_energy(b);
        EXPECT_NEAR(e, brute_energy(b), 1e-14);
        EXPECT_LE(std::abs(e), 1.0);
    }
}

TEST(InternalEnergy, NegatingTwoBeliefsOfATriadKeepsEnergy) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const auto b = random_network(rng, 3);
        const auto w = b.weights();
        const BeliefNetwork flipped{-w[0], -w[1], w[2]};
        const BeliefNetwork flipped_other{w[0], -w[1], -w[2]};
        EXPECT_DOUBLE_EQ(internal_energy(flipped), internal_energy(b));
        EXPECT_DOUBLE_EQ(internal_energy(flipped_other), internal_energy(b));
        const BeliefNetwork one{-w[0], w[1], w[2]};
        EXPECT_DOUBLE_EQ(internal_energy(one), -internal_energy(b));
    }
}

TEST(EnergyGradient, Examples) {
    EXPECT_EQ(energy_gradient({-1, 1, 1}, kX), -1.0);
    EXPECT_EQ(energy_gradient({1, -1, 1}, kX), 1.0);
    EXPECT_THROW(energy_gradient({1, 1, 1}, EdgeId{3}), std::out_of_range);
}

TEST(EnergyGradient, EqualsCentralFiniteDifference) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> inner(-0.75, 0.75);
    constexpr double h = 0.25;
    for (int trial = 0; trial < 1000; ++trial) {
        const int concepts = 3 + trial % 4;
        auto base = random_network(rng, concepts);
        std::vector<double> w(base.weights().begin(), base.weights().end());
        const std::size_t e = static_cast<std::size_t>(trial) % w.size();
        w[e] = inner(rng);
        auto up = w, down = w;
        up[e] += h;
        down[e] -= h;
        const double fd = (internal_energy(BeliefNetwork(up)) - internal_energy(BeliefNetwork(down))) / (2 * h);
        EXPECT_NEAR(energy_gradient(BeliefNetwork(w), EdgeId{e}), fd, 1e-12);
    }
}

TEST(Increment, DeterministicExamples) {
    Rng rng(1);
    const ModelParams p{1.5, 1.0, 0.0};
    EXPECT_DOUBLE_EQ(increment(+1, {-1, 1, 1}, kX, p, rng), 2.5);
    EXPECT_DOUBLE_EQ(increment(-1, {1, 1, 1}, kX, p, rng), -0.5);
    // Gradient on x vanishes when the partner product is zero.
    EXPECT_EQ(increment(0.0, {0.4, 0.0, 1.0}, kX, {3.0, 2.0, 0.0}, rng), 0.0);
}

TEST(Increment, StochasticDrawsCenterOnTheMean) {
    Rng rng(99);
    const ModelParams p{1.5, 1.0, 0.2};
    const BeliefNetwork b{-1, 1, 1};
    double sum = 0.0, sq = 0.0;
    constexpr int kDraws = 20000;
    for (int i = 0; i < kDraws; ++i) {
        const double d = increment(1.0, b, kX, p, rng);
        sum += d;
        sq += d * d;
    }
    const double mean = sum / kDraws;
    const double sd = std::sqrt(sq / kDraws - mean * mean);
    EXPECT_NEAR(mean, 2.5, 4 * 0.2 / std::sqrt(kDraws));
    EXPECT_NEAR(sd, 0.2, 0.01);

    Rng a(5), b2(5);
    EXPECT_EQ(increment(1.0, b, kY, p, a), increment(1.0, b, kY, p, b2));
}

TEST(ModelParams, ValidateNamesField) {
    try {
        ModelParams{1.0, -1.0, 0.0}.validate();
        FAIL();
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find("beta"), std::string::npos);
    }
    EXPECT_THROW((ModelParams{INFINITY, 1, 0}.validate()), std::invalid_argument);
}

TEST(ApplyUpdate, ClipsIntoRange) {
    EXPECT_EQ(apply_update({-1, 1, 1}, kX, 2.5).weight(kX), 1.0);
    EXPECT_EQ(apply_update({1, 1, 1}, kX, -0.5).weight(kX), 0.5);
    const auto same = apply_update({0.3, 1, 1}, kX, 0.0);
    EXPECT_EQ(same.weight(kX), 0.3);
    const auto other = apply_update({0.3, 0.2, -0.1}, kY, 5.0);
    EXPECT_EQ(other.weight(kX), 0.3);
    EXPECT_EQ(other.weight(kZ), -0.1);
}

TEST(ApplyUpdate, RandomDeltasNeverLeaveRange) {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> delta(0.0, 3.0);
    BeliefNetwork b(5);
    for (int i = 0; i < 100000; ++i) {
        b = apply_update(std::move(b), EdgeId{static_cast<std::size_t>(i) % b.edge_count()}, delta(rng));
        for (double w : b.weights()) ASSERT_TRUE(w >= -1.0 && w <= 1.0);
    }
}

TEST(ClassifyTriads, BalanceExamples) {
    using enum TriadStability;
    EXPECT_EQ(classify_triads({1, 1, 1}), std::vector{stable});
    EXPECT_EQ(classify_triads({-1, 1, 1}), std::vector{unstable});
    EXPECT_EQ(classify_triads({-1, -1, 1}), std::vector{stable});
    EXPECT_EQ(classify_triads({0, 1, 1}), std::vector{unstable});
    EXPECT_EQ(classify_triads(BeliefNetwork(4)).size(), 4u);
}

TEST(SignPattern, Examples) {
    using enum Sign;
    EXPECT_EQ(sign_pattern({0.5, 1, 1}), (SignPattern{positive, positive, positive}));
    EXPECT_EQ(sign_pattern({-0.2, 1, 1}), (SignPattern{negative, positive, positive}));
    EXPECT_EQ(sign_pattern({0, 1, -1}), (SignPattern{zero, positive, negative}));
    EXPECT_EQ(to_string(sign_pattern({0, 1, -1})), "(0,+,-)");
}

// Every arrow of the five-state machine at alpha = 1.5, beta = 1, derived by
// hand from the update rule: (source, sender, edge) -> destination.
TEST(StateMachine, DeterministicIncrementReproducesEveryArrow) {
    const ModelParams p{1.5, 1.0, 0.0};
    const BeliefNetwork dissimilar{1, 1, 1}, similar{-1, 1, 1};
    struct Arrow {
        BeliefNetwork from;
        bool from_dissimilar;
        EdgeId edge;
        BeliefNetwork to;
    };
    const std::vector<Arrow> arrows = {
        {{-1, 1, 1}, true, kX, {1, 1, 1}},     {{-1, 1, 1}, true, kY, {-1, 1, 1}},
        {{-1, 1, 1}, true, kZ, {-1, 1, 1}},    {{-1, 1, 1}, false, kX, {-1, 1, 1}},
        {{-1, 1, 1}, false, kY, {-1, 1, 1}},   {{-1, 1, 1}, false, kZ, {-1, 1, 1}},
        {{1, 1, 1}, true, kX, {1, 1, 1}},      {{1, 1, 1}, true, kY, {1, 1, 1}},
        {{1, 1, 1}, true, kZ, {1, 1, 1}},      {{1, 1, 1}, false, kX, {0.5, 1, 1}},
        {{1, 1, 1}, false, kY, {1, 1, 1}},     {{1, 1, 1}, false, kZ, {1, 1, 1}},
        {{0.5, 1, 1}, true, kX, {1, 1, 1}},    {{0.5, 1, 1}, true, kY, {0.5, 1, 1}},
        {{0.5, 1, 1}, true, kZ, {0.5, 1, 1}},  {{0.5, 1, 1}, false, kX, {0, 1, 1}},
        {{0.5, 1, 1}, false, kY, {0.5, 1, 1}}, {{0.5, 1, 1}, false, kZ, {0.5, 1, 1}},
        {{0, 1, 1}, true, kX, {1, 1, 1}},      {{0, 1, 1}, true, kY, {0, 1, 1}},
        {{0, 1, 1}, true, kZ, {0, 1, 1}},      {{0, 1, 1}, false, kX, {-0.5, 1, 1}},
        {{0, 1, 1}, false, kY, {0, 1, 1}},     {{0, 1, 1}, false, kZ, {0, 1, 1}},
        {{-0.5, 1, 1}, true, kX, {1, 1, 1}},   {{-0.5, 1, 1}, true, kY, {-0.5, 1, 1}},
        {{-0.5, 1, 1}, true, kZ, {-0.5, 1, 1}}, {{-0.5, 1, 1}, false, kX, {-1, 1, 1}},
        {{-0.5, 1, 1}, false, kY, {-0.5, 1, 1}}, {{-0.5, 1, 1}, false, kZ, {-0.5, 1, 1}},
    };
    Rng rng(0);
    for (const auto& a : arrows) {
        const auto& sender = a.from_dissimilar ? dissimilar : similar;
        const double d = increment(sender.weight(a.edge), a.from, a.edge, p, rng);
        EXPECT_EQ(apply_update(a.from, a.edge, d), a.to)
            << "from " << a.from.weight(kX) << " edge " << a.edge.index;
    }
}
