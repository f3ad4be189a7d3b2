#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "quon/error.hpp"
#include "quon/qudit_core.hpp"
#include "quon/spider_engine.hpp"
#include "quon/suites.hpp"

using namespace quon;

namespace {

SpiderDiagram black(int d, int i, int o) {
    return diagram_spider(d, SpiderColor::Black, i, o);
}

SpiderDiagram white(int d, int i, int o) {
    return diagram_spider(d, SpiderColor::White, i, o);
}

SpiderDiagram cnot(int d) {
    return diagram_then(diagram_beside(diagram_identity(d, 1), black(d, 1, 2)),
                        diagram_beside(white(d, 2, 1), diagram_identity(d, 1)));
}

Tensor random_unitary_ish(int d, std::mt19937_64 &rng) {
    std::normal_distribution<double> n;
    Tensor t(d, 1, 1);
    for (auto &z : t.entries()) {
        z = {n(rng), n(rng)};
    }
    return t;
}

// A random one-wire piece placed around a rule's pattern.
SpiderDiagram random_piece(int d, std::mt19937_64 &rng) {
    std::uniform_int_distribution<int> kind(0, 5);
    switch (kind(rng)) {
        case 0:
            return diagram_fbox(d, 1 + static_cast<int>(rng() % 3));
        case 1:
            return diagram_gate(d, GateName::Z);
        case 2:
            return diagram_gate(d, GateName::X);
        case 3:
            return diagram_box(d, "R", random_unitary_ish(d, rng));
        case 4:
            return diagram_then(diagram_gate(d, GateName::G), diagram_box(d, "S", random_unitary_ish(d, rng)));
        default:
            return diagram_identity(d, 1);
    }
}

SpiderDiagram in_context(const SpiderDiagram &pattern, std::mt19937_64 &rng) {
    const int d = pattern.d;
    SpiderDiagram pre = diagram_identity(d, 0);
    for (std::size_t i = 0; i < pattern.inputs.size(); i++) {
        pre = diagram_beside(pre, random_piece(d, rng));
    }
    SpiderDiagram post = diagram_identity(d, 0);
    for (std::size_t i = 0; i < pattern.outputs.size(); i++) {
        post = diagram_beside(post, random_piece(d, rng));
    }
    auto g = diagram_then(pre, diagram_then(pattern, post));
    if (rng() % 2 == 0) {
        g = diagram_beside(random_piece(d, rng), g);
    }
    return g;
}

SpiderDiagram hopf_square(int d) {
    SpiderDiagram g(d);
    int x1 = g.add_input();
    int x2 = g.add_input();
    int w1 = g.add_spider(SpiderColor::White, 1, 2);
    int w2 = g.add_spider(SpiderColor::White, 1, 2);
    int b1 = g.add_spider(SpiderColor::Black, 2, 1);
    int b2 = g.add_spider(SpiderColor::Black, 2, 1);
    int y1 = g.add_output();
    int y2 = g.add_output();
    g.connect(x1, 0, w1, 0);
    g.connect(x2, 0, w2, 0);
    g.connect(w1, 0, b1, 0);
    g.connect(w1, 1, b2, 0);
    g.connect(w2, 0, b1, 1);
    g.connect(w2, 1, b2, 1);
    g.connect(b1, 0, y1, 0);
    g.connect(b2, 0, y2, 0);
    return g;
}

std::vector<SpiderDiagram> patterns(int d, RewriteRule rule) {
    switch (rule) {
        case RewriteRule::FuseBlack:
            return {diagram_then(black(d, 1, 2), diagram_beside(black(d, 1, 2), diagram_identity(d, 1))),
                    diagram_then(black(d, 2, 1), black(d, 1, 3))};
        case RewriteRule::FuseWhite:
            return {diagram_then(white(d, 2, 1), white(d, 1, 2)),
                    diagram_then(white(d, 1, 2), white(d, 2, 1))};
        case RewriteRule::UnitCancel:
            return {diagram_then(black(d, 1, 1), white(d, 1, 1)),
                    diagram_beside(diagram_then(white(d, 0, 1), black(d, 1, 0)), diagram_identity(d, 1))};
        case RewriteRule::Bialgebra:
            return {diagram_then(white(d, 0, 1), black(d, 1, 2)), diagram_then(white(d, 2, 1), black(d, 1, 0))};
        case RewriteRule::AntipodeLoop:
            return {diagram_then(diagram_then(white(d, 1, 2), diagram_beside(diagram_fbox(d, 2), diagram_identity(d, 1))),
                                 black(d, 2, 1))};
        case RewriteRule::HopfLaw:
            return {hopf_square(d)};
        case RewriteRule::ColorChange:
            return {white(d, 1, 2), black(d, 2, 2), white(d, 0, 3)};
        case RewriteRule::GenusCancel: {
            auto g = cnot(d);
            g.genus_marks = 2;
            return {g};
        }
    }
    return {};
}

}  // namespace

TEST(Eval, SingleSpiders) {
    for (int d = 2; d <= 5; d++) {
        EXPECT_EQ(max_deviation(eval_tensor(black(d, 1, 1)), Tensor::identity(d, 1)), 0.0);
        int zero[] = {0};
        EXPECT_EQ(max_deviation(eval_tensor(white(d, 0, 1)), Tensor::ket(d, zero)), 0.0);
        EXPECT_EQ(max_deviation(eval_tensor(white(d, 2, 3)), spider(d, {SpiderColor::White, 2, 3})), 0.0);
    }
}

TEST(Eval, CnotFromCopyAndSum) {
    for (int d = 2; d <= 5; d++) {
        EXPECT_LT(max_deviation(eval_tensor(cnot(d)), gate(d, GateName::CNOT)), 1e-12) << d;
    }
}

TEST(Eval, GatesAndBoxes) {
    for (int d = 2; d <= 4; d++) {
        auto g = diagram_then(diagram_gate(d, GateName::F), diagram_gate(d, GateName::Z));
        auto expected = tensor_compose(gate(d, GateName::Z), gate(d, GateName::F));
        EXPECT_LT(max_deviation(eval_tensor(g), expected), 1e-12);
        EXPECT_LT(max_deviation(eval_tensor(diagram_fbox(d, 3)), tensor_power(gate(d, GateName::F), 3)), 1e-12);
    }
}

TEST(Eval, GenusScaling) {
    auto g = black(3, 1, 1);
    g.genus_marks = 2;
    EXPECT_LT(max_deviation(eval_tensor(g), Tensor::identity(3, 1) * (1.0 / 3.0)), 1e-12);
}

TEST(Eval, ZeroSubdiagramGivesZero) {
    for (int d = 2; d <= 4; d++) {
        // <0| X |0> = 0
        auto zero = diagram_then(diagram_then(white(d, 0, 1), diagram_gate(d, GateName::X)), white(d, 1, 0));
        auto g = diagram_beside(zero, cnot(d));
        EXPECT_EQ(eval_tensor(g).max_abs(), 0.0);
        EXPECT_EQ(eval_tensor(normalize(g).diagram).max_abs(), 0.0);
    }
}

TEST(Builders, ShapeAndGraphErrors) {
    EXPECT_THROW(diagram_then(black(2, 1, 2), black(2, 1, 1)), ShapeError);
    EXPECT_THROW(diagram_then(black(2, 1, 1), black(3, 1, 1)), ShapeError);
    SpiderDiagram g(2);
    g.add_spider(SpiderColor::Black, 1, 1);
    EXPECT_THROW(g.validate(), GraphError);
    EXPECT_THROW(eval_tensor(g), GraphError);
}

TEST(Rules, NamesRoundTrip) {
    for (auto r : all_rules()) {
        EXPECT_EQ(parse_rule(to_string(r)), r);
    }
    EXPECT_FALSE(parse_rule("Nope").has_value());
}

TEST(Rules, FuseMergesAdjacentSpiders) {
    auto g = diagram_then(black(3, 1, 2), diagram_beside(black(3, 1, 2), diagram_identity(3, 1)));
    auto m = find_matches(g, RewriteRule::FuseBlack);
    ASSERT_EQ(m.size(), 1u);
    auto h = apply_rule(g, RewriteRule::FuseBlack, m.front());
    EXPECT_EQ(h.node_count(), 1u);
    EXPECT_EQ(max_deviation(eval_tensor(h), eval_tensor(black(3, 1, 3))), 0.0);
}

TEST(Rules, ColorChangeScalarForThreeLegs) {
    for (int d = 2; d <= 5; d++) {
        auto g = white(d, 1, 2);
        auto h = apply_rule(g, RewriteRule::ColorChange, find_matches(g, RewriteRule::ColorChange).front());
        EXPECT_LT(std::abs(h.scalar - std::sqrt(static_cast<double>(d))), 1e-12);
        EXPECT_LT(max_deviation(eval_tensor(h), eval_tensor(g)), 1e-9);
    }
}

TEST(Rules, CopyLawGivesTwoWhiteUnits) {
    auto g = diagram_then(white(3, 0, 1), black(3, 1, 2));
    auto h = apply_rule(g, RewriteRule::Bialgebra, find_matches(g, RewriteRule::Bialgebra).front());
    EXPECT_EQ(h.node_count(), 2u);
    for (const auto &[id, n] : h.nodes) {
        if (n.is_spider()) {
            EXPECT_EQ(n.kind, NodeKind::White);
            EXPECT_EQ(n.degree(), 1);
        }
    }
    EXPECT_LT(max_deviation(eval_tensor(h), eval_tensor(g)), 1e-12);
}

TEST(Rules, NoMatchThrows) {
    auto g = black(2, 1, 2);
    EXPECT_THROW(apply_rule(g, RewriteRule::FuseWhite, Site{0, 1}), NoMatch);
    EXPECT_THROW(apply_rule(g, RewriteRule::HopfLaw, Site{0, 1}), NoMatch);
    EXPECT_THROW(apply_rule(g, RewriteRule::GenusCancel, Site{-1, -1}), NoMatch);
}

TEST(Rules, SoundInRandomContexts) {
    for (int d = 2; d <= 5; d++) {
        std::mt19937_64 rng(1234 + d);
        for (auto rule : all_rules()) {
            auto pats = patterns(d, rule);
            ASSERT_FALSE(pats.empty());
            for (int trial = 0; trial < 100; trial++) {
                auto g = in_context(pats[trial % pats.size()], rng);
                auto matches = find_matches(g, rule);
                ASSERT_FALSE(matches.empty()) << to_string(rule);
                auto before = eval_tensor(g);
                auto site = matches[rng() % matches.size()];
                auto after = eval_tensor(apply_rule(g, rule, site));
                ASSERT_LT(max_deviation(before, after), 1e-9) << to_string(rule) << " d=" << d << " trial=" << trial;
            }
        }
    }
}

TEST(Normalize, ChainCollapses) {
    auto g = diagram_then(diagram_then(black(3, 1, 1), black(3, 1, 1)), black(3, 1, 1));
    auto n = normalize(g);
    EXPECT_LE(n.diagram.node_count(), 1u);
    EXPECT_LT(max_deviation(eval_tensor(n.diagram), Tensor::identity(3, 1)), 1e-12);
}

TEST(Normalize, EmptyUnchanged) {
    SpiderDiagram g(3);
    auto n = normalize(g);
    EXPECT_EQ(n.steps, 0);
    EXPECT_EQ(describe(n.diagram), describe(g));
}

TEST(Normalize, GhzFromCopies) {
    for (int d = 2; d <= 5; d++) {
        auto g = diagram_then(diagram_then(black(d, 0, 1), black(d, 1, 2)),
                              diagram_beside(diagram_identity(d, 1), black(d, 1, 2)));
        g.scalar = 1.0 / std::sqrt(static_cast<double>(d));
        auto n = normalize(g);
        EXPECT_EQ(n.diagram.node_count(), 1u);
        auto expected = black(d, 0, 3);
        expected.scalar = g.scalar;
        EXPECT_EQ(diagram_signature(n.diagram), diagram_signature(expected));
        EXPECT_LT(max_deviation(eval_tensor(n.diagram), resource_state(d, {ResourceKind::GHZ, 3})), 1e-12);
    }
}

TEST(Normalize, TerminatesAndIsConfluent) {
    std::mt19937_64 rng(77);
    for (int d = 2; d <= 4; d++) {
        std::vector<SpiderDiagram> corpus = {
            cnot(d),
            diagram_then(cnot(d), cnot(d)),
            diagram_then(black(d, 0, 2), black(d, 2, 0)),
            diagram_then(white(d, 1, 2), white(d, 2, 1)),
            diagram_then(diagram_beside(white(d, 1, 2), black(d, 1, 2)),
                         diagram_beside(diagram_beside(diagram_identity(d, 1), diagram_then(white(d, 2, 1), black(d, 1, 1))),
                                        diagram_identity(d, 1))),
            hopf_square(d),
        };
        corpus[1].genus_marks = 1;
        for (const auto &g : corpus) {
            auto n = normalize(g);
            std::size_t bound = g.node_count() + g.edges.size() + static_cast<std::size_t>(g.genus_marks);
            EXPECT_LE(static_cast<std::size_t>(n.steps), bound);
            EXPECT_LT(max_deviation(eval_tensor(n.diagram), eval_tensor(g)), 1e-9);
            for (int s = 0; s < 3; s++) {
                auto r = normalize_randomized(g, rng());
                EXPECT_EQ(diagram_signature(r.diagram), diagram_signature(n.diagram));
            }
        }
    }
}

TEST(Compile, SpidersAndCnotMatchUpToRecordedScale) {
    for (int d = 2; d <= 3; d++) {
        std::vector<SpiderDiagram> cases = {black(d, 0, 3), white(d, 0, 3), black(d, 1, 2), cnot(d),
                                            diagram_then(white(d, 1, 1), diagram_fbox(d, 1))};
        for (const auto &g : cases) {
            auto c = compile_to_quon(g);
            EXPECT_EQ(c.scale_exponent, 1);
            double s = std::pow(static_cast<double>(d), c.scale_exponent / 2.0);
            EXPECT_LT(max_deviation(eval_network(c.network), eval_tensor(g) * s), 1e-9) << describe(g);
        }
    }
}

TEST(Compile, HopfSquareCarriesAGenus) {
    for (int d = 2; d <= 3; d++) {
        auto sq = compile_to_quon(hopf_square(d));
        EXPECT_EQ(sq.network.genus_marks, 1);
        auto path = compile_to_quon(diagram_then(black(d, 2, 1), white(d, 1, 2)));
        EXPECT_EQ(path.network.genus_marks, 0);
        EXPECT_LT(max_deviation(eval_network(sq.network), eval_network(path.network) * (1.0 / std::sqrt(d))), 1e-9);
    }
}

TEST(Compile, RejectsGates) {
    EXPECT_THROW(compile_to_quon(diagram_gate(2, GateName::X)), NotCompilable);
    EXPECT_THROW(compile_to_quon(diagram_box(2, "M", Tensor::identity(2, 1))), NotCompilable);
}

TEST(RuleSuite, AllPass) {
    auto reports = rule_suite({2, 3, 4, 5});
    EXPECT_GE(reports.size(), 4u * 8u);
    std::set<RewriteRule> seen;
    for (const auto &r : reports) {
        EXPECT_TRUE(r.pass) << r.name << " d=" << r.d << " dev=" << r.deviation;
        EXPECT_LT(r.deviation, 1e-9);
        seen.insert(r.rule);
    }
    EXPECT_EQ(seen.size(), all_rules().size());
}

TEST(RuleSuite, DualityScalars) {
    for (const auto &r : rule_suite({3})) {
        if (r.name == "duality.white-to-black.n1") {
            EXPECT_LT(std::abs(r.scalar - std::pow(3.0, -0.5)), 1e-12);
        }
        if (r.name == "duality.white-to-black.n4") {
            EXPECT_LT(std::abs(r.scalar - 3.0), 1e-12);
        }
    }
}

TEST(Suites, SpiderSuitesPass) {
    SuiteOptions o;
    for (const char *name : {"rules", "cnot"}) {
        for (const auto &r : run_suite(name, o)) {
            EXPECT_EQ(r.status, CheckStatus::Pass) << r.name << " " << r.max_error << " " << r.detail;
        }
    }
}
