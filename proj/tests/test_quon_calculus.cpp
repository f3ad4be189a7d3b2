#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "quon/error.hpp"
#include "quon/quon_calculus.hpp"
#include "quon/qudit_core.hpp"
#include "quon/suites.hpp"

using namespace quon;

namespace {

cplx expi(double x) {
    return std::polar(1.0, x);
}

Tensor column(int d, std::vector<cplx> v) {
    return Tensor(d, 1, 0, std::move(v));
}

Tensor as_tensor(const QuonVector &v) {
    return column(v.d, v.coeffs);
}

// smallest up-to-phase distance from v to any member of the axis family
double family_distance(int d, Axis axis, const Tensor &v) {
    double best = std::numeric_limits<double>::infinity();
    for (int k = 0; k < d; k++) {
        auto b = as_tensor(quon_basis(d, axis, k));
        auto s = compare_up_to_scalar(b, v);
        if (s) {
            best = std::min(best, max_deviation(b, v * *s));
        }
    }
    return best;
}

Tensor random_tensor(int d, int out, int in, std::mt19937_64 &rng) {
    std::normal_distribution<double> n;
    Tensor t(d, out, in);
    for (auto &z : t.entries()) {
        z = {n(rng), n(rng)};
    }
    return t;
}

}  // namespace

TEST(Bases, ZIsCoordinateBasis) {
    for (int d = 2; d <= 5; d++) {
        for (int k = 0; k < d; k++) {
            auto v = quon_basis(d, Axis::Z, k);
            ASSERT_EQ(v.coeffs.size(), static_cast<std::size_t>(d));
            for (int h = 0; h < d; h++) {
                EXPECT_LT(std::abs(v.coeffs[h] - (h == k ? 1.0 : 0.0)), 1e-12);
            }
        }
    }
}

TEST(Bases, BlochSphereQubit) {
    const double h = 1.0 / std::sqrt(2.0);
    const cplx i{0, 1};
    EXPECT_LT(family_distance(2, Axis::X, column(2, {h, h})), 1e-12);
    EXPECT_LT(family_distance(2, Axis::X, column(2, {h, -h})), 1e-12);
    EXPECT_LT(family_distance(2, Axis::Y, column(2, {h, i * h})), 1e-12);
    EXPECT_LT(family_distance(2, Axis::Y, column(2, {h, -i * h})), 1e-12);
}

TEST(Bases, OrthonormalEigenbases) {
    for (int d = 2; d <= 5; d++) {
        for (auto [axis, g] : {std::pair{Axis::X, GateName::X}, std::pair{Axis::Y, GateName::Y},
                               std::pair{Axis::Z, GateName::Z}}) {
            auto b = quon_basis_matrix(d, axis);
            EXPECT_LT(max_deviation(tensor_compose(b.adjoint(), b), Tensor::identity(d, 1)), 1e-9);
            for (int k = 0; k < d; k++) {
                auto v = as_tensor(quon_basis(d, axis, k));
                auto gv = tensor_compose(gate(d, g), v);
                auto lambda = compare_up_to_scalar(gv, v);
                ASSERT_TRUE(lambda.has_value()) << "d=" << d << " k=" << k;
                EXPECT_NEAR(std::abs(*lambda), 1.0, 1e-9);
            }
        }
    }
}

TEST(Braids, OneDimensionalIsTrivial) {
    EXPECT_LT(std::abs(braid_matrix(1, 1, 1).entries()[0] - 1.0), 1e-12);
}

TEST(Braids, QubitOuterCrossingIsDiagonal) {
    auto b = braid_matrix(2, 1, 1);
    EXPECT_LT(std::abs(b.at(0, 1)), 1e-12);
    EXPECT_LT(std::abs(b.at(1, 0)), 1e-12);
    // entries proportional to (zeta^0, zeta^1) = (1, i)
    EXPECT_LT(std::abs(b.at(1, 1) / b.at(0, 0) - cplx(0, 1)), 1e-12);
}

TEST(Braids, UnitaryReidemeisterYangBaxter) {
    for (int d = 2; d <= 5; d++) {
        auto id = Tensor::identity(d, 1);
        for (int i = 1; i <= 3; i++) {
            auto bp = braid_matrix(d, i, 1);
            auto bm = braid_matrix(d, i, -1);
            EXPECT_TRUE(is_unitary(bp));
            EXPECT_TRUE(is_unitary(bm));
            EXPECT_LT(max_deviation(tensor_compose(bp, bm), id), 1e-9);
        }
        for (int i = 1; i <= 2; i++) {
            auto a = braid_matrix(d, i, 1);
            auto b = braid_matrix(d, i + 1, 1);
            EXPECT_LT(max_deviation(tensor_compose(a, tensor_compose(b, a)), tensor_compose(b, tensor_compose(a, b))),
                      1e-9)
                << "d=" << d << " i=" << i;
        }
    }
}

TEST(Braids, FullSectorAgreesWithNeutralRestriction) {
    for (int d = 2; d <= 4; d++) {
        for (int i = 1; i <= 3; i++) {
            EXPECT_LT(max_deviation(neutral_restriction(braid_matrix_full(d, i, 1)), braid_matrix(d, i, 1)), 1e-12);
        }
    }
}

TEST(Charges, AdditiveAndTrivial) {
    for (int d = 2; d <= 5; d++) {
        for (int s = 1; s <= 4; s++) {
            EXPECT_LT(max_deviation(charge_matrix(d, s, 0), Tensor::identity(d, 2)), 1e-15);
            for (int g = 0; g < d; g++) {
                for (int h = 0; h < d; h++) {
                    EXPECT_LT(max_deviation(tensor_compose(charge_matrix(d, s, g), charge_matrix(d, s, h)),
                                            charge_matrix(d, s, (g + h) % d)),
                              1e-12);
                }
            }
        }
    }
}

TEST(Charges, PauliPicturesWithRecordedPhases) {
    struct Case {
        int d;
        GateName g;
        StrandWord w;
        cplx phase;
    };
    const cplx i{0, 1};
    std::vector<Case> cases = {
        {2, GateName::Z, {2, {StrandGen::charge(1, 1), StrandGen::charge(2, 1)}}, -i},
        {2, GateName::X, {2, {StrandGen::charge(1, 1), StrandGen::charge(4, 1)}}, -i},
        {2, GateName::Y, {2, {StrandGen::charge(1, 1), StrandGen::charge(3, 1)}}, i},
        {3, GateName::Z, {3, {StrandGen::charge(1, 1), StrandGen::charge(2, 2)}}, expi(-2 * std::numbers::pi / 3)},
        {3, GateName::X, {3, {StrandGen::charge(1, 1), StrandGen::charge(4, 2)}}, expi(-2 * std::numbers::pi / 3)},
        {3, GateName::Y, {3, {StrandGen::charge(1, 2), StrandGen::charge(3, 1)}}, expi(-2 * std::numbers::pi / 3)},
        {4, GateName::Z, {4, {StrandGen::charge(1, 1), StrandGen::charge(2, 3)}}, expi(-3 * std::numbers::pi / 4)},
        {4, GateName::X, {4, {StrandGen::charge(1, 1), StrandGen::charge(4, 3)}}, expi(-3 * std::numbers::pi / 4)},
        {4, GateName::Y, {4, {StrandGen::charge(1, 3), StrandGen::charge(3, 1)}}, expi(std::numbers::pi / 4)},
    };
    for (const auto &c : cases) {
        auto m = eval_word(c.w);
        EXPECT_LT(max_deviation(m, gate(c.d, c.g) * c.phase), 1e-9) << "d=" << c.d << " " << to_string(c.g);
    }
}

TEST(Words, ParseAndRender) {
    auto w = parse_word(3, "b1 b2' c1:2 c4:-1");
    ASSERT_EQ(w.gens.size(), 4u);
    EXPECT_EQ(w.gens[1], StrandGen::braid(2, -1));
    EXPECT_EQ(w.gens[3], StrandGen::charge(4, 2));
    EXPECT_EQ(parse_word(3, to_string(w)), w);
    try {
        parse_word(3, "b1 q2");
        FAIL();
    } catch (const ParseError &e) {
        EXPECT_EQ(e.column, 4);
    }
    EXPECT_THROW(parse_word(3, "b4"), ParseError);
}

TEST(Words, EmptyIsIdentityAndChargedRejected) {
    EXPECT_LT(max_deviation(eval_word({3, {}}), Tensor::identity(3, 1)), 1e-15);
    EXPECT_THROW(eval_word({3, {StrandGen::charge(1, 1)}}), ChargedWord);
    EXPECT_EQ(word_charge({3, {StrandGen::charge(1, 1), StrandGen::charge(2, 1)}}), 2);
}

TEST(Words, SearchFindsCliffordGenerators) {
    for (int d = 2; d <= 5; d++) {
        auto g = find_word(d, gate(d, GateName::G), 2);
        EXPECT_LE(g.gens.size(), 2u);
        EXPECT_TRUE(compare_up_to_scalar(eval_word(g), gate(d, GateName::G)).has_value());
        auto f = find_word(d, gate(d, GateName::F), 4);
        EXPECT_LE(f.gens.size(), 4u);
        EXPECT_TRUE(compare_up_to_scalar(eval_word(f), gate(d, GateName::F)).has_value());
    }
    EXPECT_EQ(to_string(find_word(3, gate(3, GateName::G), 2)), "b1");
    EXPECT_EQ(to_string(find_word(3, gate(3, GateName::F), 4)), "b1 b2 b1");
}

TEST(Words, SearchEdgeCases) {
    EXPECT_TRUE(find_word(3, Tensor::identity(3, 1), 0).gens.empty());
    EXPECT_THROW(find_word(3, gate(3, GateName::X), 0), NotFound);
}

TEST(Fourier, StringFourierIsFourierUpToPhase) {
    for (int d = 2; d <= 5; d++) {
        auto fs = string_fourier(d);
        auto c = compare_up_to_scalar(fs, gate(d, GateName::F));
        ASSERT_TRUE(c.has_value()) << d;
        EXPECT_LT(std::abs(*c - string_fourier_phase(d)), 1e-9);
        EXPECT_TRUE(compare_up_to_scalar(tensor_compose(fs, fs), gate(d, GateName::F2)).has_value());
        auto f4 = tensor_power(fs, 4);
        EXPECT_TRUE(compare_up_to_scalar(f4, Tensor::identity(d, 1)).has_value());
    }
    EXPECT_LT(std::abs(string_fourier(1).entries()[0] - 1.0), 1e-12);
    EXPECT_LT(std::abs(string_fourier_phase(3) - expi(std::numbers::pi / 4)), 1e-9);
    EXPECT_LT(std::abs(string_fourier_phase(5) - cplx(0, -1)), 1e-9);
}

TEST(Fourier, WordMatchesNetwork) {
    for (int d = 2; d <= 4; d++) {
        EXPECT_LT(max_deviation(eval_word(fourier_word(d)), string_fourier(d)), 1e-9);
    }
}

TEST(Networks, CircleValues) {
    for (int d = 2; d <= 6; d++) {
        EXPECT_LT(std::abs(eval_network(circle_network(d, 0)).entries()[0] - std::sqrt(d)), 1e-12);
        for (int j = 1; j < d; j++) {
            EXPECT_LT(std::abs(eval_network(circle_network(d, j)).entries()[0]), 1e-12);
        }
    }
}

TEST(Networks, GenusCircle) {
    for (int d = 2; d <= 5; d++) {
        auto net = circle_network(d, 0);
        net.genus_circles.push_back({1, 1});
        EXPECT_LT(std::abs(eval_network(net).entries()[0] - 1.0), 1e-12);
        auto even = circle_network(d, 0);
        even.genus_circles.push_back({2, 1});
        EXPECT_LT(std::abs(eval_network(even).entries()[0]), 1e-12);
        auto even2 = circle_network(d, 0);
        even2.genus_circles.push_back({1, 2});
        EXPECT_LT(std::abs(eval_network(even2).entries()[0]), 1e-12);
    }
}

TEST(Networks, EachDiscUsedOnce) {
    auto net = circle_network(2, 0);
    NetworkComponent c;
    c.ops = {StrandOp::cup(1), StrandOp::cup(3)};
    c.discs = 1;
    net.components.push_back(c);
    EXPECT_THROW(eval_network(net), NetworkError);
    net.outputs = {DiscRef{1, 0}, DiscRef{1, 0}};
    EXPECT_THROW(eval_network(net), NetworkError);
}

TEST(Networks, CrossingArcsRejected) {
    EXPECT_THROW(component_from_arcs(4, {{1, 3}, {2, 4}}), NetworkError);
    EXPECT_THROW(component_from_arcs(4, {{1, 2}}), NetworkError);
    EXPECT_NO_THROW(component_from_arcs(4, {{1, 4}, {2, 3}}));
}

TEST(Joint, IdentityAndRandomMaps) {
    std::mt19937_64 rng(21);
    for (int d = 2; d <= 3; d++) {
        for (int m = 1; m <= 2; m++) {
            for (int n = 1; n <= 2; n++) {
                auto left = standard_basis(d, m, m);
                auto right = standard_basis(d, n, m);
                if (m == n) {
                    auto rep = joint_check(d, m, n, Tensor::identity(d, m), left, right);
                    EXPECT_TRUE(rep.pass);
                }
                auto rep = joint_check(d, m, n, random_tensor(d, n, m, rng), random_basis(d, m, m, 3),
                                       random_basis(d, n, m, 4), Tolerance{}, 9);
                EXPECT_LT(rep.deviation, 1e-9);
                EXPECT_LT(rep.invariance, 1e-9);
            }
        }
    }
}

TEST(Joint, DuplicatedVectorRejected) {
    auto b = standard_basis(2, 1, 1);
    b.vectors[1] = b.vectors[0];
    EXPECT_THROW(validate_basis(b), BasisError);
    EXPECT_THROW(joint_check(2, 1, 1, Tensor::identity(2, 1), b, standard_basis(2, 1, 1)), BasisError);
    auto short_basis = standard_basis(2, 1, 1);
    short_basis.vectors.pop_back();
    EXPECT_THROW(validate_basis(short_basis), BasisError);
}

TEST(Suites, QuonSuitesPass) {
    SuiteOptions o;
    o.trials = 5;
    for (const char *name : {"quon", "genus", "joint"}) {
        for (const auto &r : run_suite(name, o)) {
            EXPECT_EQ(r.status, CheckStatus::Pass) << r.name << " " << r.max_error << " " << r.detail;
        }
    }
}
