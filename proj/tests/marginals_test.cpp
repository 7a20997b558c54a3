// Copyright 2026 The lgbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "lgbench/marginals.hpp"
#include "lgbench/rational.hpp"
#include "lgbench/scenarios.hpp"
#include "lgbench/simplex.hpp"
#include "oracles.hpp"

namespace lgbench {
namespace {

constexpr double kPi = 3.14159265358979323846;
const double kSqrt2 = std::sqrt(2.0);

MomentSet three(double q1, double q2, double q3, double c12, double c23, double c13) {
    MomentSet m;
    m.singles = {q1, q2, q3};
    m.set_pair(0, 1, c12);
    m.set_pair(1, 2, c23);
    m.set_pair(0, 2, c13);
    return m;
}

MomentSet random_moments(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1, 1);
    return three(u(rng), u(rng), u(rng), u(rng), u(rng), u(rng));
}

TEST(Rationalize, BestApproximations) {
    EXPECT_EQ(rationalize(0.1), Rational(1, 10));
    EXPECT_EQ(rationalize(0.5), Rational(1, 2));
    EXPECT_EQ(rationalize(-0.75), Rational(-3, 4));
    EXPECT_EQ(rationalize(kPi, 1000), Rational(355, 113));
    EXPECT_EQ(rationalize(kPi, 100), Rational(311, 99));
    EXPECT_EQ(rationalize(1.0 / 3.0), Rational(1, 3));
    EXPECT_EQ(rationalize(-1e-17), Rational(0));
    EXPECT_THROW(rationalize(std::nan("")), std::invalid_argument);
    EXPECT_THROW(rationalize(1.0, 0), std::invalid_argument);
}

TEST(Rationalize, ErrorBoundedByDenominator) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int k = 0; k < 2000; ++k) {
        const double x = u(rng);
        const Rational r = rationalize(x, 1000000);
        EXPECT_LE(r.get_den(), 1000000);
        // A best approximation with denominator <= N is within 1 / (q N) <= 1 / N.
        EXPECT_LE(std::abs(to_double(r) - x), 1e-6);
    }
}

TEST(Simplex, SmallSystems) {
    FeasibilityProblem p;
    p.cols = 2;
    p.a = {{Rational(1), Rational(1)}};
    p.b = {Rational(1)};
    auto x = find_feasible_point(p);
    ASSERT_TRUE(x.has_value());
    EXPECT_EQ((*x)[0] + (*x)[1], 1);

    p.a.push_back({Rational(1), Rational(-1)});
    p.b.push_back(Rational(3));  // x0 - x1 = 3 with x0 + x1 = 1 forces x1 = -1
    EXPECT_FALSE(find_feasible_point(p).has_value());

    FeasibilityProblem neg;
    neg.cols = 1;
    neg.a = {{Rational(-1)}};
    neg.b = {Rational(-2, 3)};
    auto y = find_feasible_point(neg);
    ASSERT_TRUE(y.has_value());
    EXPECT_EQ((*y)[0], Rational(2, 3));

    FeasibilityProblem ragged;
    ragged.cols = 2;
    ragged.a = {{Rational(1)}};
    ragged.b = {Rational(1)};
    EXPECT_THROW(find_feasible_point(ragged), std::invalid_argument);
}

TEST(Simplex, DegenerateRedundantRows) {
    // Duplicate and dependent rows exercise degenerate pivots.
    FeasibilityProblem p;
    p.cols = 4;
    p.a = {{1, 1, 0, 0}, {0, 0, 1, 1}, {1, 0, 1, 0}, {0, 1, 0, 1}, {1, 1, 1, 1}, {1, 1, 1, 1}};
    p.b = {Rational(1, 2), Rational(1, 2), Rational(1, 2), Rational(1, 2), 1, 1};
    auto x = find_feasible_point(p);
    ASSERT_TRUE(x.has_value());
    for (std::size_t r = 0; r < p.a.size(); ++r) {
        Rational s = 0;
        for (std::size_t c = 0; c < 4; ++c) s += p.a[r][c] * (*x)[c];
        EXPECT_EQ(s, p.b[r]);
    }
    for (const auto& v : *x) EXPECT_GE(v, 0);
}

TEST(DInterval, Examples) {
    const auto all0 = d_interval(three(0, 0, 0, 0, 0, 0));
    EXPECT_DOUBLE_EQ(all0.lower, -1.0);
    EXPECT_DOUBLE_EQ(all0.upper, 1.0);
    EXPECT_FALSE(all0.empty);
    const auto ones = d_interval(three(1, 1, 1, 1, 1, 1));
    EXPECT_DOUBLE_EQ(ones.lower, 1.0);
    EXPECT_DOUBLE_EQ(ones.upper, 1.0);
    EXPECT_FALSE(ones.empty);
    const auto viol = d_interval(three(0, 0, 0, -0.5, -0.5, -0.5));
    EXPECT_TRUE(viol.empty);
    EXPECT_DOUBLE_EQ(viol.lower, 0.5);
    EXPECT_DOUBLE_EQ(viol.upper, -0.5);
    MomentSet missing;
    missing.singles = {0, 0, 0};
    EXPECT_THROW(d_interval(missing), std::invalid_argument);
}

TEST(DInterval, NonEmptyIffSixteenSlacks) {
    std::mt19937_64 rng(2);
    std::size_t empty = 0;
    for (int k = 0; k < 3000; ++k) {
        const MomentSet m = random_moments(rng);
        const auto d = d_interval(m);
        const double lg = oracle::min_lg16({m.singles[0], m.singles[1], m.singles[2]}, m.pair(0, 1), m.pair(1, 2),
                                           m.pair(0, 2));
        EXPECT_EQ(!d.empty, lg >= 0.0) << "slack " << lg;
        EXPECT_NEAR(min_value(weak_slacks3(m)), lg, 1e-14);
        empty += d.empty;
        if (!d.empty) {
            EXPECT_GE(d.lower, -1.0 - 1e-12);
            EXPECT_LE(d.upper, 1.0 + 1e-12);
        }
    }
    EXPECT_GT(empty, 100u);
    EXPECT_LT(empty, 2900u);
}

TEST(Joint3Construct, Examples) {
    const auto u = joint3_construct(three(0, 0, 0, 0, 0, 0));
    ASSERT_TRUE(u.joint.has_value());
    for (std::size_t i = 0; i < 8; ++i) EXPECT_DOUBLE_EQ((*u.joint)[i], 0.125);
    EXPECT_DOUBLE_EQ(*u.triple, 0.0);

    const MomentSet eig = three(1, 0.5, -0.5, 0.5, -0.5, -0.5);
    const auto e = joint3_construct(eig);
    ASSERT_TRUE(e.joint.has_value());
    EXPECT_GE(e.joint->min_value(), 0.0);

    const auto bad = joint3_construct(three(0, 0, 0, -0.5, -0.5, -0.5));
    EXPECT_FALSE(bad.joint.has_value());
    ASSERT_FALSE(bad.violated.empty());
    EXPECT_EQ(bad.violated.front(), "LG3_1");
}

TEST(Joint3Construct, ReproducesMomentsAndMarginals) {
    std::mt19937_64 rng(3);
    std::size_t built = 0;
    for (int k = 0; k < 3000; ++k) {
        const MomentSet m = random_moments(rng);
        const auto j = joint3_construct(m);
        if (!j.joint) continue;
        ++built;
        EXPECT_GE(j.joint->min_value(), 0.0);
        const MomentSet back = moments_from_probs(*j.joint);
        for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(back.singles[i], m.singles[i], 1e-12);
        for (const auto& [key, v] : m.pairs) EXPECT_NEAR(back.pair(key.first, key.second), v, 1e-12);
        EXPECT_NEAR(*back.triple, *j.triple, 1e-12);
        // Each pair marginal equals the two-time expansion.
        const std::pair<std::size_t, std::size_t> pairs[] = {{0, 1}, {1, 2}, {0, 2}};
        const std::size_t summed[] = {2, 0, 1};
        for (int p = 0; p < 3; ++p) {
            const auto marg = j.joint->marginalize(summed[p]);
            MomentSet two;
            two.singles = {m.singles[pairs[p].first], m.singles[pairs[p].second]};
            two.set_pair(0, 1, m.pair(pairs[p].first, pairs[p].second));
            const auto expect = probs_from_moments(two);
            for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(marg[i], expect[i], 1e-12);
        }
    }
    EXPECT_GT(built, 100u);
}

TEST(Feasible4, Examples) {
    MomentSet zero;
    zero.singles = {0, 0, 0, 0};
    for (auto [i, j] : {std::pair<std::size_t, std::size_t>{0, 1}, {1, 2}, {2, 3}, {0, 3}}) zero.set_pair(i, j, 0);
    EXPECT_TRUE(feasible4(zero).feasible);

    const auto m = PrecessionModel::equal_spacing(kPi / 4, 4, density_from_bloch(Vec3(0, 0, 1)));
    const MomentSet prec = moment_set(m.initial, m.observable(), m.hamiltonian(), m.times);
    const auto f = feasible4(prec);
    EXPECT_FALSE(f.feasible);
    EXPECT_NEAR(min_value(f.slacks), 2 - 2 * kSqrt2, 1e-9);

    MomentSet missing = zero;
    missing.pairs.erase({2, 3});
    EXPECT_THROW(feasible4(missing), std::invalid_argument);
}

TEST(Feasible4, ClassicalMarkovAgreesWithLp) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0, 1);
    for (int k = 0; k < 200; ++k) {
        const std::vector<double> t{0.0, 0.1 + u(rng), 1.2 + u(rng), 2.3 + u(rng)};
        const MomentSet m = classical_markov_moments(2 * u(rng), 2 * u(rng) - 1, t);
        EXPECT_TRUE(feasible4(m).feasible);
        const auto lp = lp_feasible(pairwise_problem(m, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}));
        EXPECT_TRUE(lp.feasible);
    }
}

TEST(LpFeasible, AgreesWithDInterval) {
    std::mt19937_64 rng(5);
    for (int k = 0; k < 1500; ++k) {
        const MomentSet m = random_moments(rng);
        const auto lp = lp_feasible(three_time_problem(m));
        EXPECT_EQ(lp.feasible, !d_interval(m).empty);
        if (lp.feasible) {
            ASSERT_TRUE(lp.joint.has_value());
            EXPECT_GE(lp.joint->min_value(), 0.0);
            Rational total = 0;
            for (const auto& r : lp.exact_joint) {
                EXPECT_GE(r, 0);
                total += r;
            }
            EXPECT_EQ(total, 1);
        }
        EXPECT_LE(lp.rationalization_error, 1e-9);
    }
}

TEST(LpFeasible, WitnessMatchesMarginalsExactly) {
    const auto prob = three_time_problem(three(0.2, -0.4, 0.1, 0.3, -0.2, 0.25));
    const auto lp = lp_feasible(prob);
    ASSERT_TRUE(lp.feasible);
    EXPECT_EQ(lp.exact_joint[0] + lp.exact_joint[1], rationalize(prob.constraints[0].table[0]));
}

TEST(LpFeasible, TrivialSingleVariable) {
    MarginalProblem p;
    p.variables = 1;
    p.alphabets = {2};
    p.constraints.push_back({{0}, OutcomeTable(1, {0.3, 0.7}, TableKind::probability)});
    const auto lp = lp_feasible(p);
    ASSERT_TRUE(lp.feasible);
    EXPECT_EQ(lp.exact_joint[0], Rational(3, 10));
}

TEST(LpFeasible, ChshViolatingEprbMarginalsInfeasible) {
    const auto run = run_eprb(EPRBModel::standard_chsh());
    const auto& c = run.correlators;
    EXPECT_FALSE(lp_feasible(chsh_marginal_problem(c[0], c[1], c[2], c[3])).feasible);
}

TEST(LpFeasible, AgreesWithChshOnSamples) {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(-1, 1);
    std::size_t infeasible = 0;
    for (int k = 0; k < 1500; ++k) {
        const double c13 = u(rng), c14 = u(rng), c23 = u(rng), c24 = u(rng);
        const bool chsh_ok = min_value(chsh_check(c13, c14, c23, c24)) >= 0.0;
        EXPECT_EQ(lp_feasible(chsh_marginal_problem(c13, c14, c23, c24)).feasible, chsh_ok);
        infeasible += !chsh_ok;
    }
    EXPECT_GT(infeasible, 50u);
}

TEST(LpFeasible, AlphabetErrors) {
    MarginalProblem p;
    p.variables = 2;
    p.alphabets = {2, 3};
    try {
        lp_feasible(p);
        FAIL();
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find("inconsistent alphabet declarations"), std::string::npos);
    }
    p.alphabets = {2};
    EXPECT_THROW(lp_feasible(p), std::invalid_argument);
    p.alphabets = {2, 2};
    p.constraints.push_back({{0, 0}, OutcomeTable(2, {0.25, 0.25, 0.25, 0.25}, TableKind::probability)});
    EXPECT_THROW(lp_feasible(p), std::invalid_argument);
}

TEST(LpFeasible, InconsistentOverlapInfeasible) {
    MarginalProblem p;
    p.variables = 2;
    p.alphabets = {2, 2};
    p.constraints.push_back({{0}, OutcomeTable(1, {0.3, 0.7}, TableKind::probability)});
    p.constraints.push_back({{0, 1}, OutcomeTable(2, {0.25, 0.25, 0.25, 0.25}, TableKind::probability, {0, 1})});
    EXPECT_FALSE(lp_feasible(p).feasible);
}

TEST(ChshCheck, Examples) {
    const auto run = run_eprb(EPRBModel::standard_chsh());
    const auto& c = run.correlators;
    EXPECT_NEAR(min_value(chsh_check(c[0], c[1], c[2], c[3])), 2 - 2 * kSqrt2, 1e-12);
    for (const auto& s : chsh_check(0, 0, 0, 0)) EXPECT_DOUBLE_EQ(s.value, 2.0);
    EXPECT_THROW(chsh_check(2, 0, 0, 0), std::invalid_argument);
}

TEST(ChshCheck, ProductStatesSatisfy) {
    std::mt19937_64 rng(7);
    for (int k = 0; k < 1000; ++k) {
        // Product state: C_xy = (r_A . x)(r_B . y) with |r| <= 1.
        const Vec3 ra = random_unit_vector(rng) * std::uniform_real_distribution<double>(0, 1)(rng);
        const Vec3 rb = random_unit_vector(rng);
        const Vec3 a = random_unit_vector(rng), ap = random_unit_vector(rng);
        const Vec3 b = random_unit_vector(rng), bp = random_unit_vector(rng);
        const auto s = chsh_check(ra.dot(a) * rb.dot(b), ra.dot(a) * rb.dot(bp), ra.dot(ap) * rb.dot(b),
                                  ra.dot(ap) * rb.dot(bp));
        EXPECT_GE(min_value(s), -1e-12);
    }
}

}  // namespace
}  // namespace lgbench
