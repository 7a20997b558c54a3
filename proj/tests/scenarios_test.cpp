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


#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "lgbench/scenarios.hpp"
#include "oracles.hpp"

namespace lgbench {
namespace {

constexpr double kPi = 3.14159265358979323846;
const double kSqrt2 = std::sqrt(2.0);

TEST(RunPrecession, Examples) {
    const auto mixed = run_precession(PrecessionModel::equal_spacing(kPi / 2, 3, State::maximally_mixed(2)));
    EXPECT_TRUE(mixed.report.mr_weak);
    EXPECT_FALSE(*mixed.report.mr_strong);

    const auto eig = run_precession(PrecessionModel::equal_spacing(2 * kPi / 3, 3, density_from_bloch(Vec3(0, 0, 1))));
    EXPECT_FALSE(eig.report.mr_weak);
    double lg3_min = 1e9;
    for (const auto& s : eig.report.slacks) {
        if (s.name.rfind("LG3_", 0) == 0) lg3_min = std::min(lg3_min, s.value);
    }
    EXPECT_NEAR(lg3_min, -0.5, 1e-12);

    const auto frozen = run_precession(PrecessionModel::equal_spacing(0.0, 3, sample_state(2, SampleKind::pure_haar)));
    EXPECT_TRUE(frozen.report.mr_weak);
    EXPECT_TRUE(*frozen.report.mr_int);
    EXPECT_TRUE(*frozen.report.mr_strong);
}

TEST(RunPrecession, CorrelatorsMatchCosineAndTables) {
    const auto m = PrecessionModel::equal_spacing(0.9, 4, sample_state(3, SampleKind::mixed_ball));
    const auto run = run_precession(m);
    for (const auto& [key, v] : run.moments.pairs) {
        const double dt = m.times[key.second] - m.times[key.first];
        EXPECT_NEAR(v, std::cos(0.9 * dt), 1e-10);
        EXPECT_NEAR(run.closed_form_pairs.at(key), v, 1e-10);
    }
    EXPECT_EQ(run.tables.size(), 15u + 6u);
    EXPECT_EQ(run.tables.at("p1234").arity(), 4u);
    EXPECT_EQ(run.tables.at("q24").kind(), TableKind::quasi);
    EXPECT_EQ(run.tables.at("q24").labels(), (std::vector<std::size_t>{1, 3}));
}

TEST(RunPrecession, ReportMatchesClassify) {
    const auto m = PrecessionModel::equal_spacing(1.3, 3, sample_state(5, SampleKind::pure_haar));
    const auto run = run_precession(m);
    const auto r = classify(m.initial, m.observable(), m.hamiltonian(), m.times);
    ASSERT_EQ(run.report.slacks.size(), r.slacks.size());
    for (std::size_t i = 0; i < r.slacks.size(); ++i) {
        EXPECT_EQ(run.report.slacks[i].name, r.slacks[i].name);
        EXPECT_DOUBLE_EQ(run.report.slacks[i].value, r.slacks[i].value);
    }
}

TEST(RunPrecession, GeneralAxesUseBlochOracle) {
    std::mt19937_64 rng(8);
    for (int k = 0; k < 50; ++k) {
        PrecessionModel m;
        m.axis = random_unit_vector(rng);
        m.q_axis = random_unit_vector(rng);
        m.omega = 1.7;
        m.initial = sample_state(static_cast<std::uint64_t>(k), SampleKind::pure_haar);
        m.times = {0.0, 0.5, 1.6};
        const auto run = run_precession(m);
        for (const auto& [key, v] : run.moments.pairs) {
            const Vec3 ai = oracle::heisenberg_axis(m.q_axis, m.axis, m.omega, m.times[key.first]);
            const Vec3 aj = oracle::heisenberg_axis(m.q_axis, m.axis, m.omega, m.times[key.second]);
            EXPECT_NEAR(v, ai.dot(aj), 1e-10);
        }
        for (std::size_t i = 0; i < 3; ++i) {
            EXPECT_LT((m.q_axis_at(m.times[i]) - oracle::heisenberg_axis(m.q_axis, m.axis, m.omega, m.times[i])).norm(),
                      1e-12);
        }
    }
}

TEST(RunPrecession, StateIndependentCorrelators) {
    const std::vector<double> times{0.0, 0.6, 1.1};
    std::map<std::pair<std::size_t, std::size_t>, std::pair<double, double>> range;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        PrecessionModel m;
        m.omega = 2.1;
        m.initial = sample_state(seed, seed % 2 ? SampleKind::mixed_ball : SampleKind::pure_haar);
        m.times = times;
        const MomentSet ms = moment_set(m.initial, m.observable(), m.hamiltonian(), times);
        for (const auto& [key, v] : ms.pairs) {
            auto it = range.try_emplace(key, v, v).first;
            it->second.first = std::min(it->second.first, v);
            it->second.second = std::max(it->second.second, v);
        }
    }
    for (const auto& [key, r] : range) EXPECT_LT(r.second - r.first, 1e-10);
}

TEST(RunPrecession, InvalidModels) {
    PrecessionModel m;
    m.times = {0.0, 1.0};
    EXPECT_THROW(run_precession(m), std::invalid_argument);
    m.times = {0.0, 1.0, 1.0};
    EXPECT_THROW(run_precession(m), std::invalid_argument);
    m.times = {0.0, 1.0, 2.0};
    m.axis = Vec3(0, 0, 2);
    EXPECT_THROW(run_precession(m), std::invalid_argument);
}

TEST(RunEprb, StandardAnglesViolateChshWithoutSignaling) {
    const auto run = run_eprb(EPRBModel::standard_chsh());
    EXPECT_NEAR(min_value(run.chsh), 2 - 2 * kSqrt2, 1e-9);
    for (const auto& s : run.no_signaling) EXPECT_LT(s.value, 1e-12) << s.name;
    for (const auto& s : run.sum_rule_s2s4) EXPECT_LT(s.value, 1e-12) << s.name;
    EXPECT_GT(max_deviation(run.sum_rule_s1s3), 1e-3);
}

TEST(RunEprb, PairTablesMatchSingletFormula) {
    std::mt19937_64 rng(9);
    for (int k = 0; k < 100; ++k) {
        EPRBModel m{random_unit_vector(rng), random_unit_vector(rng), random_unit_vector(rng),
                    random_unit_vector(rng)};
        const auto run = run_eprb(m);
        const std::pair<const char*, std::pair<Vec3, Vec3>> pairs[] = {
            {"p13", {m.a, m.b}}, {"p14", {m.a, m.b_prime}}, {"p23", {m.a_prime, m.b}}, {"p24", {m.a_prime, m.b_prime}}};
        for (const auto& [name, dirs] : pairs) {
            const auto& t = run.pairs.at(name);
            for (int sa : {1, -1}) {
                for (int sb : {1, -1}) {
                    EXPECT_NEAR(t.at({sa, sb}), oracle::singlet_pair(sa, sb, dirs.first, dirs.second), 1e-12);
                }
            }
        }
        EXPECT_NEAR(run.correlators[0], -m.a.dot(m.b), 1e-12);
        for (const auto& s : run.no_signaling) EXPECT_LT(s.value, 1e-12);
        for (const auto& s : run.sum_rule_s2s4) EXPECT_LT(s.value, 1e-12);
    }
}

TEST(RunEprb, ParallelDirectionsAnticorrelate) {
    EPRBModel m = EPRBModel::standard_chsh();
    m.b = m.a;
    const auto t = run_eprb(m).pairs.at("p13");
    EXPECT_NEAR(t.at({1, 1}), 0.0, 1e-12);
    EXPECT_NEAR(t.at({-1, -1}), 0.0, 1e-12);
}

TEST(RunEprb, EqualDirectionsSatisfySumRules) {
    const Vec3 d = Vec3(1, 2, 2).normalized();
    const auto run = run_eprb(EPRBModel{d, d, d, d});
    EXPECT_LT(max_deviation(run.sum_rule_s1s3), 1e-12);
    EXPECT_LT(max_deviation(run.sum_rule_s2s4), 1e-12);
    EXPECT_THROW(run_eprb(EPRBModel{Vec3(0, 0, 2), d, d, d}), std::invalid_argument);
}

TEST(ClassicalMarkov, MatchesTrajectoryEnumeration) {
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> u(0, 1);
    for (int k = 0; k < 300; ++k) {
        const double rate = 2 * u(rng), bias = 2 * u(rng) - 1;
        std::vector<double> t{u(rng)};
        const std::size_t n = 3 + static_cast<std::size_t>(k % 2);
        while (t.size() < n) t.push_back(t.back() + 0.01 + u(rng));
        const MomentSet m = classical_markov_moments(rate, bias, t);
        const auto o = oracle::telegraph_enumeration(rate, bias, t);
        for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(m.singles[i], o.singles[i], 1e-12);
        for (const auto& [key, v] : o.pairs) EXPECT_NEAR(m.pair(key.first, key.second), v, 1e-12);
        if (n == 3) {
            ASSERT_TRUE(m.triple.has_value());
            EXPECT_NEAR(*m.triple, o.triple, 1e-12);
            EXPECT_FALSE(d_interval(m).empty);
            EXPECT_GE(*m.triple, d_interval(m).lower - 1e-12);
            EXPECT_LE(*m.triple, d_interval(m).upper + 1e-12);
            EXPECT_GE(min_value(weak_slacks3(m)), -1e-12);
        } else {
            EXPECT_TRUE(feasible4(m).feasible);
        }
    }
}

TEST(ClassicalMarkov, Limits) {
    const MomentSet frozen = classical_markov_moments(0.0, 1.0, {0.0, 1.0, 2.0});
    for (double s : frozen.singles) EXPECT_DOUBLE_EQ(s, 1.0);
    for (const auto& [k, v] : frozen.pairs) EXPECT_DOUBLE_EQ(v, 1.0);
    EXPECT_DOUBLE_EQ(*frozen.triple, 1.0);
    const MomentSet fast = classical_markov_moments(1e3, 0.4, {0.0, 1.0, 2.0});
    for (const auto& [k, v] : fast.pairs) EXPECT_LT(std::abs(v), 1e-12);
    EXPECT_THROW(classical_markov_moments(-1, 0, {0.0}), std::invalid_argument);
    EXPECT_THROW(classical_markov_moments(1, 1.5, {0.0}), std::invalid_argument);
}

TEST(Sweep, LgThreeCurveMinimum) {
    PrecessionModel base;
    base.times = {0.0, 1.0, 2.0};
    std::vector<double> grid;
    for (int k = 0; k <= 600; ++k) grid.push_back(kPi * k / 600);
    const auto rows = sweep(base, "omega_tau", grid);
    ASSERT_EQ(rows.size(), grid.size());
    double best = 1e9, at = 0;
    for (const auto& r : rows) {
        const double v = r.report.find("LG3_1").value;
        if (v < best) {
            best = v;
            at = r.parameter;
        }
    }
    EXPECT_NEAR(best, -0.5, 1e-12);
    EXPECT_NEAR(at, 2 * kPi / 3, 1e-12);
    for (std::size_t i = 0; i < rows.size(); ++i) EXPECT_DOUBLE_EQ(rows[i].parameter, grid[i]);
}

TEST(Sweep, SinglePointAtZero) {
    PrecessionModel base;
    base.times = {0.0, 1.0, 2.0};
    const auto rows = sweep(base, "omega_tau", {0.0});
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_TRUE(rows[0].report.mr_weak);
    EXPECT_TRUE(*rows[0].report.mr_int);
    EXPECT_TRUE(*rows[0].report.mr_strong);
}

TEST(Sweep, MaximallyMixedHasNoWitness) {
    PrecessionModel base;
    base.initial = State::maximally_mixed(2);
    base.times = {0.0, 0.5, 1.0};
    std::vector<double> grid;
    for (int k = 0; k < 50; ++k) grid.push_back(0.07 * k);
    for (const auto& r : sweep(base, "omega_tau", grid)) {
        EXPECT_LT(r.witness, 1e-12);
        EXPECT_LT(r.report.find("NSIT_(1)2").value, 1e-12);
    }
}

TEST(Sweep, ParametersAndErrors) {
    PrecessionModel base;
    base.times = {1.0, 2.0, 3.0};
    const auto tau = sweep(base, "tau", {0.5});
    const auto direct = run_precession([&] {
        PrecessionModel m = base;
        m.times = {1.0, 1.5, 2.0};
        return m;
    }());
    EXPECT_DOUBLE_EQ(tau[0].report.find("LG3_1").value, direct.report.find("LG3_1").value);
    EXPECT_NO_THROW(sweep(base, "omega", {0.1, 0.2}));
    EXPECT_THROW(sweep(base, "phase", {0.1}), std::invalid_argument);
    EXPECT_THROW(sweep(base, "omega", {}), std::invalid_argument);
    EXPECT_THROW(sweep(base, "tau", {0.0}), std::invalid_argument);
    PrecessionModel uneven;
    uneven.times = {0.0, 1.0, 3.0};
    EXPECT_THROW(sweep(uneven, "omega_tau", {0.1}), std::invalid_argument);
}

TEST(DegeneracySearch, FindsNegativeQuasiWithNsit) {
    const auto s = search_degeneracy(100, 40, 3);
    EXPECT_EQ(s.samples, 40u);
    EXPECT_GE(s.hits, 1u);
    EXPECT_LT(s.most_negative_q, 0.0);
    const auto four = search_degeneracy(7, 20, 4);
    EXPECT_GE(four.hits, 1u);
}

}  // namespace
}  // namespace lgbench
