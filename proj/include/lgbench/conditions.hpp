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

// Leggett-Garg inequalities, no-signaling-in-time equalities and the
// MR_weak / MR_int / MR_strong classification built on them.
//
// Inequality slacks are satisfied when >= -eps, equality deviations when
// <= eps. Verdicts are always recomputed from the slack list so a report is
// self-consistent.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lgbench/measure.hpp"
#include "lgbench/outcome_table.hpp"
#include "lgbench/qops.hpp"

namespace lgbench {

inline constexpr double kDefaultTolerance = 1e-9;

enum class SlackKind { inequality, equality };

struct Slack {
    std::string name;
    double value;
    SlackKind kind = SlackKind::inequality;

    bool satisfied(double eps) const {
        return kind == SlackKind::inequality ? value >= -eps : value <= eps;
    }
};

inline double min_value(std::span<const Slack> slacks) {
    double m = INFINITY;
    for (const auto& s : slacks) {
        m = std::min(m, s.value);
    }
    return m;
}

inline bool all_satisfied(std::span<const Slack> slacks, double eps) {
    return std::all_of(slacks.begin(), slacks.end(), [eps](const Slack& s) { return s.satisfied(eps); });
}

struct ConditionReport {
    std::vector<Slack> slacks;
    double tolerance = kDefaultTolerance;
    bool mr_weak = false;
    /// Absent for four-time reports, which only define MR_weak.
    std::optional<bool> mr_int;
    std::optional<bool> mr_strong;

    const Slack& find(std::string_view name) const {
        for (const auto& s : slacks) {
            if (s.name == name) {
                return s;
            }
        }
        throw std::out_of_range("ConditionReport: no slack named " + std::string(name));
    }

    bool has(std::string_view name) const {
        return std::any_of(slacks.begin(), slacks.end(), [name](const Slack& s) { return s.name == name; });
    }

    /// Recompute all verdicts from the slacks at the stored tolerance.
    void recompute() {
        const double eps = tolerance;
        auto group_ok = [&](std::string_view prefix) {
            return std::all_of(slacks.begin(), slacks.end(), [&](const Slack& s) {
                return std::string_view(s.name).substr(0, prefix.size()) != prefix || s.satisfied(eps);
            });
        };
        auto named_ok = [&](std::string_view name) { return find(name).satisfied(eps); };
        const bool four_time = has("LG4_m14_up");
        if (four_time) {
            mr_weak = group_ok("LG2_") && group_ok("LG4_");
            mr_int.reset();
            mr_strong.reset();
            return;
        }
        mr_weak = group_ok("LG2_") && group_ok("LG3_");
        mr_int = named_ok("NSIT_(1)2") && named_ok("NSIT_(1)3") && named_ok("NSIT_(2)3") && group_ok("LG3_");
        mr_strong = named_ok("NSIT_(2)3") && named_ok("NSIT_(1)23") && named_ok("NSIT_1(2)3");
    }
};

namespace detail {

inline std::string sign_char(int s) { return s > 0 ? "+" : "-"; }

inline void require_correlator(double c, const char* what) {
    if (!std::isfinite(c) || std::abs(c) > 1.0 + kConstructTol) {
        throw std::invalid_argument(std::string(what) + ": correlator " + fmt_double(c) + " outside [-1, 1]");
    }
}

/// Sums with one minus sign, in the order given by `minus_order`, each
/// expanded to an upper (2 - S) and lower (2 + S) slack.
inline std::vector<Slack> cycle_slacks(const std::array<double, 4>& c, const std::array<const char*, 4>& names,
                                       const std::array<std::size_t, 4>& minus_order, const char* prefix) {
    std::vector<Slack> out;
    for (std::size_t pos : minus_order) {
        double s = 0.0;
        for (std::size_t k = 0; k < 4; ++k) {
            s += (k == pos ? -1.0 : 1.0) * c[k];
        }
        const std::string base = std::string(prefix) + "_m" + names[pos];
        out.push_back({base + "_up", 2.0 - s});
        out.push_back({base + "_lo", 2.0 + s});
    }
    return out;
}

}  // namespace detail

/// Two-time LG inequalities 1 + s_i<Q_i> + s_j<Q_j> + s_i s_j C_ij >= 0,
/// in tuple order (++), (+-), (-+), (--).
inline std::vector<Slack> lg2_check(const MomentSet& m, std::size_t i, std::size_t j) {
    const double qi = m.single(i), qj = m.single(j), c = m.pair(i, j);
    const std::string tag = "LG2_" + std::to_string(i + 1) + std::to_string(j + 1);
    std::vector<Slack> out;
    for (int si : {1, -1}) {
        for (int sj : {1, -1}) {
            out.push_back({tag + "(" + detail::sign_char(si) + detail::sign_char(sj) + ")",
                           1.0 + si * qi + sj * qj + si * sj * c});
        }
    }
    return out;
}

/// The four three-time LG inequalities, in the order
/// 1+C12+C23+C13, 1-C12-C23+C13, 1+C12-C23-C13, 1-C12+C23-C13.
inline std::vector<Slack> lg3_check(double c12, double c23, double c13) {
    detail::require_correlator(c12, "lg3_check");
    detail::require_correlator(c23, "lg3_check");
    detail::require_correlator(c13, "lg3_check");
    return {{"LG3_1", 1.0 + c12 + c23 + c13},
            {"LG3_2", 1.0 - c12 - c23 + c13},
            {"LG3_3", 1.0 + c12 - c23 - c13},
            {"LG3_4", 1.0 - c12 + c23 - c13}};
}

/// Eight four-time LG inequalities -2 <= C12 + C23 + C34 + C14 (one term
/// negated) <= 2. Minus-sign positions in order C14, C12, C23, C34; each
/// gives an upper then a lower slack.
inline std::vector<Slack> lg4_check(double c12, double c23, double c34, double c14) {
    for (double c : {c12, c23, c34, c14}) {
        detail::require_correlator(c, "lg4_check");
    }
    return detail::cycle_slacks({c12, c23, c34, c14}, {"12", "23", "34", "14"}, {3, 0, 1, 2}, "LG4");
}

/// Three-time LG inequalities for an initial eigenstate of Q_1 (eigenvalue +1).
inline std::vector<Slack> eigenstate_lg(double q2, double q3, double c23) {
    for (double c : {q2, q3, c23}) {
        detail::require_correlator(c, "eigenstate_lg");
    }
    return {{"D1", 1.0 + q2 + q3 + c23},
            {"D2", 1.0 - q2 - q3 + c23},
            {"D3", 1.0 + q2 - q3 - c23},
            {"D4", 1.0 - q2 + q3 - c23}};
}

/// Deviation |sum over `summed_index` of fine - coarse| per coarse outcome.
/// Labels of the retained positions of `fine` must match those of `coarse`.
inline std::vector<Slack> nsit_deviation(const OutcomeTable& coarse, const OutcomeTable& fine,
                                         std::size_t summed_index, std::string_view name = "NSIT") {
    if (fine.arity() != coarse.arity() + 1) {
        throw std::invalid_argument("nsit_deviation: fine table must have arity one greater than coarse");
    }
    if (fine.alphabet() != coarse.alphabet()) {
        throw std::invalid_argument("nsit_deviation: alphabet mismatch");
    }
    if (summed_index >= fine.arity()) {
        throw std::invalid_argument("nsit_deviation: summed index out of range");
    }
    const OutcomeTable marg = fine.marginalize(summed_index);
    if (marg.labels() != coarse.labels()) {
        throw std::invalid_argument("nsit_deviation: retained positions do not align with the coarse table");
    }
    std::vector<Slack> out;
    for (std::size_t idx = 0; idx < coarse.size(); ++idx) {
        std::string tag(name);
        tag += "[";
        const auto d = coarse.digits(idx);
        for (std::size_t k = 0; k < d.size(); ++k) {
            tag += coarse.alphabet() == 2 ? detail::sign_char(digit_sign(d[k])) : std::to_string(d[k]);
        }
        tag += "]";
        out.push_back({tag, std::abs(marg[idx] - coarse[idx]), SlackKind::equality});
    }
    return out;
}

inline double max_deviation(std::span<const Slack> devs) {
    double m = 0.0;
    for (const auto& s : devs) {
        m = std::max(m, s.value);
    }
    return m;
}

/// The twelve two-time and four three-time LG slacks of a three-time moment set.
inline std::vector<Slack> weak_slacks3(const MomentSet& m) {
    std::vector<Slack> out;
    for (auto [i, j] : {std::pair<std::size_t, std::size_t>{0, 1}, {1, 2}, {0, 2}}) {
        auto s = lg2_check(m, i, j);
        out.insert(out.end(), s.begin(), s.end());
    }
    auto s3 = lg3_check(m.pair(0, 1), m.pair(1, 2), m.pair(0, 2));
    out.insert(out.end(), s3.begin(), s3.end());
    return out;
}

/// The sixteen two-time (pairs 12, 23, 34, 14) and eight four-time LG slacks.
inline std::vector<Slack> weak_slacks4(const MomentSet& m) {
    std::vector<Slack> out;
    for (auto [i, j] : {std::pair<std::size_t, std::size_t>{0, 1}, {1, 2}, {2, 3}, {0, 3}}) {
        auto s = lg2_check(m, i, j);
        out.insert(out.end(), s.begin(), s.end());
    }
    auto s4 = lg4_check(m.pair(0, 1), m.pair(1, 2), m.pair(2, 3), m.pair(0, 3));
    out.insert(out.end(), s4.begin(), s4.end());
    return out;
}

/// Max NSIT deviations for the five conditions used by MR_int and MR_strong,
/// named NSIT_(1)2, NSIT_(1)3, NSIT_(2)3, NSIT_(1)23, NSIT_1(2)3.
inline std::vector<Slack> nsit_slacks3(const State& rho, const DichotomicObservable& q, const Hamiltonian& h,
                                       std::span<const double> times) {
    const std::vector<double> t(times.begin(), times.end());
    const auto p2 = seq_prob(rho, q, h, Schedule::only(t, {1}));
    const auto p3 = seq_prob(rho, q, h, Schedule::only(t, {2}));
    const auto p12 = seq_prob(rho, q, h, Schedule::only(t, {0, 1}));
    const auto p13 = seq_prob(rho, q, h, Schedule::only(t, {0, 2}));
    const auto p23 = seq_prob(rho, q, h, Schedule::only(t, {1, 2}));
    const auto p123 = seq_prob(rho, q, h, Schedule::all_measured(t));
    return {
        {"NSIT_(1)2", max_deviation(nsit_deviation(p2, p12, 0)), SlackKind::equality},
        {"NSIT_(1)3", max_deviation(nsit_deviation(p3, p13, 0)), SlackKind::equality},
        {"NSIT_(2)3", max_deviation(nsit_deviation(p3, p23, 0)), SlackKind::equality},
        {"NSIT_(1)23", max_deviation(nsit_deviation(p23, p123, 0)), SlackKind::equality},
        {"NSIT_1(2)3", max_deviation(nsit_deviation(p13, p123, 1)), SlackKind::equality},
    };
}

/// Full three-time classification recomputed from the model. LG slacks use
/// the piecewise non-invasive moments; NSIT deviations use sequential tables.
inline ConditionReport classify(const State& rho, const DichotomicObservable& q, const Hamiltonian& h,
                                std::span<const double> times, double eps = kDefaultTolerance) {
    if (times.size() != 3) {
        throw std::invalid_argument("classify: expects exactly 3 times");
    }
    if (!(eps >= 0.0)) {
        throw std::invalid_argument("classify: tolerance must be non-negative");
    }
    ConditionReport r;
    r.tolerance = eps;
    r.slacks = weak_slacks3(moment_set(rho, q, h, times));
    auto n = nsit_slacks3(rho, q, h, times);
    r.slacks.insert(r.slacks.end(), n.begin(), n.end());
    r.recompute();
    return r;
}

/// Four-time analogue; only MR_weak is defined.
inline ConditionReport classify4(const State& rho, const DichotomicObservable& q, const Hamiltonian& h,
                                 std::span<const double> times, double eps = kDefaultTolerance) {
    if (times.size() != 4) {
        throw std::invalid_argument("classify4: expects exactly 4 times");
    }
    if (!(eps >= 0.0)) {
        throw std::invalid_argument("classify4: tolerance must be non-negative");
    }
    ConditionReport r;
    r.tolerance = eps;
    r.slacks = weak_slacks4(moment_set(rho, q, h, times));
    r.recompute();
    return r;
}

}  // namespace lgbench
