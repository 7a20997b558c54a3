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

// Joint-distribution construction for given singles and pairwise correlators.
//
// Two independent routes decide whether a joint probability exists:
//  * the closed-form route: the triple correlator D must lie in an interval
//    cut out by the eight non-negativity conditions of the three-time
//    moment expansion (and the LG-form slacks that encode the same thing);
//  * an exact rational phase-one simplex over the full joint simplex.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lgbench/conditions.hpp"
#include "lgbench/measure.hpp"
#include "lgbench/outcome_table.hpp"
#include "lgbench/rational.hpp"
#include "lgbench/simplex.hpp"

namespace lgbench {

/// Admissible range of the triple correlator.
struct DInterval {
    static constexpr double kEmptyTol = 1e-12;

    double lower = -1.0;
    double upper = 1.0;
    bool empty = false;

    double midpoint() const { return 0.5 * (lower + upper); }
};

namespace detail {

inline void require_three_time_moments(const MomentSet& m, const char* what) {
    if (m.times() != 3 || !m.has_pair(0, 1) || !m.has_pair(1, 2) || !m.has_pair(0, 2)) {
        throw std::invalid_argument(std::string(what) + ": requires three singles and the pairs C12, C23, C13");
    }
}

/// Everything in 8 p(s1,s2,s3) except the s1 s2 s3 D term, by outcome index.
inline std::array<double, 8> expansion_without_triple(const MomentSet& m) {
    const double q1 = m.singles[0], q2 = m.singles[1], q3 = m.singles[2];
    const double c12 = m.pair(0, 1), c23 = m.pair(1, 2), c13 = m.pair(0, 2);
    std::array<double, 8> a{};
    for (std::size_t i = 0; i < 8; ++i) {
        const int s1 = digit_sign(i >> 2), s2 = digit_sign((i >> 1) & 1), s3 = digit_sign(i & 1);
        a[i] = 1.0 + s1 * q1 + s2 * q2 + s3 * q3 + s1 * s2 * c12 + s2 * s3 * c23 + s1 * s3 * c13;
    }
    return a;
}

inline int triple_sign(std::size_t i) { return digit_sign(i >> 2) * digit_sign((i >> 1) & 1) * digit_sign(i & 1); }

}  // namespace detail

/// Outcomes with s1 s2 s3 = +1 bound D from below, those with -1 from above.
inline DInterval d_interval(const MomentSet& m) {
    detail::require_three_time_moments(m, "d_interval");
    const auto a = detail::expansion_without_triple(m);
    DInterval out{-INFINITY, INFINITY, false};
    for (std::size_t i = 0; i < 8; ++i) {
        if (detail::triple_sign(i) > 0) {
            out.lower = std::max(out.lower, -a[i]);
        } else {
            out.upper = std::min(out.upper, a[i]);
        }
    }
    out.empty = out.lower > out.upper + DInterval::kEmptyTol;
    return out;
}

struct JointConstruction {
    DInterval interval;
    /// Present when the interval is non-empty.
    std::optional<OutcomeTable> joint;
    std::optional<double> triple;
    /// Names of the LG-form slacks that fail when the interval is empty.
    std::vector<std::string> violated;
};

/// Evaluate the three-time moment expansion at the midpoint of the D interval.
inline JointConstruction joint3_construct(const MomentSet& m) {
    JointConstruction out{d_interval(m), std::nullopt, std::nullopt, {}};
    if (out.interval.empty) {
        // Each lower/upper bound pair crossing corresponds to one LG-form slack.
        for (const auto& s : weak_slacks3(m)) {
            if (2.0 * s.value < -DInterval::kEmptyTol) {
                out.violated.push_back(s.name);
            }
        }
        return out;
    }
    MomentSet full = m;
    full.triple = out.interval.midpoint();
    OutcomeTable q = probs_from_moments(full);
    std::vector<double> v = q.values();
    for (double& x : v) {
        if (x < 0.0) {
            x = 0.0;  // only reachable inside the emptiness tolerance
        }
    }
    out.joint = OutcomeTable(3, std::move(v), TableKind::probability);
    out.triple = full.triple;
    return out;
}

struct Feasibility4 {
    bool feasible = false;
    std::vector<Slack> slacks;
};

/// Four-time MR_weak: LG2 on pairs 12, 23, 34, 14 plus the eight LG4 slacks.
inline Feasibility4 feasible4(const MomentSet& m, double eps = kDefaultTolerance) {
    if (m.times() != 4) {
        throw std::invalid_argument("feasible4: requires four singles");
    }
    for (auto [i, j] : {std::pair<std::size_t, std::size_t>{0, 1}, {1, 2}, {2, 3}, {0, 3}}) {
        if (!m.has_pair(i, j)) {
            throw std::invalid_argument("feasible4: missing required pair C_" + std::to_string(i + 1) +
                                        std::to_string(j + 1));
        }
    }
    Feasibility4 out;
    out.slacks = weak_slacks4(m);
    out.feasible = all_satisfied(out.slacks, eps);
    return out;
}

/// Eight CHSH inequalities over C13, C14, C23, C24. Minus-sign positions in
/// order C24, C13, C14, C23; each gives an upper then a lower slack.
inline std::vector<Slack> chsh_check(double c13, double c14, double c23, double c24) {
    for (double c : {c13, c14, c23, c24}) {
        detail::require_correlator(c, "chsh_check");
    }
    return detail::cycle_slacks({c13, c14, c23, c24}, {"13", "14", "23", "24"}, {3, 0, 1, 2}, "CHSH");
}

struct MarginalConstraint {
    std::vector<std::size_t> vars;
    OutcomeTable table;
};

/// Given tables on subsets of variables, does a joint distribution exist?
struct MarginalProblem {
    std::size_t variables = 0;
    std::vector<std::size_t> alphabets;
    std::vector<MarginalConstraint> constraints;

    static constexpr std::size_t kMaxVariables = 4;

    void validate() const {
        if (variables == 0 || variables > kMaxVariables) {
            throw std::invalid_argument("MarginalProblem: supports 1 to " + std::to_string(kMaxVariables) +
                                        " variables");
        }
        if (alphabets.size() != variables) {
            throw std::invalid_argument("MarginalProblem: inconsistent alphabet declarations (" +
                                        std::to_string(alphabets.size()) + " alphabets for " +
                                        std::to_string(variables) + " variables)");
        }
        for (std::size_t a : alphabets) {
            if (a != 2) {
                throw std::invalid_argument("MarginalProblem: inconsistent alphabet declarations (only dichotomic "
                                            "variables are supported, got alphabet " +
                                            std::to_string(a) + ")");
            }
        }
        for (const auto& c : constraints) {
            if (c.vars.empty() || c.vars.size() != c.table.arity()) {
                throw std::invalid_argument("MarginalProblem: constraint arity does not match its variable list");
            }
            std::set<std::size_t> seen;
            for (std::size_t v : c.vars) {
                if (v >= variables || !seen.insert(v).second) {
                    throw std::invalid_argument("MarginalProblem: constraint variables must be distinct and in range");
                }
                if (c.table.alphabet() != alphabets[v]) {
                    throw std::invalid_argument("MarginalProblem: inconsistent alphabet declarations for variable " +
                                                std::to_string(v));
                }
            }
        }
    }
};

struct LpOptions {
    std::uint64_t max_denominator = kDefaultMaxDenominator;
    /// Expansion coefficients shared by several constraints are identified
    /// when their float values agree to within this bound.
    double snap_tolerance = 1e-12;
};

struct LpVerdict {
    bool feasible = false;
    std::optional<OutcomeTable> joint;
    std::vector<Rational> exact_joint;
    /// max |float table entry - rationalized entry| over all constraints.
    double rationalization_error = 0.0;
};

/// Exact feasibility of a dichotomic marginal problem.
///
/// Each constraint table is rewritten in its moment expansion, the moments
/// are rationalized by best continued-fraction approximation, and a moment
/// shared between constraints is rationalized once. Constraint rows are the
/// rationalized table entries, one per marginal outcome.
inline LpVerdict lp_feasible(const MarginalProblem& prob, const LpOptions& opt = {}) {
    prob.validate();
    const std::size_t n = prob.variables;
    const std::size_t joint_size = std::size_t{1} << n;

    struct Known {
        double value;
        Rational exact;
    };
    std::vector<std::vector<Known>> known(joint_size);  // by global subset mask

    FeasibilityProblem fp;
    fp.cols = joint_size;
    LpVerdict verdict;

    auto joint_bit = [n](std::size_t y, std::size_t var) { return (y >> (n - 1 - var)) & 1u; };

    for (const auto& c : prob.constraints) {
        const std::size_t k = c.vars.size();
        const std::size_t local_size = std::size_t{1} << k;
        auto local_bit = [k](std::size_t x, std::size_t pos) { return (x >> (k - 1 - pos)) & 1u; };
        auto chi = [&](std::size_t x, std::size_t umask) {
            int s = 1;
            for (std::size_t pos = 0; pos < k; ++pos) {
                if ((umask >> pos) & 1u) {
                    s *= digit_sign(local_bit(x, pos));
                }
            }
            return s;
        };

        std::vector<Rational> coeff(local_size);
        coeff[0] = 1;
        for (std::size_t umask = 1; umask < local_size; ++umask) {
            double v = 0.0;
            std::size_t gmask = 0;
            for (std::size_t pos = 0; pos < k; ++pos) {
                if ((umask >> pos) & 1u) {
                    gmask |= std::size_t{1} << c.vars[pos];
                }
            }
            for (std::size_t x = 0; x < local_size; ++x) {
                v += chi(x, umask) * c.table[x];
            }
            auto& slot = known[gmask];
            auto hit = std::find_if(slot.begin(), slot.end(),
                                    [&](const Known& kn) { return std::abs(kn.value - v) <= opt.snap_tolerance; });
            if (hit == slot.end()) {
                slot.push_back({v, rationalize(v, opt.max_denominator)});
                hit = std::prev(slot.end());
            }
            coeff[umask] = hit->exact;
        }

        for (std::size_t x = 0; x < local_size; ++x) {
            Rational entry = 0;
            for (std::size_t umask = 0; umask < local_size; ++umask) {
                if (chi(x, umask) > 0) {
                    entry += coeff[umask];
                } else {
                    entry -= coeff[umask];
                }
            }
            entry /= static_cast<unsigned long>(local_size);
            verdict.rationalization_error =
                std::max(verdict.rationalization_error, std::abs(c.table[x] - to_double(entry)));

            std::vector<Rational> row(joint_size, Rational(0));
            for (std::size_t y = 0; y < joint_size; ++y) {
                bool match = true;
                for (std::size_t pos = 0; pos < k && match; ++pos) {
                    match = joint_bit(y, c.vars[pos]) == local_bit(x, pos);
                }
                if (match) {
                    row[y] = 1;
                }
            }
            fp.a.push_back(std::move(row));
            fp.b.push_back(std::move(entry));
        }
    }
    fp.a.emplace_back(joint_size, Rational(1));
    fp.b.emplace_back(1);

    auto x = find_feasible_point(fp);
    if (!x) {
        return verdict;
    }
    verdict.feasible = true;
    std::vector<double> values(joint_size);
    for (std::size_t y = 0; y < joint_size; ++y) {
        values[y] = to_double((*x)[y]);
    }
    verdict.joint = OutcomeTable(n, std::move(values), TableKind::probability);
    verdict.exact_joint = std::move(*x);
    return verdict;
}

/// Pair tables (1/4)(1 + s_i<Q_i> + s_j<Q_j> + s_i s_j C_ij) as marginal
/// constraints. Tables may be negative, which makes the problem infeasible.
inline MarginalProblem pairwise_problem(const MomentSet& m,
                                        const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
    MarginalProblem p;
    p.variables = m.times();
    p.alphabets.assign(p.variables, 2);
    for (auto [i, j] : pairs) {
        MomentSet two;
        two.singles = {m.single(i), m.single(j)};
        two.set_pair(0, 1, m.pair(i, j));
        p.constraints.push_back({{i, j}, OutcomeTable(2, probs_from_moments(two).values(), TableKind::quasi, {i, j})});
    }
    return p;
}

/// The three-time marginal problem over pairs 12, 23, 13.
inline MarginalProblem three_time_problem(const MomentSet& m) {
    detail::require_three_time_moments(m, "three_time_problem");
    return pairwise_problem(m, {{0, 1}, {1, 2}, {0, 2}});
}

}  // namespace lgbench
