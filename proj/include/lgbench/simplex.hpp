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

// Exact phase-one simplex: decides whether {x >= 0 : A x = b} is non-empty.
//
// One artificial variable per row, minimize their sum. Bland's rule picks the
// lowest-index improving column and breaks ratio ties on the lowest basic
// variable index, so the method terminates without cycling.

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "lgbench/rational.hpp"

namespace lgbench {

struct FeasibilityProblem {
    std::vector<std::vector<Rational>> a;  // rows x cols
    std::vector<Rational> b;
    std::size_t cols = 0;
};

/// A point x >= 0 with A x = b, or nullopt if none exists.
inline std::optional<std::vector<Rational>> find_feasible_point(const FeasibilityProblem& prob) {
    const std::size_t m = prob.a.size();
    const std::size_t n = prob.cols;
    if (prob.b.size() != m) {
        throw std::invalid_argument("find_feasible_point: row count mismatch");
    }
    for (const auto& row : prob.a) {
        if (row.size() != n) {
            throw std::invalid_argument("find_feasible_point: ragged constraint matrix");
        }
    }
    if (m == 0) {
        return std::vector<Rational>(n, Rational(0));
    }

    // Tableau columns: [0, n) structural, [n, n + m) artificial, n + m the right-hand side.
    const std::size_t width = n + m + 1;
    const std::size_t rhs = n + m;
    std::vector<std::vector<Rational>> t(m, std::vector<Rational>(width, Rational(0)));
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) {
        const bool flip = prob.b[i] < 0;
        for (std::size_t j = 0; j < n; ++j) {
            t[i][j] = flip ? Rational(-prob.a[i][j]) : prob.a[i][j];
        }
        t[i][n + i] = 1;
        t[i][rhs] = flip ? Rational(-prob.b[i]) : prob.b[i];
        basis[i] = n + i;
    }
    // Reduced costs of the phase-one objective (sum of artificials).
    std::vector<Rational> cost(width, Rational(0));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            cost[j] -= t[i][j];
        }
        cost[rhs] -= t[i][rhs];
    }

    while (true) {
        std::size_t enter = width;
        for (std::size_t j = 0; j < n + m; ++j) {
            if (cost[j] < 0) {
                enter = j;
                break;
            }
        }
        if (enter == width) {
            break;
        }
        std::size_t leave = m;
        Rational best_ratio;
        for (std::size_t i = 0; i < m; ++i) {
            if (t[i][enter] > 0) {
                Rational ratio = t[i][rhs] / t[i][enter];
                if (leave == m || ratio < best_ratio || (ratio == best_ratio && basis[i] < basis[leave])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
        }
        if (leave == m) {
            // Unbounded direction cannot occur: the phase-one objective is bounded below by zero.
            throw std::logic_error("find_feasible_point: unbounded phase-one problem");
        }
        const Rational pivot = t[leave][enter];
        for (std::size_t j = 0; j < width; ++j) {
            t[leave][j] /= pivot;
        }
        for (std::size_t i = 0; i < m; ++i) {
            if (i == leave || t[i][enter] == 0) {
                continue;
            }
            const Rational f = t[i][enter];
            for (std::size_t j = 0; j < width; ++j) {
                if (t[leave][j] != 0) {
                    t[i][j] -= f * t[leave][j];
                }
            }
        }
        if (cost[enter] != 0) {
            const Rational f = cost[enter];
            for (std::size_t j = 0; j < width; ++j) {
                if (t[leave][j] != 0) {
                    cost[j] -= f * t[leave][j];
                }
            }
        }
        basis[leave] = enter;
    }

    // cost[rhs] holds minus the optimal sum of artificials.
    if (cost[rhs] != 0) {
        return std::nullopt;
    }
    std::vector<Rational> x(n, Rational(0));
    for (std::size_t i = 0; i < m; ++i) {
        if (basis[i] < n) {
            x[basis[i]] = t[i][rhs];
        }
    }
    return x;
}

}  // namespace lgbench
