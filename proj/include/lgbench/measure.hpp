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

// Measurement statistics of a dichotomic observable at several times.
//
// Sequential projective measurements use the Lueders update, and ideal
// negative measurements are treated as statistically identical to them.
// Measurement contexts (which earlier times were measured) are expressed
// through the Schedule mask: running moments_from_probs on tables taken
// under different schedules yields the context-dependent moments.

#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lgbench/outcome_table.hpp"
#include "lgbench/qops.hpp"

namespace lgbench {

/// Ordered measurement times and which of them carry a projective measurement.
struct Schedule {
    std::vector<double> times;
    std::vector<bool> measured;

    static Schedule all_measured(std::vector<double> times) {
        Schedule s{std::move(times), {}};
        s.measured.assign(s.times.size(), true);
        s.validate();
        return s;
    }

    /// Measure only the listed time indices.
    static Schedule only(std::vector<double> times, std::initializer_list<std::size_t> which) {
        Schedule s{std::move(times), {}};
        s.measured.assign(s.times.size(), false);
        for (std::size_t i : which) {
            if (i >= s.times.size()) {
                throw std::invalid_argument("Schedule: measured index out of range");
            }
            s.measured[i] = true;
        }
        s.validate();
        return s;
    }

    void validate() const {
        if (times.empty() || times.size() != measured.size()) {
            throw std::invalid_argument("Schedule: times and mask must be non-empty and of equal length");
        }
        for (std::size_t i = 1; i < times.size(); ++i) {
            if (!(times[i] > times[i - 1])) {
                throw std::invalid_argument("Schedule: times must be strictly increasing");
            }
        }
        bool any = false;
        for (bool m : measured) {
            any = any || m;
        }
        if (!any) {
            throw std::invalid_argument("Schedule: at least one time must be measured");
        }
    }
};

/// Singles <Q_i>, pairwise correlators C_ij and an optional triple correlator D.
struct MomentSet {
    std::vector<double> singles;
    std::map<std::pair<std::size_t, std::size_t>, double> pairs;
    std::optional<double> triple;

    std::size_t times() const { return singles.size(); }

    bool has_pair(std::size_t i, std::size_t j) const { return pairs.count(ordered(i, j)) != 0; }

    double pair(std::size_t i, std::size_t j) const {
        auto it = pairs.find(ordered(i, j));
        if (it == pairs.end()) {
            throw std::invalid_argument("MomentSet: missing pair C_" + std::to_string(i + 1) +
                                        std::to_string(j + 1));
        }
        return it->second;
    }

    void set_pair(std::size_t i, std::size_t j, double v) { pairs[ordered(i, j)] = v; }

    double single(std::size_t i) const {
        if (i >= singles.size()) {
            throw std::invalid_argument("MomentSet: missing single <Q_" + std::to_string(i + 1) + ">");
        }
        return singles[i];
    }

    void validate(double tol = 1e-12) const {
        auto check = [tol](double v, const std::string& what) {
            if (!std::isfinite(v) || std::abs(v) > 1.0 + tol) {
                throw std::invalid_argument("MomentSet: " + what + " = " + detail::fmt_double(v) +
                                            " outside [-1, 1]");
            }
        };
        for (std::size_t i = 0; i < singles.size(); ++i) {
            check(singles[i], "<Q_" + std::to_string(i + 1) + ">");
        }
        for (const auto& [key, v] : pairs) {
            if (key.second >= singles.size()) {
                throw std::invalid_argument("MomentSet: pair index beyond the number of times");
            }
            check(v, "C_" + std::to_string(key.first + 1) + std::to_string(key.second + 1));
        }
        if (triple) {
            check(*triple, "D");
        }
    }

  private:
    static std::pair<std::size_t, std::size_t> ordered(std::size_t i, std::size_t j) {
        if (i == j) {
            throw std::invalid_argument("MomentSet: pair indices must differ");
        }
        return i < j ? std::make_pair(i, j) : std::make_pair(j, i);
    }
};

namespace detail {

inline void require_order(double t1, double t2, const char* what) {
    if (t1 > t2) {
        throw std::invalid_argument(std::string(what) + ": requires t1 <= t2");
    }
}

inline void require_model_dims(const State& rho, const DichotomicObservable& q, const Hamiltonian& h,
                               const char* what) {
    require_same_dim(rho.dim(), q.dim(), what);
    require_same_dim(q.dim(), h.dim(), what);
}

inline double real_trace_product(const Matrix& a, const Matrix& rho) { return (a * rho).trace().real(); }

}  // namespace detail

/// Joint statistics of sequential Lueders measurements at the measured times.
inline OutcomeTable seq_prob(const State& rho, const DichotomicObservable& q, const Hamiltonian& h,
                             const Schedule& sched) {
    sched.validate();
    detail::require_model_dims(rho, q, h, "seq_prob");

    std::vector<std::size_t> labels;
    std::vector<std::array<Matrix, 2>> projs;  // [digit] -> P_s(t)
    for (std::size_t i = 0; i < sched.times.size(); ++i) {
        if (!sched.measured[i]) {
            continue;
        }
        labels.push_back(i);
        const Matrix qt = evolve_heisenberg(q, h, sched.times[i]).matrix();
        const Matrix id = Matrix::Identity(q.dim(), q.dim());
        projs.push_back({0.5 * (id + qt), 0.5 * (id - qt)});
    }

    const std::size_t k = labels.size();
    std::vector<double> values(std::size_t{1} << k, 0.0);
    // Depth-first over outcome branches carrying the unnormalized post-measurement state.
    auto recurse = [&](auto&& self, std::size_t depth, std::size_t index, const Matrix& branch) -> void {
        if (depth == k) {
            values[index] = branch.trace().real();
            return;
        }
        for (std::size_t d = 0; d < 2; ++d) {
            const Matrix& p = projs[depth][d];
            self(self, depth + 1, (index << 1) | d, p * branch * p);
        }
    };
    recurse(recurse, 0, 0, rho.matrix());
    for (double& v : values) {
        if (v < 0.0 && v > -OutcomeTable::kNegTol) {
            v = 0.0;
        }
    }
    return OutcomeTable(k, std::move(values), TableKind::probability, std::move(labels));
}

/// Symmetrized two-time quasi-probability (1/2) Tr((P2 P1 + P1 P2) rho).
inline OutcomeTable quasi_prob2(const State& rho, const DichotomicObservable& q, const Hamiltonian& h, double t1,
                                double t2) {
    detail::require_order(t1, t2, "quasi_prob2");
    detail::require_model_dims(rho, q, h, "quasi_prob2");
    const Matrix q1 = evolve_heisenberg(q, h, t1).matrix();
    const Matrix q2 = evolve_heisenberg(q, h, t2).matrix();
    const Matrix id = Matrix::Identity(q.dim(), q.dim());
    std::vector<double> values(4);
    for (std::size_t d1 = 0; d1 < 2; ++d1) {
        const Matrix p1 = 0.5 * (id + digit_sign(d1) * q1);
        for (std::size_t d2 = 0; d2 < 2; ++d2) {
            const Matrix p2 = 0.5 * (id + digit_sign(d2) * q2);
            values[2 * d1 + d2] = 0.5 * detail::real_trace_product(p2 * p1 + p1 * p2, rho.matrix());
        }
    }
    return OutcomeTable(2, std::move(values), TableKind::quasi, {0, 1});
}

/// C_ij = <(Q_i Q_j + Q_j Q_i) / 2>.
inline double correlation(const State& rho, const DichotomicObservable& q, const Hamiltonian& h, double ti,
                          double tj) {
    detail::require_order(ti, tj, "correlation");
    detail::require_model_dims(rho, q, h, "correlation");
    const Matrix qi = evolve_heisenberg(q, h, ti).matrix();
    const Matrix qj = evolve_heisenberg(q, h, tj).matrix();
    return 0.5 * detail::real_trace_product(qi * qj + qj * qi, rho.matrix());
}

/// Anticommutator operator (Q_i Q_j + Q_j Q_i) / 2.
inline Matrix anticommutator_operator(const DichotomicObservable& q, const Hamiltonian& h, double ti, double tj) {
    const Matrix qi = evolve_heisenberg(q, h, ti).matrix();
    const Matrix qj = evolve_heisenberg(q, h, tj).matrix();
    return 0.5 * (qi * qj + qj * qi);
}

/// Moments as obtained in separate non-invasive runs: each single is measured
/// with no earlier measurement, each pair through the anticommutator. D is absent.
inline MomentSet moment_set(const State& rho, const DichotomicObservable& q, const Hamiltonian& h,
                            std::span<const double> times) {
    if (times.size() != 3 && times.size() != 4) {
        throw std::invalid_argument("moment_set: expects 3 or 4 times");
    }
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1])) {
            throw std::invalid_argument("moment_set: times must be strictly increasing");
        }
    }
    detail::require_model_dims(rho, q, h, "moment_set");
    std::vector<Matrix> qt;
    for (double t : times) {
        qt.push_back(evolve_heisenberg(q, h, t).matrix());
    }
    MomentSet m;
    for (const Matrix& qi : qt) {
        m.singles.push_back(detail::real_trace_product(qi, rho.matrix()));
    }
    for (std::size_t i = 0; i < qt.size(); ++i) {
        for (std::size_t j = i + 1; j < qt.size(); ++j) {
            m.set_pair(i, j, 0.5 * detail::real_trace_product(qt[i] * qt[j] + qt[j] * qt[i], rho.matrix()));
        }
    }
    return m;
}

/// Moment expansion: two-time (1/4)(1 + s1<Q1> + s2<Q2> + s1s2 C12) or the
/// three-time form with all pairs and D. Non-negativity is not guaranteed.
inline OutcomeTable probs_from_moments(const MomentSet& m) {
    const std::size_t k = m.times();
    if (k == 2) {
        const double c = m.pair(0, 1);
        std::vector<double> v(4);
        for (std::size_t i = 0; i < 4; ++i) {
            const int s1 = digit_sign(i >> 1), s2 = digit_sign(i & 1);
            v[i] = 0.25 * (1.0 + s1 * m.singles[0] + s2 * m.singles[1] + s1 * s2 * c);
        }
        return OutcomeTable(2, std::move(v), TableKind::quasi);
    }
    if (k == 3) {
        if (!m.triple) {
            throw std::invalid_argument("probs_from_moments: three-time expansion requires the triple correlator D");
        }
        const double c12 = m.pair(0, 1), c23 = m.pair(1, 2), c13 = m.pair(0, 2), d = *m.triple;
        std::vector<double> v(8);
        for (std::size_t i = 0; i < 8; ++i) {
            const int s1 = digit_sign(i >> 2), s2 = digit_sign((i >> 1) & 1), s3 = digit_sign(i & 1);
            v[i] = 0.125 * (1.0 + s1 * m.singles[0] + s2 * m.singles[1] + s3 * m.singles[2] + s1 * s2 * c12 +
                            s2 * s3 * c23 + s1 * s3 * c13 + s1 * s2 * s3 * d);
        }
        return OutcomeTable(3, std::move(v), TableKind::quasi);
    }
    throw std::invalid_argument("probs_from_moments: arity must be 2 or 3");
}

/// Read the expansion coefficients back off a two- or three-time table.
inline MomentSet moments_from_probs(const OutcomeTable& t) {
    const std::size_t k = t.arity();
    if ((k != 2 && k != 3) || t.alphabet() != 2) {
        throw std::invalid_argument("moments_from_probs: expects a dichotomic table of arity 2 or 3");
    }
    MomentSet m;
    m.singles.assign(k, 0.0);
    std::vector<double> pair_sums(k * k, 0.0);
    double triple = 0.0;
    for (std::size_t idx = 0; idx < t.size(); ++idx) {
        const auto d = t.digits(idx);
        const double p = t[idx];
        for (std::size_t i = 0; i < k; ++i) {
            m.singles[i] += digit_sign(d[i]) * p;
            for (std::size_t j = i + 1; j < k; ++j) {
                pair_sums[i * k + j] += digit_sign(d[i]) * digit_sign(d[j]) * p;
            }
        }
        if (k == 3) {
            triple += digit_sign(d[0]) * digit_sign(d[1]) * digit_sign(d[2]) * p;
        }
    }
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            m.set_pair(i, j, pair_sums[i * k + j]);
        }
    }
    if (k == 3) {
        m.triple = triple;
    }
    return m;
}

/// (1/8) <[Q(t1), Q(t2)] Q(t1)>, the amount by which the sequential
/// two-time probability exceeds the quasi-probability (times s2).
inline double interference_term(const State& rho, const DichotomicObservable& q, const Hamiltonian& h, double t1,
                                double t2) {
    detail::require_order(t1, t2, "interference_term");
    detail::require_model_dims(rho, q, h, "interference_term");
    const Matrix q1 = evolve_heisenberg(q, h, t1).matrix();
    const Matrix q2 = evolve_heisenberg(q, h, t2).matrix();
    const Matrix comm = q1 * q2 - q2 * q1;
    return 0.125 * detail::real_trace_product(comm * q1, rho.matrix());
}

/// Coherence witness W(s2) = (1/4)|<[Q(t1), Q(t2)] Q(t1)>|, indexed by the
/// outcome digit of s2. Both entries are equal.
inline std::array<double, 2> witness(const State& rho, const DichotomicObservable& q, const Hamiltonian& h,
                                     double t1, double t2) {
    const double w = 2.0 * std::abs(interference_term(rho, q, h, t1, t2));
    return {w, w};
}

/// Sequential and symmetrized statistics for two families of rank-one projectors.
struct DegeneracyTables {
    OutcomeTable p;
    OutcomeTable q;
    /// |p_2(n2) - sum_{n1} p_12(n1, n2)| per n2.
    std::vector<double> nsit_deviation;

    double max_nsit_deviation() const {
        double m = 0.0;
        for (double v : nsit_deviation) {
            m = std::max(m, v);
        }
        return m;
    }
};

namespace detail {

inline void validate_rank_one_family(std::span<const Projector> family, Eigen::Index dim, const char* which) {
    const std::string w(which);
    if (static_cast<Eigen::Index>(family.size()) != dim) {
        throw std::invalid_argument("degeneracy_probs: " + w + " family has " + std::to_string(family.size()) +
                                    " projectors for dimension " + std::to_string(dim));
    }
    Matrix sum = Matrix::Zero(dim, dim);
    for (std::size_t a = 0; a < family.size(); ++a) {
        require_same_dim(family[a].dim(), dim, "degeneracy_probs");
        if (std::abs(family[a].matrix().trace().real() - 1.0) > kDerivedTol) {
            throw std::invalid_argument("degeneracy_probs: " + w + " family contains a projector that is not rank one");
        }
        for (std::size_t b = a + 1; b < family.size(); ++b) {
            if ((family[a].matrix() * family[b].matrix()).norm() > kDerivedTol) {
                throw std::invalid_argument("degeneracy_probs: " + w + " family is not orthogonal");
            }
        }
        sum += family[a].matrix();
    }
    if ((sum - Matrix::Identity(dim, dim)).norm() > kDerivedTol) {
        throw std::invalid_argument("degeneracy_probs: " + w + " family is incomplete");
    }
}

}  // namespace detail

/// Rank-one projectors onto the columns of a unitary, labelled 0..d-1.
inline std::vector<Projector> basis_projectors(const Matrix& unitary) {
    detail::require_square(unitary, "basis_projectors");
    std::vector<Projector> out;
    for (Eigen::Index n = 0; n < unitary.cols(); ++n) {
        const Vector v = unitary.col(n);
        out.push_back(Projector::from_matrix(v * v.adjoint(), static_cast<int>(n), kDerivedTol));
    }
    return out;
}

/// p(n1, n2) = Tr(P_n2 P_n1 rho P_n1), q(n1, n2) = (1/2) Tr((P_n2 P_n1 + P_n1 P_n2) rho)
/// for degeneracy-breaking measurements at two times. The families are the
/// Heisenberg-picture projectors at t1 and t2.
inline DegeneracyTables degeneracy_probs(const State& rho, std::span<const Projector> first,
                                         std::span<const Projector> second) {
    const Eigen::Index d = rho.dim();
    detail::validate_rank_one_family(first, d, "first");
    detail::validate_rank_one_family(second, d, "second");
    const auto n = static_cast<std::size_t>(d);
    std::vector<double> p(n * n), q(n * n);
    std::vector<double> deviation(n);
    for (std::size_t b = 0; b < n; ++b) {
        const Matrix& p2 = second[b].matrix();
        double summed = 0.0;
        for (std::size_t a = 0; a < n; ++a) {
            const Matrix& p1 = first[a].matrix();
            p[a * n + b] = detail::real_trace_product(p2 * p1 * rho.matrix() * p1, Matrix::Identity(d, d));
            q[a * n + b] = 0.5 * detail::real_trace_product(p2 * p1 + p1 * p2, rho.matrix());
            summed += p[a * n + b];
        }
        deviation[b] = std::abs(detail::real_trace_product(p2, rho.matrix()) - summed);
    }
    for (double& v : p) {
        if (v < 0.0 && v > -OutcomeTable::kNegTol) {
            v = 0.0;
        }
    }
    return DegeneracyTables{OutcomeTable(2, std::move(p), TableKind::probability, {0, 1}, n),
                            OutcomeTable(2, std::move(q), TableKind::quasi, {0, 1}, n), std::move(deviation)};
}

}  // namespace lgbench
