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

// Canonical setups: a precessing qubit, the EPRB singlet pair, a classical
// telegraph process, and degeneracy-breaking measurements in d >= 3.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lgbench/conditions.hpp"
#include "lgbench/marginals.hpp"
#include "lgbench/measure.hpp"
#include "lgbench/qops.hpp"

namespace lgbench {

/// Rotate v about the unit axis n by angle theta.
inline Vec3 rotate(const Vec3& v, const Vec3& n, double theta) {
    return v * std::cos(theta) + n.cross(v) * std::sin(theta) + n * n.dot(v) * (1.0 - std::cos(theta));
}

inline Vec3 random_unit_vector(std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Vec3 v;
    do {
        v = Vec3(normal(rng), normal(rng), normal(rng));
    } while (v.norm() < 1e-9);
    return v.normalized();
}

/// Haar-random unitary (QR of a complex Ginibre matrix with phase fix).
inline Matrix random_unitary(std::mt19937_64& rng, Eigen::Index dim) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix g(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index j = 0; j < dim; ++j) {
            g(i, j) = Complex(normal(rng), normal(rng));
        }
    }
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR();
    for (Eigen::Index j = 0; j < dim; ++j) {
        const Complex d = r(j, j);
        if (std::abs(d) > 0.0) {
            q.col(j) *= d / std::abs(d);
        }
    }
    return q;
}

namespace detail {

inline void require_unit(const Vec3& v, const std::string& what) {
    const double n = v.norm();
    if (std::abs(n - 1.0) > 1e-12) {
        throw std::invalid_argument(what + ": norm " + fmt_double(n) + " != 1");
    }
}

}  // namespace detail

/// A qubit with Q = q_axis . sigma and H = (omega / 2) axis . sigma.
struct PrecessionModel {
    double omega = 1.0;
    Vec3 axis = Vec3(1, 0, 0);
    Vec3 q_axis = Vec3(0, 0, 1);
    State initial = density_from_bloch(Vec3(0, 0, 1));
    std::vector<double> times;

    void validate() const {
        if (!std::isfinite(omega)) {
            throw std::invalid_argument("PrecessionModel: omega must be finite");
        }
        detail::require_unit(axis, "PrecessionModel.axis");
        detail::require_unit(q_axis, "PrecessionModel.q_axis");
        if (initial.dim() != 2) {
            throw std::invalid_argument("PrecessionModel: initial state must be a qubit");
        }
        if (times.size() != 3 && times.size() != 4) {
            throw std::invalid_argument("PrecessionModel: expects 3 or 4 times");
        }
        for (std::size_t i = 1; i < times.size(); ++i) {
            if (!(times[i] > times[i - 1])) {
                throw std::invalid_argument("PrecessionModel: times must be strictly increasing");
            }
        }
    }

    Hamiltonian hamiltonian() const { return precession_hamiltonian(omega, axis); }
    DichotomicObservable observable() const { return pauli_observable(q_axis); }

    /// Heisenberg-picture Bloch vector of Q at time t; e^{iHt} Q e^{-iHt} turns it by -omega t.
    Vec3 q_axis_at(double t) const { return rotate(q_axis, axis, -omega * t); }

    /// a(t_i) . a(t_j), which reduces to cos(omega (t_j - t_i)) for q_axis orthogonal to axis.
    double closed_form_correlation(std::size_t i, std::size_t j) const {
        return q_axis_at(times.at(i)).dot(q_axis_at(times.at(j)));
    }

    /// Equally spaced times t0, t0 + tau, ... with omega * tau = angle and tau = 1.
    static PrecessionModel equal_spacing(double omega_tau, std::size_t count, State initial) {
        PrecessionModel m;
        m.omega = omega_tau;
        m.initial = std::move(initial);
        for (std::size_t k = 0; k < count; ++k) {
            m.times.push_back(static_cast<double>(k));
        }
        return m;
    }
};

struct PrecessionRun {
    ConditionReport report;
    MomentSet moments;
    /// Sequential tables keyed by the measured times, e.g. "p12", "p123",
    /// and quasi-probabilities "q12", "q23", ...
    std::map<std::string, OutcomeTable> tables;
    /// Closed-form correlators a(t_i) . a(t_j) for every pair.
    std::map<std::pair<std::size_t, std::size_t>, double> closed_form_pairs;
    double witness = 0.0;
    double interference = 0.0;
};

namespace detail {

inline std::string schedule_name(const std::vector<std::size_t>& which) {
    std::string s = "p";
    for (std::size_t i : which) {
        s += std::to_string(i + 1);
    }
    return s;
}

}  // namespace detail

inline PrecessionRun run_precession(const PrecessionModel& m, double eps = kDefaultTolerance) {
    m.validate();
    const Hamiltonian h = m.hamiltonian();
    const DichotomicObservable q = m.observable();
    const std::size_t k = m.times.size();

    PrecessionRun run;
    run.report = k == 3 ? classify(m.initial, q, h, m.times, eps) : classify4(m.initial, q, h, m.times, eps);
    run.moments = moment_set(m.initial, q, h, m.times);

    // Every non-empty measurement subset.
    for (std::size_t mask = 1; mask < (std::size_t{1} << k); ++mask) {
        Schedule s{m.times, std::vector<bool>(k, false)};
        std::vector<std::size_t> which;
        for (std::size_t i = 0; i < k; ++i) {
            if ((mask >> (k - 1 - i)) & 1u) {
                s.measured[i] = true;
                which.push_back(i);
            }
        }
        run.tables.emplace(detail::schedule_name(which), seq_prob(m.initial, q, h, s));
    }
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            std::string name = "q" + std::to_string(i + 1) + std::to_string(j + 1);
            const auto t = quasi_prob2(m.initial, q, h, m.times[i], m.times[j]);
            run.tables.emplace(std::move(name), OutcomeTable(2, t.values(), TableKind::quasi, {i, j}));
            run.closed_form_pairs[{i, j}] = m.closed_form_correlation(i, j);
        }
    }
    run.witness = witness(m.initial, q, h, m.times[0], m.times[1])[0];
    run.interference = interference_term(m.initial, q, h, m.times[0], m.times[1]);
    return run;
}

/// Singlet pair with measurement directions a, a' on A and b, b' on B.
/// Outcome variables: s1 (a), s2 (a'), s3 (b), s4 (b').
struct EPRBModel {
    Vec3 a = Vec3(1, 0, 0);
    Vec3 a_prime = Vec3(0, 0, 1);
    Vec3 b = Vec3(1, 0, 1).normalized();
    Vec3 b_prime = Vec3(-1, 0, 1).normalized();

    void validate() const {
        detail::require_unit(a, "EPRBModel.a");
        detail::require_unit(a_prime, "EPRBModel.a_prime");
        detail::require_unit(b, "EPRBModel.b");
        detail::require_unit(b_prime, "EPRBModel.b_prime");
    }

    /// Coplanar directions at 45 degree steps: a = 0, b = 45, a' = 90, b' = 135 degrees.
    static EPRBModel standard_chsh() {
        EPRBModel m;
        auto dir = [](double deg) {
            const double r = deg * M_PI / 180.0;
            return Vec3(std::sin(r), 0.0, std::cos(r));
        };
        m.a = dir(0);
        m.b = dir(45);
        m.a_prime = dir(90);
        m.b_prime = dir(135);
        return m;
    }
};

struct EprbRun {
    /// p13, p14, p23, p24 keyed by name.
    std::map<std::string, OutcomeTable> pairs;
    /// C13, C14, C23, C24.
    std::array<double, 4> correlators{};
    /// |sum over the partner of a pair table - direct single-site probability|.
    std::vector<Slack> no_signaling;
    std::vector<Slack> chsh;
    /// Sequential (a then a') x (b then b') table over (s1, s2, s3, s4).
    OutcomeTable sequential;
    /// Sum rules of the sequential table: summing s2, s4 against p13 and
    /// summing s1, s3 against p24.
    std::vector<Slack> sum_rule_s2s4;
    std::vector<Slack> sum_rule_s1s3;
};

namespace detail {

inline Matrix kron(const Matrix& x, const Matrix& y) {
    Matrix out(x.rows() * y.rows(), x.cols() * y.cols());
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        for (Eigen::Index j = 0; j < x.cols(); ++j) {
            out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
        }
    }
    return out;
}

inline Matrix spin_projector(const Vec3& dir, int s) {
    return 0.5 * (Matrix::Identity(2, 2) + static_cast<double>(s) * pauli_dot(dir));
}

}  // namespace detail

inline Vector singlet() {
    Vector psi = Vector::Zero(4);
    psi(1) = 1.0 / std::sqrt(2.0);   // |up, down>
    psi(2) = -1.0 / std::sqrt(2.0);  // |down, up>
    return psi;
}

inline EprbRun run_eprb(const EPRBModel& m) {
    m.validate();
    const Vector psi = singlet();
    const Matrix id2 = Matrix::Identity(2, 2);
    const std::array<Vec3, 4> dirs{m.a, m.a_prime, m.b, m.b_prime};
    auto ev = [&psi](const Matrix& op) { return (psi.adjoint() * op * psi)(0, 0).real(); };

    // Direct single-site probabilities p_v(s).
    std::array<std::array<double, 2>, 4> single{};
    for (std::size_t v = 0; v < 4; ++v) {
        for (std::size_t d = 0; d < 2; ++d) {
            const Matrix p = detail::spin_projector(dirs[v], digit_sign(d));
            single[v][d] = ev(v < 2 ? detail::kron(p, id2) : detail::kron(id2, p));
        }
    }

    const std::array<std::pair<std::size_t, std::size_t>, 4> combos{{{0, 2}, {0, 3}, {1, 2}, {1, 3}}};
    std::vector<OutcomeTable> pair_tables;
    EprbRun run{.pairs = {},
                .correlators = {},
                .no_signaling = {},
                .chsh = {},
                .sequential = OutcomeTable(0, {1.0}, TableKind::probability),
                .sum_rule_s2s4 = {},
                .sum_rule_s1s3 = {}};
    for (std::size_t c = 0; c < combos.size(); ++c) {
        const auto [va, vb] = combos[c];
        std::vector<double> values(4);
        double corr = 0.0;
        for (std::size_t da = 0; da < 2; ++da) {
            for (std::size_t db = 0; db < 2; ++db) {
                const Matrix op = detail::kron(detail::spin_projector(dirs[va], digit_sign(da)),
                                               detail::spin_projector(dirs[vb], digit_sign(db)));
                values[2 * da + db] = std::max(0.0, ev(op));
                corr += digit_sign(da) * digit_sign(db) * values[2 * da + db];
            }
        }
        run.correlators[c] = corr;
        const std::string name = "p" + std::to_string(va + 1) + std::to_string(vb + 1);
        OutcomeTable t(2, std::move(values), TableKind::probability, {va, vb});
        for (std::size_t keep = 0; keep < 2; ++keep) {
            const OutcomeTable marg = t.marginalize(1 - keep);
            const std::size_t v = keep == 0 ? va : vb;
            for (std::size_t d = 0; d < 2; ++d) {
                run.no_signaling.push_back({"NS_" + name + "->" + std::to_string(v + 1) + "[" +
                                                detail::sign_char(digit_sign(d)) + "]",
                                            std::abs(marg[d] - single[v][d]), SlackKind::equality});
            }
        }
        run.pairs.emplace(name, std::move(t));
    }
    run.chsh = chsh_check(run.correlators[0], run.correlators[1], run.correlators[2], run.correlators[3]);

    std::vector<double> seq(16);
    for (std::size_t idx = 0; idx < 16; ++idx) {
        const int s1 = digit_sign((idx >> 3) & 1), s2 = digit_sign((idx >> 2) & 1);
        const int s3 = digit_sign((idx >> 1) & 1), s4 = digit_sign(idx & 1);
        const Matrix pa = detail::spin_projector(m.a, s1);
        const Matrix pb = detail::spin_projector(m.b, s3);
        const Matrix left = pa * detail::spin_projector(m.a_prime, s2) * pa;
        const Matrix right = pb * detail::spin_projector(m.b_prime, s4) * pb;
        seq[idx] = std::max(0.0, ev(detail::kron(left, right)));
    }
    run.sequential = OutcomeTable(4, std::move(seq), TableKind::probability, {0, 1, 2, 3});

    const OutcomeTable& p13 = run.pairs.at("p13");
    const OutcomeTable& p24 = run.pairs.at("p24");
    const OutcomeTable sum_s2s4 = run.sequential.marginalize(3).marginalize(1);  // (s1, s3)
    const OutcomeTable sum_s1s3 = run.sequential.marginalize(2).marginalize(0);  // (s2, s4)
    for (std::size_t i = 0; i < 4; ++i) {
        const std::string tag = "[" + detail::sign_char(digit_sign(i >> 1)) + detail::sign_char(digit_sign(i & 1)) + "]";
        run.sum_rule_s2s4.push_back({"SR_p13" + tag, std::abs(sum_s2s4[i] - p13[i]), SlackKind::equality});
        run.sum_rule_s1s3.push_back({"SR_p24" + tag, std::abs(sum_s1s3[i] - p24[i]), SlackKind::equality});
    }
    return run;
}

/// Marginal problem for EPRB-type pair tables with zero singles and the given correlators.
inline MarginalProblem chsh_marginal_problem(double c13, double c14, double c23, double c24) {
    MomentSet m;
    m.singles = {0.0, 0.0, 0.0, 0.0};
    m.set_pair(0, 2, c13);
    m.set_pair(0, 3, c14);
    m.set_pair(1, 2, c23);
    m.set_pair(1, 3, c24);
    return pairwise_problem(m, {{0, 2}, {0, 3}, {1, 2}, {1, 3}});
}

/// Exact moments of a symmetric two-state telegraph process that flips at
/// rate `flip_rate` and has mean `bias` at the first time. Three-time sets
/// also carry the triple correlator.
inline MomentSet classical_markov_moments(double flip_rate, double bias, const std::vector<double>& times) {
    if (!(flip_rate >= 0.0) || !std::isfinite(flip_rate)) {
        throw std::invalid_argument("classical_markov_moments: flip rate must be finite and non-negative");
    }
    if (!(std::abs(bias) <= 1.0)) {
        throw std::invalid_argument("classical_markov_moments: bias must lie in [-1, 1]");
    }
    if (times.empty()) {
        throw std::invalid_argument("classical_markov_moments: needs at least one time");
    }
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1])) {
            throw std::invalid_argument("classical_markov_moments: times must be strictly increasing");
        }
    }
    auto decay = [flip_rate](double dt) { return std::exp(-2.0 * flip_rate * dt); };
    MomentSet m;
    for (double t : times) {
        m.singles.push_back(bias * decay(t - times[0]));
    }
    for (std::size_t i = 0; i < times.size(); ++i) {
        for (std::size_t j = i + 1; j < times.size(); ++j) {
            m.set_pair(i, j, decay(times[j] - times[i]));
        }
    }
    if (times.size() == 3) {
        // E[Q1 Q2 Q3] = E[Q1 Q2 E[Q3 | Q2]] = E[Q1] e^{-2 gamma (t3 - t2)}
        m.triple = m.singles[0] * decay(times[2] - times[1]);
    }
    return m;
}

/// One grid point of a parameter sweep.
struct SweepRow {
    double parameter = 0.0;
    ConditionReport report;
    double witness = 0.0;
    double interference = 0.0;
};

/// Parameters a sweep may vary:
///  omega_tau  rotation angle per interval (times keep their spacing, omega = value / spacing)
///  omega      angular frequency
///  tau        equal spacing between successive times, starting at the first time
inline const std::vector<std::string>& sweep_parameters() {
    static const std::vector<std::string> names{"omega_tau", "omega", "tau"};
    return names;
}

inline PrecessionModel apply_sweep_parameter(const PrecessionModel& base, const std::string& parameter,
                                             double value) {
    PrecessionModel m = base;
    if (parameter == "omega_tau") {
        const double spacing = base.times[1] - base.times[0];
        for (std::size_t i = 2; i < base.times.size(); ++i) {
            if (std::abs((base.times[i] - base.times[i - 1]) - spacing) > 1e-12 * std::max(1.0, spacing)) {
                throw std::invalid_argument("sweep: omega_tau requires equally spaced template times");
            }
        }
        m.omega = value / spacing;
    } else if (parameter == "omega") {
        m.omega = value;
    } else if (parameter == "tau") {
        if (!(value > 0.0)) {
            throw std::invalid_argument("sweep: tau must be positive");
        }
        for (std::size_t i = 0; i < m.times.size(); ++i) {
            m.times[i] = base.times[0] + static_cast<double>(i) * value;
        }
    } else {
        throw std::invalid_argument("sweep: unknown parameter '" + parameter + "'");
    }
    return m;
}

/// Rows in grid order.
inline std::vector<SweepRow> sweep(const PrecessionModel& base, const std::string& parameter,
                                   const std::vector<double>& grid, double eps = kDefaultTolerance) {
    base.validate();
    if (grid.empty()) {
        throw std::invalid_argument("sweep: grid must be non-empty");
    }
    const auto& names = sweep_parameters();
    if (std::find(names.begin(), names.end(), parameter) == names.end()) {
        throw std::invalid_argument("sweep: unknown parameter '" + parameter + "'");
    }
    std::vector<SweepRow> rows;
    rows.reserve(grid.size());
    for (double x : grid) {
        const PrecessionModel m = apply_sweep_parameter(base, parameter, x);
        m.validate();
        const Hamiltonian h = m.hamiltonian();
        const DichotomicObservable q = m.observable();
        SweepRow row;
        row.parameter = x;
        row.report = m.times.size() == 3 ? classify(m.initial, q, h, m.times, eps)
                                         : classify4(m.initial, q, h, m.times, eps);
        row.witness = witness(m.initial, q, h, m.times[0], m.times[1])[0];
        row.interference = interference_term(m.initial, q, h, m.times[0], m.times[1]);
        rows.push_back(std::move(row));
    }
    return rows;
}

/// A state with two complete rank-one projector families (at t1 and t2).
struct DegeneracyInstance {
    State rho;
    std::vector<Projector> first;
    std::vector<Projector> second;
};

/// Random instance in which the pure state is unbiased with respect to the
/// first basis and the second basis is a real orthogonal mixing, fixing the
/// uniform vector, of the phase-aligned first basis. Such pairs satisfy the
/// degeneracy-breaking NSIT equality for every n2 while q(n1, n2) is
/// proportional to the mixing-matrix entries, which may be negative.
inline DegeneracyInstance sample_degeneracy_instance(std::uint64_t seed, Eigen::Index dim = 3) {
    if (dim < 3 || dim > kMaxDim) {
        throw std::invalid_argument("sample_degeneracy_instance: dimension must be in [3, 8]");
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);

    // V maps e_0 to psi; columns of V F are unbiased with respect to psi.
    const Matrix v = random_unitary(rng, dim);
    const Vector psi = v.col(0);
    Matrix fourier(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
        for (Eigen::Index k = 0; k < dim; ++k) {
            fourier(j, k) = std::polar(1.0 / std::sqrt(static_cast<double>(dim)), 2.0 * M_PI * j * k / dim);
        }
    }
    Matrix w = v * fourier;
    for (Eigen::Index m = 0; m < dim; ++m) {
        w.col(m) *= std::polar(1.0, angle(rng));
    }
    // Amplitude phases a_m = <w_m|psi> = e^{i phi_m} / sqrt(d).
    Vector phase(dim);
    for (Eigen::Index m = 0; m < dim; ++m) {
        const Complex a = w.col(m).dot(psi);
        phase(m) = a / std::abs(a);
    }
    // Real orthogonal R with R 1 = 1: product of reflections through hyperplanes containing 1.
    Eigen::MatrixXd r = Eigen::MatrixXd::Identity(dim, dim);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(dim) / std::sqrt(static_cast<double>(dim));
    for (int reflections = 0; reflections < 2; ++reflections) {
        Eigen::VectorXd x(dim);
        for (Eigen::Index i = 0; i < dim; ++i) {
            x(i) = normal(rng);
        }
        x -= ones * ones.dot(x);
        x.normalize();
        r = (Eigen::MatrixXd::Identity(dim, dim) - 2.0 * x * x.transpose()) * r;
    }
    // <v_n|w_m> = R_nm conj(phase_m)  =>  v_n = sum_m R_nm phase_m w_m.
    Matrix second(dim, dim);
    for (Eigen::Index n = 0; n < dim; ++n) {
        Vector col = Vector::Zero(dim);
        for (Eigen::Index m = 0; m < dim; ++m) {
            col += r(n, m) * phase(m) * w.col(m);
        }
        second.col(n) = col;
    }
    return DegeneracyInstance{State::pure(psi), basis_projectors(w), basis_projectors(second)};
}

struct DegeneracySearch {
    std::size_t samples = 0;
    /// Instances with some q(n1, n2) < -negativity and every NSIT deviation <= nsit_tol.
    std::size_t hits = 0;
    double most_negative_q = 0.0;
    std::optional<std::uint64_t> best_seed;
};

inline DegeneracySearch search_degeneracy(std::uint64_t seed, std::size_t samples, Eigen::Index dim = 3,
                                          double negativity = 1e-9, double nsit_tol = 1e-12) {
    DegeneracySearch out;
    for (std::size_t k = 0; k < samples; ++k) {
        const std::uint64_t s = seed + k;
        const auto inst = sample_degeneracy_instance(s, dim);
        const auto tables = degeneracy_probs(inst.rho, inst.first, inst.second);
        ++out.samples;
        const double qmin = tables.q.min_value();
        if (qmin < -negativity && tables.max_nsit_deviation() <= nsit_tol) {
            ++out.hits;
            if (qmin < out.most_negative_q) {
                out.most_negative_q = qmin;
                out.best_seed = s;
            }
        }
    }
    return out;
}

}  // namespace lgbench
