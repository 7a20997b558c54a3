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

#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace lgbench {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Vec3 = Eigen::Vector3d;

/// Largest Hilbert-space dimension the library is exercised at.
inline constexpr Eigen::Index kMaxDim = 8;

/// Tolerance for algebraic identities checked when a value is constructed.
inline constexpr double kConstructTol = 1e-12;
/// Tolerance for quantities produced by evolution or products.
inline constexpr double kDerivedTol = 1e-10;

namespace detail {

inline std::string fmt_double(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

inline double hermitian_deviation(const Matrix& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

inline void require_square(const Matrix& m, const char* what) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw std::invalid_argument(std::string(what) + ": matrix must be square and non-empty");
    }
    if (m.rows() > kMaxDim) {
        throw std::invalid_argument(std::string(what) + ": dimension " + std::to_string(m.rows()) +
                                    " exceeds " + std::to_string(kMaxDim));
    }
}

inline void require_same_dim(Eigen::Index a, Eigen::Index b, const char* what) {
    if (a != b) {
        throw std::invalid_argument(std::string(what) + ": dimension mismatch (" + std::to_string(a) +
                                    " vs " + std::to_string(b) + ")");
    }
}

}  // namespace detail

/// The Pauli matrices sigma_x, sigma_y, sigma_z.
inline Matrix pauli_x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}
inline Matrix pauli_y() {
    Matrix m(2, 2);
    m << 0, Complex(0, -1), Complex(0, 1), 0;
    return m;
}
inline Matrix pauli_z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

/// v . sigma for a real 3-vector (no normalization).
inline Matrix pauli_dot(const Vec3& v) {
    return v.x() * pauli_x() + v.y() * pauli_y() + v.z() * pauli_z();
}

/// A Hermitian operator whose square is the identity; outcomes are +1 and -1.
class DichotomicObservable {
  public:
    /// Validates Hermiticity and involutivity at `tol`.
    static DichotomicObservable from_matrix(Matrix m, double tol = kConstructTol) {
        detail::require_square(m, "DichotomicObservable");
        const double herm = detail::hermitian_deviation(m);
        if (herm > tol) {
            throw std::invalid_argument("DichotomicObservable: not Hermitian (deviation " +
                                        detail::fmt_double(herm) + ")");
        }
        const Matrix id = Matrix::Identity(m.rows(), m.cols());
        const double invol = (m * m - id).norm();
        if (invol > tol) {
            throw std::invalid_argument("DichotomicObservable: square is not the identity (deviation " +
                                        detail::fmt_double(invol) + ")");
        }
        return DichotomicObservable(std::move(m));
    }

    const Matrix& matrix() const { return m_; }
    Eigen::Index dim() const { return m_.rows(); }

  private:
    explicit DichotomicObservable(Matrix m) : m_(std::move(m)) {}
    Matrix m_;
};

/// Unit-trace positive-semidefinite density matrix.
class State {
  public:
    static State from_matrix(Matrix m, double tol = kConstructTol) {
        detail::require_square(m, "State");
        const double herm = detail::hermitian_deviation(m);
        if (herm > tol) {
            throw std::invalid_argument("State: not Hermitian (deviation " + detail::fmt_double(herm) + ")");
        }
        const Complex tr = m.trace();
        if (std::abs(tr - Complex(1.0, 0.0)) > tol) {
            throw std::invalid_argument("State: trace " + detail::fmt_double(tr.real()) + " != 1");
        }
        Matrix sym = 0.5 * (m + m.adjoint());
        Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
        const double min_ev = es.eigenvalues().minCoeff();
        if (min_ev < -tol) {
            throw std::invalid_argument("State: negative eigenvalue " + detail::fmt_double(min_ev));
        }
        return State(std::move(sym));
    }

    /// |psi><psi| for a (not necessarily normalized) non-zero vector.
    static State pure(const Vector& psi) {
        const double n = psi.norm();
        if (n == 0.0) {
            throw std::invalid_argument("State: zero state vector");
        }
        const Vector u = psi / n;
        return from_matrix(u * u.adjoint());
    }

    static State maximally_mixed(Eigen::Index dim) {
        return from_matrix(Matrix::Identity(dim, dim) / static_cast<double>(dim));
    }

    const Matrix& matrix() const { return m_; }
    Eigen::Index dim() const { return m_.rows(); }

  private:
    explicit State(Matrix m) : m_(std::move(m)) {}
    Matrix m_;
};

/// Hermitian generator of the dynamics, in units with hbar = 1.
class Hamiltonian {
  public:
    static Hamiltonian from_matrix(Matrix m, double tol = kConstructTol) {
        detail::require_square(m, "Hamiltonian");
        const double herm = detail::hermitian_deviation(m);
        if (herm > tol) {
            throw std::invalid_argument("Hamiltonian: not Hermitian (deviation " + detail::fmt_double(herm) +
                                        ")");
        }
        return Hamiltonian(0.5 * (m + m.adjoint()));
    }

    static Hamiltonian zero(Eigen::Index dim) { return Hamiltonian(Matrix::Zero(dim, dim)); }

    const Matrix& matrix() const { return m_; }
    Eigen::Index dim() const { return m_.rows(); }

    /// e^{i H t} via the spectral decomposition of H.
    Matrix propagator(double t) const {
        Eigen::SelfAdjointEigenSolver<Matrix> es(m_);
        const Eigen::VectorXd& evals = es.eigenvalues();
        const Matrix& evecs = es.eigenvectors();
        Vector phases(evals.size());
        for (Eigen::Index k = 0; k < evals.size(); ++k) {
            phases(k) = std::polar(1.0, evals(k) * t);
        }
        return evecs * phases.asDiagonal() * evecs.adjoint();
    }

  private:
    explicit Hamiltonian(Matrix m) : m_(std::move(m)) {}
    Matrix m_;
};

/// H = (omega / 2) axis . sigma, so operators precess by angle omega * t about `axis`.
inline Hamiltonian precession_hamiltonian(double omega, const Vec3& axis) {
    return Hamiltonian::from_matrix(0.5 * omega * pauli_dot(axis));
}

/// Orthogonal projector carrying the outcome it selects.
class Projector {
  public:
    static Projector from_matrix(Matrix m, int label, double tol = kConstructTol) {
        detail::require_square(m, "Projector");
        const double herm = detail::hermitian_deviation(m);
        if (herm > tol) {
            throw std::invalid_argument("Projector: not Hermitian (deviation " + detail::fmt_double(herm) + ")");
        }
        const double idem = (m * m - m).norm();
        if (idem > tol) {
            throw std::invalid_argument("Projector: not idempotent (deviation " + detail::fmt_double(idem) + ")");
        }
        return Projector(std::move(m), label);
    }

    const Matrix& matrix() const { return m_; }
    Eigen::Index dim() const { return m_.rows(); }
    int label() const { return label_; }

  private:
    Projector(Matrix m, int label) : m_(std::move(m)), label_(label) {}
    Matrix m_;
    int label_;
};

/// Q = a . sigma for a unit vector a.
inline DichotomicObservable pauli_observable(const Vec3& a) {
    const double n = a.norm();
    if (std::abs(n - 1.0) > kConstructTol) {
        throw std::invalid_argument("pauli_observable: norm " + detail::fmt_double(n) + " != 1");
    }
    return DichotomicObservable::from_matrix(pauli_dot(a));
}

/// e^{iHt} A e^{-iHt} for an arbitrary operator A.
inline Matrix heisenberg(const Matrix& a, const Hamiltonian& h, double t) {
    detail::require_same_dim(a.rows(), h.dim(), "heisenberg");
    if (t == 0.0) {
        return a;
    }
    const Matrix u = h.propagator(t);
    return u * a * u.adjoint();
}

inline DichotomicObservable evolve_heisenberg(const DichotomicObservable& q, const Hamiltonian& h, double t) {
    detail::require_same_dim(q.dim(), h.dim(), "evolve_heisenberg");
    Matrix m = heisenberg(q.matrix(), h, t);
    m = 0.5 * (m + m.adjoint());
    return DichotomicObservable::from_matrix(std::move(m), kDerivedTol);
}

/// P_s = (1 + s Q) / 2.
inline Projector projector(const DichotomicObservable& q, int s) {
    if (s != 1 && s != -1) {
        throw std::invalid_argument("projector: sign must be +1 or -1, got " + std::to_string(s));
    }
    const Matrix id = Matrix::Identity(q.dim(), q.dim());
    return Projector::from_matrix(0.5 * (id + static_cast<double>(s) * q.matrix()), s, kDerivedTol);
}

/// rho = (1 + r . sigma) / 2.
inline State density_from_bloch(const Vec3& r) {
    const double n = r.norm();
    if (n > 1.0 + kConstructTol) {
        throw std::invalid_argument("density_from_bloch: |r| = " + detail::fmt_double(n) +
                                    " > 1 gives a non-positive state");
    }
    return State::from_matrix(0.5 * (Matrix::Identity(2, 2) + pauli_dot(r)));
}

/// Tr(A rho).
inline Complex expectation(const State& rho, const Matrix& a) {
    detail::require_same_dim(rho.dim(), a.rows(), "expectation");
    detail::require_same_dim(a.rows(), a.cols(), "expectation");
    return (a * rho.matrix()).trace();
}

enum class SampleKind { pure_haar, mixed_ball };

/// Deterministic random state. Pure states are Haar distributed in `dim`;
/// mixed states are uniform in the qubit Bloch ball.
inline State sample_state(std::uint64_t seed, SampleKind kind, Eigen::Index dim = 2) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    if (kind == SampleKind::mixed_ball) {
        if (dim != 2) {
            throw std::invalid_argument("sample_state: mixed-ball sampling requires dim 2");
        }
        Vec3 dir(normal(rng), normal(rng), normal(rng));
        while (dir.norm() == 0.0) {
            dir = Vec3(normal(rng), normal(rng), normal(rng));
        }
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        const double radius = std::cbrt(unif(rng));
        return density_from_bloch(radius * dir.normalized());
    }
    if (dim < 1 || dim > kMaxDim) {
        throw std::invalid_argument("sample_state: unsupported dimension " + std::to_string(dim));
    }
    Vector psi(dim);
    for (Eigen::Index k = 0; k < dim; ++k) {
        psi(k) = Complex(normal(rng), normal(rng));
    }
    return State::pure(psi);
}

/// Trace distance (1/2)||rho - sigma||_1.
inline double trace_distance(const State& a, const State& b) {
    detail::require_same_dim(a.dim(), b.dim(), "trace_distance");
    Eigen::SelfAdjointEigenSolver<Matrix> es(a.matrix() - b.matrix(), Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace lgbench
