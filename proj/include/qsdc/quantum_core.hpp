// Copyright 2026 The QSDC Lab Authors
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

// Exact linear algebra for single qubits and a qubit entangled with a
// four-level ancilla. Every type is templated on the real scalar; the rest of
// the library instantiates it with double.
//
// Layout convention for joint states: the qubit is the leading tensor factor,
// so the amplitude of |q>|a> lives at index q * (dim / 2) + a.

#ifndef QSDC_QUANTUM_CORE_HPP
#define QSDC_QUANTUM_CORE_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "qsdc/rng.hpp"

namespace qsdc {

inline constexpr int kMaxDim = 8;

template <typename Scalar>
using Complex = std::complex<Scalar>;

template <typename Scalar>
using AmplitudeVector = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;

template <typename Scalar>
using OperatorMatrix =
    Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxDim, kMaxDim>;

/// Requested tolerance, widened for scalars too coarse to reach it.
template <typename Scalar>
constexpr Scalar tolerance(double nominal) {
    return std::max(static_cast<Scalar>(nominal), Scalar(256) * std::numeric_limits<Scalar>::epsilon());
}

inline bool is_supported_dim(Eigen::Index dim) { return dim == 2 || dim == 4 || dim == 8; }

template <typename Scalar>
Scalar degrees_to_radians(Scalar degrees) {
    return degrees * (std::numbers::pi_v<Scalar> / Scalar(180));
}

// ---------------------------------------------------------------------------
// PureState

/// Normalized amplitude vector of dimension 2 (qubit), 4 (ancilla) or 8
/// (qubit x ancilla).
template <typename Scalar = double>
class PureState {
  public:
    using Vector = AmplitudeVector<Scalar>;

    /// `amplitudes` must already be unit norm up to rounding (1e-8); the stored
    /// copy is renormalized exactly.
    explicit PureState(const Vector& amplitudes) : amps_(amplitudes) {
        check_dim(amps_.size());
        const Scalar n2 = amps_.squaredNorm();
        if (!(std::abs(n2 - Scalar(1)) <= tolerance<Scalar>(1e-8))) {
            throw std::invalid_argument("amplitudes are not normalized (|psi|^2 = " + std::to_string(n2) + ")");
        }
        amps_ /= std::sqrt(n2);
    }

    /// Rescales an arbitrary non-zero vector to unit norm.
    static PureState normalized(const Vector& v) {
        const Scalar n = v.norm();
        if (!(n > Scalar(0)) || !std::isfinite(n)) {
            throw std::invalid_argument("cannot normalize a zero or non-finite vector");
        }
        return PureState(Vector(v / n));
    }

    static PureState basis_state(int dim, int index) {
        check_dim(dim);
        if (index < 0 || index >= dim) throw std::out_of_range("basis index outside state dimension");
        Vector v = Vector::Zero(dim);
        v(index) = Scalar(1);
        return PureState(v);
    }

    int dim() const { return static_cast<int>(amps_.size()); }
    const Vector& amplitudes() const { return amps_; }
    Complex<Scalar> operator[](int i) const { return amps_(i); }

    friend bool operator==(const PureState& a, const PureState& b) { return a.amps_ == b.amps_; }

  private:
    static void check_dim(Eigen::Index dim) {
        if (!is_supported_dim(dim)) {
            throw std::invalid_argument("unsupported state dimension " + std::to_string(dim));
        }
    }

    Vector amps_;
};

template <typename Scalar = double>
PureState<Scalar> ket0() {
    return PureState<Scalar>::basis_state(2, 0);
}

template <typename Scalar = double>
PureState<Scalar> ket1() {
    return PureState<Scalar>::basis_state(2, 1);
}

template <typename Scalar = double>
PureState<Scalar> ket_plus() {
    const Scalar h = Scalar(1) / std::sqrt(Scalar(2));
    typename PureState<Scalar>::Vector v(2);
    v << h, h;
    return PureState<Scalar>(v);
}

template <typename Scalar = double>
PureState<Scalar> ket_minus() {
    const Scalar h = Scalar(1) / std::sqrt(Scalar(2));
    typename PureState<Scalar>::Vector v(2);
    v << h, -h;
    return PureState<Scalar>(v);
}

// ---------------------------------------------------------------------------
// Unitary

template <typename Scalar = double>
class Unitary {
  public:
    using Matrix = OperatorMatrix<Scalar>;

    explicit Unitary(const Matrix& m) : m_(m) {
        if (m_.rows() != m_.cols() || !is_supported_dim(m_.rows())) {
            throw std::invalid_argument("unitary must be square with dimension 2, 4 or 8");
        }
        if (!m_.allFinite()) throw std::invalid_argument("unitary has non-finite entries");
        const Matrix defect = m_.adjoint() * m_ - Matrix::Identity(m_.rows(), m_.cols());
        if (defect.cwiseAbs().maxCoeff() > tolerance<Scalar>(1e-10)) {
            throw std::invalid_argument("matrix is not unitary");
        }
    }

    static Unitary identity(int dim) { return Unitary(Matrix::Identity(dim, dim)); }

    int dim() const { return static_cast<int>(m_.rows()); }
    const Matrix& matrix() const { return m_; }

    Unitary adjoint() const { return Unitary(Matrix(m_.adjoint())); }
    Unitary inverse() const { return adjoint(); }

    friend Unitary operator*(const Unitary& a, const Unitary& b) {
        if (a.dim() != b.dim()) throw std::invalid_argument("unitary dimension mismatch");
        return Unitary(Matrix(a.m_ * b.m_));
    }

  private:
    Matrix m_;
};

/// Real rotation U_theta = [[cos, -sin], [sin, cos]], angle in degrees.
template <typename Scalar = double>
Unitary<Scalar> rotation_gate(Scalar theta_deg) {
    if (!std::isfinite(theta_deg)) throw std::invalid_argument("rotation angle must be finite");
    const Scalar t = degrees_to_radians(theta_deg);
    const Scalar c = std::cos(t);
    const Scalar s = std::sin(t);
    typename Unitary<Scalar>::Matrix m(2, 2);
    m << c, -s, s, c;
    return Unitary<Scalar>(m);
}

template <typename Scalar = double>
Unitary<Scalar> pauli_x() {
    typename Unitary<Scalar>::Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return Unitary<Scalar>(m);
}

/// i * sigma_y, which is real: [[0, 1], [-1, 0]].
template <typename Scalar = double>
Unitary<Scalar> pauli_iy() {
    typename Unitary<Scalar>::Matrix m(2, 2);
    m << 0, 1, -1, 0;
    return Unitary<Scalar>(m);
}

template <typename Scalar = double>
Unitary<Scalar> pauli_z() {
    typename Unitary<Scalar>::Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return Unitary<Scalar>(m);
}

// ---------------------------------------------------------------------------
// QubitBasis

/// Orthonormal qubit basis {U_theta|0>, U_theta|1>}.
template <typename Scalar = double>
class QubitBasis {
  public:
    explicit QubitBasis(Scalar angle_deg) {
        if (!std::isfinite(angle_deg)) throw std::invalid_argument("basis angle must be finite");
        angle_ = std::fmod(angle_deg, Scalar(360));
        if (angle_ < 0) angle_ += Scalar(360);
        const Scalar t = degrees_to_radians(angle_);
        cos_ = std::cos(t);
        sin_ = std::sin(t);
    }

    static QubitBasis computational() { return QubitBasis(0); }
    static QubitBasis diagonal() { return QubitBasis(45); }

    Scalar angle_deg() const { return angle_; }

    /// Basis vector for `outcome` (0 or 1).
    PureState<Scalar> vector(int outcome) const {
        typename PureState<Scalar>::Vector v(2);
        if (outcome == 0) {
            v << cos_, sin_;
        } else {
            v << -sin_, cos_;
        }
        return PureState<Scalar>(v);
    }

  private:
    Scalar angle_ = 0;
    Scalar cos_ = 1;
    Scalar sin_ = 0;
};

// ---------------------------------------------------------------------------
// DensityMatrix

template <typename Scalar = double>
class DensityMatrix {
  public:
    using Matrix = OperatorMatrix<Scalar>;

    explicit DensityMatrix(const Matrix& m) : m_(m) {
        if (m_.rows() != m_.cols() || !is_supported_dim(m_.rows())) {
            throw std::invalid_argument("density matrix must be square with dimension 2, 4 or 8");
        }
        const Scalar tol = tolerance<Scalar>(1e-10);
        if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > tol) {
            throw std::invalid_argument("density matrix is not Hermitian");
        }
        if (std::abs(m_.trace() - Complex<Scalar>(1)) > tol) {
            throw std::invalid_argument("density matrix trace is not 1");
        }
        Eigen::SelfAdjointEigenSolver<Matrix> eig(m_, Eigen::EigenvaluesOnly);
        if (eig.eigenvalues().minCoeff() < -tol) {
            throw std::invalid_argument("density matrix has a negative eigenvalue");
        }
    }

    static DensityMatrix pure(const PureState<Scalar>& s) {
        return DensityMatrix(Matrix(s.amplitudes() * s.amplitudes().adjoint()));
    }

    int dim() const { return static_cast<int>(m_.rows()); }
    const Matrix& matrix() const { return m_; }

  private:
    Matrix m_;
};

// ---------------------------------------------------------------------------
// Operations

template <typename Scalar>
PureState<Scalar> apply(const Unitary<Scalar>& u, const PureState<Scalar>& s) {
    if (u.dim() != s.dim()) throw std::invalid_argument("unitary/state dimension mismatch");
    return PureState<Scalar>::normalized(typename PureState<Scalar>::Vector(u.matrix() * s.amplitudes()));
}

/// Applies the single-qubit `u` to the leading qubit of `s` (u (x) I).
template <typename Scalar>
PureState<Scalar> apply_on_qubit(const Unitary<Scalar>& u, const PureState<Scalar>& s) {
    if (u.dim() != 2) throw std::invalid_argument("apply_on_qubit expects a single-qubit unitary");
    if (s.dim() == 2) return apply(u, s);
    const Eigen::Index rest = s.dim() / 2;
    typename PureState<Scalar>::Vector out(s.dim());
    const auto& a = s.amplitudes();
    const auto& m = u.matrix();
    for (Eigen::Index j = 0; j < rest; ++j) {
        const Complex<Scalar> a0 = a(j);
        const Complex<Scalar> a1 = a(rest + j);
        out(j) = m(0, 0) * a0 + m(0, 1) * a1;
        out(rest + j) = m(1, 0) * a0 + m(1, 1) * a1;
    }
    return PureState<Scalar>::normalized(out);
}

template <typename Scalar>
PureState<Scalar> tensor(const PureState<Scalar>& a, const PureState<Scalar>& b) {
    const int dim = a.dim() * b.dim();
    if (!is_supported_dim(dim)) {
        throw std::invalid_argument("tensor product dimension " + std::to_string(dim) + " unsupported");
    }
    typename PureState<Scalar>::Vector v(dim);
    for (int i = 0; i < a.dim(); ++i) {
        v.segment(i * b.dim(), b.dim()) = a[i] * b.amplitudes();
    }
    return PureState<Scalar>::normalized(v);
}

/// Born-rule probabilities (p0, p1) of measuring the qubit `s` in `basis`.
template <typename Scalar>
std::array<Scalar, 2> outcome_distribution(const PureState<Scalar>& s, const QubitBasis<Scalar>& basis) {
    if (s.dim() != 2) throw std::invalid_argument("outcome_distribution expects a single qubit");
    const Scalar p0 = std::norm(basis.vector(0).amplitudes().dot(s.amplitudes()));
    const Scalar p1 = std::norm(basis.vector(1).amplitudes().dot(s.amplitudes()));
    const Scalar total = p0 + p1;
    return {p0 / total, p1 / total};
}

/// Like outcome_distribution, for the leading qubit of a qubit or a
/// qubit (x) ancilla state.
template <typename Scalar>
std::array<Scalar, 2> leading_qubit_distribution(const PureState<Scalar>& s, const QubitBasis<Scalar>& basis) {
    if (s.dim() == 2) return outcome_distribution(s, basis);
    const Eigen::Index rest = s.dim() / 2;
    const auto& a = s.amplitudes();
    std::array<Scalar, 2> prob{};
    for (int k = 0; k < 2; ++k) {
        const auto& b = basis.vector(k).amplitudes();
        prob[k] = (std::conj(b(0)) * a.head(rest) + std::conj(b(1)) * a.tail(rest)).squaredNorm();
    }
    const Scalar total = prob[0] + prob[1];
    return {prob[0] / total, prob[1] / total};
}

template <typename Scalar>
struct MeasurementResult {
    int outcome;
    PureState<Scalar> state;
};

/// Projective measurement of the leading qubit of `s` (any supported even
/// dimension). Consumes exactly one uniform draw, whatever the state.
template <typename Scalar>
MeasurementResult<Scalar> measure_leading_qubit(const PureState<Scalar>& s, const QubitBasis<Scalar>& basis,
                                                Rng& rng) {
    using Vector = typename PureState<Scalar>::Vector;
    const Eigen::Index rest = s.dim() / 2;
    const auto& a = s.amplitudes();
    std::array<Vector, 2> branch;
    std::array<Scalar, 2> prob{};
    for (int k = 0; k < 2; ++k) {
        const auto& b = basis.vector(k).amplitudes();
        branch[k] = std::conj(b(0)) * a.head(rest) + std::conj(b(1)) * a.tail(rest);
        prob[k] = branch[k].squaredNorm();
    }
    const Scalar p0 = prob[0] / (prob[0] + prob[1]);
    const int outcome = static_cast<Scalar>(rng.uniform()) < p0 ? 0 : 1;
    const auto basis_vec = basis.vector(outcome);
    if (rest == 1) return {outcome, basis_vec};
    const auto residual = PureState<Scalar>::normalized(branch[outcome]);
    return {outcome, tensor(basis_vec, residual)};
}

/// Measures a qubit in `basis`; the post-measurement state is the basis vector.
template <typename Scalar>
MeasurementResult<Scalar> measure(const PureState<Scalar>& s, const QubitBasis<Scalar>& basis, Rng& rng) {
    if (s.dim() != 2) throw std::invalid_argument("measure expects a single qubit");
    return measure_leading_qubit(s, basis, rng);
}

/// Measures the qubit factor of a qubit (x) ancilla state; the joint state
/// collapses onto the observed branch.
template <typename Scalar>
MeasurementResult<Scalar> partial_measure(const PureState<Scalar>& joint, const QubitBasis<Scalar>& basis,
                                          Rng& rng) {
    if (joint.dim() != 8) throw std::invalid_argument("partial_measure expects a qubit (x) ancilla state");
    return measure_leading_qubit(joint, basis, rng);
}

enum class Subsystem { Qubit, Ancilla };

/// Partial trace of a qubit (x) ancilla state, keeping `keep`.
template <typename Scalar>
DensityMatrix<Scalar> reduced_density(const PureState<Scalar>& joint, Subsystem keep) {
    using Matrix = typename DensityMatrix<Scalar>::Matrix;
    if (joint.dim() != 8) throw std::invalid_argument("reduced_density expects a qubit (x) ancilla state");
    // Column q of `grid` is the (unnormalized) ancilla vector paired with |q>.
    const Eigen::Matrix<Complex<Scalar>, 4, 2> grid =
        Eigen::Map<const Eigen::Matrix<Complex<Scalar>, 4, 2>>(joint.amplitudes().data());
    if (keep == Subsystem::Ancilla) {
        return DensityMatrix<Scalar>(Matrix(grid * grid.adjoint()));
    }
    return DensityMatrix<Scalar>(Matrix(grid.transpose() * grid.conjugate()));
}

/// Half the trace norm of r1 - r2.
template <typename Scalar>
Scalar trace_distance(const DensityMatrix<Scalar>& r1, const DensityMatrix<Scalar>& r2) {
    if (r1.dim() != r2.dim()) throw std::invalid_argument("density matrix dimension mismatch");
    using Matrix = typename DensityMatrix<Scalar>::Matrix;
    const Matrix diff = r1.matrix() - r2.matrix();
    Eigen::SelfAdjointEigenSolver<Matrix> eig(diff, Eigen::EigenvaluesOnly);
    return std::clamp(Scalar(0.5) * eig.eigenvalues().cwiseAbs().sum(), Scalar(0), Scalar(1));
}

using Qubit = PureState<double>;
using Basis = QubitBasis<double>;
using Gate = Unitary<double>;
using Density = DensityMatrix<double>;

}  // namespace qsdc

#endif  // QSDC_QUANTUM_CORE_HPP
