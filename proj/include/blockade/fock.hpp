// Copyright 2026 The Blockade Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Truncated Fock-space algebra for a single driven Kerr mode: ladder
// operators, the rotating-frame Hamiltonian, the Lindblad generator with
// single-photon loss, and the photon-statistics observables.

#include <cmath>
#include <complex>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "blockade/errors.hpp"

namespace blockade {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr Complex kI{0.0, 1.0};

/// Physical constants of the mode. Rates are in units of gamma; the drive and
/// mode frequencies only enter through the detuning.
struct SystemParams {
    double delta = 0.0;  ///< detuning between mode and drive
    double u = 0.0;      ///< Kerr strength
    double gamma = 1.0;  ///< single-photon decay rate
    int fock_dim = 10;   ///< basis |0>..|fock_dim-1>

    void validate() const {
        if (!(gamma > 0.0) || !std::isfinite(gamma))
            throw InvalidArgument("gamma must be positive, got " + std::to_string(gamma));
        if (fock_dim < 3)
            throw InvalidArgument("fock_dim must be at least 3, got " + std::to_string(fock_dim));
        if (!std::isfinite(delta) || !std::isfinite(u))
            throw InvalidArgument("delta and u must be finite");
    }
};

struct LadderOperators {
    ComplexMatrix annihilation;
    ComplexMatrix creation;
    ComplexMatrix number;
};

inline LadderOperators build_operators(int fock_dim) {
    if (fock_dim < 2)
        throw InvalidArgument("invalid Fock dimension " + std::to_string(fock_dim) + " (need >= 2)");
    LadderOperators ops;
    ops.annihilation = ComplexMatrix::Zero(fock_dim, fock_dim);
    for (int n = 1; n < fock_dim; ++n)
        ops.annihilation(n - 1, n) = std::sqrt(static_cast<double>(n));
    ops.creation = ops.annihilation.adjoint();
    ops.number = ops.creation * ops.annihilation;
    return ops;
}

/// H = delta a^dag a + U a^dag a^dag a a + eps (a^dag + a).
inline ComplexMatrix hamiltonian(const SystemParams& p, double eps) {
    if (!std::isfinite(eps)) throw InvalidArgument("drive amplitude must be finite");
    const int dim = p.fock_dim;
    ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
    for (int n = 0; n < dim; ++n) {
        const double nd = n;
        h(n, n) = p.delta * nd + p.u * nd * (nd - 1.0);
        if (n + 1 < dim) {
            const double s = std::sqrt(nd + 1.0);
            h(n, n + 1) = eps * s;
            h(n + 1, n) = eps * s;
        }
    }
    return h;
}

/// General Lindblad generator -i[H, rho] + (gamma/2)(2 a rho a^dag - a^dag a rho - rho a^dag a)
/// for an arbitrary Hamiltonian matrix. Dense O(N^3); the integrator uses
/// KerrLindbladian instead.
inline ComplexMatrix lindblad_rhs(const ComplexMatrix& rho, const ComplexMatrix& h, double gamma) {
    if (rho.rows() != rho.cols() || h.rows() != h.cols() || rho.rows() != h.rows())
        throw ShapeError("lindblad_rhs: rho is " + std::to_string(rho.rows()) + "x" +
                         std::to_string(rho.cols()) + ", H is " + std::to_string(h.rows()) + "x" +
                         std::to_string(h.cols()));
    const auto ops = build_operators(static_cast<int>(rho.rows()));
    const ComplexMatrix& a = ops.annihilation;
    const ComplexMatrix& n = ops.number;
    ComplexMatrix out = -kI * (h * rho - rho * h);
    out += (gamma / 2.0) * (2.0 * a * rho * ops.creation - n * rho - rho * n);
    return out;
}

/// Structured right-hand side for the Kerr mode. H is tridiagonal and a is a
/// single superdiagonal, so every term is an O(N^2) stencil.
class KerrLindbladian {
public:
    explicit KerrLindbladian(const SystemParams& p) : gamma_(p.gamma), dim_(p.fock_dim) {
        p.validate();
        diag_.resize(dim_);
        sqrt_.resize(dim_ + 1);
        for (int n = 0; n < dim_; ++n) {
            const double nd = n;
            diag_[n] = p.delta * nd + p.u * nd * (nd - 1.0);
        }
        for (int n = 0; n <= dim_; ++n) sqrt_[n] = std::sqrt(static_cast<double>(n));
    }

    int dim() const noexcept { return dim_; }

    /// out = L(eps) rho. `out` is resized if needed and must not alias `rho`.
    void apply(double eps, const ComplexMatrix& rho, ComplexMatrix& out) const {
        const int d = dim_;
        out.resize(d, d);
        for (int j = 0; j < d; ++j) {
            for (int i = 0; i < d; ++i) {
                // (H rho)_ij - (rho H)_ij
                Complex comm = (diag_[i] - diag_[j]) * rho(i, j);
                Complex drive = 0.0;
                if (i > 0) drive += sqrt_[i] * rho(i - 1, j);
                if (i + 1 < d) drive += sqrt_[i + 1] * rho(i + 1, j);
                if (j > 0) drive -= sqrt_[j] * rho(i, j - 1);
                if (j + 1 < d) drive -= sqrt_[j + 1] * rho(i, j + 1);
                comm += eps * drive;
                Complex v = -kI * comm - 0.5 * gamma_ * static_cast<double>(i + j) * rho(i, j);
                if (i + 1 < d && j + 1 < d) v += gamma_ * sqrt_[i + 1] * sqrt_[j + 1] * rho(i + 1, j + 1);
                out(i, j) = v;
            }
        }
    }

private:
    double gamma_;
    int dim_;
    Eigen::VectorXd diag_;
    Eigen::VectorXd sqrt_;
};

inline ComplexMatrix vacuum_state(int fock_dim) {
    ComplexMatrix rho = ComplexMatrix::Zero(fock_dim, fock_dim);
    rho(0, 0) = 1.0;
    return rho;
}

inline ComplexMatrix fock_state(int fock_dim, int k) {
    if (k < 0 || k >= fock_dim) throw InvalidArgument("Fock index out of range");
    ComplexMatrix rho = ComplexMatrix::Zero(fock_dim, fock_dim);
    rho(k, k) = 1.0;
    return rho;
}

/// <a^dag a>, clamped at zero when round-off pushes it just below.
inline double mean_photon(const ComplexMatrix& rho) {
    double n = 0.0;
    for (Eigen::Index k = 1; k < rho.rows(); ++k) n += static_cast<double>(k) * rho(k, k).real();
    if (n < 0.0 && n > -1e-12) n = 0.0;
    return n;
}

/// <a^dag a^dag a a> = sum_k k (k - 1) P_k.
inline double second_factorial_moment(const ComplexMatrix& rho) {
    double m = 0.0;
    for (Eigen::Index k = 2; k < rho.rows(); ++k)
        m += static_cast<double>(k) * static_cast<double>(k - 1) * rho(k, k).real();
    return m;
}

inline constexpr double kDefaultPhotonFloor = 1e-6;

/// Equal-time second-order correlation. Empty when the mean photon number is
/// below `n_floor`, where the ratio is numerically meaningless.
inline std::optional<double> g2(const ComplexMatrix& rho, double n_floor = kDefaultPhotonFloor) {
    if (!(n_floor > 0.0)) throw InvalidArgument("n_floor must be positive");
    const double n = mean_photon(rho);
    if (n < n_floor) return std::nullopt;
    return second_factorial_moment(rho) / (n * n);
}

inline double fock_population(const ComplexMatrix& rho, int k) {
    if (k < 0 || k >= rho.rows())
        throw InvalidArgument("Fock population index " + std::to_string(k) + " out of range [0, " +
                              std::to_string(rho.rows()) + ")");
    return rho(k, k).real();
}

/// Deviations of rho from a physical density matrix.
struct DensityDiagnostics {
    double hermiticity = 0.0;  ///< max |rho - rho^dag|
    double trace_error = 0.0;  ///< |Tr rho - 1|
    double min_eigenvalue = 0.0;
};

inline DensityDiagnostics diagnose_density(const ComplexMatrix& rho, bool with_eigenvalues = true) {
    DensityDiagnostics d;
    d.hermiticity = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    d.trace_error = std::abs(rho.trace() - 1.0);
    if (with_eigenvalues) {
        const ComplexMatrix herm = 0.5 * (rho + rho.adjoint());
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(herm, Eigen::EigenvaluesOnly);
        d.min_eigenvalue = es.eigenvalues().minCoeff();
    }
    return d;
}

struct DensityTolerances {
    double hermiticity = 1e-8;
    double trace = 1e-6;
    double negativity = 1e-8;
};

/// Throws InvariantViolation if rho is outside tolerance; rho is never modified.
inline void check_density(const ComplexMatrix& rho, double t, bool with_eigenvalues = true,
                          const DensityTolerances& tol = {}) {
    const auto d = diagnose_density(rho, with_eigenvalues);
    if (!(d.hermiticity < tol.hermiticity))
        throw InvariantViolation("density matrix not Hermitian: max|rho - rho^dag| = " +
                                     std::to_string(d.hermiticity), t);
    if (!(d.trace_error < tol.trace))
        throw InvariantViolation("density matrix trace drifted: |Tr rho - 1| = " +
                                     std::to_string(d.trace_error), t);
    if (with_eigenvalues && !(d.min_eigenvalue > -tol.negativity))
        throw InvariantViolation("density matrix not positive: min eigenvalue = " +
                                     std::to_string(d.min_eigenvalue), t);
}

}  // namespace blockade
