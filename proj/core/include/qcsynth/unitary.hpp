#pragma once

#include <complex>
#include <optional>
#include <string>

#include <Eigen/Dense>

namespace qcs {

/// Default tolerance for unitarity checks and algebraic property detection.
/// Well above double accumulation error for dim <= 16, well below any
/// angle-grid spacing.
inline constexpr double kUnitTol = 1e-6;

/// Tolerance for accepting an integral solution's matrix equality after LP
/// round-off.
inline constexpr double kFeasTol = 1e-4;

/// Dense complex square matrix with real and imaginary parts stored
/// separately. Every entry of a unitary has |Re|, |Im| <= 1, which the MIP
/// formulation relies on for its variable bounds.
class Unitary {
public:
    Unitary() = default;
    Unitary(Eigen::MatrixXd re, Eigen::MatrixXd im);

    static Unitary identity(int dim);
    static Unitary zero(int dim);

    int dim() const { return static_cast<int>(re_.rows()); }
    const Eigen::MatrixXd& re() const { return re_; }
    const Eigen::MatrixXd& im() const { return im_; }
    double re(int r, int c) const { return re_(r, c); }
    double im(int r, int c) const { return im_(r, c); }
    std::complex<double> at(int r, int c) const { return {re_(r, c), im_(r, c)}; }
    void set(int r, int c, std::complex<double> v);

    Unitary operator*(const Unitary& rhs) const;
    Unitary operator*(std::complex<double> scalar) const;
    Unitary dagger() const;
    Unitary kron(const Unitary& rhs) const;

    /// Max-norm of U - V entrywise.
    double max_abs_diff(const Unitary& rhs) const;
    /// Largest |Re| or |Im| over all entries.
    double max_abs_part() const;
    bool is_unitary(double tol = kUnitTol) const;
    /// True iff every imaginary part is below tol in magnitude.
    bool is_real(double tol = kUnitTol) const;

    std::string to_string(int precision = 4) const;

private:
    Eigen::MatrixXd re_, im_;
};

/// Result of comparing two unitaries up to a global phase.
struct PhaseMatch {
    bool equal = false;
    std::complex<double> phase{1.0, 0.0};
};

/// True iff a unit-modulus c exists with U = c*V entrywise within tol.
/// The candidate c is computed from the largest-magnitude entry of V.
PhaseMatch equiv_up_to_phase(const Unitary& u, const Unitary& v, double tol = kUnitTol);

}  // namespace qcs
