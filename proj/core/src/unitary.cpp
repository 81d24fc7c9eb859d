#include "qcsynth/unitary.hpp"

#include <sstream>
#include <stdexcept>

namespace qcs {

Unitary::Unitary(Eigen::MatrixXd re, Eigen::MatrixXd im)
    : re_(std::move(re)), im_(std::move(im)) {
    if (re_.rows() != re_.cols() || im_.rows() != im_.cols() ||
        re_.rows() != im_.rows()) {
        throw std::invalid_argument("Unitary: parts must be square and of equal size");
    }
}

Unitary Unitary::identity(int dim) {
    return Unitary(Eigen::MatrixXd::Identity(dim, dim), Eigen::MatrixXd::Zero(dim, dim));
}

Unitary Unitary::zero(int dim) {
    return Unitary(Eigen::MatrixXd::Zero(dim, dim), Eigen::MatrixXd::Zero(dim, dim));
}

void Unitary::set(int r, int c, std::complex<double> v) {
    re_(r, c) = v.real();
    im_(r, c) = v.imag();
}

Unitary Unitary::operator*(const Unitary& rhs) const {
    if (dim() != rhs.dim()) throw std::invalid_argument("Unitary product: dimension mismatch");
    return Unitary(re_ * rhs.re_ - im_ * rhs.im_, re_ * rhs.im_ + im_ * rhs.re_);
}

Unitary Unitary::operator*(std::complex<double> s) const {
    return Unitary(s.real() * re_ - s.imag() * im_, s.real() * im_ + s.imag() * re_);
}

Unitary Unitary::dagger() const {
    return Unitary(re_.transpose(), -im_.transpose());
}

Unitary Unitary::kron(const Unitary& rhs) const {
    const int a = dim(), b = rhs.dim();
    Eigen::MatrixXd re(a * b, a * b), im(a * b, a * b);
    for (int i = 0; i < a; ++i) {
        for (int j = 0; j < a; ++j) {
            re.block(i * b, j * b, b, b) = re_(i, j) * rhs.re_ - im_(i, j) * rhs.im_;
            im.block(i * b, j * b, b, b) = re_(i, j) * rhs.im_ + im_(i, j) * rhs.re_;
        }
    }
    return Unitary(std::move(re), std::move(im));
}

double Unitary::max_abs_diff(const Unitary& rhs) const {
    if (dim() != rhs.dim()) throw std::invalid_argument("max_abs_diff: dimension mismatch");
    // Max-norm over complex entries, measured as |delta| per entry.
    double worst = 0.0;
    for (int i = 0; i < dim(); ++i)
        for (int j = 0; j < dim(); ++j)
            worst = std::max(worst, std::abs(at(i, j) - rhs.at(i, j)));
    return worst;
}

double Unitary::max_abs_part() const {
    return std::max(re_.cwiseAbs().maxCoeff(), im_.cwiseAbs().maxCoeff());
}

bool Unitary::is_unitary(double tol) const {
    const Unitary prod = *this * dagger();
    return prod.max_abs_diff(identity(dim())) < tol;
}

bool Unitary::is_real(double tol) const {
    return im_.cwiseAbs().maxCoeff() < tol;
}

std::string Unitary::to_string(int precision) const {
    std::ostringstream os;
    os.precision(precision);
    for (int i = 0; i < dim(); ++i) {
        for (int j = 0; j < dim(); ++j) {
            os << at(i, j);
            if (j + 1 < dim()) os << " ";
        }
        os << "\n";
    }
    return os.str();
}

PhaseMatch equiv_up_to_phase(const Unitary& u, const Unitary& v, double tol) {
    if (u.dim() != v.dim()) throw std::invalid_argument("equiv_up_to_phase: dimension mismatch");
    // Phase candidate from the largest-magnitude entry of V.
    int br = 0, bc = 0;
    double best = -1.0;
    for (int i = 0; i < v.dim(); ++i) {
        for (int j = 0; j < v.dim(); ++j) {
            const double m = std::abs(v.at(i, j));
            if (m > best) {
                best = m;
                br = i;
                bc = j;
            }
        }
    }
    if (best < tol) return {};  // V ~ 0, not a unitary; nothing sensible to report
    std::complex<double> c = u.at(br, bc) / v.at(br, bc);
    const double mod = std::abs(c);
    if (std::abs(mod - 1.0) > tol) return {};
    c /= mod;  // snap to unit modulus before the entrywise check
    if (u.max_abs_diff(v * c) < tol) return {true, c};
    return {};
}

}  // namespace qcs
