#include "anderson/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include <lapacke.h>

namespace anderson {

std::vector<std::size_t> Spectrum::indices_in(const EnergyInterval& I) const {
    std::vector<std::size_t> out;
    for (Eigen::Index j = 0; j < eigenvalues.size(); ++j)
        if (I.contains(eigenvalues[j]))
            out.push_back(static_cast<std::size_t>(j));
    return out;
}

namespace {

void check_dense_limit(const HamiltonianMatrix& H, std::size_t dense_limit) {
    if (H.size() > dense_limit)
        throw SizeLimitExceeded("region has " + std::to_string(H.size()) +
                                " sites, above the dense limit " + std::to_string(dense_limit));
}

}  // namespace

Spectrum eigensolve(const HamiltonianMatrix& H, std::size_t dense_limit) {
    check_dense_limit(H, dense_limit);
    const auto n = static_cast<lapack_int>(H.size());
    Eigen::MatrixXd a = H.dense();
    Spectrum spec{H.region(), Eigen::VectorXd(n), Eigen::MatrixXd(n, n)};
    // Relatively robust representations (dsyevr). The OpenBLAS dsyevd shipped
    // with some distributions returns non-orthogonal vectors above a few
    // hundred sites.
    std::vector<lapack_int> support(2 * static_cast<std::size_t>(std::max<lapack_int>(n, 1)));
    lapack_int found = 0;
    const lapack_int info =
        LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'A', 'U', n, a.data(), n, 0.0, 0.0, 0, 0, 0.0, &found,
                       spec.eigenvalues.data(), spec.eigenvectors.data(), n, support.data());
    if (info != 0 || found != n)
        throw std::runtime_error("dsyevr failed with info " + std::to_string(info));

    double max_abs = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        const Eigen::VectorXd psi = spec.eigenvectors.col(j);
        const double r = (H.apply(psi) - spec.eigenvalues[j] * psi).norm();
        spec.residual_bound = std::max(spec.residual_bound, r);
        max_abs = std::max(max_abs, std::abs(spec.eigenvalues[j]));
    }
    Eigen::MatrixXd gram = spec.eigenvectors.transpose() * spec.eigenvectors;
    gram.diagonal().array() -= 1.0;
    spec.orthonormality_deviation = n > 0 ? gram.cwiseAbs().maxCoeff() : 0.0;

    if (spec.residual_bound > 1e-8 * (1.0 + max_abs) || spec.orthonormality_deviation > 1e-10) {
        std::ostringstream msg;
        msg << "eigensolve accuracy check failed: residual " << spec.residual_bound
            << ", orthonormality " << spec.orthonormality_deviation;
        throw std::runtime_error(msg.str());
    }
    return spec;
}

Eigen::VectorXd eigenvalues(const HamiltonianMatrix& H, std::size_t dense_limit) {
    check_dense_limit(H, dense_limit);
    const auto n = static_cast<lapack_int>(H.size());
    Eigen::MatrixXd a = H.dense();
    Eigen::VectorXd w(n);
    std::vector<lapack_int> support(2 * static_cast<std::size_t>(std::max<lapack_int>(n, 1)));
    lapack_int found = 0;
    const lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'N', 'A', 'U', n, a.data(), n, 0.0, 0.0, 0, 0,
                                           0.0, &found, w.data(), nullptr, 1, support.data());
    if (info != 0 || found != n)
        throw std::runtime_error("dsyevr failed with info " + std::to_string(info));
    return w;
}

NearSpectrum::NearSpectrum(double energy, double condition)
    : std::runtime_error("energy " + std::to_string(energy) +
                         " is numerically in the spectrum (condition estimate " +
                         std::to_string(condition) + ")"),
      energy_(energy), condition_(condition) {}

// Resolvent

extern "C" void dgbtf2_(const lapack_int* m, const lapack_int* n, const lapack_int* kl, const lapack_int* ku,
                        double* ab, const lapack_int* ldab, lapack_int* ipiv, lapack_int* info);

Resolvent::Resolvent(const HamiltonianMatrix& H, double E)
    : H_(&H), energy_(E), n_(static_cast<int>(H.size())),
      kl_(static_cast<int>(H.half_bandwidth())), ldab_(3 * kl_ + 1),
      band_(static_cast<std::size_t>(ldab_) * static_cast<std::size_t>(n_), 0.0),
      pivots_(static_cast<std::size_t>(n_)) {
    // LAPACK band layout: A(i, j) lives at row kl + ku + i - j of column j,
    // with kl extra rows on top for the fill-in of pivoting.
    const auto at = [this](int i, int j) -> double& {
        return band_[static_cast<std::size_t>(2 * kl_ + i - j) +
                     static_cast<std::size_t>(j) * static_cast<std::size_t>(ldab_)];
    };
    double norm1 = 0.0;
    for (int j = 0; j < n_; ++j) {
        const double d = H.diagonal()[static_cast<std::size_t>(j)] - E;
        at(j, j) = d;
        const auto row = H.neighbours(static_cast<std::size_t>(j));
        for (std::size_t i : row)
            at(static_cast<int>(i), j) = -1.0;
        norm1 = std::max(norm1, std::abs(d) + static_cast<double>(row.size()));
    }

    // Unblocked dgbtf2: the blocked dgbtrf in OpenBLAS returns wrong factors
    // once the bandwidth exceeds its block size.
    lapack_int info = 0;
    dgbtf2_(&n_, &n_, &kl_, &kl_, band_.data(), &ldab_, pivots_.data(), &info);
    if (info > 0)
        throw NearSpectrum(E, std::numeric_limits<double>::infinity());
    if (info < 0)
        throw std::runtime_error("dgbtf2: invalid argument " + std::to_string(-info));

    double rcond = 0.0;
    info = LAPACKE_dgbcon(LAPACK_COL_MAJOR, '1', n_, kl_, kl_, band_.data(), ldab_, pivots_.data(),
                          norm1, &rcond);
    if (info != 0)
        throw std::runtime_error("dgbcon failed with info " + std::to_string(info));
    condition_ = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
    if (!(condition_ <= kMaxCondition))
        throw NearSpectrum(E, condition_);
}

double Resolvent::residual(const Eigen::VectorXd& u, std::size_t y) const {
    Eigen::VectorXd r = H_->apply(u) - energy_ * u;
    r[static_cast<Eigen::Index>(y)] -= 1.0;
    return r.norm();
}

Eigen::VectorXd Resolvent::column(std::size_t y) const {
    if (y >= static_cast<std::size_t>(n_))
        throw std::out_of_range("Resolvent::column: index out of range");
    Eigen::VectorXd u = Eigen::VectorXd::Zero(n_);
    u[static_cast<Eigen::Index>(y)] = 1.0;
    const lapack_int info = LAPACKE_dgbtrs(LAPACK_COL_MAJOR, 'N', n_, kl_, kl_, 1, band_.data(),
                                           ldab_, pivots_.data(), u.data(), n_);
    if (info != 0)
        throw std::runtime_error("dgbtrs failed with info " + std::to_string(info));
    if (!(residual(u, y) <= kMaxResidual))
        throw NearSpectrum(energy_, condition_);
    return u;
}

double green(const HamiltonianMatrix& H, double E, const ConfigPoint& x, const ConfigPoint& y) {
    const auto ix = H.region().index_of(x);
    const auto iy = H.region().index_of(y);
    if (!ix || !iy)
        throw std::out_of_range("green: point outside the region");
    const Resolvent resolvent(H, E);
    return resolvent.column(*iy)[static_cast<Eigen::Index>(*ix)];
}

// Nonsingularity

double gamma_rate(double m, int L, int n, int N) {
    if (!(m > 0.0))
        throw std::domain_error("gamma: m must be positive");
    if (L < 1)
        throw std::domain_error("gamma: L must be >= 1");
    if (n < 1 || n > N)
        throw std::domain_error("gamma: need 1 <= n <= N");
    return m * std::pow(1.0 + std::pow(static_cast<double>(L), -0.125), N - n + 1);
}

double nonsingular_threshold(double m, int L, int n, int N) {
    if (L == 0) {
        // gamma(m, L, n) L -> 0 as L -> 0; validate the remaining arguments.
        gamma_rate(m, 1, n, N);
        return 1.0;
    }
    return std::exp(-gamma_rate(m, L, n, N) * static_cast<double>(L));
}

CubeClassifier::CubeClassifier(const Cube& cube, HamiltonianMatrix H, double m, int N,
                               std::size_t dense_limit)
    : H_(std::move(H)) {
    const Rectangle region(cube);
    if (!(H_.region() == region))
        throw std::invalid_argument("CubeClassifier: Hamiltonian is not built on this cube");
    eigenvalues_ = anderson::eigenvalues(H_, dense_limit);
    center_index_ = *region.index_of(cube.center());
    for (const auto& v : internal_boundary(region))
        boundary_indices_.push_back(*region.index_of(v));
    threshold_ = nonsingular_threshold(m, cube.radius(), cube.particles(), N);
    const double norm = eigenvalues_.size() ? eigenvalues_.cwiseAbs().maxCoeff() : 0.0;
    tolerance_ = 1e-12 * std::max(1.0, norm);
}

NsVerdict CubeClassifier::classify(double E) const {
    NsVerdict verdict;
    verdict.threshold = threshold_;
    const auto* begin = eigenvalues_.data();
    const auto* end = begin + eigenvalues_.size();
    const auto* it = std::lower_bound(begin, end, E);
    double gap = std::numeric_limits<double>::infinity();
    if (it != end)
        gap = std::min(gap, *it - E);
    if (it != begin)
        gap = std::min(gap, E - *(it - 1));
    verdict.spectral_gap = gap;

    const auto resonant = [&verdict] {
        verdict.nonsingular = false;
        verdict.max_boundary_green = std::numeric_limits<double>::infinity();
        verdict.margin = -std::numeric_limits<double>::infinity();
        return verdict;
    };
    if (gap < tolerance_)
        return resonant();

    Eigen::VectorXd column;
    try {
        // G(u, v) = G(v, u): one column at the center serves every boundary site.
        column = Resolvent(H_, E).column(center_index_);
    } catch (const NearSpectrum&) {
        return resonant();
    }
    double worst = 0.0;
    for (std::size_t v : boundary_indices_)
        worst = std::max(worst, std::abs(column[static_cast<Eigen::Index>(v)]));
    verdict.max_boundary_green = worst;
    verdict.margin = threshold_ - worst;
    verdict.nonsingular = worst <= threshold_;
    return verdict;
}

NsVerdict classify_cube(const Cube& cube, const HamiltonianMatrix& H, double E, double m, int N) {
    return CubeClassifier(cube, H, m, N).classify(E);
}

}  // namespace anderson
