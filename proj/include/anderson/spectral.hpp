#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "anderson/geometry.hpp"
#include "anderson/hamiltonian.hpp"

namespace anderson {

inline constexpr std::size_t kDefaultDenseLimit = 4096;

/// Closed energy interval [lo, hi].
struct EnergyInterval {
    double lo = 0.0;
    double hi = 1.0;

    bool contains(double E) const { return E >= lo && E <= hi; }
    friend bool operator==(const EnergyInterval&, const EnergyInterval&) = default;
};

/// Full eigendecomposition of a finite-volume Hamiltonian. Column j of
/// `eigenvectors` belongs to eigenvalues[j]; rows follow the region's site
/// order.
struct Spectrum {
    Rectangle region;
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors;
    double residual_bound = 0.0;           ///< max_j |H psi_j - E_j psi_j|_2
    double orthonormality_deviation = 0.0; ///< max |V^T V - 1| entrywise

    std::size_t size() const { return static_cast<std::size_t>(eigenvalues.size()); }
    std::vector<std::size_t> indices_in(const EnergyInterval& I) const;
};

class SizeLimitExceeded : public std::length_error {
public:
    using std::length_error::length_error;
};

/// Dense symmetric eigensolver (LAPACK dsyevr). Throws
/// SizeLimitExceeded above `dense_limit` sites.
Spectrum eigensolve(const HamiltonianMatrix& H, std::size_t dense_limit = kDefaultDenseLimit);

/// Ascending eigenvalues without eigenvectors.
Eigen::VectorXd eigenvalues(const HamiltonianMatrix& H, std::size_t dense_limit = kDefaultDenseLimit);

/// Thrown when H - E is numerically singular: the energy must be treated as
/// resonant.
class NearSpectrum : public std::runtime_error {
public:
    NearSpectrum(double energy, double condition);
    double energy() const { return energy_; }
    double condition() const { return condition_; }

private:
    double energy_;
    double condition_;
};

/// LU factorization of H - E in band storage; one factorization serves
/// any number of resolvent columns. Keeps a pointer to H, which must outlive
/// the Resolvent.
class Resolvent {
public:
    static constexpr double kMaxCondition = 1e14;
    static constexpr double kMaxResidual = 1e-8;

    /// Throws NearSpectrum when the 1-norm condition estimate exceeds
    /// kMaxCondition or the matrix is exactly singular.
    Resolvent(const HamiltonianMatrix& H, double E);

    double energy() const { return energy_; }
    double condition_estimate() const { return condition_; }

    /// (H - E)^{-1} delta_y, i.e. G(., y; E). Throws NearSpectrum when the
    /// solve residual exceeds kMaxResidual.
    Eigen::VectorXd column(std::size_t y) const;
    /// |(H - E) u - delta_y|_2 for a candidate column u.
    double residual(const Eigen::VectorXd& u, std::size_t y) const;

private:
    const HamiltonianMatrix* H_;
    double energy_;
    int n_;
    int kl_;
    int ldab_;
    std::vector<double> band_;
    std::vector<int> pivots_;
    double condition_ = 0.0;
};

/// Green function G(x, y; E) = <delta_x, (H - E)^{-1} delta_y>.
double green(const HamiltonianMatrix& H, double E, const ConfigPoint& x, const ConfigPoint& y);

/// gamma(m, L, n) = m (1 + L^{-1/8})^{N - n + 1}.
double gamma_rate(double m, int L, int n, int N);

/// exp(-gamma(m, L, n) L); equals 1 for the single-site cube L = 0.
double nonsingular_threshold(double m, int L, int n, int N);

struct NsVerdict {
    bool nonsingular = false;
    double max_boundary_green = 0.0;  ///< +inf at a resonance
    double threshold = 0.0;
    double margin = 0.0;              ///< threshold - max_boundary_green
    double spectral_gap = 0.0;        ///< dist(E, sigma(H))
};

/// (E, m, h)-classification of one cube at many energies. Holds the
/// eigenvalues (for the spectral gap) and the boundary row indices.
class CubeClassifier {
public:
    CubeClassifier(const Cube& cube, HamiltonianMatrix H, double m, int N,
                   std::size_t dense_limit = kDefaultDenseLimit);

    NsVerdict classify(double E) const;

    const HamiltonianMatrix& hamiltonian() const { return H_; }
    const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
    double threshold() const { return threshold_; }
    /// |E - lambda| below this counts as E in sigma(H).
    double resonance_tolerance() const { return tolerance_; }

private:
    HamiltonianMatrix H_;
    Eigen::VectorXd eigenvalues_;
    std::size_t center_index_;
    std::vector<std::size_t> boundary_indices_;
    double threshold_;
    double tolerance_;
};

/// Classifies `cube` at energy E; H must be built on exactly this cube.
NsVerdict classify_cube(const Cube& cube, const HamiltonianMatrix& H, double E, double m, int N);

}  // namespace anderson
