#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "anderson/disorder.hpp"
#include "anderson/geometry.hpp"
#include "anderson/hamiltonian.hpp"
#include "anderson/spectral.hpp"

namespace anderson {

// Eigenfunction decay

struct DecayFitOptions {
    int r_min = 1;
    int r_max = -1;                ///< -1: farthest shell in the region
    double relative_floor = 1e-12; ///< shells below floor * max|psi| are dropped
};

/// Least-squares fit of log max_{|x - center| = r} |psi(x)| against r.
struct DecayFit {
    double rate = 0.0;  ///< minus the slope
    double intercept = 0.0;
    double r_squared = 0.0;
    std::size_t shells_used = 0;
    ConfigPoint center;
    std::vector<int> radii;          ///< abscissae of the fit
    std::vector<double> log_maxima;  ///< log M_r at those radii
};

class InsufficientShells : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Fits the decay of an arbitrary vector on `region`. The default center is
/// the site of largest |psi|. Throws InsufficientShells below 3 usable shells.
DecayFit decay_fit(const Rectangle& region, std::span<const double> psi,
                   std::optional<ConfigPoint> center = std::nullopt,
                   const DecayFitOptions& options = {});

DecayFit decay_fit(const Spectrum& spectrum, std::size_t eigen_index,
                   std::optional<ConfigPoint> center = std::nullopt,
                   const DecayFitOptions& options = {});

// Hilbert-Schmidt moments

enum class MomentMethod { ExactVertex, UpperBound };

const char* to_string(MomentMethod method);

struct MomentOptions {
    std::size_t vertex_limit = 20;
    /// Point from which |x| is measured; defaults to the coordinate origin.
    std::optional<ConfigPoint> origin;
};

struct MomentResult {
    double s = 0.0;
    EnergyInterval interval;
    std::size_t k_sites = 0;
    std::size_t multiplicity = 0;  ///< eigenvalues in the interval
    double value = 0.0;
    MomentMethod method = MomentMethod::ExactVertex;
    bool degenerate_cluster = false;  ///< eigenvalues in I closer than 1e-10
    std::optional<DisorderRealization::Provenance> provenance;
};

/// B_{kj} = <phi_k, phi_j> <chi_j, chi_k> with phi_j = |X|^{s/2} psi_j and
/// chi_j = 1_K psi_j, over the eigenvectors with eigenvalue in I.
Eigen::MatrixXd moment_form(const Spectrum& spectrum, const EnergyInterval& I, double s,
                            std::span<const std::size_t> k_indices, const MomentOptions& options = {});

/// max over sign vectors c of c^T B c.
double vertex_maximum(const Eigen::MatrixXd& B);

/// sup over |f| <= 1 of || |X|^{s/2} f(H) P_I(H) 1_K ||_HS^2 for one
/// realization. Exact by vertex enumeration up to `vertex_limit`
/// eigenvalues in I, otherwise the bound sum |B_jk|.
MomentResult hs_moment(const Spectrum& spectrum, const EnergyInterval& I, double s,
                       std::span<const ConfigPoint> K, const MomentOptions& options = {});

/// Q(x, y) = sum over E_j in I of |psi_j(x)| |psi_j(y)|.
Eigen::MatrixXd eigenfunction_correlator(const Spectrum& spectrum, const EnergyInterval& I);

struct ModelParams {
    int n = 1;
    int d = 1;
    double h = 0.0;
    std::size_t dense_limit = kDefaultDenseLimit;
};

struct AveragedMoment {
    double mean = 0.0;
    double standard_error = 0.0;
    std::vector<MomentResult> samples;
};

/// Mean of hs_moment over realizations 0..realizations-1 of `disorder`.
AveragedMoment disorder_averaged_moment(const ModelParams& model, const DisorderSpec& disorder,
                                        const InteractionSpec& interaction, const Rectangle& region,
                                        const EnergyInterval& I, double s,
                                        std::span<const ConfigPoint> K, std::size_t realizations,
                                        std::uint64_t master_seed, std::size_t workers = 1,
                                        const MomentOptions& options = {});

}  // namespace anderson
