#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "anderson/disorder.hpp"
#include "anderson/geometry.hpp"

namespace anderson {

enum class InteractionKind { SubExponential, FiniteRange };

const char* to_string(InteractionKind kind);

/// Two-body kernel U(x, y) = C exp(-c |x - y|^tau), optionally truncated to
/// zero beyond `range`. For d > 1 the distance is the sup norm in Z^d.
struct InteractionSpec {
    InteractionKind kind = InteractionKind::SubExponential;
    double C = 1.0;
    double c = 1.0;
    double tau = 0.5;
    int range = 0;  ///< FiniteRange only

    void validate() const;

    /// Kernel value at two-body distance r >= 0.
    double kernel(int r) const;
    /// C exp(-c r^tau), the envelope every kernel must respect.
    double envelope(int r) const;

    friend bool operator==(const InteractionSpec&, const InteractionSpec&) = default;
};

/// sum over unordered particle pairs i < j of U(x_i, x_j).
double interaction_energy(const InteractionSpec& spec, const ConfigPoint& x);

/// Envelope constants for `validate_interaction_bound`.
struct DecayBound {
    double C;
    double c;
    double tau;
};

struct InteractionBoundReport {
    int radius = 0;
    double max_ratio = 0.0;  ///< max_r U(r) / (C exp(-c r^tau))
    int worst_distance = 0;
    bool holds() const { return max_ratio <= 1.0; }
};

/// Checks U(r) <= C exp(-c r^tau) for r = 0..radius. Without an explicit
/// bound the kernel's own constants are used.
InteractionBoundReport validate_interaction_bound(const InteractionSpec& kernel, int radius,
                                                  std::optional<DecayBound> bound = std::nullopt);

/// Finite-volume n-particle Hamiltonian -Delta + V + hU on a rectangle with
/// simple boundary conditions. Rows follow the lexicographic site order.
///
/// Off-diagonal entries are all -1 and stored as neighbour lists; hops that
/// would leave the region are dropped while the diagonal keeps its full 2dn.
class HamiltonianMatrix {
public:
    HamiltonianMatrix(Rectangle region, std::vector<double> diagonal, double h,
                      std::optional<DisorderRealization::Provenance> provenance);

    const Rectangle& region() const { return region_; }
    std::size_t size() const { return diagonal_.size(); }
    int particles() const { return region_.particles(); }
    int dim() const { return region_.dim(); }
    double coupling() const { return h_; }
    const std::optional<DisorderRealization::Provenance>& provenance() const { return provenance_; }

    const std::vector<double>& diagonal() const { return diagonal_; }
    /// Column indices of the -1 entries in row i, ascending.
    std::span<const std::size_t> neighbours(std::size_t i) const;
    /// Largest |i - j| over nonzero entries.
    std::size_t half_bandwidth() const { return bandwidth_; }

    double entry(std::size_t i, std::size_t j) const;

    Eigen::VectorXd apply(const Eigen::VectorXd& v) const;
    Eigen::MatrixXd dense() const;

    /// Upper bound on the spectral radius from Gershgorin discs.
    double gershgorin_norm() const;

    /// Coordinate-list dump, one "row col value" line per nonzero, sorted.
    void write_coordinate_list(std::ostream& os) const;

private:
    Rectangle region_;
    std::vector<double> diagonal_;
    std::vector<std::size_t> row_start_;
    std::vector<std::size_t> columns_;
    std::size_t bandwidth_ = 0;
    double h_;
    std::optional<DisorderRealization::Provenance> provenance_;
};

/// Assembles H on `region`; throws std::out_of_range when a particle
/// projection of the region is not covered by the realization.
HamiltonianMatrix build_hamiltonian(const Rectangle& region, const DisorderRealization& realization,
                                    const InteractionSpec& interaction, double h);

}  // namespace anderson
