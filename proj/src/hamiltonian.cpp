#include "anderson/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "anderson/io.hpp"

namespace anderson {

const char* to_string(InteractionKind kind) {
    switch (kind) {
    case InteractionKind::SubExponential: return "subexponential";
    case InteractionKind::FiniteRange: return "finite_range";
    }
    return "unknown";
}

void InteractionSpec::validate() const {
    if (!(C > 0.0) || !std::isfinite(C))
        throw std::invalid_argument("interaction C must be positive");
    if (!(c > 0.0) || !std::isfinite(c))
        throw std::invalid_argument("interaction c must be positive");
    if (!(tau > 0.0 && tau <= 1.0))
        throw std::invalid_argument("interaction tau must lie in (0, 1]");
    if (kind == InteractionKind::FiniteRange && range < 0)
        throw std::invalid_argument("interaction range must be >= 0");
}

double InteractionSpec::envelope(int r) const {
    return C * std::exp(-c * std::pow(static_cast<double>(r), tau));
}

double InteractionSpec::kernel(int r) const {
    if (kind == InteractionKind::FiniteRange && r > range)
        return 0.0;
    return envelope(r);
}

double interaction_energy(const InteractionSpec& spec, const ConfigPoint& x) {
    double total = 0.0;
    for (int i = 0; i < x.particles(); ++i)
        for (int j = i + 1; j < x.particles(); ++j)
            total += spec.kernel(site_distance(x.particle(i), x.particle(j)));
    return total;
}

InteractionBoundReport validate_interaction_bound(const InteractionSpec& kernel, int radius,
                                                  std::optional<DecayBound> bound) {
    if (radius < 0)
        throw std::invalid_argument("validate_interaction_bound: radius must be >= 0");
    const DecayBound b = bound.value_or(DecayBound{kernel.C, kernel.c, kernel.tau});
    InteractionBoundReport report;
    report.radius = radius;
    for (int r = 0; r <= radius; ++r) {
        const double limit = b.C * std::exp(-b.c * std::pow(static_cast<double>(r), b.tau));
        const double u = std::abs(kernel.kernel(r));
        // Far tails may underflow; a zero envelope is only violated by a nonzero kernel.
        const double ratio = limit > 0.0 ? u / limit : (u > 0.0 ? INFINITY : 0.0);
        if (r == 0 || ratio > report.max_ratio) {
            report.max_ratio = ratio;
            report.worst_distance = r;
        }
    }
    return report;
}

HamiltonianMatrix::HamiltonianMatrix(Rectangle region, std::vector<double> diagonal, double h,
                                     std::optional<DisorderRealization::Provenance> provenance)
    : region_(std::move(region)), diagonal_(std::move(diagonal)), h_(h),
      provenance_(provenance) {
    if (diagonal_.size() != region_.size())
        throw std::invalid_argument("HamiltonianMatrix: diagonal does not match region size");

    const std::size_t axes = region_.axes();
    std::vector<std::size_t> strides(axes);
    for (std::size_t a = 0; a < axes; ++a)
        strides[a] = region_.stride(a);

    row_start_.reserve(size() + 1);
    row_start_.push_back(0);
    std::vector<int> coord(axes);
    for (std::size_t a = 0; a < axes; ++a)
        coord[a] = region_.lower(a);
    for (std::size_t i = 0; i < size(); ++i) {
        // Strides shrink with the axis number, so decrements taken first to
        // last and increments last to first give an ascending row.
        for (std::size_t a = 0; a < axes; ++a)
            if (coord[a] > region_.lower(a))
                columns_.push_back(i - strides[a]);
        for (std::size_t a = axes; a-- > 0;)
            if (coord[a] < region_.upper(a))
                columns_.push_back(i + strides[a]);
        row_start_.push_back(columns_.size());

        for (std::size_t a = axes; a-- > 0;) {
            if (coord[a] < region_.upper(a)) {
                ++coord[a];
                break;
            }
            coord[a] = region_.lower(a);
        }
    }
    for (std::size_t a = 0; a < axes; ++a)
        if (region_.extent(a) > 1)
            bandwidth_ = std::max(bandwidth_, strides[a]);
}

std::span<const std::size_t> HamiltonianMatrix::neighbours(std::size_t i) const {
    return std::span<const std::size_t>(columns_).subspan(row_start_[i],
                                                          row_start_[i + 1] - row_start_[i]);
}

double HamiltonianMatrix::entry(std::size_t i, std::size_t j) const {
    if (i >= size() || j >= size())
        throw std::out_of_range("HamiltonianMatrix::entry: index out of range");
    if (i == j)
        return diagonal_[i];
    const auto row = neighbours(i);
    return std::binary_search(row.begin(), row.end(), j) ? -1.0 : 0.0;
}

Eigen::VectorXd HamiltonianMatrix::apply(const Eigen::VectorXd& v) const {
    if (static_cast<std::size_t>(v.size()) != size())
        throw std::invalid_argument("HamiltonianMatrix::apply: vector length mismatch");
    Eigen::VectorXd out(v.size());
    for (std::size_t i = 0; i < size(); ++i) {
        double acc = diagonal_[i] * v[static_cast<Eigen::Index>(i)];
        for (std::size_t j : neighbours(i))
            acc -= v[static_cast<Eigen::Index>(j)];
        out[static_cast<Eigen::Index>(i)] = acc;
    }
    return out;
}

Eigen::MatrixXd HamiltonianMatrix::dense() const {
    const auto n = static_cast<Eigen::Index>(size());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < size(); ++i) {
        const auto r = static_cast<Eigen::Index>(i);
        m(r, r) = diagonal_[i];
        for (std::size_t j : neighbours(i))
            m(r, static_cast<Eigen::Index>(j)) = -1.0;
    }
    return m;
}

double HamiltonianMatrix::gershgorin_norm() const {
    double best = 0.0;
    for (std::size_t i = 0; i < size(); ++i)
        best = std::max(best, std::abs(diagonal_[i]) + static_cast<double>(neighbours(i).size()));
    return best;
}

void HamiltonianMatrix::write_coordinate_list(std::ostream& os) const {
    for (std::size_t i = 0; i < size(); ++i) {
        const auto row = neighbours(i);
        auto it = row.begin();
        for (; it != row.end() && *it < i; ++it)
            os << i << ' ' << *it << ' ' << format_double(-1.0) << '\n';
        os << i << ' ' << i << ' ' << format_double(diagonal_[i]) << '\n';
        for (; it != row.end(); ++it)
            os << i << ' ' << *it << ' ' << format_double(-1.0) << '\n';
    }
}

HamiltonianMatrix build_hamiltonian(const Rectangle& region, const DisorderRealization& realization,
                                    const InteractionSpec& interaction, double h) {
    interaction.validate();
    for (const auto& s : region.projection())
        if (!realization.covers(s))
            throw std::out_of_range("build_hamiltonian: disorder realization does not cover the region");

    const double laplacian_diagonal = 2.0 * region.dim() * region.particles();
    std::vector<double> diagonal;
    diagonal.reserve(region.size());
    for (std::size_t i = 0; i < region.size(); ++i) {
        const auto x = region.site(i);
        double value = laplacian_diagonal + multi_particle_potential(realization, x);
        if (h != 0.0)
            value += h * interaction_energy(interaction, x);
        diagonal.push_back(value);
    }
    return HamiltonianMatrix(region, std::move(diagonal), h, realization.provenance());
}

}  // namespace anderson
