#include "anderson/observables.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "anderson/parallel.hpp"

namespace anderson {

DecayFit decay_fit(const Rectangle& region, std::span<const double> psi,
                   std::optional<ConfigPoint> center, const DecayFitOptions& options) {
    if (psi.size() != region.size())
        throw std::invalid_argument("decay_fit: vector length does not match region");
    if (psi.empty())
        throw InsufficientShells("decay_fit: empty vector");

    std::size_t peak = 0;
    for (std::size_t i = 1; i < psi.size(); ++i)
        if (std::abs(psi[i]) > std::abs(psi[peak]))
            peak = i;
    const ConfigPoint c = center ? *center : region.site(peak);
    if (c.particles() != region.particles() || c.dim() != region.dim())
        throw std::invalid_argument("decay_fit: center has the wrong shape");

    std::vector<double> shell_max;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        const auto r = static_cast<std::size_t>(sup_norm(region.site(i), c));
        if (r >= shell_max.size())
            shell_max.resize(r + 1, 0.0);
        shell_max[r] = std::max(shell_max[r], std::abs(psi[i]));
    }

    const double floor = options.relative_floor * std::abs(psi[peak]);
    const int last = options.r_max < 0 ? static_cast<int>(shell_max.size()) - 1
                                       : std::min(options.r_max, static_cast<int>(shell_max.size()) - 1);
    DecayFit fit{0.0, 0.0, 0.0, 0, c, {}, {}};
    for (int r = std::max(options.r_min, 0); r <= last; ++r) {
        const double m = shell_max[static_cast<std::size_t>(r)];
        if (m > floor && m > 0.0) {
            fit.radii.push_back(r);
            fit.log_maxima.push_back(std::log(m));
        }
    }
    fit.shells_used = fit.radii.size();
    if (fit.shells_used < 3)
        throw InsufficientShells("decay_fit: only " + std::to_string(fit.shells_used) +
                                 " shells above the floor");

    const double count = static_cast<double>(fit.shells_used);
    const double mean_r =
        std::accumulate(fit.radii.begin(), fit.radii.end(), 0.0) / count;
    const double mean_y =
        std::accumulate(fit.log_maxima.begin(), fit.log_maxima.end(), 0.0) / count;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < fit.shells_used; ++i) {
        const double dx = fit.radii[i] - mean_r;
        const double dy = fit.log_maxima[i] - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    const double slope = sxy / sxx;
    fit.rate = -slope;
    fit.intercept = mean_y - slope * mean_r;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < fit.shells_used; ++i) {
        const double e = fit.log_maxima[i] - (fit.intercept + slope * fit.radii[i]);
        ss_res += e * e;
    }
    fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
    return fit;
}

DecayFit decay_fit(const Spectrum& spectrum, std::size_t eigen_index,
                   std::optional<ConfigPoint> center, const DecayFitOptions& options) {
    if (eigen_index >= spectrum.size())
        throw std::out_of_range("decay_fit: eigenvector index out of range");
    const auto column = spectrum.eigenvectors.col(static_cast<Eigen::Index>(eigen_index));
    return decay_fit(spectrum.region,
                     std::span<const double>(column.data(), static_cast<std::size_t>(column.size())),
                     std::move(center), options);
}

const char* to_string(MomentMethod method) {
    switch (method) {
    case MomentMethod::ExactVertex: return "exact_vertex";
    case MomentMethod::UpperBound: return "upper_bound";
    }
    return "unknown";
}

Eigen::MatrixXd moment_form(const Spectrum& spectrum, const EnergyInterval& I, double s,
                            std::span<const std::size_t> k_indices, const MomentOptions& options) {
    if (!(s >= 0.0))
        throw std::domain_error("hs_moment: only s >= 0 is supported");
    const Rectangle& region = spectrum.region;
    const auto origin = options.origin ? *options.origin
                                       : ConfigPoint::origin(region.particles(), region.dim());
    const auto n = static_cast<Eigen::Index>(spectrum.size());

    Eigen::VectorXd weight(n);
    for (Eigen::Index x = 0; x < n; ++x) {
        const double dist = sup_norm(region.site(static_cast<std::size_t>(x)), origin);
        weight[x] = s == 0.0 ? 1.0 : std::pow(dist, 0.5 * s);
    }
    Eigen::VectorXd in_K = Eigen::VectorXd::Zero(n);
    for (std::size_t k : k_indices) {
        if (k >= spectrum.size())
            throw std::out_of_range("hs_moment: K index outside the region");
        in_K[static_cast<Eigen::Index>(k)] = 1.0;
    }

    const auto selected = spectrum.indices_in(I);
    const auto m = static_cast<Eigen::Index>(selected.size());
    Eigen::MatrixXd phi(n, m), chi(n, m);
    for (Eigen::Index j = 0; j < m; ++j) {
        const auto psi = spectrum.eigenvectors.col(static_cast<Eigen::Index>(selected[static_cast<std::size_t>(j)]));
        phi.col(j) = weight.cwiseProduct(psi);
        chi.col(j) = in_K.cwiseProduct(psi);
    }
    const Eigen::MatrixXd phi_gram = phi.transpose() * phi;
    const Eigen::MatrixXd chi_gram = chi.transpose() * chi;
    // Schur product; both Gram matrices are symmetric so the transpose in
    // <chi_j, chi_k> drops out.
    return phi_gram.cwiseProduct(chi_gram);
}

double vertex_maximum(const Eigen::MatrixXd& B) {
    const Eigen::Index m = B.rows();
    if (m == 0)
        return 0.0;
    if (m > 62)
        throw std::length_error("vertex_maximum: too many coordinates");

    // c and -c give the same value, so c_0 = +1 is fixed and the remaining
    // signs are walked in Gray-code order, one flip per step.
    Eigen::VectorXd c = Eigen::VectorXd::Ones(m);
    Eigen::VectorXd g = B * c;
    double value = c.dot(g);
    double best = value;
    std::uint64_t best_code = 0;
    const std::uint64_t steps = std::uint64_t{1} << (m - 1);
    for (std::uint64_t k = 1; k < steps; ++k) {
        const auto i = static_cast<Eigen::Index>(std::countr_zero(k)) + 1;
        value += -4.0 * c[i] * g[i] + 4.0 * B(i, i);
        g -= 2.0 * c[i] * B.col(i);
        c[i] = -c[i];
        if (value > best) {
            best = value;
            best_code = k ^ (k >> 1);
        }
    }
    // Recompute the winner directly to shed the accumulated rounding.
    Eigen::VectorXd winner = Eigen::VectorXd::Ones(m);
    for (Eigen::Index i = 1; i < m; ++i)
        if ((best_code >> (i - 1)) & 1u)
            winner[i] = -1.0;
    return winner.dot(B * winner);
}

MomentResult hs_moment(const Spectrum& spectrum, const EnergyInterval& I, double s,
                       std::span<const ConfigPoint> K, const MomentOptions& options) {
    std::vector<std::size_t> k_indices;
    k_indices.reserve(K.size());
    for (const auto& x : K) {
        const auto index = spectrum.region.index_of(x);
        if (!index)
            throw std::out_of_range("hs_moment: K site outside the region");
        k_indices.push_back(*index);
    }
    std::sort(k_indices.begin(), k_indices.end());
    k_indices.erase(std::unique(k_indices.begin(), k_indices.end()), k_indices.end());

    MomentResult result;
    result.s = s;
    result.interval = I;
    result.k_sites = k_indices.size();

    const auto selected = spectrum.indices_in(I);
    result.multiplicity = selected.size();
    for (std::size_t j = 1; j < selected.size(); ++j)
        if (spectrum.eigenvalues[static_cast<Eigen::Index>(selected[j])] -
                spectrum.eigenvalues[static_cast<Eigen::Index>(selected[j - 1])] <
            1e-10)
            result.degenerate_cluster = true;

    const Eigen::MatrixXd B = moment_form(spectrum, I, s, k_indices, options);
    if (selected.size() <= options.vertex_limit) {
        result.method = MomentMethod::ExactVertex;
        result.value = std::max(0.0, vertex_maximum(B));
    } else {
        result.method = MomentMethod::UpperBound;
        result.value = B.cwiseAbs().sum();
    }
    return result;
}

Eigen::MatrixXd eigenfunction_correlator(const Spectrum& spectrum, const EnergyInterval& I) {
    const auto selected = spectrum.indices_in(I);
    const auto n = static_cast<Eigen::Index>(spectrum.size());
    Eigen::MatrixXd a(n, static_cast<Eigen::Index>(selected.size()));
    for (std::size_t j = 0; j < selected.size(); ++j)
        a.col(static_cast<Eigen::Index>(j)) =
            spectrum.eigenvectors.col(static_cast<Eigen::Index>(selected[j])).cwiseAbs();
    const Eigen::MatrixXd q = a * a.transpose();
    // Blocked products need not be bitwise symmetric.
    return 0.5 * (q + q.transpose());
}

AveragedMoment disorder_averaged_moment(const ModelParams& model, const DisorderSpec& disorder,
                                        const InteractionSpec& interaction, const Rectangle& region,
                                        const EnergyInterval& I, double s,
                                        std::span<const ConfigPoint> K, std::size_t realizations,
                                        std::uint64_t master_seed, std::size_t workers,
                                        const MomentOptions& options) {
    if (realizations < 1)
        throw std::invalid_argument("disorder_averaged_moment: need at least one realization");
    if (region.particles() != model.n || region.dim() != model.d)
        throw std::invalid_argument("disorder_averaged_moment: region does not match (n, d)");
    disorder.validate();
    const auto projection = region.projection();

    AveragedMoment out;
    out.samples = parallel_map(realizations, workers, [&](std::size_t r) {
        const auto realization = sample(disorder, projection, master_seed, r);
        const auto H = build_hamiltonian(region, realization, interaction, model.h);
        auto result = hs_moment(eigensolve(H, model.dense_limit), I, s, K, options);
        result.provenance = realization.provenance();
        return result;
    });

    double sum = 0.0;
    for (const auto& r : out.samples)
        sum += r.value;
    const double count = static_cast<double>(out.samples.size());
    out.mean = sum / count;
    if (out.samples.size() > 1) {
        double ss = 0.0;
        for (const auto& r : out.samples)
            ss += (r.value - out.mean) * (r.value - out.mean);
        out.standard_error = std::sqrt(ss / (count - 1.0) / count);
    }
    return out;
}

}  // namespace anderson
