#include "anderson/msa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "anderson/io.hpp"
#include "anderson/parallel.hpp"

namespace anderson {

const char* to_string(MsaMode mode) {
    switch (mode) {
    case MsaMode::MonteCarlo: return "monte_carlo";
    case MsaMode::ExactBernoulli: return "exact_bernoulli";
    }
    return "unknown";
}

void MsaParams::validate() const {
    if (N < 1 || n < 1 || n > N)
        throw std::invalid_argument("msa: need 1 <= n <= N");
    if (d < 1)
        throw std::invalid_argument("msa: d must be >= 1");
    if (!(m > 0.0))
        throw std::invalid_argument("msa: m must be positive");
    if (!(interval.lo <= interval.hi))
        throw std::invalid_argument("msa: need E_lo <= E_hi");
    if (!(grid_step > 0.0))
        throw std::invalid_argument("msa: grid step must be positive");
    if (realizations < 1)
        throw std::invalid_argument("msa: realizations must be >= 1");
    for (int L : L_values)
        if (L < 1)
            throw std::invalid_argument("msa: scales must be >= 1");
}

std::vector<int> scale_sequence(int L0, int count, double alpha) {
    if (L0 < 2)
        throw std::domain_error("scale_sequence: L0 must be >= 2");
    if (count < 1)
        throw std::domain_error("scale_sequence: count must be >= 1");
    if (!(alpha > 1.0))
        throw std::domain_error("scale_sequence: alpha must exceed 1");
    std::vector<int> out{L0};
    for (int k = 1; k < count; ++k) {
        const double next = std::pow(static_cast<double>(out.back()), alpha);
        // Exact integer powers such as 4^{3/2} must not be pushed up by rounding.
        const double nearest = std::round(next);
        const double ceiled = std::abs(next - nearest) <= 1e-9 * next ? nearest : std::ceil(next);
        if (ceiled > static_cast<double>(std::numeric_limits<int>::max()))
            throw std::overflow_error("scale_sequence: scale exceeds int range");
        out.push_back(std::max(out.back() + 1, static_cast<int>(ceiled)));
    }
    return out;
}

double msa_target(int L, double p, int N, int n) {
    return std::pow(static_cast<double>(L), -2.0 * p * std::pow(4.0, N - n));
}

WilsonInterval wilson_interval(std::size_t successes, std::size_t trials, double z) {
    if (trials == 0)
        return {0.0, 1.0};
    const double nt = static_cast<double>(trials);
    const double phat = static_cast<double>(successes) / nt;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nt;
    const double center = (phat + z2 / (2.0 * nt)) / denom;
    const double half = z * std::sqrt(phat * (1.0 - phat) / nt + z2 / (4.0 * nt * nt)) / denom;
    return {std::max(0.0, std::min(center - half, phat)), std::min(1.0, std::max(center + half, phat))};
}

std::vector<double> energy_grid(const EnergyInterval& I, double step) {
    if (!(step > 0.0))
        throw std::invalid_argument("energy_grid: step must be positive");
    std::vector<double> out;
    const auto count = static_cast<std::size_t>(std::floor((I.hi - I.lo) / step + 1e-9));
    out.reserve(count + 1);
    for (std::size_t k = 0; k <= count; ++k) {
        const double E = I.lo + static_cast<double>(k) * step;
        if (E <= I.hi)
            out.push_back(E);
    }
    return out;
}

namespace {

void check_pair(const ConfigPoint& u, const ConfigPoint& v, int L, const MsaParams& params) {
    if (u.particles() != params.n || u.dim() != params.d || v.particles() != params.n ||
        v.dim() != params.d)
        throw std::invalid_argument("msa: cube centers do not match (n, d) of the parameters");
    if (!is_separable_pair(u, v, L, params.N)) {
        std::ostringstream msg;
        msg << "cubes of radius " << L << " are not a separable pair";
        throw NonSeparablePair(msg.str());
    }
}

std::vector<Site> pair_region(const ConfigPoint& u, const ConfigPoint& v, int L) {
    auto sites = Rectangle(Cube(u, L)).projection();
    const auto other = Rectangle(Cube(v, L)).projection();
    sites.insert(sites.end(), other.begin(), other.end());
    std::sort(sites.begin(), sites.end());
    sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
    return sites;
}

}  // namespace

PairEvent pair_singular_event(const ConfigPoint& u, const ConfigPoint& v, int L,
                              const MsaParams& params, const InteractionSpec& interaction,
                              const DisorderRealization& realization) {
    check_pair(u, v, L, params);
    const Cube cube_u(u, L);
    const Cube cube_v(v, L);
    const CubeClassifier first(cube_u, build_hamiltonian(cube_u, realization, interaction, params.h),
                               params.m, params.N, params.dense_limit);
    const CubeClassifier second(cube_v, build_hamiltonian(cube_v, realization, interaction, params.h),
                                params.m, params.N, params.dense_limit);

    std::vector<double> probes = energy_grid(params.interval, params.grid_step);
    for (const auto* c : {&first, &second})
        for (double E : c->eigenvalues())
            if (params.interval.contains(E))
                probes.push_back(E);

    PairEvent event;
    event.energy_points = probes.size();
    for (double E : probes) {
        if (first.classify(E).nonsingular)
            continue;
        if (!second.classify(E).nonsingular) {
            event.both_singular = true;
            break;
        }
    }
    return event;
}

PairEstimate estimate_pair_probability(const ConfigPoint& u, const ConfigPoint& v, int L,
                                       const MsaParams& params, const DisorderSpec& disorder,
                                       const InteractionSpec& interaction) {
    params.validate();
    disorder.validate();
    check_pair(u, v, L, params);
    const auto region = pair_region(u, v, L);

    PairEstimate out;
    out.L = L;
    out.mode = params.mode;
    out.target = msa_target(L, params.p, params.N, params.n);

    if (params.mode == MsaMode::MonteCarlo) {
        const auto events = parallel_map(params.realizations, params.workers, [&](std::size_t r) {
            const auto realization = sample(disorder, region, params.master_seed, r);
            return pair_singular_event(u, v, L, params, interaction, realization);
        });
        std::size_t hits = 0;
        for (const auto& e : events) {
            hits += e.both_singular ? 1 : 0;
            out.energy_points_used += e.energy_points;
        }
        out.samples_used = events.size();
        out.estimate = static_cast<double>(hits) / static_cast<double>(out.samples_used);
        const auto ci = wilson_interval(hits, out.samples_used);
        out.ci_low = ci.low;
        out.ci_high = ci.high;
        return out;
    }

    if (disorder.kind != DisorderKind::Bernoulli)
        throw std::invalid_argument("exact enumeration requires Bernoulli disorder");
    if (region.size() > params.exact_site_limit)
        throw SizeLimitExceeded("exact enumeration over " + std::to_string(region.size()) +
                                " sites exceeds the limit of " +
                                std::to_string(params.exact_site_limit));

    const std::size_t configurations = std::size_t{1} << region.size();
    const double low = disorder.amplitude * disorder.values[0];
    const double high = disorder.amplitude * disorder.values[1];
    const double q = disorder.bernoulli_q();
    struct Weighted {
        double weight;
        PairEvent event;
    };
    const auto results = parallel_map(configurations, params.workers, [&](std::size_t mask) {
        SiteField values;
        double weight = 1.0;
        for (std::size_t s = 0; s < region.size(); ++s) {
            const bool up = (mask >> s) & 1u;
            values.emplace(region[s], up ? high : low);
            weight *= up ? q : 1.0 - q;
        }
        const DisorderRealization realization(std::move(values));
        return Weighted{weight, pair_singular_event(u, v, L, params, interaction, realization)};
    });
    double mass = 0.0;
    double probability = 0.0;
    for (const auto& w : results) {
        mass += w.weight;
        if (w.event.both_singular)
            probability += w.weight;
        out.energy_points_used += w.event.energy_points;
    }
    if (std::abs(mass - 1.0) > 1e-12)
        throw std::logic_error("exact enumeration mass deviates from 1");
    out.samples_used = configurations;
    out.estimate = std::clamp(probability, 0.0, 1.0);
    out.ci_low = out.estimate;
    out.ci_high = out.estimate;
    return out;
}

std::pair<ConfigPoint, ConfigPoint> canonical_pair(int n, int d, int L, int N) {
    const auto u = ConfigPoint::origin(n, d);
    return {u, u.shifted(0, 7 * N * L + 1)};
}

std::vector<PairEstimate> msa_report(const MsaParams& params, const DisorderSpec& disorder,
                                     const InteractionSpec& interaction) {
    params.validate();
    std::vector<PairEstimate> rows;
    for (int L : params.L_values) {
        const auto [u, v] = canonical_pair(params.n, params.d, L, params.N);
        rows.push_back(estimate_pair_probability(u, v, L, params, disorder, interaction));
    }
    return rows;
}

void write_msa_csv(std::ostream& os, const MsaParams& params, const std::vector<PairEstimate>& rows) {
    os << "# L,n,N,estimate,ci_low,ci_high,target,samples,energy_points,seed\n";
    for (const auto& r : rows)
        os << r.L << ',' << params.n << ',' << params.N << ',' << format_double(r.estimate) << ','
           << format_double(r.ci_low) << ',' << format_double(r.ci_high) << ','
           << format_double(r.target) << ',' << r.samples_used << ',' << r.energy_points_used << ','
           << params.master_seed << '\n';
}

}  // namespace anderson
