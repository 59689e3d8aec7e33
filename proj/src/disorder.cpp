#include "anderson/disorder.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace anderson {

DisorderSpec DisorderSpec::bernoulli(double a, double b, double q, double amplitude) {
    return DisorderSpec{DisorderKind::Bernoulli, {a, b}, {1.0 - q, q}, amplitude};
}

DisorderSpec DisorderSpec::finite_discrete(std::vector<double> values,
                                           std::vector<double> probabilities, double amplitude) {
    return DisorderSpec{DisorderKind::FiniteDiscrete, std::move(values), std::move(probabilities),
                        amplitude};
}

DisorderSpec DisorderSpec::uniform(double a, double b, double amplitude) {
    return DisorderSpec{DisorderKind::Uniform, {a, b}, {}, amplitude};
}

const char* to_string(DisorderKind kind) {
    switch (kind) {
    case DisorderKind::Bernoulli: return "bernoulli";
    case DisorderKind::FiniteDiscrete: return "finite_discrete";
    case DisorderKind::Uniform: return "uniform";
    }
    return "unknown";
}

void DisorderSpec::validate() const {
    if (!std::isfinite(amplitude) || amplitude < 0.0)
        throw std::invalid_argument("disorder amplitude must be finite and >= 0");
    for (double v : values)
        if (!std::isfinite(v))
            throw std::invalid_argument("disorder support must be bounded (finite values)");

    if (kind == DisorderKind::Uniform) {
        if (values.size() != 2 || !probabilities.empty())
            throw std::invalid_argument("uniform disorder takes an interval [a, b]");
        if (!(values[0] < values[1]))
            throw std::invalid_argument("uniform disorder needs a < b (single-point support)");
        return;
    }

    if (values.size() != probabilities.size())
        throw std::invalid_argument("disorder values and probabilities differ in length");
    if (kind == DisorderKind::Bernoulli) {
        if (values.size() != 2)
            throw std::invalid_argument("Bernoulli disorder takes exactly two values");
        if (!(values[0] < values[1]))
            throw std::invalid_argument("Bernoulli disorder needs a < b");
    }
    for (double p : probabilities)
        if (!(p >= 0.0 && p <= 1.0))
            throw std::invalid_argument("disorder probabilities must lie in [0, 1]");
    const double total = std::accumulate(probabilities.begin(), probabilities.end(), 0.0);
    if (std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument("disorder probabilities must sum to 1");

    std::vector<double> atoms;
    for (std::size_t i = 0; i < values.size(); ++i)
        if (probabilities[i] > 0.0)
            atoms.push_back(values[i]);
    std::sort(atoms.begin(), atoms.end());
    atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
    if (atoms.size() < 2)
        throw std::invalid_argument("disorder measure is concentrated in a single point");
}

double DisorderSpec::quantile(double u) const {
    if (kind == DisorderKind::Uniform)
        return amplitude * (values[0] + u * (values[1] - values[0]));
    if (kind == DisorderKind::Bernoulli)
        return amplitude * (u < probabilities[1] ? values[1] : values[0]);
    double cumulative = 0.0;
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        cumulative += probabilities[i];
        if (u < cumulative)
            return amplitude * values[i];
    }
    return amplitude * values.back();
}

double DisorderSpec::support_min() const {
    if (kind == DisorderKind::Uniform)
        return amplitude * values[0];
    double lo = 0.0;
    bool first = true;
    for (std::size_t i = 0; i < values.size(); ++i)
        if (probabilities[i] > 0.0 && (first || values[i] < lo)) {
            lo = values[i];
            first = false;
        }
    return amplitude * lo;
}

double DisorderSpec::support_max() const {
    if (kind == DisorderKind::Uniform)
        return amplitude * values[1];
    double hi = 0.0;
    bool first = true;
    for (std::size_t i = 0; i < values.size(); ++i)
        if (probabilities[i] > 0.0 && (first || values[i] > hi)) {
            hi = values[i];
            first = false;
        }
    return amplitude * hi;
}

AssumptionPReport validate_assumption_P(const DisorderSpec& spec) {
    AssumptionPReport report;
    try {
        spec.validate();
    } catch (const std::invalid_argument& e) {
        report.violations.emplace_back(e.what());
        return report;
    }

    const double lo = spec.support_min();
    const double hi = spec.support_max();
    report.M = std::max(std::abs(lo), std::abs(hi));
    report.contains_zero = lo <= 0.0 && hi >= 0.0;
    if (spec.kind == DisorderKind::Uniform) {
        report.support_points = 0;
    } else {
        std::vector<double> atoms;
        for (std::size_t i = 0; i < spec.values.size(); ++i)
            if (spec.probabilities[i] > 0.0)
                atoms.push_back(spec.amplitude * spec.values[i]);
        std::sort(atoms.begin(), atoms.end());
        atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
        report.support_points = atoms.size();
        report.contains_zero = std::find(atoms.begin(), atoms.end(), 0.0) != atoms.end();
    }

    if (spec.amplitude == 0.0 || (report.support_points == 1))
        report.violations.emplace_back("scaled measure is concentrated in a single point");
    if (!report.contains_zero) {
        std::ostringstream msg;
        msg << "0 is not in the support [" << lo << ", " << hi << "]; values are not translated";
        report.warnings.push_back(msg.str());
    }
    return report;
}

namespace {

std::uint64_t mix64(std::uint64_t z) {
    // splitmix64 finalizer
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

double site_uniform(std::uint64_t master_seed, std::uint64_t realization_index,
                    std::span<const int> site) {
    std::uint64_t h = mix64(master_seed ^ 0x6a09e667f3bcc908ULL);
    h = mix64(h ^ realization_index);
    h = mix64(h ^ static_cast<std::uint64_t>(site.size()));
    for (int c : site)
        h = mix64(h ^ static_cast<std::uint64_t>(static_cast<std::int64_t>(c)));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

DisorderRealization::DisorderRealization(SiteField values, std::optional<Provenance> provenance)
    : values_(std::move(values)), provenance_(provenance) {}

double DisorderRealization::at(std::span<const int> site) const {
    const auto it = values_.find(site);
    if (it == values_.end()) {
        std::ostringstream msg;
        msg << "site (";
        for (std::size_t i = 0; i < site.size(); ++i)
            msg << (i ? "," : "") << site[i];
        msg << ") is outside the disorder realization";
        throw std::out_of_range(msg.str());
    }
    return it->second;
}

bool DisorderRealization::covers(std::span<const int> site) const {
    return values_.find(site) != values_.end();
}

std::vector<Site> DisorderRealization::region() const {
    std::vector<Site> out;
    out.reserve(values_.size());
    for (const auto& [site, v] : values_)
        out.push_back(site);
    return out;
}

DisorderRealization sample(const DisorderSpec& spec, std::span<const Site> region,
                           std::uint64_t master_seed, std::uint64_t realization_index) {
    spec.validate();
    if (region.empty())
        throw std::invalid_argument("sample: empty region");
    SiteField values;
    for (const auto& site : region)
        values.emplace(site, spec.quantile(site_uniform(master_seed, realization_index, site)));
    return DisorderRealization(std::move(values),
                               DisorderRealization::Provenance{master_seed, realization_index});
}

double multi_particle_potential(const DisorderRealization& realization, const ConfigPoint& x) {
    double total = 0.0;
    for (int j = 0; j < x.particles(); ++j)
        total += realization.at(x.particle(j));
    return total;
}

}  // namespace anderson
