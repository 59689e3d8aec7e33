#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "anderson/geometry.hpp"

namespace anderson {

enum class DisorderKind { Bernoulli, FiniteDiscrete, Uniform };

/// Single-site distribution of the i.i.d. external potential, scaled by
/// `amplitude`.
///
/// Bernoulli and FiniteDiscrete keep their atoms in `values` (ascending for
/// Bernoulli) with weights in `probabilities`. Uniform keeps the interval
/// endpoints in `values` and leaves `probabilities` empty.
struct DisorderSpec {
    DisorderKind kind = DisorderKind::Bernoulli;
    std::vector<double> values{0.0, 1.0};
    std::vector<double> probabilities{0.5, 0.5};
    double amplitude = 1.0;

    /// Two atoms a < b, with P(b) = q.
    static DisorderSpec bernoulli(double a, double b, double q, double amplitude = 1.0);
    static DisorderSpec finite_discrete(std::vector<double> values, std::vector<double> probabilities,
                                        double amplitude = 1.0);
    static DisorderSpec uniform(double a, double b, double amplitude = 1.0);

    /// Throws std::invalid_argument when the base measure is not a bounded
    /// probability measure with at least two support points.
    void validate() const;

    /// Scaled inverse CDF at u in [0, 1).
    double quantile(double u) const;

    double support_min() const;
    double support_max() const;
    double bernoulli_q() const { return probabilities.at(1); }

    friend bool operator==(const DisorderSpec&, const DisorderSpec&) = default;
};

const char* to_string(DisorderKind kind);

struct AssumptionPReport {
    double M = 0.0;                    ///< supp mu lies in [-M, M]
    std::size_t support_points = 0;    ///< 0 means a continuum
    bool contains_zero = false;
    bool moment_condition = true;      ///< automatic for bounded measures
    std::vector<std::string> violations;
    std::vector<std::string> warnings;

    bool passed() const { return violations.empty(); }
};

/// Checks boundedness, non-degeneracy and the moment condition of the scaled
/// single-site measure. Never throws; problems are listed in the report.
AssumptionPReport validate_assumption_P(const DisorderSpec& spec);

/// Counter-based uniform variate in [0, 1) for (seed, index, site).
double site_uniform(std::uint64_t master_seed, std::uint64_t realization_index,
                    std::span<const int> site);

/// Lexicographic order on sites, comparable across vectors and spans.
struct SiteLess {
    using is_transparent = void;
    template <class A, class B>
    bool operator()(const A& a, const B& b) const {
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    }
};

using SiteField = std::map<Site, double, SiteLess>;

/// One sample omega of the potential on a finite set of single-particle sites.
class DisorderRealization {
public:
    struct Provenance {
        std::uint64_t master_seed;
        std::uint64_t realization_index;
        friend bool operator==(const Provenance&, const Provenance&) = default;
    };

    DisorderRealization() = default;
    explicit DisorderRealization(SiteField values,
                                 std::optional<Provenance> provenance = std::nullopt);

    /// V(site); throws std::out_of_range outside the region.
    double at(std::span<const int> site) const;
    bool covers(std::span<const int> site) const;

    std::vector<Site> region() const;
    const SiteField& values() const { return values_; }
    const std::optional<Provenance>& provenance() const { return provenance_; }

private:
    SiteField values_;
    std::optional<Provenance> provenance_;
};

/// Draws V on `region`. The value at a site depends only on
/// (spec, master_seed, realization_index, site).
DisorderRealization sample(const DisorderSpec& spec, std::span<const Site> region,
                           std::uint64_t master_seed, std::uint64_t realization_index);

/// sum_j V(x_j): every particle reads the same single-particle field.
double multi_particle_potential(const DisorderRealization& realization, const ConfigPoint& x);

}  // namespace anderson
