#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "anderson/disorder.hpp"
#include "anderson/geometry.hpp"
#include "anderson/hamiltonian.hpp"
#include "anderson/spectral.hpp"

namespace anderson {

enum class MsaMode { MonteCarlo, ExactBernoulli };

const char* to_string(MsaMode mode);

struct MsaParams {
    int N = 1;
    int n = 1;
    int d = 1;
    double m = 0.5;
    double p = 7.0;  ///< reported against p > 6Nd, not enforced
    double h = 0.0;
    EnergyInterval interval{0.0, 1.0};
    double grid_step = 1e-3;
    std::vector<int> L_values;
    std::size_t realizations = 1;
    MsaMode mode = MsaMode::MonteCarlo;
    std::uint64_t master_seed = 0;
    std::size_t workers = 1;
    std::size_t dense_limit = kDefaultDenseLimit;
    std::size_t exact_site_limit = 20;

    void validate() const;
};

struct PairEstimate {
    int L = 0;
    double estimate = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double target = 0.0;  ///< L^{-2p 4^{N-n}}
    std::size_t samples_used = 0;
    std::size_t energy_points_used = 0;  ///< probe energies summed over samples
    MsaMode mode = MsaMode::MonteCarlo;
};

class NonSeparablePair : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// [L0, ceil(L0^alpha), ...], strictly increasing.
std::vector<int> scale_sequence(int L0, int count, double alpha = 1.5);

/// L^{-2p 4^{N-n}}.
double msa_target(int L, double p, int N, int n);

struct WilsonInterval {
    double low;
    double high;
};

/// Wilson score interval for `successes` out of `trials` at z standard
/// deviations.
WilsonInterval wilson_interval(std::size_t successes, std::size_t trials, double z = 1.959963984540054);

/// Uniform grid lo, lo + step, ... over the interval. Halving the step
/// yields a superset of the points.
std::vector<double> energy_grid(const EnergyInterval& I, double step);

struct PairEvent {
    bool both_singular = false;
    std::size_t energy_points = 0;
};

/// Whether some probe energy in I makes both cubes C_L(u) and C_L(v)
/// (E, m)-singular under one realization. Probes are the uniform grid plus
/// every eigenvalue of either cube that lies in I.
PairEvent pair_singular_event(const ConfigPoint& u, const ConfigPoint& v, int L,
                              const MsaParams& params, const InteractionSpec& interaction,
                              const DisorderRealization& realization);

/// Probability of the pair event: Monte Carlo over `params.realizations`
/// counter-seeded samples, or exact enumeration for Bernoulli disorder.
PairEstimate estimate_pair_probability(const ConfigPoint& u, const ConfigPoint& v, int L,
                                       const MsaParams& params, const DisorderSpec& disorder,
                                       const InteractionSpec& interaction);

/// Canonical separable pair for scale L: the origin and the origin shifted
/// by 7NL + 1 along the first axis.
std::pair<ConfigPoint, ConfigPoint> canonical_pair(int n, int d, int L, int N);

std::vector<PairEstimate> msa_report(const MsaParams& params, const DisorderSpec& disorder,
                                     const InteractionSpec& interaction);

/// CSV with a '#' header: L,n,N,estimate,ci_low,ci_high,target,samples,energy_points,seed
void write_msa_csv(std::ostream& os, const MsaParams& params, const std::vector<PairEstimate>& rows);

}  // namespace anderson
