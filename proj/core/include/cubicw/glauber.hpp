#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "cubicw/law.hpp"
#include "cubicw/model.hpp"

namespace cubicw {

/// Single heat-bath chain over spin configurations. One step resamples one
/// uniformly chosen spin from its exact conditional law, so S_n changes by
/// 0 or +-2 per step. The running sum is maintained incrementally.
///
/// RNG stream (mt19937_64 seeded once): n draws initialize the spins, then
/// each step consumes exactly two draws, site index first, acceptance
/// uniform second.
struct ChainState {
    ModelParams params;
    std::vector<std::int8_t> spins;
    long long s_cache = 0;
    std::mt19937_64 rng;
    std::uint64_t step_count = 0;
};

ChainState make_chain(const ModelParams& p, std::uint64_t seed);

/// P(spin -> +1 | rest) for leave-one-out magnetization m_i.
double heat_bath_p_up(double m_i, const ModelParams& p);

void heat_bath_step(ChainState& st);

struct EmpiricalLaw {
    ModelParams params;
    std::vector<std::uint64_t> counts;  // index j, s = 2j - n
    std::uint64_t n_samples = 0;
    std::uint64_t seed = 0;
    long long burn_in_sweeps = 0;
    long long thinning_steps = 0;
    double tau_int_sweeps = 0.0;  // integrated autocorrelation of S_n
    bool mixing_warning = false;
    std::vector<long long> trajectory;  // S_n per record, when requested

    double pmf(long j) const { return static_cast<double>(counts[j]) / static_cast<double>(n_samples); }
    double mean_s() const;
};

struct SamplerOptions {
    long long burn_in_sweeps = -1;   // default 100 n sweeps
    long long thinning_steps = -1;   // default n steps (one sweep)
    double tau_budget_sweeps = 50.0; // warn when tau_int exceeds this
    bool keep_trajectory = false;
};

/// Deterministic given the seed. Near the coexistence curve or the critical
/// point the chain is metastable; the warning flag reports a blown
/// autocorrelation budget instead of silently returning poor samples.
EmpiricalLaw sample_magnetization(const ModelParams& p, std::uint64_t n_samples, std::uint64_t seed,
                                  const SamplerOptions& opt = {});

/// sup_s |F_empirical - F_exact| over the support.
double ks_distance(const EmpiricalLaw& emp, const MagnetizationLaw& law);

}  // namespace cubicw
