#include "cubicw/glauber.hpp"

#include <cassert>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cubicw {

namespace {

inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

ChainState make_chain(const ModelParams& p, std::uint64_t seed) {
    validate(p);
    ChainState st;
    st.params = p;
    st.rng.seed(seed);
    st.spins.resize(p.n);
    long long s = 0;
    for (long i = 0; i < p.n; ++i) {
        st.spins[i] = uniform01(st.rng) < 0.5 ? std::int8_t{1} : std::int8_t{-1};
        s += st.spins[i];
    }
    st.s_cache = s;
    return st;
}

double heat_bath_p_up(double m_i, const ModelParams& p) {
    const double n = static_cast<double>(p.n);
    const double u = p.J * m_i + p.K * m_i * m_i + p.K / (3.0 * n * n);
    return 1.0 / (1.0 + std::exp(-2.0 * u));
}

void heat_bath_step(ChainState& st) {
    const long n = st.params.n;
    const long i = static_cast<long>(st.rng() % static_cast<std::uint64_t>(n));
    const double m_i = static_cast<double>(st.s_cache - st.spins[i]) / static_cast<double>(n);
    const std::int8_t fresh = uniform01(st.rng) < heat_bath_p_up(m_i, st.params) ? std::int8_t{1} : std::int8_t{-1};
    st.s_cache += fresh - st.spins[i];
    st.spins[i] = fresh;
    ++st.step_count;
#ifndef NDEBUG
    if (st.step_count % 10000 == 0) {
        long long s = 0;
        for (auto v : st.spins) s += v;
        assert(s == st.s_cache && "incremental magnetization cache diverged");
    }
#endif
}

double EmpiricalLaw::mean_s() const {
    double acc = 0.0;
    for (std::size_t j = 0; j < counts.size(); ++j) {
        acc += static_cast<double>(counts[j]) * (2.0 * static_cast<double>(j) - static_cast<double>(params.n));
    }
    return acc / static_cast<double>(n_samples);
}

namespace {

// Integrated autocorrelation time of the recorded series, in units of the
// recording interval; window closed at the first nonpositive estimate.
double integrated_autocorrelation(const std::vector<double>& x) {
    const std::size_t N = x.size();
    if (N < 16) return 1.0;
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(N);
    double var = 0.0;
    for (double v : x) var += (v - mean) * (v - mean);
    var /= static_cast<double>(N);
    if (var == 0.0) return 1.0;
    double tau = 1.0;
    const std::size_t kmax = std::min<std::size_t>(N / 4, 2048);
    for (std::size_t k = 1; k <= kmax; ++k) {
        double c = 0.0;
        for (std::size_t t = 0; t + k < N; ++t) c += (x[t] - mean) * (x[t + k] - mean);
        c /= static_cast<double>(N - k) * var;
        if (c <= 0.0) break;
        tau += 2.0 * c;
    }
    return tau;
}

}  // namespace

EmpiricalLaw sample_magnetization(const ModelParams& p, std::uint64_t n_samples, std::uint64_t seed,
                                  const SamplerOptions& opt) {
    if (n_samples < 1) throw std::invalid_argument("sample_magnetization: n_samples >= 1 required");
    const long n = p.n;
    const long long burn_sweeps = opt.burn_in_sweeps >= 0 ? opt.burn_in_sweeps : 100LL * n;
    const long long thin = opt.thinning_steps >= 0 ? opt.thinning_steps : n;
    if (thin < 1) throw std::invalid_argument("sample_magnetization: thinning must be >= 1 step");

    ChainState st = make_chain(p, seed);
    const long long burn_steps = burn_sweeps * n;
    for (long long t = 0; t < burn_steps; ++t) heat_bath_step(st);

    EmpiricalLaw out;
    out.params = p;
    out.counts.assign(n + 1, 0);
    out.n_samples = n_samples;
    out.seed = seed;
    out.burn_in_sweeps = burn_sweeps;
    out.thinning_steps = thin;

    if (opt.keep_trajectory) out.trajectory.reserve(n_samples);
    std::vector<double> series;
    series.reserve(std::min<std::uint64_t>(n_samples, 1 << 16));
    for (std::uint64_t k = 0; k < n_samples; ++k) {
        for (long long t = 0; t < thin; ++t) heat_bath_step(st);
        const long j = static_cast<long>((st.s_cache + n) / 2);
        ++out.counts[j];
        if (opt.keep_trajectory) out.trajectory.push_back(st.s_cache);
        if (series.size() < series.capacity()) series.push_back(static_cast<double>(st.s_cache));
    }

    const double tau_records = integrated_autocorrelation(series);
    out.tau_int_sweeps = tau_records * static_cast<double>(thin) / static_cast<double>(n);
    out.mixing_warning = out.tau_int_sweeps > opt.tau_budget_sweeps;
    return out;
}

double ks_distance(const EmpiricalLaw& emp, const MagnetizationLaw& law) {
    if (emp.params.n != law.params.n) throw std::invalid_argument("ks_distance: size mismatch");
    double sup = 0.0;
    double fe = 0.0;
    for (long j = 0; j < law.size(); ++j) {
        fe += emp.pmf(j);
        sup = std::max(sup, std::fabs(fe - law.cdf_prefix[j]));
    }
    return sup;
}

}  // namespace cubicw
