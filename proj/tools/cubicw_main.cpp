// cubicw: numerical laboratory for the cubic mean-field spin model.
// Deterministic commands reproduce their outputs bit for bit (modulo the
// timestamp header line); sampler commands are deterministic given --seed.

#include <cmath>
#include <cstdint>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cubicw/density.hpp"
#include "cubicw/glauber.hpp"
#include "cubicw/grids.hpp"
#include "cubicw/law.hpp"
#include "cubicw/parallel.hpp"
#include "cubicw/phase.hpp"
#include "cubicw/ratefit.hpp"
#include "cubicw/stein.hpp"
#include "cubicw/version.hpp"
#include "output.hpp"

using namespace cubicw;
using cwtool::Meta;
using cwtool::Sink;
using cwtool::fmt;

namespace {

struct CommonOut {
    std::string out;
    std::string format = "csv";
};

void add_out_options(CLI::App* cmd, CommonOut& o, bool with_format = true) {
    cmd->add_option("--out", o.out, "Output path (default stdout; relative paths land in $CUBICW_OUTDIR)");
    if (with_format) {
        cmd->add_option("--format", o.format, "Output format")
            ->check(CLI::IsMember({"csv", "json"}))
            ->capture_default_str();
    }
}

Rescaling make_rescaling(const std::string& kind, const ModelParams& p, double m) {
    if (kind == "phase") return phase_rescaling(p, m);
    if (kind == "pow34") return power_rescaling(p.n, 0.75);
    if (kind == "variance") return variance_rescaling(p.n, p.J);
    throw CLI::ValidationError("--rescale", "unknown rescaling " + kind);
}

void write_fit_footer(std::ostream& os, const RateFit& fit) {
    os << "# fit: slope=" << fmt(fit.slope) << " intercept=" << fmt(fit.intercept)
       << " r_squared=" << fmt(fit.r_squared) << "\n";
}

nlohmann::json fit_json(const RateFit& fit) {
    return {{"slope", fit.slope}, {"intercept", fit.intercept}, {"r_squared", fit.r_squared}};
}

// ---------------------------------------------------------------- phase ---
struct PhaseArgs {
    double K = 0.0, J = 0.0;
    long grid_points = 100000;
    CommonOut out;
};

int run_phase(const PhaseArgs& a) {
    RootScanOptions scan;
    scan.grid_points = a.grid_points;
    const PhasePortrait pt = analyze_phase({a.K, a.J}, scan);

    Meta meta;
    meta.command = "phase";
    meta.set("K", a.K);
    meta.set("J", a.J);
    meta.set("grid_points", a.grid_points);

    if (a.out.format == "json") {
        nlohmann::json pts = nlohmann::json::array();
        for (const auto& q : pt.stationary_points) {
            pts.push_back({{"m", q.m}, {"phi", q.phi_value}, {"phi_dd", q.phi_dd}, {"kind", to_string(q.kind)}});
        }
        cwtool::write_json(a.out.out, {{"meta", meta.to_json()},
                                       {"phase_label", to_string(pt.phase_label)},
                                       {"inf_phi", pt.inf_phi},
                                       {"stationary_points", pts}});
        return 0;
    }
    Sink sink(a.out.out);
    auto& os = sink.stream();
    meta.write_csv_header(os);
    os << "# phase_label=" << to_string(pt.phase_label) << " inf_phi=" << fmt(pt.inf_phi) << "\n";
    os << "m,phi,phi_dd,kind\n";
    for (const auto& q : pt.stationary_points) {
        os << fmt(q.m) << "," << fmt(q.phi_value) << "," << fmt(q.phi_dd) << "," << to_string(q.kind) << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------- gamma ---
struct GammaArgs {
    std::string k_grid = "0.01:0.5:x2";
    double j_lo = 0.0, j_hi = 1.0 - 1e-9;
    int workers = 0;
    CommonOut out;
};

int run_gamma(const GammaArgs& a) {
    const auto ks = parse_grid(a.k_grid);
    GammaOptions opt;
    opt.j_lo = a.j_lo;
    opt.j_hi = a.j_hi;
    std::vector<GammaCurvePoint> rows(ks.size());
    parallel_for(static_cast<long>(ks.size()), [&](long i) { rows[i] = gamma_of_K(ks[i], opt); }, a.workers);

    Meta meta;
    meta.command = "gamma";
    meta.set("K_grid", a.k_grid);
    meta.set("j_lo", a.j_lo);
    meta.set("j_hi", a.j_hi);

    Sink sink(a.out.out);
    auto& os = sink.stream();
    meta.write_csv_header(os);
    os << "K,J_gamma,m_low,m_high,equal_depth_gap\n";
    for (const auto& r : rows) {
        os << fmt(r.K) << "," << fmt(r.J_gamma) << "," << fmt(r.m_low) << "," << fmt(r.m_high) << ","
           << fmt(r.equal_depth_gap) << "\n";
    }
    return 0;
}

// ------------------------------------------------------------------ law ---
struct LawArgs {
    double K = 0.0, J = 0.0;
    long n = 100;
    double m_lo = -1.0, m_hi = 1.0;
    bool conditioned = false;
    CommonOut out;
};

int run_law(const LawArgs& a) {
    const ModelParams p{a.K, a.J, a.n};
    MagnetizationLaw law = build_law(p);
    if (a.conditioned) law = conditional_law(law, Interval{a.m_lo, a.m_hi});

    Meta meta;
    meta.command = "law";
    meta.set("K", a.K);
    meta.set("J", a.J);
    meta.set("n", a.n);
    if (a.conditioned) {
        meta.set("m_lo", a.m_lo);
        meta.set("m_hi", a.m_hi);
    }

    if (a.out.format == "json") {
        nlohmann::json rows = nlohmann::json::array();
        for (long j = 0; j <= a.n; ++j) {
            rows.push_back({{"s", law.s_of(j)}, {"pmf", law.pmf(j)}, {"cdf", law.cdf_prefix[j]}});
        }
        cwtool::write_json(a.out.out, {{"meta", meta.to_json()}, {"log_Z", law.log_Z}, {"rows", rows}});
        return 0;
    }
    Sink sink(a.out.out);
    auto& os = sink.stream();
    meta.write_csv_header(os);
    os << "s,pmf,cdf\n";
    for (long j = 0; j <= a.n; ++j) {
        os << fmt(law.s_of(j)) << "," << fmt(law.pmf(j)) << "," << fmt(law.cdf_prefix[j]) << "\n";
    }
    return 0;
}

// ------------------------------------------------------------------- be ---
struct BeArgs {
    double K = 0.0, J = 0.0;
    std::string n_grid = "1024:65536:x2";
    std::string target = "normal";
    std::string rescale = "phase";
    double alpha = 0.0;
    int workers = 0;
    CommonOut out;
};

int run_be(const BeArgs& a) {
    const auto ns = parse_n_grid(a.n_grid);

    struct Row {
        long n;
        double d_k, t1, t2, t3, bound;
    };
    std::vector<Row> rows(ns.size());

    parallel_for(static_cast<long>(ns.size()), [&](long i) {
        const ModelParams p{a.K, a.J, ns[i]};
        const MagnetizationLaw law = build_law(p);

        double m = 0.0;
        if (a.rescale == "phase") m = m_star(p.couplings()).m;
        const Rescaling rv = make_rescaling(a.rescale, p, m);

        RegressionDecomposition decomp = RegressionDecomposition::linear_at_phase(p, m);
        std::function<double(double)> cdf = normal_cdf;
        double c_k = 1.0;
        std::shared_ptr<LimitDensity> target;
        if (a.target == "quartic" || a.target == "mixed") {
            target = std::make_shared<LimitDensity>(a.target == "quartic"
                                                        ? LimitDensity::quartic(a.J)
                                                        : LimitDensity::mixed(a.alpha, a.J));
            cdf = [target](double z) { return target->cdf(z); };
            c_k = target->c();
            const double lambda = std::pow(static_cast<double>(ns[i]), -1.5);
            const GSpec g{1, a.target == "mixed" ? -a.alpha : 0.0, a.J * a.J * a.J / 3.0};
            decomp = RegressionDecomposition::cubic(lambda, g);
        } else if (a.rescale == "variance") {
            decomp = RegressionDecomposition::linear((1.0 - a.J) / static_cast<double>(ns[i]));
        }

        const SteinReport rep = be_certificate(law, rv, decomp, cdf, c_k);
        rows[i] = {ns[i], rep.d_k, rep.term_delta2, rep.term_R, rep.term_A, rep.be_bound};
    }, a.workers);

    std::vector<std::pair<double, double>> pairs;
    for (const auto& r : rows) pairs.emplace_back(static_cast<double>(r.n), r.d_k);
    const RateFit fit = fit_power_law(pairs);

    Meta meta;
    meta.command = "be";
    meta.set("K", a.K);
    meta.set("J", a.J);
    meta.set("n_grid", a.n_grid);
    meta.set("target", a.target);
    meta.set("rescale", a.rescale);
    if (a.target == "mixed") meta.set("alpha", a.alpha);

    if (a.out.format == "json") {
        nlohmann::json jrows = nlohmann::json::array();
        for (const auto& r : rows) {
            jrows.push_back({{"n", r.n}, {"K", a.K}, {"J", a.J}, {"dK", r.d_k}, {"bound_term1", r.t1},
                             {"bound_term2", r.t2}, {"bound_term3", r.t3}, {"be_bound", r.bound}});
        }
        cwtool::write_json(a.out.out, {{"meta", meta.to_json()}, {"rows", jrows}, {"fit", fit_json(fit)}});
        return 0;
    }
    Sink sink(a.out.out);
    auto& os = sink.stream();
    meta.write_csv_header(os);
    os << "n,K,J,dK,bound_term1,bound_term2,bound_term3,be_bound\n";
    for (const auto& r : rows) {
        os << r.n << "," << fmt(a.K) << "," << fmt(a.J) << "," << fmt(r.d_k) << "," << fmt(r.t1) << ","
           << fmt(r.t2) << "," << fmt(r.t3) << "," << fmt(r.bound) << "\n";
    }
    write_fit_footer(os, fit);
    return 0;
}

// ------------------------------------------------------------ threshold ---
struct ThresholdArgs {
    int which = 1;
    double alpha = -1.0;
    std::string n_grid = "1024:65536:x2";
    double delta = 0.1;
    double k_exponent = 0.75;
    bool explore_alpha0 = false;
    int workers = 0;
    CommonOut out;
};

int run_threshold(const ThresholdArgs& a) {
    const auto ns = parse_n_grid(a.n_grid);
    Meta meta;
    meta.command = "threshold";
    meta.set("n_grid", a.n_grid);

    Sink sink(a.out.out);
    auto& os = sink.stream();

    if (a.explore_alpha0) {
        meta.set("mode", std::string("explore-alpha0"));
        const auto rows = alpha0_exploration(ns, a.workers);
        meta.write_csv_header(os);
        os << "# non-certified exploratory table: drift 3x + x^3/3 - x^2 is outside the certified family\n";
        os << "n,K_n,m_n,dK_candidate,dK_quartic,dK_normal\n";
        for (const auto& r : rows) {
            os << r.n << "," << fmt(r.K_n) << "," << fmt(r.m_n) << "," << fmt(r.d_k_candidate) << ","
               << fmt(r.d_k_quartic) << "," << fmt(r.d_k_normal) << "\n";
        }
        return 0;
    }

    meta.set("case", static_cast<long>(a.which));
    meta.set("alpha", a.alpha);
    if (a.which == 3 || a.which == 4) meta.set("delta", a.delta);
    if (a.which == 2) meta.set("k_exponent", a.k_exponent);

    const auto res = threshold_experiment(static_cast<ThresholdCase>(a.which), a.alpha, ns, a.delta,
                                          a.k_exponent, a.workers);
    meta.write_csv_header(os);
    os << "n,K_n,J_n,dK,included\n";
    for (const auto& r : res.rows) {
        os << r.n << "," << fmt(r.K_n) << "," << fmt(r.J_n) << "," << fmt(r.d_k) << ","
           << (r.included ? "true" : "false") << "\n";
    }
    if (!res.fit.pairs.empty()) write_fit_footer(os, res.fit);
    return 0;
}

// -------------------------------------------------------- concentration ---
struct ConcentrationArgs {
    double K = 0.0, J = 0.0;
    long n = 1000;
    std::string t_grid = "0:5:0.5";
    bool critical_fit = false;
    CommonOut out;
};

int run_concentration(const ConcentrationArgs& a) {
    const ModelParams p{a.K, a.J, a.n};
    const auto law = build_law(p);
    const auto ts = parse_grid(a.t_grid);

    Meta meta;
    meta.command = "concentration";
    meta.set("K", a.K);
    meta.set("J", a.J);
    meta.set("n", a.n);
    meta.set("t_grid", a.t_grid);

    Sink sink(a.out.out);
    auto& os = sink.stream();
    meta.write_csv_header(os);
    if (a.critical_fit) {
        os << "# critical envelope fit: c solves lhs = 2 exp(-c t^4); reported, not asserted\n";
        os << "t,lhs,c_fit\n";
        for (const auto& r : critical_concentration_fit(law, ts)) {
            os << fmt(r.t) << "," << fmt(r.lhs) << "," << fmt(r.c_fit) << "\n";
        }
    } else {
        os << "t,lhs,rhs,holds\n";
        for (const auto& r : concentration_check(law, ts)) {
            os << fmt(r.t) << "," << fmt(r.lhs) << "," << fmt(r.rhs) << "," << (r.holds ? "true" : "false")
               << "\n";
        }
    }
    return 0;
}

// --------------------------------------------------------------- cramer ---
struct CramerArgs {
    double K = 0.0, J = 0.0;
    std::string n_grid = "1024:65536:x2";
    std::string x_grid;  // empty: 0 .. n^(1/6) step 0.5 per n
    double m_lo = 0.0, m_hi = 0.0;
    bool conditioned = false;
    int workers = 0;
    CommonOut out;
};

int run_cramer(const CramerArgs& a) {
    const auto ns = parse_n_grid(a.n_grid);
    std::vector<std::vector<CramerRow>> rows(ns.size());
    std::optional<Interval> window;
    if (a.conditioned) window = Interval{a.m_lo, a.m_hi};

    parallel_for(static_cast<long>(ns.size()), [&](long i) {
        std::vector<double> xs;
        if (a.x_grid.empty()) {
            for (double x = 0.0; x <= std::pow(static_cast<double>(ns[i]), 1.0 / 6.0); x += 0.5) xs.push_back(x);
        } else {
            xs = parse_grid(a.x_grid);
        }
        rows[i] = cramer_experiment(ModelParams{a.K, a.J, ns[i]}, xs, window);
    }, a.workers);

    Meta meta;
    meta.command = "cramer";
    meta.set("K", a.K);
    meta.set("J", a.J);
    meta.set("n_grid", a.n_grid);
    meta.set("x_grid", a.x_grid.empty() ? std::string("auto") : a.x_grid);
    if (a.conditioned) {
        meta.set("m_lo", a.m_lo);
        meta.set("m_hi", a.m_hi);
    }

    Sink sink(a.out.out);
    auto& os = sink.stream();
    meta.write_csv_header(os);
    os << "n,x,log_p_w,log_p_z,ratio,normalized_residual\n";
    for (std::size_t i = 0; i < ns.size(); ++i) {
        for (const auto& r : rows[i]) {
            os << ns[i] << "," << fmt(r.x) << "," << fmt(r.log_p_w) << "," << fmt(r.log_p_z) << ","
               << fmt(r.ratio) << "," << fmt(r.normalized_residual) << "\n";
        }
    }
    return 0;
}

// ------------------------------------------------------------------ mdp ---
struct MdpArgs {
    double K = 0.0, J = 0.0;
    std::string n_grid = "1024:65536:x2";
    std::string x_grid = "0.5:1.5:0.5";
    double an_exponent = 0.125;
    int workers = 0;
    CommonOut out;
};

int run_mdp(const MdpArgs& a) {
    const auto ns = parse_n_grid(a.n_grid);
    const auto xs = parse_grid(a.x_grid);
    std::vector<std::vector<MdpRow>> rows(ns.size());

    parallel_for(static_cast<long>(ns.size()), [&](long i) {
        const ModelParams p{a.K, a.J, ns[i]};
        const double m = m_star(p.couplings()).m;
        const auto law = build_law(p);
        const double a_n = std::pow(static_cast<double>(ns[i]), a.an_exponent);
        rows[i] = mdp_table(law, phase_rescaling(p, m), a_n, xs);
    }, a.workers);

    Meta meta;
    meta.command = "mdp";
    meta.set("K", a.K);
    meta.set("J", a.J);
    meta.set("n_grid", a.n_grid);
    meta.set("x_grid", a.x_grid);
    meta.set("an_exponent", a.an_exponent);

    Sink sink(a.out.out);
    auto& os = sink.stream();
    meta.write_csv_header(os);
    os << "n,a_n,x,value,limit\n";
    for (std::size_t i = 0; i < ns.size(); ++i) {
        for (const auto& r : rows[i]) {
            os << ns[i] << "," << fmt(r.a_n) << "," << fmt(r.x) << "," << fmt(r.value) << "," << fmt(r.limit)
               << "\n";
        }
    }
    return 0;
}

// ---------------------------------------------------------------- stein ---
struct SteinArgs {
    double K = 0.0, J = 0.0;
    long n = 4096;
    std::string mode = "linear";
    std::string target = "normal";
    std::string rescale = "phase";
    double alpha = 0.0;
    std::string density_table;  // optional (y, pdf, cdf) CSV of the target
    CommonOut out;
};

int run_stein(const SteinArgs& a) {
    const ModelParams p{a.K, a.J, a.n};
    const MagnetizationLaw law = build_law(p);

    double m = 0.0;
    if (a.rescale == "phase") m = m_star(p.couplings()).m;
    const Rescaling rv = make_rescaling(a.rescale, p, m);

    RegressionDecomposition decomp = RegressionDecomposition::linear_at_phase(p, m);
    std::function<double(double)> cdf = normal_cdf;
    double c_k = 1.0;
    std::shared_ptr<LimitDensity> target;
    if (a.target == "quartic" || a.target == "mixed") {
        target = std::make_shared<LimitDensity>(a.target == "quartic" ? LimitDensity::quartic(a.J)
                                                                      : LimitDensity::mixed(a.alpha, a.J));
        cdf = [target](double z) { return target->cdf(z); };
        c_k = target->c();
    }
    if (a.mode == "cubic") {
        const double lambda = std::pow(static_cast<double>(a.n), -1.5);
        decomp = RegressionDecomposition::cubic(
            lambda, GSpec{1, a.target == "mixed" ? -a.alpha : 0.0, a.J * a.J * a.J / 3.0});
    } else if (a.rescale == "variance") {
        decomp = RegressionDecomposition::linear((1.0 - a.J) / static_cast<double>(a.n));
    }

    const SteinReport rep = be_certificate(law, rv, decomp, cdf, c_k);

    if (!a.density_table.empty()) {
        const LimitDensity table_target =
            a.target == "quartic" ? LimitDensity::quartic(a.J)
            : a.target == "mixed" ? LimitDensity::mixed(a.alpha, a.J)
                                  : LimitDensity::gaussian();
        std::ofstream os(cwtool::resolve_out(a.density_table));
        os << "y,pdf,cdf\n";
        const double L = table_target.truncation_radius();
        const double span = std::min(L, 8.0);
        for (int i = 0; i <= 800; ++i) {
            const double y = -span + 2.0 * span * i / 800.0;
            os << fmt(y) << "," << fmt(table_target.pdf(y)) << "," << fmt(table_target.cdf(y)) << "\n";
        }
    }

    Meta meta;
    meta.command = "stein";
    meta.set("K", a.K);
    meta.set("J", a.J);
    meta.set("n", a.n);
    meta.set("mode", a.mode);
    meta.set("target", a.target);
    meta.set("rescale", a.rescale);
    if (a.target == "mixed") meta.set("alpha", a.alpha);

    nlohmann::json curve = nlohmann::json::array();
    for (const auto& q : rep.regression_curve) curve.push_back({{"w", q.w}, {"value", q.value}});
    nlohmann::json nonuni = nlohmann::json::array();
    for (const auto& q : rep.nonuniform) {
        nonuni.push_back({{"z", q.z}, {"abs_diff", q.abs_diff}, {"weighted", q.weighted}});
    }
    cwtool::write_json(a.out.out,
                       {{"meta", meta.to_json()},
                        {"report",
                         {{"m", rep.m},
                          {"lambda", rep.lambda},
                          {"A", rep.A},
                          {"term_delta2", rep.term_delta2},
                          {"term_R", rep.term_R},
                          {"term_A", rep.term_A},
                          {"be_bound", rep.be_bound},
                          {"d_k", rep.d_k},
                          {"e_abs_w", rep.e_abs_w},
                          {"e_w2", rep.e_w2},
                          {"hypothesis_ok", rep.hypothesis_ok}}},
                        {"regression_curve", curve},
                        {"nonuniform", nonuni}});
    return 0;
}

// --------------------------------------------------------------- sample ---
struct SampleArgs {
    double K = 0.0, J = 0.0;
    long n = 100;
    std::uint64_t samples = 10000;
    std::uint64_t seed = 1;
    long long burn_in_sweeps = -1;
    long long thin_steps = -1;
    std::string dump = "none";
    CommonOut out;
};

int run_sample(const SampleArgs& a) {
    const ModelParams p{a.K, a.J, a.n};
    SamplerOptions opt;
    opt.burn_in_sweeps = a.burn_in_sweeps;
    opt.thinning_steps = a.thin_steps;
    opt.keep_trajectory = a.dump != "none";
    const EmpiricalLaw emp = sample_magnetization(p, a.samples, a.seed, opt);
    if (emp.mixing_warning) {
        std::cerr << "warning: integrated autocorrelation " << emp.tau_int_sweeps
                  << " sweeps exceeds the budget; samples may be strongly correlated\n";
    }

    Meta meta;
    meta.command = "sample";
    meta.set("K", a.K);
    meta.set("J", a.J);
    meta.set("n", a.n);
    meta.set("samples", static_cast<long>(a.samples));
    meta.set("seed", static_cast<long>(a.seed));
    meta.set("burn_in_sweeps", static_cast<long>(emp.burn_in_sweeps));
    meta.set("thinning_steps", static_cast<long>(emp.thinning_steps));
    meta.set("rng", std::string("mt19937_64; n init draws, then per step: site index, uniform"));

    if (a.dump != "none") {
        if (a.out.out.empty()) throw CLI::ValidationError("--dump", "trajectory dump requires --out");
        const auto path = cwtool::resolve_out(a.out.out);
        if (a.dump == "csv") {
            std::ofstream os(path);
            meta.write_csv_header(os);
            os << "step,S_n\n";
            for (std::size_t k = 0; k < emp.trajectory.size(); ++k) {
                os << (k + 1) * static_cast<unsigned long long>(emp.thinning_steps) << ","
                   << emp.trajectory[k] << "\n";
            }
        } else {  // bin: little-endian int64 pairs (step, S_n)
            std::ofstream os(path, std::ios::binary);
            for (std::size_t k = 0; k < emp.trajectory.size(); ++k) {
                const std::int64_t rec[2] = {static_cast<std::int64_t>((k + 1) * emp.thinning_steps),
                                             emp.trajectory[k]};
                os.write(reinterpret_cast<const char*>(rec), sizeof(rec));
            }
        }
        nlohmann::json j = meta.to_json();
        j["tau_int_sweeps"] = emp.tau_int_sweeps;
        j["mixing_warning"] = emp.mixing_warning;
        cwtool::write_json(path.string() + ".meta.json", j);
        return 0;
    }

    Sink sink(a.out.out);
    auto& os = sink.stream();
    meta.write_csv_header(os);
    os << "# tau_int_sweeps=" << fmt(emp.tau_int_sweeps)
       << " mixing_warning=" << (emp.mixing_warning ? "true" : "false") << "\n";
    os << "s,pmf\n";
    for (long j = 0; j <= a.n; ++j) {
        os << fmt(2.0 * j - a.n) << "," << fmt(emp.pmf(j)) << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cubicw: exact laws, phase structure, exchangeable-pair certificates and Glauber sampling "
                 "for the cubic mean-field spin model"};
    app.require_subcommand(1);
    app.set_version_flag("--version", cubicw::kVersion);
    app.set_config("--config", "", "Read options from an INI/TOML file (CLI flags win)");

    PhaseArgs phase_args;
    auto* phase_cmd = app.add_subcommand("phase", "Stationary points, phase label and potential depth");
    phase_cmd->add_option("--K", phase_args.K, "Cubic coupling")->required();
    phase_cmd->add_option("--J", phase_args.J, "Quadratic coupling")->required();
    phase_cmd->add_option("--grid-points", phase_args.grid_points, "Root-scan resolution")->capture_default_str();
    add_out_options(phase_cmd, phase_args.out);
    phase_cmd->footer("CSV columns: m, phi, phi_dd, kind");

    GammaArgs gamma_args;
    auto* gamma_cmd = app.add_subcommand("gamma", "Coexistence curve by equal-depth bisection");
    gamma_cmd->add_option("--K-grid", gamma_args.k_grid, "K grid (value | a:b:step | a:b:xF)")->capture_default_str();
    gamma_cmd->add_option("--j-lo", gamma_args.j_lo, "J bracket low end")->capture_default_str();
    gamma_cmd->add_option("--j-hi", gamma_args.j_hi, "J bracket high end")->capture_default_str();
    gamma_cmd->add_option("--workers", gamma_args.workers, "Worker threads (0 = all cores)")->capture_default_str();
    add_out_options(gamma_cmd, gamma_args.out, false);
    gamma_cmd->footer("CSV columns: K, J_gamma, m_low, m_high, equal_depth_gap");

    LawArgs law_args;
    auto* law_cmd = app.add_subcommand("law", "Exact law of the total magnetization");
    law_cmd->add_option("--K", law_args.K)->required();
    law_cmd->add_option("--J", law_args.J)->required();
    law_cmd->add_option("--n", law_args.n, "Number of spins")->required();
    auto* mlo = law_cmd->add_option("--m-lo", law_args.m_lo, "Condition on m >= m-lo");
    auto* mhi = law_cmd->add_option("--m-hi", law_args.m_hi, "Condition on m <= m-hi");
    mlo->needs(mhi);
    mhi->needs(mlo);
    add_out_options(law_cmd, law_args.out);
    law_cmd->footer("CSV columns: s, pmf");

    BeArgs be_args;
    auto* be_cmd = app.add_subcommand("be", "Kolmogorov distance and plug-in bound terms over an n grid");
    be_cmd->add_option("--K", be_args.K)->required();
    be_cmd->add_option("--J", be_args.J)->required();
    be_cmd->add_option("--n-grid", be_args.n_grid)->capture_default_str();
    be_cmd->add_option("--target", be_args.target, "Limit law")->check(CLI::IsMember({"normal", "quartic", "mixed"}))->capture_default_str();
    be_cmd->add_option("--rescale", be_args.rescale, "Rescaling")->check(CLI::IsMember({"phase", "pow34", "variance"}))->capture_default_str();
    be_cmd->add_option("--alpha", be_args.alpha, "Slope for the mixed target");
    be_cmd->add_option("--workers", be_args.workers)->capture_default_str();
    add_out_options(be_cmd, be_args.out);
    be_cmd->footer("CSV columns: n, K, J, dK, bound_term1 (E|1 - E(D^2|W)/(2 lambda)|), bound_term2 (E|R|/(c_k lambda)), bound_term3 (3A), be_bound; footer line holds the log-log fit");

    ThresholdArgs th_args;
    auto* th_cmd = app.add_subcommand("threshold", "Critical-window scalings K_n -> 0 along J = 1 + alpha K_n");
    th_cmd->add_option("--case", th_args.which, "1 mixed | 2 quartic | 3 normal (S_n/sigma) | 4 normal (S_n/n^{3/4})")->check(CLI::Range(1, 4))->capture_default_str();
    th_cmd->add_option("--alpha", th_args.alpha, "Line slope, must be < 0")->capture_default_str();
    th_cmd->add_option("--n-grid", th_args.n_grid)->capture_default_str();
    th_cmd->add_option("--delta", th_args.delta, "Exponent for cases 3 and 4: K_n = n^(-2 delta)")->capture_default_str();
    th_cmd->add_option("--k-exponent", th_args.k_exponent, "Case 2 exponent: K_n = n^(-k)")->capture_default_str();
    th_cmd->add_flag("--explore-alpha0", th_args.explore_alpha0, "Non-certified alpha = 0 exploration, K_n = n^(-1/4)");
    th_cmd->add_option("--workers", th_args.workers)->capture_default_str();
    add_out_options(th_cmd, th_args.out, false);
    th_cmd->footer("CSV columns: n, K_n, J_n, dK, included (false rows had a nonzero phase and were excluded)");

    ConcentrationArgs conc_args;
    auto* conc_cmd = app.add_subcommand("concentration", "Exact check of the magnetization concentration inequality");
    conc_cmd->add_option("--K", conc_args.K)->required();
    conc_cmd->add_option("--J", conc_args.J)->required();
    conc_cmd->add_option("--n", conc_args.n)->capture_default_str();
    conc_cmd->add_option("--t", conc_args.t_grid, "t grid")->capture_default_str();
    conc_cmd->add_flag("--critical-fit", conc_args.critical_fit, "Report the critical quartic envelope constant instead");
    add_out_options(conc_cmd, conc_args.out, false);
    conc_cmd->footer("CSV columns: t, lhs, rhs, holds (or t, lhs, c_fit with --critical-fit)");

    CramerArgs cramer_args;
    auto* cramer_cmd = app.add_subcommand("cramer", "Relative tail errors P(W > x)/P(Z > x)");
    cramer_cmd->add_option("--K", cramer_args.K)->required();
    cramer_cmd->add_option("--J", cramer_args.J)->required();
    cramer_cmd->add_option("--n-grid", cramer_args.n_grid)->capture_default_str();
    cramer_cmd->add_option("--x-grid", cramer_args.x_grid, "x grid (default: 0 to n^(1/6) step 0.5)");
    auto* clo = cramer_cmd->add_option("--m-lo", cramer_args.m_lo, "Condition on m >= m-lo (needed on the coexistence curve)");
    auto* chi = cramer_cmd->add_option("--m-hi", cramer_args.m_hi, "Condition on m <= m-hi");
    clo->needs(chi);
    chi->needs(clo);
    cramer_cmd->add_option("--workers", cramer_args.workers)->capture_default_str();
    add_out_options(cramer_cmd, cramer_args.out, false);
    cramer_cmd->footer("CSV columns: n, x, log_p_w, log_p_z, ratio, normalized_residual (= |ratio-1| sqrt(n)/(1+x^3))");

    MdpArgs mdp_args;
    auto* mdp_cmd = app.add_subcommand("mdp", "Moderate-deviation log-tail rates");
    mdp_cmd->add_option("--K", mdp_args.K)->required();
    mdp_cmd->add_option("--J", mdp_args.J)->required();
    mdp_cmd->add_option("--n-grid", mdp_args.n_grid)->capture_default_str();
    mdp_cmd->add_option("--x-grid", mdp_args.x_grid)->capture_default_str();
    mdp_cmd->add_option("--an-exponent", mdp_args.an_exponent, "a_n = n^exponent")->capture_default_str();
    mdp_cmd->add_option("--workers", mdp_args.workers)->capture_default_str();
    add_out_options(mdp_cmd, mdp_args.out, false);
    mdp_cmd->footer("CSV columns: n, a_n, x, value (= log P(W > a_n x)/a_n^2), limit (= -x^2/2)");

    SteinArgs stein_args;
    auto* stein_cmd = app.add_subcommand("stein", "Full exchangeable-pair report for one system size (JSON)");
    stein_cmd->add_option("--K", stein_args.K)->required();
    stein_cmd->add_option("--J", stein_args.J)->required();
    stein_cmd->add_option("--n", stein_args.n)->capture_default_str();
    stein_cmd->add_option("--mode", stein_args.mode)->check(CLI::IsMember({"linear", "cubic"}))->capture_default_str();
    stein_cmd->add_option("--target", stein_args.target)->check(CLI::IsMember({"normal", "quartic", "mixed"}))->capture_default_str();
    stein_cmd->add_option("--rescale", stein_args.rescale)->check(CLI::IsMember({"phase", "pow34", "variance"}))->capture_default_str();
    stein_cmd->add_option("--alpha", stein_args.alpha);
    stein_cmd->add_option("--density-table", stein_args.density_table,
                          "Also write the target density as CSV (y, pdf, cdf)");
    add_out_options(stein_cmd, stein_args.out, false);

    SampleArgs sample_args;
    auto* sample_cmd = app.add_subcommand("sample", "Heat-bath Glauber sampling of the magnetization");
    sample_cmd->add_option("--K", sample_args.K)->required();
    sample_cmd->add_option("--J", sample_args.J)->required();
    sample_cmd->add_option("--n", sample_args.n)->required();
    sample_cmd->add_option("--samples", sample_args.samples)->capture_default_str();
    sample_cmd->add_option("--seed", sample_args.seed)->capture_default_str();
    sample_cmd->add_option("--burn-in-sweeps", sample_args.burn_in_sweeps, "Default 100 n sweeps")->capture_default_str();
    sample_cmd->add_option("--thin-steps", sample_args.thin_steps, "Default n steps")->capture_default_str();
    sample_cmd->add_option("--dump", sample_args.dump, "Trajectory dump format")->check(CLI::IsMember({"none", "csv", "bin"}))->capture_default_str();
    add_out_options(sample_cmd, sample_args.out, false);
    sample_cmd->footer("Default output: empirical pmf CSV (s, pmf); --dump writes (step, S_n) plus a .meta.json sidecar");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (phase_cmd->parsed()) return run_phase(phase_args);
        if (gamma_cmd->parsed()) return run_gamma(gamma_args);
        if (law_cmd->parsed()) {
            law_args.conditioned = mlo->count() > 0;
            return run_law(law_args);
        }
        if (be_cmd->parsed()) return run_be(be_args);
        if (th_cmd->parsed()) return run_threshold(th_args);
        if (conc_cmd->parsed()) return run_concentration(conc_args);
        if (cramer_cmd->parsed()) {
            cramer_args.conditioned = clo->count() > 0;
            return run_cramer(cramer_args);
        }
        if (mdp_cmd->parsed()) return run_mdp(mdp_args);
        if (stein_cmd->parsed()) return run_stein(stein_args);
        if (sample_cmd->parsed()) return run_sample(sample_args);
        std::cerr << "no subcommand\n";
        return 2;
    } catch (const CoexistenceError& e) {
        std::cerr << "error: " << e.what() << "\n"
                  << "hint: pass a conditioning window (--m-lo/--m-hi) selecting one phase\n";
        return 3;
    } catch (const CriticalPointError& e) {
        std::cerr << "error: " << e.what() << "\n"
                  << "hint: use --rescale pow34 with a quartic or mixed target at the critical point\n";
        return 3;
    } catch (const BracketError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const NoCoexistenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const IntegrabilityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
