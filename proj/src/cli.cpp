#include "hmmlyap/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hmmlyap/bounds.hpp"
#include "hmmlyap/cocycle.hpp"
#include "hmmlyap/io.hpp"
#include "hmmlyap/memloss.hpp"
#include "hmmlyap/model.hpp"
#include "hmmlyap/perturb.hpp"
#include "hmmlyap/rng.hpp"
#include "hmmlyap/simulate.hpp"

namespace hmmlyap {

namespace {

using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    std::string model_path;
    std::uint64_t seed = 0;
    CLI::Option* seed_opt = nullptr;
};

void add_common(CLI::App* cmd, CommonArgs& c) {
    cmd->add_option("--config", c.config_path, "JSON experiment config");
    cmd->add_option("--out", c.out_dir, "output directory (else HMMLYAP_OUT_DIR, else config)");
    cmd->add_option("--model", c.model_path, "model JSON file, overrides the config");
    c.seed_opt = cmd->add_option("--seed", c.seed, "master seed, overrides the config");
}

ExperimentConfig resolve_config(const CommonArgs& c) {
    ExperimentConfig cfg;
    if (!c.config_path.empty()) {
        cfg = load_config(c.config_path);
    } else if (!c.seed_opt->count()) {
        fail("SchemaError", "no seed given: pass --config or --seed");
    }
    if (!c.model_path.empty()) {
        cfg.model = load_model(c.model_path);
        cfg.has_model = true;
    }
    if (c.seed_opt->count()) cfg.seed = c.seed;
    return cfg;
}

std::string resolve_outdir(const CommonArgs& c, const ExperimentConfig& cfg) {
    std::string dir = c.out_dir;
    if (dir.empty()) {
        const char* env = std::getenv("HMMLYAP_OUT_DIR");
        if (env && *env) dir = env;
    }
    if (dir.empty()) dir = cfg.output;
    std::filesystem::create_directories(dir);
    return dir;
}

const HmmModel& require_model(const ExperimentConfig& cfg) {
    if (!cfg.has_model) fail("SchemaError", "this command needs a model");
    return cfg.model;
}

json vector_to_json(const Eigen::VectorXd& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(json_real(v(i)));
    return a;
}

json estimate_to_json(const LyapunovEstimate& est) {
    json e;
    e["lambdas"] = vector_to_json(est.lambdas);
    e["std_errors"] = vector_to_json(est.std_errors);
    e["underflow_flags"] = est.underflow_flags;
    e["n_steps"] = est.n_steps;
    e["sum_std_error"] = json_real(est.sum_std_error);
    return e;
}

double sum_residual(const LyapunovEstimate& est, double expected) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < est.lambdas.size(); ++j) sum += est.lambdas(j);
    if (std::isinf(sum) && std::isinf(expected) && sum < 0 && expected < 0) return 0.0;
    return std::abs(sum - expected);
}

double gap_of(const LyapunovEstimate& est) {
    const auto clusters = cluster_exponents(est);
    return clusters.size() >= 2 ? clusters[1].first - clusters[0].first : 0.0;
}

// Shared by decay, rates, verify: one sampled past window and the curve
// family chosen by cfg.curve.
std::vector<DecayCurve> curves_for(const ExperimentConfig& cfg, std::uint64_t seed) {
    const HmmModel& model = require_model(cfg);
    const long long T = cfg.T > 0 ? cfg.T : cfg.n_max;
    const SamplePath path = sample_path(model, T, seed);
    const ObservationWindow window = past_window(path, std::min(T, cfg.n_max - 1));
    const bool tilde = cfg.curve == "delta-tilde";
    std::vector<Triple> triples = cfg.has_triples
                                      ? cfg.triples
                                      : (tilde ? all_observation_triples(model)
                                               : all_triples(model));
    return tilde ? delta_tilde_curve(model, window, triples, cfg.n_max, cfg.floor)
                 : delta_curve(model, window, triples, cfg.n_max, cfg.floor);
}

int cmd_check(const CommonArgs& c) {
    ExperimentConfig cfg = resolve_config(c);
    refresh_effective(cfg);
    const HmmModel& model = require_model(cfg);
    const std::string dir = resolve_outdir(c, cfg);

    const HypothesisReport rep = check_hypotheses(model, cfg.rank_tol);
    json out;
    out["config"] = cfg.effective;
    out["report"]["h1_holds"] = rep.h1_holds;
    out["report"]["h2_holds"] = rep.h2_holds;
    out["report"]["min_p"] = json_real(rep.min_p);
    out["report"]["min_q"] = json_real(rep.min_q);
    out["report"]["det_p"] = json_real(rep.det_p);
    out["report"]["sigma_min_q"] = json_real(rep.sigma_min_q);
    out["report"]["R"] = json_real(rep.R);
    out["report"]["phi"] = json_real(rep.phi);
    out["report"]["alpha"] = json_real(rep.alpha);
    out["stationary"] = vector_to_json(model.pi);
    out["observation_marginal"] = vector_to_json(observation_marginal(model));
    out["expected_log_det"] = json_real(expected_log_det(model));
    double prop = -std::numeric_limits<double>::infinity();
    try {
        prop = proposition_lower_bound(model);
    } catch (const Error&) {
    }
    out["prop_lower_bound"] = json_real(prop);
    write_text(dir + "/check.json", dump_json(out));

    std::cout << "check: h1=" << (rep.h1_holds ? "true" : "false")
              << " h2=" << (rep.h2_holds ? "true" : "false")
              << " R=" << format_real(rep.R) << " alpha=" << format_real(rep.alpha)
              << " -> " << dir << "/check.json\n";
    return rep.h1_holds && rep.h2_holds ? 0 : 2;
}

int cmd_simulate(const CommonArgs& c, const CLI::Option* T_opt, long long T_cli) {
    ExperimentConfig cfg = resolve_config(c);
    if (T_opt->count()) cfg.T = T_cli;
    refresh_effective(cfg);
    const HmmModel& model = require_model(cfg);
    const std::string dir = resolve_outdir(c, cfg);

    const long long T = cfg.T > 0 ? cfg.T : 1000;
    const SamplePath path = sample_path(model, T, cfg.seed);
    std::vector<std::string> rows;
    rows.reserve(static_cast<std::size_t>(T));
    for (long long t = 0; t < T; ++t) {
        rows.push_back(std::to_string(t) + "," +
                       std::to_string(path.x[static_cast<std::size_t>(t)]) + "," +
                       std::to_string(path.z[static_cast<std::size_t>(t)]));
    }
    write_text(dir + "/path.csv", render_csv(cfg.effective, "t,x,z", rows));
    std::cout << "simulate: T=" << T << " seed=" << cfg.seed << " -> " << dir
              << "/path.csv\n";
    return 0;
}

int cmd_lyapunov(const CommonArgs& c, const CLI::Option* N_opt, long long N_cli,
                 const CLI::Option* warm_opt, long long warm_cli, const CLI::Option* r_opt,
                 int r_cli, const CLI::Option* batch_opt, int batch_cli) {
    ExperimentConfig cfg = resolve_config(c);
    if (N_opt->count()) cfg.N_lyap = N_cli;
    if (warm_opt->count()) cfg.warmup = warm_cli;
    if (r_opt->count()) cfg.r = r_cli;
    if (batch_opt->count()) cfg.batches = batch_cli;
    refresh_effective(cfg);
    const HmmModel& model = require_model(cfg);
    const std::string dir = resolve_outdir(c, cfg);

    const SamplePath path = sample_path(model, cfg.warmup + cfg.N_lyap, cfg.seed);
    std::vector<std::array<double, 3>> running;
    LyapunovOptions opt;
    opt.r = cfg.r;
    opt.warmup = cfg.warmup;
    opt.batches = cfg.batches;
    opt.running = &running;
    opt.running_stride = std::max<long long>(1, cfg.N_lyap / 1000);
    const LyapunovEstimate est = lyapunov_spectrum(model, past_order(path), opt);

    const double expected = expected_log_det(model);
    json out;
    out["config"] = cfg.effective;
    out["estimate"] = estimate_to_json(est);
    out["expected_log_det"] = json_real(expected);
    out["sum_residual"] = json_real(sum_residual(est, expected));
    out["gap"] = json_real(gap_of(est));
    json cl = json::array();
    for (const auto& [v, m] : cluster_exponents(est)) cl.push_back({json_real(v), m});
    out["clusters"] = cl;
    write_text(dir + "/lyapunov.json", dump_json(out));

    std::vector<std::string> rows;
    rows.reserve(running.size());
    for (const auto& rec : running) {
        rows.push_back(format_real(rec[0]) + "," + format_real(rec[1]) + "," +
                       format_real(rec[2]));
    }
    write_text(dir + "/lyapunov_running.csv",
               render_csv(cfg.effective, "n,lambda1,lambda2", rows));

    std::cout << "lyapunov: lambda1=" << format_real(est.lambdas(0));
    if (est.lambdas.size() > 1) std::cout << " lambda2=" << format_real(est.lambdas(1));
    std::cout << " gap=" << format_real(gap_of(est)) << " n=" << est.n_steps << " -> " << dir
              << "/lyapunov.json\n";
    return 0;
}

int cmd_decay(const CommonArgs& c, const CLI::Option* nmax_opt, long long nmax_cli,
              const CLI::Option* T_opt, long long T_cli, bool tilde) {
    ExperimentConfig cfg = resolve_config(c);
    if (nmax_opt->count()) cfg.n_max = nmax_cli;
    if (T_opt->count()) cfg.T = T_cli;
    if (tilde) cfg.curve = "delta-tilde";
    refresh_effective(cfg);
    const std::string dir = resolve_outdir(c, cfg);

    const std::vector<DecayCurve> curves = curves_for(cfg, cfg.seed);
    std::vector<std::string> rows;
    for (const DecayCurve& cv : curves) {
        const std::string label = format_triple(cv.triple);
        for (long long n = cv.n_range.first; n <= cv.n_range.second; ++n) {
            const std::size_t i = static_cast<std::size_t>(n - cv.n_range.first);
            rows.push_back(label + "," + std::to_string(n) + "," + format_real(cv.values[i]) +
                           "," + format_real(cv.log_abs[i]) + "," +
                           (cv.censored[i] ? "1" : "0"));
        }
    }
    write_text(dir + "/decay.csv",
               render_csv(cfg.effective, "triple,n,value,log_abs,censored", rows));
    std::cout << "decay: curves=" << curves.size() << " n_max=" << cfg.n_max << " -> " << dir
              << "/decay.csv\n";
    return 0;
}

int cmd_rates(const CommonArgs& c, const CLI::Option* nmax_opt, long long nmax_cli,
              const CLI::Option* nmin_opt, long long nmin_cli, const CLI::Option* method_opt,
              const std::string& method_cli, bool tilde) {
    ExperimentConfig cfg = resolve_config(c);
    if (nmax_opt->count()) cfg.n_max = nmax_cli;
    if (nmin_opt->count()) cfg.n_min = nmin_cli;
    if (method_opt->count()) cfg.method = method_cli;
    if (tilde) cfg.curve = "delta-tilde";
    refresh_effective(cfg);
    const std::string dir = resolve_outdir(c, cfg);

    const std::vector<DecayCurve> curves = curves_for(cfg, cfg.seed);
    std::vector<RateEstimate> rates;
    rates.reserve(curves.size());
    for (const DecayCurve& cv : curves) {
        rates.push_back(estimate_rate(cv, cfg.resolved_n_min(), cfg.n_max, cfg.method));
    }

    json out;
    out["config"] = cfg.effective;
    out["rates"] = json::array();
    for (const RateEstimate& r : rates) {
        json jr;
        jr["triple"] = format_triple(r.triple);
        jr["tau_hat"] = json_real(r.tau_hat);
        jr["r_squared"] = json_real(r.r_squared);
        jr["method"] = r.method;
        jr["window"] = {r.window.first, r.window.second};
        out["rates"].push_back(jr);
    }
    const RateEstimate& best = best_rate(rates);
    out["best"]["triple"] = format_triple(best.triple);
    out["best"]["tau_hat"] = json_real(best.tau_hat);
    write_text(dir + "/rates.json", dump_json(out));
    std::cout << "rates: best=" << format_triple(best.triple)
              << " tau=" << format_real(best.tau_hat) << " -> " << dir << "/rates.json\n";
    return 0;
}

int cmd_verify(const CommonArgs& c, const CLI::Option* N_opt, long long N_cli,
               const CLI::Option* nmax_opt, long long nmax_cli, const CLI::Option* nmin_opt,
               long long nmin_cli, const CLI::Option* win_opt, int win_cli,
               const CLI::Option* tol_opt, double tol_cli, const CLI::Option* method_opt,
               const std::string& method_cli) {
    ExperimentConfig cfg = resolve_config(c);
    if (N_opt->count()) cfg.N_lyap = N_cli;
    if (nmax_opt->count()) cfg.n_max = nmax_cli;
    if (nmin_opt->count()) cfg.n_min = nmin_cli;
    if (win_opt->count()) cfg.windows = win_cli;
    if (tol_opt->count()) cfg.tol = tol_cli;
    if (method_opt->count()) cfg.method = method_cli;
    refresh_effective(cfg);
    const HmmModel& model = require_model(cfg);
    const std::string dir = resolve_outdir(c, cfg);

    const SamplePath lyap_path =
        sample_path(model, cfg.warmup + cfg.N_lyap, rng::substream(cfg.seed, 1000000));
    LyapunovOptions opt;
    opt.r = cfg.r;
    opt.warmup = cfg.warmup;
    opt.batches = cfg.batches;
    const LyapunovEstimate est = lyapunov_spectrum(model, past_order(lyap_path), opt);
    const double expected = expected_log_det(model);
    const double residual = sum_residual(est, expected);
    const double gap = gap_of(est);

    json jwindows = json::array();
    long long violations_total = 0;
    int attained_count = 0;
    BoundsReport last_report;
    for (int w = 0; w < cfg.windows; ++w) {
        const std::vector<DecayCurve> curves = curves_for(cfg, rng::substream(cfg.seed, w));
        std::vector<RateEstimate> rates;
        rates.reserve(curves.size());
        for (const DecayCurve& cv : curves) {
            rates.push_back(estimate_rate(cv, cfg.resolved_n_min(), cfg.n_max, cfg.method));
        }
        const BoundsReport rep = verify_all(model, est, rates, cfg.tol);
        last_report = rep;
        const RateEstimate& best = best_rate(rates);
        json jw;
        jw["seed_index"] = w;
        jw["best_triple"] = format_triple(best.triple);
        jw["best_tau"] = json_real(best.tau_hat);
        jw["violations"] = json::array();
        for (const Triple& t : rep.theorem1_violations) {
            jw["violations"].push_back(format_triple(t));
        }
        jw["attained"] = rep.theorem2_attained;
        jwindows.push_back(jw);
        violations_total += static_cast<long long>(rep.theorem1_violations.size());
        if (rep.theorem2_attained) attained_count += 1;
    }

    const double attained_fraction =
        cfg.windows > 0 ? static_cast<double>(attained_count) / cfg.windows : 0.0;
    const bool residual_ok = residual <= 3.0 * est.sum_std_error + 1e-9;
    const bool pass = violations_total == 0 && attained_fraction >= 0.9 && residual_ok;

    json out;
    out["config"] = cfg.effective;
    out["estimate"] = estimate_to_json(est);
    out["gap"] = json_real(gap);
    out["expected_log_det"] = json_real(expected);
    out["sum_residual"] = json_real(residual);
    out["prop_lower_bound"] = json_real(last_report.prop_lower_bound);
    out["windows"] = jwindows;
    out["violations_total"] = violations_total;
    out["attained_fraction"] = json_real(attained_fraction);
    out["pass"] = pass;
    write_text(dir + "/verify.json", dump_json(out));

    std::cout << "verify: " << (pass ? "PASS" : "FAIL") << " gap=" << format_real(gap)
              << " violations=" << violations_total << " attained=" << attained_count << "/"
              << cfg.windows << " residual=" << format_real(residual) << " -> " << dir
              << "/verify.json\n";
    return pass ? 0 : 3;
}

int cmd_perturb_sweep(const CommonArgs& c, const CLI::Option* p0_opt, double p0_cli,
                      const CLI::Option* p1_opt, double p1_cli, const CLI::Option* grid_opt,
                      const std::vector<double>& grid_cli, const CLI::Option* steps_opt,
                      long long steps_cli, const CLI::Option* m_opt, int m_cli) {
    ExperimentConfig cfg = resolve_config(c);
    if (p0_opt->count()) cfg.p0 = p0_cli;
    if (p1_opt->count()) cfg.p1 = p1_cli;
    if (grid_opt->count()) cfg.eps_grid = grid_cli;
    if (steps_opt->count()) cfg.steps = steps_cli;
    if (m_opt->count()) cfg.m_depth = m_cli;
    refresh_effective(cfg);
    const std::string dir = resolve_outdir(c, cfg);

    std::vector<std::string> rows;
    for (std::size_t i = 0; i < cfg.eps_grid.size(); ++i) {
        const double eps = cfg.eps_grid[i];
        double birk = kNaN, bse = kNaN, l1 = kNaN, l2 = kNaN, lsum = kNaN;
        double ledet = kNaN, bound = kNaN;
        std::string status = "ok";
        try {
            const PerturbModel pm = build_perturb(cfg.p0, cfg.p1, eps);
            const RateBound rb = binary_rate_bound(pm);
            ledet = rb.ledet;
            bound = rb.bound;
            try {
                const BirkhoffEstimate be =
                    lambda1_birkhoff(pm, cfg.steps, rng::substream(cfg.seed, 2 * i), cfg.m_depth,
                                     cfg.batches);
                birk = be.lambda1;
                bse = be.std_error;
            } catch (const Error& e) {
                status = e.kind();
            }
            const HmmModel hm = to_hmm(pm);
            const SamplePath sp =
                sample_path(hm, cfg.steps + cfg.warmup, rng::substream(cfg.seed, 2 * i + 1));
            LyapunovOptions lo;
            lo.permissive = true;
            lo.warmup = cfg.warmup;
            lo.batches = cfg.batches;
            const LyapunovEstimate le = lyapunov_spectrum(hm, past_order(sp), lo);
            l1 = le.lambdas(0);
            l2 = le.lambdas(1);
            lsum = l1 + l2;
        } catch (const Error& e) {
            status = e.kind();
        }
        rows.push_back(format_real(eps) + "," + format_real(birk) + "," + format_real(bse) +
                       "," + format_real(l1) + "," + format_real(l2) + "," +
                       format_real(lsum) + "," + format_real(ledet) + "," +
                       format_real(bound) + "," + status);
    }
    write_text(dir + "/perturb_sweep.csv",
               render_csv(cfg.effective,
                          "epsilon,birkhoff,birkhoff_se,qr_lambda1,qr_lambda2,qr_sum,ledet,"
                          "bound,status",
                          rows));
    std::cout << "perturb-sweep: points=" << cfg.eps_grid.size() << " p0="
              << format_real(cfg.p0) << " p1=" << format_real(cfg.p1) << " -> " << dir
              << "/perturb_sweep.csv\n";
    return 0;
}

} // namespace

int run_cli(int argc, char** argv) {
    CLI::App app{"memory-loss rate toolkit for hidden Markov chains"};
    app.require_subcommand(1);
    int code = 0;

    CommonArgs c_check;
    auto* sc_check = app.add_subcommand("check", "model hypotheses and closed-form constants");
    add_common(sc_check, c_check);
    sc_check->callback([&]() { code = cmd_check(c_check); });

    CommonArgs c_sim;
    long long sim_T = 0;
    auto* sc_sim = app.add_subcommand("simulate", "sample a hidden/observed path");
    add_common(sc_sim, c_sim);
    auto* sim_T_opt = sc_sim->add_option("--T", sim_T, "path length");
    sc_sim->callback([&]() { code = cmd_simulate(c_sim, sim_T_opt, sim_T); });

    CommonArgs c_lyap;
    long long ly_N = 0, ly_warm = 0;
    int ly_r = 0, ly_batches = 0;
    auto* sc_lyap = app.add_subcommand("lyapunov", "sampled spectrum of the observation cocycle");
    add_common(sc_lyap, c_lyap);
    auto* ly_N_opt = sc_lyap->add_option("--N", ly_N, "accumulation steps");
    auto* ly_warm_opt = sc_lyap->add_option("--warmup", ly_warm, "discarded leading steps");
    auto* ly_r_opt = sc_lyap->add_option("--r", ly_r, "number of exponents (0 = min(k,2))");
    auto* ly_batch_opt = sc_lyap->add_option("--batches", ly_batches, "batch-means batches");
    sc_lyap->callback([&]() {
        code = cmd_lyapunov(c_lyap, ly_N_opt, ly_N, ly_warm_opt, ly_warm, ly_r_opt, ly_r,
                            ly_batch_opt, ly_batches);
    });

    CommonArgs c_decay;
    long long de_nmax = 0, de_T = 0;
    bool de_tilde = false;
    auto* sc_decay = app.add_subcommand("decay", "memory-loss decay curves on one window");
    add_common(sc_decay, c_decay);
    auto* de_nmax_opt = sc_decay->add_option("--n-max", de_nmax, "curve depth");
    auto* de_T_opt = sc_decay->add_option("--T", de_T, "sampled path length (0 = n_max)");
    sc_decay->add_flag("--tilde", de_tilde, "observation-conditional curves");
    sc_decay->callback(
        [&]() { code = cmd_decay(c_decay, de_nmax_opt, de_nmax, de_T_opt, de_T, de_tilde); });

    CommonArgs c_rates;
    long long ra_nmax = 0, ra_nmin = 0;
    std::string ra_method;
    bool ra_tilde = false;
    auto* sc_rates = app.add_subcommand("rates", "decay-rate estimates per triple");
    add_common(sc_rates, c_rates);
    auto* ra_nmax_opt = sc_rates->add_option("--n-max", ra_nmax, "curve depth");
    auto* ra_nmin_opt = sc_rates->add_option("--n-min", ra_nmin, "fit start (0 = n_max/2)");
    auto* ra_method_opt =
        sc_rates->add_option("--method", ra_method, "regression or tail-max");
    sc_rates->add_flag("--tilde", ra_tilde, "observation-conditional curves");
    sc_rates->callback([&]() {
        code = cmd_rates(c_rates, ra_nmax_opt, ra_nmax, ra_nmin_opt, ra_nmin, ra_method_opt,
                         ra_method, ra_tilde);
    });

    CommonArgs c_verify;
    long long ve_N = 0, ve_nmax = 0, ve_nmin = 0;
    int ve_windows = 0;
    double ve_tol = 0.0;
    std::string ve_method;
    auto* sc_verify =
        app.add_subcommand("verify", "gap vs decay-rate verification over seeded windows");
    add_common(sc_verify, c_verify);
    auto* ve_N_opt = sc_verify->add_option("--N", ve_N, "spectrum accumulation steps");
    auto* ve_nmax_opt = sc_verify->add_option("--n-max", ve_nmax, "curve depth");
    auto* ve_nmin_opt = sc_verify->add_option("--n-min", ve_nmin, "fit start (0 = n_max/2)");
    auto* ve_win_opt = sc_verify->add_option("--windows", ve_windows, "number of seeded windows");
    auto* ve_tol_opt = sc_verify->add_option("--tol", ve_tol, "rate-gap tolerance");
    auto* ve_method_opt =
        sc_verify->add_option("--method", ve_method, "regression or tail-max");
    sc_verify->callback([&]() {
        code = cmd_verify(c_verify, ve_N_opt, ve_N, ve_nmax_opt, ve_nmax, ve_nmin_opt, ve_nmin,
                          ve_win_opt, ve_windows, ve_tol_opt, ve_tol, ve_method_opt, ve_method);
    });

    CommonArgs c_sweep;
    double sw_p0 = 0.0, sw_p1 = 0.0;
    std::vector<double> sw_grid;
    long long sw_steps = 0;
    int sw_m = 0;
    auto* sc_sweep = app.add_subcommand(
        "perturb-sweep", "binary small-noise family: closed forms vs sampled spectra");
    add_common(sc_sweep, c_sweep);
    auto* sw_p0_opt = sc_sweep->add_option("--p0", sw_p0, "first transition probability");
    auto* sw_p1_opt = sc_sweep->add_option("--p1", sw_p1, "second transition probability");
    auto* sw_grid_opt = sc_sweep->add_option("--eps-grid", sw_grid, "noise levels");
    auto* sw_steps_opt = sc_sweep->add_option("--steps", sw_steps, "sample size per level");
    auto* sw_m_opt = sc_sweep->add_option("--m-depth", sw_m, "fixed-point truncation depth");
    sc_sweep->callback([&]() {
        code = cmd_perturb_sweep(c_sweep, sw_p0_opt, sw_p0, sw_p1_opt, sw_p1, sw_grid_opt,
                                 sw_grid, sw_steps_opt, sw_steps, sw_m_opt, sw_m);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return code;
}

int run_cli(const std::vector<std::string>& args) {
    std::vector<std::string> full;
    full.reserve(args.size() + 1);
    full.push_back("hmmlyap");
    full.insert(full.end(), args.begin(), args.end());
    std::vector<char*> argv;
    argv.reserve(full.size());
    for (std::string& s : full) argv.push_back(s.data());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

} // namespace hmmlyap
