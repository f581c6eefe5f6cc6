#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "hmmlyap/bounds.hpp"
#include "hmmlyap/cocycle.hpp"
#include "hmmlyap/io.hpp"
#include "hmmlyap/memloss.hpp"
#include "hmmlyap/model.hpp"
#include "hmmlyap/perturb.hpp"
#include "hmmlyap/rng.hpp"
#include "hmmlyap/simulate.hpp"

namespace py = pybind11;
using namespace hmmlyap;

namespace {

// Plain nested lists keep the module free of a numpy build dependency; the
// matrices involved are tiny.
Eigen::MatrixXd to_matrix(const std::vector<std::vector<double>>& rows) {
    const auto r = static_cast<Eigen::Index>(rows.size());
    if (r == 0) fail("DimensionMismatch", "matrix must have at least one row");
    const auto c = static_cast<Eigen::Index>(rows[0].size());
    Eigen::MatrixXd m(r, c);
    for (Eigen::Index i = 0; i < r; ++i) {
        if (static_cast<Eigen::Index>(rows[static_cast<std::size_t>(i)].size()) != c) {
            fail("DimensionMismatch", "ragged matrix rows");
        }
        for (Eigen::Index j = 0; j < c; ++j) {
            m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
    }
    return m;
}

std::vector<std::vector<double>> from_matrix(const Eigen::MatrixXd& m) {
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        rows[static_cast<std::size_t>(i)].assign(m.row(i).begin(), m.row(i).end());
    }
    return rows;
}

std::vector<double> from_vector(const Eigen::VectorXd& v) {
    return std::vector<double>(v.begin(), v.end());
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i];
    return out;
}

ObservationWindow past_window_of(const std::vector<int>& symbols) {
    ObservationWindow w;
    w.symbols = symbols;
    w.origin = -static_cast<long long>(symbols.size());
    return w;
}

ObservationWindow forward_window_of01(const std::vector<int>& symbols01) {
    ObservationWindow w;
    w.origin = 1;
    w.symbols.reserve(symbols01.size());
    for (int z : symbols01) w.symbols.push_back(z + 1);
    return w;
}

Triple to_triple(const std::array<int, 3>& t) { return Triple{t[0], t[1], t[2]}; }

py::tuple triple_tuple(const Triple& t) { return py::make_tuple(t.a, t.b, t.c); }

py::dict rate_dict(const RateEstimate& r) {
    py::dict d;
    d["triple"] = triple_tuple(r.triple);
    d["tau_hat"] = r.tau_hat;
    d["window"] = py::make_tuple(r.window.first, r.window.second);
    d["r_squared"] = r.r_squared;
    d["method"] = r.method;
    return d;
}

py::dict lyap_dict(const LyapunovEstimate& est) {
    py::dict d;
    d["lambdas"] = from_vector(est.lambdas);
    d["std_errors"] = from_vector(est.std_errors);
    d["sum_std_error"] = est.sum_std_error;
    d["n_steps"] = est.n_steps;
    d["underflow_flags"] = est.underflow_flags;
    return d;
}

} // namespace

PYBIND11_MODULE(_hmmlyap, mod) {
    mod.doc() = "Observation cocycle spectra and filter memory-loss rates";

    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        }
    });

    py::class_<HmmModel>(mod, "Model")
        .def_readonly("k", &HmmModel::k)
        .def_readonly("l", &HmmModel::l)
        .def_property_readonly("p", [](const HmmModel& m) { return from_matrix(m.p); })
        .def_property_readonly("q", [](const HmmModel& m) { return from_matrix(m.q); })
        .def_property_readonly("pi", [](const HmmModel& m) { return from_vector(m.pi); });

    py::class_<DecayCurve>(mod, "DecayCurve")
        .def_property_readonly("triple",
                               [](const DecayCurve& c) { return triple_tuple(c.triple); })
        .def_readonly("values", &DecayCurve::values)
        .def_readonly("log_abs", &DecayCurve::log_abs)
        .def_readonly("censored", &DecayCurve::censored)
        .def_property_readonly("n_range", [](const DecayCurve& c) {
            return py::make_tuple(c.n_range.first, c.n_range.second);
        });

    py::class_<PerturbModel>(mod, "PerturbModel")
        .def_readonly("p0", &PerturbModel::p0)
        .def_readonly("p1", &PerturbModel::p1)
        .def_readonly("epsilon", &PerturbModel::epsilon)
        .def_readonly("beta", &PerturbModel::beta)
        .def_readonly("D", &PerturbModel::D)
        .def_readonly("eps0", &PerturbModel::eps0);

    mod.def("mix64", &rng::mix64, py::arg("x"));
    mod.def("substream", &rng::substream, py::arg("master"), py::arg("idx"));

    mod.def(
        "build_model",
        [](const std::vector<std::vector<double>>& p,
           const std::vector<std::vector<double>>& q) {
            return build_model(to_matrix(p), to_matrix(q));
        },
        py::arg("p"), py::arg("q"));

    mod.def(
        "check_hypotheses",
        [](const HmmModel& m, double rank_tol) {
            const HypothesisReport r = check_hypotheses(m, rank_tol);
            py::dict d;
            d["h1_holds"] = r.h1_holds;
            d["h2_holds"] = r.h2_holds;
            d["min_p"] = r.min_p;
            d["min_q"] = r.min_q;
            d["det_p"] = r.det_p;
            d["sigma_min_q"] = r.sigma_min_q;
            d["R"] = r.R;
            d["phi"] = r.phi;
            d["alpha"] = r.alpha;
            return d;
        },
        py::arg("model"), py::arg("rank_tol") = 1e-10);

    mod.def("observation_marginal",
            [](const HmmModel& m) { return from_vector(observation_marginal(m)); });

    mod.def(
        "observation_matrix",
        [](const HmmModel& m, int z) { return from_matrix(observation_matrix(m, z)); },
        py::arg("model"), py::arg("z"));

    mod.def(
        "sample_path",
        [](const HmmModel& m, long long T, std::uint64_t seed) {
            const SamplePath path = sample_path(m, T, seed);
            py::dict d;
            d["x"] = path.x;
            d["z"] = path.z;
            d["seed"] = path.seed;
            return d;
        },
        py::arg("model"), py::arg("T"), py::arg("seed"));

    mod.def("expected_log_det", &expected_log_det, py::arg("model"));
    mod.def("proposition_lower_bound", &proposition_lower_bound, py::arg("model"));

    mod.def(
        "lyapunov",
        [](const HmmModel& m, long long N, std::uint64_t seed, int r, long long warmup,
           int batches, bool permissive) {
            const SamplePath path = sample_path(m, warmup + N, seed);
            LyapunovOptions opt;
            opt.r = r;
            opt.warmup = warmup;
            opt.batches = batches;
            opt.permissive = permissive;
            return lyap_dict(lyapunov_spectrum(m, past_order(path), opt));
        },
        py::arg("model"), py::arg("N"), py::arg("seed"), py::arg("r") = 0,
        py::arg("warmup") = 200, py::arg("batches") = 50, py::arg("permissive") = false,
        "Samples a stationary path of length warmup + N and accumulates the "
        "spectrum over the past-ordered observations.");

    mod.def(
        "all_triples",
        [](const HmmModel& m) {
            py::list out;
            for (const Triple& t : all_triples(m)) out.append(triple_tuple(t));
            return out;
        },
        py::arg("model"));

    mod.def(
        "all_observation_triples",
        [](const HmmModel& m) {
            py::list out;
            for (const Triple& t : all_observation_triples(m)) out.append(triple_tuple(t));
            return out;
        },
        py::arg("model"));

    mod.def(
        "delta_curve",
        [](const HmmModel& m, const std::vector<int>& window,
           const std::vector<std::array<int, 3>>& triples, long long n_max, double floor,
           bool tilde) {
            std::vector<Triple> ts;
            if (triples.empty()) {
                ts = tilde ? all_observation_triples(m) : all_triples(m);
            } else {
                for (const auto& t : triples) ts.push_back(to_triple(t));
            }
            const ObservationWindow w = past_window_of(window);
            return tilde ? delta_tilde_curve(m, w, ts, n_max, floor)
                         : delta_curve(m, w, ts, n_max, floor);
        },
        py::arg("model"), py::arg("window"), py::arg("triples") = std::vector<std::array<int, 3>>{},
        py::arg("n_max") = 400, py::arg("floor") = 1e-290, py::arg("tilde") = false,
        "window holds the past observations, most recent last.");

    mod.def(
        "delta_bruteforce",
        [](const HmmModel& m, const std::vector<int>& window, const std::array<int, 3>& t,
           long long n, bool tilde) {
            const ObservationWindow w = past_window_of(window);
            return tilde ? delta_tilde_bruteforce(m, w, to_triple(t), n)
                         : delta_bruteforce(m, w, to_triple(t), n);
        },
        py::arg("model"), py::arg("window"), py::arg("triple"), py::arg("n"),
        py::arg("tilde") = false);

    mod.def(
        "estimate_rate",
        [](const DecayCurve& c, long long n_min, long long n_max, const std::string& method) {
            return rate_dict(estimate_rate(c, n_min, n_max, method));
        },
        py::arg("curve"), py::arg("n_min"), py::arg("n_max"),
        py::arg("method") = std::string("regression"));

    mod.def(
        "decompose_psi",
        [](const HmmModel& m, int a, const std::vector<double>& f) {
            const auto [u, xi] = decompose_psi(m, a, to_vector(f));
            return py::make_tuple(u, from_vector(xi));
        },
        py::arg("model"), py::arg("a"), py::arg("f"));

    mod.def(
        "estimate_codim1_direction",
        [](const HmmModel& m, const std::vector<int>& window) {
            return from_vector(estimate_codim1_direction(m, past_window_of(window)));
        },
        py::arg("model"), py::arg("window"));

    mod.def(
        "projective_ratio_curve",
        [](const HmmModel& m, const std::vector<double>& w1, const std::vector<double>& w2,
           const std::vector<int>& window) {
            const ProjectiveRatios pr =
                projective_ratio_curve(m, to_vector(w1), to_vector(w2), past_window_of(window));
            py::dict d;
            d["gamma"] = pr.gamma;
            d["delta"] = pr.delta;
            return d;
        },
        py::arg("model"), py::arg("w1"), py::arg("w2"), py::arg("window"));

    mod.def("build_perturb", &build_perturb, py::arg("p0"), py::arg("p1"), py::arg("epsilon"));
    mod.def("to_hmm", &to_hmm, py::arg("pm"));
    mod.def("rho_eval", &rho_eval, py::arg("pm"), py::arg("z1"), py::arg("z2"),
            py::arg("h_next"), "Binary symbols 0/1.");

    mod.def(
        "solve_h",
        [](const PerturbModel& pm, const std::vector<int>& forward01, int m, bool rigorous) {
            const FixedPointResult r = solve_h(pm, forward_window_of01(forward01), m, rigorous);
            py::dict d;
            d["h_value"] = r.h_value;
            d["iterations"] = r.iterations;
            d["error_bound"] = r.error_bound;
            d["window_used"] = r.window_used;
            d["contraction_estimate"] = r.contraction_estimate;
            return d;
        },
        py::arg("pm"), py::arg("forward"), py::arg("m"), py::arg("rigorous") = false,
        "forward holds binary symbols 0/1 at times 1, 2, ...");

    mod.def(
        "verify_eigenrelation",
        [](const PerturbModel& pm, const std::vector<int>& forward01, int m) {
            return verify_eigenrelation(pm, forward_window_of01(forward01), m);
        },
        py::arg("pm"), py::arg("forward"), py::arg("m"));

    mod.def(
        "lambda1_birkhoff",
        [](const PerturbModel& pm, long long N, std::uint64_t seed, int m, int batches) {
            const BirkhoffEstimate est = lambda1_birkhoff(pm, N, seed, m, batches);
            py::dict d;
            d["lambda1"] = est.lambda1;
            d["std_error"] = est.std_error;
            d["n_terms"] = est.n_terms;
            return d;
        },
        py::arg("pm"), py::arg("N"), py::arg("seed"), py::arg("m") = 40,
        py::arg("batches") = 50);

    mod.def(
        "binary_rate_bound",
        [](const PerturbModel& pm) {
            const RateBound rb = binary_rate_bound(pm);
            py::dict d;
            d["bound"] = rb.bound;
            d["ledet"] = rb.ledet;
            return d;
        },
        py::arg("pm"));

    mod.def("eps0_bound", &eps0_bound, py::arg("beta"), py::arg("D"));
}
