#include "hmmlyap/memloss.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "hmmlyap/cocycle.hpp"

namespace hmmlyap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_state(const HmmModel& model, int a) {
    if (a < 1 || a > model.k) fail("SymbolOutOfRange", "state " + std::to_string(a));
}

void check_obs(const HmmModel& model, int b) {
    if (b < 1 || b > model.l) fail("SymbolOutOfRange", "observation " + std::to_string(b));
}

// Wedge coordinates are indexed by pairs (i, j), i < j, lexicographic.
std::vector<std::pair<int, int>> pair_table(int k) {
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(static_cast<std::size_t>(k) * (k - 1) / 2);
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) pairs.emplace_back(i, j);
    return pairs;
}

// Second compound matrix: (C ω)_(i,j) = sum_{l<m} (L_il L_jm - L_im L_jl) ω_(l,m).
Eigen::MatrixXd compound2(const Eigen::MatrixXd& L,
                          const std::vector<std::pair<int, int>>& pairs) {
    const int K = static_cast<int>(pairs.size());
    Eigen::MatrixXd C(K, K);
    for (int r = 0; r < K; ++r) {
        const auto [i, j] = pairs[static_cast<std::size_t>(r)];
        for (int c = 0; c < K; ++c) {
            const auto [l, m] = pairs[static_cast<std::size_t>(c)];
            C(r, c) = L(i, l) * L(j, m) - L(i, m) * L(j, l);
        }
    }
    return C;
}

} // namespace

FilterVectors filter_vectors(const HmmModel& model) {
    FilterVectors fv;
    fv.theta.resize(model.k, model.l);
    for (int b = 0; b < model.l; ++b)
        fv.theta.col(b) = model.pi.cwiseProduct(model.q.col(b));
    fv.psi = model.p;
    return fv;
}

namespace detail {

std::vector<DecayCurve> delta_curves_impl(const HmmModel& model,
                                          const ObservationWindow& window,
                                          const std::vector<Triple>& triples,
                                          long long n_max, double floor, bool tilde,
                                          const CurveHooks* hooks) {
    if (n_max < 1) fail("WindowTooShort", "n_max must be at least 1");
    const long long len = static_cast<long long>(window.symbols.size());
    if (len < n_max - 1) {
        fail("WindowTooShort", "curve to depth " + std::to_string(n_max) + " needs " +
                                   std::to_string(n_max - 1) + " symbols, got " +
                                   std::to_string(len));
    }
    const int k = model.k;
    const int l = model.l;
    const auto pairs = pair_table(k);
    const int K = static_cast<int>(pairs.size());

    const FilterVectors fv = filter_vectors(model);
    const Eigen::MatrixXd initials = tilde ? Eigen::MatrixXd(model.p * model.q) : fv.psi;

    for (const Triple& t : triples) {
        if (tilde) {
            check_obs(model, t.a);
        } else {
            check_state(model, t.a);
        }
        check_obs(model, t.b);
        check_obs(model, t.c);
    }

    std::vector<Eigen::MatrixXd> L, C;
    L.reserve(static_cast<std::size_t>(l));
    C.reserve(static_cast<std::size_t>(l));
    for (int z = 1; z <= l; ++z) {
        L.push_back(observation_matrix(model, z));
        C.push_back(compound2(L.back(), pairs));
    }

    // Wedge of the two conditioning vectors, one per triple.
    std::vector<Eigen::VectorXd> theta_wedge(triples.size());
    for (std::size_t t = 0; t < triples.size(); ++t) {
        const Eigen::VectorXd tb = fv.theta.col(triples[t].b - 1);
        const Eigen::VectorXd tc = fv.theta.col(triples[t].c - 1);
        Eigen::VectorXd wd(K);
        for (int r = 0; r < K; ++r) {
            const auto [i, j] = pairs[static_cast<std::size_t>(r)];
            wd(r) = tb(i) * tc(j) - tb(j) * tc(i);
        }
        theta_wedge[t] = wd;
    }

    std::vector<DecayCurve> curves(triples.size());
    for (std::size_t t = 0; t < triples.size(); ++t) {
        curves[t].triple = triples[t];
        curves[t].values.resize(static_cast<std::size_t>(n_max));
        curves[t].log_abs.resize(static_cast<std::size_t>(n_max));
        curves[t].censored.assign(static_cast<std::size_t>(n_max), false);
        curves[t].n_range = {1, n_max};
    }

    const double log_floor = std::log(floor);

    // One propagation per distinct leading index; all triples sharing it read
    // off the same state.
    std::map<int, std::vector<std::size_t>> groups;
    for (std::size_t t = 0; t < triples.size(); ++t) groups[triples[t].a].push_back(t);

    for (const auto& [a, members] : groups) {
        Eigen::VectorXd u = initials.col(a - 1);
        Eigen::VectorXd w = Eigen::VectorXd::Ones(k);
        Eigen::VectorXd omega(K);
        for (int r = 0; r < K; ++r) {
            const auto [i, j] = pairs[static_cast<std::size_t>(r)];
            omega(r) = u(i) - u(j);  // psi wedge ones
        }
        double Sw = 0.0, Somega = 0.0;

        for (long long n = 1; n <= n_max; ++n) {
            if (hooks && hooks->observe) hooks->observe(n, u, w);
            for (std::size_t t : members) {
                const double tb = fv.theta.col(triples[t].b - 1).dot(w);
                const double tc = fv.theta.col(triples[t].c - 1).dot(w);
                const double P = theta_wedge[t].dot(omega);
                const double la =
                    std::log(std::abs(P)) + Somega - std::log(tb) - std::log(tc) - 2.0 * Sw;
                auto& cv = curves[t];
                const std::size_t idx = static_cast<std::size_t>(n - 1);
                if (la >= log_floor) {
                    cv.log_abs[idx] = la;
                    cv.values[idx] = (P < 0.0 ? -1.0 : 1.0) * std::exp(la);
                } else {
                    cv.log_abs[idx] = -kInf;
                    cv.values[idx] = 0.0;
                    cv.censored[idx] = true;
                }
            }
            if (n == n_max) break;

            const int z = window.symbols[static_cast<std::size_t>(len - n)];
            check_obs(model, z);
            u = L[static_cast<std::size_t>(z - 1)] * u;
            w = L[static_cast<std::size_t>(z - 1)] * w;
            omega = C[static_cast<std::size_t>(z - 1)] * omega;
            if (hooks && hooks->rescale) {
                const double r = hooks->rescale(n);
                u *= r;
                w *= r;
                omega *= r * r;
            }
            const double mw = w.cwiseAbs().maxCoeff();
            if (mw > 0.0) {
                w /= mw;
                u /= mw;
                Sw += std::log(mw);
            }
            const double mo = omega.cwiseAbs().maxCoeff();
            if (mo > 0.0) {
                omega /= mo;
                Somega += std::log(mo);
            }
        }
    }
    return curves;
}

} // namespace detail

std::vector<DecayCurve> delta_curve(const HmmModel& model, const ObservationWindow& window,
                                    const std::vector<Triple>& triples, long long n_max,
                                    double floor) {
    return detail::delta_curves_impl(model, window, triples, n_max, floor, false, nullptr);
}

std::vector<DecayCurve> delta_tilde_curve(const HmmModel& model,
                                          const ObservationWindow& window,
                                          const std::vector<Triple>& triples, long long n_max,
                                          double floor) {
    return detail::delta_curves_impl(model, window, triples, n_max, floor, true, nullptr);
}

namespace {

// Conditional weight enumeration shared by both oracles. Hidden states
// x_{-n}..x_{-1} run through a base-k odometer; the accumulators hold, in
// extended precision, the joint weight of (first symbol, interior window) and
// the weight additionally carrying the time-0 target.
struct BruteResult {
    __float128 num, den;
};

BruteResult brute_sweep(const HmmModel& model, const std::vector<int>& interior,
                        int first_symbol, int target, bool tilde) {
    const int k = model.k;
    const long long n = static_cast<long long>(interior.size()) + 1;
    Eigen::MatrixXd pq = model.p * model.q;

    std::vector<int> x(static_cast<std::size_t>(n), 0);
    BruteResult acc{0, 0};
    while (true) {
        __float128 wpath = static_cast<__float128>(model.pi(x[0])) *
                           static_cast<__float128>(model.q(x[0], first_symbol - 1));
        for (long long t = 1; t < n; ++t) {
            wpath *= static_cast<__float128>(
                         model.p(x[static_cast<std::size_t>(t - 1)],
                                 x[static_cast<std::size_t>(t)])) *
                     static_cast<__float128>(
                         model.q(x[static_cast<std::size_t>(t)],
                                 interior[static_cast<std::size_t>(t - 1)] - 1));
        }
        const int last = x[static_cast<std::size_t>(n - 1)];
        const double head = tilde ? pq(last, target - 1) : model.p(last, target - 1);
        acc.den += wpath;
        acc.num += wpath * static_cast<__float128>(head);
        long long d = n - 1;
        while (d >= 0 && x[static_cast<std::size_t>(d)] == k - 1) {
            x[static_cast<std::size_t>(d)] = 0;
            --d;
        }
        if (d < 0) break;
        x[static_cast<std::size_t>(d)] += 1;
    }
    return acc;
}

double brute_delta(const HmmModel& model, const ObservationWindow& window, Triple t,
                   long long n, bool tilde) {
    if (n < 1) fail("WindowTooShort", "depth must be at least 1");
    if (n > 14) fail("TooLarge", "path enumeration beyond depth 14 is not supported");
    const long long len = static_cast<long long>(window.symbols.size());
    if (len < n - 1) {
        fail("WindowTooShort", "depth " + std::to_string(n) + " needs " +
                                   std::to_string(n - 1) + " symbols, got " +
                                   std::to_string(len));
    }
    if (tilde) {
        check_obs(model, t.a);
    } else {
        check_state(model, t.a);
    }
    check_obs(model, t.b);
    check_obs(model, t.c);

    std::vector<int> interior(window.symbols.end() - (n - 1), window.symbols.end());
    for (int z : interior) check_obs(model, z);

    const BruteResult rb = brute_sweep(model, interior, t.b, t.a, tilde);
    const BruteResult rc = brute_sweep(model, interior, t.c, t.a, tilde);
    if (rb.den == 0 || rc.den == 0) {
        fail("DegenerateDeterminant", "conditioning event has zero probability");
    }
    return static_cast<double>(rb.num / rb.den - rc.num / rc.den);
}

} // namespace

double delta_bruteforce(const HmmModel& model, const ObservationWindow& window, Triple t,
                        long long n) {
    return brute_delta(model, window, t, n, false);
}

double delta_tilde_bruteforce(const HmmModel& model, const ObservationWindow& window,
                              Triple t, long long n) {
    return brute_delta(model, window, t, n, true);
}

RateEstimate estimate_rate(const DecayCurve& curve, long long n_min, long long n_max,
                           const std::string& method) {
    if (method != "regression" && method != "tail-max") {
        fail("SchemaError", "unknown rate method: " + method);
    }
    if (n_min < 2) fail("WindowTooShort", "rate window must start at n >= 2");
    if (n_min >= n_max) fail("WindowTooShort", "rate window must contain at least two n");
    if (n_max > curve.n_range.second || n_min < curve.n_range.first) {
        fail("WindowTooLong", "rate window exceeds the curve range");
    }

    std::vector<long long> ns;
    std::vector<double> ys;
    for (long long n = n_min; n <= n_max; ++n) {
        const std::size_t idx = static_cast<std::size_t>(n - curve.n_range.first);
        if (curve.censored[idx]) continue;
        ns.push_back(n);
        ys.push_back(curve.log_abs[idx]);
    }

    RateEstimate est;
    est.triple = curve.triple;
    est.window = {n_min, n_max};
    est.method = method;

    if (ns.empty()) {
        est.tau_hat = -kInf;
        est.r_squared = 0.0;
        return est;
    }
    if (ns.size() < 5) {
        fail("TooFewPoints", "rate estimate needs at least 5 uncensored points, got " +
                                 std::to_string(ns.size()));
    }

    if (method == "tail-max") {
        const long long n0 = ns.front();
        const double y0 = ys.front();
        double best = -kInf;
        for (std::size_t i = 1; i < ns.size(); ++i) {
            best = std::max(best, (ys[i] - y0) / static_cast<double>(ns[i] - n0));
        }
        est.tau_hat = best;
        est.r_squared = std::numeric_limits<double>::quiet_NaN();
        return est;
    }

    const double m = static_cast<double>(ns.size());
    double mean_n = 0.0, mean_y = 0.0;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        mean_n += static_cast<double>(ns[i]);
        mean_y += ys[i];
    }
    mean_n /= m;
    mean_y /= m;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        const double dx = static_cast<double>(ns[i]) - mean_n;
        const double dy = ys[i] - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    est.tau_hat = sxy / sxx;
    const double ss_res = syy - sxy * sxy / sxx;
    est.r_squared = syy <= 1e-30 ? 1.0 : 1.0 - ss_res / syy;
    return est;
}

std::pair<double, Eigen::VectorXd> decompose_psi(const HmmModel& model, int a,
                                                 const Eigen::VectorXd& f) {
    check_state(model, a);
    if (f.size() != model.k) fail("DimensionMismatch", "direction must have k entries");
    const double fdot1 = f.sum();
    const double scale = f.norm() * std::sqrt(static_cast<double>(model.k));
    if (std::abs(fdot1) <= 1e-12 * scale) {
        fail("DegenerateDirection", "direction nearly orthogonal to the ones vector");
    }
    const Eigen::VectorXd psi = model.p.col(a - 1);
    const double u = f.dot(psi) / fdot1;
    Eigen::VectorXd xi = psi - u * Eigen::VectorXd::Ones(model.k);
    return {u, xi};
}

std::vector<Triple> all_triples(const HmmModel& model) {
    std::vector<Triple> out;
    out.reserve(static_cast<std::size_t>(model.k) * model.l * model.l);
    for (int a = 1; a <= model.k; ++a)
        for (int b = 1; b <= model.l; ++b)
            for (int c = 1; c <= model.l; ++c) out.push_back({a, b, c});
    return out;
}

std::vector<Triple> all_observation_triples(const HmmModel& model) {
    std::vector<Triple> out;
    out.reserve(static_cast<std::size_t>(model.l) * model.l * model.l);
    for (int e = 1; e <= model.l; ++e)
        for (int b = 1; b <= model.l; ++b)
            for (int c = 1; c <= model.l; ++c) out.push_back({e, b, c});
    return out;
}

const RateEstimate& best_rate(const std::vector<RateEstimate>& rates) {
    if (rates.empty()) fail("TooFewPoints", "no rate estimates given");
    std::size_t best = 0;
    bool found = false;
    for (std::size_t i = 0; i < rates.size(); ++i) {
        if (std::isinf(rates[i].tau_hat) && rates[i].tau_hat < 0) continue;
        if (!found || rates[i].tau_hat > rates[best].tau_hat) {
            best = i;
            found = true;
        }
    }
    return rates[best];
}

} // namespace hmmlyap
