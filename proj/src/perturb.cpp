#include "hmmlyap/perturb.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace hmmlyap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_binary(int z) {
    if (z != 0 && z != 1) fail("SymbolOutOfRange", "binary symbol " + std::to_string(z));
}

// Moebius coefficients of the one-step h map for the symbol pair (z1, z2).
// All entries carry a common ||e_{z1}||^2 factor that cancels in the map and
// is divided out in rho.
struct UTab {
    double u1, u2, u3, u4;
};

UTab make_utab(const PerturbModel& pm, int z1, int z2) {
    const double ratio = pm.e[z1].squaredNorm() / pm.f[z1].squaredNorm();
    UTab t;
    t.u1 = ratio * (pm.A[z1] * pm.e[z2]).dot(pm.f[z1]);
    t.u2 = ratio * (pm.A[z1] * pm.f[z2]).dot(pm.f[z1]);
    const double u3_0 = (pm.M[z1] * pm.e[z2]).dot(pm.e[z1]);
    const double u3_1 = (pm.A[z1] * pm.e[z2]).dot(pm.e[z1]);
    const double u4_0 = (pm.M[z1] * pm.f[z2]).dot(pm.e[z1]);
    const double u4_1 = (pm.A[z1] * pm.f[z2]).dot(pm.e[z1]);
    t.u3 = u3_0 + pm.epsilon * u3_1;
    t.u4 = u4_0 + pm.epsilon * u4_1;
    return t;
}

double moebius(const PerturbModel& pm, const UTab& t, double h_next) {
    return (t.u1 + pm.epsilon * t.u2 * h_next) / (t.u3 + pm.epsilon * t.u4 * h_next);
}

// All four symbol-pair tables, indexed [z1][z2].
void fill_tabs(const PerturbModel& pm, UTab tabs[2][2]) {
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) tabs[a][b] = make_utab(pm, a, b);
}

// h at the window start truncated at depth d: terminal 0 consumed backward
// through symbols z[start+d-1], ..., z[start].
double h_truncated(const std::vector<int>& z, std::size_t start, int depth,
                   const UTab tabs[2][2], const PerturbModel& pm) {
    double h = 0.0;
    for (int d = depth; d >= 1; --d) {
        const int z1 = z[start + static_cast<std::size_t>(d - 1)];
        const int z2 = z[start + static_cast<std::size_t>(d)];
        h = moebius(pm, tabs[z1][z2], h);
    }
    return h;
}

std::vector<int> window_binary(const ObservationWindow& w, std::size_t need) {
    if (w.symbols.size() < need) {
        fail("WindowTooShort", "need " + std::to_string(need) + " forward symbols, got " +
                                   std::to_string(w.symbols.size()));
    }
    return to_binary(w.symbols);
}

} // namespace

PerturbModel build_perturb(double p0, double p1, double epsilon) {
    const double beta = std::min(std::min(p0, 1.0 - p0), std::min(p1, 1.0 - p1));
    if (!(beta > 0.0)) fail("DegenerateParameters", "p0 and p1 must lie strictly in (0,1)");
    if (p0 == p1) fail("DegenerateParameters", "p0 = p1 gives a singular chain");
    if (!(epsilon >= 0.0) || epsilon >= 1.0 || epsilon == 0.5) {
        fail("InvalidEpsilon", "epsilon must lie in [0,1) and differ from 1/2");
    }

    PerturbModel pm;
    pm.p0 = p0;
    pm.p1 = p1;
    pm.epsilon = epsilon;
    pm.beta = beta;
    pm.D = 16.0 / (beta * beta * beta * beta * beta);
    pm.eps0 = eps0_bound(beta, pm.D);
    pm.pi << p1 / (1.0 - p0 + p1), (1.0 - p0) / (1.0 - p0 + p1);

    Eigen::Matrix2d P;
    P << p0, 1.0 - p0, p1, 1.0 - p1;
    for (int b = 0; b < 2; ++b) {
        pm.e[b] = P.col(b);
        pm.f[b] << -pm.e[b](1), pm.e[b](0);
        pm.M[b].setZero();
        pm.M[b].col(b) = pm.e[b];
    }
    pm.A[1] << p0, -(1.0 - p0), p1, -(1.0 - p1);
    pm.A[0] = -pm.A[1];
    return pm;
}

HmmModel to_hmm(const PerturbModel& pm) {
    Eigen::MatrixXd p(2, 2), q(2, 2);
    p << pm.p0, 1.0 - pm.p0, pm.p1, 1.0 - pm.p1;
    q << 1.0 - pm.epsilon, pm.epsilon, pm.epsilon, 1.0 - pm.epsilon;
    return build_model(p, q);
}

std::vector<int> to_binary(const std::vector<int>& symbols) {
    std::vector<int> out;
    out.reserve(symbols.size());
    for (int z : symbols) {
        if (z != 1 && z != 2) fail("SymbolOutOfRange", "symbol " + std::to_string(z));
        out.push_back(z - 1);
    }
    return out;
}

FixedPointResult solve_h(const PerturbModel& pm, const ObservationWindow& forward, int m,
                         bool rigorous) {
    if (m < 1) fail("WindowTooShort", "depth must be at least 1");
    const std::vector<int> z = window_binary(forward, static_cast<std::size_t>(m) + 1);
    UTab tabs[2][2];
    fill_tabs(pm, tabs);

    // H(d) for d = 0..m; the successive differences estimate the contraction
    // factor of the depth map.
    double prev_delta = -1.0;
    double contraction = 0.0;
    double h_prev = 0.0;
    double h = 0.0;
    for (int d = 0; d <= m; ++d) {
        h = h_truncated(z, 0, d, tabs, pm);
        if (d >= 1) {
            const double delta = std::abs(h - h_prev);
            if (d >= 2 && prev_delta > 0.0) {
                contraction = std::max(contraction, delta / prev_delta);
            }
            prev_delta = delta;
        }
        h_prev = h;
    }

    if (rigorous && pm.epsilon > pm.eps0) {
        fail("OutsideValidity", "epsilon exceeds the rigorous threshold");
    }
    if (!rigorous && !(contraction < 1.0)) {
        fail("ContractionFailure", "depth iteration is not contracting");
    }

    FixedPointResult res;
    res.h_value = h;
    res.iterations = m;
    res.window_used = m + 1;
    res.contraction_estimate = contraction;
    res.error_bound = rigorous ? pm.D * std::pow(2.0, -static_cast<double>(m))
                               : pm.D * std::pow(contraction, static_cast<double>(m));
    return res;
}

double rho_eval(const PerturbModel& pm, int z1, int z2, double h_next) {
    check_binary(z1);
    check_binary(z2);
    const UTab t = make_utab(pm, z1, z2);
    return (t.u3 + pm.epsilon * h_next * t.u4) / pm.e[z1].squaredNorm();
}

double verify_eigenrelation(const PerturbModel& pm, const ObservationWindow& forward, int m) {
    if (m < 1) fail("WindowTooShort", "depth must be at least 1");
    const std::vector<int> z = window_binary(forward, static_cast<std::size_t>(m) + 2);
    UTab tabs[2][2];
    fill_tabs(pm, tabs);

    const double hA = h_truncated(z, 0, m, tabs, pm);
    const double hB = h_truncated(z, 1, m, tabs, pm);
    const int z1 = z[0];
    const int z2 = z[1];

    const Eigen::Vector2d gA = pm.e[z1] + pm.epsilon * hA * pm.f[z1];
    const Eigen::Vector2d gB = pm.e[z2] + pm.epsilon * hB * pm.f[z2];
    const Eigen::Matrix2d L = pm.M[z1] + pm.epsilon * pm.A[z1];
    const double rho = rho_eval(pm, z1, z2, hB);
    return (L * gB - rho * gA).norm();
}

BirkhoffEstimate lambda1_birkhoff(const PerturbModel& pm, long long N, std::uint64_t seed,
                                  int m, int batches) {
    if (N < 1) fail("TooFewPoints", "need at least one term");
    if (m < 1) fail("WindowTooShort", "depth must be at least 1");
    if (batches < 2) fail("TooFewPoints", "need at least 2 batches");
    if (N < batches) fail("TooFewPoints", "need at least one term per batch");

    const HmmModel model = to_hmm(pm);
    const SamplePath path = sample_path(model, N + m + 1, seed);
    const std::vector<int> z = to_binary(path.z);

    UTab tabs[2][2];
    fill_tabs(pm, tabs);

    const long long batch_len = N / batches;
    const long long n_used = batch_len * batches;
    std::vector<double> batch_sums(static_cast<std::size_t>(batches), 0.0);
    double total = 0.0;
    for (long long t = 0; t < n_used; ++t) {
        const double h_next = h_truncated(z, static_cast<std::size_t>(t) + 1, m, tabs, pm);
        const UTab& tab = tabs[z[static_cast<std::size_t>(t)]]
                              [z[static_cast<std::size_t>(t) + 1]];
        const double rho = (tab.u3 + pm.epsilon * h_next * tab.u4) /
                           pm.e[z[static_cast<std::size_t>(t)]].squaredNorm();
        if (!(rho > 0.0)) {
            fail("NonPositiveRho", "sampled eigen coordinate is not positive at step " +
                                       std::to_string(t));
        }
        const double lr = std::log(rho);
        total += lr;
        batch_sums[static_cast<std::size_t>(t / batch_len)] += lr;
    }

    BirkhoffEstimate est;
    est.n_terms = n_used;
    est.lambda1 = total / static_cast<double>(n_used);
    double var = 0.0;
    for (int b = 0; b < batches; ++b) {
        const double mean_b = batch_sums[static_cast<std::size_t>(b)] /
                              static_cast<double>(batch_len);
        var += (mean_b - est.lambda1) * (mean_b - est.lambda1);
    }
    est.std_error = std::sqrt(var / (static_cast<double>(batches) * (batches - 1)));
    return est;
}

RateBound binary_rate_bound(const PerturbModel& pm) {
    const auto H = [](double x) { return x * std::log(x) + (1.0 - x) * std::log(1.0 - x); };
    const double logdet = std::log(std::abs(pm.p0 - pm.p1));
    RateBound rb;
    rb.bound = std::log(pm.epsilon) + logdet -
               2.0 * (pm.pi(0) * H(pm.p0) + pm.pi(1) * H(pm.p1));
    rb.ledet = std::log(pm.epsilon) + std::log1p(-pm.epsilon) + logdet;
    return rb;
}

double eps0_bound(double beta, double D) {
    if (!(beta > 0.0) || !(D > 0.0)) fail("DegenerateParameters", "beta and D must be positive");
    const double b3 = beta * beta * beta;
    const double two_over_b2 = 2.0 / (beta * beta);
    const auto valid = [&](double eps) {
        const double den = b3 - 4.0 * eps * D - 4.0 * eps - 4.0 * eps * eps;
        if (!(den > 0.0)) return false;
        const double g1 = two_over_b2 * (4.0 + 4.0 * eps * D) / den;
        const double g2 = eps * two_over_b2 * 16.0 / (den * den);
        return g1 <= D && g2 <= 0.5;
    };
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (valid(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo;
}

} // namespace hmmlyap
