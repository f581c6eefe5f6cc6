#include "hmmlyap/cocycle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/SVD>

namespace hmmlyap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Deterministic orthonormal completion: the identity column with the largest
// residual against the columns of Q before position j. The residual norms
// square-sum to k - j >= 1, so the best candidate is never degenerate.
Eigen::VectorXd complete_column(const Eigen::MatrixXd& Q, int j) {
    const int k = static_cast<int>(Q.rows());
    Eigen::VectorXd best;
    double best_nrm = -1.0;
    for (int c = 0; c < k; ++c) {
        Eigen::VectorXd v = Eigen::VectorXd::Unit(k, c);
        for (int i = 0; i < j; ++i) v -= Q.col(i).dot(v) * Q.col(i);
        const double nrm = v.norm();
        if (nrm > best_nrm) {
            best_nrm = nrm;
            best = v;
        }
    }
    return best / best_nrm;
}

// One Gram-Schmidt factorization W = Q R of W against fresh columns, with a
// re-orthogonalization pass. Collapsed columns (scale <= collapse_tol times
// the leading scale) get R_jj = 0 and a completed direction so later columns
// stay well defined.
Eigen::MatrixXd qr_factor(Eigen::MatrixXd& W, double collapse_tol) {
    const int r = static_cast<int>(W.cols());
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(r, r);
    double lead = 0.0;
    for (int j = 0; j < r; ++j) {
        Eigen::VectorXd v = W.col(j);
        for (int pass = 0; pass < 2; ++pass) {
            for (int i = 0; i < j; ++i) {
                const double c = W.col(i).dot(v);
                R(i, j) += c;
                v -= c * W.col(i);
            }
        }
        const double nrm = v.norm();
        if (j == 0) lead = nrm;
        if (nrm <= collapse_tol * lead || nrm == 0.0) {
            R(j, j) = 0.0;
            W.col(j) = complete_column(W, j);
        } else {
            R(j, j) = nrm;
            W.col(j) = v / nrm;
        }
    }
    return R;
}

Eigen::MatrixXd initial_frame(const HmmModel& model, int r, const Eigen::MatrixXd& given) {
    Eigen::MatrixXd F;
    if (given.size() > 0) {
        if (given.rows() != model.k || given.cols() != r) {
            fail("DimensionMismatch", "initial frame must be k x r");
        }
        F = given;
    } else {
        F = Eigen::MatrixXd::Identity(model.k, model.k).leftCols(r);
    }
    qr_factor(F, 0.0);
    return F;
}

std::vector<Eigen::MatrixXd> letter_matrices(const HmmModel& model) {
    std::vector<Eigen::MatrixXd> L;
    L.reserve(static_cast<std::size_t>(model.l));
    for (int z = 1; z <= model.l; ++z) L.push_back(observation_matrix(model, z));
    return L;
}

} // namespace

Eigen::MatrixXd observation_matrix(const HmmModel& model, int z0) {
    if (z0 < 1 || z0 > model.l) {
        fail("SymbolOutOfRange", "observation symbol " + std::to_string(z0));
    }
    Eigen::MatrixXd L(model.k, model.k);
    for (int i = 0; i < model.k; ++i)
        for (int j = 0; j < model.k; ++j) L(i, j) = model.q(j, z0 - 1) * model.p(i, j);
    return L;
}

Eigen::VectorXd cocycle_step(CocycleState& state, const Eigen::MatrixXd& L,
                             double collapse_tol) {
    Eigen::MatrixXd W = L * state.frame;
    const Eigen::MatrixXd R = qr_factor(W, collapse_tol);
    state.frame = W;
    const int r = static_cast<int>(R.rows());
    Eigen::VectorXd diag(r);
    for (int j = 0; j < r; ++j) {
        diag(j) = R(j, j);
        state.log_norms(j) += std::log(R(j, j));  // log 0 = -inf on collapse
    }
    state.steps += 1;
    return diag;
}

std::vector<int> past_order(const SamplePath& path) {
    return std::vector<int>(path.z.rbegin(), path.z.rend());
}

LyapunovEstimate lyapunov_spectrum(const HmmModel& model, const std::vector<int>& stream,
                                   const LyapunovOptions& opt) {
    const int k = model.k;
    const int r = opt.r > 0 ? opt.r : std::min(k, 2);
    if (r > k) fail("DimensionMismatch", "cannot track more exponents than states");
    if (!opt.permissive && (model.p.minCoeff() <= 0.0 || model.q.minCoeff() <= 0.0)) {
        fail("HypothesisViolated",
             "model has zero entries in p or q; pass permissive to admit it");
    }

    const long long avail = static_cast<long long>(stream.size()) - opt.warmup;
    if (opt.batches < 2) fail("TooFewPoints", "need at least 2 batches");
    if (avail < opt.batches) fail("WindowTooShort", "stream shorter than warmup plus batches");
    const long long batch_len = avail / opt.batches;
    const long long N = batch_len * opt.batches;

    const std::vector<Eigen::MatrixXd> L = letter_matrices(model);

    CocycleState st;
    st.frame = initial_frame(model, r, opt.initial_frame);
    st.log_norms = Eigen::VectorXd::Zero(r);

    auto check_symbol = [&](int z) {
        if (z < 1 || z > model.l) fail("SymbolOutOfRange", "symbol " + std::to_string(z));
    };

    for (long long s = 0; s < opt.warmup; ++s) {
        check_symbol(stream[static_cast<std::size_t>(s)]);
        cocycle_step(st, L[static_cast<std::size_t>(stream[static_cast<std::size_t>(s)] - 1)]);
    }
    st.log_norms.setZero();
    st.steps = 0;

    std::vector<bool> flags(static_cast<std::size_t>(r), false);
    Eigen::MatrixXd batch_sums = Eigen::MatrixXd::Zero(opt.batches, r);
    for (long long s = 0; s < N; ++s) {
        const int z = stream[static_cast<std::size_t>(opt.warmup + s)];
        check_symbol(z);
        const Eigen::VectorXd diag = cocycle_step(st, L[static_cast<std::size_t>(z - 1)]);
        const long long b = s / batch_len;
        for (int j = 0; j < r; ++j) {
            if (diag(j) == 0.0) flags[static_cast<std::size_t>(j)] = true;
            batch_sums(b, j) += std::log(diag(j));
        }
        if (opt.running && ((s + 1) % opt.running_stride == 0 || s + 1 == N)) {
            opt.running->push_back({static_cast<double>(s + 1),
                                    st.log_norms(0) / static_cast<double>(s + 1),
                                    r > 1 ? st.log_norms(1) / static_cast<double>(s + 1)
                                          : kNaN});
        }
    }

    LyapunovEstimate est;
    est.n_steps = N;
    est.lambdas = st.log_norms / static_cast<double>(N);
    est.std_errors = Eigen::VectorXd::Constant(r, kNaN);
    est.underflow_flags = flags;

    const int B = opt.batches;
    for (int j = 0; j < r; ++j) {
        if (flags[static_cast<std::size_t>(j)]) {
            est.lambdas(j) = -kInf;
            continue;
        }
        double var = 0.0;
        for (int b = 0; b < B; ++b) {
            const double mean_b = batch_sums(b, j) / static_cast<double>(batch_len);
            var += (mean_b - est.lambdas(j)) * (mean_b - est.lambdas(j));
        }
        est.std_errors(j) = std::sqrt(var / (static_cast<double>(B) * (B - 1)));
    }

    if (std::none_of(flags.begin(), flags.end(), [](bool f) { return f; })) {
        const double sum_mean = st.log_norms.sum() / static_cast<double>(N);
        double var = 0.0;
        for (int b = 0; b < B; ++b) {
            const double mean_b = batch_sums.row(b).sum() / static_cast<double>(batch_len);
            var += (mean_b - sum_mean) * (mean_b - sum_mean);
        }
        est.sum_std_error = std::sqrt(var / (static_cast<double>(B) * (B - 1)));
    } else {
        est.sum_std_error = kNaN;
    }

    // Benettin columns converge in sorted order; enforce the invariant on the
    // reported values while keeping each exponent paired with its error.
    std::vector<int> order(static_cast<std::size_t>(r));
    for (int j = 0; j < r; ++j) order[static_cast<std::size_t>(j)] = j;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        const double la = est.lambdas(a), lb = est.lambdas(b);
        if (std::isnan(la) || std::isnan(lb)) return false;
        return la > lb;
    });
    LyapunovEstimate sorted = est;
    for (int j = 0; j < r; ++j) {
        sorted.lambdas(j) = est.lambdas(order[static_cast<std::size_t>(j)]);
        sorted.std_errors(j) = est.std_errors(order[static_cast<std::size_t>(j)]);
        sorted.underflow_flags[static_cast<std::size_t>(j)] =
            est.underflow_flags[static_cast<std::size_t>(order[static_cast<std::size_t>(j)])];
    }
    return sorted;
}

double expected_log_det(const HmmModel& model) {
    const double det = std::abs(model.p.determinant());
    if (det == 0.0) return -kInf;
    double value = std::log(det);
    const Eigen::VectorXd marginal = observation_marginal(model);
    for (int z = 0; z < model.l; ++z) {
        if (marginal(z) == 0.0) continue;
        for (int i = 0; i < model.k; ++i) {
            if (model.q(i, z) == 0.0) return -kInf;
            value += marginal(z) * std::log(model.q(i, z));
        }
    }
    return value;
}

std::vector<std::pair<double, int>> cluster_exponents(const LyapunovEstimate& est,
                                                      double tol0, double se_mult) {
    double max_se = 0.0;
    for (int j = 0; j < est.std_errors.size(); ++j) {
        if (std::isfinite(est.std_errors(j))) max_se = std::max(max_se, est.std_errors(j));
    }
    const double threshold = std::max(tol0, se_mult * max_se);

    std::vector<std::pair<double, int>> clusters;
    double acc = 0.0;
    int count = 0;
    double prev = 0.0;
    for (int j = 0; j < est.lambdas.size(); ++j) {
        const double v = est.lambdas(j);
        if (count > 0 && (prev - v > threshold || std::isinf(v) != std::isinf(prev))) {
            clusters.emplace_back(acc / count, count);
            acc = 0.0;
            count = 0;
        }
        if (std::isinf(v)) {
            // -inf cluster: averaging would produce NaN, keep the value.
            acc = -kInf;
            count += 1;
            prev = v;
            continue;
        }
        acc += v;
        count += 1;
        prev = v;
    }
    if (count > 0) {
        clusters.emplace_back(std::isinf(acc) ? -kInf : acc / count, count);
    }
    return clusters;
}

Eigen::VectorXd estimate_codim1_direction(const HmmModel& model,
                                          const ObservationWindow& window) {
    const long long n = static_cast<long long>(window.symbols.size());
    if (n < 2) fail("WindowTooShort", "codimension-1 estimate needs at least 2 symbols");

    const std::vector<Eigen::MatrixXd> L = letter_matrices(model);
    const int k = model.k;
    Eigen::MatrixXd T = Eigen::MatrixXd::Identity(k, k);
    CocycleState st;
    st.frame = Eigen::MatrixXd::Identity(k, k);
    st.log_norms = Eigen::VectorXd::Zero(k);
    for (auto it = window.symbols.rbegin(); it != window.symbols.rend(); ++it) {
        if (*it < 1 || *it > model.l) fail("SymbolOutOfRange", "symbol " + std::to_string(*it));
        Eigen::MatrixXd W = L[static_cast<std::size_t>(*it - 1)] * st.frame;
        const Eigen::MatrixXd R = qr_factor(W, 1e-13);
        st.frame = W;
        T = R * T;
        T /= T.cwiseAbs().maxCoeff();
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(T, Eigen::ComputeFullV);
    Eigen::VectorXd f = svd.matrixV().col(0);
    int idx = 0;
    f.cwiseAbs().maxCoeff(&idx);
    if (f(idx) < 0) f = -f;
    return f;
}

ProjectiveRatios projective_ratio_curve(const HmmModel& model, const Eigen::VectorXd& w1,
                                        const Eigen::VectorXd& w2,
                                        const ObservationWindow& window) {
    if (w1.size() != model.k || w2.size() != model.k) {
        fail("DimensionMismatch", "start vectors must have one entry per state");
    }
    if ((w1.array() <= 0.0).any() || (w2.array() <= 0.0).any()) {
        fail("NonPositiveInput", "start vectors must be strictly positive");
    }

    const std::vector<Eigen::MatrixXd> L = letter_matrices(model);
    Eigen::VectorXd a = w1;
    Eigen::VectorXd b = w2;
    ProjectiveRatios out;
    out.gamma.reserve(window.symbols.size());
    out.delta.reserve(window.symbols.size());
    for (auto it = window.symbols.rbegin(); it != window.symbols.rend(); ++it) {
        if (*it < 1 || *it > model.l) fail("SymbolOutOfRange", "symbol " + std::to_string(*it));
        const Eigen::MatrixXd& M = L[static_cast<std::size_t>(*it - 1)];
        a = M * a;
        b = M * b;
        const double scale = b.maxCoeff();
        a /= scale;
        b /= scale;
        const Eigen::ArrayXd ratios = a.array() / b.array();
        out.gamma.push_back(ratios.maxCoeff());
        out.delta.push_back(ratios.minCoeff());
    }
    return out;
}

} // namespace hmmlyap
