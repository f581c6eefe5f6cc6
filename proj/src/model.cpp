#include "hmmlyap/model.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/SVD>

#include "hmmlyap/cocycle.hpp"

namespace hmmlyap {

namespace {

void check_stochastic(const Eigen::MatrixXd& m, const std::string& name) {
    for (int i = 0; i < m.rows(); ++i) {
        double sum = 0.0;
        for (int j = 0; j < m.cols(); ++j) {
            const double v = m(i, j);
            if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
                fail("NonStochastic", name + " entry (" + std::to_string(i + 1) + "," +
                                          std::to_string(j + 1) + ") outside [0,1]");
            }
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-9) {
            fail("NonStochastic",
                 name + " row " + std::to_string(i + 1) + " sums to " + std::to_string(sum));
        }
    }
}

} // namespace

Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& p) {
    const int k = static_cast<int>(p.rows());
    const Eigen::MatrixXd A = p.transpose() - Eigen::MatrixXd::Identity(k, k);

    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    lu.setThreshold(1e-12);
    if (lu.rank() < k - 1) fail("NotIrreducible", "stationary distribution is not unique");

    // Replace the redundant balance equation by the normalization row.
    Eigen::MatrixXd B = A;
    B.row(k - 1).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k);
    rhs(k - 1) = 1.0;

    Eigen::VectorXd x;
    bool solved = false;
    Eigen::FullPivLU<Eigen::MatrixXd> lu2(B);
    if (lu2.isInvertible()) {
        x = lu2.solve(rhs);
        solved = (p.transpose() * x - x).lpNorm<Eigen::Infinity>() <= 1e-12;
    }
    if (!solved) {
        x = Eigen::VectorXd::Constant(k, 1.0 / k);
        for (long long it = 0; it < 1000000; ++it) {
            Eigen::VectorXd y = p.transpose() * x;
            y /= y.sum();
            const double delta = (y - x).lpNorm<Eigen::Infinity>();
            x = y;
            if (delta <= 1e-14) {
                solved = true;
                break;
            }
        }
        if (!solved) fail("NotIrreducible", "power iteration did not converge");
    }

    for (int i = 0; i < k; ++i) {
        if (x(i) < -1e-12) fail("NotIrreducible", "stationary solution has negative mass");
    }
    x = x.cwiseMax(0.0);
    x /= x.sum();
    if ((x.array() <= 0.0).any()) {
        fail("NotIrreducible", "stationary mass vanishes on some state");
    }
    return x;
}

HmmModel build_model(const Eigen::MatrixXd& p, const Eigen::MatrixXd& q) {
    if (p.rows() < 2 || p.rows() != p.cols()) {
        fail("DimensionMismatch", "p must be square with k >= 2");
    }
    if (q.rows() != p.rows()) fail("DimensionMismatch", "q must have one row per state");
    if (q.cols() < p.rows()) fail("DimensionMismatch", "observation alphabet smaller than k");
    check_stochastic(p, "p");
    check_stochastic(q, "q");

    HmmModel m;
    m.k = static_cast<int>(p.rows());
    m.l = static_cast<int>(q.cols());
    m.p = p;
    m.q = q;
    m.pi = stationary_distribution(p);
    return m;
}

HypothesisReport check_hypotheses(const HmmModel& model, double rank_tol) {
    HypothesisReport rep;
    rep.min_p = model.p.minCoeff();
    rep.min_q = model.q.minCoeff();
    rep.det_p = model.p.determinant();
    rep.sigma_min_q =
        Eigen::JacobiSVD<Eigen::MatrixXd>(model.q).singularValues()(model.k - 1);
    rep.h1_holds = rep.min_p > 0.0 && rep.min_q > 0.0;
    rep.h2_holds = std::abs(rep.det_p) > rank_tol && rep.sigma_min_q > rank_tol;
    rep.R = rep.min_q > 0.0 ? 1.0 / rep.min_q : std::numeric_limits<double>::infinity();

    // phi = min over symbols and index tuples of the cross ratio
    // (L_z)_{r,j}(L_z)_{s,i} / ((L_z)_{s,j}(L_z)_{r,i}); any zero entry of
    // some L_z collapses it to 0.
    double phi = 1.0;
    for (int z = 1; z <= model.l; ++z) {
        const Eigen::MatrixXd L = observation_matrix(model, z);
        if (L.minCoeff() <= 0.0) {
            phi = 0.0;
            break;
        }
        for (int i = 0; i < model.k; ++i)
            for (int j = 0; j < model.k; ++j)
                for (int r = 0; r < model.k; ++r)
                    for (int s = 0; s < model.k; ++s) {
                        const double ratio = (L(r, j) * L(s, i)) / (L(s, j) * L(r, i));
                        if (ratio < phi) phi = ratio;
                    }
    }
    rep.phi = phi;
    rep.alpha = (1.0 - std::sqrt(phi)) / (1.0 + std::sqrt(phi));
    return rep;
}

Eigen::VectorXd observation_marginal(const HmmModel& model) {
    return model.q.transpose() * model.pi;
}

} // namespace hmmlyap
