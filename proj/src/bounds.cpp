#include "hmmlyap/bounds.hpp"

#include <cmath>
#include <limits>

namespace hmmlyap {

double proposition_lower_bound(const HmmModel& model) {
    if (model.k < 2) fail("DimensionMismatch", "bound needs at least two states");
    const double det = std::abs(model.p.determinant());
    if (det <= 1e-300) fail("DegenerateDeterminant", "transition matrix is singular");
    const HypothesisReport hyp = check_hypotheses(model);
    const double km1 = static_cast<double>(model.k - 1);
    // R = inf (a zero emission entry) drives the bound to -inf, which is the
    // honest statement: the proposition gives nothing there.
    return std::log(det) / km1 - static_cast<double>(model.k) / km1 * std::log(hyp.R);
}

BoundsReport verify_all(const HmmModel& model, const LyapunovEstimate& lyap,
                        const std::vector<RateEstimate>& rates, double tol) {
    BoundsReport report;

    const auto clusters = cluster_exponents(lyap);
    if (clusters.size() >= 2) {
        report.lyap_gap = clusters[1].first - clusters[0].first;
    } else {
        report.lyap_gap = 0.0;
    }

    try {
        report.prop_lower_bound = proposition_lower_bound(model);
    } catch (const Error&) {
        // Singular p: the closed-form bound is vacuous, not an input error here.
        report.prop_lower_bound = -std::numeric_limits<double>::infinity();
    }

    const double expected = expected_log_det(model);
    double sum = 0.0;
    for (int j = 0; j < lyap.lambdas.size(); ++j) sum += lyap.lambdas(j);
    if (std::isinf(sum) && std::isinf(expected) && sum < 0 && expected < 0) {
        report.det_identity_residual = 0.0;
    } else {
        report.det_identity_residual = std::abs(sum - expected);
    }

    for (const RateEstimate& r : rates) {
        if (r.tau_hat > report.lyap_gap + tol) report.theorem1_violations.push_back(r.triple);
    }

    const HypothesisReport hyp = check_hypotheses(model);
    if (hyp.h2_holds && !rates.empty()) {
        const RateEstimate& best = best_rate(rates);
        report.theorem2_attained = std::abs(best.tau_hat - report.lyap_gap) <= tol;
    }
    return report;
}

} // namespace hmmlyap
