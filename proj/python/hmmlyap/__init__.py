"""Observation cocycle spectra and filter memory-loss rates.

The compiled core lives in ``_hmmlyap``; installed wheels place it inside this
package, while in-tree test runs put it on ``sys.path`` directly.
"""

try:
    from ._hmmlyap import *  # noqa: F401,F403
    from ._hmmlyap import __doc__ as _core_doc
except ImportError:  # pragma: no cover - build-tree layout
    from _hmmlyap import *  # noqa: F401,F403
    from _hmmlyap import __doc__ as _core_doc

__all__ = [
    "Model",
    "DecayCurve",
    "PerturbModel",
    "mix64",
    "substream",
    "build_model",
    "check_hypotheses",
    "observation_marginal",
    "observation_matrix",
    "sample_path",
    "expected_log_det",
    "proposition_lower_bound",
    "lyapunov",
    "all_triples",
    "all_observation_triples",
    "delta_curve",
    "delta_bruteforce",
    "estimate_rate",
    "decompose_psi",
    "estimate_codim1_direction",
    "projective_ratio_curve",
    "build_perturb",
    "to_hmm",
    "rho_eval",
    "solve_h",
    "verify_eigenrelation",
    "lambda1_birkhoff",
    "binary_rate_bound",
    "eps0_bound",
]
