"""hypoeig: complex eigenvalues of -f'' + (x^l - zeta*x^k)^2 f = 0 on R.

Predicts (closed-form asymptotics), refines (two-sided WKB shooting +
complex Newton), and certifies (argument-principle winding) the array of
complex zeta for which the equation has a bounded solution, and validates
the underlying Watson-lemma asymptotics against direct quadrature.
"""

from .params import (CaseClass, DerivedParams, OperatorParams, StratumReport,
                     classify_case, derive_params, is_open_case, stratify)
from .asymptotics import (PredictionPair, leading_Cs, leading_Dplus,
                          predict_xi_paper, predict_xi_solved, predict_zeta,
                          prediction_pair, s_of_v, watson_I, watson_halfline,
                          watson_phi, xi_to_zeta, zeta_to_xi)
from .quadrature import (QuadratureResult, ToleranceNotReached, eval_I,
                         eval_g_tilde, eval_phi)
from .shooting import (CERTIFICATION_RESIDUAL, IntegrationError,
                       NotAnEigenvalueError, ShootingConfig, SolutionState,
                       connection_mismatch, eigenfunction_profile,
                       make_config, ray_angles, ray_bump_exponents, wkb_init)
from .rootfind import (EigenvalueRecord, WindingReport, refine, scan,
                       winding_number)

__version__ = "0.1.0"

__all__ = [
    "CaseClass", "DerivedParams", "OperatorParams", "StratumReport",
    "classify_case", "derive_params", "is_open_case", "stratify",
    "PredictionPair", "leading_Cs", "leading_Dplus", "predict_xi_paper",
    "predict_xi_solved", "predict_zeta", "prediction_pair", "s_of_v",
    "watson_I", "watson_halfline", "watson_phi", "xi_to_zeta", "zeta_to_xi",
    "QuadratureResult", "ToleranceNotReached", "eval_I", "eval_g_tilde",
    "eval_phi",
    "CERTIFICATION_RESIDUAL", "IntegrationError", "NotAnEigenvalueError",
    "ShootingConfig", "SolutionState", "connection_mismatch",
    "eigenfunction_profile", "make_config", "ray_angles",
    "ray_bump_exponents", "wkb_init",
    "EigenvalueRecord", "WindingReport", "refine", "scan", "winding_number",
    "__version__",
]
