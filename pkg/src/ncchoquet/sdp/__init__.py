"""Semidefinite programming engine: interior point core, block API, LMI modeling."""

from .ipm import ConeProblem, ConeResult, IpmSettings, ipm_solve
from .lmi import FAILURE, INFEASIBLE, OPT, UNBOUNDED, Affine, Lmi, LmiResult, asum, bmat, kron
from .problem import SdpProblem, SdpSolution, solve, verify_solution

__all__ = [
    "Affine", "ConeProblem", "ConeResult", "FAILURE", "INFEASIBLE", "IpmSettings", "Lmi",
    "LmiResult", "OPT", "SdpProblem", "SdpSolution", "UNBOUNDED", "asum", "bmat",
    "ipm_solve", "kron", "solve", "verify_solution",
]
