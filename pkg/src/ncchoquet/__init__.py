"""Finite-level noncommutative Choquet theory: nc convex sets, extreme points, dilations,
convex envelopes, the Choquet and dilation orders, and decompositions on extreme points."""

import os as _os

_threads = _os.environ.get("NCC_THREADS")
if _threads:
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        _os.environ.setdefault(_var, _threads)

from .dilation import (Capped, ClassifyReport, DilationWitness, Maximal, NotRepresented,  # noqa: E402
                       Representable, classify_point, dilate_to_maximal, euclidean_extreme,
                       find_one_step_dilation, is_irreducible, is_maximal, krein_milman_check,
                       random_dilation)
from .envelope import (DOMINATES, INCONCLUSIVE, VIOLATED, EnvelopeResult, OrderVerdict,  # noqa: E402
                       choquet_order_check, convex_envelope, dilation_order_check, jensen_check)
from .linalg import DEFAULT_TOL, NumericalFailure, Tolerances  # noqa: E402
from .moments import MomentRelaxation, UcpRep, barycenter, minimal_rep, standard_form  # noqa: E402
from .ncfunctions import FreePoly, HT, h_t, test_nc_convexity  # noqa: E402
from .ncset import (Inside, NcSet, Outside, Pencil, cuntz_truncation, hull_set,  # noqa: E402
                    interval_set, is_member, membership, opsys_set, pencil_set, row_ball_set,
                    sample_member)
from .point import NcPoint, compress, direct_sum, nc_combination  # noqa: E402
from .representation import (NcMeasure, decompose_irreducible, integrate,  # noqa: E402
                             represent_on_extreme)
from .separation import AffineFunctional, NotOutsideError, SeparationCertificate, separate, verify_certificate  # noqa: E402,E501

__version__ = "0.1.0"

__all__ = [
    "AffineFunctional", "Capped", "ClassifyReport", "DEFAULT_TOL", "DOMINATES", "DilationWitness",
    "EnvelopeResult", "FreePoly", "HT", "INCONCLUSIVE", "Inside", "Maximal", "MomentRelaxation",
    "NcMeasure", "NcPoint", "NcSet", "NotOutsideError", "NotRepresented", "NumericalFailure",
    "OrderVerdict", "Outside", "Pencil", "Representable", "SeparationCertificate", "Tolerances",
    "UcpRep", "VIOLATED", "barycenter", "choquet_order_check", "classify_point", "compress",
    "convex_envelope", "cuntz_truncation", "decompose_irreducible", "dilate_to_maximal",
    "dilation_order_check", "direct_sum", "euclidean_extreme", "find_one_step_dilation", "h_t",
    "hull_set", "integrate", "interval_set", "is_irreducible", "is_maximal", "is_member",
    "jensen_check", "krein_milman_check", "membership", "minimal_rep", "nc_combination",
    "opsys_set", "pencil_set", "random_dilation", "represent_on_extreme", "row_ball_set",
    "sample_member", "separate", "standard_form", "test_nc_convexity", "verify_certificate",
]
