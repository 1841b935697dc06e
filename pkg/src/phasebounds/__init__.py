"""Bayesian and hybrid Cramer-Rao bounds for the dynamical carrier-phase
estimation of M-QAM/BPSK signals under Wiener phase noise with an
unknown linear drift."""

from .closed_form import (BoundValue, ClosedFormCoefs, bcrb_offline,
                          bcrb_online, coefs, det_b, h11_inv_edge,
                          hcrb_offline, hcrb_online)
from .errors import ConsistencyError, RejectedInput, SingularMatrixError
from .fisher import FisherEstimate, fisher_da, fisher_nda_mc, nda_curvature
from .info_matrix import (HimBlocks, build_bim, build_him, oracle_bcrb_diag,
                          oracle_hcrb_diag)
from .model import (Constellation, PhaseModel, build_constellation,
                    noise_variance)
from .sweep import (BoundSeries, SweepSpec, nda_da_threshold, run_sweep,
                    sweep_position, sweep_snr)

__all__ = [
    "BoundSeries", "BoundValue", "ClosedFormCoefs", "Constellation",
    "ConsistencyError", "FisherEstimate", "HimBlocks", "PhaseModel",
    "RejectedInput", "SingularMatrixError", "SweepSpec", "bcrb_offline",
    "bcrb_online", "build_bim", "build_constellation", "build_him", "coefs",
    "det_b", "fisher_da", "fisher_nda_mc", "h11_inv_edge", "hcrb_offline",
    "hcrb_online", "nda_curvature", "nda_da_threshold", "noise_variance",
    "oracle_bcrb_diag", "oracle_hcrb_diag", "run_sweep", "sweep_position",
    "sweep_snr",
]

__version__ = "0.1.0"
