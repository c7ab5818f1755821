"""Monte Carlo model of optical entanglement swapping built entirely from
classical pieces: a reified Gaussian vacuum, cosh/sinh-mixed Jones vectors,
threshold detectors, and post-selection on heralding click patterns.

The library exposes the source model (:mod:`fields`), optical elements and
detectors (:mod:`optics`), heralding policies (:mod:`bsm`), state
reconstruction (:mod:`tomography`), CHSH scoring (:mod:`chsh`), the sweep
driver (:mod:`harness`), persistence (:mod:`results`), and independent
oracles (:mod:`validate`).
"""

from .bsm import BsmOutcome, BsmPolicy, bsm_measure, port_clicks, success_mask
from .chsh import (ChshCounts, ChshResult, ChshSettings, chsh_score,
                   chsh_score_from_state, ideal_singlet_correlation,
                   result_from_correlations)
from .config import (ParseError, RunConfig, ValidationError, expand_range,
                     parse_config, write_config)
from .fields import (RandomJonesPair, SqueezeParams, VacuumRealization,
                     generate_source_pair, sample_source_pair, sample_vacuum)
from .harness import (EmptyInput, InsufficientEvents, PointResult, SweepResult,
                      TrialResult, aggregate, derive_rng, run_point, run_sweep,
                      run_trial, trial_rng)
from .optics import (AnalyzerOutcome, analyze, basis_transform, beam_splitter,
                     click, effective_gamma, rotate)
from .results import (CSV_HEADER, load_state, results_csv, rho_from_pairs,
                      rho_to_pairs, write_results)
from .tomography import (BASES, CountsTable, DegenerateState, PAULI, SINGLET,
                         ZeroValidCounts, density_from_tensor, pauli_tensor,
                         project_physical, reconstruct, singlet_fidelity)

__version__ = "0.1.0"

__all__ = [
    "AnalyzerOutcome", "BASES", "BsmOutcome", "BsmPolicy", "CSV_HEADER",
    "ChshCounts", "ChshResult", "ChshSettings", "CountsTable",
    "DegenerateState", "EmptyInput", "InsufficientEvents", "PAULI",
    "ParseError", "PointResult", "RandomJonesPair", "RunConfig", "SINGLET",
    "SqueezeParams", "SweepResult", "TrialResult", "VacuumRealization",
    "ValidationError", "ZeroValidCounts", "aggregate", "analyze",
    "basis_transform", "beam_splitter", "bsm_measure", "chsh_score",
    "chsh_score_from_state", "click", "density_from_tensor", "derive_rng",
    "effective_gamma", "expand_range", "generate_source_pair",
    "ideal_singlet_correlation", "load_state", "parse_config", "pauli_tensor",
    "port_clicks", "project_physical", "reconstruct", "result_from_correlations",
    "results_csv", "rho_from_pairs", "rho_to_pairs", "rotate", "run_point",
    "run_sweep", "run_trial", "sample_source_pair", "sample_vacuum",
    "singlet_fidelity", "success_mask", "trial_rng", "write_config",
    "write_results",
]
