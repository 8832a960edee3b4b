"""Affine-invariant Loomis-Whitney / Bollobas-Thomason constants and exact verification."""
from .constants import bl1, bl2, bl_duality_check, log_bl1, log_bl2, log_prefactor, PrefactorSpec
from .covers import IndexCover, CoverError, lw_cover, named_cover, partition_cover
from .linalg import Basis, Subspace, dual_basis, wedge
from .polytope import Polytope, named_body, random_polytope, standard_body
from .inequalities import (VerificationReport, eval_affine_bt, eval_dual_bt, eval_local_lw, eval_restricted_dual,
                           gl_transform)
from .functional import LogConcaveFn, cone, exp_norm, indicator
from .harness import SuiteConfig, evaluate, run_suite

__version__ = "0.1.0"
