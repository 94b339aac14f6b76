"""Verification toolkit for Petrovskii parabolic initial-boundary value
problems in generalized anisotropic Sobolev spaces: parabolicity checks,
weighted spectral norms with slowly varying function parameters,
compatibility-condition generation, and an empirical harness for the
two-sided solution-data estimate on desk-scale model problems."""

__version__ = "0.1.0"

from .compatibility import (CompatibilitySystem, TraceFamily,
                            build_boundary_expr, build_traces,
                            compatibility_residuals, exceptional_set,
                            is_exceptional, trace_orders)
from .errors import (DomainError, ExceptionalRegularityError,
                     InterpolationRangeError, InvariantViolationError,
                     NormRangeError, ParawellError, RootFindingError,
                     RootSplitError, SpecFormatError, StructuralError)
from .extension import AxisSpec, polynomial_to_field, reflection_weights
from .interpolation import (InterpolationParam, default_identity_grid,
                            interpolate_diag, midpoint_eps_independence,
                            midpoint_space_weights, psi_eval,
                            verify_weight_identity)
from .parabolicity import (BoundarySample, ConditionIIReport, ConditionIReport,
                           InteriorSample, ParabolicityReport, RootSplit,
                           check_condition_i, check_condition_ii,
                           check_parabolicity, condition_i_samples,
                           condition_ii_samples, covering_rows,
                           remainder_matrix, split_roots_zeta)
from .polynomials import Poly, poly_close
from .runner import RunReport, run
from .spectral import (EmbeddingConstants, SpectralField, aniso_norm,
                       aniso_weight, embedding_constants, iso_norm, l2_norm,
                       load_field, parseval_roundtrip_error, random_field,
                       save_field)
from .specfile import (RunConfig, fixture_path, load_config, load_problem,
                       parse_phi, parse_sections)
from .symbols import (DomainDescriptor, Face, PolyMatrix, ProblemSpec,
                      adjugate_symbol, det_poly_in_p, det_poly_in_zeta,
                      principal_symbol_A, principal_symbol_B,
                      zeta_boundary_matrix, zeta_symbol_matrix)
from .verifier import (LambdaImage, apply_lambda, apply_lambda_spectral,
                       fixed_mode_ratios, isomorphism_sweep,
                       manufactured_solution, q_norm, solution_norm,
                       sweep_box)
from .weights import (DEFAULT_SPLICE_RADIUS, BoundednessReport, KaramataReport,
                      RegularityIndex, SlowlyVaryingFn, boundedness_check,
                      eval_phi, karamata_check)
