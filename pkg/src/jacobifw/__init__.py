"""Projection-free constrained optimization: Frank-Wolfe and a
Jacobi-polynomial accelerated variant, with the oracles, objectives,
datasets, and benchmark harness to compare their convergence."""

from .errors import (BetaZero, ConfigError, DataError, DegenerateConfigWarning,
                     DegenerateParams, DegenerateTestSet, DuplicateRating,
                     EmptyDataset, InfeasibleStart, InsufficientData,
                     JacobiFWError, NoConvergence, NonpositiveGap,
                     OmegaRangeWarning, ParseError, QuadratureUnderResolved,
                     ShapeMismatch, ZeroMatrix)
from .linalg import SingularTriple, power_iteration, top_singular_values
from .objectives import (HuberRidgeObjective, LogisticObjective,
                         MatrixCompletionObjective, QuadraticObjective, huber,
                         huber_grad, normalized_test_error)
from .oracles import (ConstraintSet, contains, defining_norm, diameter, lmo,
                      L1_BALL, L2_BALL, NUCLEAR_BALL)
from .polynomials import (JacobiParams, RecurrenceCoeffs, eval_jacobi,
                          expand_coeffs, omega, recurrence_coeffs,
                          recurrence_table, weighted_inner_product,
                          weighted_poly_norm)
from .solvers import (FW, JFW, SolverConfig, TraceRecord, descent_bound,
                      duality_gap, gap_bound_fw, gap_bound_jfw, run_fw,
                      run_jfw, step_size)
from .data import (RatingDataset, TabularDataset, inject_outliers,
                   load_breast_cancer, load_movielens, load_pima,
                   save_movielens, synth_quadratic, train_test_split)

__version__ = "0.1.0"
