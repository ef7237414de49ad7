"""Boundary integral solver for 2D exterior Helmholtz and Laplace problems with
mixed Dirichlet/Neumann boundary data.

The kernel fill and Bessel evaluation run in a compiled extension when it is
built; otherwise a pure-numpy fallback is used.  Set ``MIXBIE_PURE_PYTHON=1``
to force the fallback.
"""

from importlib import metadata as _metadata

from mixbie._backend import active as active_backend, set_backend
from mixbie.formulations import (BlockSystem, build_cfie_dirichlet, build_laplace_split,
                                 build_mixed_regularized, build_neumann_regularized,
                                 build_single_layer_dirichlet)
from mixbie.geometry import CURVES, BoundaryMesh, ParamCurve, build_mesh, make_curve
from mixbie.harness import ExperimentConfig, ResultRow, laplace_compare, run_sweep
from mixbie.linsolve import SingularMatrixError, condition_number, solve_dense
from mixbie.operators import eval_potential, layer_matrices, target_matrices
from mixbie.specfun import bessel01, hankel1

try:
    __version__ = _metadata.version("artifact")
except _metadata.PackageNotFoundError:
    __version__ = "unknown"

__all__ = [
    "BlockSystem", "BoundaryMesh", "CURVES", "ExperimentConfig", "ParamCurve", "ResultRow",
    "SingularMatrixError", "active_backend", "bessel01", "build_cfie_dirichlet",
    "build_laplace_split", "build_mesh", "build_mixed_regularized",
    "build_neumann_regularized", "build_single_layer_dirichlet", "condition_number",
    "eval_potential", "hankel1", "laplace_compare", "layer_matrices", "make_curve",
    "run_sweep", "set_backend", "solve_dense", "target_matrices", "__version__",
]
