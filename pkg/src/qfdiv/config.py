"""Numerical tolerances and caps.

Every threshold here is an artifact choice: the underlying mathematics is exact.
Functions take these as keyword defaults so a caller can override per call.
"""

HERM_TOL = 1e-10      # ||A - A*|| relative to max(1, ||A||)
PSD_TOL = 1e-10       # min eigenvalue >= -PSD_TOL * lambda_max
SUPP_TOL = 1e-10      # eigenvalues <= SUPP_TOL * lambda_max count as zero
CLUSTER_TOL = 1e-8    # relative gap below which eigenvalues merge
RATIO_TOL = 1e-8      # equal-ratio detection for spectra of Delta
VERDICT_TOL = 1e-8    # residual threshold for reversibility verdicts
DIM_CAP = 4096        # largest matrix dimension produced by tensor powers
QUAD_RTOL = 1e-8      # quadrature relative target (we ask QUADPACK for more)
QUAD_LIMIT = 200      # subintervals per QUADPACK call
FALSIFIER_SAMPLES = 500
COCYCLE_GRID = 16     # points in [-2, 2]
FD_STEP = 1e-5
