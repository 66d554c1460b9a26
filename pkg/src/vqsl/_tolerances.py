"""Numerical tolerances shared by the library and its tests."""

HERMITIAN_ATOL = 1e-10
TRACE_ATOL = 1e-10
PSD_ATOL = 1e-9
UNITARY_ATOL = 1e-12
COMPLETENESS_ATOL = 1e-10

# Jacobi sweeps stop once the off-diagonal Frobenius mass drops below this
# (relative to max(1, ||A||_F)).
JACOBI_OFFDIAG_TOL = 1e-14
JACOBI_MAX_SWEEPS = 60
MOMENT_ATOL = 1e-8

# |d| below this switches G and dG/dt to their series forms.
SERIES_SWITCH = 1e-6
AMPLITUDE_IMAG_ATOL = 1e-12

# Below this 1 - G**2 is treated as zero when differentiating sqrt(1 - G**2).
SQRT_GUARD = 1e-12

QSL_X_EPS = 1e-12
QUAD_REL_TOL = 1e-6
QUAD_MAX_INTERVALS = 2 ** 14

PPT_ATOL = 1e-10
