"""Numerical tolerance ladder used throughout the library.

Validation of state objects is strictest, equality assertions on entropies
are looser, and rate comparisons sit in between.  Reported values are never
rounded; formatting happens only in the CLI.
"""

# State validation: normalization, hermiticity, trace, eigenvalue floor.
VALIDATION_ATOL = 1e-10

# Equality assertions between entropies (bits).
EQUALITY_ATOL = 1e-8

# Comparisons between rates and feasibility slack.
RATE_ATOL = 1e-9

# Frozen reference values and exact covariance identities.
EXACT_ATOL = 1e-12

# An entropy at or below this threshold is treated as an exactly product cut.
ZERO_ENTROPY_ATOL = 1e-9

# Eigenvalues at or below this threshold contribute nothing to an entropy.
EIGENVALUE_CUTOFF = 1e-12
