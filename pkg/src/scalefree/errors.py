"""Exception types shared across the package.

The CLI maps these onto exit codes: ConfigError -> 2, ResourceCapError -> 3,
anything else -> 1.
"""


class ConfigError(ValueError):
    """Bad user-supplied configuration (unknown key, out-of-domain value)."""


class ResourceCapError(RuntimeError):
    """A requested computation exceeds a configured resource cap."""


class NonConvergenceError(RuntimeError):
    """An extrapolation did not stabilize; reported instead of silently returned."""
