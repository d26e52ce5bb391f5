"""Exception types shared across the package."""


class SpecError(ValueError):
    """A group or parameter specification violates its invariants."""


class SizeGuardError(SpecError):
    """A group spec's expected order exceeds the configured size guard."""


class OracleError(RuntimeError):
    """The character-table oracle produced an internally inconsistent result.

    Raised on exact-arithmetic violations (non-integral codegree, degree sum
    mismatch, bad multiplicity lift).  Always indicates a bug, never bad input.
    """


class CheckpointError(ValueError):
    """A checkpoint file is corrupt or incompatible with the requested run."""
