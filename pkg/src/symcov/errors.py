"""Exception types shared across the package."""


class FormatError(ValueError):
    """Malformed input file (bad header shape, ragged rows, unparsable values)."""


class InfeasibleError(RuntimeError):
    """The requested statistical procedure cannot run on this input.

    Examples: too few usable weight values to fit a model, or simulation
    parameters that imply rejecting more than half of all draws.
    """
