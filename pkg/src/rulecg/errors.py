"""Exception types raised across the package."""


class RulecgError(Exception):
    """Base class for all package errors."""


class ParameterError(RulecgError, ValueError):
    """A function argument violates its documented precondition."""


class SchemaError(RulecgError, ValueError):
    """Input file structure does not match the expected schema."""


class IngestionError(RulecgError, ValueError):
    """A data cell could not be parsed or violates a dataset invariant."""


class UnsupportedTaskError(RulecgError, ValueError):
    """The dataset describes a task outside binary classification."""


class EvaluationError(RulecgError, ValueError):
    """A rule references features absent from the evaluated input."""


class RuleParseError(RulecgError, ValueError):
    """A serialized rule set could not be parsed; message names the location."""


class ShapeError(RulecgError, ValueError):
    """Array dimensions are incompatible with the model or operation."""


class TrainingError(RulecgError, RuntimeError):
    """Network training failed (e.g. loss diverged)."""


class ModelIOError(RulecgError, ValueError):
    """A model weight file is missing, corrupt, or has a wrong version."""


class SolverError(RulecgError, RuntimeError):
    """The LP solver failed to converge within its pivot budget."""


class SubstitutionError(RulecgError, RuntimeError):
    """No input-space candidate conjunction exists for a hidden rule."""
