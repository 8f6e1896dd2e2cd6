"""
Exception hierarchy for the numerical library.

Every failure raised by app.physics derives from ZenolabError, so the
managers can translate them into standard error responses (and the CLI
into exit codes) without catching unrelated exceptions.
"""


class ZenolabError(Exception):
    """Base class for all library errors."""

    kind: str = "error"


class DomainError(ZenolabError, ValueError):
    """An argument lies outside the domain of the requested operation."""

    kind = "domain"


class DegenerateError(DomainError):
    """The requested quantity is a delta function or otherwise singular."""


class EmptyEnsembleError(DomainError):
    """An ensemble average was requested over zero members."""


class DivergenceError(ZenolabError, ArithmeticError):
    """The requested quantity is infinite for these parameters."""

    kind = "divergence"


class ConvergenceError(ZenolabError, RuntimeError):
    """A quadrature, series or residue check did not reach its tolerance."""

    kind = "convergence"
