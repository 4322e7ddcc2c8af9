"""Exception hierarchy shared by all steklab modules."""


class StekError(Exception):
    """Base class for every error raised by steklab."""

    exit_code = 2


class ParameterError(StekError, ValueError):
    """An argument is outside its admissible range."""


class GeometryError(StekError, ValueError):
    """A domain or mesh has degenerate or invalid geometry."""


class ParseError(StekError, ValueError):
    """A mesh, spectrum or config file could not be parsed."""


class TopologyError(StekError):
    """The mesh topology does not support the requested operation."""


class AssemblyError(StekError):
    """Finite element assembly failed (degenerate element)."""


class SpectrumIndexError(StekError, IndexError):
    """An eigenvalue index lies outside the available spectrum."""


class SizeError(StekError):
    """A combinatorial object would exceed the configured size cap."""


class PreconditionError(StekError):
    """An input fails a mathematical precondition of the operation."""


class InputError(StekError, ValueError):
    """A matrix input fails validation (not symmetric / not definite)."""


class ConfigurationError(StekError):
    """Inconsistent configuration, e.g. topology does not match spectra."""


class ConstructionError(StekError):
    """The witness-matrix construction could not be completed."""

    exit_code = 3


class InternalInvariantError(StekError):
    """An invariant that should be impossible to break was broken."""

    exit_code = 3
