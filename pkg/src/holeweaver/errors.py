"""Exception taxonomy shared across the package.

The CLI maps these onto its exit codes: InputError and LimitError mean the
caller handed us something invalid (exit 2), ValidationError means an
analytic result disagreed with an independent check (exit 3), and
StructureError means a geometric structure we built or received is
internally inconsistent (also exit 2, since it traces back to the input).
"""


class HoleweaverError(Exception):
    """Base class for all package-specific errors."""


class InputError(HoleweaverError, ValueError):
    """Invalid argument, scenario, or file content."""


class StructureError(HoleweaverError):
    """A boundary structure is inconsistent (gaps, unbalanced junctions)."""


class LimitError(HoleweaverError):
    """A request exceeds a hard safety limit (e.g. exhaustive search size)."""


class ValidationError(HoleweaverError):
    """Analytic and oracle measurements disagree beyond tolerance."""
