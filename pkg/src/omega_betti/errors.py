"""Exception types.

Input problems derive from :class:`ValidationError` (CLI exit code 2).
Certificate failures derive from :class:`InvariantViolation` (exit code 3).
"""


class OmegaError(Exception):
    pass


class ValidationError(OmegaError, ValueError):
    pass


class DimensionMismatch(ValidationError):
    pass


class ParseError(ValidationError):
    def __init__(self, message: str, pos: int | None = None, text: str | None = None):
        self.pos = pos
        self.text = text
        if pos is not None:
            message = f"{message} at position {pos}"
        super().__init__(message)


class PointNotOnVariety(ValidationError):
    pass


class NotQuasiHomogeneous(ValidationError):
    pass


class HypothesisFails(OmegaError):
    """Some d_n(x^beta f) is not in m * Omega_n(S); carries the witnesses."""

    def __init__(self, report):
        self.report = report
        w = report.witnesses[0] if report.witnesses else None
        msg = "hypothesis fails"
        if w is not None:
            msg += f" (column {w.column_label}, row {w.row_label}, value {w.value})"
        super().__init__(msg)


class RegularPoint(OmegaError):
    pass


class RankDeficient(OmegaError):
    pass


class InvariantViolation(OmegaError, AssertionError):
    pass
