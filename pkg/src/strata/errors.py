from __future__ import annotations


class StrataError(Exception):
    """Error carrying a stable machine-readable code (e.g. ``MISSING_SIMPLEX``)."""

    def __init__(self, code: str, message: str = "") -> None:
        super().__init__(f"{code}: {message}" if message else code)
        self.code = code
        self.message = message


class FormatError(StrataError):
    """Malformed input file; ``where`` locates the offending value."""

    def __init__(self, where: str, message: str) -> None:
        super().__init__("PARSE_ERROR", f"{where}: {message}")
        self.where = where
