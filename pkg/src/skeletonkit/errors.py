"""Exception types.

Every library failure carries a stable ``code`` string; the CLI maps
:class:`DomainError` to exit status 1 and :class:`InputError` to 2.
"""
from __future__ import annotations


class SkeletonKitError(ValueError):
    exit_code = 1

    def __init__(self, code: str, message: str) -> None:
        super().__init__(message)
        self.code = code
        self.message = message

    def as_dict(self) -> dict:
        return {"error": {"code": self.code, "message": self.message}}


class DomainError(SkeletonKitError):
    """A well-formed input violating a mathematical precondition."""

    exit_code = 1


class InputError(SkeletonKitError):
    """Malformed input: bad JSON, wrong schema, unparsable rationals."""

    exit_code = 2


class Report:
    """Outcome of a ``validate_*`` call: OK, or the first violation found."""

    __slots__ = ("ok", "code", "detail", "witness")

    def __init__(self, ok: bool, code: str = "ok", detail: str = "", witness: tuple = ()) -> None:
        self.ok = ok
        self.code = code
        self.detail = detail
        self.witness = tuple(witness)

    @classmethod
    def passed(cls) -> "Report":
        return cls(True)

    @classmethod
    def failed(cls, code: str, detail: str, *witness) -> "Report":
        return cls(False, code, detail, witness)

    def __bool__(self) -> bool:
        return self.ok

    def __repr__(self) -> str:
        if self.ok:
            return "Report(ok)"
        return f"Report({self.code}: {self.detail})"

    def as_dict(self) -> dict:
        out = {"ok": self.ok, "code": self.code}
        if not self.ok:
            out["detail"] = self.detail
            out["witness"] = [str(w) for w in self.witness]
        return out
