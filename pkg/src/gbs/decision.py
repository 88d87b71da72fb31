"""Structured decision values: answer plus the clause that fired."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Decision:
    answer: bool
    clause: str = ""
    reasons: tuple[str, ...] = ()
    caveat: bool = False

    def __bool__(self) -> bool:
        return self.answer

    def to_json(self) -> dict:
        out = {"answer": "yes" if self.answer else "no", "clause": self.clause}
        if self.reasons:
            out["reasons"] = list(self.reasons)
        if self.caveat:
            out["caveat"] = True
        return out
