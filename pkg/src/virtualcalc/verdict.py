"""Three-valued verdicts for predicates that are only semidecidable."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable


class Truth(enum.Enum):
    HOLDS = "Holds"
    FAILS = "Fails"
    UNKNOWN = "UnknownAtDepth"


@dataclass(frozen=True)
class Verdict:
    """Outcome of a predicate.

    ``depth`` is the largest sequence index inspected (0 when the answer came
    from exact series arithmetic) and ``witness`` an index where the pointwise
    relation failed, if one was seen.
    """

    truth: Truth
    depth: int = 0
    witness: int | None = None

    @property
    def holds(self) -> bool:
        return self.truth is Truth.HOLDS

    @property
    def fails(self) -> bool:
        return self.truth is Truth.FAILS

    @property
    def unknown(self) -> bool:
        return self.truth is Truth.UNKNOWN

    @property
    def label(self) -> str:
        if self.truth is Truth.HOLDS and self.depth:
            return "HoldsToDepth"
        return self.truth.value

    def __bool__(self):
        raise TypeError("a Verdict is three-valued; test .holds / .fails / .unknown")

    def negate(self) -> Verdict:
        flip = {Truth.HOLDS: Truth.FAILS, Truth.FAILS: Truth.HOLDS}
        return Verdict(flip.get(self.truth, Truth.UNKNOWN), self.depth, self.witness)

    def to_dict(self) -> dict:
        return {"verdict": self.label, "depth": self.depth, "witness": self.witness}

    def __str__(self):
        return self.label


HOLDS = Verdict(Truth.HOLDS)
FAILS = Verdict(Truth.FAILS)
UNKNOWN = Verdict(Truth.UNKNOWN)


def of(flag: bool | None, depth: int = 0, witness: int | None = None) -> Verdict:
    if flag is None:
        return Verdict(Truth.UNKNOWN, depth, witness)
    return Verdict(Truth.HOLDS if flag else Truth.FAILS, depth, witness)


def conjoin(verdicts: Iterable[Verdict]) -> Verdict:
    """Holds if all hold, Fails if any fails, otherwise Unknown."""
    verdicts = list(verdicts)
    depth = max((v.depth for v in verdicts), default=0)
    for v in verdicts:
        if v.fails:
            return Verdict(Truth.FAILS, depth, v.witness)
    if all(v.holds for v in verdicts):
        return Verdict(Truth.HOLDS, depth)
    return Verdict(Truth.UNKNOWN, depth)


def disjoin(verdicts: Iterable[Verdict]) -> Verdict:
    verdicts = list(verdicts)
    depth = max((v.depth for v in verdicts), default=0)
    if any(v.holds for v in verdicts):
        return Verdict(Truth.HOLDS, depth)
    if all(v.fails for v in verdicts):
        witness = next((v.witness for v in verdicts if v.witness), None)
        return Verdict(Truth.FAILS, depth, witness)
    return Verdict(Truth.UNKNOWN, depth)
