from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any


class Status(str, Enum):
    STABLE = "stable"
    SEMISTABLE = "semistable_not_stable"
    UNSTABLE = "unstable"

    @property
    def semistable(self) -> bool:
        return self is not Status.UNSTABLE


class Certificate(str, Enum):
    EXHAUSTIVE = "exhaustive"
    CANDIDATE_RELATIVE = "candidate_relative"


@dataclass(frozen=True)
class StabilityVerdict:
    """Outcome of a (semi)stability test.

    ``witness`` is the worst offender: a destabilizing subobject when
    unstable, a subobject attaining equality when semistable but not stable.
    """

    status: Status
    certificate: Certificate
    witness: Any = None
    value: Any = None
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status is Status.UNSTABLE and self.witness is None:
            raise ValueError("an unstable verdict needs a witness")

    @property
    def semistable(self) -> bool:
        return self.status.semistable

    @property
    def stable(self) -> bool:
        return self.status is Status.STABLE
