"""Compact classical groups and evaluation points."""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import DomainError


class Family(str, Enum):
    UNITARY = "unitary"
    SYMPLECTIC = "symplectic"
    ORTHOGONAL = "orthogonal"


@dataclass(frozen=True)
class GroupKind:
    """U(N), USp(2g) or SO(2N), identified by family and size parameter.

    ``size`` is N for U(N), g for USp(2g) and N for SO(2N).
    """

    family: Family
    size: int

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        if int(self.size) != self.size or self.size < 1:
            raise DomainError(f"size parameter must be a positive integer, got {self.size!r}")

    @classmethod
    def unitary(cls, n: int) -> "GroupKind":
        return cls(Family.UNITARY, n)

    @classmethod
    def symplectic(cls, g: int) -> "GroupKind":
        return cls(Family.SYMPLECTIC, g)

    @classmethod
    def orthogonal(cls, n: int) -> "GroupKind":
        return cls(Family.ORTHOGONAL, n)

    @property
    def dimension(self) -> int:
        """Matrix dimension (N or 2g or 2N)."""
        return self.size if self.family is Family.UNITARY else 2 * self.size

    @property
    def is_unitary(self) -> bool:
        return self.family is Family.UNITARY

    def __str__(self):
        if self.family is Family.UNITARY:
            return f"U({self.size})"
        if self.family is Family.SYMPLECTIC:
            return f"USp({2 * self.size})"
        return f"SO({2 * self.size})"


def as_point(t) -> tuple[float, float]:
    """Normalize an evaluation point to ``(t1, t2)``.

    A bare real number means ``(t, 0)``.
    """
    if isinstance(t, (tuple, list)):
        if len(t) != 2:
            raise DomainError(f"evaluation point must have 2 coordinates, got {len(t)}")
        t1, t2 = float(t[0]), float(t[1])
    else:
        t1, t2 = float(t), 0.0
    if not (math.isfinite(t1) and math.isfinite(t2)):
        raise DomainError("evaluation point must be finite")
    return t1, t2


def point_for(group: GroupKind, t) -> tuple[float, float]:
    t1, t2 = as_point(t)
    if not group.is_unitary and t2 != 0:
        raise DomainError(f"{group}: log det(1-T) is real, t2 must be 0")
    return t1, t2


def norm(t) -> float:
    t1, t2 = as_point(t)
    return math.hypot(t1, t2)
