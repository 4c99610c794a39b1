"""Additive value groups for jump functions: the integers, or integers mod k."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import DomainError, InputError


@dataclass(frozen=True)
class GroupSpec:
    """Either the integers (``modulus`` None) or the cyclic group of that order."""

    modulus: Optional[int] = None

    def __post_init__(self):
        if self.modulus is not None and (not isinstance(self.modulus, int) or self.modulus < 2):
            raise DomainError(f"cyclic modulus must be an integer >= 2, got {self.modulus!r}")

    @property
    def name(self) -> str:
        return "int" if self.modulus is None else f"z{self.modulus}"

    def normalize(self, value: int) -> int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise InputError(f"group values are integers, got {value!r}")
        return value if self.modulus is None else value % self.modulus

    def add(self, x: int, y: int) -> int:
        return self.normalize(x + y)

    def neg(self, x: int) -> int:
        return self.normalize(-x)

    def nonzero_elements(self, span: int = 3) -> list[int]:
        """A finite slice of nonzero elements (the whole group when cyclic)."""
        if self.modulus is None:
            return [v for v in range(-span, span + 1) if v != 0]
        return list(range(1, self.modulus))


INTEGERS = GroupSpec(None)
Z2 = GroupSpec(2)


def parse_group(text: str) -> GroupSpec:
    """Accepts "int" or "z<k>" (e.g. "z2", "z5")."""
    if text == "int":
        return INTEGERS
    if isinstance(text, str) and text.startswith("z"):
        try:
            return GroupSpec(int(text[1:]))
        except (ValueError, DomainError) as exc:
            raise InputError(f"unknown group {text!r}") from exc
    raise InputError(f"unknown group {text!r}")
