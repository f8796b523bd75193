"""Words in the generators a1, b1, ..., ag, bg of a closed genus-g surface group.

Generator order a1, b1, a2, b2, ... fixes the basis of H1 = Z^(2g): a_i is
coordinate 2(i-1), b_i is coordinate 2(i-1)+1.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .exact import ExactMatrix, SingularMatrix, mat_mul


@dataclass(frozen=True, order=True)
class Letter:
    kind: str  # "a" or "b"
    index: int
    sign: int = 1

    def __post_init__(self):
        if self.kind not in ("a", "b"):
            raise ValueError(f"generator kind must be 'a' or 'b', got {self.kind!r}")
        if self.index < 1:
            raise ValueError(f"generator index must be >= 1, got {self.index}")
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign}")

    def inverse(self) -> "Letter":
        return Letter(self.kind, self.index, -self.sign)

    @property
    def coordinate(self) -> int:
        return 2 * (self.index - 1) + (0 if self.kind == "a" else 1)

    def __str__(self) -> str:
        name = f"{self.kind}{self.index}"
        return name if self.sign == 1 else name.upper()


@dataclass(frozen=True)
class SurfaceGroup:
    genus: int

    def __post_init__(self):
        if not isinstance(self.genus, int) or self.genus < 1:
            raise ValueError(f"genus must be a positive integer, got {self.genus!r}")

    @property
    def rank(self) -> int:
        return 2 * self.genus

    def generators(self) -> list[Letter]:
        return [Letter(k, i) for i in range(1, self.genus + 1) for k in ("a", "b")]

    def contains(self, w: "Word") -> bool:
        return all(l.index <= self.genus for l in w.letters)


@dataclass(frozen=True)
class Word:
    """A freely reduced word; construction reduces."""

    letters: tuple[Letter, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", _free_reduce(self.letters))

    @classmethod
    def parse(cls, text: str) -> "Word":
        """Parse ``"a1 b1 A1 B1"``; uppercase letters are inverses."""
        letters = []
        for tok in text.split():
            m = re.fullmatch(r"([abAB])(\d+)", tok)
            if m is None:
                raise ValueError(f"bad generator token {tok!r}")
            ch, idx = m.groups()
            letters.append(Letter(ch.lower(), int(idx), 1 if ch.islower() else -1))
        return cls(tuple(letters))

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word(tuple(l.inverse() for l in reversed(self.letters)))

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return " ".join(str(l) for l in self.letters)


def _free_reduce(letters: Iterable[Letter]) -> tuple[Letter, ...]:
    stack: list[Letter] = []
    for l in letters:
        if stack and stack[-1] == l.inverse():
            stack.pop()
        else:
            stack.append(l)
    return tuple(stack)


def reduce(w: Word) -> Word:
    return Word(_free_reduce(w.letters))


def commutator(x: Word, y: Word) -> Word:
    return x * y * x.inverse() * y.inverse()


def relator(G: SurfaceGroup) -> Word:
    w = Word()
    for i in range(1, G.genus + 1):
        w = w * commutator(Word((Letter("a", i),)), Word((Letter("b", i),)))
    return w


def abelianize(w: Word, G: SurfaceGroup) -> tuple[int, ...]:
    """Exponent-sum vector in the basis (a1, b1, ..., ag, bg)."""
    v = [0] * G.rank
    for l in w.letters:
        if l.index > G.genus:
            raise ValueError(f"letter {l} not in genus-{G.genus} group")
        v[l.coordinate] += l.sign
    return tuple(v)


def evaluate(w: Word, images: Sequence[ExactMatrix]) -> ExactMatrix:
    """Image of ``w`` under generator images listed in basis order."""
    n = images[0].rows
    out = ExactMatrix.identity(n)
    for l in w.letters:
        m = images[l.coordinate]
        out = mat_mul(out, m if l.sign == 1 else m.inverse)
    return out


def check_relation(images: Sequence[ExactMatrix], G: SurfaceGroup) -> bool:
    """True when the images satisfy the surface relation, i.e. define a representation."""
    if len(images) != G.rank:
        raise ValueError(f"need {G.rank} generator images, got {len(images)}")
    n = images[0].rows
    for m in images:
        if m.shape != (n, n):
            raise ValueError("generator images must be square and of equal size")
        if not m.is_invertible():
            raise SingularMatrix("generator image is not invertible")
    return evaluate(relator(G), images).is_identity()
