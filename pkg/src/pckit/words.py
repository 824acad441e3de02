"""Words in free groups, homomorphisms between free groups and their action on tuples.

A homomorphism ``alpha: FG(m) -> FG(n)`` is stored as the ``m`` image words
over the letters ``x1..xn``.  It acts contravariantly on tuples: a tuple in
``Gamma^n`` is sent to the tuple in ``Gamma^m`` obtained by evaluating each
image word.  Composition follows the usual convention
``(alpha o beta)(x_i) = alpha(beta(x_i))``, so that
``substitute(alpha o beta, g) == substitute(beta, substitute(alpha, g))``.

:func:`decompose_invgen` writes any homomorphism as a composite of

* type (1) maps ``x_i -> x_zeta(i)`` (we also allow ``x_i -> 1``),
* type (2) maps ``FG(n) -> FG(n+1)``, ``x_n -> x_n x_{n+1}``,
* formal inverses of automorphisms that are themselves composites of these.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import RankMismatch

_LETTER = re.compile(r"^x(\d+)(?:\^(-?\d+))?$")


def _reduce(letters):
    out: list[tuple[int, int]] = []
    for idx, sign in letters:
        if out and out[-1][0] == idx and out[-1][1] == -sign:
            out.pop()
        else:
            out.append((idx, sign))
    return tuple(out)


@dataclass(frozen=True)
class Word:
    """A freely reduced word; ``letters`` is a tuple of ``(index, sign)`` pairs."""

    letters: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        for idx, sign in self.letters:
            if idx < 1 or sign not in (1, -1):
                raise ValueError(f"bad letter ({idx}, {sign})")
        object.__setattr__(self, "letters", _reduce(self.letters))

    @classmethod
    def letter(cls, i: int, sign: int = 1) -> Word:
        return cls(((i, sign),))

    @classmethod
    def parse(cls, text: str) -> Word:
        """Parse ``"x1*x2^-1"``; ``"1"`` or ``""`` is the empty word."""
        text = text.replace(" ", "")
        if text in ("", "1"):
            return cls()
        letters = []
        for tok in text.split("*"):
            m = _LETTER.match(tok)
            if not m:
                raise ValueError(f"cannot parse letter {tok!r}")
            idx = int(m.group(1))
            e = int(m.group(2)) if m.group(2) else 1
            letters.extend([(idx, 1 if e > 0 else -1)] * abs(e))
        return cls(tuple(letters))

    def __str__(self):
        if not self.letters:
            return "1"
        return "*".join(f"x{i}" if s == 1 else f"x{i}^-1" for i, s in self.letters)

    def __repr__(self):
        return f"Word({str(self)!r})"

    def __len__(self):
        return len(self.letters)

    def __mul__(self, other: Word) -> Word:
        return Word(self.letters + other.letters)

    def inverse(self) -> Word:
        return Word(tuple((i, -s) for i, s in reversed(self.letters)))

    @property
    def max_index(self) -> int:
        return max((i for i, _ in self.letters), default=0)

    @property
    def is_positive(self) -> bool:
        return all(s == 1 for _, s in self.letters)

    def evaluate(self, values: Sequence, group):
        """Evaluate with ``x_j -> values[j-1]`` in ``group``.

        ``group`` needs ``mul(a, b)``, ``inv(a)`` and ``identity``; values may be
        numpy arrays of element indices for vectorised evaluation.
        """
        if not self.letters:
            if values and np.ndim(values[0]):
                return np.full(np.shape(values[0]), group.identity, dtype=np.int64)
            return group.identity
        acc = None
        for idx, sign in self.letters:
            v = values[idx - 1]
            if sign == -1:
                v = group.inv(v)
            acc = v if acc is None else group.mul(acc, v)
        return acc


@dataclass(frozen=True)
class FreeHom:
    """Homomorphism ``FG(m) -> FG(n)`` given by the images of ``x1..xm``."""

    m: int
    n: int
    images: tuple[Word, ...]

    def __post_init__(self):
        images = tuple(w if isinstance(w, Word) else Word.parse(w) for w in self.images)
        object.__setattr__(self, "images", images)
        if len(images) != self.m:
            raise RankMismatch(f"{len(images)} images for source rank {self.m}")
        for w in images:
            if w.max_index > self.n:
                raise RankMismatch(f"letter index out of range in {w} for target rank {self.n}")

    @classmethod
    def from_strings(cls, images: Sequence[str], n: int | None = None) -> FreeHom:
        words = tuple(Word.parse(s) for s in images)
        if n is None:
            n = max((w.max_index for w in words), default=0)
        return cls(len(words), n, words)

    @classmethod
    def identity(cls, n: int) -> FreeHom:
        return cls(n, n, tuple(Word.letter(i) for i in range(1, n + 1)))

    def apply(self, w: Word) -> Word:
        """Image of a word over ``x1..xm`` under this homomorphism."""
        letters = []
        for idx, sign in w.letters:
            if idx > self.m:
                raise RankMismatch(f"letter x{idx} outside source rank {self.m}")
            img = self.images[idx - 1]
            letters.extend(img.letters if sign == 1 else img.inverse().letters)
        return Word(tuple(letters))

    def __matmul__(self, other: FreeHom) -> FreeHom:
        """``self o other``: apply ``other`` first."""
        if other.n != self.m:
            raise RankMismatch(f"cannot compose FG({other.m})->FG({other.n}) with FG({self.m})->...")
        return FreeHom(other.m, self.n, tuple(self.apply(w) for w in other.images))

    def __str__(self):
        return "(" + ", ".join(str(w) for w in self.images) + f") : FG({self.m}) -> FG({self.n})"

    def to_json(self) -> dict:
        return {"m": self.m, "n": self.n, "images": [str(w) for w in self.images]}

    @classmethod
    def from_json(cls, data: dict) -> FreeHom:
        return cls(int(data["m"]), int(data["n"]), tuple(Word.parse(s) for s in data["images"]))


def substitute(alpha: FreeHom, gammas: Sequence, group) -> tuple:
    """The induced map ``Gamma^n -> Gamma^m``."""
    if len(gammas) != alpha.n:
        raise RankMismatch(f"tuple of length {len(gammas)} for target rank {alpha.n}")
    return tuple(w.evaluate(gammas, group) for w in alpha.images)


# -- generating systems ------------------------------------------------------


def type1(zeta: Sequence[int], n: int) -> FreeHom:
    """``x_i -> x_zeta(i)``; ``zeta(i) == 0`` sends ``x_i`` to the identity."""
    return FreeHom(len(zeta), n, tuple(Word.letter(j) if j else Word() for j in zeta))


def type2(n: int) -> FreeHom:
    """``FG(n) -> FG(n+1)`` fixing ``x1..x_{n-1}`` and sending ``x_n -> x_n x_{n+1}``."""
    images = [Word.letter(i) for i in range(1, n)]
    images.append(Word(((n, 1), (n + 1, 1))))
    return FreeHom(n, n + 1, tuple(images))


def is_type1(alpha: FreeHom) -> bool:
    return all(len(w) <= 1 and w.is_positive for w in alpha.images)


def is_type2(alpha: FreeHom) -> bool:
    return alpha.m >= 1 and alpha == type2(alpha.m)


@dataclass(frozen=True)
class Factor:
    """One factor of an inv-generating decomposition.

    ``kind`` is ``"type1"``, ``"type2"`` or ``"inverse"``.  For an inverse,
    ``parts`` decomposes the automorphism being inverted and ``hom`` is its
    actual inverse.
    """

    kind: str
    hom: FreeHom
    parts: tuple[Factor, ...] = field(default=())

    def __str__(self):
        if self.kind == "inverse":
            return f"inverse[{compose(self.parts)}]"
        return f"{self.kind}{self.hom}"


def compose(factors: Sequence[Factor]) -> FreeHom:
    """Composite of factors listed outermost first."""
    result = None
    for fac in reversed(factors):
        result = fac.hom if result is None else fac.hom @ result
    return result


def _monoid_decompose(alpha: FreeHom) -> list[Factor]:
    """Decompose a homomorphism with positive image words into type (1)/(2) maps."""
    if is_type1(alpha) or is_type2(alpha):
        return [Factor("type2" if is_type2(alpha) else "type1", alpha)]
    r = alpha.m
    blocks = [[i] for i in range(1, alpha.m + 1)]
    inner: list[Factor] = []  # innermost first
    for i, w in enumerate(alpha.images):
        while len(blocks[i]) < max(len(w), 1):
            ell = blocks[i][-1]
            if ell != r:
                perm = list(range(1, r + 1))
                perm[ell - 1], perm[r - 1] = r, ell
                inner.append(Factor("type1", type1(perm, r)))
            inner.append(Factor("type2", type2(r)))
            # y_ell -> y_r y_{r+1}, y_r -> y_ell
            for blk in blocks:
                new = []
                for b in blk:
                    if b == ell:
                        new.extend([r, r + 1])
                    elif b == r:
                        new.append(ell)
                    else:
                        new.append(b)
                blk[:] = new
            r += 1
    zeta = [0] * r
    for blk, w in zip(blocks, alpha.images):
        targets = [idx for idx, _ in w.letters] or [0]
        for b, t in zip(blk, targets):
            zeta[b - 1] = t
    final = type1(zeta, alpha.n)
    factors = [Factor("type1", final)] + list(reversed(inner))
    return factors


def _invert_last(r: int) -> list[Factor]:
    """Decompose ``(x1, ..., x_{r-1}, x_r^-1)`` for ``r >= 2``.

    With ``x = x_{r-1}`` and ``y = x_r`` this is
    ``(x y^-1, y) o (x y, x) o (x, x^-1 y)``, where the outer and inner factors
    are inverses of ``(x y, y)`` and ``(x, x y)``.
    """
    assert r >= 2
    fixed = [Word.letter(i) for i in range(1, r - 1)]
    x, y = Word.letter(r - 1), Word.letter(r)

    def hom(a, b):
        return FreeHom(r, r, tuple(fixed + [a, b]))

    outer = Factor("inverse", hom(x * y.inverse(), y), tuple(_monoid_decompose(hom(x * y, y))))
    middle = _monoid_decompose(hom(x * y, x))
    inner = Factor("inverse", hom(x, x.inverse() * y), tuple(_monoid_decompose(hom(x, x * y))))
    return [outer] + middle + [inner]


def _invert_letter(k: int, r: int) -> list[Factor]:
    if k == r:
        return _invert_last(r)
    perm = list(range(1, r + 1))
    perm[k - 1], perm[r - 1] = r, k
    swap = Factor("type1", type1(perm, r))
    return [swap] + _invert_last(r) + [swap]


def decompose_invgen(alpha: FreeHom) -> list[Factor]:
    """Factors (outermost first) whose composite is ``alpha``.

    Positive homomorphisms are split into type (1)/(2) maps directly.  In
    general ``alpha`` factors through a positive map into a larger free group,
    followed by inversions of single letters and a relabelling.
    """
    if all(w.is_positive for w in alpha.images):
        return _monoid_decompose(alpha)
    n = alpha.n
    if alpha.m == n and all(
        w == Word.letter(i + 1) for i, w in enumerate(alpha.images) if i != n - 1
    ) and alpha.images[n - 1] == Word.letter(n, -1) and n >= 2:
        return _invert_last(n)
    negated = sorted({idx for w in alpha.images for idx, s in w.letters if s == -1})
    slot = {j: n + k + 1 for k, j in enumerate(negated)}
    r = n + len(negated)
    beta = FreeHom(
        alpha.m,
        r,
        tuple(Word(tuple((idx, 1) if s == 1 else (slot[idx], 1) for idx, s in w.letters))
              for w in alpha.images),
    )
    relabel = type1(list(range(1, n + 1)) + negated, n)
    factors = [Factor("type1", relabel)]
    for j in negated:
        factors.extend(_invert_letter(slot[j], r))
    factors.extend(_monoid_decompose(beta))
    return factors


def factor_is_valid(fac: Factor) -> bool:
    """Check that a factor really is of the advertised shape."""
    if fac.kind == "type1":
        return is_type1(fac.hom)
    if fac.kind == "type2":
        return is_type2(fac.hom)
    if fac.kind == "inverse":
        if not all(p.kind in ("type1", "type2") and factor_is_valid(p) for p in fac.parts):
            return False
        auto = compose(fac.parts)
        if auto.m != auto.n or fac.hom.m != auto.m:
            return False
        ident = FreeHom.identity(auto.m)
        return (auto @ fac.hom) == ident and (fac.hom @ auto) == ident
    return False
