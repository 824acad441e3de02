"""Generating invariants of tuples of matrices and their exact evaluation.

An invariant symbol is one of

* ``sigma_i(Y_1 ... Y_s)`` where each ``Y`` is a slot matrix, its inverse, or
  its star (symplectic or orthogonal transpose),
* ``det^-1(X_j)``,
* ``sim(X_j)`` or ``sim^-1(X_j)`` for the similitude groups.

Word symbols are stored in a canonical form: cyclically reduced, rotated to
the least rotation, and for Sp/O/SO also identified with the inverse word
(``sigma_i(w) = sigma_i(w^-1)`` on those groups).
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np

from . import linalg as la
from .coeffring import RingElem, RingSpec
from .errors import NonInvertibleSlot, NotSimilitudeGroup
from .matgroups import GroupKind, member_mask, symplectic_transpose_codes

PLAIN, INVERSE, STAR = "plain", "inverse", "star"
SIGMA, DETINV, SIM, SIMINV = "sigma", "detinv", "sim", "siminv"

# groups on which sigma_i(M) = sigma_i(M^-1)
SELF_DUAL = ("Sp", "O", "SO")


@dataclass(frozen=True, order=True)
class InvariantSymbol:
    """A generating invariant of ``m``-tuples.

    ``word`` holds ``(slot, decoration)`` pairs with 1-based slots; ``slot`` is
    used by the det/similitude symbols.
    """

    m: int
    orkind: str
    i: int = 0
    word: tuple = ()
    slot: int = 0

    @classmethod
    def sigma(cls, i: int, word, m: int | None = None) -> InvariantSymbol:
        word = tuple((int(s), dec) for s, dec in _coerce_word(word))
        if m is None:
            m = max((s for s, _ in word), default=1)
        return cls(m, SIGMA, i, word)

    @classmethod
    def detinv(cls, slot: int, m: int | None = None) -> InvariantSymbol:
        return cls(m or slot, DETINV, slot=slot)

    @classmethod
    def sim(cls, slot: int, m: int | None = None, inverse: bool = False) -> InvariantSymbol:
        return cls(m or slot, SIMINV if inverse else SIM, slot=slot)

    def __str__(self):
        if self.orkind == SIGMA:
            return f"sigma{self.i}({_word_str(self.word, 'X')})"
        if self.orkind == DETINV:
            return f"det^-1(X{self.slot})"
        if self.orkind == SIM:
            return f"sim(X{self.slot})"
        return f"sim^-1(X{self.slot})"

    def to_json(self) -> dict:
        if self.orkind == SIGMA:
            out = {"sigma": self.i, "word": _word_str(self.word, "")}
        elif self.orkind == DETINV:
            out = {"detinv": self.slot}
        elif self.orkind == SIM:
            out = {"sim": self.slot}
        else:
            out = {"siminv": self.slot}
        out["m"] = self.m
        return out

    @classmethod
    def from_json(cls, data: dict) -> InvariantSymbol:
        m = data.get("m")
        if "sigma" in data:
            return cls.sigma(int(data["sigma"]), parse_word(data.get("word", "")), m)
        if "detinv" in data:
            return cls.detinv(int(data["detinv"]), m)
        if "sim" in data:
            return cls.sim(int(data["sim"]), m)
        if "siminv" in data:
            return cls.sim(int(data["siminv"]), m, inverse=True)
        raise ValueError(f"not an invariant symbol: {data!r}")


_SYMBOL_RE = re.compile(r"^(sigma(\d+)|det\^-1|sim\^-1|sim)\((.*)\)$")


def parse_symbol(text: str, m: int | None = None) -> InvariantSymbol:
    """Parse the printed form, e.g. ``"sigma1(X1*X2^-1)"`` or ``"det^-1(X2)"``."""
    match = _SYMBOL_RE.match(text.strip())
    if not match:
        raise ValueError(f"not an invariant symbol: {text!r}")
    head, idx, body = match.groups()
    if idx is not None:
        return InvariantSymbol.sigma(int(idx), parse_word(body) if body.strip() != "1" else (), m)
    slot = parse_word(body)
    if len(slot) != 1 or slot[0][1] != PLAIN:
        raise ValueError(f"{head} takes a single slot, got {body!r}")
    s = slot[0][0]
    if head == "det^-1":
        return InvariantSymbol.detinv(s, m)
    return InvariantSymbol.sim(s, m, inverse=head == "sim^-1")


def _coerce_word(word):
    if isinstance(word, str):
        return parse_word(word)
    out = []
    for item in word:
        if isinstance(item, int):
            out.append((item, PLAIN))
        else:
            s, dec = item
            if dec in (1, "+1"):
                dec = PLAIN
            elif dec == -1:
                dec = INVERSE
            out.append((s, dec))
    return out


def parse_word(text: str) -> tuple:
    """Parse ``"1 2^-1 3^*"`` (spaces or ``*`` between letters) into slot pairs."""
    text = text.replace("X", "").replace("x", "")
    out = []
    for tok in text.replace("*", " ").replace("^ ", "^*").split():
        if tok.endswith("^-1"):
            out.append((int(tok[:-3]), INVERSE))
        elif tok.endswith("^*"):
            out.append((int(tok[:-2]), STAR))
        else:
            out.append((int(tok), PLAIN))
    return tuple(out)


def _word_str(word, prefix: str) -> str:
    if not word:
        return "1"
    parts = []
    for s, dec in word:
        suffix = {PLAIN: "", INVERSE: "^-1", STAR: "^*"}[dec]
        parts.append(f"{prefix}{s}{suffix}")
    return ("*" if prefix else " ").join(parts)


# -- canonical forms -----------------------------------------------------------


def _cyclic_reduce(word: tuple) -> tuple:
    """Free and cyclic reduction of a word with plain/inverse letters."""
    out: list = []
    for s, dec in word:
        if out and out[-1][0] == s and {out[-1][1], dec} == {PLAIN, INVERSE}:
            out.pop()
        else:
            out.append((s, dec))
    while len(out) >= 2 and out[0][0] == out[-1][0] and {out[0][1], out[-1][1]} == {PLAIN, INVERSE}:
        out = out[1:-1]
    return tuple(out)


_DEC_RANK = {PLAIN: 0, INVERSE: 1, STAR: 2}


def _word_key(word: tuple) -> tuple:
    return tuple((s, _DEC_RANK[dec]) for s, dec in word)


def _min_rotation(word: tuple) -> tuple:
    if not word:
        return word
    return min((word[k:] + word[:k] for k in range(len(word))), key=_word_key)


def _inverse_word(word: tuple) -> tuple:
    flip = {PLAIN: INVERSE, INVERSE: PLAIN}
    return tuple((s, flip[dec]) for s, dec in reversed(word))


def canonical_word(word: tuple, flavor: str) -> tuple:
    """Canonical representative of the class of ``word`` under the symmetries
    of ``sigma_i`` on the given flavor.  Star letters are left alone."""
    if any(dec == STAR for _, dec in word):
        return tuple(word)
    w = _cyclic_reduce(tuple(word))
    best = _min_rotation(w)
    if flavor in SELF_DUAL:
        best = min(best, _min_rotation(_inverse_word(w)), key=_word_key)
    return best


def canonical_symbol(sym: InvariantSymbol, kind: GroupKind):
    """Canonical symbol, or an integer constant when the symbol is constant.

    ``sigma_i`` of the empty word is ``binomial(d, i)``; on SL the top
    coefficient ``sigma_d`` is identically 1.
    """
    if sym.orkind != SIGMA:
        return sym
    w = canonical_word(sym.word, kind.flavor)
    if not w:
        return ("const", comb(kind.d, sym.i))
    if kind.flavor == "SL" and sym.i == kind.d:
        return ("const", 1)
    return InvariantSymbol(sym.m, SIGMA, sym.i, w)


# -- generator sets -------------------------------------------------------------


def _decorations(flavor: str) -> tuple:
    if flavor in ("GL", "SL"):
        return (PLAIN,)
    return (PLAIN, INVERSE)


@lru_cache(maxsize=None)
def canonical_words(flavor: str, m: int, L: int) -> tuple:
    """All canonical nonempty words in ``m`` slots of length at most ``L``."""
    letters = [(s, dec) for s in range(1, m + 1) for dec in _decorations(flavor)]
    seen = set()
    for length in range(1, L + 1):
        for w in itertools.product(letters, repeat=length):
            c = canonical_word(w, flavor)
            if c:
                seen.add(c)
    return tuple(sorted(seen, key=lambda w: (len(w), _word_key(w))))


def generator_set(kind: GroupKind, m: int, L: int = 4, ring: RingSpec | None = None) -> list:
    """Generating invariants of ``m``-tuples for ``kind`` with words of length ``<= L``.

    On SL the determinant ``sigma_d`` is constant and omitted.
    """
    if L < 1:
        raise ValueError("word length bound must be >= 1")
    if ring is not None:
        kind.check_ring(ring)
    d = kind.d
    top = d - 1 if kind.flavor == "SL" else d
    out = []
    for w in canonical_words(kind.flavor, m, L):
        for i in range(1, top + 1):
            out.append(InvariantSymbol(m, SIGMA, i, w))
    if kind.flavor == "GL":
        out.extend(InvariantSymbol(m, DETINV, slot=j) for j in range(1, m + 1))
    if kind.has_similitude:
        for j in range(1, m + 1):
            out.append(InvariantSymbol(m, SIM, slot=j))
            out.append(InvariantSymbol(m, SIMINV, slot=j))
    return out


# -- evaluation -------------------------------------------------------------------


def _decorated(R: RingSpec, mats, dec, kind: GroupKind | None):
    if dec == PLAIN:
        return mats
    if dec == INVERSE:
        return la.inverse(R, mats)
    if kind is None or not (kind.is_symplectic or kind.is_orthogonal):
        raise ValueError("star decoration needs a symplectic or orthogonal context")
    if kind.is_symplectic:
        return symplectic_transpose_codes(R, mats, kind.n)
    return la.transpose(mats)


def evaluate_codes(sym: InvariantSymbol, R: RingSpec, slots, kind: GroupKind | None = None):
    """Vectorised evaluation; ``slots[j]`` is a ``(..., d, d)`` code array for slot ``j+1``."""
    slots = [la.asmat(s) for s in slots]
    if len(slots) < sym.m:
        raise ValueError(f"{sym} needs {sym.m} matrices, got {len(slots)}")
    if sym.orkind == SIGMA:
        needs_inv = {s for s, dec in sym.word if dec == INVERSE}
        for s in needs_inv:
            if not np.all(R.is_unit(la.det(R, slots[s - 1]))):
                raise NonInvertibleSlot(f"slot {s} is not invertible")
        d = slots[0].shape[-1]
        if sym.i > d:
            raise ValueError(f"sigma_{sym.i} exceeds the matrix size {d}")
        batch = np.broadcast_shapes(*(s.shape[:-2] for s in slots))
        prod = la.identity(R, d, batch)
        cache = {}
        for s, dec in sym.word:
            key = (s, dec)
            if key not in cache:
                cache[key] = _decorated(R, slots[s - 1], dec, kind)
            prod = la.matmul(R, prod, cache[key])
        if sym.i == 0:
            return np.ones(batch, dtype=np.int64)
        return la.sigma(R, prod)[..., sym.i - 1]
    mats = slots[sym.slot - 1]
    if sym.orkind == DETINV:
        det = la.det(R, mats)
        if not np.all(R.is_unit(det)):
            raise NonInvertibleSlot(f"slot {sym.slot} is not invertible")
        return R.inv(det)
    if kind is None or not kind.has_similitude:
        raise NotSimilitudeGroup(f"{sym} needs a GSp or GO context")
    mask, nu = member_mask(kind, R, mats)
    if not np.all(mask):
        raise ValueError(f"slot {sym.slot} is not in {kind}")
    return nu if sym.orkind == SIM else R.inv(nu)


def evaluate(sym: InvariantSymbol, mats, kind: GroupKind | None = None) -> RingElem:
    """Evaluate ``sym`` at a tuple of :class:`MatElem`."""
    mats = list(mats)
    if len(mats) != sym.m:
        raise ValueError(f"{sym} takes {sym.m} matrices, got {len(mats)}")
    R = mats[0].spec
    code = evaluate_codes(sym, R, [M.entries for M in mats], kind)
    return RingElem(R, int(code))
