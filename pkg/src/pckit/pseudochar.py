"""Pseudocharacters of finite groups, stored as characteristic-polynomial fingerprints.

A :class:`PseudoChar` keeps, for every element ``g`` of the group, the vector
``(sigma_1, ..., sigma_d)`` of the standard embedding, plus the similitude
value for GSp/GO.  When it was built from a representation that
representation is kept as a *witness*; operations that are not determined by
fingerprints alone (tensor products, determinant laws) need it.

:class:`RawTable` is the unabridged form: values of every generating invariant
on every tuple of group elements up to a given arity.  :func:`verify_axioms`
checks the two substitution axioms on such a table.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Sequence

import numpy as np

from . import linalg as la
from .coeffring import RingElem, RingSpec
from .errors import (
    IncompatibleContexts,
    MembershipViolation,
    NotInKernel,
    NoWitness,
    UnknownEmbedding,
    UnsupportedOperands,
    WrongKind,
)
from .groups import FiniteGroup, Representation
from .groups import direct_sum as rep_direct_sum
from .groups import dual as rep_dual
from .groups import tensor as rep_tensor
from .invariants import (
    DETINV,
    INVERSE,
    PLAIN,
    SIGMA,
    SIM,
    InvariantSymbol,
    canonical_symbol,
    generator_set,
)
from .matgroups import GroupKind, member_mask, similitude_codes


class PseudoChar:
    """A ``kind``-valued pseudocharacter of ``group`` over ``ring``."""

    def __init__(self, group: FiniteGroup, kind: GroupKind, ring: RingSpec, fingerprint,
                 simtable=None, witness: Representation | None = None):
        fingerprint = np.array(fingerprint, dtype=np.int64).reshape(group.order, kind.d)
        fingerprint.setflags(write=False)
        if simtable is not None:
            simtable = np.array(simtable, dtype=np.int64).reshape(group.order)
            simtable.setflags(write=False)
        self.group = group
        self.kind = kind
        self.ring = ring
        self.fingerprint = fingerprint
        self.simtable = simtable
        self.witness = witness

    @property
    def d(self) -> int:
        return self.kind.d

    def at(self, g: int) -> tuple[RingElem, ...]:
        return tuple(RingElem(self.ring, int(x)) for x in self.fingerprint[g])

    def charpoly(self, g=None) -> np.ndarray:
        """``det(t - rho(g))`` coefficients, highest first (all elements if ``g`` is None)."""
        fp = self.fingerprint if g is None else self.fingerprint[g]
        return la.poly_from_sigma(self.ring, fp)

    def __eq__(self, other):
        if not isinstance(other, PseudoChar):
            return NotImplemented
        try:
            return equals(self, other)
        except IncompatibleContexts:
            return False

    def __hash__(self):
        return hash((self.kind, self.ring, self.fingerprint.tobytes()))

    def __repr__(self):
        return f"PseudoChar({self.group!r}, {self.kind}, {self.ring!r})"

    def check_identity(self) -> bool:
        """``sigma_i(1) = binomial(d, i)``."""
        expected = self.ring.from_int(np.array([comb(self.d, i) for i in range(1, self.d + 1)]))
        return bool(np.array_equal(self.fingerprint[0], expected))

    def check_inverse_relation(self) -> bool:
        """``sigma_i(g^-1) sigma_d(g) = sigma_{d-i}(g)`` for every element."""
        R = self.ring
        fp = self.fingerprint
        inv = fp[self.group.inverse]
        det = fp[:, -1]
        if not np.all(R.is_unit(det)):
            return False
        full = np.concatenate([np.ones((fp.shape[0], 1), dtype=np.int64), fp], axis=1)
        lhs = R.mul(inv, det[:, None])
        rhs = full[:, self.d - 1::-1][:, : self.d]
        return bool(np.array_equal(lhs, rhs))

    def check_simtable(self) -> bool:
        if self.simtable is None:
            return True
        t = self.simtable
        R = self.ring
        prod = R.mul(t[:, None], t[None, :])
        return bool(np.array_equal(prod, t[self.group.table])) and bool(np.all(R.is_unit(t)))

    def to_json(self, group_ref=None) -> dict:
        R = self.ring
        out = {
            "group": group_ref if group_ref is not None else self.group.to_json(),
            "kind": self.kind.to_json(),
            "ring": R.to_json(),
            "fingerprint": [[g, [R.payload(x) for x in row]] for g, row in enumerate(self.fingerprint)],
        }
        if self.simtable is not None:
            out["simtable"] = [R.payload(x) for x in self.simtable]
        return out

    @classmethod
    def from_json(cls, data: dict, group: FiniteGroup | None = None) -> PseudoChar:
        if group is None:
            g = data["group"]
            group = FiniteGroup(g["table"], g.get("generators"), name=g.get("name"))
        kind = GroupKind.from_json(data["kind"])
        R = RingSpec.from_json(data["ring"])
        fp = np.zeros((group.order, kind.d), dtype=np.int64)
        for g, row in data["fingerprint"]:
            fp[g] = [R.code_from_payload(x) for x in row]
        sim = None
        if "simtable" in data:
            sim = [R.code_from_payload(x) for x in data["simtable"]]
        return cls(group, kind, R, fp, sim)


def _check_same_context(a: PseudoChar, b: PseudoChar, same_kind: bool = True):
    if a.group != b.group:
        raise IncompatibleContexts("pseudocharacters of different groups")
    if a.ring != b.ring:
        raise IncompatibleContexts(f"rings differ: {a.ring!r} vs {b.ring!r}")
    if same_kind and a.kind != b.kind:
        raise IncompatibleContexts(f"kinds differ: {a.kind} vs {b.kind}")


def from_rep(rho: Representation, kind: GroupKind | None = None) -> PseudoChar:
    """The pseudocharacter ``Theta_rho``."""
    kind = kind or rho.kind
    if kind.d != rho.d:
        raise MembershipViolation(f"{kind} has matrix size {kind.d}, representation has {rho.d}")
    mask, _ = member_mask(kind, rho.ring, rho.images)
    if not np.all(mask):
        bad = int(np.flatnonzero(~mask)[0])
        raise MembershipViolation(f"rho({bad}) is not in {kind}")
    fp = la.sigma(rho.ring, rho.images)
    sim = similitude_codes(kind, rho.ring, rho.images) if kind.has_similitude else None
    witness = rho if rho.kind == kind else rho.with_kind(kind, check=False)
    return PseudoChar(rho.group, kind, rho.ring, fp, sim, witness)


def equals(a: PseudoChar, b: PseudoChar) -> bool:
    _check_same_context(a, b)
    if not np.array_equal(a.fingerprint, b.fingerprint):
        return False
    if (a.simtable is None) != (b.simtable is None):
        return False
    return a.simtable is None or bool(np.array_equal(a.simtable, b.simtable))


# -- kernels and quotients ------------------------------------------------------------


def kernel_test(theta: PseudoChar, delta: int, L: int | None = 4) -> bool:
    """Is ``delta`` in the kernel, judged on words of length at most ``L``?

    Explores pairs ``(x, y)`` where ``x`` is a word in elements of the group
    with ``delta`` inserted after some letters (and ``delta^-1`` before their
    inverses) and ``y`` the same word without insertions.  ``L=None`` runs the
    exploration to its fixed point.
    """
    G = theta.group
    t = G.table
    fp = theta.fingerprint
    sim = theta.simtable
    N = G.order
    dinv = int(G.inverse[delta])
    # x -> x*b, x*b*delta, x*delta^-1*b for all b
    right_delta = t[:, delta]
    left_dinv = t[:, dinv]
    seen = np.zeros((N, N), dtype=bool)
    seen[0, 0] = True
    frontier = np.array([[0, 0]])
    step = 0
    while frontier.size and (L is None or step < L):
        x, y = frontier[:, 0], frontier[:, 1]
        xb = t[x]  # (F, N): x*b
        yb = t[y]
        xs = np.concatenate([xb, right_delta[xb], t[left_dinv[x]]], axis=1)
        ys = np.concatenate([yb, yb, yb], axis=1)
        new = np.unique(np.stack([xs.ravel(), ys.ravel()], axis=1), axis=0)
        new = new[~seen[new[:, 0], new[:, 1]]]
        seen[new[:, 0], new[:, 1]] = True
        frontier = new
        step += 1
    xs, ys = np.nonzero(seen)
    if not np.array_equal(fp[xs], fp[ys]):
        return False
    if sim is not None and not np.array_equal(sim[xs], sim[ys]):
        return False
    return True


def kernel(theta: PseudoChar, L: int | None = 4) -> list[int]:
    """Elements of the kernel, as sorted indices."""
    return [g for g in range(theta.group.order) if kernel_test(theta, g, L)]


def quotient_factor(theta: PseudoChar, normal: Sequence[int], return_projection: bool = False):
    """The pseudocharacter on ``Gamma/normal`` that restricts back to ``theta``."""
    normal = sorted(set(int(x) for x in normal))
    ker = set(kernel(theta, L=None))
    if not set(normal) <= ker:
        bad = sorted(set(normal) - ker)
        raise NotInKernel(f"elements {bad} are not in the kernel")
    Q, proj = theta.group.quotient(normal)
    reps = np.array([int(np.flatnonzero(proj == c)[0]) for c in range(Q.order)])
    # kernel elements act trivially on fingerprints, so cosets agree
    if not np.array_equal(theta.fingerprint[reps][proj], theta.fingerprint):
        raise NotInKernel("fingerprint is not constant on cosets")
    sim = theta.simtable[reps] if theta.simtable is not None else None
    witness = None
    w = theta.witness
    if w is not None and set(normal) <= set(w.kernel()):
        witness = Representation(Q, w.kind, w.ring, w.images[reps], check=False)
    out = PseudoChar(Q, theta.kind, theta.ring, theta.fingerprint[reps], sim, witness)
    return (out, proj) if return_projection else out


def restrict(theta: PseudoChar, sub: FiniteGroup, inclusion) -> PseudoChar:
    """Pull back along a homomorphism ``sub -> group`` given as an index array."""
    inclusion = np.asarray(inclusion, dtype=np.int64)
    t = theta.group.table
    if not np.array_equal(inclusion[sub.table], t[inclusion[:, None], inclusion[None, :]]):
        raise ValueError("inclusion is not a homomorphism")
    sim = theta.simtable[inclusion] if theta.simtable is not None else None
    witness = theta.witness.restrict(sub, inclusion) if theta.witness is not None else None
    return PseudoChar(sub, theta.kind, theta.ring, theta.fingerprint[inclusion], sim, witness)


# -- operations ---------------------------------------------------------------------------


def _require_gl(theta: PseudoChar, op: str):
    if theta.kind.flavor != "GL":
        raise WrongKind(f"{op} needs a GL pseudocharacter, got {theta.kind}")


def dual(theta: PseudoChar) -> PseudoChar:
    """Compose with transpose-inverse: ``g -> fingerprint(g^-1)``."""
    _require_gl(theta, "dual")
    fp = theta.fingerprint[theta.group.inverse]
    witness = rep_dual(theta.witness) if theta.witness is not None else None
    return PseudoChar(theta.group, theta.kind, theta.ring, fp, None, witness)


def _convolve(R: RingSpec, fa, fb) -> np.ndarray:
    return la.sigma_from_poly(R, la.poly_mul(R, la.poly_from_sigma(R, fa), la.poly_from_sigma(R, fb)))


def direct_sum(a: PseudoChar, b: PseudoChar) -> PseudoChar:
    _require_gl(a, "direct_sum")
    _require_gl(b, "direct_sum")
    _check_same_context(a, b, same_kind=False)
    fp = _convolve(a.ring, a.fingerprint, b.fingerprint)
    witness = None
    if a.witness is not None and b.witness is not None:
        witness = rep_direct_sum(a.witness, b.witness)
    return PseudoChar(a.group, GroupKind("GL", a.d + b.d), a.ring, fp, None, witness)


def _twist(R: RingSpec, fp, chi) -> np.ndarray:
    """``sigma_i(chi M) = chi^i sigma_i(M)``."""
    d = fp.shape[-1]
    out = np.empty_like(fp)
    power = np.ones_like(chi)
    for i in range(d):
        power = R.mul(power, chi)
        out[:, i] = R.mul(power, fp[:, i])
    return out


def tensor(a: PseudoChar, b: PseudoChar) -> PseudoChar:
    """Tensor product.  Exact from fingerprints when one side is a character;
    otherwise both sides need witnessing representations."""
    _require_gl(a, "tensor")
    _require_gl(b, "tensor")
    _check_same_context(a, b, same_kind=False)
    R = a.ring
    kind = GroupKind("GL", a.d * b.d)
    witness = None
    if a.witness is not None and b.witness is not None:
        witness = rep_tensor(a.witness, b.witness)
    if a.d == 1 or b.d == 1:
        chi, other = (a, b) if a.d == 1 else (b, a)
        fp = _twist(R, other.fingerprint, chi.fingerprint[:, 0])
        return PseudoChar(a.group, kind, R, fp, None, witness)
    if witness is None:
        raise UnsupportedOperands("tensor of two non-characters needs witnessing representations")
    return PseudoChar(a.group, kind, R, la.sigma(R, witness.images), None, witness)


def sp_interleave(a_mats, b_mats, a: int, b: int) -> np.ndarray:
    """Orthogonal sum of ``Sp_2a`` and ``Sp_2b`` matrices in the global J-basis."""
    big = la.block_diag(a_mats, b_mats)
    perm = np.r_[0:a, 2 * a:2 * a + b, a:2 * a, 2 * a + b:2 * a + 2 * b]
    return big[..., perm[:, None], perm[None, :]]


def sp_direct_sum(a: PseudoChar, b: PseudoChar) -> PseudoChar:
    for t in (a, b):
        if t.kind.flavor != "Sp":
            raise WrongKind(f"sp_direct_sum needs Sp pseudocharacters, got {t.kind}")
    _check_same_context(a, b, same_kind=False)
    kind = GroupKind("Sp", a.kind.n + b.kind.n)
    fp = _convolve(a.ring, a.fingerprint, b.fingerprint)
    witness = None
    if a.witness is not None and b.witness is not None:
        imgs = sp_interleave(a.witness.images, b.witness.images, a.kind.n, b.kind.n)
        witness = Representation(a.group, kind, a.ring, imgs, check=False)
    return PseudoChar(a.group, kind, a.ring, fp, None, witness)


def pair_type_embed(theta: PseudoChar) -> PseudoChar:
    """``V -> V + V^*`` with the hyperbolic form: ``g -> diag(rho(g), rho(g)^-T)``."""
    _require_gl(theta, "pair_type_embed")
    R = theta.ring
    kind = GroupKind("Sp", theta.d)
    fp = _convolve(R, theta.fingerprint, theta.fingerprint[theta.group.inverse])
    witness = None
    if theta.witness is not None:
        w = theta.witness
        imgs = la.block_diag(w.images, la.transpose(w.inverse_images()))
        witness = Representation(theta.group, kind, R, imgs, check=False)
    return PseudoChar(theta.group, kind, R, fp, None, witness)


# standard homomorphisms between group kinds: (source flavor, target flavor)
_INCLUSIONS = {
    ("SL", "GL"), ("Sp", "GL"), ("GSp", "GL"), ("O", "GL"), ("SO", "GL"), ("GO", "GL"),
    ("Sp", "GSp"), ("SO", "O"), ("SO", "GO"), ("O", "GO"), ("SL", "Sp"), ("Sp", "SL"),
}


def pushforward(theta: PseudoChar, target: GroupKind) -> PseudoChar:
    """Transport along a built-in homomorphism ``theta.kind -> target``."""
    src = theta.kind
    if src == target:
        return theta
    if src.flavor == "GL" and target.flavor == "Sp" and target.n == src.n:
        return pair_type_embed(theta)
    if (src.flavor, target.flavor) not in _INCLUSIONS or src.d != target.d:
        raise UnknownEmbedding(f"no built-in homomorphism {src} -> {target}")
    if {src.flavor, target.flavor} == {"SL", "Sp"} and src.d != 2:
        raise UnknownEmbedding("SL and Sp coincide only in rank 2")
    R = theta.ring
    sim = None
    if target.has_similitude:
        sim = theta.simtable if theta.simtable is not None else np.ones(theta.group.order, dtype=np.int64)
    witness = theta.witness.with_kind(target, check=False) if theta.witness is not None else None
    return PseudoChar(theta.group, target, R, theta.fingerprint, sim, witness)


# -- determinant laws ------------------------------------------------------------------------


def emerson_lambda(theta: PseudoChar, i: int, g: int) -> RingElem:
    """``Lambda_i(g)``: the ``i``-th fingerprint coordinate, with ``Lambda_0 = 1``."""
    if not 0 <= i <= theta.d:
        raise ValueError(f"index {i} outside 0..{theta.d}")
    if i == 0:
        return RingElem(theta.ring, 1)
    return RingElem(theta.ring, int(theta.fingerprint[g, i - 1]))


def _algebra_codes(theta: PseudoChar, r) -> np.ndarray:
    R = theta.ring
    if isinstance(r, dict):
        out = np.zeros(theta.group.order, dtype=np.int64)
        for g, c in r.items():
            out[int(g)] = R.add(out[int(g)], R.code_from_payload(c))
        return out
    r = np.asarray(r, dtype=np.int64)
    if r.shape[-1] != theta.group.order:
        raise ValueError("group-algebra element needs one coefficient per group element")
    return r


def algebra_image(theta: PseudoChar, r) -> np.ndarray:
    """``sum_g r_g rho(g)``; batched over leading axes of ``r``."""
    if theta.witness is None:
        raise NoWitness("determinant law evaluation needs a witnessing representation")
    R = theta.ring
    r = _algebra_codes(theta, r)
    terms = R.mul(r[..., :, None, None], theta.witness.images)
    return R.sum(terms, axis=-3)


def det_law_eval(theta: PseudoChar, r) -> RingElem | np.ndarray:
    """``D(r) = det(sum_g r_g rho(g))``."""
    out = la.det(theta.ring, algebra_image(theta, r))
    return RingElem(theta.ring, int(out)) if np.ndim(out) == 0 else out


def det_law_charpoly(theta: PseudoChar, r) -> np.ndarray:
    """Coefficients of ``D(t - r)`` in ``t``, highest first."""
    return la.charpoly(theta.ring, algebra_image(theta, r))


def group_algebra_mul(group: FiniteGroup, R: RingSpec, r, s) -> np.ndarray:
    """Product in the group algebra; batched over leading axes."""
    r = np.asarray(r, dtype=np.int64)
    s = np.asarray(s, dtype=np.int64)
    N = group.order
    out = np.zeros(np.broadcast_shapes(r.shape, s.shape), dtype=np.int64)
    for x in range(N):
        # contributions r_x s_y to coefficient of x*y
        contrib = R.mul(r[..., x:x + 1], s)
        target = group.table[x]
        out[..., target] = R.add(out[..., target], contrib)
    return out


# -- raw tables and the axioms ---------------------------------------------------------------


def tuple_digits(N: int, m: int) -> np.ndarray:
    """All of ``Gamma^m`` as an ``(N^m, m)`` array, first slot most significant."""
    if m == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.meshgrid(*([np.arange(N)] * m), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


def tuple_index(N: int, digits) -> np.ndarray:
    digits = np.asarray(digits, dtype=np.int64)
    out = np.zeros(digits.shape[:-1], dtype=np.int64)
    for k in range(digits.shape[-1]):
        out = out * N + digits[..., k]
    return out


@dataclass
class RawTable:
    """Values of every generating invariant of arity ``1..M`` on every tuple."""

    group: FiniteGroup
    kind: GroupKind
    ring: RingSpec
    M: int
    L: int
    symbols: dict  # arity -> list[InvariantSymbol]
    values: dict  # arity -> (len(symbols[m]), N^m) code array

    def copy(self) -> RawTable:
        return RawTable(self.group, self.kind, self.ring, self.M, self.L, self.symbols,
                        {m: v.copy() for m, v in self.values.items()})

    def entry_count(self) -> int:
        return sum(v.size for v in self.values.values())

    def locate(self, flat: int):
        """``(arity, symbol position, tuple index)`` of the ``flat``-th entry."""
        for m in sorted(self.values):
            v = self.values[m]
            if flat < v.size:
                s, t = divmod(flat, v.shape[1])
                return m, s, t
            flat -= v.size
        raise IndexError("entry index out of range")

    def value(self, sym: InvariantSymbol, tup: Sequence[int]) -> RingElem:
        s = self.symbols[sym.m].index(sym)
        return RingElem(self.ring, int(self.values[sym.m][s, tuple_index(self.group.order, tup)]))

    def to_json(self) -> list:
        out = []
        N = self.group.order
        for m in sorted(self.values):
            digits = tuple_digits(N, m)
            for s, sym in enumerate(self.symbols[m]):
                for t in range(digits.shape[0]):
                    out.append([sym.to_json(), digits[t].tolist(), self.ring.payload(self.values[m][s, t])])
        return out

    @classmethod
    def build(cls, source, M: int = 2, L: int = 2, kind: GroupKind | None = None) -> RawTable:
        """Tabulate from a :class:`Representation` (matrix evaluation) or a
        :class:`PseudoChar` (fingerprint lookup)."""
        if isinstance(source, Representation):
            kind = kind or source.kind
            mask, _ = member_mask(kind, source.ring, source.images)
            if not np.all(mask):
                raise MembershipViolation(f"representation is not {kind}-valued")
            return _table_from_matrices(source, kind, M, L)
        if isinstance(source, PseudoChar):
            return _table_from_fingerprint(source, M, L)
        raise TypeError("RawTable.build needs a Representation or a PseudoChar")


def _table_from_matrices(rho: Representation, kind: GroupKind, M: int, L: int) -> RawTable:
    R = rho.ring
    G = rho.group
    N = G.order
    imgs = {PLAIN: rho.images, INVERSE: rho.inverse_images()}
    dets = la.det(R, rho.images)
    sims = similitude_codes(kind, R, rho.images) if kind.has_similitude else None
    symbols, values = {}, {}
    for m in range(1, M + 1):
        syms = generator_set(kind, m, L, R)
        digits = tuple_digits(N, m)
        vals = np.zeros((len(syms), digits.shape[0]), dtype=np.int64)
        sigma_cache = {}
        for k, sym in enumerate(syms):
            if sym.orkind == SIGMA:
                if sym.word not in sigma_cache:
                    prod = la.identity(R, kind.d, (digits.shape[0],))
                    for s, dec in sym.word:
                        prod = la.matmul(R, prod, imgs[dec][digits[:, s - 1]])
                    sigma_cache[sym.word] = la.sigma(R, prod)
                vals[k] = sigma_cache[sym.word][:, sym.i - 1]
            elif sym.orkind == DETINV:
                vals[k] = R.inv(dets)[digits[:, sym.slot - 1]]
            elif sym.orkind == SIM:
                vals[k] = sims[digits[:, sym.slot - 1]]
            else:
                vals[k] = R.inv(sims)[digits[:, sym.slot - 1]]
        symbols[m], values[m] = syms, vals
    return RawTable(G, kind, R, M, L, symbols, values)


def _word_elements(G: FiniteGroup, word, digits) -> np.ndarray:
    x = np.zeros(digits.shape[0], dtype=np.int64)
    for s, dec in word:
        g = digits[:, s - 1]
        x = G.table[x, g if dec == PLAIN else G.inverse[g]]
    return x


def _table_from_fingerprint(theta: PseudoChar, M: int, L: int) -> RawTable:
    R, G, kind = theta.ring, theta.group, theta.kind
    N = G.order
    fp = theta.fingerprint
    symbols, values = {}, {}
    for m in range(1, M + 1):
        syms = generator_set(kind, m, L, R)
        digits = tuple_digits(N, m)
        vals = np.zeros((len(syms), digits.shape[0]), dtype=np.int64)
        for k, sym in enumerate(syms):
            if sym.orkind == SIGMA:
                vals[k] = fp[_word_elements(G, sym.word, digits), sym.i - 1]
            elif sym.orkind == DETINV:
                vals[k] = R.inv(fp[:, -1])[digits[:, sym.slot - 1]]
            elif sym.orkind == SIM:
                vals[k] = theta.simtable[digits[:, sym.slot - 1]]
            else:
                vals[k] = R.inv(theta.simtable)[digits[:, sym.slot - 1]]
        symbols[m], values[m] = syms, vals
    return RawTable(G, kind, R, M, L, symbols, values)


@dataclass(frozen=True)
class _CheckGroup:
    """Checks ``prod(lhs factors)(t) * const == rhs(map(t))`` for all ``t`` in ``Gamma^n``.

    ``lhs`` has shape ``(E, k)`` of symbol positions in arity ``n`` (``k`` factors,
    possibly zero); ``const`` holds integer constants; ``rhs`` symbol positions
    in arity ``m``.  ``tuple_map`` is ``("zeta", zeta)`` or ``("hat",)``.
    """

    condition: int
    n: int
    m: int
    tuple_map: tuple
    lhs: np.ndarray
    const: np.ndarray
    rhs: np.ndarray


def _relabel(sym: InvariantSymbol, zeta, n: int) -> InvariantSymbol:
    if sym.orkind == SIGMA:
        return InvariantSymbol(n, SIGMA, sym.i, tuple((zeta[s - 1], dec) for s, dec in sym.word))
    return InvariantSymbol(n, sym.orkind, slot=zeta[sym.slot - 1])


def _hat(sym: InvariantSymbol, m: int):
    """``f(X_1, ..., X_m X_{m+1})`` as a list of arity-``m+1`` symbols (a product)."""
    if sym.orkind == SIGMA:
        word = []
        for s, dec in sym.word:
            if s != m:
                word.append((s, dec))
            elif dec == PLAIN:
                word.extend([(m, PLAIN), (m + 1, PLAIN)])
            else:
                word.extend([(m + 1, INVERSE), (m, INVERSE)])
        return [InvariantSymbol(m + 1, SIGMA, sym.i, tuple(word))]
    if sym.slot != m:
        return [InvariantSymbol(m + 1, sym.orkind, slot=sym.slot)]
    # det^-1 and sim are multiplicative
    return [InvariantSymbol(m + 1, sym.orkind, slot=m), InvariantSymbol(m + 1, sym.orkind, slot=m + 1)]


@lru_cache(maxsize=64)
def _axiom_plan(kind: GroupKind, M: int, L: int) -> tuple:
    symbols = {m: generator_set(kind, m, L) for m in range(1, M + 1)}
    index = {m: {s: k for k, s in enumerate(syms)} for m, syms in symbols.items()}

    def lookup(sym: InvariantSymbol, n: int):
        """``("sym", position)``, ``("const", value)`` or ``("missing", None)``."""
        c = canonical_symbol(sym, kind)
        if isinstance(c, tuple):
            return "const", c[1]
        pos = index[n].get(InvariantSymbol(n, c.orkind, c.i, c.word, c.slot))
        return ("sym", pos) if pos is not None else ("missing", None)

    groups = []

    def add_group(condition, n, m, tmap, entries):
        by_len: dict = {}
        for lhs, const, rhs in entries:
            by_len.setdefault(len(lhs), []).append((lhs, const, rhs))
        for k, items in sorted(by_len.items()):
            lhs = np.array([it[0] for it in items], dtype=np.int64).reshape(len(items), k)
            const = np.array([it[1] for it in items], dtype=np.int64)
            rhs = np.array([it[2] for it in items], dtype=np.int64)
            groups.append(_CheckGroup(condition, n, m, tmap, lhs, const, rhs))

    # condition (1): every map zeta: {1..m} -> {1..n}
    for m in range(1, M + 1):
        for n in range(1, M + 1):
            for zeta in itertools.product(range(1, n + 1), repeat=m):
                if m == n and zeta == tuple(range(1, m + 1)):
                    continue
                entries = []
                for k, sym in enumerate(symbols[m]):
                    tag, val = lookup(_relabel(sym, zeta, n), n)
                    if tag == "sym":
                        entries.append(((val,), 1, k))
                    elif tag == "const":
                        entries.append(((), val, k))
                add_group(1, n, m, ("zeta", zeta), entries)
    # condition (2): f(X_1, ..., X_m X_{m+1}) for m < M
    for m in range(1, M):
        entries = []
        for k, sym in enumerate(symbols[m]):
            parts = _hat(sym, m)
            if sym.orkind == SIGMA and len(parts[0].word) > L:
                continue
            lhs, const, ok = [], 1, True
            for part in parts:
                tag, val = lookup(part, m + 1)
                if tag == "missing":
                    ok = False
                    break
                if tag == "const":
                    const *= val
                else:
                    lhs.append(val)
            if ok:
                entries.append((tuple(lhs), const, k))
        add_group(2, m + 1, m, ("hat",), entries)
    return tuple(groups)


@dataclass
class AxiomReport:
    ok: bool
    checks: int
    condition: int | None = None
    detail: str = ""
    location: dict | None = None

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        out = {"pass": self.ok, "checks": self.checks}
        if not self.ok:
            out.update({"condition": self.condition, "detail": self.detail, "location": self.location})
        return out


def _tuple_map(G: FiniteGroup, n: int, m: int, tmap: tuple, cache: dict) -> np.ndarray:
    key = (n, m, tmap)
    if key not in cache:
        N = G.order
        digits = tuple_digits(N, n)
        if tmap[0] == "zeta":
            cols = [z - 1 for z in tmap[1]]
            src = digits[:, cols]
        else:
            src = digits[:, :m].copy()
            src[:, m - 1] = G.table[digits[:, m - 1], digits[:, m]]
        cache[key] = tuple_index(N, src)
    return cache[key]


def verify_axioms(T: RawTable) -> AxiomReport:
    """Check both substitution axioms on every tuple; report the first violation."""
    R = T.ring
    G = T.group
    N = G.order
    plan = _axiom_plan(T.kind, T.M, T.L)
    maps: dict = {}
    checks = 0
    for grp in plan:
        tm = _tuple_map(G, grp.n, grp.m, grp.tuple_map, maps)
        rhs = T.values[grp.m][grp.rhs][:, tm]
        lhs = np.broadcast_to(R.from_int(grp.const)[:, None], rhs.shape)
        for k in range(grp.lhs.shape[1]):
            lhs = R.mul(lhs, T.values[grp.n][grp.lhs[:, k]])
        bad = lhs != rhs
        checks += bad.size
        if bad.any():
            e, t = (int(x) for x in np.argwhere(bad)[0])
            tup = tuple_digits(N, grp.n)[t].tolist()
            f = T.symbols[grp.m][grp.rhs[e]]
            lhs_syms = [str(T.symbols[grp.n][p]) for p in grp.lhs[e]]
            loc = {
                "f": str(f),
                "arity": grp.m,
                "lhs": lhs_syms or [f"const {int(grp.const[e])}"],
                "tuple": tup,
                "map": list(grp.tuple_map[1]) if grp.tuple_map[0] == "zeta" else "hat",
                "lhs_value": R.payload(lhs[e, t]),
                "rhs_value": R.payload(rhs[e, t]),
            }
            return AxiomReport(False, checks, grp.condition,
                               f"condition ({grp.condition}) fails for {f} at {tup}", loc)
    return AxiomReport(True, checks)


def mutate(T: RawTable, flat: int, rng) -> RawTable:
    """Copy of ``T`` with one entry replaced by a different ring element."""
    out = T.copy()
    m, s, t = out.locate(flat)
    old = int(out.values[m][s, t])
    new = int(rng.integers(0, out.ring.size - 1))
    out.values[m][s, t] = new + (new >= old)
    return out
