"""Enumerated finite groups and their matrix representations.

A :class:`FiniteGroup` is a multiplication table on the indices ``0..n-1``
with ``0`` the identity.  A :class:`Representation` stores the image of every
element, so evaluating a representation on a word or a tuple is a lookup.
"""

from __future__ import annotations

import itertools
from collections import deque
from typing import Callable, Hashable, Sequence

import numpy as np

from . import linalg as la
from .coeffring import RingSpec, embed_codes, extension_spec
from .errors import ClosureCapExceeded, MembershipViolation, NotAHomomorphism
from .matgroups import GroupKind, MatElem, member_mask

CLOSURE_CAP = 10**4


class FiniteGroup:
    """A finite group given by its multiplication table."""

    def __init__(self, table, generators: Sequence[int] | None = None, name: str | None = None,
                 labels: Sequence[str] | None = None, check: bool = True):
        table = np.array(table, dtype=np.int64)
        n = table.shape[0]
        if table.shape != (n, n):
            raise ValueError("multiplication table must be square")
        table.setflags(write=False)
        self.table = table
        self.order = n
        self.name = name
        self.labels = list(labels) if labels is not None else None
        if check:
            self._validate()
        inv = np.argmax(table == 0, axis=1)
        inv.setflags(write=False)
        self.inverse = inv
        if generators is None:
            generators = _greedy_generators(table)
        self.generators = [int(g) for g in generators]
        if check and len(self.closure(self.generators)) != n:
            raise ValueError("generators do not generate the group")

    def _validate(self):
        n = self.order
        t = self.table
        ar = np.arange(n)
        if not (np.array_equal(t[0], ar) and np.array_equal(t[:, 0], ar)):
            raise ValueError("element 0 must be the identity")
        if not all(np.array_equal(np.sort(row), ar) for row in t):
            raise ValueError("table is not a Latin square")
        if not all(np.array_equal(np.sort(col), ar) for col in t.T):
            raise ValueError("table is not a Latin square")
        if n <= 24:
            a, b, c = np.meshgrid(ar, ar, ar, indexing="ij")
            ok = np.array_equal(t[t[a, b], c], t[a, t[b, c]])
        else:
            rng = np.random.default_rng(0)
            a, b, c = rng.integers(0, n, size=(3, 20000))
            ok = np.array_equal(t[t[a, b], c], t[a, t[b, c]])
        if not ok:
            raise ValueError("table is not associative")

    # -- the interface used by word evaluation --------------------------------

    identity = 0

    def mul(self, a, b):
        return self.table[a, b]

    def inv(self, a):
        return self.inverse[a]

    def __len__(self):
        return self.order

    def __repr__(self):
        return f"FiniteGroup({self.name or '?'}, order={self.order})"

    def __eq__(self, other):
        if not isinstance(other, FiniteGroup):
            return NotImplemented
        return self is other or np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash((self.order, self.table.tobytes()))

    # -- constructors -------------------------------------------------------------

    @classmethod
    def from_closure(cls, gens: Sequence, mul: Callable, identity, key: Callable = lambda x: x,
                     name=None, cap: int = CLOSURE_CAP):
        """Enumerate the group generated by ``gens`` under ``mul``.

        Elements are numbered in breadth-first order from the identity using
        right multiplication by the generators, so indexing is deterministic.
        Returns ``(group, elements)``.
        """
        elems = [identity]
        index: dict[Hashable, int] = {key(identity): 0}
        queue = deque([identity])
        while queue:
            x = queue.popleft()
            for g in gens:
                y = mul(x, g)
                k = key(y)
                if k not in index:
                    if len(elems) >= cap:
                        raise ClosureCapExceeded(f"group has more than {cap} elements")
                    index[k] = len(elems)
                    elems.append(y)
                    queue.append(y)
        n = len(elems)
        table = np.empty((n, n), dtype=np.int64)
        for i, x in enumerate(elems):
            for j, y in enumerate(elems):
                table[i, j] = index[key(mul(x, y))]
        gen_idx = [index[key(g)] for g in gens]
        return cls(table, gen_idx, name=name, check=False), elems

    @classmethod
    def from_permutations(cls, perms: Sequence[Sequence[int]], name=None, cap: int = CLOSURE_CAP):
        """Group generated by permutations of ``0..k-1`` (``p[i]`` is the image of ``i``).

        The product ``a*b`` applies ``b`` first.
        """
        perms = [tuple(int(x) for x in p) for p in perms]
        k = max(len(p) for p in perms)
        for p in perms:
            if sorted(p) != list(range(len(p))):
                raise ValueError(f"{p} is not a permutation")
        perms = [p + tuple(range(len(p), k)) for p in perms]
        ident = tuple(range(k))

        def mul(a, b):
            return tuple(a[b[i]] for i in range(k))

        group, elems = cls.from_closure(perms, mul, ident, name=name, cap=cap)
        group.labels = [str(list(e)) for e in elems]
        group.permutations = elems
        return group

    @classmethod
    def cyclic(cls, n: int) -> FiniteGroup:
        ar = np.arange(n)
        return cls((ar[:, None] + ar[None, :]) % n, [1 % n] if n > 1 else [], name=f"Z/{n}")

    @classmethod
    def trivial(cls) -> FiniteGroup:
        return cls([[0]], [], name="1")

    @classmethod
    def symmetric(cls, k: int) -> FiniteGroup:
        if k < 2:
            return cls.trivial()
        cycle = list(range(1, k)) + [0]
        swap = [1, 0] + list(range(2, k))
        return cls.from_permutations([cycle, swap] if k > 2 else [swap], name=f"S{k}")

    @classmethod
    def quaternion(cls) -> FiniteGroup:
        """Q_8 generated by ``i`` and ``j``."""

        def qmul(a, b):
            a0, a1, a2, a3 = a
            b0, b1, b2, b3 = b
            return (
                a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
                a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
                a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
                a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
            )

        i, j = (0, 1, 0, 0), (0, 0, 1, 0)
        group, elems = cls.from_closure([i, j], qmul, (1, 0, 0, 0), name="Q8")
        names = {(1, 0, 0, 0): "1", (0, 1, 0, 0): "i", (0, 0, 1, 0): "j", (0, 0, 0, 1): "k"}
        labels = []
        for e in elems:
            if e in names:
                labels.append(names[e])
            else:
                labels.append("-" + names[tuple(-x for x in e)])
        group.labels = labels
        return group

    @classmethod
    def dihedral(cls, n: int) -> FiniteGroup:
        rot = [(i + 1) % n for i in range(n)]
        ref = [(-i) % n for i in range(n)]
        return cls.from_permutations([rot, ref], name=f"D{n}")

    def direct_product(self, other: FiniteGroup) -> FiniteGroup:
        n, m = self.order, other.order
        a = np.arange(n * m)
        g, h = a // m, a % m
        table = self.table[g[:, None], g[None, :]] * m + other.table[h[:, None], h[None, :]]
        gens = [x * m for x in self.generators] + list(other.generators)
        name = f"{self.name}x{other.name}" if self.name and other.name else None
        return FiniteGroup(table, gens, name=name, check=False)

    def projections(self, left: FiniteGroup, right: FiniteGroup):
        """Index maps onto the factors of ``left.direct_product(right)``."""
        m = right.order
        a = np.arange(self.order)
        return a // m, a % m

    # -- structure ------------------------------------------------------------------

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = self.table[x, a]
            k += 1
        return k

    def power(self, a: int, e: int) -> int:
        x = 0
        base = a if e >= 0 else int(self.inverse[a])
        for _ in range(abs(e)):
            x = self.table[x, base]
        return int(x)

    def closure(self, elems: Sequence[int]) -> list[int]:
        """Sorted indices of the subgroup generated by ``elems``."""
        seen = {0}
        frontier = [0]
        elems = [int(e) for e in elems]
        while frontier:
            new = []
            for x in frontier:
                for g in elems:
                    y = int(self.table[x, g])
                    if y not in seen:
                        seen.add(y)
                        new.append(y)
            frontier = new
        return sorted(seen)

    def is_subgroup(self, elems) -> bool:
        s = set(int(e) for e in elems)
        if 0 not in s:
            return False
        arr = np.array(sorted(s))
        return set(self.table[arr[:, None], arr[None, :]].ravel().tolist()) <= s

    def is_normal(self, elems) -> bool:
        s = set(int(e) for e in elems)
        if not self.is_subgroup(s):
            return False
        arr = np.array(sorted(s))
        g = np.arange(self.order)
        conj = self.table[self.table[g[:, None], arr[None, :]], self.inverse[g][:, None]]
        return set(conj.ravel().tolist()) <= s

    def word_for_elements(self) -> list[list[int]]:
        """A shortest word in the generators (list of generator positions) for each element."""
        words: list[list[int] | None] = [None] * self.order
        words[0] = []
        queue = deque([0])
        while queue:
            x = queue.popleft()
            for k, g in enumerate(self.generators):
                y = int(self.table[x, g])
                if words[y] is None:
                    words[y] = words[x] + [k]
                    queue.append(y)
        return words

    def subgroup(self, elems) -> tuple[FiniteGroup, np.ndarray]:
        """The subgroup on ``elems`` (closed under products) with its inclusion map."""
        elems = self.closure(elems)
        idx = np.array(elems, dtype=np.int64)
        lookup = {e: i for i, e in enumerate(elems)}
        sub = self.table[idx[:, None], idx[None, :]]
        table = np.vectorize(lookup.__getitem__, otypes=[np.int64])(sub)
        labels = [self.labels[e] for e in elems] if self.labels else None
        return FiniteGroup(table, None, labels=labels, check=False), idx

    def quotient(self, normal) -> tuple[FiniteGroup, np.ndarray]:
        """``Gamma/N`` with the projection ``Gamma -> Gamma/N`` as an index array."""
        normal = sorted(set(int(x) for x in normal))
        if not self.is_normal(normal):
            raise ValueError("not a normal subgroup")
        proj = -np.ones(self.order, dtype=np.int64)
        reps = []
        narr = np.array(normal)
        for g in range(self.order):
            if proj[g] < 0:
                proj[self.table[g, narr]] = len(reps)
                reps.append(g)
        r = np.array(reps)
        table = proj[self.table[r[:, None], r[None, :]]]
        gens = sorted({int(proj[g]) for g in self.generators} - {0})
        name = f"{self.name}/N" if self.name else None
        return FiniteGroup(table, gens or None, name=name, check=False), proj

    def abelianization_order(self) -> int:
        comm = [int(self.table[self.table[a, b], self.table[self.inverse[a], self.inverse[b]]])
                for a in range(self.order) for b in range(self.order)]
        return self.order // len(self.closure(comm))

    # -- serialisation ----------------------------------------------------------------

    def to_json(self) -> dict:
        out = {"table": self.table.tolist(), "generators": self.generators}
        if self.name:
            out["name"] = self.name
        return out


def _greedy_generators(table) -> list[int]:
    n = table.shape[0]
    gens: list[int] = []
    covered = {0}
    for g in range(1, n):
        if g not in covered:
            gens.append(g)
            # recompute closure
            seen = {0}
            frontier = [0]
            while frontier:
                new = []
                for x in frontier:
                    for h in gens:
                        y = int(table[x, h])
                        if y not in seen:
                            seen.add(y)
                            new.append(y)
                frontier = new
            covered = seen
        if len(covered) == n:
            break
    return gens


def named_group(name: str) -> FiniteGroup:
    key = name.replace("_", "").replace("/", "").upper()
    if key in ("1", "TRIVIAL", "C1", "Z1"):
        return FiniteGroup.trivial()
    if key == "Q8":
        return FiniteGroup.quaternion()
    if key.startswith("S") and key[1:].isdigit():
        return FiniteGroup.symmetric(int(key[1:]))
    if key.startswith("D") and key[1:].isdigit():
        return FiniteGroup.dihedral(int(key[1:]))
    for prefix in ("Z", "C"):
        if key.startswith(prefix) and key[1:].isdigit():
            return FiniteGroup.cyclic(int(key[1:]))
    raise ValueError(f"unknown group name {name!r}")


class Representation:
    """A homomorphism ``Gamma -> G(A)`` stored on every element of ``Gamma``."""

    def __init__(self, group: FiniteGroup, kind: GroupKind, ring: RingSpec, images,
                 check: bool = True):
        images = np.array(images, dtype=np.int64)
        if images.shape != (group.order, kind.d, kind.d):
            raise ValueError(f"expected images of shape {(group.order, kind.d, kind.d)}")
        images.setflags(write=False)
        self.group = group
        self.kind = kind
        self.ring = ring
        self.images = images
        if check:
            self.validate()

    @property
    def d(self) -> int:
        return self.kind.d

    def validate(self):
        mask, _ = member_mask(self.kind, self.ring, self.images)
        if not np.all(mask):
            bad = int(np.flatnonzero(~mask)[0])
            raise MembershipViolation(f"image of element {bad} is not in {self.kind}")
        check_homomorphism(self.group, self.ring, self.images)

    @classmethod
    def from_generators(cls, group: FiniteGroup, kind: GroupKind, ring: RingSpec,
                        gen_images, check: bool = True) -> Representation:
        """Extend images of ``group.generators`` multiplicatively and validate."""
        gen_images = [g.entries if isinstance(g, MatElem) else np.asarray(g, dtype=np.int64)
                      for g in gen_images]
        if len(gen_images) != len(group.generators):
            raise NotAHomomorphism(
                f"{len(gen_images)} generator images for {len(group.generators)} generators")
        d = kind.d
        images = np.zeros((group.order, d, d), dtype=np.int64)
        images[0] = np.eye(d, dtype=np.int64)
        done = np.zeros(group.order, dtype=bool)
        done[0] = True
        queue = deque([0])
        while queue:
            x = queue.popleft()
            for k, g in enumerate(group.generators):
                y = int(group.table[x, g])
                if not done[y]:
                    images[y] = la.matmul(ring, images[x], gen_images[k])
                    done[y] = True
                    queue.append(y)
        # generator images must agree with the propagated values
        for k, g in enumerate(group.generators):
            if not np.array_equal(images[g], gen_images[k] % ring.size):
                raise NotAHomomorphism(f"generator {k} and its propagated image disagree")
        if check:
            mask, _ = member_mask(kind, ring, np.stack(gen_images) if gen_images else images[:1])
            if not np.all(mask):
                raise MembershipViolation(f"a generator image is not in {kind}")
            try:
                check_homomorphism(group, ring, images)
            except NotAHomomorphism as exc:
                words = group.word_for_elements()
                a, b = exc.pair
                err = NotAHomomorphism(
                    f"relation fails: rho({_fmt(words[a])}) rho({_fmt(words[b])}) != "
                    f"rho({_fmt(words[int(group.table[a, b])])})")
                err.pair = exc.pair
                raise err from None
        return cls(group, kind, ring, images, check=False)

    @classmethod
    def trivial(cls, group: FiniteGroup, kind: GroupKind, ring: RingSpec) -> Representation:
        eye = np.eye(kind.d, dtype=np.int64)
        return cls(group, kind, ring, np.broadcast_to(eye, (group.order, kind.d, kind.d)), check=False)

    def image(self, g: int) -> MatElem:
        return MatElem(self.ring, self.images[g])

    def generator_images(self) -> list[MatElem]:
        return [self.image(g) for g in self.group.generators]

    def with_kind(self, kind: GroupKind, check: bool = True) -> Representation:
        return Representation(self.group, kind, self.ring, self.images, check=check)

    def conjugate(self, g) -> Representation:
        """``x -> g rho(x) g^-1``."""
        g = g.entries if isinstance(g, MatElem) else np.asarray(g, dtype=np.int64)
        ginv = la.inverse(self.ring, g)
        imgs = la.matmul(self.ring, la.matmul(self.ring, g, self.images), ginv)
        return Representation(self.group, self.kind, self.ring, imgs, check=False)

    def extend(self, k: int) -> Representation:
        """Scalar extension to ``F_{q^k}``."""
        if k == 1:
            return self
        ring = extension_spec(self.ring, k)
        return Representation(self.group, self.kind, ring, embed_codes(self.ring, self.images, k),
                              check=False)

    def inverse_images(self) -> np.ndarray:
        return self.images[self.group.inverse]

    def kernel(self) -> list[int]:
        eye = np.eye(self.d, dtype=np.int64)
        return [int(g) for g in np.flatnonzero(np.all(self.images == eye, axis=(-1, -2)))]

    def restrict(self, sub: FiniteGroup, inclusion) -> Representation:
        return Representation(sub, self.kind, self.ring, self.images[np.asarray(inclusion)], check=False)

    def pullback(self, big: FiniteGroup, projection) -> Representation:
        """Compose with a homomorphism ``big -> self.group`` given as an index array."""
        return Representation(big, self.kind, self.ring, self.images[np.asarray(projection)], check=False)

    def __eq__(self, other):
        if not isinstance(other, Representation):
            return NotImplemented
        return (self.group == other.group and self.kind == other.kind and self.ring == other.ring
                and np.array_equal(self.images, other.images))

    def __hash__(self):
        return hash((self.kind, self.ring, self.images.tobytes()))

    def __repr__(self):
        return f"Representation({self.group!r} -> {self.kind}({self.ring!r}))"

    def to_json(self) -> dict:
        return {
            "kind": self.kind.to_json(),
            "ring": self.ring.to_json(),
            "generators": [[[self.ring.payload(x) for x in row] for row in self.images[g]]
                           for g in self.group.generators],
        }


def _fmt(word):
    return "*".join(f"g{k}" for k in word) or "1"


def check_homomorphism(group: FiniteGroup, ring: RingSpec, images):
    """Exhaustively check ``images[ab] == images[a] images[b]``."""
    n = group.order
    prods = la.matmul(ring, images[:, None], images[None, :])
    expected = images[group.table]
    bad = np.any(prods != expected, axis=(-1, -2))
    if np.any(bad):
        a, b = (int(x) for x in np.argwhere(bad)[0])
        err = NotAHomomorphism(f"rho({a}) rho({b}) != rho({a}*{b})")
        err.pair = (a, b)
        raise err
    if n and not np.array_equal(images[0], np.eye(images.shape[-1], dtype=np.int64)):
        err = NotAHomomorphism("identity is not sent to the identity matrix")
        err.pair = (0, 0)
        raise err


# -- building representations from smaller ones ---------------------------------


def direct_sum(*reps: Representation, kind: GroupKind | None = None) -> Representation:
    first = reps[0]
    imgs = la.block_diag(*(r.images for r in reps))
    if kind is None:
        kind = GroupKind("GL", imgs.shape[-1])
    return Representation(first.group, kind, first.ring, imgs, check=False)


def tensor(a: Representation, b: Representation) -> Representation:
    imgs = la.kron(a.ring, a.images, b.images)
    return Representation(a.group, GroupKind("GL", imgs.shape[-1]), a.ring, imgs, check=False)


def dual(rep: Representation) -> Representation:
    """Inverse transpose."""
    imgs = la.transpose(rep.inverse_images())
    return Representation(rep.group, GroupKind("GL", rep.d), rep.ring, imgs, check=False)


def character(group: FiniteGroup, ring: RingSpec, gen_values) -> Representation:
    """One-dimensional representation with the given values on the generators."""
    gens = [[[ring.code_from_payload(v)]] for v in gen_values]
    return Representation.from_generators(group, GroupKind("GL", 1), ring, gens)


def iter_tuples(n: int, m: int):
    return itertools.product(range(n), repeat=m)
