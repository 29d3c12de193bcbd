"""Finite-group engine: dense Cayley tables, bitset subsets, subgroup arithmetic.

Elements are 0-based indices into a validated multiplication table, with the
identity always at index 0.  Exhaustive tuple enumeration dominates the
workloads built on top of this module, so everything here is geared towards
O(1) multiplication and vectorised gathers over numpy index arrays.
"""

from __future__ import annotations

import re
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    BadIndex,
    NotAGroup,
    NotNormal,
    NotNormalSubset,
    OrderCapExceeded,
    ProductNotSubgroup,
    UnassignedVariable,
    UnknownSpec,
)
from .words import Inverse, Power, Product, Var, WordExpr

DEFAULT_ORDER_CAP = 5040
ASSOC_EXHAUSTIVE_LIMIT = 256
ASSOC_SPOT_SAMPLES = 100_000


class FiniteGroup:
    """Group of order n as an n-by-n multiplication table over 0..n-1."""

    def __init__(
        self,
        table: np.ndarray,
        label: str = "G",
        element_names: Sequence[str] | None = None,
        perm_images: Sequence[tuple[int, ...]] | None = None,
        _validated: bool = False,
    ):
        table = np.ascontiguousarray(np.asarray(table, dtype=np.int32))
        if not _validated:
            table, perm = _validate_table(table)
            if element_names is not None:
                element_names = [element_names[int(j)] for j in np.argsort(perm)]
            if perm_images is not None:
                perm_images = [perm_images[int(j)] for j in np.argsort(perm)]
        self.table = table
        self.table.setflags(write=False)
        self.order = int(table.shape[0])
        self.label = label
        self.inverse_table = _inverse_table(table)
        self.inverse_table.setflags(write=False)
        self.element_names = (
            list(element_names)
            if element_names is not None
            else [str(i) for i in range(self.order)]
        )
        self.perm_images = list(perm_images) if perm_images is not None else None
        self._value_cache: dict = {}
        self._center: SubgroupHandle | None = None
        self._derived: SubgroupHandle | None = None

    # -- scalar operations ---------------------------------------------------

    identity = 0

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse_table[a])

    def conj(self, a: int, g: int) -> int:
        # g^-1 a g
        return int(self.table[self.table[self.inverse_table[g], a], g])

    def comm(self, a: int, b: int) -> int:
        t = self.table
        return int(t[t[t[self.inverse_table[a], self.inverse_table[b]], a], b])

    def power(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        out, base = 0, a
        while e:
            if e & 1:
                out = int(self.table[out, base])
            base = int(self.table[base, base])
            e >>= 1
        return out

    def element_order(self, a: int) -> int:
        n, g = 1, a
        while g != 0:
            g = int(self.table[g, a])
            n += 1
        return n

    # -- array operations ----------------------------------------------------

    def mul_arr(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.table[a, b]

    def inv_arr(self, a: np.ndarray) -> np.ndarray:
        return self.inverse_table[a]

    def comm_arr(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        t = self.table
        return t[t[t[self.inverse_table[a], self.inverse_table[b]], a], b]

    def pow_arr(self, a: np.ndarray, e: int) -> np.ndarray:
        if e < 0:
            a, e = self.inverse_table[a], -e
        out = np.zeros_like(np.asarray(a))
        base = np.asarray(a)
        while e:
            if e & 1:
                out = self.table[out, base]
            base = self.table[base, base]
            e >>= 1
        return out

    # -- subsets and naming ----------------------------------------------------

    def element_name(self, i: int) -> str:
        return self.element_names[i]

    def check_index(self, i: int) -> int:
        if not 0 <= i < self.order:
            raise BadIndex(f"element index {i} outside 0..{self.order - 1}")
        return i

    def subset(self, elements: Iterable[int] | np.ndarray) -> "ElementSubset":
        mask = np.zeros(self.order, dtype=bool)
        for e in list(elements):
            mask[self.check_index(int(e))] = True
        return ElementSubset(self, mask)

    def subset_from_mask(self, mask: np.ndarray) -> "ElementSubset":
        return ElementSubset(self, mask)

    def full_subset(self) -> "ElementSubset":
        return ElementSubset(self, np.ones(self.order, dtype=bool))

    def full_subgroup(self) -> "SubgroupHandle":
        return SubgroupHandle(
            self, np.ones(self.order, dtype=bool), generators=tuple(range(self.order))
        )

    def trivial_subgroup(self) -> "SubgroupHandle":
        mask = np.zeros(self.order, dtype=bool)
        mask[0] = True
        return SubgroupHandle(self, mask, generators=())

    def center(self) -> "SubgroupHandle":
        if self._center is None:
            mask = (self.table == self.table.T).all(axis=1)
            self._center = SubgroupHandle(
                self, mask, generators=tuple(int(i) for i in np.flatnonzero(mask))
            )
        return self._center

    def derived_subgroup(self) -> "SubgroupHandle":
        if self._derived is None:
            self._derived = commutator_of_subsets(
                self, self.full_subset(), self.full_subset()
            )
        return self._derived

    def __repr__(self) -> str:
        return f"FiniteGroup({self.label!r}, order={self.order})"


def _inverse_table(table: np.ndarray) -> np.ndarray:
    n = table.shape[0]
    inv = np.empty(n, dtype=np.int32)
    rows, cols = np.nonzero(table == 0)
    inv[rows] = cols
    return inv


def _validate_table(table: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Checks group axioms, returns the table relabelled so identity is 0.

    The returned permutation maps old indices to new ones.
    """
    if table.ndim != 2 or table.shape[0] != table.shape[1]:
        raise NotAGroup("multiplication table must be square")
    n = table.shape[0]
    if n == 0:
        raise NotAGroup("empty table")
    if table.min() < 0 or table.max() >= n:
        bad = np.argwhere((table < 0) | (table >= n))[0]
        raise NotAGroup(
            f"entry at {tuple(map(int, bad))} outside 0..{n - 1}",
            tuple(map(int, bad)),
        )
    ident = np.arange(n, dtype=np.int32)
    for axis, kind in ((1, "row"), (0, "column")):
        sorted_lines = np.sort(table, axis=axis)
        good = (sorted_lines == (ident if axis == 1 else ident[:, None])).all(axis=axis)
        if not good.all():
            i = int(np.flatnonzero(~good)[0])
            raise NotAGroup(f"{kind} {i} is not a permutation (not a Latin square)", (i,))
    # two-sided identity
    right_ids = np.flatnonzero((table == ident[:, None]).all(axis=0))
    left_ids = np.flatnonzero((table == ident[None, :]).all(axis=1))
    both = set(map(int, right_ids)) & set(map(int, left_ids))
    if not both:
        raise NotAGroup("no two-sided identity element")
    e = min(both)
    # inverses: for each a some b with ab = ba = e
    left_inv = table.T == e
    right_inv = table == e
    if not (left_inv & right_inv).any(axis=1).all():
        a = int(np.flatnonzero(~(left_inv & right_inv).any(axis=1))[0])
        raise NotAGroup(f"element {a} has no two-sided inverse", (a,))
    _check_associativity(table)
    if e != 0:
        perm = np.arange(n, dtype=np.int32)
        perm[e], perm[0] = 0, e
        new = np.empty_like(table)
        new[perm[:, None], perm[None, :]] = perm[table]
        return np.ascontiguousarray(new), perm
    return table, np.arange(n, dtype=np.int32)


def _check_associativity(table: np.ndarray) -> None:
    n = table.shape[0]
    if n <= ASSOC_EXHAUSTIVE_LIMIT:
        left = table[table]  # (a,b,c) -> (ab)c
        right = table[:, table]  # (a,b,c) -> a(bc)
        if not np.array_equal(left, right):
            a, b, c = map(int, np.argwhere(left != right)[0])
            raise NotAGroup(f"associativity fails on ({a},{b},{c})", (a, b, c))
    else:
        rng = np.random.default_rng(0)
        a = rng.integers(0, n, ASSOC_SPOT_SAMPLES)
        b = rng.integers(0, n, ASSOC_SPOT_SAMPLES)
        c = rng.integers(0, n, ASSOC_SPOT_SAMPLES)
        bad = table[table[a, b], c] != table[a, table[b, c]]
        if bad.any():
            i = int(np.flatnonzero(bad)[0])
            raise NotAGroup(
                f"associativity fails on ({int(a[i])},{int(b[i])},{int(c[i])})",
                (int(a[i]), int(b[i]), int(c[i])),
            )


class ElementSubset:
    """Subset of a group as a boolean membership mask."""

    __slots__ = ("group", "mask", "_elements", "_key", "_normal")

    def __init__(self, group: FiniteGroup, mask: np.ndarray):
        self.group = group
        mask = np.array(mask, dtype=bool, copy=True)
        if mask.shape != (group.order,):
            raise BadIndex("mask length does not match group order")
        mask.setflags(write=False)
        self.mask = mask
        self._elements: np.ndarray | None = None
        self._key: bytes | None = None
        self._normal: bool | None = None

    @property
    def elements(self) -> np.ndarray:
        if self._elements is None:
            self._elements = np.flatnonzero(self.mask).astype(np.int32)
            self._elements.setflags(write=False)
        return self._elements

    @property
    def size(self) -> int:
        return int(self.mask.sum())

    @property
    def key(self) -> bytes:
        if self._key is None:
            self._key = self.mask.tobytes()
        return self._key

    def __contains__(self, i: int) -> bool:
        return bool(self.mask[i])

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, (ElementSubset, SubgroupHandle))
            and other.group is self.group
            and other.key == self.key
        )

    def __hash__(self) -> int:
        return hash((id(self.group), self.key))

    @property
    def is_normal_subset(self) -> bool:
        if self._normal is None:
            self._normal = _conjugation_closed(self.group, self.elements, self.mask)
        return self._normal

    def require_normal_subset(self) -> "ElementSubset":
        if not self.is_normal_subset:
            raise NotNormalSubset(
                f"subset of {self.group.label} is not closed under conjugation"
            )
        return self

    def __repr__(self) -> str:
        return f"ElementSubset({self.group.label}, size={self.size})"


class SubgroupHandle:
    """Subgroup as a membership mask plus a chosen generating list."""

    __slots__ = ("group", "mask", "generators", "_elements", "_key", "_normal")

    def __init__(
        self,
        group: FiniteGroup,
        mask: np.ndarray,
        generators: tuple[int, ...] = (),
        normal: bool | None = None,
    ):
        self.group = group
        mask = np.array(mask, dtype=bool, copy=True)
        mask.setflags(write=False)
        self.mask = mask
        self.generators = generators
        self._elements: np.ndarray | None = None
        self._key: bytes | None = None
        self._normal = normal

    @property
    def elements(self) -> np.ndarray:
        if self._elements is None:
            self._elements = np.flatnonzero(self.mask).astype(np.int32)
            self._elements.setflags(write=False)
        return self._elements

    @property
    def order(self) -> int:
        return int(self.mask.sum())

    @property
    def key(self) -> bytes:
        if self._key is None:
            self._key = self.mask.tobytes()
        return self._key

    def __contains__(self, i: int) -> bool:
        return bool(self.mask[i])

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, (ElementSubset, SubgroupHandle))
            and other.group is self.group
            and other.key == self.key
        )

    def __hash__(self) -> int:
        return hash((id(self.group), self.key))

    def __le__(self, other: "SubgroupHandle") -> bool:
        return bool((~other.mask[self.elements]).sum() == 0)

    @property
    def is_normal(self) -> bool:
        if self._normal is None:
            self._normal = _conjugation_closed(self.group, self.elements, self.mask)
        return self._normal

    def require_normal(self) -> "SubgroupHandle":
        if not self.is_normal:
            raise NotNormal(f"subgroup of order {self.order} is not normal")
        return self

    def as_subset(self) -> ElementSubset:
        sub = ElementSubset(self.group, self.mask)
        sub._normal = self._normal
        return sub

    def exponent(self) -> int:
        out = 1
        for g in self.elements:
            out = _lcm(out, self.group.element_order(int(g)))
        return out

    def __repr__(self) -> str:
        return f"SubgroupHandle({self.group.label}, order={self.order})"


def _lcm(a: int, b: int) -> int:
    from math import gcd

    return a * b // gcd(a, b)


def _conjugation_closed(G: FiniteGroup, elems: np.ndarray, mask: np.ndarray) -> bool:
    if elems.size == 0:
        return True
    t = G.table
    left = t[G.inverse_table[:, None], elems[None, :]]
    conj = t[left, np.arange(G.order, dtype=np.int32)[:, None]]
    return bool(mask[conj].all())


# ---------------------------------------------------------------------------
# closures and subgroup arithmetic
# ---------------------------------------------------------------------------


def closure(G: FiniteGroup, seed: ElementSubset | Iterable[int]) -> SubgroupHandle:
    """Smallest subgroup containing `seed`, by breadth-first products."""
    seed_elems = _seed_elements(G, seed)
    gens = np.unique(
        np.concatenate([seed_elems, G.inverse_table[seed_elems]])
    ).astype(np.int32)
    mask = np.zeros(G.order, dtype=bool)
    mask[0] = True
    frontier = np.array([0], dtype=np.int32)
    while frontier.size:
        prods = np.unique(G.table[frontier[:, None], gens[None, :]])
        new = prods[~mask[prods]]
        mask[new] = True
        frontier = new.astype(np.int32)
    return SubgroupHandle(G, mask, generators=tuple(int(g) for g in seed_elems))


def normal_closure(G: FiniteGroup, seed: ElementSubset | Iterable[int]) -> SubgroupHandle:
    """Smallest normal subgroup containing `seed`."""
    seed_elems = _seed_elements(G, seed)
    if seed_elems.size == 0:
        out = G.trivial_subgroup()
        out._normal = True
        return out
    t = G.table
    all_g = np.arange(G.order, dtype=np.int32)
    conj = t[t[G.inverse_table[:, None], seed_elems[None, :]], all_g[:, None]]
    out = closure(G, np.unique(conj))
    out = SubgroupHandle(G, out.mask, generators=tuple(int(g) for g in seed_elems), normal=True)
    return out


def _seed_elements(G: FiniteGroup, seed: ElementSubset | Iterable[int]) -> np.ndarray:
    if isinstance(seed, ElementSubset):
        if seed.group is not G:
            raise BadIndex("subset belongs to a different group")
        return seed.elements
    if isinstance(seed, SubgroupHandle):
        return seed.elements
    return G.subset(seed).elements


def star_power(G: FiniteGroup, S: ElementSubset, n: int) -> ElementSubset:
    """Products of length at most n over S and its inverses.

    The identity (empty product) is always included, so star powers are
    monotone in n and stabilise at the subgroup generated by S.
    """
    if n < 0:
        raise ValueError("star power needs n >= 0")
    base = np.unique(
        np.concatenate(
            [S.elements, G.inverse_table[S.elements], np.array([0], dtype=np.int32)]
        )
    ).astype(np.int32)
    mask = np.zeros(G.order, dtype=bool)
    mask[0] = True
    cur = np.array([0], dtype=np.int32)
    for _ in range(n):
        nxt = np.unique(G.table[cur[:, None], base[None, :]]).astype(np.int32)
        if nxt.size == cur.size and (nxt == cur).all():
            break
        cur = nxt
    mask[:] = False
    mask[cur] = True
    return ElementSubset(G, mask)


def commutator_of_subsets(
    G: FiniteGroup, S: ElementSubset, T: ElementSubset
) -> SubgroupHandle:
    """Subgroup generated by commutators [s,t]; equals [<S>,<T>] for normal subsets."""
    S.require_normal_subset()
    T.require_normal_subset()
    if S.size == 0 or T.size == 0:
        out = G.trivial_subgroup()
        out._normal = True
        return out
    comms = np.unique(G.comm_arr(S.elements[:, None], T.elements[None, :]))
    out = closure(G, comms)
    return SubgroupHandle(G, out.mask, generators=tuple(int(c) for c in comms), normal=True)


def commutator_subgroup(H: SubgroupHandle, K: SubgroupHandle) -> SubgroupHandle:
    """[H,K] for normal subgroups H, K of the same group."""
    H.require_normal()
    K.require_normal()
    return commutator_of_subsets(H.group, H.as_subset(), K.as_subset())


def subgroup_product(H: SubgroupHandle, K: SubgroupHandle) -> SubgroupHandle:
    """The set product HK, which must again be a subgroup."""
    if H.group is not K.group:
        raise BadIndex("subgroups of different groups")
    G = H.group
    prods = np.unique(G.table[H.elements[:, None], K.elements[None, :]])
    mask = np.zeros(G.order, dtype=bool)
    mask[prods] = True
    if not (H.is_normal or K.is_normal):
        closed = np.unique(G.table[prods[:, None], prods[None, :]])
        if closed.size != prods.size or not mask[closed].all():
            raise ProductNotSubgroup(
                "neither factor is normal and the set product is not closed"
            )
    normal = True if (H.is_normal and K.is_normal) else None
    return SubgroupHandle(
        G, mask, generators=tuple(H.generators) + tuple(K.generators), normal=normal
    )


def congruent_mod(a: int, b: int, P: SubgroupHandle) -> bool:
    """a == b modulo the normal subgroup P, i.e. a b^-1 lies in P."""
    P.require_normal()
    G = P.group
    return bool(P.mask[G.table[a, G.inverse_table[b]]])


# ---------------------------------------------------------------------------
# word evaluation
# ---------------------------------------------------------------------------


def evaluate(w: WordExpr, G: FiniteGroup, assignment: Mapping[Var, int]) -> int:
    """Value of `w` under the fixed commutator convention."""
    return int(evaluate_arrays(w, G, {v: np.asarray(e) for v, e in assignment.items()}))


def evaluate_arrays(
    w: WordExpr, G: FiniteGroup, assignment: Mapping[Var, np.ndarray]
) -> np.ndarray:
    """Vectorised evaluation; assignment arrays must broadcast together."""
    if isinstance(w, Var):
        try:
            return np.asarray(assignment[w])
        except KeyError:
            raise UnassignedVariable(f"no value for variable {w}") from None
    if isinstance(w, Inverse):
        return G.inverse_table[evaluate_arrays(w.child, G, assignment)]
    if isinstance(w, Power):
        return G.pow_arr(evaluate_arrays(w.child, G, assignment), w.exponent)
    if isinstance(w, Product):
        if not w.factors:
            return np.asarray(0)
        out = evaluate_arrays(w.factors[0], G, assignment)
        for f in w.factors[1:]:
            out = G.table[out, evaluate_arrays(f, G, assignment)]
        return out
    a = evaluate_arrays(w.left, G, assignment)
    b = evaluate_arrays(w.right, G, assignment)
    return G.comm_arr(a, b)


# ---------------------------------------------------------------------------
# construction: tables, permutations, builtins, files
# ---------------------------------------------------------------------------


def group_from_cayley(
    table: Sequence[Sequence[int]] | np.ndarray, label: str = "G"
) -> FiniteGroup:
    return FiniteGroup(np.asarray(table, dtype=np.int64), label=label)


def _compose(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    # (p*q)(i) = p(q(i))
    return tuple(p[q[i]] for i in range(len(p)))


def group_from_permutations(
    generators: Sequence[tuple[int, ...]],
    degree: int,
    label: str = "G",
    cap: int = DEFAULT_ORDER_CAP,
) -> FiniteGroup:
    """Closure of permutation generators, materialised as a Cayley table."""
    ident = tuple(range(degree))
    for g in generators:
        if sorted(g) != list(range(degree)):
            raise NotAGroup(f"generator {g} is not a permutation of 0..{degree - 1}")
    seen: set[tuple[int, ...]] = {ident}
    frontier = [ident]
    gens = list(dict.fromkeys(map(tuple, generators)))
    while frontier:
        new: list[tuple[int, ...]] = []
        for p in frontier:
            for g in gens:
                q = _compose(p, g)
                if q not in seen:
                    seen.add(q)
                    new.append(q)
                    if len(seen) > cap:
                        raise OrderCapExceeded(
                            f"permutation closure exceeded order cap {cap}"
                        )
        frontier = new
    # canonical element order: identity first, the rest sorted
    order = [ident] + sorted(p for p in seen if p != ident)
    n = len(order)
    perms = np.array(order, dtype=np.int32)
    radix = degree ** np.arange(degree, dtype=np.int64)
    codes = perms.astype(np.int64) @ radix
    sort_idx = np.argsort(codes).astype(np.int32)
    sorted_codes = codes[sort_idx]
    table = np.empty((n, n), dtype=np.int32)
    chunk = max(1, (1 << 22) // max(1, n * degree))
    for start in range(0, n, chunk):
        block = perms[start : start + chunk]
        comp = block[:, perms]  # [ci, j, k] = block[ci, perms[j, k]]
        pos = np.searchsorted(sorted_codes, comp.astype(np.int64) @ radix)
        table[start : start + chunk] = sort_idx[pos]
    names = [cycles_str(p) for p in order]
    return FiniteGroup(
        table, label=label, element_names=names, perm_images=order, _validated=False
    )


def parse_cycles(text: str, degree: int) -> tuple[int, ...]:
    """Cycle notation with 1-based points, e.g. ``(1 2)(3 4)``."""
    text = text.strip()
    img = list(range(degree))
    if text in ("", "()", "e", "id"):
        return tuple(img)
    for cyc in re.findall(r"\(([^()]*)\)", text):
        pts = [int(s) for s in re.split(r"[,\s]+", cyc.strip()) if s]
        if any(p < 1 or p > degree for p in pts):
            raise BadIndex(f"cycle point outside 1..{degree}: ({cyc})")
        if len(set(pts)) != len(pts):
            raise NotAGroup(f"repeated point in cycle ({cyc})")
        for a, b in zip(pts, pts[1:] + pts[:1]):
            img[a - 1] = b - 1
    if not re.fullmatch(r"(\s*\([^()]*\)\s*)+", text):
        raise NotAGroup(f"cannot parse cycle notation {text!r}")
    return tuple(img)


def cycles_str(p: tuple[int, ...]) -> str:
    seen = [False] * len(p)
    parts = []
    for i in range(len(p)):
        if seen[i] or p[i] == i:
            seen[i] = True
            continue
        cyc = [i]
        seen[i] = True
        j = p[i]
        while j != i:
            cyc.append(j)
            seen[j] = True
            j = p[j]
        parts.append("(" + " ".join(str(k + 1) for k in cyc) + ")")
    return "".join(parts) if parts else "()"


def direct_product(A: FiniteGroup, B: FiniteGroup, label: str | None = None) -> FiniteGroup:
    n, m = A.order, B.order
    table = (A.table[:, None, :, None].astype(np.int64) * m + B.table[None, :, None, :]).reshape(
        n * m, n * m
    )
    names = [f"({A.element_names[i]},{B.element_names[j]})" for i in range(n) for j in range(m)]
    return FiniteGroup(
        table,
        label=label or f"{A.label} x {B.label}",
        element_names=names,
        _validated=True,
    )


def _cyclic(n: int) -> FiniteGroup:
    idx = np.arange(n, dtype=np.int64)
    table = (idx[:, None] + idx[None, :]) % n
    return FiniteGroup(table, label=f"cyc:{n}", element_names=[str(i) for i in range(n)], _validated=True)


def _dihedral(n: int) -> FiniteGroup:
    # elements r^i s^j, j in {0,1}; s r s = r^-1
    order = 2 * n
    ids = [(i, j) for j in (0, 1) for i in range(n)]
    index = {e: k for k, e in enumerate(ids)}

    def mul(a, b):
        i1, j1 = a
        i2, j2 = b
        if j1 == 0:
            return ((i1 + i2) % n, j2)
        return ((i1 - i2) % n, 1 - j2)

    table = np.array([[index[mul(a, b)] for b in ids] for a in ids], dtype=np.int64)
    names = [
        ("e" if i == 0 else f"r{i}") if j == 0 else ("s" if i == 0 else f"r{i}s")
        for i, j in ids
    ]
    return FiniteGroup(table, label=f"dih:{n}", element_names=names)


def _quaternion8() -> FiniteGroup:
    # units {±1, ±i, ±j, ±k}: encode as (axis, sign), axis in 1,i,j,k
    names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
    mul_axis = {
        ("1", "1"): ("1", 1), ("1", "i"): ("i", 1), ("1", "j"): ("j", 1), ("1", "k"): ("k", 1),
        ("i", "1"): ("i", 1), ("j", "1"): ("j", 1), ("k", "1"): ("k", 1),
        ("i", "i"): ("1", -1), ("j", "j"): ("1", -1), ("k", "k"): ("1", -1),
        ("i", "j"): ("k", 1), ("j", "k"): ("i", 1), ("k", "i"): ("j", 1),
        ("j", "i"): ("k", -1), ("k", "j"): ("i", -1), ("i", "k"): ("j", -1),
    }

    def decode(name):
        sign = -1 if name.startswith("-") else 1
        return name.lstrip("-"), sign

    def encode(axis, sign):
        return names.index(axis if sign > 0 else f"-{axis}")

    table = np.empty((8, 8), dtype=np.int64)
    for a, na in enumerate(names):
        for b, nb in enumerate(names):
            (ax_a, sa), (ax_b, sb) = decode(na), decode(nb)
            ax, s = mul_axis[(ax_a, ax_b)]
            table[a, b] = encode(ax, sa * sb * s)
    return FiniteGroup(table, label="quat:8", element_names=names)


_HEIS_PRIMES = (2, 3, 5, 7)


def _heisenberg(p: int) -> FiniteGroup:
    if p not in _HEIS_PRIMES:
        raise UnknownSpec(f"heis:{p} not supported (prime <= 7 required)")
    trip = [(a, b, c) for a in range(p) for b in range(p) for c in range(p)]
    index = {t: k for k, t in enumerate(trip)}

    def mul(u, v):
        a, b, c = u
        d, e, f = v
        return ((a + d) % p, (b + e) % p, (c + f + a * e) % p)

    table = np.array([[index[mul(u, v)] for v in trip] for u in trip], dtype=np.int64)
    names = [f"({a},{b},{c})" for a, b, c in trip]
    return FiniteGroup(table, label=f"heis:{p}", element_names=names)


def _symmetric_gens(n: int) -> list[tuple[int, ...]]:
    if n <= 1:
        return []
    swap = tuple([1, 0] + list(range(2, n)))
    cyc = tuple(list(range(1, n)) + [0])
    return [swap, cyc]


def _alternating_gens(n: int) -> list[tuple[int, ...]]:
    if n <= 2:
        return []
    three = tuple([1, 2, 0] + list(range(3, n)))
    if n <= 3:
        return [three]
    if n % 2 == 1:
        big = tuple(list(range(1, n)) + [0])
    else:
        big = tuple([0] + list(range(2, n)) + [1])
    return [three, big]


def builtin_group(spec: str, cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """Construct a named group; direct products via 'a x b'."""
    spec = spec.strip()
    parts = re.split(r"\s+(?:x|×)\s+", spec)
    if len(parts) > 1:
        out = builtin_group(parts[0], cap)
        for part in parts[1:]:
            nxt = builtin_group(part, cap)
            if out.order * nxt.order > cap:
                raise OrderCapExceeded(f"product order {out.order * nxt.order} exceeds cap {cap}")
            out = direct_product(out, nxt)
        out.label = spec
        return out
    m = re.fullmatch(r"([a-z]+):(\d+)", spec)
    if not m:
        raise UnknownSpec(f"cannot parse group spec {spec!r}")
    kind, n = m.group(1), int(m.group(2))
    if kind == "cyc":
        if n < 1:
            raise UnknownSpec("cyc:n needs n >= 1")
        if n > cap:
            raise OrderCapExceeded(f"order {n} exceeds cap {cap}")
        return _cyclic(n)
    if kind == "dih":
        if n < 1:
            raise UnknownSpec("dih:n needs n >= 1")
        if 2 * n > cap:
            raise OrderCapExceeded(f"order {2 * n} exceeds cap {cap}")
        return _dihedral(n)
    if kind == "sym":
        if n < 1:
            raise UnknownSpec("sym:n needs n >= 1")
        g = group_from_permutations(_symmetric_gens(n), max(n, 1), label=f"sym:{n}", cap=cap)
        return g
    if kind == "alt":
        if n < 1:
            raise UnknownSpec("alt:n needs n >= 1")
        g = group_from_permutations(_alternating_gens(n), max(n, 1), label=f"alt:{n}", cap=cap)
        return g
    if kind == "quat":
        if n != 8:
            raise UnknownSpec("only quat:8 is available")
        return _quaternion8()
    if kind == "heis":
        if n**3 > cap:
            raise OrderCapExceeded(f"order {n**3} exceeds cap {cap}")
        return _heisenberg(n)
    raise UnknownSpec(f"unknown group kind {kind!r}")


def load_group_file(path: str, cap: int = DEFAULT_ORDER_CAP, label: str | None = None) -> FiniteGroup:
    """Read a group from the plain-text cayley/perm file format."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines:
        raise NotAGroup(f"{path}: empty file")
    head = lines[0].split()
    name = label or path
    if head[0] == "cayley":
        n = int(head[1])
        rows = [[int(tok) for tok in ln.split()] for ln in lines[1 : n + 1]]
        if len(rows) != n:
            raise NotAGroup(f"{path}: expected {n} table rows, got {len(rows)}")
        return group_from_cayley(rows, label=name)
    if head[0] == "perm":
        degree, count = int(head[1]), int(head[2])
        gens = [parse_cycles(ln, degree) for ln in lines[1 : count + 1]]
        if len(gens) != count:
            raise NotAGroup(f"{path}: expected {count} generators, got {len(gens)}")
        return group_from_permutations(gens, degree, label=name, cap=cap)
    raise NotAGroup(f"{path}: unknown header {lines[0]!r}")
