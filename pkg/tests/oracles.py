"""Independent brute-force oracles, deliberately free of package imports.

Everything here recomputes group data from first principles with plain
Python sets and dicts, so the main engine can be checked against a second
implementation that shares no code with it.
"""

from __future__ import annotations

import itertools

# quaternion units as strings
_QUAT = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
_QMUL = {
    ("1", "1"): "1", ("1", "i"): "i", ("1", "j"): "j", ("1", "k"): "k",
    ("i", "1"): "i", ("j", "1"): "j", ("k", "1"): "k",
    ("i", "i"): "-1", ("j", "j"): "-1", ("k", "k"): "-1",
    ("i", "j"): "k", ("j", "k"): "i", ("k", "i"): "j",
    ("j", "i"): "-k", ("k", "j"): "-i", ("i", "k"): "-j",
}


def quat_mul(a: str, b: str) -> str:
    sign = -1 if a.startswith("-") != b.startswith("-") else 1
    base = _QMUL[(a.lstrip("-"), b.lstrip("-"))]
    if base.startswith("-"):
        sign, base = -sign, base.lstrip("-")
    return base if sign > 0 else ("-" + base if base != "1" else "-1")


def quat_inv(a: str) -> str:
    for b in _QUAT:
        if quat_mul(a, b) == "1":
            return b
    raise AssertionError(a)


def perm_mul(p, q):
    return tuple(p[q[i]] for i in range(len(p)))


def perm_inv(p):
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v] = i
    return tuple(out)


def sym_elements(n: int):
    return list(itertools.permutations(range(n)))


def alt_elements(n: int):
    def parity(p):
        seen, swaps = [False] * len(p), 0
        for i in range(len(p)):
            if seen[i]:
                continue
            j, clen = i, 0
            while not seen[j]:
                seen[j] = True
                j = p[j]
                clen += 1
            swaps += clen - 1
        return swaps % 2

    return [p for p in sym_elements(n) if parity(p) == 0]


def commutator(mul, inv, a, b):
    return mul(mul(inv(a), inv(b)), mul(a, b))


def commutator_values(elements, mul, inv):
    return {commutator(mul, inv, a, b) for a in elements for b in elements}


def close_under_products(seed, mul, inv):
    """Subgroup closure by repeated products, pure set arithmetic."""
    out = set(seed)
    if not out:
        return out
    some = next(iter(out))
    out.add(mul(some, inv(some)))  # identity
    out |= {inv(g) for g in out}
    while True:
        new = {mul(a, b) for a in out for b in out} - out
        if not new:
            return out
        out |= new


def derived_subgroup_order(elements, mul, inv) -> int:
    values = commutator_values(elements, mul, inv)
    return len(close_under_products(values, mul, inv))


def second_derived_value_closure_order(elements, mul, inv) -> int:
    """Order of the subgroup generated by values of [[x1,x2],[x3,x4]]."""
    comms = sorted(commutator_values(elements, mul, inv))
    values = {commutator(mul, inv, a, b) for a in comms for b in comms}
    return len(close_under_products(values, mul, inv))


def pinned_verbal_orders() -> dict[str, int]:
    out = {}
    out["quat:8"] = derived_subgroup_order(_QUAT, quat_mul, quat_inv)
    out["sym:3"] = derived_subgroup_order(sym_elements(3), perm_mul, perm_inv)
    out["sym:4"] = derived_subgroup_order(sym_elements(4), perm_mul, perm_inv)
    out["alt:4"] = derived_subgroup_order(alt_elements(4), perm_mul, perm_inv)
    out["delta2 sym:4"] = second_derived_value_closure_order(
        sym_elements(4), perm_mul, perm_inv
    )
    return out
