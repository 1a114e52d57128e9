"""Naive reference implementations used as oracles.

Soft sets are tuples of frozensets (one per parameter); nothing here touches
bitmasks or the library's shortcuts, so agreement is meaningful.
"""

from __future__ import annotations

from itertools import chain, combinations, product


def powerset(items):
    items = list(items)
    return [frozenset(c) for c in chain.from_iterable(combinations(items, k) for k in range(len(items) + 1))]


def soft_sets(universe, n_params):
    return [tuple(p) for p in product(powerset(universe), repeat=n_params)]


def leq(a, b):
    return all(x <= y for x, y in zip(a, b))


def meet(a, b):
    return tuple(x & y for x, y in zip(a, b))


def join(a, b):
    return tuple(x | y for x, y in zip(a, b))


def big_meet(family, top):
    out = top
    for s in family:
        out = meet(out, s)
    return out


def big_join(family, bottom):
    out = bottom
    for s in family:
        out = join(out, s)
    return out


def upward_directed(family):
    return all(any(leq(a, c) and leq(b, c) for c in family) for a in family for b in family)


def downward_directed(family):
    return all(any(leq(c, a) and leq(c, b) for c in family) for a in family for b in family)


def subfamilies(family, nonempty=True):
    family = list(family)
    start = 1 if nonempty else 0
    return chain.from_iterable(combinations(family, k) for k in range(start, len(family) + 1))


def is_structure(family, universe, n_params):
    """Every axiom checked over every subfamily; keep families small."""
    family = set(family)
    bottom = tuple(frozenset() for _ in range(n_params))
    top = tuple(frozenset(universe) for _ in range(n_params))
    if bottom not in family or top not in family:
        return False
    for sub in subfamilies(family):
        if big_meet(sub, top) not in family:
            return False
        if upward_directed(sub) and big_join(sub, bottom) not in family:
            return False
    return True


def is_crisp_structure(family, universe):
    return is_structure({(s,) for s in family}, universe, 1)


def hull(family, s, universe, n_params):
    top = tuple(frozenset(universe) for _ in range(n_params))
    return big_meet([c for c in family if leq(s, c)], top)


def to_tuple(soft_set):
    """Library SoftSet to the naive representation."""
    return tuple(soft_set[e] for e in soft_set.space.parameters)
