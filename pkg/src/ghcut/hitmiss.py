"""Deterministic hit-and-miss families of binary labelings.

A family over a ground set satisfies the hit-and-miss property for
parameters ``(a, b)`` when for every disjoint pair of subsets ``A`` (size at
most ``a``) and ``B`` (size at most ``b``) some member labels all of ``B``
with 1 and all of ``A`` with 0.

Two constructions are available and the smaller one is returned:

* ``pairs``: all singleton and pair indicators.  Trivially valid for any
  ``a`` (the indicator of ``B`` itself is the witness) but quadratic in the
  ground size.
* ``modular``: residue labelings ``x -> [x mod p in R]`` for ``|R| <= 2``
  over the first ``t`` primes above a threshold proportional to
  ``a * log2(N)``.  Any ``A u B`` spans at most ``C(a+b, 2)`` pairs, each pair
  collides modulo at most ``log_threshold(N)`` of those primes, and ``t``
  exceeds the total collision budget, so some prime separates ``A u B``
  pairwise; the member selecting exactly the residues of ``B`` under that
  prime hits ``B`` and misses ``A``.

Members label *positions* of the sorted ground tuple, which keeps the
modular arithmetic on a canonical dense domain regardless of the actual
element ids.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from .errors import InvalidArgumentError

_Member = tuple


@dataclass(frozen=True)
class HitMissFamily:
    ground: tuple[int, ...]
    a: int
    b: int
    members: tuple[_Member, ...]
    strategy: str

    @property
    def size(self) -> int:
        return len(self.members)


def _first_primes_above(threshold: int, count: int) -> list[int]:
    out: list[int] = []
    p = max(2, threshold + 1)
    while len(out) < count:
        is_prime = p >= 2 and all(p % q for q in range(2, int(math.isqrt(p)) + 1))
        if is_prime:
            out.append(p)
        p += 1
    return out


def _modular_plan(n: int, a: int, b: int) -> tuple[int, int]:
    """Prime threshold and prime count for the modular construction."""
    threshold = max(a + b + 1, a * max(1, math.ceil(math.log2(max(2, n)))))
    if n <= 2:
        collisions_per_pair = 0
    else:
        collisions_per_pair = int(math.log(n - 1) // math.log(threshold))
    t = math.comb(a + b, 2) * collisions_per_pair + 1
    return threshold, t


def _modular_size(n: int, a: int, b: int) -> int:
    threshold, t = _modular_plan(n, a, b)
    total = 0
    for p in _first_primes_above(threshold, t):
        total += p
        if b >= 2:
            total += p * (p - 1) // 2
    return total


def _pairs_size(n: int, b: int) -> int:
    return n + (n * (n - 1) // 2 if b >= 2 else 0)


def _build_pairs(n: int, b: int) -> list[_Member]:
    members: list[_Member] = [("mask", frozenset({i})) for i in range(n)]
    if b >= 2:
        for i in range(n):
            for j in range(i + 1, n):
                members.append(("mask", frozenset({i, j})))
    return members


def _build_modular(n: int, a: int, b: int) -> list[_Member]:
    threshold, t = _modular_plan(n, a, b)
    members: list[_Member] = []
    for p in _first_primes_above(threshold, t):
        for c in range(p):
            members.append(("mod", p, frozenset({c})))
        if b >= 2:
            for c1 in range(p):
                for c2 in range(c1 + 1, p):
                    members.append(("mod", p, frozenset({c1, c2})))
    return members


def construct_family(
    ground: int | Iterable[int], a: int, b: int, strategy: str = "auto"
) -> HitMissFamily:
    """Build a hit-and-miss family over ``ground`` for parameters ``(a, b)``.

    ``ground`` is either a positive integer ``N`` (ground set ``0..N-1``) or
    an iterable of distinct element ids.  Only ``b <= 2`` is supported; that
    is all the cut algorithms require.  ``strategy`` forces a particular
    construction for testing; the default picks the smaller family.
    """
    if isinstance(ground, int):
        if ground < 1:
            raise InvalidArgumentError("ground size must be positive")
        elements = tuple(range(ground))
    else:
        elements = tuple(sorted(set(int(x) for x in ground)))
        if not elements:
            raise InvalidArgumentError("ground set must be nonempty")
    if b < 1:
        raise InvalidArgumentError("b must be at least 1")
    if b > 2:
        raise InvalidArgumentError("b > 2 is unsupported")
    if a < b:
        raise InvalidArgumentError("need a >= b")
    n = len(elements)
    if strategy == "pairs":
        members, chosen = _build_pairs(n, b), "pairs"
    elif strategy == "modular":
        members, chosen = _build_modular(n, a, b), "modular"
    elif strategy == "auto":
        if _pairs_size(n, b) <= _modular_size(n, a, b):
            members, chosen = _build_pairs(n, b), "pairs"
        else:
            members, chosen = _build_modular(n, a, b), "modular"
    else:
        raise InvalidArgumentError(f"unknown strategy {strategy!r}")
    return HitMissFamily(elements, a, b, tuple(members), chosen)


def _member_positions(member: _Member, n: int) -> frozenset[int]:
    kind = member[0]
    if kind == "mask":
        return member[1]
    if kind == "mod":
        _, p, residues = member
        return frozenset(i for i in range(n) if i % p in residues)
    raise InvalidArgumentError(f"unknown member kind {kind!r}")


def hit_set(fam: HitMissFamily, index: int) -> frozenset[int]:
    """Ground elements labeled 1 by the family member at ``index``."""
    if not (0 <= index < len(fam.members)):
        raise InvalidArgumentError("family index out of range")
    pos = _member_positions(fam.members[index], len(fam.ground))
    return frozenset(fam.ground[i] for i in pos)


# -- exhaustive verification --------------------------------------------------


def _can_hit(sets: list[int], k: int) -> bool:
    """Is there a hitting set of size <= k for the bitmask set system?"""
    if not sets:
        return True
    if k == 0:
        return False
    smallest = min(sets, key=lambda s: s.bit_count())
    mask = smallest
    while mask:
        bit = mask & -mask
        mask ^= bit
        rest = [s for s in sets if not (s & bit)]
        if _can_hit(rest, k - 1):
            return True
    return False


def verify_family(fam: HitMissFamily) -> bool:
    """Exhaustively check the hit-and-miss property.  Ground size <= 64 only.

    For a fixed target ``B``, the property fails for some admissible ``A``
    exactly when the system ``{ones(h) - B : h hits B}`` admits a hitting set
    of size at most ``a`` (such an ``A`` defeats every candidate witness).
    Empty ``B`` needs no separate pass: a witness for any singleton ``B``
    disjoint from ``A`` also misses ``A``.
    """
    n = len(fam.ground)
    if n > 64:
        raise InvalidArgumentError("exhaustive verification limited to 64 elements")
    ones = [
        sum(1 << i for i in _member_positions(m, n)) for m in fam.members
    ]
    targets = [1 << i for i in range(n)]
    if fam.b >= 2:
        targets += [
            (1 << i) | (1 << j) for i in range(n) for j in range(i + 1, n)
        ]
    for bmask in targets:
        hitters = [o & ~bmask for o in ones if (o & bmask) == bmask]
        if not hitters:
            return False
        if any(h == 0 for h in hitters):
            continue
        if _can_hit(hitters, fam.a):
            return False
    return True
