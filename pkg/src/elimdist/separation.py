"""Deterministic (a, b)-separating families.

A family over the universe {0..n-1} is (a, b)-separating when every pair of
disjoint sets A, B with |A| <= a and |B| <= b has a member R with A inside R
and B outside it.

Large universes are hashed down to a prime q with a Reed-Solomon style map
h_alpha(i) = sum_j digit_j(i) * alpha^j (mod q), where digit_j(i) are the
base-q digits of i. Two distinct elements agree under at most L-1 values of
alpha (L digits), so q > a*b*(L-1) leaves some alpha on which A and B have
disjoint images. A small family on [q] then separates those images and is
pulled back along every hash. The size is q * |inner family on [q]|, and q
is the smallest prime with q > a*b*(ceil(log_q n) - 1), which grows only with
log n / log log n.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb

import numpy as np

# universes at most this large get an inner family directly
DIRECT_LIMIT = 16
# cells allowed in the greedy candidate-by-constraint matrix
GREEDY_BUDGET = 1 << 24
VERIFY_MAX_N = 16
VERIFY_MAX_AB = 6


class FamilyCapError(ValueError):
    pass


@dataclass(frozen=True)
class SeparatingFamily:
    universe_size: int
    a: int
    b: int
    sets: tuple[int, ...]  # bit masks over the universe

    def __len__(self) -> int:
        return len(self.sets)

    def members(self, index: int) -> list[int]:
        m = self.sets[index]
        return [i for i in range(self.universe_size) if m >> i & 1]

    def as_lists(self) -> list[list[int]]:
        return [self.members(i) for i in range(len(self.sets))]

    def format(self) -> str:
        """One line per member, space-separated element indices."""
        return "".join(" ".join(map(str, s)) + "\n" for s in self.as_lists())

    @classmethod
    def parse(cls, text: str, n: int, a: int, b: int) -> "SeparatingFamily":
        sets = []
        for line in text.splitlines():
            m = 0
            for tok in line.split():
                i = int(tok)
                if not 0 <= i < n:
                    raise ValueError(f"element {i} outside universe of size {n}")
                m |= 1 << i
            sets.append(m)
        return cls(n, a, b, tuple(sets))


def _is_prime(x: int) -> bool:
    if x < 2:
        return False
    i = 2
    while i * i <= x:
        if x % i == 0:
            return False
        i += 1
    return True


def _digits_needed(n: int, q: int) -> int:
    """Smallest L with q**L >= n."""
    L, cap = 1, q
    while cap < n:
        cap *= q
        L += 1
    return L


def hash_prime(n: int, a: int, b: int) -> int:
    """Smallest prime q with q > a*b*(L-1) for L base-q digits of n elements."""
    q = 2
    while True:
        if _is_prime(q) and q > a * b * (_digits_needed(n, q) - 1):
            return q
        q += 1


def _trivial(n: int, a: int, b: int) -> list[int]:
    """Every set of size <= a, or every complement of a set of size <= b."""
    small_a = sum(comb(n, i) for i in range(a + 1))
    small_b = sum(comb(n, i) for i in range(b + 1))
    full = (1 << n) - 1
    out = []
    if small_a <= small_b:
        for size in range(a + 1):
            for c in combinations(range(n), size):
                out.append(sum(1 << i for i in c))
    else:
        for size in range(b + 1):
            for c in combinations(range(n), size):
                out.append(full & ~sum(1 << i for i in c))
    return out


def _constraints(n: int, a: int, b: int) -> list[tuple[int, int]]:
    """Disjoint (A, B) pairs that imply all smaller ones."""
    out = []
    for asize in range(min(a, n) + 1):
        bsize = min(b, n - asize)
        if asize < a and asize + bsize < n:
            continue  # A could still grow, so a larger pair covers it
        for A in combinations(range(n), asize):
            am = sum(1 << i for i in A)
            rest = [i for i in range(n) if not am >> i & 1]
            for B in combinations(rest, bsize):
                out.append((am, sum(1 << i for i in B)))
    return out


def _greedy(n: int, a: int, b: int) -> list[int] | None:
    """Greedy set cover of all constraints by subsets of [n]; None if over budget."""
    if n > DIRECT_LIMIT:
        return None
    cons = _constraints(n, a, b)
    ncand = 1 << n
    if ncand * len(cons) > GREEDY_BUDGET:
        return None
    cand = np.arange(ncand, dtype=np.int64)
    A = np.array([c[0] for c in cons], dtype=np.int64)
    B = np.array([c[1] for c in cons], dtype=np.int64)
    ok = ((cand[:, None] & A[None, :]) == A[None, :]) & ((cand[:, None] & B[None, :]) == 0)
    alive = np.ones(len(cons), dtype=bool)
    out = []
    while alive.any():
        gain = ok[:, alive].sum(axis=1)
        best = int(np.argmax(gain))  # ties go to the smallest mask
        out.append(best)
        alive &= ~ok[best]
    return out


@lru_cache(maxsize=256)
def _inner(n: int, a: int, b: int) -> tuple[int, ...]:
    fam = _greedy(n, a, b)
    triv = _trivial(n, a, b)
    if fam is None or len(triv) < len(fam):
        fam = triv
    return tuple(fam)


def _dedupe(sets) -> tuple[int, ...]:
    seen: set[int] = set()
    out = []
    for s in sets:
        if s not in seen:
            seen.add(s)
            out.append(s)
    return tuple(out)


def build_family(n: int, a: int, b: int) -> SeparatingFamily:
    if n < 0 or a < 0 or b < 0:
        raise ValueError("n, a and b must be non-negative")
    a, b = min(a, n), min(b, n)
    full = (1 << n) - 1
    if a == 0:
        return SeparatingFamily(n, a, b, (0,))
    if b == 0:
        return SeparatingFamily(n, a, b, (full,))
    q = hash_prime(n, a, b)
    if n <= DIRECT_LIMIT or q >= n:
        return SeparatingFamily(n, a, b, _dedupe(_inner(n, a, b)))
    L = _digits_needed(n, q)
    digits = np.zeros((n, L), dtype=np.int64)
    x = np.arange(n, dtype=np.int64)
    for j in range(L):
        digits[:, j] = x % q
        x //= q
    inner = _inner(q, a, b)
    inner_bits = np.array([[r >> c & 1 for c in range(q)] for r in inner], dtype=bool)
    sets = []
    for alpha in range(q):
        powers = np.array([pow(alpha, j, q) for j in range(L)], dtype=np.int64)
        h = (digits @ powers) % q
        for row in inner_bits:
            members = np.flatnonzero(row[h])
            sets.append(sum(1 << int(i) for i in members))
    return SeparatingFamily(n, a, b, _dedupe(sets))


def size_bound(n: int, a: int, b: int) -> int:
    """Upper bound on len(build_family(n, a, b)).

    For hashed universes this is q times the smaller trivial family on [q],
    with q = hash_prime(n, a, b). q is O(a * b * log n) and stays constant
    over wide ranges of n for fixed (a, b).
    """
    if min(a, b, n) == 0:
        return 1
    a, b = min(a, n), min(b, n)
    q = hash_prime(n, a, b)
    direct = n <= DIRECT_LIMIT or q >= n
    base = n if direct else q
    inner = min(sum(comb(base, i) for i in range(a + 1)), sum(comb(base, i) for i in range(b + 1)))
    return inner if direct else q * inner


def verify_family(fam: SeparatingFamily) -> bool:
    """Exhaustively check the separation guarantee (n <= 16, a + b <= 6)."""
    n, a, b = fam.universe_size, min(fam.a, fam.universe_size), min(fam.b, fam.universe_size)
    if n > VERIFY_MAX_N or a + b > VERIFY_MAX_AB:
        raise FamilyCapError(
            f"exhaustive verification is capped at n <= {VERIFY_MAX_N}, a + b <= {VERIFY_MAX_AB}"
        )
    sets = np.array(fam.sets, dtype=np.int64) if fam.sets else np.zeros(0, dtype=np.int64)
    for asize in range(a + 1):
        bsize = min(b, n - asize)
        for A in combinations(range(n), asize):
            am = sum(1 << i for i in A)
            cand = sets[(sets & am) == am]
            rest = [i for i in range(n) if not am >> i & 1]
            Bs = np.array(
                [sum(1 << i for i in B) for B in combinations(rest, bsize)], dtype=np.int64
            )
            if cand.size == 0:
                return False
            if not ((cand[:, None] & Bs[None, :]) == 0).any(axis=0).all():
                return False
    return True


__all__ = [
    "FamilyCapError",
    "SeparatingFamily",
    "build_family",
    "hash_prime",
    "size_bound",
    "verify_family",
]
