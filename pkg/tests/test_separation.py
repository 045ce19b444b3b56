import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from elimdist.separation import (
    FamilyCapError,
    SeparatingFamily,
    build_family,
    hash_prime,
    size_bound,
    verify_family,
)


def separates(sets, n, a, b):
    """Plain-set oracle for the separation guarantee."""
    fams = [frozenset(i for i in range(n) if s >> i & 1) for s in sets]
    for asize in range(min(a, n) + 1):
        for A in itertools.combinations(range(n), asize):
            rest = [i for i in range(n) if i not in A]
            for bsize in range(min(b, len(rest)) + 1):
                for B in itertools.combinations(rest, bsize):
                    if not any(set(A) <= R and not (set(B) & R) for R in fams):
                        return False
    return True


def test_a_zero_and_b_zero():
    assert build_family(5, 0, 3).sets == (0,)
    assert build_family(5, 3, 0).sets == ((1 << 5) - 1,)
    assert verify_family(build_family(5, 0, 3))
    assert verify_family(build_family(5, 3, 0))


def test_small_examples():
    fam = build_family(4, 1, 1)
    assert verify_family(fam)
    assert separates(fam.sets, 4, 1, 1)
    fam = build_family(10, 2, 2)
    assert verify_family(fam)
    assert separates(fam.sets, 10, 2, 2)


def test_verify_rejects_and_accepts():
    assert not verify_family(SeparatingFamily(3, 1, 0, (0,)))
    assert verify_family(SeparatingFamily(4, 2, 2, tuple(range(1 << 4))))
    assert not verify_family(SeparatingFamily(3, 1, 1, ()))


@pytest.mark.parametrize("n", range(0, 13))
def test_guarantee_up_to_12(n):
    for a in range(4):
        for b in range(4):
            fam = build_family(n, a, b)
            assert verify_family(fam), (n, a, b)
            assert len(fam) <= size_bound(n, a, b)


@given(st.integers(0, 7), st.integers(0, 3), st.integers(0, 3))
def test_verify_matches_plain_oracle(n, a, b):
    fam = build_family(n, a, b)
    assert verify_family(fam) == separates(fam.sets, n, a, b)


@given(st.integers(1, 5), st.lists(st.integers(0, 31), max_size=6), st.integers(0, 2), st.integers(0, 2))
def test_verify_matches_oracle_on_arbitrary_families(n, raw, a, b):
    sets = tuple(s & ((1 << n) - 1) for s in raw)
    fam = SeparatingFamily(n, a, b, sets)
    assert verify_family(fam) == separates(sets, n, a, b)


def test_size_grows_logarithmically():
    sizes = [len(build_family(n, 2, 2)) for n in (64, 128, 256, 512)]
    steps = [y - x for x, y in zip(sizes, sizes[1:])]
    assert max(steps) <= 0
    assert all(hash_prime(n, 2, 2) == hash_prime(64, 2, 2) for n in (128, 256, 512))


@pytest.mark.parametrize("n,a,b", [(64, 2, 2), (100, 3, 3), (200, 1, 4), (50, 4, 2)])
def test_hashed_families_on_random_pairs(n, a, b):
    fam = build_family(n, a, b)
    assert len(fam) <= size_bound(n, a, b)
    rnd = random.Random(n * 31 + a * 7 + b)
    for _ in range(1500):
        pick = rnd.sample(range(n), a + b)
        A = sum(1 << i for i in pick[:a])
        B = sum(1 << i for i in pick[a:])
        assert any(R & A == A and R & B == 0 for R in fam.sets)


def test_deterministic():
    assert build_family(300, 2, 3).sets == build_family(300, 2, 3).sets
    assert build_family(11, 3, 2).sets == build_family(11, 3, 2).sets


def test_format_parse_round_trip():
    fam = build_family(9, 2, 1)
    back = SeparatingFamily.parse(fam.format(), 9, 2, 1)
    assert back == fam
    assert fam.as_lists()[0] == fam.members(0)
    with pytest.raises(ValueError):
        SeparatingFamily.parse("0 9\n", 9, 1, 1)


def test_verify_cap():
    with pytest.raises(FamilyCapError):
        verify_family(build_family(17, 1, 1))
    with pytest.raises(FamilyCapError):
        verify_family(SeparatingFamily(10, 4, 3, ()))


def test_negative_parameters():
    with pytest.raises(ValueError):
        build_family(-1, 1, 1)
