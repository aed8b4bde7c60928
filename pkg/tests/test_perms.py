import math
import random

import pytest

from symcube.perms import (
    PermGroup,
    compose,
    format_cycles,
    identity,
    inverse,
    parse_cycles,
    perm_order,
)


def brute_order(gens, n):
    elems = {tuple(range(n))}
    frontier = list(elems)
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = tuple(g[i] for i in x)
            if y not in elems:
                elems.add(y)
                frontier.append(y)
    return len(elems)


def test_compose_inverse_laws():
    rng = random.Random(0)
    for _ in range(50):
        n = rng.randint(1, 12)
        p = tuple(rng.sample(range(n), n))
        q = tuple(rng.sample(range(n), n))
        assert compose(p, inverse(p)) == identity(n)
        assert compose(inverse(p), p) == identity(n)
        assert inverse(compose(p, q)) == compose(inverse(q), inverse(p))


def test_cycle_roundtrip():
    rng = random.Random(1)
    for _ in range(50):
        n = rng.randint(1, 20)
        p = tuple(rng.sample(range(n), n))
        assert parse_cycles(format_cycles(p), n) == p
    assert parse_cycles("()", 5) == identity(5)
    assert format_cycles(identity(4)) == "()"


def test_cycle_parse_examples():
    p = parse_cycles("(1,16)(4,5)", 16)
    assert p[0] == 15 and p[15] == 0 and p[3] == 4 and p[4] == 3
    with pytest.raises(ValueError):
        parse_cycles("(1,1)", 4)
    with pytest.raises(ValueError):
        parse_cycles("(1,99)", 4)


def test_perm_order():
    assert perm_order((1, 2, 0, 4, 3)) == 6


def test_permgroup_versus_bruteforce():
    rng = random.Random(7)
    for _ in range(120):
        n = rng.randint(2, 8)
        gens = [tuple(rng.sample(range(n), n)) for _ in range(rng.randint(1, 3))]
        assert PermGroup(gens, n).order() == brute_order(gens, n)


def test_permgroup_known_orders():
    n = 8
    cycle = tuple(list(range(1, n)) + [0])
    swap = tuple([1, 0] + list(range(2, n)))
    g = PermGroup([cycle, swap], n)
    assert g.order() == math.factorial(n)
    assert swap in g
    assert tuple(range(n)) in g


def test_permgroup_membership_negative():
    rot = (1, 2, 3, 0)
    g = PermGroup([rot], 4)
    assert g.order() == 4
    assert (1, 0, 2, 3) not in g
