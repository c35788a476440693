import math

import numpy as np
import pytest

from asymauto.seqcore import (
    MultiplicativeSpec,
    SequenceError,
    dirichlet_character,
    klm_form,
    liouville,
    mobius,
    multiplicative_sequence,
)
from asymauto.seqcore.multiplicative import character_count, character_spec, primes_upto

import oracles


def test_examples():
    assert liouville().eval_range(9)[1:] == [1, -1, -1, 1, -1, 1, -1, -1]
    assert mobius().eval(4) == 0
    assert dirichlet_character(4, 1).eval_range(5)[1:] == [1, 0, -1, 0]
    assert liouville().eval(0) == 0 and mobius().eval(0) == 0


def test_against_factorization_oracle():
    N = 10**4
    assert liouville().eval_range(N) == [oracles.liouville(n) for n in range(N)]
    assert mobius().eval_range(N) == [oracles.mobius(n) for n in range(N)]
    assert dirichlet_character(4, 1).eval_range(N) == [oracles.chi4(n) for n in range(N)]


def test_primes_match_sieve():
    assert primes_upto(10**5).tolist() == oracles.primes_upto(10**5)


@pytest.mark.parametrize("make", [liouville, mobius, lambda: dirichlet_character(4, 1),
                                  lambda: dirichlet_character(15, 3), lambda: dirichlet_character(7, 2)])
def test_multiplicative_on_coprime_pairs(make):
    a = make()
    M = 1000
    vals = a.values(np.arange(M * M + 1, dtype=np.int64))
    n = np.arange(1, M + 1)
    nn, mm = np.meshgrid(n, n, indexing="ij")
    cop = np.gcd(nn, mm) == 1
    lhs = vals[(nn * mm)[cop]]
    rhs = vals[nn[cop]] * vals[mm[cop]]
    assert np.allclose(lhs, rhs, atol=1e-12)


@pytest.mark.parametrize("q", [3, 4, 5, 8, 12, 15])
def test_characters_are_periodic_and_completely_multiplicative(q):
    for index in range(character_count(q)):
        a = dirichlet_character(q, index)
        v = a.values(np.arange(4 * q * q + 40 * q, dtype=np.int64))
        assert np.allclose(v[q:], v[:-q])
        for n in range(1, 2 * q):
            for m in range(1, 2 * q):
                assert abs(v[n * m] - v[n] * v[m]) < 1e-12
        nz = [n for n in range(q) if abs(v[n]) > 1e-12]
        assert nz == [n for n in range(q) if math.gcd(n, q) == 1]


def test_character_count_is_totient():
    for q in range(2, 40):
        assert character_count(q) == sum(1 for n in range(1, q + 1) if math.gcd(n, q) == 1)


def test_custom_spec_completely_multiplicative():
    spec = MultiplicativeSpec(2, lambda p, e: np.where(p == 2, 0, 1) * e % 2, "custom")
    a = multiplicative_sequence(spec)
    # +1 on powers of 2, (-1)^e on p^e for odd p
    for n in range(1, 500):
        f = oracles.factorize(n)
        want = (-1) ** sum(e for p, e in f.items() if p != 2)
        assert a.eval(n) == want


def test_bad_spec_order():
    with pytest.raises(SequenceError):
        MultiplicativeSpec(0, lambda p, e: p, "bad")


def _c_value(c, c_period, i):
    if i < len(c):
        return c[i]
    pre = len(c) - c_period
    return c[pre + (i - pre) % c_period]


@pytest.mark.parametrize("p,b,c,cp", [(3, [0, 1, -1], [1, -1], 1), (2, [0, 1], [1, 0, -1, 1], 2),
                                      (5, [0, 1, 2, 1, 0], [2, 1, 1], 3)])
def test_klm_form_identity(p, b, c, cp):
    a = klm_form(p, b, c, cp)
    L = 10**4
    vals = a.values(np.arange(p**5 * L + 1, dtype=np.int64))
    assert vals[0] == 0
    for i in range(6):
        n = np.arange(1, L + 1)
        n = n[n % p != 0]
        want = np.array([_c_value(c, cp, i) * b[x % len(b)] for x in n])
        assert np.array_equal(vals[p**i * n], want), i


def test_klm_form_errors():
    with pytest.raises(SequenceError):
        klm_form(4, [1], [1])
    with pytest.raises(SequenceError):
        klm_form(3, [], [1])
    with pytest.raises(SequenceError):
        klm_form(3, [1], [1, 2], 3)


def test_character_spec_prime_values_bounded():
    spec = character_spec(12, 2)
    v = spec.prime_values(primes_upto(500))
    assert np.all(np.abs(v) <= 1 + 1e-12)
