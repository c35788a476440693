import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from asymauto.seqcore import (
    BUILTIN_DFAOS,
    DFAO,
    Alphabet,
    SequenceError,
    bracket_floor_mod,
    constant,
    dfao_sequence,
    eval_range,
    patched_sturmian,
    period_doubling,
    periodic,
    perturb,
    rudin_shapiro,
    sturmian,
    thue_morse,
)
from asymauto.seqcore.dfao import MalformedDFAO, digits_msd

import oracles

GOLDEN = "(sqrt(5)-1)/2"


# generic evaluation ------------------------------------------------------------


def test_eval_range_examples():
    assert eval_range(constant(0), 4) == [0, 0, 0, 0]
    assert eval_range(thue_morse(), 8) == [0, 1, 1, 0, 1, 0, 0, 1]
    assert eval_range(sturmian(GOLDEN), 5) == [0, 1, 0, 1, 1]


def test_periodic():
    assert eval_range(periodic("abc"), 7) == list("abcabca")
    with pytest.raises(SequenceError):
        periodic([])


def test_alphabet_rejects_duplicates():
    with pytest.raises(SequenceError):
        Alphabet((0, 0))
    with pytest.raises(SequenceError):
        Alphabet(())


@given(st.sampled_from(sorted(BUILTIN_DFAOS)), st.integers(1, 3))
def test_evaluation_independent_of_workers(name, workers):
    a = dfao_sequence(BUILTIN_DFAOS[name]())
    N = 3 * (1 << 16) + 17  # several blocks
    assert np.array_equal(a.codes_range(N, workers=workers), a.codes_range(N, workers=1))


@given(st.lists(st.integers(0, 2**60), min_size=1, max_size=40))
def test_point_and_batch_evaluation_agree(ns):
    a = thue_morse()
    batch = a.codes(np.array(ns, dtype=np.int64)).tolist()
    assert batch == [a.eval(n) for n in ns]
    assert batch == [oracles.thue_morse(n) for n in ns]


def test_negative_index_rejected():
    with pytest.raises(SequenceError):
        thue_morse().codes(np.array([-1]))


# automata --------------------------------------------------------------------


def test_thue_morse_oracle():
    a = thue_morse()
    assert a.eval(5) == 0
    N = 1 << 16
    assert a.eval_range(N) == [oracles.thue_morse(n) for n in range(N)]


def test_period_doubling_matches_substitution():
    N = 1 << 13
    assert period_doubling().eval_range(N) == oracles.period_doubling_substitution(N)


def test_rudin_shapiro_oracle():
    N = 1 << 14
    assert rudin_shapiro().eval_range(N) == [oracles.rudin_shapiro(n) for n in range(N)]


def test_mod3_automaton():
    a = dfao_sequence(BUILTIN_DFAOS["mod3"]())
    assert a.eval_range(5000) == [n % 3 for n in range(5000)]


def test_single_state_is_constant():
    m = DFAO(3, ((0, 0, 0),), 0, (0,), Alphabet((7,)))
    assert set(dfao_sequence(m).eval_range(1000)) == {7}


@pytest.mark.parametrize("delta,q0,tau", [(((0, 2),), 0, (0,)), (((0,),), 0, (0,)),
                                         (((0, 1), (1, 0)), 0, (0,)), (((0, 0),), 1, (0,)),
                                         (((0, 0),), 0, (2,))])
def test_malformed_dfao(delta, q0, tau):
    with pytest.raises(MalformedDFAO):
        DFAO(2, delta, q0, tau, Alphabet((0, 1)))


def test_digit_out_of_range():
    with pytest.raises(MalformedDFAO):
        BUILTIN_DFAOS["thue_morse"]().run([0, 2])


def test_run_matches_fast_path_on_every_builtin():
    for name, make in BUILTIN_DFAOS.items():
        m = make()
        seq = dfao_sequence(m)
        want = [m.alphabet.symbol(m.tau[m.run(digits_msd(n, m.k))]) for n in range(3000)]
        assert seq.eval_range(3000) == want, name


# Sturmian and bracket words --------------------------------------------------


def test_fibonacci_sturmian_oracle():
    N = 100000
    assert sturmian(GOLDEN).eval_range(N) == [oracles.fibonacci_sturmian(n) for n in range(N)]


def test_rational_slope_is_periodic():
    assert sturmian("1/2").eval_range(10) == [0, 1] * 5


def test_ceil_mode_differs_only_at_the_start():
    N = 1000
    f = sturmian(GOLDEN).eval_range(N)
    c = sturmian(GOLDEN, 0, "ceil").eval_range(N)
    diff = [n for n in range(N) if f[n] != c[n]]
    assert diff == [0]


@pytest.mark.parametrize("theta,rho", [("0", "0"), ("1", "0"), ("3/2", "0"), ("1/3", "1"), ("1/3", "-1/5")])
def test_sturmian_parameter_errors(theta, rho):
    with pytest.raises(SequenceError):
        sturmian(theta, rho)


@given(st.integers(0, 2**40), st.sampled_from(["0", "1/3", "0.25", "sqrt(5)-2"]))
def test_sturmian_values_are_floor_differences(n, rho):
    import sympy

    th = (sympy.sqrt(5) - 1) / 2
    r = sympy.sqrt(5) - 2 if rho.startswith("sqrt") else sympy.Rational(rho)
    want = int(sympy.floor(th * (n + 1) + r) - sympy.floor(th * n + r))
    assert sturmian(GOLDEN, rho).eval(n) == want


def test_mixed_quadratic_fields_rejected_up_front():
    with pytest.raises(SequenceError):
        sturmian(GOLDEN, "sqrt(2)-1")
    with pytest.raises(SequenceError):
        bracket_floor_mod("sqrt(2)", "sqrt(3)-1", 2)


def test_patched_single_block_is_plain_sturmian():
    a = patched_sturmian(GOLDEN, ["0.3"], [10])
    assert a.eval_range(5000) == sturmian(GOLDEN, "0.3").eval_range(5000)


def test_patched_prefix_and_boundary_fraction():
    a = patched_sturmian(GOLDEN, ["0", "0.7"], [100, 10**6])
    assert a.eval_range(100) == sturmian(GOLDEN).eval_range(100)
    b = patched_sturmian(GOLDEN, ["0", "0.3", "0.7"], [10**2, 10**4, 10**6])
    N = 10**6
    assert sum(1 for x in b.boundaries if x < N) / N <= 3e-4
    assert b.boundaries == [100, 10100]


def test_patched_errors():
    with pytest.raises(SequenceError):
        patched_sturmian(GOLDEN, [], [])
    with pytest.raises(SequenceError):
        patched_sturmian(GOLDEN, ["0", "0.5"], [100, 50])


def test_bracket_examples():
    assert set(bracket_floor_mod("0", "0.5", 2).eval_range(100)) == {0}
    assert bracket_floor_mod("1", "0", 3).eval_range(7) == [0, 1, 2, 0, 1, 2, 0]
    assert bracket_floor_mod("sqrt(2)", "0", 2).eval_range(6) == [0, 1, 0, 0, 1, 1]
    N = 50000
    got = bracket_floor_mod("sqrt(2)", "0", 5).eval_range(N)
    assert got == [oracles.floor_sqrt_scaled(2, 1, n) % 5 for n in range(N)]


def test_bracket_modulus_error():
    with pytest.raises(SequenceError):
        bracket_floor_mod("1", "0", 1)


# perturbation ----------------------------------------------------------------


def test_perturb_squares():
    tm = thue_morse()
    p = perturb(tm, "squares", "flip")
    N = 10**4
    x, y = np.array(tm.eval_range(N)), np.array(p.eval_range(N))
    diff = np.flatnonzero(x != y)
    assert diff.size == 100
    assert diff.tolist() == [i * i for i in range(100)]
    assert diff.size / N == pytest.approx(0.0100, abs=1e-12)


def test_perturb_empty_set_is_identity():
    tm = thue_morse()
    assert perturb(tm, [], "flip").eval_range(4096) == tm.eval_range(4096)


def test_perturb_explicit_positions():
    p = perturb(constant(0, Alphabet((0, 1))), [3, 5, 5, 9], 1)
    assert [n for n, v in enumerate(p.eval_range(20)) if v] == [3, 5, 9]


def test_perturb_rejects_foreign_symbol():
    with pytest.raises(SequenceError):
        perturb(thue_morse(), "squares", 2)
