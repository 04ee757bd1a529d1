import os
import random
import subprocess
import sys
from fractions import Fraction
from itertools import combinations, product

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from kwise.construct import (
    pairwise_space_from_hadamard,
    paley_hadamard,
    sylvester_hadamard,
    threewise_space,
)
from kwise.space import SampleSpace, marginal
from kwise.verify import (
    build_witness_matrix,
    cantelli_bound,
    cantelli_tail,
    check_dwise_independence,
    column_gram_defect,
    proof_variable,
)

from _strategies import product_spaces, spaces

F = Fraction


def naive_first_failure(space, d):
    """Oracle: filter the support for every (subset, tuple); no shared state with the kernel."""
    sup = space.support()
    for subset in combinations(range(space.n), d):
        for values in product(range(space.k), repeat=d):
            joint = sum((p for pt, p in sup if all(pt[j] == v for j, v in zip(subset, values))), F(0))
            rhs = F(1)
            for j, v in zip(subset, values):
                rhs *= sum((p for pt, p in sup if pt[j] == v), F(0))
            if joint != rhs:
                return subset, values, joint, rhs
    return None


def fair_bits(n):
    return SampleSpace.product([[F(1, 2), F(1, 2)]] * n)


def perturbed(space, rng):
    """Move a random rational amount of mass between two support points."""
    a, b = rng.sample(range(space.m), 2)
    probs = list(space.probs)
    eps = min(probs[a], probs[b]) * F(rng.randint(1, 9), 10)
    probs[a] -= eps
    probs[b] += eps
    return SampleSpace(space.n, space.k, space.points, probs)


# -- check_dwise_independence -------------------------------------------------


def test_hadamard4_examples():
    h4 = pairwise_space_from_hadamard(sylvester_hadamard(2))
    assert check_dwise_independence(h4, 2).holds
    rep = check_dwise_independence(h4, 3)
    assert not rep.holds
    ce = rep.counterexample
    assert ce.subset == (0, 1, 2)
    assert ce.lhs != ce.rhs
    assert (ce.subset, ce.values, ce.lhs, ce.rhs) == ((0, 1, 2), (0, 0, 0), F(1, 4), F(1, 8))
    # 4 points cannot cover the 8 triples: some value tuple has joint 0 against 1/8
    hit = {pt for pt, _ in h4.support()}
    assert len(hit) == 4 and any(v not in hit for v in product((0, 1), repeat=3))


@pytest.mark.parametrize("n", [1, 3, 5])
def test_fair_bits_fully_independent(n):
    s = fair_bits(n)
    for d in range(1, n + 1):
        assert check_dwise_independence(s, d).holds


def test_d_out_of_range():
    s = fair_bits(3)
    for d in (0, 4):
        with pytest.raises(ValueError):
            check_dwise_independence(s, d)


def test_report_invariants():
    from kwise.verify import Counterexample, IndependenceReport

    with pytest.raises(ValueError):
        IndependenceReport(2, False)
    with pytest.raises(ValueError):
        IndependenceReport(2, True, Counterexample((0, 1), (0, 0), F(1, 4), F(1, 2)))
    with pytest.raises(ValueError):
        IndependenceReport(2, False, Counterexample((0, 1), (0, 0), F(1, 4), F(1, 4)))


@pytest.mark.parametrize("backend", ["numba", "numpy"])
@given(space=st.one_of(spaces(max_n=6, max_k=3, max_m=64), product_spaces()), d=st.integers(1, 6))
@settings(max_examples=120, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
def test_agrees_with_naive_oracle(backend, space, d):
    d = min(d, space.n)
    rep = check_dwise_independence(space, d, backend=backend)
    expected = naive_first_failure(space, d)
    assert rep.holds == (expected is None)
    if expected is not None:
        ce = rep.counterexample
        assert (ce.subset, ce.values, ce.lhs, ce.rhs) == expected


def test_exact_path_for_huge_denominators():
    big = 3**40
    q = [F(1, big), F(5, big + 2), F(7, 11)]
    s = SampleSpace.product([[1 - x, x] for x in q])
    assert s.denominator**2 >= 2**62
    assert check_dwise_independence(s, 2).holds
    assert check_dwise_independence(s, 3).holds
    bad = perturbed(s, random.Random(5))
    rep = check_dwise_independence(bad, 2)
    assert not rep.holds
    ce = rep.counterexample
    assert (ce.subset, ce.values, ce.lhs, ce.rhs) == naive_first_failure(bad, 2)


def test_backends_agree_on_constructions():
    for s in (threewise_space(3), pairwise_space_from_hadamard(paley_hadamard(11))):
        for d in (2, 3, 4):
            a = check_dwise_independence(s, d, backend="numba")
            b = check_dwise_independence(s, d, backend="numpy")
            assert a == b


# -- witness matrix -----------------------------------------------------------


def test_witness_single_fair_bit():
    s = fair_bits(1)
    w = build_witness_matrix(s)
    r = np.sqrt(0.5)
    np.testing.assert_allclose(w.entries, [[r, -r], [r, r]], atol=1e-15)
    assert column_gram_defect(w) <= 1e-15


def test_witness_hadamard4_entries():
    w = build_witness_matrix(pairwise_space_from_hadamard(sylvester_hadamard(2)))
    assert w.shape == (4, 4)
    np.testing.assert_allclose(np.abs(w.entries), 0.5, atol=1e-15)
    assert column_gram_defect(w) <= 1e-12


def test_witness_detects_correlation():
    s = SampleSpace(2, 2, [[0, 0], [1, 1]], ["1/2", "1/2"])
    assert column_gram_defect(build_witness_matrix(s)) > 0.4


def test_witness_rejects_degenerate_and_nonbinary():
    s = SampleSpace(2, 2, [[0, 0], [0, 1]], ["1/2", "1/2"])
    with pytest.raises(ValueError, match="degenerate"):
        build_witness_matrix(s)
    with pytest.raises(ValueError):
        build_witness_matrix(SampleSpace(1, 3, [[0], [2]], ["1/2", "1/2"]))


@given(product_spaces(max_n=5, max_k=2))
@settings(max_examples=60, deadline=None)
def test_witness_columns_orthonormal_and_rows_bounded(space):
    w = build_witness_matrix(space)
    assert column_gram_defect(w) <= 1e-9
    assert np.all(w.row_norms_squared() <= 1 + 1e-9)


def _pairwise_spaces():
    out = [pairwise_space_from_hadamard(sylvester_hadamard(m)) for m in range(2, 6)]
    out += [pairwise_space_from_hadamard(paley_hadamard(q)) for q in (3, 7, 11, 19)]
    out += [threewise_space(l) for l in (2, 3, 4)]
    out += [SampleSpace.product([[F(1, 3), F(2, 3)], [F(3, 4), F(1, 4)], [F(1, 2), F(1, 2)]])]
    return out


def test_witness_equivalence_with_perturbations():
    rng = random.Random(2024)
    base = _pairwise_spaces()
    for s in base:
        assert check_dwise_independence(s, 2).holds
        assert column_gram_defect(build_witness_matrix(s)) <= 1e-9
    for _ in range(100):
        s = perturbed(rng.choice(base), rng)
        indep = check_dwise_independence(s, 2).holds
        defect = column_gram_defect(build_witness_matrix(s))
        assert not indep
        assert (defect <= 1e-9) == indep


# -- Cantelli -----------------------------------------------------------------


def test_cantelli_examples():
    assert cantelli_bound(0.25, 0.5) == 0.5
    assert cantelli_bound(0.0, 3.0) == 0.0
    assert cantelli_bound(1.0, 1.0) == 0.5
    with pytest.raises(ValueError):
        cantelli_bound(1.0, 0.0)
    with pytest.raises(ValueError):
        cantelli_bound(-1.0, 1.0)


def test_cantelli_fair_bit_tail_attains_bound():
    # fair bit X with mean 1/2: the direct tail Pr[X >= 1] equals the bound
    bit = fair_bits(1)
    tail = sum((p for pt, p in bit.support() if pt[0] >= 1), F(0))
    assert float(tail) == cantelli_bound(0.25, 0.5)


def test_proof_variable_moments():
    s = SampleSpace.product([[F(1, 3), F(2, 3)], [F(3, 4), F(1, 4)], [F(1, 5), F(4, 5)]])
    values, mean, var = proof_variable(s)
    q = [marginal(s, j)[1] for j in range(3)]
    assert mean == 4
    assert var == sum((1 - 2 * x) ** 2 / (x * (1 - x)) for x in q)
    # unbiased spaces make Y constant
    values, mean, var = proof_variable(threewise_space(2))
    assert var == 0 and set(values) == {5}


@given(product_spaces(max_n=5, max_k=2))
@settings(max_examples=40, deadline=None)
def test_cantelli_never_violated(space):
    _, _, var = proof_variable(space)
    for t in np.linspace(space.n / 20, space.n, 20):
        tail = cantelli_tail(space, float(t))
        assert float(tail) >= 1 - cantelli_bound(float(var), float(t)) - 1e-12


# -- backend selection --------------------------------------------------------


@pytest.mark.parametrize("flag, expected", [("numpy", "numpy"), ("NUMBA", "numba")])
def test_backend_env_flag(flag, expected):
    env = dict(os.environ, KWISE_BACKEND=flag)
    out = subprocess.run([sys.executable, "-c", "from kwise import _kernels; print(_kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == expected


def test_backend_env_flag_rejects_unknown():
    env = dict(os.environ, KWISE_BACKEND="cuda")
    out = subprocess.run([sys.executable, "-c", "import kwise._kernels"], env=env, capture_output=True, text=True)
    assert out.returncode != 0 and "KWISE_BACKEND" in out.stderr


def test_thread_cap_env_flag():
    env = dict(os.environ, KWISE_THREADS="1")
    code = ("import numba; from kwise.construct import threewise_space; from kwise.verify import "
            "check_dwise_independence as c; assert c(threewise_space(3), 3).holds; print(numba.get_num_threads())")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "1"
