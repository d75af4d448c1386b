import numpy as np
import pytest

from opadapt import operators as ops
from opadapt.operators import OPERATORS, apply, creep_shift, get_operator, with_params

from conftest import FixedRng

LO = np.array([-10.0, -10.0])
HI = np.array([10.0, 10.0])


def test_registry():
    assert [op.id for op in OPERATORS] == list(range(1, 11))
    assert [op.arity for op in OPERATORS] == [2, 2, 2, 2, 2, 3, 2, 1, 1, 1]
    assert get_operator(1).params["r"] == 0.5
    assert get_operator(3).params["alpha"] == 0.3
    assert get_operator(5).params["alpha"] == 0.2
    assert get_operator(6).params["F"] == 0.8
    assert get_operator(8).params["A"] == 0.01
    assert get_operator(9).params["A"] == 0.001


def test_wright_heuristic_example(rng):
    child = apply(get_operator(1), [np.array([2.0, 2.0]), np.array([0.0, 0.0])], rng, LO, HI)
    assert child.tolist() == [3.0, 3.0]


def test_wright_clamps(rng):
    child = apply(get_operator(1), [np.array([9.0, 2.0]), np.array([0.0, 0.0])], rng, LO, HI)
    assert child.tolist() == [10.0, 3.0]


@pytest.mark.parametrize("op_id", [4, 5])
def test_identical_parents_give_parent(op_id, rng):
    p = np.array([1.5, -2.0])
    assert np.array_equal(apply(get_operator(op_id), [p, p.copy()], rng, LO, HI), p)


def test_swap_example(rng):
    lo, hi = np.zeros(2), np.full(2, 10.0)
    child = apply(get_operator(7), [np.array([1.0, 5.0]), np.array([1.0, 9.0])], rng, lo, hi)
    assert child.tolist() == [1.0, 9.0]


def test_swap_uses_range_normalized_difference(rng):
    lo, hi = np.array([0.0, 0.0]), np.array([100.0, 1.0])
    # raw difference is larger in gene 0 but normalized difference is larger in gene 1
    child = apply(get_operator(7), [np.array([10.0, 0.1]), np.array([30.0, 0.9])], rng, lo, hi)
    assert child.tolist() == [10.0, 0.9]


def test_swap_tie_takes_lowest_index(rng):
    child = apply(get_operator(7), [np.array([0.0, 0.0]), np.array([1.0, 1.0])], rng, LO, HI)
    assert child.tolist() == [1.0, 0.0]


def test_extended_line_static_alpha(rng):
    child = apply(get_operator(3), [np.array([0.0, 0.0]), np.array([10.0, -10.0])], rng, LO, HI)
    assert np.allclose(child, [3.0, -3.0])


def test_differential(rng):
    a, b, c = np.array([1.0, 1.0]), np.array([3.0, 0.0]), np.array([1.0, 2.0])
    child = apply(get_operator(6), [a, b, c], rng, LO, HI)
    assert np.allclose(child, [2.6, -0.6])
    custom = with_params(get_operator(6), F=0.5)
    assert np.allclose(apply(custom, [a, b, c], rng, LO, HI), [2.0, 0.0])


def test_simple_crossover_is_prefix_suffix(rng):
    best, worst = np.arange(5.0), -np.arange(5.0) - 1
    for _ in range(50):
        child = apply(get_operator(2), [best, worst], rng, np.full(5, -10.0), np.full(5, 10.0))
        k = int(np.argmax(child < 0))
        assert 1 <= k <= 4
        assert np.array_equal(child[:k], best[:k]) and np.array_equal(child[k:], worst[k:])


def test_creep_shift_examples():
    assert creep_shift(0.5, 0.0, 1.0, 0.001, FixedRng(uniform=1.0)) == pytest.approx(0.501)
    assert creep_shift(0.5, 0.0, 1.0, 0.001, FixedRng(uniform=0.0)) == 0.5
    assert creep_shift(1.0, 0.0, 1.0, 0.001, FixedRng(uniform=1.0)) == 1.0


def test_creep_shift_bound(rng):
    for _ in range(1000):
        v = creep_shift(0.3, -2.0, 2.0, 0.001, rng)
        assert abs(v - 0.3) <= 0.004 + 1e-15


def test_raise_shifts_all_genes_proportionally(rng):
    lo, hi = np.array([0.0, 0.0, -50.0]), np.array([1.0, 10.0, 50.0])
    x = np.array([0.5, 5.0, 0.0])
    child = apply(get_operator(8), [x], rng, lo, hi)
    u = (child - x) / (0.01 * (hi - lo))
    assert np.allclose(u, u[0]) and -1 <= u[0] <= 1 and u[0] != 0


def test_creep_changes_one_gene(rng):
    lo, hi = np.full(6, -1.0), np.full(6, 1.0)
    x = np.zeros(6)
    for _ in range(200):
        child = apply(get_operator(9), [x], rng, lo, hi)
        assert np.count_nonzero(child != x) <= 1
        assert np.max(np.abs(child - x)) <= 0.002 + 1e-15


def test_random_mutation_changes_one_gene(rng):
    lo, hi = np.full(6, -1.0), np.full(6, 1.0)
    x = np.zeros(6)
    changed = [np.count_nonzero(apply(get_operator(10), [x], rng, lo, hi) != x) for _ in range(200)]
    assert max(changed) == 1


@pytest.mark.parametrize("op", OPERATORS, ids=lambda o: str(o.id))
def test_offspring_in_bounds(op):
    rng = np.random.default_rng(op.id)
    n = 4
    lo, hi = np.array([-1.0, 0.0, -5.0, 10.0]), np.array([1.0, 0.5, 5.0, 11.0])
    parents = rng.uniform(lo, hi, size=(10_000, op.arity, n))
    # push some parents onto the bounds to stress clamping
    parents[::7, 0] = hi
    parents[::11, -1] = lo
    for ps in parents:
        child = apply(op, list(ps), rng, lo, hi)
        assert child.shape == (n,)
        assert np.all(child >= lo) and np.all(child <= hi)


@pytest.mark.parametrize("op", OPERATORS, ids=lambda o: str(o.id))
def test_deterministic_under_seed(op):
    parents = [np.array([0.1 * k, -0.2 * k, 0.3]) for k in range(1, op.arity + 1)]
    lo, hi = np.full(3, -1.0), np.full(3, 1.0)
    a = apply(op, parents, np.random.default_rng(9), lo, hi)
    b = apply(op, parents, np.random.default_rng(9), lo, hi)
    assert a.tobytes() == b.tobytes()


def test_wrong_arity(rng):
    with pytest.raises(ValueError):
        apply(get_operator(6), [np.zeros(2), np.zeros(2)], rng, LO, HI)
    with pytest.raises(KeyError):
        get_operator(11)
    with pytest.raises(KeyError):
        with_params(get_operator(4), F=1.0)
