import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scld.attack import AttackSpec, SignalModel, classify, forge, signal_pipeline, symbolic_attack
from scld.code import EvidenceVector, desc
from scld.constructions import x3_code
from scld.errors import ParameterError, ShapeError, ValidationError


def test_symbolic_is_desc(c1):
    assert symbolic_attack(c1, [0, 1]).as_sets() == [[0, 1], [0], [1]]
    assert symbolic_attack(c1, [2]) == desc(c1, [2])


def test_symbolic_empty(c1):
    with pytest.raises(ShapeError):
        symbolic_attack(c1, [])


def test_averaging_example(c1):
    model = SignalModel.canonical(3)
    spec = AttackSpec((0, 1), (0.5, 0.5))
    s = model.extract(forge(model, c1, spec))
    assert np.allclose(s, [0.5, 0.0, 1.0])
    assert signal_pipeline(model, c1, spec).as_sets() == [[0, 1], [0], [1]]


@pytest.mark.parametrize("j", [0, 1, 2])
def test_singleton_recovers_codeword(c1, j):
    model = SignalModel.random(3, seed=j, host_scale=50.0)
    d = signal_pipeline(model, c1, AttackSpec.uniform([j]))
    assert d.as_sets() == [[b] for b in c1[j]]


def test_ambiguous_threshold(c1):
    model = SignalModel.canonical(3)
    with pytest.raises(ParameterError, match="ambiguous threshold"):
        signal_pipeline(model, c1, AttackSpec((0, 1), (0.5, 0.5)), eps=0.5)


def test_non_orthonormal_basis():
    with pytest.raises(ValidationError, match="orthonormal"):
        SignalModel(3, 2, np.zeros(3), np.array([[1.0, 0, 0], [1.0, 1e-3, 0]]))
    with pytest.raises(ValidationError):
        SignalModel(1, 2, np.zeros(1), np.zeros((2, 1)))


def test_random_basis_orthonormal():
    model = SignalModel.random(8, seed=3)
    assert model.m == 32
    assert np.abs(model.basis @ model.basis.T - np.eye(8)).max() < 1e-12


def test_random_basis_deterministic():
    a, b = SignalModel.random(5, seed=7), SignalModel.random(5, seed=7)
    assert np.array_equal(a.basis, b.basis) and np.array_equal(a.x, b.x)


def test_attack_spec_validation():
    with pytest.raises(ValidationError):
        AttackSpec((0, 1), (0.4, 0.4))
    with pytest.raises(ValidationError):
        AttackSpec((0, 0), (0.5, 0.5))
    with pytest.raises(ValidationError):
        AttackSpec((0, 1), (1.0, 0.0))


def test_shape_mismatch(c1):
    with pytest.raises(ShapeError):
        signal_pipeline(SignalModel.canonical(4), c1, AttackSpec.uniform([0]))


def test_nonbinary_rejected():
    from scld.code import Code

    code = Code(3, 2, ((0, 1), (2, 2)))
    with pytest.raises(ParameterError):
        signal_pipeline(SignalModel.canonical(2), code, AttackSpec.uniform([0]))


def test_classify_thresholds():
    d = classify(np.array([1e-9, 1 - 1e-9, 0.3]), 1e-6)
    assert d == EvidenceVector(2, 3, (1, 2, 3))


X3 = x3_code(4)


@settings(max_examples=60)
@given(
    J=st.lists(st.integers(0, X3.M - 1), min_size=1, max_size=3, unique=True),
    seed=st.integers(0, 2**32 - 1),
)
def test_pipeline_matches_symbolic(J, seed):
    gen = np.random.default_rng(seed)
    spec = AttackSpec.dirichlet(J, gen, floor=1e-5)
    model = SignalModel.random(X3.n, seed=seed % 1000)
    assert signal_pipeline(model, X3, spec, diagnostic=True) == symbolic_attack(X3, J)


@settings(max_examples=40)
@given(
    J=st.lists(st.integers(0, X3.M - 1), min_size=2, max_size=3, unique=True),
    s1=st.integers(0, 2**32 - 1),
    s2=st.integers(0, 2**32 - 1),
)
def test_lambda_invariance(J, s1, s2):
    model = SignalModel.random(X3.n, seed=1)
    a = AttackSpec.dirichlet(J, np.random.default_rng(s1), floor=1e-4)
    b = AttackSpec.dirichlet(J, np.random.default_rng(s2), floor=1e-4)
    assert signal_pipeline(model, X3, a) == signal_pipeline(model, X3, b)


@settings(max_examples=30)
@given(J=st.lists(st.integers(0, X3.M - 1), min_size=1, max_size=3, unique=True), seed=st.integers(0, 500))
def test_forgery_in_span(J, seed):
    model = SignalModel.random(X3.n, seed=seed, host_scale=10.0)
    r = forge(model, X3, AttackSpec.uniform(J)) - model.x
    proj = model.basis.T @ (model.basis @ r)
    assert np.abs(r - proj).max() < 1e-9
