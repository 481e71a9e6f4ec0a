import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from su2lgt.pauli import (PauliString, PauliSum, StateVector, apply_unitary_on,
                          exp_apply, exp_sum_apply, partial_trace)

from conftest import dense_label, dense_sum, random_state, reduced_density

labels = st.integers(1, 4).flatmap(
    lambda n: st.text(alphabet="IXYZ", min_size=n, max_size=n))
coeffs = st.complex_numbers(max_magnitude=3.0, allow_nan=False,
                            allow_infinity=False)


@given(labels, coeffs)
def test_string_dense_matches_kron_oracle(label, c):
    ps = PauliString.from_label(label, c)
    assert np.allclose(ps.to_dense(), dense_label(label, c), atol=1e-12)


@given(labels, labels)
def test_string_product_matches_dense(la, lb):
    if len(la) != len(lb):
        lb = (lb + "I" * len(la))[:len(la)]
    a, b = PauliString.from_label(la), PauliString.from_label(lb)
    prod = a * b
    oracle = dense_label(la) @ dense_label(lb)
    assert np.allclose(prod.to_dense(), oracle, atol=1e-12)


@given(labels, st.integers(0, 2**31 - 1))
def test_string_apply_matches_matvec(label, seed):
    rng = np.random.default_rng(seed)
    v = random_state(len(label), rng)
    out = PauliString.from_label(label).apply(
        StateVector(v, normalized=False))
    assert np.allclose(out.amps, dense_label(label) @ v, atol=1e-12)


@given(labels, st.floats(-3, 3), st.integers(0, 2**31 - 1))
@settings(max_examples=40)
def test_exp_apply_matches_expm(label, theta, seed):
    rng = np.random.default_rng(seed)
    v = random_state(len(label), rng)
    out = exp_apply(PauliString.from_label(label), theta,
                    StateVector(v, normalized=False))
    oracle = expm(-1j * theta * dense_label(label)) @ v
    assert np.allclose(out.amps, oracle, atol=1e-10)


@given(st.lists(st.tuples(labels.filter(lambda s: len(s) == 3),
                          st.floats(-2, 2)), min_size=1, max_size=5),
       st.floats(-2, 2), st.integers(0, 2**31 - 1))
@settings(max_examples=40, deadline=None)
def test_exp_sum_apply_matches_expm(pairs, theta, seed):
    h = PauliSum(3, [PauliString.from_label(l, c) for l, c in pairs])
    rng = np.random.default_rng(seed)
    v = random_state(3, rng)
    out = exp_sum_apply(h, theta, StateVector(v, normalized=False))
    oracle = expm(-1j * theta * dense_sum(pairs, 3)) @ v
    assert np.allclose(out.amps, oracle, atol=1e-9)


@given(st.lists(st.tuples(labels.filter(lambda s: len(s) == 3),
                          st.floats(-2, 2)), min_size=1, max_size=6),
       st.integers(0, 2**31 - 1))
def test_hermitian_expectation_is_real_and_matches_dense(pairs, seed):
    h = PauliSum(3, [PauliString.from_label(l, c) for l, c in pairs])
    assert h.is_hermitian()
    rng = np.random.default_rng(seed)
    v = random_state(3, rng)
    val = h.expectation(StateVector(v))
    oracle = np.vdot(v, dense_sum(pairs, 3) @ v)
    assert abs(oracle.imag) < 1e-12
    assert val == pytest.approx(oracle.real, abs=1e-10)


def test_sum_accumulates_and_prunes_duplicates():
    h = PauliSum(2, [PauliString.from_label("XZ", 1.5),
                     PauliString.from_label("XZ", -1.5),
                     PauliString.from_label("YY", 2.0)])
    assert len(h) == 1
    assert h.coeff_of("YY") == pytest.approx(2.0)


def test_sum_text_roundtrip():
    h = PauliSum(3, [PauliString.from_label("XYZ", 0.25),
                     PauliString.from_label("IIZ", -1.0),
                     PauliString.from_label("III", 0.5)])
    assert PauliSum.from_text(3, h.to_text()).to_dense() == pytest.approx(
        h.to_dense())


def test_basis_and_ket_conventions():
    # qubit 0 is the most significant bit; |0> is spin up with <Z> = +1
    s = StateVector.from_ket("01")
    assert np.allclose(s.amps, [0, 1, 0, 0])
    z0 = PauliSum(2, [PauliString.from_label("ZI")])
    z1 = PauliSum(2, [PauliString.from_label("IZ")])
    assert z0.expectation(s) == pytest.approx(1.0)
    assert z1.expectation(s) == pytest.approx(-1.0)
    assert np.allclose(StateVector.basis(2, 0b01).amps, s.amps)


@given(st.integers(0, 2**31 - 1))
def test_partial_trace_matches_reshape_oracle(seed):
    rng = np.random.default_rng(seed)
    v = random_state(4, rng)
    for keep in ([0], [3], [1, 2], [0, 3], [0, 1, 2]):
        rho = partial_trace(StateVector(v), keep)
        oracle = reduced_density(v, keep, 4)
        assert np.trace(rho) == pytest.approx(1.0)
        assert np.allclose(rho, oracle, atol=1e-12)


@given(st.integers(0, 2**31 - 1))
def test_apply_unitary_on_matches_kron_embedding(seed):
    rng = np.random.default_rng(seed)
    v = random_state(3, rng)
    q, _ = np.linalg.qr(rng.standard_normal((4, 4))
                        + 1j * rng.standard_normal((4, 4)))
    out = apply_unitary_on(q, [2, 0], StateVector(v, normalized=False))
    # oracle: permute qubits so that (2, 0) become the leading axes
    t = v.reshape(2, 2, 2).transpose(2, 0, 1).reshape(4, 2)
    t = (q @ t).reshape(2, 2, 2).transpose(1, 2, 0).ravel()
    assert np.allclose(out.amps, t, atol=1e-12)


def test_overlap_and_fidelity():
    a = StateVector.from_ket("00")
    b = StateVector(np.array([1, 1, 0, 0]) / np.sqrt(2))
    assert a.overlap(b) == pytest.approx(1 / np.sqrt(2))
    assert a.fidelity(b) == pytest.approx(0.5)
