import numpy as np
import pytest

from su2lgt import LatticeSpec
from su2lgt.hamiltonian import build_hamiltonian, charge_square, mass_offset
from su2lgt.pauli import StateVector
from su2lgt.spectra import ground_state, hadron_mass, lanczos_ground, sc_state


def _heavy_sector_indices(spec):
    """Basis states whose occupied heavy sites hold exactly one fermion and
    whose unoccupied heavy sites are empty (both color qubits |1>)."""
    n = spec.n_qubits
    keep = []
    for idx in range(1 << n):
        ok = True
        for x in range(spec.L):
            bits = [(idx >> (n - 1 - j)) & 1 for j in spec.qubits_of(3 * x)]
            if x in spec.heavy_positions:
                ok &= sum(bits) == 1
            else:
                ok &= sum(bits) == 2
        if ok:
            keep.append(idx)
    return keep


@pytest.mark.parametrize("L,heavy", [(1, ()), (1, (0,)), (2, (0,))])
def test_lanczos_matches_dense_diagonalization(L, heavy):
    spec = LatticeSpec(L=L, heavy_positions=frozenset(heavy))
    terms = build_hamiltonian(spec)
    h = terms.kinetic + terms.mass + terms.gauge + terms.penalty
    e, psi = ground_state(spec)
    sector = _heavy_sector_indices(spec)
    dense = np.linalg.eigvalsh(h.to_dense()[np.ix_(sector, sector)])
    assert e == pytest.approx(dense[0] + mass_offset(spec), abs=1e-9)
    # the returned vector is the corresponding eigenstate
    hv = h.apply(psi)
    assert np.max(np.abs(hv.amps - (e - mass_offset(spec)) * psi.amps)) < 1e-7


def test_lanczos_on_degenerate_diagonal_operator():
    from su2lgt.pauli import PauliString, PauliSum

    h = PauliSum(3, [PauliString.from_label("ZII", 1.0),
                     PauliString.from_label("III", -1.0)])
    rng = np.random.default_rng(5)
    v = rng.standard_normal(8)
    e, _ = lanczos_ground(h, StateVector(v / np.linalg.norm(v)))
    assert e == pytest.approx(-2.0, abs=1e-9)


def test_sc_vacuum_is_charge_free_basis_state():
    spec = LatticeSpec(L=2)
    s = sc_state(spec)
    assert np.count_nonzero(s.amps) == 1
    for n in range(spec.n_staggered):
        assert charge_square(spec, n).expectation(s) == pytest.approx(
            0.0, abs=1e-12)
    terms = build_hamiltonian(spec)
    assert terms.mass.expectation(s) + mass_offset(spec) == pytest.approx(
        0.0, abs=1e-12)
    assert terms.gauge.expectation(s) == pytest.approx(0.0, abs=1e-12)


def test_sc_heavy_sector_screens_the_static_charge():
    # the heavy quark binds with a light quark on the same cell into a color
    # singlet: two amplitudes, no gauge energy, one light-quark mass
    spec = LatticeSpec(L=2, heavy_positions=frozenset({0}))
    s = sc_state(spec)
    assert np.count_nonzero(s.amps) == 2
    terms = build_hamiltonian(spec)
    assert terms.gauge.expectation(s) == pytest.approx(0.0, abs=1e-12)
    assert terms.penalty.expectation(s) == pytest.approx(0.0, abs=1e-12)
    assert terms.mass.expectation(s) + mass_offset(spec) == pytest.approx(
        spec.mq, abs=1e-12)


def test_hadron_mass_is_sector_energy_difference(ground_cache):
    from conftest import spec_for

    e1, _ = ground_cache(spec_for(1, (0,)))
    e0, _ = ground_cache(spec_for(1))
    assert hadron_mass(spec_for(1, (0,))) == pytest.approx(e1 - e0, abs=1e-9)


def test_ground_state_reproducible(ground_cache):
    from conftest import spec_for

    spec = spec_for(1)
    e1, psi1 = ground_state(spec)
    e2, psi2 = ground_state(spec)
    assert e1 == e2
    assert np.array_equal(psi1.amps, psi2.amps)
