"""Shared test oracles.

The density-matrix oracle below works with ordinary 2x2 complex matrices and
floating point, so it is independent of the exact Bloch-vector code paths it
is used to check.
"""
import numpy as np
import pytest

from stabctx.algebra import Axis, CliffordElement, SignedPauli, all_cliffords

PAULI_MATS = {
    Axis.X: np.array([[0, 1], [1, 0]], dtype=complex),
    Axis.Y: np.array([[0, -1j], [1j, 0]], dtype=complex),
    Axis.Z: np.array([[1, 0], [0, -1]], dtype=complex),
}
H_MAT = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
S_MAT = np.array([[1, 0], [0, 1j]], dtype=complex)


def conjugation_action(u):
    """Read off the signed axis permutation of u . sigma . u^dagger numerically."""
    images = []
    for a in Axis:
        m = u @ PAULI_MATS[a] @ u.conj().T
        hits = [(b, s) for b in Axis for s in (1, -1) if np.allclose(m, s * PAULI_MATS[b])]
        assert len(hits) == 1
        images.append(SignedPauli(*hits[0]))
    return CliffordElement(tuple(images))


def _unitaries():
    """Map every Clifford to one representative 2x2 unitary (BFS over H, S)."""
    reps = {conjugation_action(np.eye(2, dtype=complex)): np.eye(2, dtype=complex)}
    frontier = list(reps.items())
    while frontier:
        nxt = []
        for _, u in frontier:
            for g in (H_MAT, S_MAT):
                v = g @ u
                c = conjugation_action(v)
                if c not in reps:
                    reps[c] = v
                    nxt.append((c, v))
        frontier = nxt
    return reps


UNITARIES = _unitaries()


def density(r):
    r = [float(v) for v in r]
    return (np.eye(2) + sum(r[a] * PAULI_MATS[a] for a in Axis)) / 2


def effect_operator(e):
    c = float(e.constant)
    g = [float(v) for v in e.gradient]
    return c * np.eye(2) + sum(g[a] * PAULI_MATS[a] for a in Axis)


def quantum_probability(state, channel, effect):
    rho = density(state.r)
    out = sum(float(w) * UNITARIES[c] @ rho @ UNITARIES[c].conj().T for w, c in channel.mixture)
    return float(np.real(np.trace(effect_operator(effect) @ out)))


@pytest.fixture(scope="session")
def cliffords():
    return all_cliffords()


def pytest_terminal_summary(terminalreporter):
    try:
        import test_acceptance
    except ImportError:
        return
    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
