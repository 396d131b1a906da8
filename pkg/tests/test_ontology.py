from fractions import Fraction as F
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from stabctx.algebra import HADAMARD, IDENTITY, PAULI_X, PHASE, Axis, all_cliffords, compose, parity_character
from stabctx.operational import (
    EXTREMAL_STATES, ORIGIN, PAULI_EFFECTS, UNIT_EFFECT, BlochState, Channel, Effect,
    Measurement, born_probability, make_T1, make_T2, mix_effects, mix_states,
)
from stabctx.ontology import (
    ONTIC_STATES, OnticDistribution, OnticState, ResponseVector, StochasticMap,
    corrupted_gamma, default_scope, gamma, gamma_channel, mu, predict,
    verify_against_born, xi,
)

from test_operational import channels, states

Q = F(1, 4)
XP = BlochState.eigenstate(Axis.X, 1)
ZP = BlochState.eigenstate(Axis.Z, 1)


def mu_closed_form(p, s):
    # oracle: the 8-state densities are affine in r with value (1 + r.lambda)/8
    return (1 + sum(r * l for r, l in zip(p.r, s))) / 8


def xi_closed_form(e, s):
    return e.constant + sum(g * l for g, l in zip(e.gradient, s))


def brute_predict(p, t, e):
    total = F(0)
    for w, c in t.mixture:
        for s in ONTIC_STATES:
            image = OnticState(*c.apply(s))
            total += w * mu_closed_form(p, s) * xi_closed_form(e, image)
    return total


def test_ontic_order_and_parity():
    assert ONTIC_STATES[0] == (1, 1, 1) and ONTIC_STATES[1] == (1, 1, -1)
    assert ONTIC_STATES[-1] == (-1, -1, -1)
    assert [s.parity for s in ONTIC_STATES] == [1, -1, -1, 1, -1, 1, 1, -1]


def test_mu_examples():
    d = mu(XP)
    assert all(d[s] == (Q if s.x == 1 else 0) for s in ONTIC_STATES)
    assert mu(ORIGIN).weights == (F(1, 8),) * 8
    d = mu(BlochState((F(1, 2), 0, F(1, 2))))
    for s in ONTIC_STATES:
        expected = {(1, 1): Q, (1, -1): F(1, 8), (-1, 1): F(1, 8), (-1, -1): 0}[(s.x, s.z)]
        assert d[s] == expected


def test_mu_rejects_non_states():
    with pytest.raises(ValueError):
        mu(BlochState((1, 1, 0)))
    with pytest.raises(TypeError):
        mu((1, 0, 0))


@settings(max_examples=100, deadline=None)
@given(states())
def test_mu_matches_closed_form(p):
    d = mu(p)
    assert all(d[s] == mu_closed_form(p, s) for s in ONTIC_STATES)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 9), min_size=6, max_size=6).filter(sum))
def test_mu_independent_of_decomposition(ws):
    # any rational decomposition into eigenstates yields the same distribution
    total = sum(ws)
    mix = [(F(w, total), s) for w, s in zip(ws, EXTREMAL_STATES)]
    expanded = [sum(w * mu(s)[o] for w, s in mix) for o in ONTIC_STATES]
    assert mu(mix_states(mix)).weights == tuple(expanded)


def test_balanced_decompositions_of_maximally_mixed_state():
    half = F(1, 2)
    for axis in Axis:
        s = mix_states([(half, BlochState.eigenstate(axis, 1)),
                        (half, BlochState.eigenstate(axis, -1))])
        assert mu(s).weights == (F(1, 8),) * 8


def test_gamma_examples():
    g = gamma(PAULI_X)
    for s in ONTIC_STATES:
        assert g[OnticState(s.x, -s.y, -s.z), s] == 1
    g = gamma(HADAMARD)
    for s in ONTIC_STATES:
        assert g[OnticState(s.z, -s.y, s.x), s] == 1
    assert gamma(IDENTITY).rows == tuple(tuple(int(i == j) for j in range(8)) for i in range(8))


def test_gamma_is_permutation_representation(cliffords):
    for c in cliffords:
        assert gamma(c).is_permutation()
    for a in cliffords:
        for b in cliffords:
            assert gamma(compose(a, b)) == gamma(a) @ gamma(b)


def test_parity_transport(cliffords):
    for c in cliffords:
        g = gamma(c)
        for j, s in enumerate(ONTIC_STATES):
            image = next(ONTIC_STATES[i] for i in range(8) if g.rows[i][j])
            assert image.parity == parity_character(c) * s.parity


def test_gamma_channel_T1_T2_entrywise():
    g1, g2 = gamma_channel(make_T1()), gamma_channel(make_T2())
    for a, l in product(ONTIC_STATES, repeat=2):
        same = a.parity == l.parity
        assert g1[a, l] == (Q if same else 0)
        assert g2[a, l] == (0 if same else Q)
    assert len(g1.nonzero()) == len(g2.nonzero()) == 32
    assert not g1.nonzero() & g2.nonzero()
    assert gamma_channel(Channel.unitary(HADAMARD)) == gamma(HADAMARD)


def test_xi_examples():
    r = xi(Effect.pauli(Axis.X, 1))
    assert all(r[s] == (1 if s.x == 1 else 0) for s in ONTIC_STATES)
    assert xi(UNIT_EFFECT).values == (1,) * 8
    r = xi(mix_effects([(F(1, 2), Effect.pauli(Axis.X, 1)), (F(1, 2), Effect.pauli(Axis.Z, 1))]))
    table = {(1, 1): 1, (1, -1): F(1, 2), (-1, 1): F(1, 2), (-1, -1): 0}
    assert all(r[s] == table[(s.x, s.z)] for s in ONTIC_STATES)


def test_xi_context_independence():
    for axis in Axis:
        unit = Measurement.pauli(axis).coarse_grain([[0, 1]]).effects[0]
        assert xi(unit).values == (1,) * 8


def test_xi_rejects_non_generated_effects():
    # valid on the octahedron but not a mixture of Pauli effects
    e = Effect(F(1, 2), (F(1, 2), F(1, 2), 0))
    assert all(0 <= e(s) <= 1 for s in EXTREMAL_STATES)
    with pytest.raises(ValueError, match="not generated"):
        xi(e)


@st.composite
def generated_effects(draw):
    ws = draw(st.lists(st.integers(0, 6), min_size=8, max_size=8).filter(sum))
    total = sum(ws)
    pool = PAULI_EFFECTS + (UNIT_EFFECT, Effect(0, (0, 0, 0)))
    return mix_effects(zip([F(w, total) for w in ws], pool))


@settings(max_examples=100, deadline=None)
@given(generated_effects())
def test_xi_matches_closed_form(e):
    r = xi(e)
    assert all(r[s] == xi_closed_form(e, s) for s in ONTIC_STATES)


def test_predict_examples():
    assert predict(XP, Channel.unitary(IDENTITY), Effect.pauli(Axis.X, 1)) == 1
    assert predict(XP, Channel.unitary(HADAMARD), Effect.pauli(Axis.Z, 1)) == 1
    assert predict(ZP, make_T1(), Effect.pauli(Axis.Z, 1)) == F(1, 2)


@settings(max_examples=60, deadline=None)
@given(states(), channels(), generated_effects())
def test_predict_matches_brute_force_and_born(p, t, e):
    value = predict(p, t, e)
    assert value == brute_predict(p, t, e)
    assert value == born_probability(p, t, e)


def test_verify_against_born_full_grid():
    report = verify_against_born()
    assert report["checked"] == 864 + 72
    assert report["mismatches"] == []
    assert len(default_scope()) == 936


def test_verify_against_born_detects_corruption():
    report = verify_against_born(gamma_fn=corrupted_gamma)
    assert report["mismatches"]
    assert all(any(x["clifford"] == "H" for x in m["channel"]) for m in report["mismatches"])


def test_verify_T1_T2_triples():
    e = Effect.pauli(Axis.Z, 1)
    scope = [(ZP, make_T1(), e), (ZP, make_T2(), e)]
    assert verify_against_born(scope) == {"checked": 2, "mismatches": []}
    assert predict(ZP, make_T2(), e) == F(1, 2)


def test_representation_validation():
    with pytest.raises(ValueError):
        OnticDistribution((F(1, 8),) * 7 + (F(1, 4),))
    with pytest.raises(ValueError):
        StochasticMap(tuple(tuple(F(1, 8) if i else F(1, 4) for j in range(8)) for i in range(8)))
    with pytest.raises(ValueError):
        ResponseVector((2,) + (0,) * 7)


def test_serialization_order():
    assert mu(XP).to_json() == ["1/4"] * 4 + ["0"] * 4
    assert gamma(IDENTITY).to_json()[0] == ["1"] + ["0"] * 7
