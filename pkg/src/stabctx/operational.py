"""Operational layer of the single-qubit stabilizer subtheory.

States are rational Bloch vectors inside the stabilizer octahedron,
transformations are rational mixtures of Cliffords and measurement outcomes
are affine functionals ``constant + gradient . r``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .algebra import (
    HADAMARD, IDENTITY, PAULI_X, PAULI_Y, PAULI_Z, Axis, CliffordElement,
    all_cliffords, as_rational, check_sign, compose, parse_clifford,
)

ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)


def _triple(values) -> tuple:
    values = tuple(as_rational(v) for v in values)
    if len(values) != 3:
        raise ValueError("expected three coordinates, got %d" % len(values))
    return values


def _dot(u, v):
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


@dataclass(frozen=True)
class BlochState:
    r: tuple

    def __post_init__(self):
        r = _triple(self.r)
        if abs(r[0]) + abs(r[1]) + abs(r[2]) > 1:
            raise ValueError("Bloch vector %s lies outside the stabilizer octahedron"
                             % [str(v) for v in r])
        object.__setattr__(self, "r", r)

    @classmethod
    def eigenstate(cls, axis: Axis, sign: int = 1) -> BlochState:
        r = [0, 0, 0]
        r[Axis(axis)] = check_sign(sign)
        return cls(r)

    @property
    def is_extremal(self) -> bool:
        return sum(abs(v) for v in self.r) == 1 and sum(1 for v in self.r if v) == 1

    def __str__(self):
        return "(%s)" % ", ".join(str(v) for v in self.r)


ORIGIN = BlochState((0, 0, 0))
EXTREMAL_STATES = tuple(BlochState.eigenstate(a, s) for a in Axis for s in (1, -1))


def mix_states(mixture: Iterable) -> BlochState:
    """Convex combination of ``(weight, BlochState)`` pairs."""
    weights, states = _check_mixture(mixture)
    r = [ZERO, ZERO, ZERO]
    for w, s in zip(weights, states):
        for i in range(3):
            r[i] += w * s.r[i]
    return BlochState(r)


def _check_mixture(mixture):
    pairs = list(mixture)
    if not pairs:
        raise ValueError("empty mixture")
    weights = [as_rational(w) for w, _ in pairs]
    if any(w < 0 for w in weights):
        raise ValueError("mixture weights must be nonnegative")
    if sum(weights) != 1:
        raise ValueError("mixture weights sum to %s, not 1" % sum(weights))
    return weights, [x for _, x in pairs]


@dataclass(frozen=True)
class Channel:
    """A convex mixture of Clifford conjugations."""

    mixture: tuple
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        weights, elements = _check_mixture(self.mixture)
        for c in elements:
            if not isinstance(c, CliffordElement):
                raise TypeError("channel elements must be CliffordElement, got %r" % (c,))
        object.__setattr__(self, "mixture", tuple(zip(weights, elements)))

    @classmethod
    def unitary(cls, c: CliffordElement) -> Channel:
        return cls(((ONE, c),), name=c.label)

    def matrix(self) -> tuple:
        """Weight-averaged signed permutation matrix (the Bloch action)."""
        m = [[ZERO] * 3 for _ in range(3)]
        for w, c in self.mixture:
            cm = c.matrix()
            for i in range(3):
                for j in range(3):
                    m[i][j] += w * cm[i][j]
        return tuple(tuple(row) for row in m)

    @property
    def label(self) -> str:
        if self.name:
            return self.name
        return " + ".join("%s*%s" % (w, c.label) for w, c in self.mixture)

    def __str__(self):
        return self.label


@dataclass(frozen=True)
class Effect:
    """Outcome probability ``constant + gradient . r``."""

    constant: Fraction
    gradient: tuple

    def __post_init__(self):
        object.__setattr__(self, "constant", as_rational(self.constant))
        object.__setattr__(self, "gradient", _triple(self.gradient))
        # affine, so checking the six octahedron vertices covers the polytope
        for s in EXTREMAL_STATES:
            v = self(s)
            if v < 0 or v > 1:
                raise ValueError("effect %s evaluates to %s on %s" % (self, v, s))

    @classmethod
    def pauli(cls, axis: Axis, outcome: int = 1) -> Effect:
        g = [0, 0, 0]
        g[Axis(axis)] = Fraction(check_sign(outcome), 2)
        return cls(HALF, g)

    def __call__(self, state: BlochState) -> Fraction:
        return self.constant + _dot(self.gradient, state.r)

    def __add__(self, other: Effect) -> Effect:
        """Coarse-graining: the effect of observing either outcome."""
        return Effect(self.constant + other.constant,
                      [a + b for a, b in zip(self.gradient, other.gradient)])

    def __str__(self):
        return "Effect(%s; %s)" % (self.constant, ", ".join(str(g) for g in self.gradient))


UNIT_EFFECT = Effect(1, (0, 0, 0))
ZERO_EFFECT = Effect(0, (0, 0, 0))
PAULI_EFFECTS = tuple(Effect.pauli(a, s) for a in Axis for s in (1, -1))


def mix_effects(mixture: Iterable) -> Effect:
    weights, effects = _check_mixture(mixture)
    c = sum((w * e.constant for w, e in zip(weights, effects)), ZERO)
    g = [sum((w * e.gradient[i] for w, e in zip(weights, effects)), ZERO) for i in range(3)]
    return Effect(c, g)


@dataclass(frozen=True)
class Measurement:
    effects: tuple

    def __post_init__(self):
        effects = tuple(self.effects)
        if not effects:
            raise ValueError("a measurement needs at least one effect")
        c = sum((e.constant for e in effects), ZERO)
        g = tuple(sum((e.gradient[i] for e in effects), ZERO) for i in range(3))
        if c != 1 or g != (0, 0, 0):
            raise ValueError("effects do not sum to the unit effect")
        object.__setattr__(self, "effects", effects)

    @classmethod
    def pauli(cls, axis: Axis) -> Measurement:
        return cls((Effect.pauli(axis, 1), Effect.pauli(axis, -1)))

    def coarse_grain(self, groups: Sequence[Sequence[int]]) -> Measurement:
        """Merge outcomes; ``groups`` partitions the outcome indices."""
        flat = sorted(i for g in groups for i in g)
        if flat != list(range(len(self.effects))):
            raise ValueError("groups must partition the outcome indices")
        merged = []
        for g in groups:
            e = ZERO_EFFECT
            for i in g:
                e = e + self.effects[i]
            merged.append(e)
        return Measurement(tuple(merged))


def mix_measurements(mixture: Iterable) -> Measurement:
    """Outcome-wise mixture of measurements with equal outcome counts."""
    weights, ms = _check_mixture(mixture)
    n = len(ms[0].effects)
    if any(len(m.effects) != n for m in ms):
        raise ValueError("mixed measurements must have the same number of outcomes")
    return Measurement(tuple(mix_effects(zip(weights, [m.effects[k] for m in ms]))
                             for k in range(n)))


def apply_channel(t: Channel, s: BlochState) -> BlochState:
    m = t.matrix()
    return BlochState(tuple(_dot(row, s.r) for row in m))


def born_probability(p: BlochState, t: Channel, e: Effect) -> Fraction:
    return e(apply_channel(t, p))


def prep_equivalent(p1: BlochState, p2: BlochState) -> bool:
    # affine effects separate points of the octahedron
    return p1.r == p2.r


def channel_equivalent(t1: Channel, t2: Channel) -> bool:
    return t1.matrix() == t2.matrix()


def effect_equivalent(e1: Effect, e2: Effect) -> bool:
    return e1.constant == e2.constant and e1.gradient == e2.gradient


def grid_statistics_equal(t1: Channel, t2: Channel) -> bool:
    """Compare two channels on every extremal preparation and Pauli effect.

    Independent of :func:`channel_equivalent`; used to validate it.
    """
    return all(born_probability(p, t1, e) == born_probability(p, t2, e)
               for p in EXTREMAL_STATES for e in PAULI_EFFECTS)


def make_T1() -> Channel:
    """Uniform mixture of the four Pauli conjugations (full depolarization)."""
    q = Fraction(1, 4)
    return Channel(tuple((q, c) for c in (IDENTITY, PAULI_X, PAULI_Y, PAULI_Z)), name="T1")


def make_T2() -> Channel:
    """``make_T1`` followed by a Hadamard conjugation."""
    return Channel(tuple((w, compose(HADAMARD, c)) for w, c in make_T1().mixture), name="T2")


def uniform_clifford_channel() -> Channel:
    cs = all_cliffords()
    return Channel(tuple((Fraction(1, len(cs)), c) for c in cs), name="uniform24")


# JSON forms; rationals are "p/q" strings

def rational_str(v: Fraction) -> str:
    return str(v)


def state_to_json(s: BlochState) -> dict:
    return {"bloch": [rational_str(v) for v in s.r]}


def state_from_json(data: dict) -> BlochState:
    return BlochState(tuple(as_rational(v) for v in data["bloch"]))


def channel_to_json(t: Channel) -> dict:
    return {"mixture": [{"weight": rational_str(w), "clifford": c.label}
                        for w, c in t.mixture]}


def channel_from_json(data: dict) -> Channel:
    return Channel(tuple((as_rational(item["weight"]), parse_clifford(item["clifford"]))
                         for item in data["mixture"]))


def effect_to_json(e: Effect) -> dict:
    return {"constant": rational_str(e.constant),
            "gradient": [rational_str(g) for g in e.gradient]}


def effect_from_json(data: dict) -> Effect:
    return Effect(as_rational(data["constant"]),
                  tuple(as_rational(g) for g in data["gradient"]))
