"""The 8-state ontological model of the single-qubit stabilizer subtheory.

Ontic states are triples ``(x, y, z)`` of simultaneous Pauli values.  All
vectors and matrices are indexed by :data:`ONTIC_STATES`, the lexicographic
order with +1 before -1.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable, Iterable, NamedTuple

from .algebra import HADAMARD, IDENTITY, Axis, CliffordElement, all_cliffords
from .operational import (
    EXTREMAL_STATES, ORIGIN, PAULI_EFFECTS, UNIT_EFFECT, BlochState, Channel,
    Effect, born_probability, channel_to_json, effect_to_json, make_T1, make_T2,
    state_to_json,
)

ZERO = Fraction(0)
ONE = Fraction(1)


class OnticState(NamedTuple):
    x: int
    y: int
    z: int

    @property
    def parity(self) -> int:
        return self.x * self.y * self.z

    def __str__(self):
        return "(%s)" % ",".join("+" if v > 0 else "-" for v in self)


ONTIC_STATES = tuple(OnticState(*t) for t in product((1, -1), repeat=3))
INDEX = {s: i for i, s in enumerate(ONTIC_STATES)}


def _rationals(values, n) -> tuple:
    values = tuple(Fraction(v) for v in values)
    if len(values) != n:
        raise ValueError("expected %d entries, got %d" % (n, len(values)))
    return values


@dataclass(frozen=True)
class OnticDistribution:
    weights: tuple

    def __post_init__(self):
        w = _rationals(self.weights, 8)
        if any(v < 0 for v in w) or sum(w) != 1:
            raise ValueError("not a probability distribution over the 8 ontic states")
        object.__setattr__(self, "weights", w)

    def __getitem__(self, s: OnticState) -> Fraction:
        return self.weights[INDEX[s]]

    @property
    def support(self) -> frozenset:
        return frozenset(s for s, w in zip(ONTIC_STATES, self.weights) if w)

    def to_json(self) -> list:
        return [str(v) for v in self.weights]


@dataclass(frozen=True)
class StochasticMap:
    """Column-stochastic matrix; ``rows[i][j]`` is Pr(state i | state j)."""

    rows: tuple

    def __post_init__(self):
        n = len(self.rows)
        rows = tuple(_rationals(r, n) for r in self.rows)
        for j in range(n):
            col = [rows[i][j] for i in range(n)]
            if any(v < 0 for v in col):
                raise ValueError("negative entry in column %d" % j)
            if sum(col) != 1:
                raise ValueError("column %d sums to %s" % (j, sum(col)))
        object.__setattr__(self, "rows", rows)

    @property
    def size(self) -> int:
        return len(self.rows)

    def __getitem__(self, key) -> Fraction:
        target, source = key
        if isinstance(target, OnticState):
            target, source = INDEX[target], INDEX[source]
        return self.rows[target][source]

    def __matmul__(self, other: StochasticMap) -> StochasticMap:
        n = self.size
        return type(self)(tuple(
            tuple(sum((self.rows[i][k] * other.rows[k][j] for k in range(n)), ZERO)
                  for j in range(n))
            for i in range(n)))

    def apply(self, dist: OnticDistribution) -> OnticDistribution:
        return OnticDistribution(tuple(
            sum((r[j] * dist.weights[j] for j in range(8)), ZERO) for r in self.rows))

    def is_permutation(self) -> bool:
        return all(sorted(r) == [0] * (self.size - 1) + [1] for r in self.rows)

    def nonzero(self) -> frozenset:
        return frozenset((i, j) for i, r in enumerate(self.rows)
                         for j, v in enumerate(r) if v)

    def to_json(self) -> list:
        return [[str(v) for v in r] for r in self.rows]


@dataclass(frozen=True)
class ResponseVector:
    values: tuple

    def __post_init__(self):
        v = _rationals(self.values, 8)
        if any(x < 0 or x > 1 for x in v):
            raise ValueError("response values must lie in [0, 1]")
        object.__setattr__(self, "values", v)

    def __getitem__(self, s: OnticState) -> Fraction:
        return self.values[INDEX[s]]

    def to_json(self) -> list:
        return [str(v) for v in self.values]


def _mix_vectors(parts) -> list:
    out = [ZERO] * 8
    for w, vec in parts:
        for i in range(8):
            out[i] += w * vec[i]
    return out


def _eigen_distribution(axis: Axis, sign: int) -> list:
    return [Fraction(1, 4) if s[axis] == sign else ZERO for s in ONTIC_STATES]


def canonical_decomposition(p: BlochState) -> list:
    """Split ``p`` into axis eigenstates plus the origin.

    Each nonzero coordinate contributes weight ``|r_Q|`` on the eigenstate of
    sign ``sign(r_Q)``; what is left goes to the maximally mixed state.
    """
    parts = []
    for axis, v in zip(Axis, p.r):
        if v:
            parts.append((abs(v), BlochState.eigenstate(axis, 1 if v > 0 else -1)))
    rest = 1 - sum(w for w, _ in parts)
    if rest:
        parts.append((rest, ORIGIN))
    return parts


def mu(p: BlochState) -> OnticDistribution:
    if not isinstance(p, BlochState):
        raise TypeError("mu expects a BlochState")
    parts = []
    for w, s in canonical_decomposition(p):
        if s == ORIGIN:
            parts.append((w, [Fraction(1, 8)] * 8))
        else:
            axis = next(a for a in Axis if s.r[a])
            parts.append((w, _eigen_distribution(axis, int(s.r[axis]))))
    return OnticDistribution(tuple(_mix_vectors(parts)))


def gamma(c: CliffordElement) -> StochasticMap:
    """Permutation of ontic states induced by the Clifford's axis action."""
    rows = [[ZERO] * 8 for _ in range(8)]
    for j, s in enumerate(ONTIC_STATES):
        rows[INDEX[OnticState(*c.apply(s))]][j] = ONE
    return StochasticMap(tuple(tuple(r) for r in rows))


def gamma_channel(t: Channel, gamma_fn: Callable = gamma) -> StochasticMap:
    rows = [[ZERO] * 8 for _ in range(8)]
    for w, c in t.mixture:
        g = gamma_fn(c)
        for i in range(8):
            for j in range(8):
                rows[i][j] += w * g.rows[i][j]
    return StochasticMap(tuple(tuple(r) for r in rows))


def effect_decomposition(e: Effect) -> list:
    """Write ``e`` as a mixture of Pauli, unit and zero effects.

    Such a decomposition exists iff ``|g|_1 <= c <= 1 - |g|_1``; otherwise the
    effect is outside the set generated by coarse-graining and mixing Pauli
    measurements and ``ValueError`` is raised.
    """
    c, g = e.constant, e.gradient
    l1 = sum(abs(v) for v in g)
    if c < l1 or c > 1 - l1:
        raise ValueError("%s is not generated from Pauli effects" % e)
    parts = []
    for axis, v in zip(Axis, g):
        if v:
            # weight w on the Pauli effect contributes w/2 to the gradient
            parts.append((2 * abs(v), Effect.pauli(axis, 1 if v > 0 else -1)))
    unit = c - l1
    if unit:
        parts.append((unit, UNIT_EFFECT))
    rest = 1 - sum(w for w, _ in parts)
    if rest:
        parts.append((rest, None))
    return parts


def xi(e: Effect) -> ResponseVector:
    parts = []
    for w, pe in effect_decomposition(e):
        if pe is None:
            continue
        if pe == UNIT_EFFECT:
            parts.append((w, [ONE] * 8))
        else:
            axis = next(a for a in Axis if pe.gradient[a])
            sign = 1 if pe.gradient[axis] > 0 else -1
            parts.append((w, [ONE if s[axis] == sign else ZERO for s in ONTIC_STATES]))
    return ResponseVector(tuple(_mix_vectors(parts)))


def predict(p: BlochState, t: Channel, e: Effect, gamma_fn: Callable = gamma) -> Fraction:
    """Total-probability rule: sum over xi[l'] * Gamma[l', l] * mu[l]."""
    m = mu(p).weights
    g = gamma_channel(t, gamma_fn).rows
    r = xi(e).values
    total = ZERO
    for i in range(8):
        if not r[i]:
            continue
        for j in range(8):
            total += r[i] * g[i][j] * m[j]
    return total


def default_scope() -> list:
    """Extremal grid (6 x 24 x 6) followed by the T1/T2 triples (6 x 2 x 6)."""
    channels = [Channel.unitary(c) for c in all_cliffords()] + [make_T1(), make_T2()]
    return [(p, t, e) for t in channels for p in EXTREMAL_STATES for e in PAULI_EFFECTS]


def verify_against_born(scope: Iterable | None = None, gamma_fn: Callable = gamma) -> dict:
    """Compare the model's predictions with the Born rule on every triple.

    ``gamma_fn`` lets a test inject a corrupted transformation table.
    """
    triples = default_scope() if scope is None else list(scope)
    mismatches = []
    for p, t, e in triples:
        model = predict(p, t, e, gamma_fn)
        quantum = born_probability(p, t, e)
        if model != quantum:
            mismatches.append({
                "prep": state_to_json(p)["bloch"],
                "channel": channel_to_json(t)["mixture"],
                "effect": effect_to_json(e),
                "model": str(model),
                "quantum": str(quantum),
            })
    return {"checked": len(triples), "mismatches": mismatches}


def corrupted_gamma(c: CliffordElement) -> StochasticMap:
    """Self-test table: Hadamard is mapped to the identity permutation."""
    if c == HADAMARD:
        return gamma(IDENTITY)
    return gamma(c)
