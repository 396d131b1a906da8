"""Replays of the two transformation-contextuality no-go arguments.

Given the supports of the six stabilizer eigenstates in an arbitrary finite
ontological model (or deterministic Pauli response functions), the model is
coarse-grained onto eight cells labelled by sign triples.  Support transport
then forces how every Clifford permutes the cells, which pins down the
coarse-grained stochastic maps of the two depolarizing channels T1 and T2.
Those maps have disjoint supports although the channels are operationally
equivalent.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from typing import Mapping

import numpy as np

from . import __version__
from .algebra import Axis, CliffordElement, SignedPauli, act, all_cliffords
from .ontology import INDEX, ONTIC_STATES, OnticState, StochasticMap
from .operational import (
    EXTREMAL_STATES, PAULI_EFFECTS, BlochState, Channel, Effect, apply_channel,
    channel_equivalent, grid_statistics_equal, make_T1, make_T2, state_to_json,
)

ZERO = Fraction(0)
ONE = Fraction(1)
QUARTER = Fraction(1, 4)

CELLS = ONTIC_STATES
# the six extremal preparations, in the order +X, -X, +Y, -Y, +Z, -Z
PAULI_KEYS = tuple(SignedPauli(a, s) for a in Axis for s in (1, -1))

CONCLUSIONS = {
    "theorem1": "TNC fails under PNC: T1 and T2 are operationally equivalent "
                "but Γ_T1 ≠ Γ_T2 (their coarse-grained maps have disjoint supports)",
    "theorem2": "TNC fails under MNC + outcome determinism: T1 and T2 are operationally "
                "equivalent but Γ_T1 ≠ Γ_T2 (their coarse-grained maps have disjoint supports)",
}


class NoGoError(ValueError):
    pass


class PNCViolation(NoGoError):
    """The supplied supports admit no preparation-noncontextual reading."""


class KSViolation(NoGoError):
    """The supplied responses are not deterministic and consistent."""


class FalsificationError(NoGoError):
    def __init__(self, message, report):
        super().__init__(message)
        self.report = report


def _state_key(state) -> SignedPauli:
    if isinstance(state, SignedPauli):
        return state
    if isinstance(state, BlochState) and state.is_extremal:
        axis = next(a for a in Axis if state.r[a])
        return SignedPauli(axis, int(state.r[axis]))
    raise ValueError("support keys must be extremal stabilizer states, got %s" % (state,))


def _effect_key(effect) -> SignedPauli:
    if isinstance(effect, SignedPauli):
        return effect
    if isinstance(effect, Effect) and effect in PAULI_EFFECTS:
        axis = next(a for a in Axis if effect.gradient[a])
        return SignedPauli(axis, 1 if effect.gradient[axis] > 0 else -1)
    raise ValueError("response keys must be Pauli effects, got %s" % (effect,))


@dataclass(frozen=True, eq=False)
class SupportSpec:
    """Supports of the six eigenstate preparations over abstract labels.

    ``retained`` is the support of the maximally mixed state; labels outside
    it are deleted before partitioning.  Defaults to the union of supports.
    """

    supports: Mapping
    retained: frozenset | None = None

    def __post_init__(self):
        sup = {}
        for k, v in dict(self.supports).items():
            sup[_state_key(k)] = frozenset(v)
        if set(sup) != set(PAULI_KEYS):
            raise ValueError("supports must be given for all six eigenstates")
        object.__setattr__(self, "supports", sup)
        if self.retained is not None:
            object.__setattr__(self, "retained", frozenset(self.retained))

    def filtered(self) -> tuple:
        """Return ``(retained labels, supports restricted to them)``."""
        if self.retained is None:
            keep = frozenset().union(*self.supports.values())
        else:
            keep = self.retained
        return keep, {k: v & keep for k, v in self.supports.items()}


def canonical_support_spec(copies: int = 1) -> SupportSpec:
    """Supports of the 8-state model, optionally with duplicated ontic states.

    With ``copies == 1`` labels are the ontic states themselves, otherwise
    ``(ontic state, copy index)`` pairs.
    """
    if copies < 1:
        raise ValueError("copies must be positive")

    def labels(s):
        return [s] if copies == 1 else [(s, k) for k in range(copies)]

    supports = {}
    for key in PAULI_KEYS:
        supports[key] = frozenset(l for s in ONTIC_STATES if s[key.axis] == key.sign
                                  for l in labels(s))
    return SupportSpec(supports)


def canonical_responses(copies: int = 1) -> dict:
    """Deterministic Pauli readout ``xi`` over (optionally duplicated) ontic states."""
    out = {}
    for key, effect in zip(PAULI_KEYS, PAULI_EFFECTS):
        resp = {}
        for s in ONTIC_STATES:
            for l in ([s] if copies == 1 else [(s, k) for k in range(copies)]):
                resp[l] = 1 if s[key.axis] == key.sign else 0
        out[effect] = resp
    return out


@dataclass(frozen=True, eq=False)
class CellPartition:
    """Eight disjoint cells keyed by sign triples, plus the label sets that
    play the role of the eigenstate supports (used for support transport)."""

    cells: Mapping
    supports: Mapping = field(repr=False)

    def __post_init__(self):
        cells = {OnticState(*k): frozenset(v) for k, v in dict(self.cells).items()}
        if set(cells) != set(CELLS):
            raise ValueError("a partition needs exactly the 8 sign-triple cells")
        seen = set()
        for k in CELLS:
            if not cells[k]:
                raise ValueError("cell %s is empty" % (k,))
            if seen & cells[k]:
                raise ValueError("cells overlap")
            seen |= cells[k]
        object.__setattr__(self, "cells", cells)
        object.__setattr__(self, "supports", {k: frozenset(v) for k, v in dict(self.supports).items()})

    @property
    def labels(self) -> frozenset:
        return frozenset().union(*self.cells.values())

    def cell_of(self, label) -> OnticState:
        for k, v in self.cells.items():
            if label in v:
                return k
        raise KeyError(label)

    def sizes(self) -> tuple:
        return tuple(len(self.cells[k]) for k in CELLS)


def _triple_intersections(supports) -> dict:
    cells = {}
    for k in CELLS:
        cells[k] = (supports[SignedPauli(Axis.X, k.x)] & supports[SignedPauli(Axis.Y, k.y)]
                    & supports[SignedPauli(Axis.Z, k.z)])
    return cells


def build_pnc_partition(spec: SupportSpec) -> CellPartition:
    keep, supports = spec.filtered()
    if not keep:
        raise PNCViolation("no ontic labels retained")
    for axis in Axis:
        plus, minus = supports[SignedPauli(axis, 1)], supports[SignedPauli(axis, -1)]
        if plus & minus:
            raise PNCViolation("supports of the +%s and -%s eigenstates share labels %s; "
                               "orthogonal states must be perfectly distinguishable"
                               % (axis.name, axis.name, sorted(map(str, plus & minus))))
        if plus | minus != keep:
            # I/2 is an equal mixture of the two eigenstates of every axis
            raise PNCViolation("the %s eigenstate supports do not cover the support of I/2"
                               % axis.name)
    cells = _triple_intersections(supports)
    covered = frozenset().union(*cells.values())
    if covered != keep:
        raise PNCViolation("triple intersections do not cover the retained labels")
    for k in CELLS:
        if not cells[k]:
            raise PNCViolation("cell %s is empty" % (k,))
    return CellPartition(cells, supports)


def build_ks_partition(responses: Mapping) -> CellPartition:
    """Cells from outcome-deterministic Pauli response functions.

    ``responses`` maps each Pauli effect to ``{label: value}``; every value
    must be 0 or 1 and exactly one outcome per axis must fire on each label.
    """
    resp = {}
    for k, v in dict(responses).items():
        resp[_effect_key(k)] = dict(v)
    if set(resp) != set(PAULI_KEYS):
        raise KSViolation("responses must be given for all six Pauli outcomes")
    labels = frozenset().union(*(r.keys() for r in resp.values()))
    for key, r in resp.items():
        if set(r) != labels:
            raise KSViolation("response for %s is not defined on every label" % key)
        for l, v in r.items():
            if v not in (0, 1):
                raise KSViolation("response %s(%s) = %s is not outcome deterministic"
                                  % (key, l, v))
    supports = {key: frozenset(l for l, v in r.items() if v == 1) for key, r in resp.items()}
    for axis in Axis:
        plus, minus = supports[SignedPauli(axis, 1)], supports[SignedPauli(axis, -1)]
        if plus & minus:
            raise KSViolation("labels %s answer both outcomes of %s"
                              % (sorted(map(str, plus & minus)), axis.name))
        if plus | minus != labels:
            raise KSViolation("labels %s answer no outcome of %s"
                              % (sorted(map(str, labels - plus - minus)), axis.name))
    cells = _triple_intersections(supports)
    for k in CELLS:
        if not cells[k]:
            raise KSViolation("cell %s is empty" % (k,))
    return CellPartition(cells, supports)


@dataclass(frozen=True)
class CellPermutation:
    """Bijection on the eight cells; ``images[i]`` is the image of ``CELLS[i]``."""

    images: tuple

    def __post_init__(self):
        images = tuple(OnticState(*c) for c in self.images)
        if sorted(images) != sorted(CELLS):
            raise ValueError("not a bijection on the 8 cells")
        object.__setattr__(self, "images", images)

    def __call__(self, cell) -> OnticState:
        return self.images[INDEX[OnticState(*cell)]]

    def __matmul__(self, other: CellPermutation) -> CellPermutation:
        """``(a @ b)(cell) == a(b(cell))``."""
        return CellPermutation(tuple(self(other(c)) for c in CELLS))

    def matrix(self) -> StochasticMap:
        rows = [[ZERO] * 8 for _ in range(8)]
        for j, c in enumerate(CELLS):
            rows[INDEX[self.images[j]]][j] = ONE
        return StochasticMap(tuple(tuple(r) for r in rows))


class CoarseMap(StochasticMap):
    """Column-stochastic 8x8 map over cells, in lexicographic cell order."""


def forced_cell_permutation(c: CliffordElement, part: CellPartition) -> CellPermutation:
    """The only cell permutation compatible with support transport.

    A cell lies in the supports of three eigenstates, one per axis.  Its image
    must lie in the supports of the three transported eigenstates, and exactly
    one cell fits inside all three.
    """
    images = []
    for cell in CELLS:
        members = part.cells[cell]
        held = [key for key in PAULI_KEYS if members <= part.supports[key]]
        targets = [part.supports[act(c, key)] for key in held]
        fits = [k for k in CELLS if all(part.cells[k] <= t for t in targets)]
        if len(fits) != 1:
            raise NoGoError("support transport leaves %d candidate images for cell %s"
                            % (len(fits), cell))
        images.append(fits[0])
    return CellPermutation(tuple(images))


def coarse_map(t: Channel, part: CellPartition) -> CoarseMap:
    rows = [[ZERO] * 8 for _ in range(8)]
    for w, c in t.mixture:
        perm = forced_cell_permutation(c, part)
        for j, cell in enumerate(CELLS):
            rows[INDEX[perm.images[j]]][j] += w
    return CoarseMap(tuple(tuple(r) for r in rows))


@dataclass(frozen=True)
class Certificate:
    kind: str
    equivalence_evidence: tuple
    coarse_map_T1: CoarseMap
    coarse_map_T2: CoarseMap
    disjoint_support: bool
    conclusion: str

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "equivalence_evidence": [
                {"state": state_to_json(s)["bloch"],
                 "T1": state_to_json(a)["bloch"],
                 "T2": state_to_json(b)["bloch"]}
                for s, a, b in self.equivalence_evidence],
            "coarse_map_T1": self.coarse_map_T1.to_json(),
            "coarse_map_T2": self.coarse_map_T2.to_json(),
            "disjoint_support": self.disjoint_support,
            "conclusion": self.conclusion,
            "toolVersion": __version__,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, ensure_ascii=False) + "\n"


def _replay(kind: str, part: CellPartition, t1: Channel, t2: Channel) -> Certificate:
    evidence = tuple((s, apply_channel(t1, s), apply_channel(t2, s)) for s in EXTREMAL_STATES)
    failures = []
    if not channel_equivalent(t1, t2):
        failures.append("channels are not operationally equivalent")
    elif not grid_statistics_equal(t1, t2):
        failures.append("equivalence decision disagrees with extremal statistics")
    m1, m2 = coarse_map(t1, part), coarse_map(t2, part)
    disjoint = not (m1.nonzero() & m2.nonzero())
    if not disjoint:
        failures.append("coarse-grained maps share support")
    if failures:
        report = {
            "kind": kind,
            "failures": failures,
            "coarse_map_T1": m1.to_json(),
            "coarse_map_T2": m2.to_json(),
        }
        raise FalsificationError("; ".join(failures), report)
    return Certificate(kind, evidence, m1, m2, disjoint, CONCLUSIONS[kind])


def theorem1_certificate(spec: SupportSpec | None = None, t1: Channel | None = None,
                         t2: Channel | None = None) -> Certificate:
    """Preparation-noncontextual replay.

    Raises :class:`FalsificationError` (carrying a report) if any step fails.
    """
    part = build_pnc_partition(spec or canonical_support_spec())
    return _replay("theorem1", part, t1 or make_T1(), t2 or make_T2())


def theorem2_certificate(responses: Mapping | None = None, t1: Channel | None = None,
                         t2: Channel | None = None) -> Certificate:
    """Outcome-determinism + measurement-noncontextual replay."""
    part = build_ks_partition(responses or canonical_responses())
    return _replay("theorem2", part, t1 or make_T1(), t2 or make_T2())


def verify_certificate(data: dict) -> list:
    """Re-check a certificate from its JSON alone; returns a list of problems.

    Independent of the builder: entries are re-parsed, column sums and
    disjointness recomputed, and both maps compared against the
    parity-class rule (1/4 on same-parity pairs for T1, opposite for T2).
    """
    problems = []
    expected = {"kind", "equivalence_evidence", "coarse_map_T1", "coarse_map_T2",
                "disjoint_support", "conclusion", "toolVersion"}
    if set(data) != expected:
        return ["unexpected keys: %s" % sorted(set(data) ^ expected)]
    origin = ["0", "0", "0"]
    states = {tuple(Fraction(v) for v in item["state"]) for item in data["equivalence_evidence"]}
    if len(states) != 6 or any(sum(abs(v) for v in s) != 1 or sum(1 for v in s if v) != 1
                               for s in states):
        problems.append("evidence does not cover the six extremal states")
    for item in data["equivalence_evidence"]:
        if [str(Fraction(v)) for v in item["T1"]] != origin or \
                [str(Fraction(v)) for v in item["T2"]] != origin:
            problems.append("state %s is not sent to the origin by both channels" % item["state"])
    mats = {}
    for name in ("coarse_map_T1", "coarse_map_T2"):
        m = [[Fraction(v) for v in row] for row in data[name]]
        mats[name] = m
        if len(m) != 8 or any(len(r) != 8 for r in m):
            problems.append("%s is not 8x8" % name)
            continue
        for j in range(8):
            if sum(m[i][j] for i in range(8)) != 1:
                problems.append("%s column %d does not sum to 1" % (name, j))
        parity = [a * b * c for a, b, c in CELLS]
        for i in range(8):
            for j in range(8):
                same = parity[i] == parity[j]
                want = QUARTER if same == (name == "coarse_map_T1") else ZERO
                if m[i][j] != want:
                    problems.append("%s[%d][%d] = %s, expected %s" % (name, i, j, m[i][j], want))
    if not problems:
        a, b = mats["coarse_map_T1"], mats["coarse_map_T2"]
        overlap = any(a[i][j] and b[i][j] for i in range(8) for j in range(8))
        if data["disjoint_support"] != (not overlap):
            problems.append("disjoint_support flag is inconsistent with the maps")
        if not data["disjoint_support"]:
            problems.append("maps are not disjoint")
    return problems


def _membership(part: CellPartition) -> np.ndarray:
    """6x8 0/1 array: cell j lies inside the support of PAULI_KEYS[q]."""
    return np.array([[1 if part.cells[c] <= part.supports[key] else 0 for c in CELLS]
                     for key in PAULI_KEYS], dtype=np.int8)


def _relabel_counts(members: np.ndarray, inv: np.ndarray, channel: Channel,
                    scale: int) -> np.ndarray:
    """Integer coarse maps (times ``scale``) recomputed for each relabeling.

    ``inv[k, j]`` is the original cell carried to label ``j`` by relabeling k.
    """
    n = inv.shape[0]
    k_idx = np.arange(n)[:, None]
    # relabeled support membership, shape (n, 6, 8)
    mem = members[:, inv].transpose(1, 0, 2)
    # which of the two supports per axis holds label j: index 2a or 2a+1
    held = np.stack([np.where(mem[:, 2 * a, :] == 1, 2 * a, 2 * a + 1)
                     for a in range(3)], axis=-1)  # (n, 8, 3)
    counts = np.zeros((n, 8, 8), dtype=np.int64)
    for w, c in channel.mixture:
        act_idx = np.array([PAULI_KEYS.index(act(c, key)) for key in PAULI_KEYS])
        targets = act_idx[held]  # (n, 8, 3)
        # fits[k, j, j'] : label j' lies in all three transported supports of j
        gathered = mem[k_idx[:, :, None], targets]  # (n, 8, 3, 8)
        fits = gathered.all(axis=2)
        if not (fits.sum(axis=-1) == 1).all():
            raise NoGoError("support transport is not unique under some relabeling")
        weight = int(w * scale)
        # column j, row = forced image of j
        counts += weight * fits.transpose(0, 2, 1).astype(np.int64)
    return counts


def exhaustive_relabel_search(cliffords_only: bool = False, limit: int | None = None,
                              first: Channel | None = None, second: Channel | None = None,
                              part: CellPartition | None = None) -> dict:
    """Try every relabeling of the eight cells and count "escapes".

    An escape is a relabeling under which the recomputed forced maps of
    ``first`` and ``second`` (default T1, T2) coincide.
    """
    if limit is not None and limit < 1:
        raise ValueError("limit must be a positive integer")
    first = first or make_T1()
    second = second or make_T2()
    part = part or build_pnc_partition(canonical_support_spec())
    if cliffords_only:
        relabels = [tuple(INDEX[OnticState(*c.apply(cell))] for cell in CELLS)
                    for c in all_cliffords()]
    else:
        relabels = list(permutations(range(8)))
    if limit is not None:
        relabels = relabels[:limit]
    perm = np.array(relabels, dtype=np.int64)
    inv = np.argsort(perm, axis=1)
    members = _membership(part)
    scale = math.lcm(*(w.denominator for w, _ in first.mixture + second.mixture))
    a = _relabel_counts(members, inv, first, scale)
    b = _relabel_counts(members, inv, second, scale)
    same = (a == b).all(axis=(1, 2))
    return {
        "candidates": len(relabels),
        "escapes": int(same.sum()),
        "compared": [first.label, second.label],
        "scope": "cliffords" if cliffords_only else "all",
    }
