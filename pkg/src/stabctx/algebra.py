"""Signed Pauli operators and the single-qubit Clifford group.

A Clifford is identified with its conjugation action on the Pauli axes,
i.e. a signed permutation of (X, Y, Z) with determinant +1.  Global phases
are dropped.  Exact rationals are plain :class:`fractions.Fraction`.
"""
from __future__ import annotations

import csv
import enum
import io
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations, product
from typing import Iterable

Rational = Fraction

__all__ = [
    "Rational", "Axis", "SignedPauli", "CliffordElement",
    "compose", "act", "enumerate_group", "parity_character",
    "all_cliffords", "group_table_csv", "parse_clifford",
    "IDENTITY", "PAULI_X", "PAULI_Y", "PAULI_Z", "HADAMARD", "PHASE",
]


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings; floats are refused."""
    if isinstance(value, float):
        raise TypeError("floating point values are not accepted: %r" % value)
    return Fraction(value)


def check_sign(s: int) -> int:
    if s not in (1, -1):
        raise ValueError("sign must be +1 or -1, got %r" % (s,))
    return s


class Axis(enum.IntEnum):
    X = 0
    Y = 1
    Z = 2

    def __str__(self):
        return self.name


@dataclass(frozen=True, order=True)
class SignedPauli:
    axis: Axis
    sign: int = 1

    def __post_init__(self):
        object.__setattr__(self, "axis", Axis(self.axis))
        check_sign(self.sign)

    def __neg__(self) -> SignedPauli:
        return SignedPauli(self.axis, -self.sign)

    def __str__(self):
        return "%s%s" % ("+" if self.sign > 0 else "-", self.axis.name)

    @classmethod
    def parse(cls, text: str) -> SignedPauli:
        text = text.strip()
        if len(text) != 2 or text[0] not in "+-" or text[1] not in "XYZ":
            raise ValueError("cannot parse signed Pauli %r" % text)
        return cls(Axis[text[1]], 1 if text[0] == "+" else -1)


ALL_SIGNED_PAULIS = tuple(SignedPauli(a, s) for a in Axis for s in (1, -1))


def _perm_sign(perm) -> int:
    sign = 1
    perm = list(perm)
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


@dataclass(frozen=True)
class CliffordElement:
    """Conjugation action of a single-qubit Clifford.

    ``images[i]`` is the signed Pauli that axis ``Axis(i)`` is sent to.
    """

    images: tuple
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        images = tuple(p if isinstance(p, SignedPauli) else SignedPauli(*p)
                       for p in self.images)
        if len(images) != 3:
            raise ValueError("a Clifford needs exactly three images")
        axes = [p.axis for p in images]
        if sorted(axes) != list(Axis):
            raise ValueError("image axes %s are not a permutation of X, Y, Z"
                             % [a.name for a in axes])
        object.__setattr__(self, "images", images)
        if self.determinant() != 1:
            raise ValueError("signed permutation %s has determinant -1 "
                             "and is not a Clifford" % self.canonical_name)

    @property
    def axis_permutation(self) -> tuple:
        return tuple(int(p.axis) for p in self.images)

    @property
    def signs(self) -> tuple:
        return tuple(p.sign for p in self.images)

    def determinant(self) -> int:
        s = _perm_sign(self.axis_permutation)
        for sign in self.signs:
            s *= sign
        return s

    def matrix(self) -> tuple:
        """3x3 signed permutation matrix acting on Bloch vectors (column j is the image of axis j)."""
        m = [[0, 0, 0] for _ in range(3)]
        for j, p in enumerate(self.images):
            m[p.axis][j] = p.sign
        return tuple(tuple(row) for row in m)

    def apply(self, v) -> tuple:
        """Apply the signed permutation to a coordinate triple.

        Coordinate ``j`` of ``v`` lands, with the image's sign, on the image
        axis.  This is the same rule for Bloch vectors and for ontic triples.
        """
        out = [None, None, None]
        for j, p in enumerate(self.images):
            out[p.axis] = p.sign * v[j]
        return tuple(out)

    @property
    def canonical_name(self) -> str:
        return " ".join("%s:%s" % (a.name, p) for a, p in zip(Axis, self.images))

    @property
    def label(self) -> str:
        return self.name or ALIASES_BY_KEY.get(self.images) or self.canonical_name

    def __str__(self):
        return self.label

    def __repr__(self):
        return "CliffordElement(%r)" % self.label

    def inverse(self) -> CliffordElement:
        images = [None, None, None]
        for j, p in enumerate(self.images):
            images[p.axis] = SignedPauli(Axis(j), p.sign)
        return CliffordElement(tuple(images))


def _named(name: str, x: str, y: str, z: str) -> CliffordElement:
    return CliffordElement(tuple(SignedPauli.parse(t) for t in (x, y, z)), name)


IDENTITY = _named("I", "+X", "+Y", "+Z")
PAULI_X = _named("X", "+X", "-Y", "-Z")
PAULI_Y = _named("Y", "-X", "+Y", "-Z")
PAULI_Z = _named("Z", "-X", "-Y", "+Z")
HADAMARD = _named("H", "+Z", "-Y", "+X")
# phase gate convention: X -> Y, Y -> -X
PHASE = _named("S", "+Y", "-X", "+Z")

ALIASES = {c.name: c for c in (IDENTITY, PAULI_X, PAULI_Y, PAULI_Z, HADAMARD, PHASE)}
ALIASES_BY_KEY = {c.images: c.name for c in ALIASES.values()}


def parse_clifford(text: str) -> CliffordElement:
    """Parse an alias (``"H"``) or a canonical name (``"X:+Z Y:-Y Z:+X"``)."""
    text = text.strip()
    if text in ALIASES:
        return ALIASES[text]
    images = {}
    for token in text.split():
        head, sep, tail = token.partition(":")
        if not sep or head not in Axis.__members__:
            raise ValueError("cannot parse Clifford %r" % text)
        images[Axis[head]] = SignedPauli.parse(tail)
    if sorted(images) != list(Axis):
        raise ValueError("cannot parse Clifford %r" % text)
    return CliffordElement(tuple(images[a] for a in Axis))


def compose(a: CliffordElement, b: CliffordElement) -> CliffordElement:
    """The element that applies ``b`` first, then ``a``."""
    return CliffordElement(tuple(act(a, p) for p in b.images))


def act(c: CliffordElement, p: SignedPauli) -> SignedPauli:
    image = c.images[p.axis]
    return SignedPauli(image.axis, image.sign * p.sign)


def parity_character(c: CliffordElement) -> int:
    """Sign s with parity(image of lambda) = s * parity(lambda).

    The product of the coordinates picks up only the image signs; the axis
    permutation merely reorders factors.  Because the determinant is +1 this
    also equals the sign of the axis permutation.
    """
    s = 1
    for sign in c.signs:
        s *= sign
    return s


def enumerate_group(generators: Iterable[CliffordElement]) -> frozenset:
    """Closure of ``generators`` under composition (always contains I)."""
    gens = list(generators)
    for g in gens:
        if not isinstance(g, CliffordElement):
            raise TypeError("not a CliffordElement: %r" % (g,))
        if g.determinant() != 1:
            raise ValueError("generator %s is not a Clifford" % g)
    found = {IDENTITY}
    frontier = [IDENTITY]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                c = compose(g, a)
                if c not in found:
                    found.add(c)
                    nxt.append(c)
        frontier = nxt
    return frozenset(found)


def all_cliffords() -> tuple:
    """The 24 Cliffords in a fixed order (sorted by canonical name)."""
    out = []
    for perm, signs in product(permutations(Axis), product((1, -1), repeat=3)):
        if _perm_sign(perm) * signs[0] * signs[1] * signs[2] == 1:
            out.append(CliffordElement(tuple(SignedPauli(a, s) for a, s in zip(perm, signs))))
    return tuple(sorted(out, key=lambda c: c.canonical_name))


def group_table_csv(elements=None) -> str:
    """Multiplication table; row is the left factor, column the right factor."""
    elements = list(all_cliffords() if elements is None else elements)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([""] + [e.canonical_name for e in elements])
    for a in elements:
        writer.writerow([a.canonical_name] + [compose(a, b).canonical_name for b in elements])
    return buf.getvalue()
