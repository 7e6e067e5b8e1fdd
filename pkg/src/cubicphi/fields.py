"""Cubic fields, their splitting symbols, and a queryable field store."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Optional

from . import forms
from .arith import fundamental_part, is_fundamental, mirror
from .forms import BinaryCubicForm, EnumerationRequest, reduce_form


class CoverageError(LookupError):
    """The store does not cover the requested discriminant."""


@dataclass(frozen=True)
class CubicField:
    """Isomorphism class of a cubic field, keyed by its canonical form."""

    form: BinaryCubicForm
    discriminant: int

    @classmethod
    def from_form(cls, F: Iterable[int]) -> "CubicField":
        F = BinaryCubicForm(*F)
        return cls(F, F.disc)

    @classmethod
    def from_polynomial(cls, coeffs: Iterable[int]) -> "CubicField":
        """Field generated by a root of a x^3 + b x^2 + c x + d (descending)."""
        F = BinaryCubicForm(*coeffs)
        if forms.has_rational_root(F):
            raise ValueError(f"{tuple(F)} is reducible")
        return cls.from_form(reduce_form(forms.maximal_overform(F)))

    @property
    def poly(self) -> tuple[int, int, int, int]:
        """Monic defining polynomial y^3 + b y^2 + ac y + a^2 d (y = a x)."""
        a, b, c, d = self.form
        return (1, b, a * c, a * a * d)

    @property
    def resolvent(self) -> tuple[int, int]:
        return resolvent_decompose(self.discriminant)

    def __str__(self) -> str:
        return f"K{self.discriminant}{tuple(self.form)}"


def resolvent_decompose(disc: int) -> tuple[int, int]:
    """(D, f) with disc = D*f^2 and D a fundamental discriminant."""
    if disc == 0:
        raise ValueError("zero is not a field discriminant")
    return fundamental_part(disc)


def _count_roots_mod(F: BinaryCubicForm, p: int) -> int:
    """Number of distinct roots of F in P^1(F_p)."""
    a, b, c, d = (x % p for x in F)
    at_infinity = 1 if a == 0 else 0
    if p < 256:
        return at_infinity + sum(1 for t in range(p) if (((a * t + b) * t + c) * t + d) % p == 0)
    f = forms._poly_mod([a, b, c, d], p)
    if not f:
        raise ValueError(f"form {tuple(F)} vanishes mod {p}")
    if len(f) == 1:
        return at_infinity
    # roots of f in F_p = degree of gcd(f, x^p - x)
    xp = _powmod_x(p, f, p)
    xp_minus_x = _sub(xp, [1, 0], p)
    g = forms._poly_gcd(f, xp_minus_x, p) if xp_minus_x else f
    return at_infinity + len(g) - 1


def _sub(u, v, p):
    n = max(len(u), len(v))
    u = [0] * (n - len(u)) + list(u)
    v = [0] * (n - len(v)) + list(v)
    out = [(x - y) % p for x, y in zip(u, v)]
    while out and out[0] == 0:
        out.pop(0)
    return out


def _mulmod(u, v, f, p):
    prod = [0] * (len(u) + len(v) - 1)
    for i, x in enumerate(u):
        for j, y in enumerate(v):
            prod[i + j] = (prod[i + j] + x * y) % p
    while prod and prod[0] == 0:
        prod.pop(0)
    return forms._poly_rem(prod, f, p) if len(prod) >= len(f) else prod


def _powmod_x(e, f, p):
    result, base = [1], forms._poly_rem([1, 0], f, p) if len(f) <= 2 else [1, 0]
    while e:
        if e & 1:
            result = _mulmod(result, base, f, p)
        base = _mulmod(base, base, f, p)
        e >>= 1
    return result


def omega(E: CubicField, p: int) -> int:
    """Splitting symbol: 2 if p is totally split, -1 if inert, else 0."""
    roots = _count_roots_mod(E.form, p)
    if roots == 3:
        return 2
    if roots == 0:
        return -1
    return 0


def is_isomorphic(E1: CubicField, E2: CubicField) -> bool:
    return reduce_form(E1.form) == reduce_form(E2.form)


class FieldStore:
    """Cubic fields grouped by discriminant, with the ranges they cover.

    ``coverage[sign]`` is the largest |disc| of that sign for which the store
    is complete.  Built once, then read-only.
    """

    def __init__(self, fields: Iterable[CubicField] = (), coverage: Optional[dict[int, int]] = None):
        self._by_disc: dict[int, list[CubicField]] = defaultdict(list)
        for E in fields:
            self._by_disc[E.discriminant].append(E)
        for lst in self._by_disc.values():
            lst.sort(key=lambda E: tuple(E.form))
        self.coverage = {1: 0, -1: 0}
        if coverage:
            self.coverage.update(coverage)

    @classmethod
    def enumerate(cls, max_pos: int = 0, max_neg: int = 0, workers: int = 1) -> "FieldStore":
        fields = []
        for sign, bound in ((1, max_pos), (-1, max_neg)):
            if bound >= 1:
                req = EnumerationRequest(bound, sign)
                fields.extend(CubicField.from_form(F) for F in forms.enumerate_classes(req, workers))
        return cls(fields, {1: max_pos, -1: max_neg})

    def covers(self, disc: int) -> bool:
        return abs(disc) <= self.coverage[1 if disc > 0 else -1]

    def fields_of_disc(self, disc: int) -> list[CubicField]:
        if not self.covers(disc):
            raise CoverageError(f"store does not cover discriminant {disc} (coverage {self.coverage})")
        return list(self._by_disc.get(disc, ()))

    def __iter__(self):
        for disc in sorted(self._by_disc, key=lambda n: (abs(n), n)):
            yield from self._by_disc[disc]

    def __len__(self) -> int:
        return sum(len(v) for v in self._by_disc.values())

    def discriminants(self) -> list[int]:
        return sorted(self._by_disc, key=lambda n: (abs(n), n))


@dataclass(frozen=True)
class FieldInventory:
    D: int
    fields_Dstar: tuple[CubicField, ...] = field(default_factory=tuple)
    fields_27D: tuple[CubicField, ...] = field(default_factory=tuple)

    @property
    def sizes(self) -> tuple[int, int]:
        return len(self.fields_Dstar), len(self.fields_27D)

    @property
    def all_fields(self) -> tuple[CubicField, ...]:
        return self.fields_Dstar + self.fields_27D


def inventory(D: int, store: FieldStore) -> FieldInventory:
    """The cubic fields of discriminant D* and -27D."""
    if not is_fundamental(D):
        raise ValueError(f"{D} is not a fundamental discriminant")
    Dstar = mirror(D)
    return FieldInventory(D, tuple(store.fields_of_disc(Dstar)), tuple(store.fields_of_disc(-27 * D)))


def rank_from_count(n: int) -> int:
    """r with (3^r - 1)/2 == n; raises if n is not of that form."""
    r, size = 0, 0
    while size < n:
        r += 1
        size = (3**r - 1) // 2
    if size != n:
        raise ValueError(f"{n} fields is not of the form (3^r - 1)/2")
    return r
