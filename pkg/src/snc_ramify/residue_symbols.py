"""Formal classes alpha_0 + sum_I alpha_I u s_I over a local ring.

Coefficients live in a free Z/r-module on opaque tags standing for classes
over the local ring (cup products of units, in practice).  ``s_I`` is the cup
product of the parameter symbols indexed by I.  Residues and substitutions
are signless: only whether a residue vanishes is ever used downstream.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

Coefficient = Mapping[str, int]


class SymbolError(ValueError):
    pass


class UnknownParameterError(SymbolError):
    pass


class MalformedMonomialError(SymbolError):
    pass


@dataclass(frozen=True)
class LocalContext:
    params: tuple[str, ...]
    r: int

    def __post_init__(self):
        if len(set(self.params)) != len(self.params):
            raise SymbolError(f"repeated parameter in {self.params}")
        if self.r < 2:
            raise SymbolError(f"modulus must be at least 2, got {self.r}")

    def without(self, p: str) -> "LocalContext":
        return LocalContext(tuple(q for q in self.params if q != p), self.r)


def _reduce(coeff: Mapping[str, int], r: int) -> dict[str, int]:
    return {t: a % r for t, a in coeff.items() if a % r}


def _add_into(acc: dict[str, int], coeff: Mapping[str, int], r: int, scale: int = 1) -> None:
    for t, a in coeff.items():
        v = (acc.get(t, 0) + scale * a) % r
        if v:
            acc[t] = v
        else:
            acc.pop(t, None)


@dataclass(frozen=True)
class SymbolClass:
    context: LocalContext
    degree: int
    terms: Mapping[frozenset[str], Coefficient] = field(default_factory=dict)

    def __post_init__(self):
        clean: dict[frozenset[str], dict[str, int]] = {}
        for I, coeff in self.terms.items():
            I = frozenset(I)
            unknown = I - set(self.context.params)
            if unknown:
                raise UnknownParameterError(f"unknown parameters {sorted(unknown)}")
            if len(I) > self.degree:
                raise SymbolError(f"term s_{sorted(I)} exceeds degree {self.degree}")
            c = _reduce(coeff, self.context.r)
            if c:
                clean[I] = c
        object.__setattr__(self, "terms", clean)

    @property
    def r(self) -> int:
        return self.context.r

    def is_zero(self) -> bool:
        return not self.terms

    def _check_compatible(self, other: "SymbolClass") -> None:
        if self.context != other.context or self.degree != other.degree:
            raise SymbolError("classes live in different groups")

    def __add__(self, other: "SymbolClass") -> "SymbolClass":
        self._check_compatible(other)
        out: dict[frozenset[str], dict[str, int]] = {I: dict(c) for I, c in self.terms.items()}
        for I, c in other.terms.items():
            _add_into(out.setdefault(I, {}), c, self.r)
        return SymbolClass(self.context, self.degree, out)

    def __rmul__(self, k: int) -> "SymbolClass":
        return SymbolClass(
            self.context,
            self.degree,
            {I: {t: k * a for t, a in c.items()} for I, c in self.terms.items()},
        )

    def __eq__(self, other):
        if not isinstance(other, SymbolClass):
            return NotImplemented
        return (
            self.context == other.context
            and self.degree == other.degree
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.context, self.degree, frozenset(self.terms)))

    def __repr__(self):
        parts = []
        for I in sorted(self.terms, key=lambda I: (len(I), sorted(I))):
            coeff = " + ".join(f"{a}*{t}" for t, a in sorted(self.terms[I].items()))
            sym = "u".join(f"({p})" for p in self.context.params if p in I) or "1"
            parts.append(f"[{coeff}] u {sym}")
        return f"SymbolClass(m={self.degree}, r={self.r}: " + (" + ".join(parts) or "0") + ")"


def residue(a: SymbolClass, param: str) -> SymbolClass:
    """Residue along the divisor of ``param``; lands over the quotient context.

    A term whose s_I contains the parameter loses it; terms without it are
    unramified along that divisor and vanish.
    """
    if param not in a.context.params:
        raise UnknownParameterError(f"{param!r} not in {a.context.params}")
    out: dict[frozenset[str], dict[str, int]] = {}
    for I, c in a.terms.items():
        if param in I:
            _add_into(out.setdefault(I - {param}, {}), c, a.r)
    return SymbolClass(a.context.without(param), a.degree - 1, out)


@dataclass(frozen=True)
class Monomial:
    """u * prod g_k^{e_k} where each g_k is an r-th power or has e_k = 0 mod r."""

    unit: Optional[str]
    factors: Mapping[str, int] = field(default_factory=dict)
    rth_powers: frozenset[str] = frozenset()


def _unit_class(m: Monomial, r: int) -> Optional[str]:
    """Image of the monomial in K*/K*^r: a unit tag, or None if trivial."""
    for g, e in m.factors.items():
        if g not in m.rth_powers and e % r:
            raise MalformedMonomialError(
                f"factor {g}^{e} is neither a declared r-th power nor has exponent divisible by {r}"
            )
    return m.unit


def substitute(a: SymbolClass, assignment: Mapping[str, Monomial]) -> SymbolClass:
    """Replace each assigned (s_i) by the class of its monomial over L.

    The r-th power part of the monomial dies; what survives is the unit
    class, which is cupped into the coefficient.  A trivial unit kills the
    term.
    """
    for p in assignment:
        if p not in a.context.params:
            raise UnknownParameterError(f"{p!r} not in {a.context.params}")
    units = {p: _unit_class(m, a.r) for p, m in assignment.items()}
    out: dict[frozenset[str], dict[str, int]] = {}
    for I, coeff in a.terms.items():
        hit = [p for p in a.context.params if p in I and p in units]
        if any(units[p] is None for p in hit):
            continue
        suffix = "".join(f"u({units[p]})" for p in hit)
        moved = {t + suffix: v for t, v in coeff.items()}
        _add_into(out.setdefault(I - set(hit), {}), moved, a.r)
    return SymbolClass(a.context, a.degree, out)


def is_unramified(a: SymbolClass) -> bool:
    return all(residue(a, p).is_zero() for p in a.context.params)


def random_class(
    context: LocalContext,
    support: Sequence[str],
    rng: random.Random,
    degree: int | None = None,
    density: float = 0.7,
) -> SymbolClass:
    """A random class whose terms only involve parameters from ``support``."""
    support = [p for p in context.params if p in set(support)]
    degree = len(support) if degree is None else degree
    terms: dict[frozenset[str], dict[str, int]] = {}
    for mask in range(1 << len(support)):
        I = frozenset(p for k, p in enumerate(support) if mask >> k & 1)
        if len(I) > degree or rng.random() > density:
            continue
        ntags = rng.randint(1, 2)
        terms[I] = {
            f"a{''.join(sorted(I)) or '0'}_{k}": rng.randrange(1, context.r) for k in range(ntags)
        }
    return SymbolClass(context, degree, terms)


def bridge_check(
    rows: Sequence[str],
    n_targets: int,
    matrix: Sequence[Sequence[int]],
    solutions: Sequence[Sequence[int]],
    function_names: Sequence[str],
    r: int,
    rng: random.Random,
) -> bool:
    """Re-derive unramifiedness from exponent solutions.

    ``rows`` names the local parameters through the point (targets first),
    ``matrix[p][f]`` is the valuation of function f along parameter p, and
    ``solutions[k]`` expresses target ``rows[k]`` as a product of the
    functions.  Each target is rewritten as
    unit * prod f^{x_f} * prod p^{delta - (Mx)_p}; the functions are r-th
    powers over L and the parameter exponents must be divisible by r,
    otherwise substitution raises.
    """
    context = LocalContext(tuple(rows), r)
    targets = list(rows[:n_targets])
    alpha = random_class(context, targets, rng)
    assignment = {}
    for k, p in enumerate(targets):
        x = solutions[k]
        factors: dict[str, int] = {}
        for f, e in zip(function_names, x):
            if e % r:
                factors[f] = e
        for q_idx, q in enumerate(rows):
            val = sum(matrix[q_idx][j] * x[j] for j in range(len(x)))
            e = (1 if q_idx == k else 0) - val
            if e:
                factors[q] = factors.get(q, 0) + e
        assignment[p] = Monomial(f"unit_{p}", factors, frozenset(function_names))
    image = substitute(alpha, assignment)
    return is_unramified(image)
