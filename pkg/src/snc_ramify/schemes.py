"""Function schemes and the exhaustive ramification-killing verifier.

A scheme is a list of formal functions.  Each function's divisor is an
integer combination of the color classes D_1..D_n plus private auxiliary
divisors E in general position.  At a valuation center lying on the
components T (one per color) and on the auxiliary divisors J, with
|T| + |J| <= n, a component c in T is killed when its local parameter is a
product of powers of the functions up to units and r-th powers, i.e. when
M x = e_c (mod r) is solvable for the valuation matrix M of the point.

Local matrices depend only on the colors met by T and on J, so the
verifier solves each distinct (color pattern, J) system once per modulus
and reuses it for every face with that pattern.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Iterator, Optional, Sequence, Union

from .coloring import ColoredComplex
from .modlinalg import SmithSolver, matvec
from .residue_symbols import bridge_check


class SchemeError(ValueError):
    pass


class InvalidScenarioError(SchemeError):
    pass


@dataclass(frozen=True)
class SchemeFunction:
    name: str
    class_coeffs: tuple[int, ...]
    aux_coeffs: tuple[tuple[str, int], ...]

    def aux(self, e: str) -> int:
        for name, k in self.aux_coeffs:
            if name == e:
                return k
        return 0

    def divisor(self) -> str:
        parts = []
        for i, k in enumerate(self.class_coeffs, 1):
            if k:
                parts.append(f"D{i}" if k == 1 else f"{k}D{i}")
        for e, k in self.aux_coeffs:
            parts.append(e if k == 1 else f"{k}{e}")
        return " + ".join(parts) or "0"


@dataclass(frozen=True)
class FunctionScheme:
    name: str
    n: int
    functions: tuple[SchemeFunction, ...]
    aux_order: tuple[str, ...]

    def __post_init__(self):
        if len(set(self.aux_order)) != len(self.aux_order):
            raise SchemeError("repeated auxiliary divisor in aux_order")
        known = set(self.aux_order)
        for f in self.functions:
            if len(f.class_coeffs) != self.n:
                raise SchemeError(f"{f.name}: expected {self.n} class coefficients")
            for e, k in f.aux_coeffs:
                if e not in known:
                    raise SchemeError(f"{f.name}: auxiliary divisor {e!r} not in aux_order")
                if k <= 0:
                    raise SchemeError(f"{f.name}: auxiliary coefficient must be positive")

    @property
    def class_matrix(self) -> list[list[int]]:
        return [list(f.class_coeffs) for f in self.functions]


def _dim(colored: Union[ColoredComplex, int]) -> int:
    return colored if isinstance(colored, int) else colored.complex.n


def square_scheme(colored: Union[ColoredComplex, int]) -> FunctionScheme:
    """n^2 functions f_i^j with div f_i^j = D_i + E_i^j."""
    n = _dim(colored)
    fns, aux = [], []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            e = f"E{i}^{j}"
            aux.append(e)
            unit = tuple(int(k == i) for k in range(1, n + 1))
            fns.append(SchemeFunction(f"f{i}^{j}", unit, ((e, 1),)))
    return FunctionScheme("square", n, tuple(fns), tuple(aux))


def _explicit(name: str, rows: Sequence[Sequence[int]]) -> FunctionScheme:
    fns = tuple(
        SchemeFunction(f"f{k}", tuple(row), ((f"E{k}", 1),)) for k, row in enumerate(rows, 1)
    )
    return FunctionScheme(name, 3, fns, tuple(f"E{k}" for k in range(1, len(rows) + 1)))


REMARK4_ROWS = ((1, 1, 1), (1, 1, 0), (0, 1, 1), (1, 2, 1))
REMARK3_ROWS = ((1, 3, 3), (1, 2, 1), (1, 1, 2))


def remark_scheme_4(colored: Union[ColoredComplex, int] = 3) -> FunctionScheme:
    """Four functions that suffice for threefolds and every r."""
    if _dim(colored) != 3:
        raise SchemeError("the four-function scheme is for n=3")
    return _explicit("remark4", REMARK4_ROWS)


def remark_scheme_3(colored: Union[ColoredComplex, int] = 3) -> FunctionScheme:
    """Three functions for threefolds; works when r is prime to 6."""
    if _dim(colored) != 3:
        raise SchemeError("the three-function scheme is for n=3")
    return _explicit("remark3", REMARK3_ROWS)


SCHEMES = {
    "square": square_scheme,
    "remark4": remark_scheme_4,
    "remark3": remark_scheme_3,
}


# ---------------------------------------------------------------------------
# Scenarios
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Scenario:
    T: tuple[str, ...]
    J: tuple[str, ...]

    def __str__(self):
        return "T:{" + ",".join(self.T) + "} J:{" + ",".join(self.J) + "}"


def _aux_subsets(aux: Sequence[str], max_size: int) -> Iterator[tuple[str, ...]]:
    for k in range(0, min(max_size, len(aux)) + 1):
        yield from combinations(aux, k)


def enumerate_scenarios(colored: ColoredComplex, scheme: FunctionScheme) -> Iterator[Scenario]:
    """All (T, J) with T a face and |T| + |J| <= n, in deterministic order."""
    c = colored.complex
    for face in c.sorted_faces():
        T = tuple(c.ordered(face))
        for J in _aux_subsets(scheme.aux_order, c.n - len(T)):
            yield Scenario(T, J)


def scenario_count(colored: ColoredComplex, scheme: FunctionScheme) -> int:
    n, a = colored.complex.n, len(scheme.aux_order)
    return sum(
        sum(comb(a, k) for k in range(0, n - len(f) + 1)) for f in colored.complex.faces
    )


def _check_scenario(s: Scenario, scheme: FunctionScheme, colored: ColoredComplex) -> None:
    c = colored.complex
    if not s.T:
        raise InvalidScenarioError("T must be nonempty")
    if frozenset(s.T) not in c.faces:
        raise InvalidScenarioError(f"{set(s.T)} is not a face")
    if len(s.T) + len(s.J) > c.n:
        raise InvalidScenarioError("|T| + |J| exceeds the dimension")
    unknown = set(s.J) - set(scheme.aux_order)
    if unknown or len(set(s.J)) != len(s.J):
        raise InvalidScenarioError(f"bad auxiliary set {s.J}")
    colors = [colored.color.get(v) for v in s.T]
    if None in colors or len(set(colors)) != len(colors):
        raise InvalidScenarioError(f"components of {s.T} do not have distinct colors")


def local_matrix(
    scenario: Scenario, scheme: FunctionScheme, colored: ColoredComplex
) -> tuple[list[list[int]], list[list[int]]]:
    """Valuation matrix of the scheme at the scenario's point, and unit targets.

    Rows are T then J; columns are the scheme's functions.
    """
    _check_scenario(scenario, scheme, colored)
    M = [
        [f.class_coeffs[colored.color[v] - 1] for f in scheme.functions] for v in scenario.T
    ]
    M += [[f.aux(e) for f in scheme.functions] for e in scenario.J]
    rows = len(M)
    targets = [[int(i == k) for i in range(rows)] for k in range(len(scenario.T))]
    return M, targets


# ---------------------------------------------------------------------------
# Pattern-level solving, shared across complexes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class System:
    """A canonical congruence system: zero and repeated columns removed."""

    n_targets: int
    columns: tuple[tuple[int, ...], ...]

    @property
    def matrix(self) -> list[list[int]]:
        rows = len(self.columns[0]) if self.columns else self.n_targets
        return [[col[i] for col in self.columns] for i in range(rows)]


@dataclass
class PatternTable:
    pattern: tuple[int, ...]
    # per J in enumeration order: (J, system, representative function index per column)
    rows: list[tuple[tuple[str, ...], System, tuple[int, ...]]]
    systems: frozenset[System]


@lru_cache(maxsize=None)
def _pattern_table(scheme: FunctionScheme, pattern: tuple[int, ...]) -> PatternTable:
    base = [tuple(f.class_coeffs[k - 1] for k in pattern) for f in scheme.functions]
    aux_maps = [dict(f.aux_coeffs) for f in scheme.functions]
    rows = []
    for J in _aux_subsets(scheme.aux_order, scheme.n - len(pattern)):
        reps: dict[tuple[int, ...], int] = {}
        for idx, (b, am) in enumerate(zip(base, aux_maps)):
            col = b + tuple(am.get(e, 0) for e in J)
            if any(col) and col not in reps:
                reps[col] = idx
        cols = tuple(sorted(reps))
        system = System(len(pattern), cols)
        rows.append((J, system, tuple(reps[col] for col in cols)))
    return PatternTable(pattern, rows, frozenset(s for _, s, _ in rows))


@lru_cache(maxsize=None)
def _solver(system: System) -> Optional[SmithSolver]:
    if not system.columns:
        return None
    return SmithSolver(system.matrix)


@lru_cache(maxsize=None)
def system_solutions(system: System, r: int) -> tuple[Optional[tuple[int, ...]], ...]:
    """Canonical solution per target row (None where unsolvable)."""
    solver = _solver(system)
    nrows = len(system.columns[0]) if system.columns else system.n_targets
    out = []
    for k in range(system.n_targets):
        b = [int(i == k) for i in range(nrows)]
        x = solver.solve(b, r) if solver is not None else None
        out.append(tuple(x) if x is not None else None)
    return tuple(out)


@lru_cache(maxsize=None)
def _pattern_verdict(
    scheme: FunctionScheme, pattern: tuple[int, ...], r: int
) -> Optional[tuple[tuple[str, ...], frozenset[int]]]:
    """None if every (J, target) is solvable, else the first failing J and its failing colors."""
    table = _pattern_table(scheme, pattern)
    if all(None not in system_solutions(s, r) for s in table.systems):
        return None
    for J, system, _ in table.rows:
        sols = system_solutions(system, r)
        failing = frozenset(pattern[k] for k, x in enumerate(sols) if x is None)
        if failing:
            return J, failing
    raise AssertionError("unreachable")


def _expand(x: Sequence[int], reps: Sequence[int], width: int) -> tuple[int, ...]:
    full = [0] * width
    for value, idx in zip(x, reps):
        full[idx] = value
    return tuple(full)


# ---------------------------------------------------------------------------
# Results
# ---------------------------------------------------------------------------


@dataclass
class Certificate:
    """Exponent solutions for every (scenario, component) pair.

    Solutions are stored once per distinct congruence system; use
    :meth:`solution` for the exponent vector of a particular scenario.
    """

    colored: ColoredComplex
    scheme: FunctionScheme
    r: int
    scenarios: int
    patterns: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        for system in self.systems():
            M = system.matrix
            for k, x in enumerate(system_solutions(system, self.r)):
                if x is None:
                    raise SchemeError("certificate built from an unsolved system")
                lhs = matvec(M, x)
                if any((v - int(i == k)) % self.r for i, v in enumerate(lhs)):
                    raise SchemeError("stored exponent vector fails its congruence")

    def systems(self) -> set[System]:
        out: set[System] = set()
        for p in self.patterns:
            out |= _pattern_table(self.scheme, p).systems
        return out

    def solution(self, scenario: Scenario, component: str) -> tuple[int, ...]:
        if component not in scenario.T:
            raise InvalidScenarioError(f"{component!r} not in {scenario.T}")
        M, _ = local_matrix(scenario, self.scheme, self.colored)
        color = self.colored.color
        pattern = tuple(sorted(color[v] for v in scenario.T))
        table = _pattern_table(self.scheme, pattern)
        J_index = _j_index(self.scheme, len(pattern), scenario.J)
        J, system, reps = table.rows[J_index]
        assert J == scenario.J
        k = pattern.index(color[component])
        x = _expand(system_solutions(system, self.r)[k], reps, len(self.scheme.functions))
        target = [int(v == component) for v in scenario.T] + [0] * len(scenario.J)
        if any((a - b) % self.r for a, b in zip(matvec(M, x), target)):
            raise SchemeError("expanded solution fails its congruence")
        return x

    def entries(self) -> Iterator[tuple[Scenario, str, tuple[int, ...]]]:
        for s in enumerate_scenarios(self.colored, self.scheme):
            for v in s.T:
                yield s, v, self.solution(s, v)

    def summary(self) -> str:
        return f"CERTIFIED scheme={self.scheme.name} r={self.r} scenarios={self.scenarios}"


@lru_cache(maxsize=None)
def _j_positions(aux: tuple[str, ...], max_size: int) -> dict[tuple[str, ...], int]:
    return {J: k for k, J in enumerate(_aux_subsets(aux, max_size))}


def _j_index(scheme: FunctionScheme, t_size: int, J: tuple[str, ...]) -> int:
    return _j_positions(scheme.aux_order, scheme.n - t_size)[J]


@dataclass
class Counterexample:
    colored: ColoredComplex
    scheme: FunctionScheme
    r: int
    scenario: Scenario
    target: str
    matrix: list[list[int]]

    def summary(self) -> str:
        return (
            f"FAILED scheme={self.scheme.name} r={self.r} "
            f"scenario={self.scenario} target={self.target}"
        )


def verify(
    colored: ColoredComplex, scheme: FunctionScheme, r: int
) -> Union[Certificate, Counterexample]:
    """Check every scenario; return a certificate or the first counterexample."""
    if r < 2:
        raise ValueError(f"modulus must be at least 2, got {r}")
    c = colored.complex
    if scheme.n != c.n:
        raise SchemeError(f"scheme is for n={scheme.n}, complex has n={c.n}")
    faces = c.sorted_faces()
    patterns: dict[frozenset[str], tuple[int, ...]] = {}
    for f in faces:
        colors = [colored.color.get(v) for v in f]
        if None in colors or len(set(colors)) != len(colors):
            raise InvalidScenarioError(f"face {sorted(f)} is not rainbow-colored")
        patterns[f] = tuple(sorted(colors))
    for f in faces:
        verdict = _pattern_verdict(scheme, patterns[f], r)
        if verdict is None:
            continue
        J, failing = verdict
        T = tuple(c.ordered(f))
        target = next(v for v in T if colored.color[v] in failing)
        scenario = Scenario(T, J)
        M, _ = local_matrix(scenario, scheme, colored)
        return Counterexample(colored, scheme, r, scenario, target, M)
    used = tuple(sorted(set(patterns.values())))
    return Certificate(colored, scheme, r, scenario_count(colored, scheme), used)


def symbolic_check(cert: Certificate, rng: random.Random) -> tuple[int, int]:
    """Run the residue-symbol bridge on every distinct system of ``cert``.

    Every scenario's congruence system equals one of these (up to dropped
    zero columns and merged equal columns), so this covers all scenarios.
    Returns (systems checked, systems found unramified).
    """
    ok = total = 0
    for system in sorted(cert.systems(), key=lambda s: (s.n_targets, s.columns)):
        sols = system_solutions(system, cert.r)
        nrows = len(system.columns[0])
        rows = [f"s{k}" for k in range(1, system.n_targets + 1)]
        rows += [f"t{k}" for k in range(1, nrows - system.n_targets + 1)]
        names = [f"g{k}" for k in range(1, len(system.columns) + 1)]
        total += 1
        ok += bridge_check(rows, system.n_targets, system.matrix, sols, names, cert.r, rng)
    return total, ok


def symbolic_check_scenarios(cert: Certificate, rng: random.Random) -> tuple[int, int]:
    """Bridge check scenario by scenario on the full local matrices (small inputs)."""
    ok = total = 0
    names = [f"fn:{f.name}" for f in cert.scheme.functions]
    for s in enumerate_scenarios(cert.colored, cert.scheme):
        M, _ = local_matrix(s, cert.scheme, cert.colored)
        sols = [cert.solution(s, v) for v in s.T]
        total += 1
        ok += bridge_check(list(s.T) + list(s.J), len(s.T), M, sols, names, cert.r, rng)
    return total, ok
