import itertools
import random
from math import comb, gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from snc_ramify.coloring import ColoredComplex, color
from snc_ramify.modlinalg import det, matvec, solve_mod
from snc_ramify.schemes import (
    Certificate,
    Counterexample,
    FunctionScheme,
    InvalidScenarioError,
    Scenario,
    SchemeError,
    SchemeFunction,
    enumerate_scenarios,
    local_matrix,
    remark_scheme_3,
    remark_scheme_4,
    scenario_count,
    square_scheme,
    symbolic_check,
    symbolic_check_scenarios,
    verify,
)
from snc_ramify.snc_complex import SncComplex

from conftest import arrangement, brute_force_solve, complexes


@pytest.fixture
def rainbow_triangle():
    c = SncComplex.from_facets(3, "abc", [("a", "b", "c")])
    return ColoredComplex(c, {"a": 1, "b": 2, "c": 3})


def test_square_scheme_shapes():
    s1 = square_scheme(1)
    assert len(s1.functions) == 1
    assert s1.functions[0].class_coeffs == (1,) and s1.functions[0].aux_coeffs == (("E1^1", 1),)
    s2 = square_scheme(2)
    assert len(s2.functions) == 4
    f21 = next(f for f in s2.functions if f.name == "f2^1")
    assert f21.class_coeffs == (0, 1)
    s3 = square_scheme(3)
    assert len(s3.functions) == 9
    assert all(sum(f.class_coeffs) == 1 and len(f.aux_coeffs) == 1 for f in s3.functions)
    assert s3.aux_order == tuple(f"E{i}^{j}" for i in (1, 2, 3) for j in (1, 2, 3))


def test_remark_schemes(rainbow_triangle):
    s4 = remark_scheme_4(rainbow_triangle)
    assert s4.class_matrix == [[1, 1, 1], [1, 1, 0], [0, 1, 1], [1, 2, 1]]
    assert s4.aux_order == ("E1", "E2", "E3", "E4")
    assert [f.aux_coeffs for f in s4.functions] == [((f"E{k}", 1),) for k in range(1, 5)]
    s3 = remark_scheme_3(rainbow_triangle)
    assert s3.class_matrix == [[1, 3, 3], [1, 2, 1], [1, 1, 2]]
    assert s3.aux_order == ("E1", "E2", "E3") and len(s3.functions) == 3
    with pytest.raises(SchemeError):
        remark_scheme_3(4)
    with pytest.raises(SchemeError):
        remark_scheme_4(2)


def test_scheme_invariants():
    with pytest.raises(SchemeError):
        FunctionScheme("x", 1, (SchemeFunction("f", (1,), (("E", 1),)),), ())
    with pytest.raises(SchemeError):
        FunctionScheme("x", 1, (), ("E", "E"))


def test_enumerate_single_component():
    c = ColoredComplex(SncComplex.from_facets(1, "a"), {"a": 1})
    assert list(enumerate_scenarios(c, square_scheme(1))) == [Scenario(("a",), ())]


def test_enumerate_triangle(rainbow_triangle):
    scen = list(enumerate_scenarios(rainbow_triangle, remark_scheme_3()))
    assert [s.J for s in scen if s.T == ("a", "b", "c")] == [()]
    single = [s for s in scen if s.T == ("b",)]
    assert len(single) == 1 + 3 + 3 == sum(comb(3, k) for k in range(3))
    assert [s.J for s in single] == [(), ("E1",), ("E2",), ("E3",), ("E1", "E2"), ("E1", "E3"), ("E2", "E3")]
    assert len(scen) == scenario_count(rainbow_triangle, remark_scheme_3())
    sizes = [len(s.T) for s in scen]
    assert sizes == sorted(sizes)


def test_local_matrix_square():
    c = ColoredComplex(SncComplex.from_facets(1, "a"), {"a": 1})
    M, targets = local_matrix(Scenario(("a",), ()), square_scheme(1), c)
    assert M == [[1]] and targets == [[1]]


def test_local_matrix_remark4_triple(rainbow_triangle):
    M, targets = local_matrix(Scenario(("a", "b", "c"), ()), remark_scheme_4(), rainbow_triangle)
    assert [list(col) for col in zip(*M)] == [[1, 1, 1], [1, 1, 0], [0, 1, 1], [1, 2, 1]]
    # f1 / f3 defines D1
    assert [v % 7 for v in matvec(M, [1, 0, -1, 0])] == targets[0]
    assert solve_mod(M, targets[0], 7) is not None


def test_local_matrix_remark3_forces_halving(rainbow_triangle):
    M, targets = local_matrix(Scenario(("b",), ("E1", "E3")), remark_scheme_3(), rainbow_triangle)
    assert M == [[3, 2, 1], [1, 0, 0], [0, 0, 1]]
    # E1 and E3 rows force x1 = x3 = 0, leaving 2 * x2 = 1
    for r in range(2, 13):
        sols = [x for x in itertools.product(range(r), repeat=3)
                if all((a - b) % r == 0 for a, b in zip(matvec(M, x), targets[0]))]
        assert all(x[0] == 0 and x[2] == 0 and (2 * x[1] - 1) % r == 0 for x in sols)
        assert bool(sols) == (r % 2 == 1)


def test_local_matrix_rejects_bad_scenarios(rainbow_triangle):
    s3 = remark_scheme_3()
    with pytest.raises(InvalidScenarioError):
        local_matrix(Scenario(("a", "b"), ("E1", "E2")), s3, rainbow_triangle)
    with pytest.raises(InvalidScenarioError):
        local_matrix(Scenario((), ("E1",)), s3, rainbow_triangle)
    with pytest.raises(InvalidScenarioError):
        local_matrix(Scenario(("a",), ("E9",)), s3, rainbow_triangle)
    mono = ColoredComplex(rainbow_triangle.complex, {"a": 1, "b": 1, "c": 3})
    with pytest.raises(InvalidScenarioError):
        local_matrix(Scenario(("a", "b"), ()), s3, mono)


def test_remark3_verdicts(rainbow_triangle):
    s3 = remark_scheme_3()
    res = verify(rainbow_triangle, s3, 2)
    assert isinstance(res, Counterexample)
    assert res.scenario == Scenario(("b",), ("E1", "E3")) and res.target == "b"
    assert res.summary() == "FAILED scheme=remark3 r=2 scenario=T:{b} J:{E1,E3} target=b"
    assert brute_force_solve(res.matrix, [1, 0, 0], 2, 3) is None
    cert = verify(rainbow_triangle, s3, 5)
    assert isinstance(cert, Certificate)
    for s, v, x in cert.entries():
        M, _ = local_matrix(s, s3, rainbow_triangle)
        target = [int(u == v) for u in s.T] + [0] * len(s.J)
        assert all((a - b) % 5 == 0 for a, b in zip(matvec(M, x), target))


def test_verify_rejects_mismatched_dimension(rainbow_triangle):
    with pytest.raises(SchemeError):
        verify(rainbow_triangle, square_scheme(2), 3)


def test_square_certificates_are_indicators(rainbow_triangle):
    scheme = square_scheme(3)
    for r in range(2, 17):
        cert = verify(rainbow_triangle, scheme, r)
        assert isinstance(cert, Certificate)
        for s, v, x in cert.entries():
            assert sorted(x) == [0] * 8 + [1]
            (k,) = [k for k, e in enumerate(x) if e]
            f = scheme.functions[k]
            # the chosen f_i^j has i = color(v) and E_i^j not through the point
            assert f.class_coeffs[rainbow_triangle.color[v] - 1] == 1
            assert f.aux_coeffs[0][0] not in s.J


def test_remark4_matches_displayed_quotients(rainbow_triangle):
    """Certified solutions differ from the displayed quotients by kernel vectors."""
    s4 = remark_scheme_4()
    quotients = {
        # x on D_i and D_j only (codimension two) or on all three
        1: [1, 0, -1, 0],   # f1 / f3
        2: [-1, 1, 1, 0],   # f2 f3 / f1
        3: [1, -1, 0, 0],   # f1 / f2
    }
    two_component_avoiding = {
        # x on D1, D2 and on at most E1 or E4: D1 by f2/f3, D2 by f3
        ("E1",): {1: [0, 1, -1, 0], 2: [0, 0, 1, 0]},
        # x on D1, D2, E2: D1 by f1/f3, D2 by f3
        ("E2",): {1: [1, 0, -1, 0], 2: [0, 0, 1, 0]},
        # x on D1, D2, E3: D1 by f1^2/f4, D2 by f4/f1
        ("E3",): {1: [2, 0, 0, -1], 2: [-1, 0, 0, 1]},
    }
    cc = rainbow_triangle
    for r in range(2, 17):
        cert = verify(cc, s4, r)
        assert isinstance(cert, Certificate)
        for T in [("a", "b"), ("a", "c"), ("b", "c"), ("a", "b", "c")]:
            s = Scenario(T, ())
            M, _ = local_matrix(s, s4, cc)
            for v in T:
                x = cert.solution(s, v)
                diff = [a - b for a, b in zip(x, quotients[cc.color[v]])]
                assert all(e % r == 0 for e in matvec(M, diff))
        for J, formulas in two_component_avoiding.items():
            s = Scenario(("a", "b"), J)
            M, _ = local_matrix(s, s4, cc)
            for v in ("a", "b"):
                x = cert.solution(s, v)
                diff = [a - b for a, b in zip(x, formulas[cc.color[v]])]
                assert all(e % r == 0 for e in matvec(M, diff))


def test_symbolic_bridge_on_small_certificates(rainbow_triangle):
    rng = random.Random(3)
    for scheme in (square_scheme(3), remark_scheme_4(), remark_scheme_3()):
        for r in (5, 7, 11):
            cert = verify(rainbow_triangle, scheme, r)
            total, ok = symbolic_check_scenarios(cert, rng)
            assert total == cert.scenarios and ok == total
            total, ok = symbolic_check(cert, rng)
            assert ok == total > 0


def _n3_colored(seed):
    c = arrangement(3, random.Random(seed).randint(2, 9), seed, 0.6)
    return color(c)[0]


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_remark3_depends_only_on_gcd_with_six(seed):
    cc = _n3_colored(seed)
    s3 = remark_scheme_3()
    for r in range(2, 13):
        res = verify(cc, s3, r)
        assert isinstance(res, Certificate) == (gcd(r, 6) == 1)


def test_lone_component_is_always_certified():
    cc = ColoredComplex(SncComplex.from_facets(3, "a"), {"a": 1})
    assert all(isinstance(verify(cc, remark_scheme_3(), r), Certificate) for r in range(2, 13))


@settings(max_examples=30, deadline=None)
@given(complexes(dims=(1, 2, 3, 4), max_vertices=7), st.integers(2, 16))
def test_square_scheme_always_certifies(c, r):
    cc, _ = color(c)
    assert isinstance(verify(cc, square_scheme(cc), r), Certificate)


def test_unimodular_minor_implies_solvable():
    """If some maximal minor is prime to r, the system is onto mod r."""
    cc = ColoredComplex(SncComplex.from_facets(3, "abc", [("a", "b", "c")]), {"a": 1, "b": 2, "c": 3})
    for scheme in (remark_scheme_3(), remark_scheme_4()):
        for s in enumerate_scenarios(cc, scheme):
            M, targets = local_matrix(s, scheme, cc)
            k = len(M)
            minors = [
                det([[row[j] for j in cols] for row in M])
                for cols in itertools.combinations(range(len(M[0])), k)
            ]
            for r in range(2, 17):
                if any(gcd(m, r) == 1 for m in minors):
                    assert all(solve_mod(M, t, r) is not None for t in targets)


def test_verify_order_independent_of_face_order(rainbow_triangle):
    # the verdict does not depend on vertex order, only the reported counterexample may
    c = rainbow_triangle.complex
    flipped = SncComplex(3, tuple(reversed(c.vertices)), c.faces)
    cc2 = ColoredComplex(flipped, dict(rainbow_triangle.color))
    for r in range(2, 13):
        a = verify(rainbow_triangle, remark_scheme_3(), r)
        b = verify(cc2, remark_scheme_3(), r)
        assert type(a) is type(b)
