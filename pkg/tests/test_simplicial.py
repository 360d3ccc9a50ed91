"""Polynomial simplex forms, Stokes, Thom-Sullivan, Godement."""

from fractions import Fraction
from itertools import combinations

import pytest

from lgck.exactalg import MultiPoly
from lgck.forms import DiffForm
from lgck.simplicial import (
    CosimplicialModule,
    FinitePosetSheaf,
    PolyForm,
    constant_cosimplicial,
    de_rham_triangle_check,
    godement,
    integrate_simplex,
    normalized_complex,
    omega_pullback,
    order_complex_cohomology,
    simplex_variables,
    th_complex,
    tk_point_check,
    unit_element,
    whitney_extension,
    whitney_form,
)


def random_polyform(rng, n, degree):
    names = simplex_variables(n)
    terms = {}
    for idx in combinations(range(n), degree):
        poly = MultiPoly.zero(names)
        for _ in range(rng.randint(0, 2)):
            exp = tuple(rng.randint(0, 2) for _ in names)
            poly = poly + MultiPoly.monomial(names, exp,
                                             Fraction(rng.randint(-3, 3)))
        if not poly.is_zero():
            terms[idx] = poly
    return PolyForm(n, DiffForm(names, terms))


# -- the simplicial algebra Omega[n] -------------------------------------------

def test_pullback_face_to_vertex():
    # [0] -> [1] hitting vertex 0: t0 -> 1, t1 -> 0
    names = simplex_variables(1)
    omega = PolyForm(1, DiffForm(names, {(): MultiPoly.parse("t1", names)}))
    pulled = omega_pullback((0,), omega)
    assert pulled.form.is_zero()
    omega0 = PolyForm(1, DiffForm(names, {(): MultiPoly.parse("1 - t1", names)}))
    assert omega_pullback((0,), omega0).form == DiffForm.const((), 1)


def test_pullback_degeneracy_sums_coordinates():
    # [1] -> [0]: t0 -> t0 + t1 = 1
    omega = PolyForm(0, DiffForm.const((), 1))
    pulled = omega_pullback((0, 0), omega)
    assert pulled.form == DiffForm.const(simplex_variables(1), 1)


def test_pullback_identity():
    names = simplex_variables(2)
    omega = PolyForm(2, DiffForm(names, {(0,): MultiPoly.parse("t1*t2", names)}))
    assert omega_pullback((0, 1, 2), omega) == omega


def test_pullback_functorial(rng):
    """Omega(g compose f) = Omega(f) after Omega(g) on random forms."""
    for _ in range(10):
        n, m, k = 1, 2, 3
        f = tuple(sorted(rng.randint(0, m) for _ in range(n + 1)))
        g = tuple(sorted(rng.randint(0, k) for _ in range(m + 1)))
        comp = tuple(g[v] for v in f)
        omega = random_polyform(rng, k, rng.randint(0, 1))
        via = omega_pullback(f, omega_pullback(g, omega))
        direct = omega_pullback(comp, omega)
        assert via == direct


def test_integration_formulas():
    names = simplex_variables(1)
    t1dt1 = PolyForm(1, DiffForm(names, {(0,): MultiPoly.parse("t1", names)}))
    assert integrate_simplex(t1dt1) == Fraction(1, 2)
    for n in range(1, 5):
        vol = PolyForm(n, DiffForm(
            simplex_variables(n),
            {tuple(range(n)): MultiPoly.const(simplex_variables(n), 1)}))
        assert integrate_simplex(vol) == Fraction(1, __import__("math").factorial(n))
    const = PolyForm(0, DiffForm.const((), Fraction(7, 2)))
    assert integrate_simplex(const) == Fraction(7, 2)


def test_integration_orientation():
    names = simplex_variables(2)
    one = MultiPoly.const(names, 1)
    straight = PolyForm(2, DiffForm(names, {(0, 1): one}))
    flipped = PolyForm(2, DiffForm(names, {(0, 1): -one}))
    assert integrate_simplex(straight) == -integrate_simplex(flipped)


def test_whitney_form_normalization():
    w01 = whitney_form((0, 1), 1)
    assert integrate_simplex(w01) == 1
    w0 = whitney_form((0,), 1)
    assert w0.form.coefficient(()) == MultiPoly.parse("1 - t1", simplex_variables(1))
    # restriction to a face missing an index kills the form
    w12 = whitney_form((1, 2), 2)
    face0 = omega_pullback((0, 1), w12)  # image {0,1} misses 2
    assert face0.form.is_zero()
    # whitney forms integrate to 1 over their own face
    w = whitney_form((0, 2), 3)
    to_face = omega_pullback((0, 2), w)
    assert integrate_simplex(to_face) == 1


def test_stokes_random_forms(rng):
    """int_D d(omega) = sum (-1)^i int_{face i} omega, 100 random forms."""
    checked = 0
    while checked < 100:
        n = rng.randint(1, 4)
        deg = rng.randint(0, min(n - 1, 4))
        omega = random_polyform(rng, n, deg)
        if deg != n - 1:
            continue  # integrands must be top-degree on the faces
        lhs = integrate_simplex(omega.d())
        rhs = Fraction(0)
        for i in range(n + 1):
            face = tuple(v for v in range(n + 1) if v != i)
            pulled = omega_pullback(face, omega)
            rhs += (-1) ** i * integrate_simplex(pulled)
        assert lhs == rhs
        checked += 1


# -- cosimplicial modules -------------------------------------------------------

def test_constant_normalization():
    cs = constant_cosimplicial(3, 3)
    norm = normalized_complex(cs)
    assert norm.dims == [3, 0, 0, 0]
    assert norm.cohomology_ranks() == [3, 0, 0, 0]


def test_cosimplicial_identities_enforced():
    ident = [[Fraction(1)]]
    swapped = [[Fraction(-1)]]
    cofaces = {(1, 0): ident, (1, 1): swapped}
    codegens = {(0, 0): ident}
    with pytest.raises(ValueError):
        CosimplicialModule([1, 1], cofaces, codegens)


def test_map_into_functorial(rng):
    sheaf = FinitePosetSheaf(["c", "o"], [("c", "o")], [1, 1],
                             {("c", "o"): [[1]]})
    cs = godement(sheaf, 3).module
    from lgck.exactalg.linalg import mat_mul
    for _ in range(10):
        f = tuple(sorted(rng.randint(0, 2) for _ in range(2)))
        g = tuple(sorted(rng.randint(0, 3) for _ in range(3)))
        comp = tuple(g[v] for v in f)
        lhs = cs.map_into(comp, 3)
        rhs = mat_mul(cs.map_into(g, 3), cs.map_into(f, 2))
        assert lhs == rhs


def test_normalized_d_squared_zero():
    sheaf = FinitePosetSheaf(["a", "b", "top"], [("a", "top"), ("b", "top")],
                             [1, 1, 1],
                             {("a", "top"): [[1]], ("b", "top"): [[1]]})
    cs = godement(sheaf, 3).module
    norm = normalized_complex(cs)
    from lgck.exactalg.linalg import mat_mul
    for d in range(len(norm.differentials) - 1):
        a, b = norm.differentials[d], norm.differentials[d + 1]
        if a and b:
            prod = mat_mul(b, a)
            assert all(all(x == 0 for x in row) for row in prod)


# -- godement ----------------------------------------------------------------------

def _constant_sheaf(points, pairs):
    mats = {p: [[1]] for p in pairs}
    return FinitePosetSheaf(points, pairs, [1] * len(points), mats)


POSET_CORPUS = [
    ("point", ["pt"], []),
    ("sierpinski", ["c", "o"], [("c", "o")]),
    ("vee", ["a", "b", "top"], [("a", "top"), ("b", "top")]),
    ("chain3", ["a", "b", "c"], [("a", "b"), ("b", "c")]),
    ("circle", ["a", "b", "c", "d"],
     [("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")]),
]


def test_godement_level_zero_is_product_of_stalks():
    sheaf = _constant_sheaf(["c", "o"], [("c", "o")])
    res = godement(sheaf, 2)
    assert res.module.dims[0] == 2  # product of the two stalks
    # restriction to the open point is surjective
    assert res.flasque(0)


def test_godement_flasque_levels():
    for name, points, pairs in POSET_CORPUS:
        sheaf = _constant_sheaf(points, pairs)
        res = godement(sheaf, 3)
        for n in range(4):
            assert res.flasque(n), (name, n)


def test_skyscraper_cohomology():
    sky = FinitePosetSheaf(["closed", "open"], [("closed", "open")], [1, 0], {})
    res = godement(sky, 3)
    rep = de_rham_triangle_check(res, oracle_ranks=[1, 0, 0])
    assert rep.passed
    assert sky.global_sections_dim() == 1


def test_triangle_on_poset_corpus():
    """int after Th(iota) equals N(iota) and cohomology matches the order
    complex, on five sheaves."""
    for name, points, pairs in POSET_CORPUS:
        sheaf = _constant_sheaf(points, pairs)
        oracle = order_complex_cohomology(sheaf, 2)
        res = godement(sheaf, 3)
        rep = de_rham_triangle_check(res, oracle_ranks=oracle)
        assert rep.passed, (name, rep.to_jsonable())


def test_circle_poset_has_h1():
    sheaf = _constant_sheaf(["a", "b", "c", "d"],
                            [("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")])
    assert order_complex_cohomology(sheaf, 2) == [1, 1, 0]


def test_higher_rank_stalks_with_projection():
    """A rank-2 stalk over a rank-1 stalk: global sections are the big
    stalk, and the resolution is acyclic above degree zero (the poset has
    an initial object, so the section functor is exact)."""
    sheaf = FinitePosetSheaf(["base", "top"], [("base", "top")], [2, 1],
                             {("base", "top"): [[1, 1]]})
    assert len(sheaf.sections(range(2))) == 2
    res = godement(sheaf, 3)
    for n in range(4):
        assert res.flasque(n)
    rep = de_rham_triangle_check(res, oracle_ranks=[2, 0, 0])
    assert rep.passed


def test_missing_restriction_rejected():
    with pytest.raises(ValueError, match="missing restriction"):
        FinitePosetSheaf(["a", "b"], [("a", "b")], [1, 1], {})


def test_nonfunctorial_restrictions_rejected():
    with pytest.raises(ValueError, match="functorial"):
        FinitePosetSheaf(
            ["a", "b", "c"], [("a", "b"), ("b", "c"), ("a", "c")], [1, 1, 1],
            {("a", "b"): [[1]], ("b", "c"): [[1]], ("a", "c"): [[2]]})


# -- thom-sullivan -----------------------------------------------------------------

def test_unit_element_closed_and_compatible():
    cs = constant_cosimplicial(2, 3, algebra=True)
    u = unit_element(cs)
    assert u.d().is_zero()
    assert u.compatible(generators_only=False)


def test_whitney_extension_exhaustive_compatibility():
    sheaf = _constant_sheaf(["c", "o"], [("c", "o")])
    cs = godement(sheaf, 2).module
    norm = normalized_complex(cs)
    for d in range(3):
        for vec in norm.bases[d]:
            el = whitney_extension(cs, d, vec)
            assert el.compatible(generators_only=False)


def test_th_product_closure_random(rng):
    """Products of Thom-Sullivan elements stay compatible (cdga closure),
    and the product is graded-commutative."""
    sheaf = _constant_sheaf(["a", "b", "top"], [("a", "top"), ("b", "top")])
    cs = godement(sheaf, 3).module
    tc = th_complex(cs, 3)
    pool = [el for degree in tc.basis for el in degree]
    for _ in range(6):
        e1, e2 = rng.choice(pool), rng.choice(pool)
        prod = e1.multiply(e2)
        assert prod.compatible(generators_only=True)
        swapped = e2.multiply(e1)
        sign = (-1) ** (e1.degree * e2.degree)
        flipped = swapped.scale(Fraction(sign))
        assert prod == flipped


def test_integration_of_products_lands_in_normalized(rng):
    """Products leave the Whitney span but integration still lands in the
    normalized subcomplex (codegeneracy kernels)."""
    sheaf = _constant_sheaf(["c", "o"], [("c", "o")])
    cs = godement(sheaf, 2).module
    tc = th_complex(cs, 2)
    pool = [el for degree in tc.basis for el in degree]
    for _ in range(5):
        e1, e2 = rng.choice(pool), rng.choice(pool)
        prod = e1.multiply(e2)
        d = prod.degree
        if d > cs.top_level:
            continue
        vec = prod.integrate()
        for i in range(d):
            out = cs.apply(cs.codegens[(d - 1, i)], vec)
            assert not any(out)


def test_th_product_associative(rng):
    sheaf = _constant_sheaf(["c", "o"], [("c", "o")])
    cs = godement(sheaf, 2).module
    tc = th_complex(cs, 2)
    pool = [el for degree in tc.basis for el in degree]
    for _ in range(4):
        a, b, c = (rng.choice(pool) for _ in range(3))
        assert a.multiply(b).multiply(c) == a.multiply(b.multiply(c))


def test_integration_is_chain_map(rng):
    """d_N(int c) = int(d c) via Stokes, on Whitney-span elements."""
    sheaf = _constant_sheaf(["a", "b", "top"], [("a", "top"), ("b", "top")])
    res = godement(sheaf, 3)
    rep = de_rham_triangle_check(res)
    assert rep.whitney_chain_map and rep.integration_left_inverse


def test_th_complex_requires_degree_bound():
    cs = constant_cosimplicial(1, 3)
    with pytest.raises(ValueError):
        th_complex(cs, 2)


# -- the one-point TK comparison -----------------------------------------------------

def test_tk_point_trivial_rank_one():
    z = MultiPoly.zero(("x",))
    result = tk_point_check([z], [z])
    assert result["quasi_isomorphism"]
    assert result["resolution_ranks"] == [1, 0]


def test_tk_point_node():
    x = MultiPoly.parse("x", ("x", "y"))
    y = MultiPoly.parse("y", ("x", "y"))
    result = tk_point_check([y], [x])
    assert result["quasi_isomorphism"]
    assert result["koszul_ranks"] == [1, 1]


def test_tk_point_rejects_nonvanishing_potential():
    one = MultiPoly.const(("x",), 1)
    with pytest.raises(ValueError):
        tk_point_check([one], [one])
