"""Matrix factorizations: Koszul data, tensor products, supertraces,
Chern characters, Borel-Serre, the splitting bound, and the unit."""

from fractions import Fraction

import pytest

from lgck.exactalg import Cyclo, MultiPoly, jacobian_ideal
from lgck.forms import DiffForm, d_of_poly
from lgck.matfact import (
    FactorizationError,
    Factorization,
    FormEndomorphism,
    atiyah,
    borel_serre_check,
    cdga_element_from_covector,
    cdga_factorization,
    chern_char,
    chern_character_form,
    homotopy_iso,
    koszul,
    koszul_cdga,
    splitting_degree_check,
    supertrace,
    tensor,
    todd_chern,
    twisted_class,
    unit_class,
)


def poly(text, variables=None):
    return MultiPoly.parse(text, variables)


def random_poly(rng, names, max_deg=2, terms=2):
    out = MultiPoly.zero(names)
    for _ in range(terms):
        exp = tuple(rng.randint(0, max_deg) for _ in names)
        out = out + MultiPoly.monomial(names, exp, Fraction(rng.randint(-3, 3)))
    return out


# -- construction and delta^2 = W ---------------------------------------------

def test_rank_one_koszul_blocks():
    f = koszul([poly("y")], [poly("x")])
    assert f.potential == poly("x*y", f.variables)
    assert (f.even_rank, f.odd_rank) == (1, 1)
    assert f.block_a == [[poly("y", f.variables)]]
    assert f.block_b == [[poly("x", f.variables)]]


def test_rank_two_koszul_squares():
    names = ("x", "y")
    f = koszul([poly("x", names), poly("y", names)],
               [poly("x", names), poly("y", names)])
    assert f.potential == poly("x^2 + y^2", names)
    assert (f.even_rank, f.odd_rank) == (2, 2)


def test_inconsistent_blocks_rejected():
    names = ("x", "y")
    one = MultiPoly.const(names, 1)
    with pytest.raises(FactorizationError):
        Factorization(names, [[poly("x", names)]], [[poly("y", names)]],
                      poly("x^2", names))
    # sanity: the honest data passes
    Factorization(names, [[poly("x", names)]], [[poly("y", names)]],
                  poly("x*y", names))


def test_random_koszul_and_tensor_square(rng):
    """delta^2 = W on 200 random Koszul/tensor constructions (checked
    eagerly by the constructor; a silent pass here is the assertion)."""
    built = 0
    names = ("x", "y", "z")
    while built < 200:
        r = rng.randint(1, 2)
        tau = [random_poly(rng, names) for _ in range(r)]
        sigma = [random_poly(rng, names) for _ in range(r)]
        f = koszul(tau, sigma)
        built += 1
        if built % 3 == 0:
            g = koszul([random_poly(rng, names)], [random_poly(rng, names)])
            tensor(f, g)
            built += 1
    assert built >= 200


def test_tensor_unit_factor():
    f = koszul([poly("y")], [poly("x")])
    unit = Factorization(f.variables,
                         [], [[] for _ in range(1)],
                         MultiPoly.zero(f.variables))
    t = tensor(f, unit)
    assert (t.even_rank, t.odd_rank) == (f.even_rank, f.odd_rank)
    assert t.potential == f.potential


def test_tensor_external_clash():
    f = koszul([poly("y")], [poly("x")])
    with pytest.raises(FactorizationError):
        tensor(f, f, external=True)


def test_tensor_associative_classes(rng):
    names1, names2, names3 = ("a", "b"), ("c", "d"), ("e", "f")
    f1 = koszul([poly("b", names1)], [poly("a", names1)])
    f2 = koszul([poly("d", names2)], [poly("c", names2)])
    f3 = koszul([poly("f", names3)], [poly("e", names3)])
    left = tensor(tensor(f1, f2), f3)
    right = tensor(f1, tensor(f2, f3))
    assert left.potential == right.potential
    assert chern_char(left).jac_class == chern_char(right).jac_class


def _tensor_basis_order(fa, fb):
    """Global basis of tensor(fa, fb) as (i, j) pairs, in the order the
    constructor uses: evens first, odds second, each sorted by (i, j)."""
    pa, pb = fa.parities(), fb.parities()
    pairs = [(i, j) for i in range(fa.total_rank) for j in range(fb.total_rank)]
    even = [p for p in pairs if (pa[p[0]] + pb[p[1]]) % 2 == 0]
    odd = [p for p in pairs if (pa[p[0]] + pb[p[1]]) % 2 == 1]
    return even + odd


def test_tensor_associativity_matrix_identity(rng):
    """The canonical relabeling ((i,j),k) <-> (i,(j,k)) intertwines the
    differentials of the two iterated tensor products exactly (graded
    tensor associativity carries no sign)."""
    for _ in range(3):
        def rand1(names):
            t, s = random_transverse_pair(rng, names)
            return koszul([t], [s])
        f1, f2, f3 = rand1(("a", "b")), rand1(("c", "d")), rand1(("e", "f"))
        t12 = tensor(f1, f2)
        left = tensor(t12, f3)
        t23 = tensor(f2, f3)
        right = tensor(f1, t23)

        order12 = _tensor_basis_order(f1, f2)
        order_left = _tensor_basis_order(t12, f3)     # ((i,j) slot, k)
        order23 = _tensor_basis_order(f2, f3)
        order_right = _tensor_basis_order(f1, t23)    # (i, (j,k) slot)
        # flatten both to (i, j, k)
        flat_left = [order12[ij] + (k,) for (ij, k) in order_left]
        flat_right = [(i,) + order23[jk] for (i, jk) in order_right]
        perm = [flat_left.index(triple) for triple in flat_right]

        dl = left.delta_matrix()
        dr = right.delta_matrix()
        n = len(perm)
        for r in range(n):
            for c in range(n):
                assert dr[r][c] == dl[perm[r]][perm[c]]


# -- supertrace ------------------------------------------------------------------

def test_supertrace_identities():
    names = ("x", "y")
    ident_11 = FormEndomorphism.identity(names, (0, 1))
    assert supertrace(ident_11).is_zero()
    ident_21 = FormEndomorphism.identity(names, (0, 0, 1))
    assert supertrace(ident_21) == DiffForm.const(names, 1)
    # odd endomorphisms have zero supertrace
    f = koszul([poly("y", names)], [poly("x", names)])
    at = atiyah(f)
    assert supertrace(at).is_zero()


def test_supertrace_supercommutation(rng):
    """str(E1 E2) = (-1)^{|E1||E2|} str(E2 E1) for homogeneous E's."""
    names = ("x", "y", "z")
    parities = (0, 1)

    def random_homogeneous(endo_parity, form_degree):
        n = len(parities)
        entries = [[DiffForm.zero(names) for _ in range(n)] for _ in range(n)]
        for i in range(n):
            for j in range(n):
                if (parities[i] + parities[j]) % 2 != endo_parity:
                    continue
                for idx in _index_tuples(len(names), form_degree):
                    coeff = MultiPoly.const(names, Fraction(rng.randint(-2, 2)))
                    entries[i][j] = entries[i][j] + DiffForm(names, {idx: coeff})
        return FormEndomorphism(names, parities, entries)

    for _ in range(20):
        p1, d1 = rng.randint(0, 1), rng.randint(0, 2)
        p2, d2 = rng.randint(0, 1), rng.randint(0, 2)
        e1 = random_homogeneous(p1, d1)
        e2 = random_homogeneous(p2, d2)
        lhs = supertrace(e1.compose(e2))
        rhs = supertrace(e2.compose(e1))
        sign = (-1) ** ((p1 + d1) * (p2 + d2))
        assert lhs == (rhs if sign > 0 else DiffForm.zero(names) - rhs)


def _index_tuples(n, degree):
    from itertools import combinations
    return list(combinations(range(n), degree))


# -- Atiyah class and Chern character -----------------------------------------------

def test_atiyah_entrywise_derivative():
    f = koszul([poly("y")], [poly("x")])
    at = atiyah(f)
    assert at.entries[0][1] == d_of_poly(poly("x", f.variables))
    assert at.entries[1][0] == d_of_poly(poly("y", f.variables))


def test_atiyah_constant_differential():
    names = ("x",)
    one = MultiPoly.const(names, 1)
    f = Factorization(names, [[one]], [[MultiPoly.zero(names)]],
                      MultiPoly.zero(names))
    at = atiyah(f)
    assert all(e.is_zero() for row in at.entries for e in row)


def test_atiyah_translation_invariance():
    # d commutes with x -> x + c
    f = koszul([poly("y^2 + y")], [poly("x")])
    at = atiyah(f)
    shifted = koszul([poly("y^2 + y").substitute(
        {"y": poly("y") + MultiPoly.const(("x", "y"), 1)})], [poly("x")])
    at2 = atiyah(shifted)
    sub = {"y": poly("y", f.variables) + MultiPoly.const(f.variables, 1)}
    assert at2.entries[1][0] == at.entries[1][0].substitute_poly(sub)


GOLDEN_RANK1_CLASS = -1  # pinned by the brute-force oracle below


def oracle_rank1_chern_form():
    """Independent 2x2 supertrace computation in the superalgebra
    End(Q^{1|1}) (x) forms, with explicit Koszul commutation."""
    # elements: dict[(i, j, dx-index-tuple)] -> Fraction
    # E_{ij} parity = i + j mod 2; (w E_ij)(k E_kl) = delta_jk (-1)^{(i+j)|k|} w^k E_il
    def mult(a, b):
        out = {}
        for (i, j, w), ca in a.items():
            for (k, l, v), cb in b.items():
                if j != k or set(w) & set(v):
                    continue
                sign = (-1) ** (((i + j) % 2) * len(v))
                merged, wedge_sign = _merge(w, v)
                key = (i, l, merged)
                out[key] = out.get(key, Fraction(0)) + sign * wedge_sign * ca * cb
        return {k: c for k, c in out.items() if c}

    def _merge(w, v):
        inv = sum(1 for a in w for b in v if a > b)
        return tuple(sorted(w + v)), (-1) ** inv

    # delta for {tau=(y), sigma=(x)} over ring (x, y): A = [y] at (1,0), B = [x] at (0,1)
    # d(delta): dy at (1,0), dx at (0,1); dx has index 0, dy index 1
    d_delta = {(0, 1, (0,)): Fraction(1), (1, 0, (1,)): Fraction(1)}
    total = {(0, 0, ()): Fraction(1), (1, 1, ()): Fraction(1)}  # identity
    acc = dict(total)
    power = total
    fact = 1
    for k in range(1, 3):
        power = mult(power, d_delta)
        fact *= k
        for key, c in power.items():
            acc[key] = acc.get(key, Fraction(0)) + c / fact
    # supertrace: + (0,0) entries, - (1,1) entries
    str_form = {}
    for (i, j, w), c in acc.items():
        if i == j:
            str_form[w] = str_form.get(w, Fraction(0)) + (c if i == 0 else -c)
    return {k: c for k, c in str_form.items() if c}


def test_rank1_golden_value_pinned_by_oracle():
    oracle = oracle_rank1_chern_form()
    assert oracle == {(0, 1): Fraction(GOLDEN_RANK1_CLASS)}  # -dx^dy
    f = koszul([poly("y")], [poly("x")])
    ch = chern_char(f)
    assert ch.twist == 1
    assert ch.jac_class == MultiPoly.const(f.variables, GOLDEN_RANK1_CLASS)
    top = ch.form.top_coefficient()
    assert top == MultiPoly.const(f.variables, GOLDEN_RANK1_CLASS)


def test_chern_of_trivial_rank_1_0():
    names = ("x",)
    f = Factorization(names, [], [[]], MultiPoly.zero(names))
    ch = chern_char(f)
    assert ch.form == DiffForm.const(names, 1)


def test_chern_is_cocycle_nontrivially():
    # rank-1 Koszul in 4 variables has a mid-degree component annihilated by dW
    names = ("x", "y", "z", "w")
    f = koszul([poly("x*y", names)], [poly("z*w", names)])
    form = chern_character_form(f)
    assert 2 in form.form_degrees()
    assert d_of_poly(f.potential).wedge(form).is_zero()


def random_transverse_pair(rng, names):
    """tau, sigma vanishing at 0 whose product has an isolated singularity:
    independent linear forms, sometimes corrected by a quadratic term."""
    while True:
        coeffs = [rng.randint(-3, 3) for _ in range(4)]
        if coeffs[0] * coeffs[3] - coeffs[1] * coeffs[2] != 0:
            break
    x = MultiPoly.var(names, names[0])
    y = MultiPoly.var(names, names[1])
    tau = x * coeffs[0] + y * coeffs[1]
    sigma = x * coeffs[2] + y * coeffs[3]
    if rng.random() < 0.4:
        tau = tau + MultiPoly.monomial(names, (2, 0), rng.randint(-2, 2))
    return tau, sigma


def test_chern_multiplicativity_pairs(rng):
    """ch(F1 (x) F2) = ch(F1) ^ ch(F2) as twisted classes, 20 Koszul pairs."""
    effective = 0
    while effective < 20:
        a, b = random_transverse_pair(rng, ("x", "y"))
        c, d = random_transverse_pair(rng, ("z", "w"))
        f1, f2 = koszul([a], [b]), koszul([c], [d])
        t = tensor(f1, f2)
        w = t.potential
        if any(jacobian_ideal(p).quotient_basis() is None
               for p in (f1.potential, f2.potential, w)):
            continue
        cht = chern_char(t)
        ch1, ch2 = chern_char(f1), chern_char(f2)
        ideal = jacobian_ideal(w)
        prod = ideal.normal_form(
            ch1.jac_class.with_variables(t.variables)
            * ch2.jac_class.with_variables(t.variables))
        assert cht.jac_class == prod
        assert cht.twist == ch1.twist + ch2.twist
        effective += 1
    assert effective == 20


def test_todd_chern_trivial_bundle():
    f = koszul([poly("y")], [poly("x")])
    td = todd_chern(f)
    ch = chern_char(f)
    assert td.jac_class == ch.jac_class
    assert td.twist == ch.twist + 1


def test_todd_chern_rank_required():
    names = ("x",)
    f = Factorization(names, [], [[]], MultiPoly.zero(names))
    with pytest.raises(ValueError):
        todd_chern(f)
    assert todd_chern(f, rank=0).twist == 0


def test_borel_serre():
    assert borel_serre_check(1, 4)
    assert borel_serre_check(2, 6)
    assert borel_serre_check(3, 6)
    assert borel_serre_check(0, 4)  # degree-0: 0 = 0


def test_splitting_degree_bound(rng):
    # rank 1 and rank 2 Koszuls over enough variables
    names = ("x", "y", "z", "w")
    for _ in range(8):
        tau = [random_poly(rng, names, max_deg=1, terms=2) for _ in range(2)]
        sigma = [random_poly(rng, names, max_deg=1, terms=2) for _ in range(2)]
        f = koszul(tau, sigma)
        assert splitting_degree_check(f)
    f = koszul([poly("y")], [poly("x")])
    assert splitting_degree_check(f)
    empty = koszul([], [])
    assert splitting_degree_check(empty)


# -- twisted classes -----------------------------------------------------------------

def test_twisted_class_of_volume_form():
    names = ("x", "y")
    w = poly("x*y", names)
    form = DiffForm(names, {(0, 1): MultiPoly.const(names, 1)})
    cls = twisted_class(form, w)
    assert cls.jac_class == MultiPoly.const(names, 1)


def test_twisted_class_exact_forms_die():
    names = ("x", "y")
    w = poly("x*y", names)
    alpha = DiffForm(names, {(0,): poly("y", names), (1,): poly("x^2", names)})
    form = d_of_poly(w).wedge(alpha)
    cls = twisted_class(form, w)
    assert cls.jac_class.is_zero()


def test_twisted_class_rejects_non_cocycle():
    names = ("x", "y")
    w = poly("x^2 + y^2", names)
    form = DiffForm(names, {(0,): MultiPoly.const(names, 1)})
    with pytest.raises(FactorizationError):
        twisted_class(form, w)


def test_twisted_class_quintic_socle():
    names = tuple(f"x{i}" for i in range(1, 6))
    w = poly("+".join(f"x{i}^5" for i in range(1, 6)), names)
    socle = MultiPoly.monomial(names, (3, 3, 3, 3, 3), 1)
    form = DiffForm(names, {tuple(range(5)): socle})
    cls = twisted_class(form, w)
    assert not cls.jac_class.is_zero()


# -- cdga machinery ---------------------------------------------------------------

def test_cdga_fold_equals_koszul():
    names = ("x", "y")
    sigma = [poly("x", names), poly("y", names)]
    tau = [poly("x", names), poly("y", names)]
    alg = koszul_cdga(sigma)
    a = cdga_element_from_covector(alg, tau)
    folded = cdga_factorization(alg, a)
    direct = koszul(tau, sigma)
    assert folded.potential == direct.potential
    assert (folded.even_rank, folded.odd_rank) == (direct.even_rank, direct.odd_rank)


def test_cdga_zero_twist_folds_complex():
    alg = koszul_cdga([MultiPoly.zero(("x",)), MultiPoly.zero(("x",))])
    folded = cdga_factorization(alg, alg.zero_element())
    assert folded.potential.is_zero()


def test_cdga_rejects_bad_twist():
    names = ("x", "y")
    alg = koszul_cdga([poly("x", names), poly("y", names)])
    # a of degree -1 with da not a multiple of 1 is impossible in the Koszul
    # cdga, so aim at the degree check instead
    h_idx = [i for i, d in enumerate(alg.degrees) if d == -2][0]
    bad = {h_idx: MultiPoly.const(names, 1)}
    with pytest.raises(FactorizationError):
        cdga_factorization(alg, bad)


def test_homotopy_iso_identity():
    names = ("x", "y")
    alg = koszul_cdga([poly("x", names), poly("y", names)])
    a = cdga_element_from_covector(alg, [poly("x", names), poly("y", names)])
    m = homotopy_iso(alg, a, a, alg.zero_element())
    n = alg.dimension
    ident = [[MultiPoly.const(names, int(i == j)) for j in range(n)]
             for i in range(n)]
    assert m == ident


def test_homotopy_iso_rank2(rng):
    names = ("x", "y")
    alg = koszul_cdga([poly("x", names), poly("y", names)])
    a = cdga_element_from_covector(alg, [poly("x", names), poly("y", names)])
    h_idx = [i for i, d in enumerate(alg.degrees) if d == -2][0]
    for _ in range(5):
        g = random_poly(rng, names, max_deg=2, terms=2)
        h = {h_idx: g} if not g.is_zero() else {}
        a2 = alg.add(a, alg.apply_diff(h))
        homotopy_iso(alg, a, a2, h)  # raises on failure


def test_homotopy_iso_hypothesis_checked():
    names = ("x", "y")
    alg = koszul_cdga([poly("x", names), poly("y", names)])
    a = cdga_element_from_covector(alg, [poly("x", names), poly("y", names)])
    a2 = alg.add(a, cdga_element_from_covector(
        alg, [poly("y", names), MultiPoly.zero(names)]))
    with pytest.raises(FactorizationError):
        homotopy_iso(alg, a, a2, alg.zero_element())


# -- the unit -----------------------------------------------------------------------

def test_unit_quintic_is_narrow_generator(quintic_lg):
    u = unit_class(quintic_lg)
    assert u.sector_phases == (Fraction(1, 5),) * 5
    assert list(u.coefficients) == [Cyclo.one()]
    assert u.degree == 0
    assert u.route == "narrow generator"


def test_unit_requires_charge_bounds():
    from lgck.glsm import GlsmModel
    model = GlsmModel.from_dict({
        "variables": ["x", "y"],
        "torus_weights": [[6, 2]],
        "finite_generators": [],
        "chi": [4],
        "nu": [0],
        "r_charges": [6, 2],
        "d_w": 4,
        "potential": "x*y + y^2",  # weights: 6+2=8? just need the error first
    })
    with pytest.raises(ValueError, match="x"):
        unit_class(model)


def test_unit_narrow_across_corpus():
    from corpus import corpus
    for name, model in corpus():
        u = unit_class(model)
        assert u.degree == 0, name  # the unit is always degree 0


def test_unit_geometric_regime_rejected():
    """When the J-fixed space is positive-dimensional with vanishing
    restricted potential, the unit lies outside the affine computation."""
    from conftest import make_quintic_glsm
    model = make_quintic_glsm([-5, 1], [1, 1, 1, 1, 1, 0], 5)
    with pytest.raises(ValueError, match="affine"):
        unit_class(model)


def test_unit_degenerate_nonsingular_model():
    """c_i = d_w forces the moving variables to enter linearly; the
    critical locus is empty, the J-sector space is zero, and the unit is
    the (empty) zero class rather than an error."""
    from lgck.glsm import GlsmModel
    model = GlsmModel.from_dict({
        "variables": ["x"],
        "torus_weights": [[1]],
        "finite_generators": [],
        "chi": [1],
        "nu": [0],
        "r_charges": [1],
        "d_w": 1,
        "potential": "x",
    })
    u = unit_class(model)
    assert u.coefficients == ()
    assert u.route == "koszul todd-chern"


def test_unit_euler_koszul_datum():
    """The S1-style resolution {s, q o taut}: an explicit Euler splitting
    pairs the differential covector with the tautological vector to the
    potential."""
    names = ("u", "v")
    w = poly("u*v", names)  # c = (d, 0)-type splitting: w = u dw/du
    tau = [w.derivative("u")]
    sigma = [poly("u", names)]
    f = koszul(tau, sigma)
    assert f.potential == w
    td = todd_chern(f)
    assert td.twist == chern_char(f).twist + 1
