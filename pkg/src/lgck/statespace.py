"""State spaces of affine Landau-Ginzburg orbifolds.

For each group element h the sector carries the invariant part of the
Jacobian ring of the restricted potential, twisted by the top form on
the fixed subspace; narrow sectors (empty fixed locus) are spanned by a
single symbol.  The grading is the age-shifted one,

    deg = dim V^h + 2 (age(h) - q),

and the pairing composes multiplication, the inversion pullback
x -> zeta.x (zeta = exp(pi i / d_w)), the Grothendieck residue of the
restricted potential normalized by res(hessian) = Milnor number, and the
stack factor 1/|G|.  Dual narrow generators pair to 1.  These
normalization choices are reported alongside every computed pairing.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exactalg import Cyclo, MultiPoly, drl_key, jacobian_ideal
from .exactalg.linalg import is_nonsingular
from .glsm import GlsmModel
from .orbifold import GroupElement, Sector, inertia_sectors, sector_group

CONVENTIONS = {
    "residue_normalization": "res(hessian) = milnor number",
    "stack_factor": "1/|G| on broad sectors",
    "narrow_pairing": "dual narrow generators pair to 1",
    "twist_unit": "(2*pi*i)^(-t) carried as the integer exponent t",
}


class NonIsolatedSingularityError(ValueError):
    pass


def _poly_det(rows: list[list[MultiPoly]]) -> MultiPoly:
    n = len(rows)
    if n == 0:
        raise ValueError("empty matrix")
    if n == 1:
        return rows[0][0]
    variables = rows[0][0].variables
    out = MultiPoly.zero(variables)
    for j in range(n):
        entry = rows[0][j]
        if entry.is_zero():
            continue
        minor = [[rows[i][k] for k in range(n) if k != j] for i in range(1, n)]
        piece = entry * _poly_det(minor)
        out = out + (piece if j % 2 == 0 else -piece)
    return out


class ResidueCalculator:
    """Grothendieck residue for one isolated quasi-homogeneous singularity.

    The socle of the Milnor algebra of a quasi-homogeneous isolated
    singularity is one-dimensional, so there is exactly one standard
    monomial of top weighted degree and the hessian class is a scalar
    multiple of it.  The residue of p is then the coefficient of that
    monomial in the normal form of p, rescaled so res(hessian) = mu.
    """

    def __init__(self, w: MultiPoly, weights):
        self.w = w
        self.variables = w.variables
        self.weights = [Fraction(x) for x in weights]
        self.ideal = jacobian_ideal(w)
        std = self.ideal.quotient_basis()
        if std is None:
            raise NonIsolatedSingularityError(
                f"potential {w.canonical_str()} has a non-isolated singularity"
            )
        self.standard_monomials = std
        self.milnor_number = len(std)
        self._cache: dict[tuple, Cyclo] = {}
        self._monomial_gb = all(len(g.terms) == 1 for g in self.ideal.basis)
        if self.milnor_number:
            hess = _poly_det([
                [w.derivative(a).derivative(b) for b in self.variables]
                for a in self.variables
            ])
            hess_nf = self.ideal.normal_form(hess)
            if len(hess_nf.terms) != 1:
                raise ValueError(
                    "hessian class is not a single standard monomial; "
                    "the potential is not quasi-homogeneous with 1-dim socle"
                )
            (self.socle_monomial, self.socle_coeff), = hess_nf.terms.items()
            self.socle_degree = sum(
                w_ * a for w_, a in zip(self.weights, self.socle_monomial)
            )
        else:
            self.socle_monomial = None
            self.socle_coeff = None
            self.socle_degree = None

    def residue(self, p: MultiPoly) -> Cyclo:
        """res[p dx / (dw_1 ... dw_n)], normalized so res(hessian) = mu."""
        if self.milnor_number == 0:
            return Cyclo.zero()
        nf = self.ideal.normal_form(p)
        c = nf.terms.get(self.socle_monomial)
        if c is None:
            return Cyclo.zero()
        return c * self.milnor_number / self.socle_coeff

    def residue_of_monomial(self, exp: tuple) -> Cyclo:
        exp = tuple(exp)
        if self._monomial_gb:
            # normal form of a monomial modulo a monomial basis is itself or 0
            if self.milnor_number and exp == self.socle_monomial:
                return Cyclo.from_rational(self.milnor_number) / self.socle_coeff
            return Cyclo.zero()
        hit = self._cache.get(exp)
        if hit is None:
            hit = self.residue(MultiPoly.monomial(self.variables, exp, 1))
            self._cache[exp] = hit
        return hit


def residue(p: MultiPoly, w: MultiPoly, weights=None) -> Cyclo:
    """Standalone residue; weights are inferred from quasi-homogeneity if omitted."""
    if weights is None:
        weights = _infer_weights(w)
    return ResidueCalculator(w, weights).residue(p)


def _infer_weights(w: MultiPoly):
    from .exactalg.linalg import solve
    exps = sorted(w.terms, key=drl_key)
    if not exps:
        raise ValueError("cannot infer weights of the zero potential")
    system = [[Fraction(a) for a in exp] for exp in exps]
    rhs = [Fraction(1)] * len(exps)
    sol = solve(system, rhs)
    if sol is None:
        raise ValueError("potential is not quasi-homogeneous; supply weights")
    return sol


@dataclass
class SectorSpace:
    """Basis and grading data of one inertia sector."""

    sector: Sector
    fixed_variables: tuple[str, ...]
    basis: tuple  # exponent tuples for broad sectors; ("1",) for narrow
    degree: Fraction
    calculator: ResidueCalculator | None  # None on narrow sectors

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @property
    def narrow(self) -> bool:
        return self.sector.narrow

    def basis_labels(self) -> list[str]:
        if self.narrow:
            return ["1"]
        out = []
        for exp in self.basis:
            mono = MultiPoly.monomial(self.fixed_variables, exp, 1)
            out.append(mono.canonical_str())
        return out

    def to_jsonable(self, variables):
        return {
            "sector": self.sector.to_jsonable(variables),
            "dimension": self.dimension,
            "degree": str(self.degree),
            "basis": self.basis_labels(),
        }


@dataclass
class SectorElement:
    """A vector in one sector, in the sector's monomial basis."""

    phases: tuple[Fraction, ...]
    coefficients: tuple[Cyclo, ...]


def sector_space(model: GlsmModel, h: GroupElement,
                 group=None) -> SectorSpace:
    """Invariant Jacobian-ring classes of the restricted potential."""
    sector = Sector.of(h)
    if group is None:
        group = sector_group(model)
    fixed = sorted(sector.fixed_support)
    fixed_names = tuple(model.variables[i] for i in fixed)
    deg = Fraction(len(fixed)) + 2 * (sector.age - model.q)

    if not fixed:
        return SectorSpace(sector, (), ("1",), deg, None)

    moving_names = [model.variables[i] for i in range(model.n_vars) if i not in fixed]
    w_res = model.potential.restrict_zero(moving_names).drop_variables(moving_names)
    weights = [Fraction(model.r_charges[i], model.d_w) for i in fixed]
    try:
        calc = ResidueCalculator(w_res, weights)
    except NonIsolatedSingularityError:
        raise NonIsolatedSingularityError(
            f"sector {h.label()}: restricted potential "
            f"{w_res.canonical_str()} has a non-isolated singularity"
        ) from None

    invariant = []
    for exp in calc.standard_monomials:
        ok = True
        for g in group:
            phase = sum(g.phases[i] * a for i, a in zip(fixed, exp))
            phase += sum(g.phases[i] for i in fixed)  # det twist on the top form
            if phase % 1 != 0:
                ok = False
                break
        if ok:
            invariant.append(exp)
    return SectorSpace(sector, fixed_names, tuple(invariant), deg, calc)


def _phase_scalar(model: GlsmModel, t: Fraction) -> Cyclo:
    """exp(pi i t / d_w) as an exact root of unity."""
    t = Fraction(t)
    order = 2 * model.d_w * t.denominator
    return Cyclo.root_of_unity(order, t.numerator % order)


class StateSpace:
    """All sectors of a model, with the twisted residue pairing."""

    def __init__(self, model: GlsmModel, bound: int = 10 ** 6):
        self.model = model
        self.group = sector_group(model, bound)
        self.group_order = len(self.group)
        self.sectors = inertia_sectors(model, bound)
        self.spaces: dict[tuple, SectorSpace] = {}
        for sec in self.sectors:
            self.spaces[sec.element.phases] = sector_space(model, sec.element, self.group)
        self._gram_cache: dict[tuple, list[list[Cyclo]]] = {}

    # -- bookkeeping -----------------------------------------------------

    def space(self, h) -> SectorSpace:
        phases = h.phases if isinstance(h, GroupElement) else tuple(h)
        return self.spaces[phases]

    def total_dimension(self) -> int:
        return sum(s.dimension for s in self.spaces.values())

    def degree_histogram(self) -> dict[Fraction, int]:
        hist: dict[Fraction, int] = {}
        for s in self.spaces.values():
            if s.dimension:
                hist[s.degree] = hist.get(s.degree, 0) + s.dimension
        return dict(sorted(hist.items()))

    def basis_element(self, phases, index: int) -> SectorElement:
        space = self.space(phases)
        coeffs = [Cyclo.zero()] * space.dimension
        coeffs[index] = Cyclo.one()
        return SectorElement(tuple(phases), tuple(coeffs))

    # -- the inversion pullback and pairing --------------------------------

    def inv_pullback(self, el: SectorElement) -> SectorElement:
        """Substitute x -> zeta.x and move the class to the inverse sector."""
        space = self.space(el.phases)
        inv_phases = GroupElement(el.phases).inverse().phases
        if space.narrow:
            return SectorElement(inv_phases, el.coefficients)
        fixed = sorted(space.sector.fixed_support)
        charge_sum = sum(self.model.r_charges[i] for i in fixed)
        out = []
        for exp, c in zip(space.basis, el.coefficients):
            t = sum(self.model.r_charges[i] * a for i, a in zip(fixed, exp)) + charge_sum
            out.append(c * _phase_scalar(self.model, t))
        return SectorElement(inv_phases, tuple(out))

    def pairing(self, el1: SectorElement, el2: SectorElement) -> Cyclo:
        if el1.phases not in self.spaces or el2.phases not in self.spaces:
            raise ValueError("sector element does not belong to this model")
        space1 = self.space(el1.phases)
        inv = GroupElement(el1.phases).inverse().phases
        if el2.phases != inv:
            return Cyclo.zero()
        if space1.narrow:
            return el1.coefficients[0] * el2.coefficients[0]
        moved = self.inv_pullback(el2)
        calc = space1.calculator
        total = Cyclo.zero()
        for exp1, c1 in zip(space1.basis, el1.coefficients):
            if not c1:
                continue
            for exp2, c2 in zip(space1.basis, moved.coefficients):
                if not c2:
                    continue
                r = calc.residue_of_monomial(
                    tuple(a + b for a, b in zip(exp1, exp2)))
                if r:
                    total = total + c1 * c2 * r
        return total * Fraction(1, self.group_order)

    def gram_matrix(self, phases) -> list[list[Cyclo]]:
        phases = tuple(phases)
        if phases in self._gram_cache:
            return self._gram_cache[phases]
        space = self.space(phases)
        inv = GroupElement(phases).inverse().phases
        other = self.space(inv)
        if space.narrow:
            mat = [[Cyclo.one()]]
        else:
            fixed = sorted(space.sector.fixed_support)
            charge_sum = sum(self.model.r_charges[i] for i in fixed)
            scalars = []
            for exp in other.basis:
                t = sum(self.model.r_charges[i] * a
                        for i, a in zip(fixed, exp)) + charge_sum
                scalars.append(_phase_scalar(self.model, t))
            inv_order = Fraction(1, self.group_order)
            calc = space.calculator
            zero = Cyclo.zero()
            mat = []
            for e1 in space.basis:
                row = []
                for e2, s in zip(other.basis, scalars):
                    r = calc.residue_of_monomial(
                        tuple(a + b for a, b in zip(e1, e2)))
                    row.append(r * s * inv_order if r else zero)
                mat.append(row)
        self._gram_cache[phases] = mat
        return mat

    def gram_nonsingular(self, phases) -> bool:
        return is_nonsingular(self.gram_matrix(phases))

    # -- reporting ------------------------------------------------------------

    def to_jsonable(self) -> dict:
        sectors = []
        for sec in self.sectors:
            space = self.spaces[sec.element.phases]
            entry = space.to_jsonable(self.model.variables)
            gram = self.gram_matrix(sec.element.phases)
            entry["gram"] = [[str(x) for x in row] for row in gram]
            entry["gram_nonsingular"] = is_nonsingular(gram)
            sectors.append(entry)
        return {
            "conventions": CONVENTIONS,
            "total_dimension": self.total_dimension(),
            "degree_histogram": {str(d): n for d, n in self.degree_histogram().items()},
            "sectors": sectors,
        }


def build_state_space(model: GlsmModel, bound: int = 10 ** 6) -> StateSpace:
    return StateSpace(model, bound)


# ---------------------------------------------------------------------------
# sums of singularities


def with_scaled_charges(model: GlsmModel, factor: int) -> GlsmModel:
    """Rescale (r_charges, d_w) by an integer factor; the theory is unchanged."""
    if factor <= 0:
        raise ValueError("scale factor must be positive")
    return GlsmModel(
        variables=model.variables,
        torus_weights=model.torus_weights,
        finite_generators=model.finite_generators,
        chi=tuple(x * factor for x in model.chi),
        nu=model.nu,
        r_charges=tuple(c * factor for c in model.r_charges),
        d_w=model.d_w * factor,
        potential=model.potential,
    )


def sum_model(model1: GlsmModel, model2: GlsmModel) -> GlsmModel:
    """The fiber-product model of two affine LG models over their chi's."""
    if set(model1.variables) & set(model2.variables):
        raise ValueError("variable collision between the summands")
    if model1.d_w != model2.d_w:
        raise ValueError("mismatched d_w; rescale charges first")
    n1, n2 = model1.n_vars, model2.n_vars
    variables = model1.variables + model2.variables
    charges = model1.r_charges + model2.r_charges
    gens = [tuple(g) + (Fraction(0),) * n2 for g in model1.finite_generators]
    gens += [(Fraction(0),) * n1 + tuple(g) for g in model2.finite_generators]
    # antidiagonal mu_{d_w} from the fiber product Gamma_1 x_{C*} Gamma_2
    gens.append(tuple(model1.j_phases) + (Fraction(0),) * n2)
    w = model1.potential.with_variables(variables) + model2.potential.with_variables(variables)
    return GlsmModel(
        variables=variables,
        torus_weights=(charges,),
        finite_generators=tuple(gens),
        chi=(Fraction(model1.d_w),),
        nu=(Fraction(0),),
        r_charges=charges,
        d_w=model1.d_w,
        potential=w,
    )


@dataclass
class KunnethWitness:
    """Explicit graded isomorphism H(sum) = H_1 (x) H_2, sector by sector."""

    pairs: list[dict]

    def to_jsonable(self):
        return self.pairs


def kunneth_sum(model1: GlsmModel, model2: GlsmModel):
    """Build the sum model and the sector-wise tensor decomposition."""
    combined = sum_model(model1, model2)
    s1, s2, s = StateSpace(model1), StateSpace(model2), StateSpace(combined)
    pairs = []
    for h1 in s1.group:
        for h2 in s2.group:
            joint = h1.phases + h2.phases
            sp1, sp2, sp = s1.space(h1.phases), s2.space(h2.phases), s.space(joint)
            if sp.dimension != sp1.dimension * sp2.dimension:
                raise AssertionError(
                    f"Kunneth dimension mismatch on sectors {h1.label()} x {h2.label()}"
                )
            if sp1.narrow and sp2.narrow:
                scale = Fraction(1)
            else:
                scale = Fraction(1)
                if sp1.narrow:
                    scale /= s1.group_order
                if sp2.narrow:
                    scale /= s2.group_order
            pairs.append({
                "sector_1": [str(p) for p in h1.phases],
                "sector_2": [str(p) for p in h2.phases],
                "dim_1": sp1.dimension,
                "dim_2": sp2.dimension,
                "dim_sum": sp.dimension,
                "degree_sum_matches": sp.degree == sp1.degree + sp2.degree
                if sp.dimension else True,
                "pairing_scale": str(scale),
            })
    return combined, s, KunnethWitness(pairs)
