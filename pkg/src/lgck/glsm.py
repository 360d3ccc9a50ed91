"""Gauged linear sigma model input data and GIT phase analysis.

A model is the tuple (V, Gamma, chi, w, nu) for a diagonalized abelian
gauge group: the continuous part of Gamma is a torus acting through an
integer/rational weight matrix, the finite part is a list of phase
vectors, and chi / nu are characters written in the torus character
lattice.  R-charges, the degree of the superpotential, and the stability
character complete the datum.

Conventions baked in here:

* Finite generators are supplied as elements of the kernel of chi (the
  sector group); the superpotential must be invariant under them.
* The continuous dimension of Ker(chi) is (torus rank - 1) when the
  torus is present, else 0; the central charge uses that dimension.
* Semistability of a coordinate support S under a character is the cone
  test "character lies in Cone(weight columns over S)" for the full
  torus.  The kernel-side tests (used for the stable-equals-semistable
  check and for the R-fixed-locus condition) augment the cone with the
  line through chi, which is the Hilbert-Mumford criterion for the
  kernel subgroup.
* Properness of the critical locus is certified only in the affine
  regime (finite-dimensional Jacobian ring); geometric phases are
  reported as unchecked.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .exactalg import MultiPoly, exact_lp_cone_membership
from .exactalg.linalg import rank as mat_rank
from .exactalg.linalg import solve as lin_solve


def _frac(x) -> Fraction:
    return Fraction(str(x)) if isinstance(x, str) else Fraction(x)


@dataclass(frozen=True)
class GlsmModel:
    variables: tuple[str, ...]
    torus_weights: tuple[tuple[Fraction, ...], ...]  # rows: torus factors
    finite_generators: tuple[tuple[Fraction, ...], ...]  # phase vectors mod 1
    chi: tuple[Fraction, ...]
    nu: tuple[Fraction, ...]
    r_charges: tuple[Fraction, ...]
    d_w: int
    potential: MultiPoly

    # -- derived quantities ------------------------------------------------

    @property
    def n_vars(self) -> int:
        return len(self.variables)

    @property
    def torus_rank(self) -> int:
        return len(self.torus_weights)

    @property
    def dim_kernel(self) -> int:
        """Continuous dimension of Ker(chi); chi kills one torus direction."""
        return max(self.torus_rank - 1, 0)

    @property
    def q(self) -> Fraction:
        return sum(self.r_charges, Fraction(0)) / self.d_w

    @property
    def central_charge(self) -> Fraction:
        return self.n_vars - self.dim_kernel - 2 * self.q

    @property
    def j_phases(self) -> tuple[Fraction, ...]:
        """Phase vector of J = exp(2 pi i / d_w) acting through the R-charges."""
        return tuple((c / self.d_w) % 1 for c in self.r_charges)

    @property
    def zeta_order(self) -> int:
        return 2 * self.d_w

    def weight_column(self, i: int) -> list[Fraction]:
        return [row[i] for row in self.torus_weights]

    # -- construction --------------------------------------------------------

    @classmethod
    def from_dict(cls, data: dict) -> "GlsmModel":
        variables = tuple(data["variables"])
        potential = MultiPoly.parse(data["potential"], variables)
        torus = tuple(tuple(_frac(x) for x in row) for row in data.get("torus_weights", []))
        gens = tuple(tuple(_frac(x) % 1 for x in g) for g in data.get("finite_generators", []))
        chi = tuple(_frac(x) for x in data.get("chi", []))
        nu = tuple(_frac(x) for x in data.get("nu", []))
        charges = tuple(_frac(x) for x in data["r_charges"])
        model = cls(
            variables=variables,
            torus_weights=torus,
            finite_generators=gens,
            chi=chi,
            nu=nu,
            r_charges=charges,
            d_w=int(data["d_w"]),
            potential=potential,
        )
        model._check_shapes()
        return model

    @classmethod
    def from_json(cls, path) -> "GlsmModel":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self) -> dict:
        return {
            "variables": list(self.variables),
            "torus_weights": [[str(x) for x in row] for row in self.torus_weights],
            "finite_generators": [[str(x) for x in g] for g in self.finite_generators],
            "chi": [str(x) for x in self.chi],
            "nu": [str(x) for x in self.nu],
            "r_charges": [str(x) for x in self.r_charges],
            "d_w": self.d_w,
            "potential": self.potential.canonical_str(),
        }

    def _check_shapes(self):
        n = self.n_vars
        for row in self.torus_weights:
            if len(row) != n:
                raise ValueError("torus weight row length != number of variables")
        for g in self.finite_generators:
            if len(g) != n:
                raise ValueError("finite generator length != number of variables")
        if len(self.chi) != self.torus_rank or len(self.nu) != self.torus_rank:
            raise ValueError("chi/nu must live in the torus character lattice")
        if len(self.r_charges) != n:
            raise ValueError("r_charges length != number of variables")
        if self.d_w <= 0:
            raise ValueError("d_w must be positive")


# ---------------------------------------------------------------------------
# validation


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class ValidationReport:
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, detail: str = ""):
        self.checks.append(CheckResult(name, passed, detail))

    def to_jsonable(self):
        return [
            {"check": c.name, "passed": c.passed, "detail": c.detail}
            for c in self.checks
        ]


def validate(model: GlsmModel, require_tail_regime: bool = False) -> ValidationReport:
    """Check every structural invariant; failures become report entries."""
    report = ValidationReport()
    w = model.potential
    n = model.n_vars

    bad = [exp for exp in w.terms
           if sum(c * a for c, a in zip(model.r_charges, exp)) != model.d_w]
    report.add(
        "quasi_homogeneous",
        not bad,
        "" if not bad else f"monomial exponents {bad[0]} have the wrong R-weight",
    )

    euler = MultiPoly.zero(w.variables)
    for i, v in enumerate(model.variables):
        euler = euler + MultiPoly.var(w.variables, v) * w.derivative(v) * (
            Fraction(model.r_charges[i], model.d_w)
        )
    report.add("euler_identity", euler == w,
               "" if euler == w else "sum (c_i/d_w) x_i dw/dx_i != w")

    ok = all(c >= 0 for c in model.r_charges)
    report.add("r_charges_nonnegative", ok)
    if require_tail_regime:
        ok = all(0 <= c <= model.d_w for c in model.r_charges)
        report.add("r_charges_within_d_w", ok)

    for gi, g in enumerate(model.finite_generators):
        bad = [exp for exp in w.terms
               if (sum(p * a for p, a in zip(g, exp))) % 1 != 0]
        report.add(
            f"finite_generator_{gi}_invariance",
            not bad,
            "" if not bad else f"monomial {bad[0]} not invariant",
        )

    if model.torus_rank:
        bad = [exp for exp in w.terms
               if any(sum(row[i] * exp[i] for i in range(n)) != model.chi[r]
                      for r, row in enumerate(model.torus_weights))]
        report.add(
            "chi_weight_of_potential",
            not bad,
            "" if not bad else f"monomial {bad[0]} has torus weight != chi",
        )
        # R-charges must come from a one-parameter subgroup pairing to d_w with chi
        cols = [[model.torus_weights[r][i] for r in range(model.torus_rank)]
                for i in range(n)]
        system = [list(col) for col in cols] + [list(model.chi)]
        rhs = [model.r_charges[i] for i in range(n)] + [Fraction(model.d_w)]
        sol = lin_solve(system, rhs)
        report.add(
            "r_charge_subgroup",
            sol is not None,
            "" if sol is not None else "no torus one-parameter subgroup realizes the R-charges",
        )

    report.add("geometric_properness", True,
               "unchecked outside the affine regime; affine criterion is "
               "finite-dimensionality of the Jacobian ring")
    return report


# ---------------------------------------------------------------------------
# GIT phases


@dataclass
class PhaseDescription:
    character: tuple[Fraction, ...]
    max_unstable_supports: tuple[frozenset[int], ...]
    description: str
    stable_equals_semistable: bool

    def is_semistable_support(self, support) -> bool:
        s = frozenset(support)
        return not any(s <= u for u in self.max_unstable_supports)

    def to_jsonable(self, variables):
        return {
            "character": [str(x) for x in self.character],
            "max_unstable_supports": [
                sorted(variables[i] for i in u) for u in self.max_unstable_supports
            ],
            "description": self.description,
            "stable_equals_semistable": self.stable_equals_semistable,
        }


class _ConeTester:
    """Memoized support-cone membership tests for one model and character."""

    def __init__(self, model: GlsmModel, character, include_chi_line: bool):
        self.model = model
        self.character = [Fraction(x) for x in character]
        self.extra: list[list[Fraction]] = []
        if include_chi_line and model.torus_rank:
            chi = [Fraction(x) for x in model.chi]
            self.extra = [chi, [-x for x in chi]]
        self.memo: dict[frozenset, bool] = {}

    def semistable(self, support: frozenset) -> bool:
        if support in self.memo:
            return self.memo[support]
        if not self.model.torus_rank:
            result = True  # no destabilizing one-parameter subgroups
        else:
            gens = [self.model.weight_column(i) for i in sorted(support)] + self.extra
            result = exact_lp_cone_membership(gens, self.character).inside
        self.memo[support] = result
        return result


def _maximal_unstable(tester: _ConeTester, n: int) -> list[frozenset]:
    """Maximal elements of the (downward-closed) unstable support family.

    Semistable supports form an upward-closed family, so every semistable
    support is reachable from the full one by single deletions through
    semistable intermediates, and every maximal unstable support appears
    as a child of a visited semistable support.
    """
    full = frozenset(range(n))
    if not tester.semistable(full):
        return [full]
    maximal: set[frozenset] = set()
    seen: set[frozenset] = set()

    def visit(support: frozenset):
        if support in seen:
            return
        seen.add(support)
        if tester.semistable(support):
            for i in support:
                visit(support - {i})
        elif all(tester.semistable(support | {i}) for i in range(n) if i not in support):
            maximal.add(support)

    visit(full)
    return sorted(maximal, key=lambda s: (len(s), sorted(s)))


def _minimal_semistable(tester: _ConeTester, n: int) -> list[frozenset]:
    """Minimal elements of the (upward-closed) semistable support family."""
    empty = frozenset()
    if tester.semistable(empty):
        return [empty]
    minimal: set[frozenset] = set()
    seen: set[frozenset] = set()

    def visit(support: frozenset):
        if support in seen:
            return
        seen.add(support)
        if not tester.semistable(support):
            for i in range(n):
                if i not in support:
                    visit(support | {i})
        elif all(not tester.semistable(support - {i}) for i in support):
            minimal.add(support)

    visit(empty)
    return sorted(minimal, key=lambda s: (len(s), sorted(s)))


def semistable_locus(model: GlsmModel, character) -> PhaseDescription:
    """Describe V^ss(character) by its maximal unstable coordinate supports."""
    character = tuple(Fraction(x) for x in character)
    if model.torus_rank and len(character) != model.torus_rank:
        raise ValueError("character dimension does not match the torus rank")
    n = model.n_vars
    tester = _ConeTester(model, character, include_chi_line=False)
    maximal = _maximal_unstable(tester, n)

    if not maximal:
        desc = "V^ss = V"
    else:
        pieces = []
        for u in maximal:
            complement = [model.variables[i] for i in range(n) if i not in u]
            pieces.append("{" + " = ".join(complement) + " = 0}")
        desc = "V^ss = complement of " + " and ".join(pieces)

    stable_eq = _stable_equals_semistable(model, character)
    return PhaseDescription(character, tuple(maximal), desc, stable_eq)


def _stable_equals_semistable(model: GlsmModel, character) -> bool:
    """Kernel-side check: every semistable support spans the full character
    space together with chi, so the stabilizer is finite and the character
    avoids the facets."""
    if not model.torus_rank:
        return True
    n = model.n_vars
    k = model.torus_rank
    tester = _ConeTester(model, character, include_chi_line=True)
    for support in _minimal_semistable(tester, n):
        rows = [model.weight_column(i) for i in sorted(support)]
        rows.append(list(model.chi))
        if mat_rank(rows) < k:
            return False
    return True


def kernel_semistable_support(model: GlsmModel, character, support) -> bool:
    """Semistability of a support for Ker(chi) (cone augmented by the chi line)."""
    tester = _ConeTester(model, character, include_chi_line=True)
    return tester.semistable(frozenset(support))


def r_fixed_locus(model: GlsmModel, subgroup) -> frozenset[int]:
    """Coordinates fixed by a torus one-parameter subgroup (integer vector)."""
    rho = [Fraction(x) for x in subgroup]
    if len(rho) != model.torus_rank:
        raise ValueError("subgroup vector must match the torus rank")
    fixed = set()
    for i in range(model.n_vars):
        pairing = sum(r * w for r, w in zip(rho, model.weight_column(i)))
        if pairing == 0:
            fixed.add(i)
    return frozenset(fixed)


@dataclass
class DaggerReport:
    holds: bool
    fixed_support: tuple[int, ...]
    witness_support: tuple[int, ...] | None
    detail: str

    def to_jsonable(self, variables):
        return {
            "holds": self.holds,
            "fixed_support": [variables[i] for i in self.fixed_support],
            "witness_support": None if self.witness_support is None
            else [variables[i] for i in self.witness_support],
            "detail": self.detail,
        }


def check_dagger(model: GlsmModel) -> DaggerReport:
    """Does the R-fixed coordinate subspace meet the semistable locus?

    The R-fixed subspace is cut out by the coordinates with nonzero
    R-charge.  Semistable supports are upward closed, so the subspace
    meets V^ss iff its full coordinate support is itself semistable.
    """
    fixed = frozenset(i for i, c in enumerate(model.r_charges) if c == 0)
    tester = _ConeTester(model, model.nu if model.torus_rank else (),
                         include_chi_line=False)
    if tester.semistable(fixed):
        return DaggerReport(
            True, tuple(sorted(fixed)), tuple(sorted(fixed)),
            "fixed subspace meets V^ss",
        )
    return DaggerReport(
        False, tuple(sorted(fixed)), None,
        "every support inside the fixed subspace is unstable",
    )
