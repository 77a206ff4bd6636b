"""Connective graded rings presented as polynomial quotients.

A :class:`GradedRing` is freely generated by variables of positive
internal degree, modulo homogeneous relations, over Z, Q or F_p.  The
engine is strictly commutative; odd-degree variables are admitted only
in characteristic 2 or when the caller asserts strict commutativity is
what they mean.

Each internal degree d is realized by enumerating the monomials of that
degree (graded-lexicographic order, descending exponent tuples in the
user's variable order) and presenting the degree piece as the cokernel
of all relation multiples landing in degree d.  No Groebner machinery:
per-degree linear algebra is complete for quotient realization because
the relation multiples span the ideal degreewise.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .exact import ExactMatrix, Scalars, from_columns
from .fgab import FGAbGroup
from .groups import PresentedGroup
from .poly import InhomogeneousElement, Polynomial, mono_degree, mono_mul, parse_polynomial


@dataclass
class DegreeBasis:
    degree: int
    monomials: list  # exponent tuples, graded-lex order
    presentation: ExactMatrix
    pres_group: PresentedGroup
    index: dict  # monomial -> position

    @property
    def group(self) -> FGAbGroup:
        return self.pres_group.group()


@dataclass
class GradedRing:
    scalars: Scalars
    variables: tuple  # ((name, degree), ...)
    relations: tuple = ()  # Polynomials
    assume_strict_commutative: bool = False
    _mono_cache: dict = field(default_factory=dict, repr=False, compare=False)
    _basis_cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self.variables = tuple((str(n), int(d)) for n, d in self.variables)
        names = [n for n, _ in self.variables]
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable names")
        for name, deg in self.variables:
            if deg < 1:
                raise ValueError(f"variable {name} must have positive degree (connective)")
            if deg % 2 == 1 and self.scalars.characteristic != 2 and not self.assume_strict_commutative:
                raise ValueError(
                    f"odd-degree variable {name} outside characteristic 2; "
                    "pass assume_strict_commutative=True to opt in"
                )
        self.relations = tuple(self.relations)
        for r in self.relations:
            self.poly_degree(r)  # raises if inhomogeneous

    @property
    def nvars(self) -> int:
        return len(self.variables)

    @property
    def var_names(self):
        return [n for n, _ in self.variables]

    @property
    def var_degrees(self):
        return [d for _, d in self.variables]

    def variable_poly(self, name_or_index, power: int = 1) -> Polynomial:
        if isinstance(name_or_index, str):
            idx = self.var_names.index(name_or_index)
        else:
            idx = name_or_index
        return Polynomial.variable(idx, self.nvars, power)

    def one(self) -> Polynomial:
        return Polynomial.constant(1, self.nvars)

    def parse(self, text: str) -> Polynomial:
        return parse_polynomial(text, self.var_names)

    def poly_degree(self, p: Polynomial):
        return p.degree_or_none(self.var_degrees)

    def monomials_of_degree(self, d: int) -> list:
        """All exponent tuples of internal degree d, descending lex order."""
        if d in self._mono_cache:
            return self._mono_cache[d]
        degs = self.var_degrees
        out = []

        def rec(i, remaining, prefix):
            if i == len(degs):
                if remaining == 0:
                    out.append(tuple(prefix))
                return
            if remaining < 0:
                return
            step = degs[i]
            for e in range(remaining // step, -1, -1):
                rec(i + 1, remaining - e * step, prefix + [e])

        if d >= 0:
            rec(0, d, [])
        self._mono_cache[d] = out
        return out

    def degree_basis(self, d: int) -> DegreeBasis:
        """Realize the degree-d piece of the ring as an abelian group."""
        if d in self._basis_cache:
            return self._basis_cache[d]
        monos = self.monomials_of_degree(d)
        index = {m: i for i, m in enumerate(monos)}
        cols = []
        for rel in self.relations:
            rdeg = self.poly_degree(rel)
            if rdeg is None:
                continue
            for m in self.monomials_of_degree(d - rdeg):
                shifted = rel.mul_mono(m)
                col = [0] * len(monos)
                for mono, c in shifted.terms:
                    col[index[mono]] = self.scalars.coerce(c)
                cols.append(col)
        pres = from_columns(self.scalars, len(monos), cols)
        basis = DegreeBasis(d, monos, pres, PresentedGroup(self.scalars, len(monos), pres), index)
        self._basis_cache[d] = basis
        return basis

    def mult_matrix(self, f: Polynomial, d: int, fdeg: int | None = None) -> ExactMatrix:
        """Matrix of multiplication by homogeneous f from degree d to d + |f|.

        The zero polynomial is homogeneous of every degree, so callers must
        pass ``fdeg`` explicitly for it.
        """
        deg = self.poly_degree(f)
        if deg is None and fdeg is None:
            raise ValueError("multiplication by 0 needs an explicit degree")
        fdeg = deg if deg is not None else fdeg
        src = self.degree_basis(d)
        dst = self.degree_basis(d + fdeg)
        cols = []
        for m in src.monomials:
            prod = f.mul_mono(m)
            col = [0] * len(dst.monomials)
            for mono, c in prod.terms:
                col[dst.index[mono]] = self.scalars.coerce(c)
            cols.append(col)
        return from_columns(self.scalars, len(dst.monomials), cols)

    def describe(self) -> dict:
        return {
            "scalars": self.scalars.to_json(),
            "variables": [{"name": n, "degree": d} for n, d in self.variables],
            "relations": [r.render(self.var_names) for r in self.relations],
        }
