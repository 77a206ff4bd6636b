"""Finitely presented graded modules, morphisms and the torsion radical.

A module is a free module on named generators modulo homogeneous
relations, over a :class:`loccoh.rings.GradedRing`.  Every internal
degree d realizes to a finitely presented abelian group on symbols
``generator * monomial``; realizations are cached on the module.

The suspension convention follows the ring's: ``shifted(n)`` realizes
degree d as the original degree d - n.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .exact import ExactMatrix, from_columns
from .fgab import FGAbGroup
from .groups import GroupMap, PresentedGroup
from .poly import InhomogeneousElement, Polynomial, mono_degree, mono_mul
from .rings import GradedRing


class WindowTooSmall(ValueError):
    """Certification was requested but the window shows no vanishing bound."""


@dataclass
class ModuleDegree:
    degree: int
    basis: list  # (generator index, monomial) pairs
    index: dict
    pres: PresentedGroup

    @property
    def group(self) -> FGAbGroup:
        return self.pres.group()

    def size(self) -> int:
        return len(self.basis)


@dataclass
class GradedModule:
    ring: GradedRing
    generators: tuple  # ((name, degree), ...)
    relations: tuple = ()  # each relation: tuple of Polynomial, one per generator
    _real_cache: dict = field(default_factory=dict, repr=False, compare=False)
    _act_cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self.generators = tuple((str(n), int(d)) for n, d in self.generators)
        self.relations = tuple(tuple(rel) for rel in self.relations)
        for rel in self.relations:
            if len(rel) != len(self.generators):
                raise ValueError("relation length must match generator count")
            self.relation_degree(rel)

    @property
    def gen_degrees(self):
        return [d for _, d in self.generators]

    def relation_degree(self, rel):
        """Common internal degree of a generator combination; None for 0."""
        degs = set()
        for poly, (_, gdeg) in zip(rel, self.generators):
            pdeg = poly.degree_or_none(self.ring.var_degrees)
            if pdeg is not None:
                degs.add(pdeg + gdeg)
        if len(degs) > 1:
            raise InhomogeneousElement(f"relation mixes degrees {sorted(degs)}")
        return degs.pop() if degs else None

    def realize(self, d: int) -> ModuleDegree:
        if d in self._real_cache:
            return self._real_cache[d]
        ring = self.ring
        basis = []
        for gi, (_, gdeg) in enumerate(self.generators):
            for m in ring.monomials_of_degree(d - gdeg):
                basis.append((gi, m))
        index = {b: i for i, b in enumerate(basis)}
        cols = []
        # ring relations act coordinatewise on each generator
        for gi, (_, gdeg) in enumerate(self.generators):
            for rel in ring.relations:
                rdeg = ring.poly_degree(rel)
                for m in ring.monomials_of_degree(d - gdeg - rdeg):
                    shifted = rel.mul_mono(m)
                    col = [0] * len(basis)
                    for mono, c in shifted.terms:
                        col[index[(gi, mono)]] = ring.scalars.coerce(c)
                    cols.append(col)
        # module relations, multiplied into degree d
        for rel in self.relations:
            rdeg = self.relation_degree(rel)
            if rdeg is None:
                continue
            for m in ring.monomials_of_degree(d - rdeg):
                col = [0] * len(basis)
                for gi, poly in enumerate(rel):
                    if poly.is_zero():
                        continue
                    for mono, c in poly.mul_mono(m).terms:
                        col[index[(gi, mono)]] += ring.scalars.coerce(c)
                col = [ring.scalars.coerce(v) for v in col]
                cols.append(col)
        pres = from_columns(ring.scalars, len(basis), cols)
        md = ModuleDegree(d, basis, index, PresentedGroup(ring.scalars, len(basis), pres))
        self._real_cache[d] = md
        return md

    def element_column(self, elem, d: int):
        """Coordinates of a homogeneous element in the degree-d basis."""
        md = self.realize(d)
        col = [0] * md.size()
        for gi, poly in enumerate(elem):
            for mono, c in poly.terms:
                key = (gi, mono)
                if key not in md.index:
                    raise InhomogeneousElement(
                        f"term of generator {gi} does not land in degree {d}"
                    )
                col[md.index[key]] += self.ring.scalars.coerce(c)
        return [self.ring.scalars.coerce(v) for v in col]

    def action_matrix(self, f: Polynomial, d: int, fdeg: int | None = None) -> ExactMatrix:
        """Matrix of multiplication by homogeneous f: degree d -> d + |f|."""
        key = (f, d, fdeg)
        if key in self._act_cache:
            return self._act_cache[key]
        deg = f.degree_or_none(self.ring.var_degrees)
        if deg is None and fdeg is None:
            raise ValueError("multiplication by 0 needs an explicit degree")
        deg = deg if deg is not None else fdeg
        src = self.realize(d)
        dst = self.realize(d + deg)
        cols = []
        for gi, m in src.basis:
            col = [0] * dst.size()
            for mono, c in f.mul_mono(m).terms:
                col[dst.index[(gi, mono)]] = self.ring.scalars.coerce(c)
            cols.append(col)
        mat = from_columns(self.ring.scalars, dst.size(), cols)
        self._act_cache[key] = mat
        return mat

    def shifted(self, n: int) -> "GradedModule":
        """Suspension: realize(shifted(n), d) = realize(self, d - n)."""
        if n == 0:
            return self
        gens = tuple((name, deg + n) for name, deg in self.generators)
        return GradedModule(self.ring, gens, self.relations)

    def zero_element(self):
        return tuple(Polynomial.zero() for _ in self.generators)

    def describe(self) -> dict:
        names = self.ring.var_names
        rels = []
        for rel in self.relations:
            rels.append(
                {self.generators[gi][0]: poly.render(names) for gi, poly in enumerate(rel) if not poly.is_zero()}
            )
        return {
            "generators": [{"name": n, "degree": d} for n, d in self.generators],
            "relations": rels,
        }


def ring_as_module(ring: GradedRing) -> GradedModule:
    return GradedModule(ring, (("1", 0),), ())


def quotient_ring_module(ring: GradedRing, extra_relations) -> GradedModule:
    """R / (extra relations), as a module over R."""
    rels = tuple((poly,) for poly in extra_relations)
    return GradedModule(ring, (("1", 0),), rels)


def elem_mul_mono(elem, mono, coeff=1):
    return tuple(p.mul_mono(mono, coeff) if not p.is_zero() else p for p in elem)


def elem_scale_poly(elem, poly: Polynomial):
    return tuple((p * poly) if not p.is_zero() else p for p in elem)


@dataclass
class ModuleHom:
    """Internal-degree-0 morphism given by generator images."""

    src: GradedModule
    dst: GradedModule
    images: tuple  # one dst element per src generator

    def __post_init__(self):
        if len(self.images) != len(self.src.generators):
            raise ValueError("one image per source generator required")

    def matrix_at(self, d: int) -> ExactMatrix:
        src_md = self.src.realize(d)
        dst_md = self.dst.realize(d)
        cols = []
        for gi, m in src_md.basis:
            img = elem_mul_mono(self.images[gi], m)
            cols.append(self.dst.element_column(img, d))
        return from_columns(self.src.ring.scalars, dst_md.size(), cols)

    def group_map_at(self, d: int) -> GroupMap:
        return GroupMap(self.src.realize(d).pres, self.dst.realize(d).pres, self.matrix_at(d))

    def is_well_defined_in(self, degrees) -> bool:
        """Source relations must map to zero, checked degreewise."""
        for d in degrees:
            gm = self.group_map_at(d)
            if not gm.is_well_defined():
                return False
        return True


@dataclass
class IdealSpec:
    """Homogeneous positive-degree generators of an ideal.

    A zero generator is allowed for degenerate constructions but must
    carry an explicit degree.
    """

    generators: tuple  # Polynomials
    degrees: tuple  # internal degree of each generator

    @classmethod
    def from_polys(cls, ring: GradedRing, polys, degrees=None) -> "IdealSpec":
        polys = tuple(polys)
        degs = []
        for i, p in enumerate(polys):
            deg = ring.poly_degree(p)
            if deg is None:
                if degrees is None or degrees[i] is None:
                    raise ValueError("zero ideal generator needs an explicit degree")
                deg = degrees[i]
            degs.append(deg)
        for deg in degs:
            if deg < 1:
                raise ValueError("ideal generators must have positive degree")
        return cls(polys, tuple(degs))

    def __len__(self):
        return len(self.generators)


# ---------------------------------------------------------------------------
# Grading bounds and the torsion radical
# ---------------------------------------------------------------------------


def vanishing_bound(module: GradedModule, window, scan_slack: int = 8):
    """A certified integer B with module<d> = 0 for all d > B, or None.

    Soundness: if no generator sits above B and a full band of width
    max(variable degree) above B realizes to zero, then induction on
    degree kills everything above B.  The search scans up from the top
    of the window (plus the generator degrees) a bounded distance.
    """
    if not module.generators:
        return window[0] - 1
    maxvar = max(module.ring.var_degrees) if module.ring.variables else 1
    gen_top = max(module.gen_degrees)
    lo, hi = window
    start = max(gen_top, lo - 1)
    cap = max(hi, gen_top) + maxvar * scan_slack
    d0 = start
    while d0 <= cap:
        band_ok = True
        for d in range(d0 + 1, d0 + maxvar + 1):
            if not module.realize(d).group.is_zero():
                band_ok = False
                d0 = d  # a nonzero degree pushes the candidate up
                break
        if band_ok:
            return d0
    return None


@dataclass
class DegreewiseSubgroup:
    degree: int
    columns: ExactMatrix  # generators of the subgroup in realize(degree) coordinates
    group: FGAbGroup


@dataclass
class TorsionRadical:
    module: GradedModule
    ideal: IdealSpec
    window: tuple
    by_degree: dict  # d -> DegreewiseSubgroup
    certified: bool
    bound: int | None
    powers_used: dict  # d -> power at which the chain was accepted

    def group_at(self, d: int) -> FGAbGroup:
        sub = self.by_degree.get(d)
        return sub.group if sub else FGAbGroup.zero()


def _power_products(ring: GradedRing, ideal: IdealSpec, k: int):
    """All length-k products of ideal generators, as (poly, degree) pairs."""
    out = []

    def rec(i, left, poly, deg):
        if left == 0:
            out.append((poly, deg))
            return
        if i >= len(ideal.generators):
            return
        rec(i + 1, left, poly, deg)
        rec(i, left - 1, poly * ideal.generators[i], deg + ideal.degrees[i])

    rec(0, k, ring.one(), 0)
    return out


def _killed_by_all(module: GradedModule, products, d: int) -> ExactMatrix:
    """Subgroup of realize(d) annihilated by every product (a stacked kernel)."""
    from .groups import _preimage_lattice

    md = module.realize(d)
    blocks = []
    rel_blocks = []
    for poly, pdeg in products:
        mat = module.action_matrix(poly, d, fdeg=pdeg)
        blocks.append(mat)
        rel_blocks.append(module.realize(d + pdeg).pres.rels)
    if not blocks:
        return ExactMatrix.identity(module.ring.scalars, md.size())
    total_rows = sum(b.rows for b in blocks)
    stacked_rows = []
    for b in blocks:
        stacked_rows.extend([row[:] for row in b.data])
    stacked = ExactMatrix(module.ring.scalars, total_rows, md.size(), stacked_rows)
    # block-diagonal relation matrix of the targets
    rel_cols_total = sum(r.cols for r in rel_blocks)
    rel_data = [[0] * rel_cols_total for _ in range(total_rows)]
    row0 = 0
    col0 = 0
    for b, r in zip(blocks, rel_blocks):
        for i in range(r.rows):
            for j in range(r.cols):
                rel_data[row0 + i][col0 + j] = r.data[i][j]
        row0 += b.rows
        col0 += r.cols
    rels = ExactMatrix(module.ring.scalars, total_rows, rel_cols_total, rel_data)
    return _preimage_lattice(stacked, rels)


def _subgroups_equal(pres: PresentedGroup, a: ExactMatrix, b: ExactMatrix) -> bool:
    """Equality of subgroups of pres generated by columns of a and b
    (both taken together with the relation lattice)."""
    from .exact import hstack, solve_columns

    lat_a = hstack(a, pres.rels) if pres.rels.cols else a
    lat_b = hstack(b, pres.rels) if pres.rels.cols else b
    if b.cols and lat_a.cols == 0:
        return all(not v for row in b.data for v in row)
    if a.cols and lat_b.cols == 0:
        return all(not v for row in a.data for v in row)
    ok_ab = all(s is not None for s in solve_columns(lat_b, a)) if a.cols else True
    ok_ba = all(s is not None for s in solve_columns(lat_a, b)) if b.cols else True
    return ok_ab and ok_ba


def torsion_radical(
    module: GradedModule,
    ideal: IdealSpec,
    window,
    power_cap: int = 16,
    require_certified: bool = False,
) -> TorsionRadical:
    """Degreewise elements killed by a power of the ideal.

    When the module has a certified vanishing bound the answer is exact
    (and equals the whole degree piece); otherwise the power of the ideal
    is capped and the result is labeled within-window.
    """
    lo, hi = window
    bound = vanishing_bound(module, window)
    min_gen_deg = min(ideal.degrees) if ideal.degrees else 1
    if require_certified and bound is None:
        raise WindowTooSmall("no vanishing bound detected; cannot certify torsion membership")
    by_degree = {}
    powers_used = {}
    for d in range(lo, hi + 1):
        md = module.realize(d)
        if md.group.is_zero():
            by_degree[d] = DegreewiseSubgroup(d, ExactMatrix.zero(module.ring.scalars, md.size(), 0), FGAbGroup.zero())
            powers_used[d] = 0
            continue
        if bound is not None:
            # every element dies for degree reasons: radical is everything
            k = max(0, (bound - d) // min_gen_deg + 1)
            cols = ExactMatrix.identity(module.ring.scalars, md.size())
            by_degree[d] = DegreewiseSubgroup(d, cols, md.group)
            powers_used[d] = k
            continue
        prev = None
        streak = 0
        k = 0
        cols = None
        while k < power_cap:
            k += 1
            cur = _killed_by_all(module, _power_products(module.ring, ideal, k), d)
            if prev is not None and _subgroups_equal(md.pres, prev, cur):
                streak += 1
                if streak >= 2:
                    cols = cur
                    break
            else:
                streak = 0
            prev = cur
        if cols is None:
            cols = prev
        # group of the subgroup: generated by cols inside md.pres
        sub_pres_rels = _sub_relations(md.pres, cols)
        by_degree[d] = DegreewiseSubgroup(d, cols, sub_pres_rels)
        powers_used[d] = k
    return TorsionRadical(module, ideal, (lo, hi), by_degree, bound is not None, bound, powers_used)


def _sub_relations(pres: PresentedGroup, cols: ExactMatrix) -> FGAbGroup:
    """Abstract group generated by the given columns inside pres."""
    from .groups import _preimage_lattice
    from .exact import cokernel

    if cols.cols == 0:
        return FGAbGroup.zero()
    rel = _preimage_lattice(cols, pres.rels)
    return cokernel(rel)


def column_to_element(module: GradedModule, d: int, column):
    """Turn realize(d) coordinates back into a generator combination."""
    md = module.realize(d)
    polys = [dict() for _ in module.generators]
    for (gi, mono), c in zip(md.basis, column):
        if c:
            polys[gi][mono] = polys[gi].get(mono, 0) + c
    return tuple(Polynomial.from_dict(p) for p in polys)


def quotient_by_radical(radical: TorsionRadical) -> GradedModule:
    """M / t(M), valid degreewise inside the radical's window.

    The radical is a submodule, so adding its degreewise generators as
    relations realizes exactly M<d>/t(M)<d> for every window degree.
    """
    module = radical.module
    new_rels = list(module.relations)
    for d, sub in sorted(radical.by_degree.items()):
        for j in range(sub.columns.cols):
            col = sub.columns.column(j)
            if any(col):
                new_rels.append(column_to_element(module, d, col))
    return GradedModule(module.ring, module.generators, tuple(new_rels))
