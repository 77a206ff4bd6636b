"""Finitely presented abelian groups (or vector spaces) with homomorphisms.

A :class:`PresentedGroup` is coker(relations) on a chosen generator set;
a :class:`GroupMap` is a matrix on generators that descends to the
quotients.  Kernels, images, exactness and isomorphism tests reduce to
lattice membership, which :mod:`loccoh.exact` provides over Z and over
fields uniformly.

These are the degreewise realizations every graded computation bottoms
out in, so the routines favour clarity over asymptotics.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .exact import (
    ExactMatrix,
    Scalars,
    cokernel,
    from_columns,
    hstack,
    kernel_basis,
    mat_mul,
    solve_columns,
)
from .fgab import FGAbGroup


@dataclass
class PresentedGroup:
    scalars: Scalars
    gens: int
    rels: ExactMatrix  # gens x k; columns are relations
    _group: FGAbGroup | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.rels.rows != self.gens:
            raise ValueError("relation matrix must have one row per generator")

    @classmethod
    def free(cls, scalars: Scalars, gens: int) -> "PresentedGroup":
        return cls(scalars, gens, ExactMatrix.zero(scalars, gens, 0))

    @classmethod
    def zero(cls, scalars: Scalars) -> "PresentedGroup":
        return cls.free(scalars, 0)

    def group(self) -> FGAbGroup:
        if self._group is None:
            self._group = cokernel(self.rels)
        return self._group

    def is_zero(self) -> bool:
        return self.group().is_zero()

    def contains_in_relations(self, vectors: ExactMatrix) -> bool:
        """Do the columns represent 0, i.e. lie in the relation lattice?"""
        if vectors.cols == 0:
            return True
        if self.gens == 0:
            return True
        return all(s is not None for s in solve_columns(self.rels, vectors))


@dataclass
class GroupMap:
    src: PresentedGroup
    dst: PresentedGroup
    matrix: ExactMatrix  # dst.gens x src.gens

    def __post_init__(self):
        if self.matrix.rows != self.dst.gens or self.matrix.cols != self.src.gens:
            raise ValueError("map matrix shape does not match generators")

    @classmethod
    def zero(cls, src: PresentedGroup, dst: PresentedGroup) -> "GroupMap":
        return cls(src, dst, ExactMatrix.zero(src.scalars, dst.gens, src.gens))

    def is_well_defined(self) -> bool:
        """Relations of the source must map into the relation lattice."""
        if self.src.rels.cols == 0:
            return True
        image_of_rels = mat_mul(self.matrix, self.src.rels)
        return self.dst.contains_in_relations(image_of_rels)

    def compose(self, earlier: "GroupMap") -> "GroupMap":
        return GroupMap(earlier.src, self.dst, mat_mul(self.matrix, earlier.matrix))

    def is_zero_map(self) -> bool:
        return self.dst.contains_in_relations(self.matrix)

    def kernel(self) -> tuple[PresentedGroup, ExactMatrix]:
        """Kernel subgroup: (presentation, inclusion) with inclusion columns
        expressing the kernel generators in source coordinates."""
        gens_cols = _preimage_lattice(self.matrix, self.dst.rels)
        rel_cols = _preimage_lattice(gens_cols, self.src.rels)
        ker = PresentedGroup(self.src.scalars, gens_cols.cols, rel_cols)
        return ker, gens_cols

    def kernel_group(self) -> FGAbGroup:
        return self.kernel()[0].group()

    def cokernel_group(self) -> FGAbGroup:
        return cokernel(hstack(self.matrix, self.dst.rels))

    def image_group(self) -> FGAbGroup:
        """The image as an abstract group (source modulo the kernel)."""
        rel = _preimage_lattice(self.matrix, self.dst.rels)
        return cokernel(rel)

    def is_isomorphism(self) -> bool:
        if not self.cokernel_group().is_zero():
            return False
        ker_gens = _preimage_lattice(self.matrix, self.dst.rels)
        return self.src.contains_in_relations(ker_gens)


def _preimage_lattice(matrix: ExactMatrix, target_rels: ExactMatrix) -> ExactMatrix:
    """Columns generating {x : matrix*x lies in the lattice of target_rels}.

    Stacks [matrix | target_rels], takes the kernel and projects to the
    x-part.  Over a field the same construction yields a spanning set of
    the solution space.
    """
    n = matrix.cols
    if n == 0:
        return ExactMatrix.zero(matrix.scalars, 0, 0)
    if matrix.rows == 0:
        return ExactMatrix.identity(matrix.scalars, n)
    stacked = hstack(matrix, target_rels) if target_rels.cols else matrix
    kern = kernel_basis(stacked)
    cols = [[kern.data[i][j] for i in range(n)] for j in range(kern.cols)]
    cols = [c for c in cols if any(c)]
    return from_columns(matrix.scalars, n, cols)


def subquotient(incoming: GroupMap, outgoing: GroupMap):
    """Homology-style subquotient ker(outgoing)/im(incoming) at the shared
    middle group.

    Returns (homology: PresentedGroup, cycle_basis: ExactMatrix) where the
    columns of cycle_basis express the homology generators in the middle
    group's generator coordinates.
    """
    mid = outgoing.src
    if incoming.dst is not mid and incoming.dst.gens != mid.gens:
        raise ValueError("incoming and outgoing maps do not share the middle group")
    cycles = _preimage_lattice(outgoing.matrix, outgoing.dst.rels)
    kill = hstack(incoming.matrix, mid.rels) if incoming.matrix.cols else mid.rels
    rel = _preimage_lattice(cycles, kill)
    return PresentedGroup(mid.scalars, cycles.cols, rel), cycles


def induced_map(
    src_h: PresentedGroup,
    src_cycles: ExactMatrix,
    dst_h: PresentedGroup,
    dst_cycles: ExactMatrix,
    chain_matrix: ExactMatrix,
    dst_incoming: ExactMatrix,
    dst_rels: ExactMatrix,
) -> GroupMap:
    """Map on subquotients induced by a chain-level matrix.

    Each source homology generator (a cycle) is pushed through the chain
    map and rewritten as a destination cycle modulo boundaries.
    """
    pushed = mat_mul(chain_matrix, src_cycles)
    if src_cycles.cols == 0:
        return GroupMap.zero(src_h, dst_h)
    solve_against = dst_cycles
    extra = [m for m in (dst_incoming, dst_rels) if m.cols]
    for m in extra:
        solve_against = hstack(solve_against, m)
    sols = solve_columns(solve_against, pushed)
    if any(s is None for s in sols):
        raise ValueError("chain map does not send cycles to cycles")
    cols = [s[: dst_cycles.cols] for s in sols]
    return GroupMap(src_h, dst_h, from_columns(chain_matrix.scalars, dst_cycles.cols, cols))


def is_exact_at(first: GroupMap, second: GroupMap) -> bool:
    """Exactness of ``A -> B -> C`` at B: im(first) = ker(second)."""
    composite = second.compose(first)
    if not composite.is_zero_map():
        return False
    _, ker_gens = second.kernel()
    if ker_gens.cols == 0:
        return True
    kill = hstack(first.matrix, first.dst.rels) if first.matrix.cols else first.dst.rels
    if kill.cols == 0:
        return all(not v for row in ker_gens.data for v in row)
    return all(s is not None for s in solve_columns(kill, ker_gens))
