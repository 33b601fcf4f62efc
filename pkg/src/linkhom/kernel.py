"""Public operations of the symbolic kernel on twisted free modules.

Thin, validated wrappers over the Groebner engine: canonical bases, normal
forms, syzygies, matrix kernels, and Hilbert data, phrased in terms of
:class:`FreeVector` (a row of polynomials plus the twist of each component).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InputError, ShapeError
from .freemodules import (
    buchberger,
    standard_monomial_counts,
    syzygies,
    vec_degree,
    vec_from_polys,
    vec_is_homogeneous,
    vec_normal_form,
    vec_to_polys,
)
from .hilbert import HilbertTable
from .ideals import Ideal
from .rings import GradedRing, Poly


@dataclass(frozen=True)
class FreeVector:
    """An element of a twisted free module, one polynomial per component."""

    components: tuple
    twists: tuple

    def __post_init__(self):
        if len(self.components) != len(self.twists):
            raise ShapeError("component count must equal twist count")

    @staticmethod
    def make(polys, twists) -> "FreeVector":
        return FreeVector(tuple(polys), tuple(twists))

    def to_vec(self):
        return vec_from_polys(self.components)

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.components)


def _common_shape(gens, ring):
    shapes = {g.twists for g in gens}
    if len(shapes) > 1:
        raise ShapeError("mixed free-module shapes")
    twists = shapes.pop() if shapes else None
    S = ring.poly_ring
    for g in gens:
        v = g.to_vec()
        if not vec_is_homogeneous(S, v, g.twists):
            raise InputError("inhomogeneous generator")
    return twists


def groebner_basis(gens, ring: GradedRing, twists=None):
    """Reduced Groebner basis of <gens> + (defining ideal)·F; canonical.

    The result is independent of the order of the input generators.
    """
    shape = _common_shape(gens, ring)
    if shape is None:
        shape = tuple(twists) if twists is not None else None
    if shape is None:
        return []
    S = ring.poly_ring
    family = [g.to_vec() for g in gens if not g.is_zero()]
    for f in ring.ideal_gb():
        for c in range(len(shape)):
            family.append({(c, m): coeff for m, coeff in f.terms.items()})
    basis, _ = buchberger(S, family, rank=len(shape), full_reduce=True)
    return [FreeVector.make(vec_to_polys(S, b, len(shape)), shape) for b in basis]


def normal_form(v: FreeVector, gb, ring: GradedRing) -> FreeVector:
    """The unique fully reduced remainder of v against a Groebner basis.

    v lies in the submodule iff the result is zero.
    """
    for g in gb:
        if g.twists != v.twists:
            raise ShapeError("vector and basis come from different free modules")
    S = ring.poly_ring
    basis = [g.to_vec() for g in gb]
    r, _ = vec_normal_form(S, v.to_vec(), basis)
    return FreeVector.make(vec_to_polys(S, r, len(v.twists)), v.twists)


def syzygy_generators(gens, ring: GradedRing, twists=None):
    """Columns generating the syzygy module of ``gens`` over the quotient ring.

    Includes the relations induced by the defining ideal; every column is
    homogeneous.  Returned as FreeVectors over R^len(gens) whose twists are
    the negated generator degrees.
    """
    shape = _common_shape(gens, ring)
    if shape is None:
        shape = tuple(twists) if twists is not None else ()
    S = ring.poly_ring
    vecs = [g.to_vec() for g in gens]
    cols = syzygies(ring, shape, vecs)
    out_twists = tuple(
        -(vec_degree(S, v, shape) if v else 0) for v in vecs
    )
    return [FreeVector.make(vec_to_polys(S, c, len(gens)), out_twists) for c in cols]


def kernel_of_matrix(rows, ring: GradedRing, row_twists):
    """Generators of the kernel of the matrix (rows of polynomials) viewed as a
    map between twisted free modules over the quotient ring.

    ``rows[i][j]`` maps source component j into target component i; target
    twists are given, source twists are inferred from entry degrees and must
    be consistent (ShapeError otherwise).
    """
    if not rows:
        return []
    ncols = len(rows[0])
    if any(len(r) != ncols for r in rows):
        raise ShapeError("ragged matrix")
    row_twists = tuple(row_twists)
    if len(row_twists) != len(rows):
        raise ShapeError("one twist per matrix row required")
    col_twists = []
    for j in range(ncols):
        tw = None
        for i, row in enumerate(rows):
            p = row[j]
            if p.is_zero():
                continue
            if not p.is_homogeneous():
                raise InputError("inhomogeneous matrix entry")
            t = row_twists[i] - p.degree()
            if tw is None:
                tw = t
            elif tw != t:
                raise ShapeError("inconsistent column twists")
        col_twists.append(tw if tw is not None else 0)
    cols = []
    for j in range(ncols):
        cols.append(vec_from_polys([rows[i][j] for i in range(len(rows))]))
    out = syzygies(ring, row_twists, cols)
    S = ring.poly_ring
    return [FreeVector.make(vec_to_polys(S, c, ncols), tuple(col_twists)) for c in out]


def hilbert_table(gens, ring: GradedRing, window, twists=None) -> HilbertTable:
    """dim_k (F/N)_d over the window, for N the submodule generated by gens."""
    lo, hi = window
    if hi < lo:
        raise InputError("empty degree window")
    shape = _common_shape(gens, ring)
    if shape is None:
        shape = tuple(twists) if twists is not None else ()
    family = [g.to_vec() for g in gens if not g.is_zero()]
    for f in ring.ideal_gb():
        for c in range(len(shape)):
            family.append({(c, m): coeff for m, coeff in f.terms.items()})
    if family:
        basis, _ = buchberger(ring.poly_ring, family, rank=len(shape))
        from .freemodules import vec_lt

        lts = [vec_lt(ring.poly_ring, b)[0] for b in basis]
    else:
        lts = []
    counts = standard_monomial_counts(ring, shape, lts, range(lo, hi + 1))
    return HilbertTable.from_dict(counts, window)
