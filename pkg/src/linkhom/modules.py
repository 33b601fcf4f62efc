"""Finitely presented graded modules and the homological toolkit.

An :class:`FPModule` is the cokernel of a homogeneous matrix between twisted
free modules over a graded ring.  Everything downstream (Hom, tensor, Ext,
Tor, depth, isomorphism testing) is built from three primitives:

* syzygies over the quotient ring (kernel computations),
* Nakayama minimalization of generating sets,
* exact linear algebra on graded pieces.

Modules built as subquotients of a free module keep their ambient
representation, so natural maps (evaluation, biduality, homothety) can be
written down explicitly and verified, never assumed.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass

from .errors import InputError, ShapeError
from .freemodules import (
    GaussianSolver,
    SubmoduleGB,
    finite_standard_monomials,
    nf_vec_mod_ideal,
    standard_monomial_counts,
    syzygies,
    vec_add,
    vec_component,
    vec_degree,
    vec_from_polys,
    vec_is_homogeneous,
    vec_key,
    vec_mul_poly,
    vec_neg,
    vec_scale,
)
from .hilbert import HilbertTable
from .ideals import Ideal, colon_with_element, intersect_ideals, krull_dimension, ring_dimension, unit_ideal
from .rings import GradedRing, Poly, monomials_of_degree


# ---------------------------------------------------------------------------
# FPModule
# ---------------------------------------------------------------------------

class FPModule:
    """A finitely presented graded module: coker of a homogeneous matrix.

    ``gen_twists``: twist of each free summand of F0 (the generator e_i has
    degree -gen_twists[i]).  ``relations``: columns as sparse vecs over the
    generators; entries are stored as normal forms modulo the defining ideal.

    A module produced as a subquotient of a free module additionally carries
    ``amb_twists``, ``gen_reps`` (ambient vectors for its generators) and
    ``denominators`` (the submodule that was quotiented away).
    """

    def __init__(self, ring: GradedRing, gen_twists, relations, minimal_flag=None,
                 ambient=None):
        self.ring = ring
        self.gen_twists = tuple(gen_twists)
        rank = len(self.gen_twists)
        S = ring.poly_ring
        cols = []
        for col in relations:
            v = nf_vec_mod_ideal(ring, dict(col))
            if not v:
                continue
            for (c, _m) in v:
                if not 0 <= c < rank:
                    raise ShapeError("relation hits a nonexistent generator")
            if not vec_is_homogeneous(S, v, self.gen_twists):
                raise InputError("inhomogeneous relation column")
            cols.append(v)
        self.relations = tuple(cols)
        self.rel_twists = tuple(-vec_degree(S, c, self.gen_twists) for c in self.relations)
        self.minimal_flag = minimal_flag
        self.ambient = ambient  # (amb_twists, gen_reps, denominators) or None
        self._cache: dict = {}

    # -- basic structure ----------------------------------------------------

    @property
    def rank(self) -> int:
        return len(self.gen_twists)

    @property
    def nrels(self) -> int:
        return len(self.relations)

    def gen_degrees(self):
        return [-t for t in self.gen_twists]

    def rel_degrees(self):
        return [-t for t in self.rel_twists]

    def rel_submodule(self, track=False) -> SubmoduleGB:
        key = ("relgb", track)
        if key not in self._cache:
            self._cache[key] = SubmoduleGB(self.ring, self.gen_twists, self.relations, track=track)
        return self._cache[key]

    def is_zero(self) -> bool:
        if "is_zero" not in self._cache:
            sub = self.rel_submodule()
            one = self.ring.field.one
            zm = self.ring.poly_ring.zero_mon
            self._cache["is_zero"] = all(
                sub.contains({(c, zm): one}) for c in range(self.rank)
            )
        return self._cache["is_zero"]

    def key(self):
        return (self.ring.key, self.gen_twists,
                tuple(sorted(vec_key(c) for c in self.relations)))

    def hash_id(self) -> str:
        h = hashlib.sha256(repr(self.key()).encode()).hexdigest()
        return h[:12]

    def __repr__(self):
        return f"FPModule({self.ring!r}, gens={self.rank}, rels={self.nrels})"

    # -- ambient representations --------------------------------------------

    def rep_of(self, gen_coords):
        """Ambient vector for an element given in generator coordinates."""
        amb_twists, reps, _ = self._ambient_data()
        K = self.ring.field
        out = {}
        by_gen: dict[int, dict] = {}
        for (j, m), c in gen_coords.items():
            by_gen.setdefault(j, {})[m] = c
        for j, poly in by_gen.items():
            for key, a in vec_mul_poly(K, reps[j], poly).items():
                s = K.add(out.get(key, K.zero), a)
                if s == K.zero:
                    out.pop(key, None)
                else:
                    out[key] = s
        return nf_vec_mod_ideal(self.ring, out)

    def express(self, ambient_vec):
        """Generator coordinates of an ambient vector, or None if outside."""
        amb_twists, reps, denoms = self._ambient_data()
        key = "express_gb"
        if key not in self._cache:
            self._cache[key] = SubmoduleGB(
                self.ring, amb_twists, list(reps) + list(denoms), track=True
            )
        sub = self._cache[key]
        lifted = sub.lift(dict(ambient_vec))
        if lifted is None:
            return None
        out = {}
        for j in range(self.rank):
            for m, c in lifted[j].terms.items():
                out[(j, m)] = c
        return out

    def _ambient_data(self):
        if self.ambient is not None:
            return self.ambient
        # a plain cokernel is a subquotient of its own generator space
        one = self.ring.field.one
        zm = self.ring.poly_ring.zero_mon
        reps = tuple({(i, zm): one} for i in range(self.rank))
        return (self.gen_twists, reps, self.relations)

    # -- Hilbert data ---------------------------------------------------------

    def hilbert(self, window) -> HilbertTable:
        key = ("hilb", tuple(window))
        if key not in self._cache:
            lo, hi = window
            lts = self.rel_submodule().leading_terms()
            counts = standard_monomial_counts(self.ring, self.gen_twists, lts, range(lo, hi + 1))
            self._cache[key] = HilbertTable.from_dict(counts, window)
        return self._cache[key]

    def finite_table(self) -> HilbertTable | None:
        """Exact full Hilbert table when the module has finite length, else None."""
        if "finite_table" not in self._cache:
            if self.rank == 0:
                self._cache["finite_table"] = HilbertTable((0, 0), ((0, 0),), True)
            else:
                lts = self.rel_submodule().leading_terms()
                std = finite_standard_monomials(self.ring, self.gen_twists, lts)
                if std is None:
                    self._cache["finite_table"] = None
                else:
                    S = self.ring.poly_ring
                    degs: dict[int, int] = {}
                    for (c, m) in std:
                        d = S.wdeg(m) - self.gen_twists[c]
                        degs[d] = degs.get(d, 0) + 1
                    if degs:
                        window = (min(degs), max(degs))
                    else:
                        window = (0, 0)
                    self._cache["finite_table"] = HilbertTable.from_dict(degs, window, complete=True)
        return self._cache["finite_table"]

    def total_dim(self):
        t = self.finite_table()
        return None if t is None else t.total()


def default_window(*modules) -> tuple:
    """Window covering all generator/relation degrees plus a dim+3 margin."""
    los, his = [0], [0]
    dim = 0
    for m in modules:
        dim = max(dim, ring_dimension(m.ring))
        degs = m.gen_degrees() + m.rel_degrees()
        if degs:
            los.append(min(degs))
            his.append(max(degs))
    return (min(los) - 1, max(his) + dim + 3)


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------

def free_module(ring: GradedRing, twists) -> FPModule:
    return FPModule(ring, twists, (), minimal_flag="minimal")


def cyclic_module(ring: GradedRing, ideal: Ideal) -> FPModule:
    """R/a as a module with one generator in degree zero."""
    cols = [{(0, m): c for m, c in g.terms.items()} for g in ideal.gens]
    return FPModule(ring, (0,), cols)


def residue_field(ring: GradedRing) -> FPModule:
    """k = R/m, cached on the ring."""
    if "residue_field" not in ring._cache:
        S = ring.poly_ring
        cols = [{(0, tuple(1 if j == i else 0 for j in range(S.nvars))): ring.field.one}
                for i in range(S.nvars)]
        ring._cache["residue_field"] = FPModule(ring, (0,), cols, minimal_flag="minimal")
    return ring._cache["residue_field"]


def twist_module(M: FPModule, twist: int) -> FPModule:
    if twist == 0:
        return M
    amb = None
    if M.ambient is not None:
        at, reps, dens = M.ambient
        amb = (tuple(t + twist for t in at), reps, dens)
    return FPModule(M.ring, [t + twist for t in M.gen_twists], M.relations,
                    minimal_flag=M.minimal_flag, ambient=amb)


def direct_sum(M: FPModule, N: FPModule) -> FPModule:
    if M.ring != N.ring:
        raise InputError("direct sum over different rings")
    r = M.rank
    cols = [dict(c) for c in M.relations]
    for c in N.relations:
        cols.append({(i + r, m): v for (i, m), v in c.items()})
    return FPModule(M.ring, M.gen_twists + N.gen_twists, cols)


def subquotient(ring: GradedRing, amb_twists, gens, denominators) -> FPModule:
    """(⟨gens⟩ + ⟨denominators⟩)/⟨denominators⟩ inside a twisted free module.

    Generators are kept in the given order (so callers can refer to them);
    relations come from syzygies of [gens | denominators] over the ring.
    """
    S = ring.poly_ring
    gens = [nf_vec_mod_ideal(ring, dict(g)) for g in gens]
    denominators = [nf_vec_mod_ideal(ring, dict(w)) for w in denominators]
    denominators = [w for w in denominators if w]
    if any(not g for g in gens):
        raise InputError("zero vector among subquotient generators")
    gtw = tuple(-vec_degree(S, g, tuple(amb_twists)) for g in gens)
    k = len(gens)
    cols = []
    for s in syzygies(ring, tuple(amb_twists), gens + denominators):
        first = {(c, m): v for (c, m), v in s.items() if c < k}
        if first:
            cols.append(first)
    return FPModule(ring, gtw, cols,
                    ambient=(tuple(amb_twists), tuple(gens), tuple(denominators)))


def preimage_gens(ring: GradedRing, tgt_twists, map_cols, denom_cols):
    """Generators of {v in source : (map)v ∈ ⟨denominators⟩} for a free source.

    ``map_cols[i]`` is the image of the i-th source basis vector in the target
    free module.  Returns vectors over the source basis.
    """
    if not map_cols:
        return []
    k = len(map_cols)
    out = []
    for s in syzygies(ring, tuple(tgt_twists), list(map_cols) + list(denom_cols)):
        first = {(c, m): v for (c, m), v in s.items() if c < k}
        if first:
            out.append(first)
    return out


# ---------------------------------------------------------------------------
# graded maps
# ---------------------------------------------------------------------------

class GradedMap:
    """A degree-zero homomorphism between FPModules, given on generators.

    ``cols[j]`` is the image of the j-th source generator, as a vec over the
    target generators.  Construction verifies homogeneity; compatibility with
    relations (the witness matrix) is verified on demand and cached.
    """

    def __init__(self, source: FPModule, target: FPModule, cols, check=True):
        if source.ring != target.ring:
            raise InputError("map between modules over different rings")
        self.source = source
        self.target = target
        self.cols = tuple(nf_vec_mod_ideal(source.ring, dict(c)) for c in cols)
        if len(self.cols) != source.rank:
            raise ShapeError("one column per source generator required")
        S = source.ring.poly_ring
        for j, c in enumerate(self.cols):
            if not c:
                continue
            if not vec_is_homogeneous(S, c, target.gen_twists):
                raise InputError("inhomogeneous map column")
            if vec_degree(S, c, target.gen_twists) != -source.gen_twists[j]:
                raise InputError("map is not degree zero")
        self._witness = None
        if check:
            self.witness()

    def apply(self, gen_coords):
        """Image of a source element (vec over source gens) as a vec over target gens."""
        K = self.source.ring.field
        by_gen: dict[int, dict] = {}
        for (j, m), c in gen_coords.items():
            by_gen.setdefault(j, {})[m] = c
        out: dict = {}
        for j, poly in by_gen.items():
            for key, a in vec_mul_poly(K, self.cols[j], poly).items():
                s = K.add(out.get(key, K.zero), a)
                if s == K.zero:
                    out.pop(key, None)
                else:
                    out[key] = s
        return nf_vec_mod_ideal(self.source.ring, out)

    def witness(self):
        """Relation-compatibility certificate: columns over the target relations
        with gen_matrix·(source relations) = (target relations)·witness."""
        if self._witness is None:
            sub = self.target.rel_submodule(track=True)
            wit = []
            for rel in self.source.relations:
                image = self.apply(rel)
                lifted = sub.lift(image)
                if lifted is None:
                    raise InputError("matrix does not send relations into relations")
                wit.append(lifted)
            self._witness = tuple(wit)
        return self._witness

    def compose(self, inner: "GradedMap") -> "GradedMap":
        """self ∘ inner."""
        if inner.target is not self.source and inner.target.key() != self.source.key():
            raise ShapeError("composition shape mismatch")
        cols = [self.apply(c) for c in inner.cols]
        return GradedMap(inner.source, self.target, cols, check=False)

    def add(self, other: "GradedMap") -> "GradedMap":
        K = self.source.ring.field
        cols = [vec_add(K, a, b) for a, b in zip(self.cols, other.cols)]
        return GradedMap(self.source, self.target, cols, check=False)

    def scale(self, c) -> "GradedMap":
        K = self.source.ring.field
        return GradedMap(self.source, self.target,
                         [vec_scale(K, col, K.coerce(c)) for col in self.cols], check=False)

    def is_zero_map(self) -> bool:
        sub = self.target.rel_submodule()
        return all(sub.contains(c) for c in self.cols)

    def equals(self, other: "GradedMap") -> bool:
        K = self.source.ring.field
        sub = self.target.rel_submodule()
        return all(
            sub.contains(vec_add(K, a, vec_neg(K, b)))
            for a, b in zip(self.cols, other.cols)
        )


def identity_map(M: FPModule) -> GradedMap:
    one = M.ring.field.one
    zm = M.ring.poly_ring.zero_mon
    return GradedMap(M, M, [{(i, zm): one} for i in range(M.rank)], check=False)


def zero_map(M: FPModule, N: FPModule) -> GradedMap:
    return GradedMap(M, N, [{} for _ in range(M.rank)], check=False)


def kernel_of_map(phi: GradedMap):
    """(K, inclusion K -> source); K keeps its ambient representation."""
    ring = phi.source.ring
    U = preimage_gens(ring, phi.target.gen_twists, list(phi.cols),
                      list(phi.target.relations))
    sub = phi.source.rel_submodule()
    U = [u for u in U if not sub.contains(u)]
    K = subquotient(ring, phi.source.gen_twists, U, phi.source.relations)
    incl = GradedMap(K, phi.source, U, check=False)
    return K, incl


def cokernel_of_map(phi: GradedMap) -> FPModule:
    cols = [c for c in phi.cols if c] + list(phi.target.relations)
    return FPModule(phi.source.ring, phi.target.gen_twists, cols)


def image_of_map(phi: GradedMap) -> FPModule:
    """The image as a subquotient of the target's generator space."""
    ring = phi.source.ring
    sub = phi.target.rel_submodule()
    U = [c for c in phi.cols if c and not sub.contains(c)]
    return subquotient(ring, phi.target.gen_twists, U, phi.target.relations)


def homology_at(ring, amb_twists, kernel_gens, image_cols, denom_cols) -> FPModule:
    """ker/im inside an ambient free module with denominators already present."""
    U = [u for u in kernel_gens]
    dens = list(image_cols) + list(denom_cols)
    sub = SubmoduleGB(ring, amb_twists, dens)
    U = [u for u in U if not sub.contains(u)]
    if not U:
        return FPModule(ring, (), ())
    return subquotient(ring, amb_twists, U, dens)


# ---------------------------------------------------------------------------
# minimal presentations
# ---------------------------------------------------------------------------

def nakayama_min_gens(ring: GradedRing, twists, vectors):
    """A minimal generating subset of ⟨vectors⟩ over R, by graded Nakayama.

    Vectors are processed in increasing degree; one is kept iff it is not in
    ⟨kept⟩ + m·⟨vectors⟩ (+ I·F).  Deterministic for a fixed input list.
    Vectors supported on disjoint component classes are minimalized
    independently (minimal generators of a direct sum split blockwise).
    """
    from .freemodules import _component_classes

    S = ring.poly_ring
    twists = tuple(twists)
    vectors = [nf_vec_mod_ideal(ring, dict(v)) for v in vectors]
    vectors = [v for v in vectors if v]
    if not vectors:
        return []
    classes = _component_classes(len(twists), vectors)
    if len(classes) > 1:
        out = []
        for cls in classes:
            pos = {c: p for p, c in enumerate(cls)}
            sub = [{(pos[c], m): a for (c, m), a in v.items()}
                   for v in vectors if next(iter(v))[0] in pos]
            if not sub:
                continue
            back = {p: c for c, p in pos.items()}
            for v in _nakayama_core(ring, tuple(twists[c] for c in cls), sub):
                out.append({(back[p], m): a for (p, m), a in v.items()})
        return out
    return _nakayama_core(ring, twists, vectors)


def _nakayama_core(ring: GradedRing, twists, vectors):
    # Degree-by-degree linear algebra: the degree-d piece of the submodule
    # generated by {w} is the k-span of its monomial multiples landing in
    # degree d, so redundancy of v is a finite exact linear system.
    S = ring.poly_ring
    K = ring.field
    degs = [vec_degree(S, v, twists) for v in vectors]
    order = sorted(range(len(vectors)), key=lambda i: (degs[i], vec_key(vectors[i])))
    kept: list = []
    by_degree: dict[int, list] = {}
    for i in order:
        by_degree.setdefault(degs[i], []).append(i)
    for d in sorted(by_degree):
        solver = GaussianSolver(K)
        tag = 0
        for j, w in enumerate(vectors):
            gap = d - degs[j]
            if gap <= 0:
                continue
            for m in monomials_of_degree(S, gap):
                solver.add(vec_mul_poly(K, w, {m: K.one}), tag)
                tag += 1
        for f in ring.defining_ideal:
            fd = f.degree()
            for c, t in enumerate(twists):
                gap = d + t - fd
                if gap < 0:
                    continue
                for m in monomials_of_degree(S, gap):
                    vec = {(c, mon): K.mul(coeff, K.one)
                           for mon, coeff in (f * S.monomial(m)).terms.items()}
                    solver.add(vec, tag)
                    tag += 1
        for i in by_degree[d]:
            if solver.add(vectors[i], tag):
                kept.append(i)
            tag += 1
    kept.sort()
    return [vectors[i] for i in kept]


def minimal_presentation(M: FPModule):
    """Minimal presentation plus transition maps (to_min, from_min).

    Unit entries are cancelled until every matrix entry lies in the maximal
    ideal, then the relation columns are cut down to a minimal generating set
    of the syzygy module.  Idempotent; the result is cached.
    """
    if "minimal" in M._cache:
        return M._cache["minimal"]

    ring = M.ring
    K = ring.field
    S = ring.poly_ring
    zm = S.zero_mon
    twists = list(M.gen_twists)
    cols = [dict(c) for c in M.relations]
    # transition data: P maps old gens into current coordinates,
    # J maps current gens into old coordinates
    P = [{(i, zm): K.one} for i in range(M.rank)]
    J = [{(i, zm): K.one} for i in range(M.rank)]

    def substitute(vecs, i, repl):
        """Replace e_i by repl in each vec, then drop component i (reindex)."""
        out = []
        for v in vecs:
            poly_i = {m: c for (c0, m), c in v.items() if c0 == i}
            rest = {key: c for key, c in v.items() if key[0] != i}
            if poly_i:
                rest = vec_add(K, rest, vec_mul_poly(K, repl, poly_i))
            out.append({(c0 - 1 if c0 > i else c0, m): c for (c0, m), c in rest.items()})
        return out

    while True:
        pivot = None
        for j, col in enumerate(cols):
            for (i, m), c in sorted(col.items()):
                if m == zm and c != K.zero:
                    pivot = (i, j, c)
                    break
            if pivot:
                break
        if not pivot:
            break
        i, j, c = pivot
        pivot_col = cols[j]
        inv = K.inv(c)
        # clear row i in the other columns
        new_cols = []
        for j2, col in enumerate(cols):
            if j2 == j:
                continue
            a = {m: cc for (c0, m), cc in col.items() if c0 == i}
            if a:
                col = vec_add(K, col, vec_mul_poly(K, vec_scale(K, pivot_col, K.neg(inv)), a))
            new_cols.append(col)
        repl = vec_scale(K, {key: v for key, v in pivot_col.items() if key[0] != i}, K.neg(inv))
        cols = substitute(new_cols, i, repl)
        cols = [nf_vec_mod_ideal(ring, col) for col in cols]
        cols = [col for col in cols if col]
        P = substitute(P, i, repl)
        del J[i]
        del twists[i]

    cols = nakayama_min_gens(ring, twists, cols)
    Mmin = FPModule(ring, twists, cols, minimal_flag="minimal")
    to_min = GradedMap(M, Mmin, [nf_vec_mod_ideal(ring, p) for p in P], check=False)
    from_min = GradedMap(Mmin, M, [nf_vec_mod_ideal(ring, q) for q in J], check=False)
    result = (Mmin, to_min, from_min)
    M._cache["minimal"] = result
    Mmin._cache["minimal"] = (Mmin, identity_map(Mmin), identity_map(Mmin))
    return result


def minimal_module(M: FPModule) -> FPModule:
    return minimal_presentation(M)[0]


# ---------------------------------------------------------------------------
# resolutions
# ---------------------------------------------------------------------------

@dataclass
class Resolution:
    """A minimal graded free resolution F_n -> ... -> F_0 (-> M -> 0).

    ``twists[i]`` are the twists of F_i; ``diffs[i]`` holds the columns of
    d_{i+1}: F_{i+1} -> F_i.  Consecutive differentials compose to zero.
    """

    ring: GradedRing
    twists: list
    diffs: list

    @property
    def length(self) -> int:
        return len(self.twists) - 1

    def betti(self):
        return [len(t) for t in self.twists]

    def module_at(self, i) -> tuple:
        return self.twists[i]

    def differential(self, i):
        """Columns of d_i: F_i -> F_{i-1} (1-based)."""
        return self.diffs[i - 1]


def free_resolution(M: FPModule, length: int) -> Resolution:
    """Minimal free resolution to homological degree ``length``; cached and
    extended incrementally."""
    if length < 0:
        raise InputError("resolution length must be >= 0")
    res = M._cache.get("resolution")
    if res is None:
        Mmin = minimal_presentation(M)[0]
        res = Resolution(M.ring, [Mmin.gen_twists], [])
        M._cache["resolution"] = res
    while res.length < length:
        if res.length == 0:
            Mmin = minimal_presentation(M)[0]
            cols = list(Mmin.relations)
        else:
            prev = res.diffs[-1]
            if not prev:
                cols = []
            else:
                syz = syzygies(M.ring, res.twists[-2], prev)
                # reinterpret syzygy coordinates over F_{i} = columns of prev
                cols = nakayama_min_gens(M.ring, res.twists[-1], syz)
        S = M.ring.poly_ring
        res.twists.append(tuple(-vec_degree(S, c, res.twists[-1]) for c in cols))
        res.diffs.append(cols)
    return res


def syzygy_module(M: FPModule) -> FPModule:
    """The first syzygy ΩM from the minimal presentation (unique up to iso)."""
    res = free_resolution(M, 2)
    return FPModule(M.ring, res.twists[1], res.diffs[1])


def syzygy_of_order(M: FPModule, n: int) -> FPModule:
    if n == 0:
        return minimal_module(M)
    res = free_resolution(M, n + 1)
    return FPModule(M.ring, res.twists[n], res.diffs[n])


# ---------------------------------------------------------------------------
# hom, tensor, ext, tor
# ---------------------------------------------------------------------------

def _blowup_twists(outer_twists, inner_twists, sign=+1):
    """Twists of ⊕_l inner(±outer_l): component (l, b) flattened as l*len(inner)+b."""
    return tuple(sign * ot + it for ot in outer_twists for it in inner_twists)


def _blockdiag_relations(outer_count, inner_rels, inner_rank):
    cols = []
    for l in range(outer_count):
        off = l * inner_rank
        for col in inner_rels:
            cols.append({(off + b, m): c for (b, m), c in col.items()})
    return cols


def _hom_complex_map(diff_cols, outer_src, outer_tgt, inner_rank):
    """Columns of Hom(F_i, N) -> Hom(F_{i+1}, N) induced by d_{i+1}.

    Source components (l, b) with l over F_i, target components (l', b) with
    l' over F_{i+1}; the (l,b) column picks up d_{i+1}[l, l'] at (l', b).
    """
    cols = []
    for l in range(outer_src):
        for b in range(inner_rank):
            col = {}
            for lp, dcol in enumerate(diff_cols):
                for (c, m), v in dcol.items():
                    if c == l:
                        col[(lp * inner_rank + b, m)] = v
            cols.append(col)
    return cols


def _tensor_complex_map(diff_cols, inner_rank):
    """Columns of F_i ⊗ N -> F_{i-1} ⊗ N induced by d_i.

    Source components (l, b) with l over F_i; the column of (l, b) is the
    d_i-column of l placed in the b-slice of the target.
    """
    cols = []
    for l, dcol in enumerate(diff_cols):
        for b in range(inner_rank):
            cols.append({(c * inner_rank + b, m): v for (c, m), v in dcol.items()})
    return cols


def hom_module(M: FPModule, N: FPModule):
    """Hom_R(M, N) with ambient representation, plus a k-basis of its
    degree-zero part as explicit GradedMaps M -> N."""
    if M.ring != N.ring:
        raise InputError("Hom of modules over different rings")
    key = ("hom", N.key())
    if key in M._cache:
        return M._cache[key]
    ring = M.ring
    H = _hom_at(M, N)
    basis = []
    for amb, _combo in degree_part_basis(H, 0):
        cols = []
        for i in range(M.rank):
            col = {}
            for (idx, m), c in amb.items():
                if idx // N.rank == i:
                    col[(idx % N.rank, m)] = c
            cols.append(col)
        basis.append(GradedMap(M, N, cols, check=False))
    M._cache[key] = (H, basis)
    return H, basis


def _hom_at(M: FPModule, N: FPModule) -> FPModule:
    """Hom(M,N) = ker(Hom(F0,N) -> Hom(F1,N)) as a subquotient with provenance."""
    ring = M.ring
    g = N.rank
    amb0 = _blowup_twists(M.gen_twists, N.gen_twists, sign=-1)
    denom0 = _blockdiag_relations(M.rank, N.relations, g)
    if not M.relations:
        one = ring.field.one
        zm = ring.poly_ring.zero_mon
        U = [{(i, zm): one} for i in range(len(amb0))]
    else:
        amb1 = _blowup_twists([-t for t in M.rel_twists], N.gen_twists)
        delta = _hom_complex_map(M.relations, M.rank, M.nrels, g)
        denom1 = _blockdiag_relations(M.nrels, N.relations, g)
        U = preimage_gens(ring, amb1, delta, denom1)
        sub = SubmoduleGB(ring, amb0, denom0)
        U = [u for u in U if not sub.contains(u)]
    if not U:
        return FPModule(ring, (), (), ambient=(amb0, (), tuple(denom0)))
    return subquotient(ring, amb0, U, denom0)


def tensor_module(M: FPModule, N: FPModule) -> FPModule:
    """M ⊗_R N by the block presentation on generator pairs (i, b)."""
    if M.ring != N.ring:
        raise InputError("tensor of modules over different rings")
    g = N.rank
    twists = _blowup_twists(M.gen_twists, N.gen_twists)
    cols = _tensor_complex_map(M.relations, g)
    cols += _blockdiag_relations(M.rank, N.relations, g)
    return FPModule(M.ring, twists, cols)


def ext_module(i: int, M: FPModule, N: FPModule) -> FPModule:
    """Ext^i_R(M, N), minimally presented (canonical up to isomorphism)."""
    if i < 0:
        raise InputError("negative cohomological index")
    if M.ring != N.ring:
        raise InputError("Ext of modules over different rings")
    key = ("ext", i, N.key())
    if key in M._cache:
        return M._cache[key]
    ring = M.ring
    res = free_resolution(M, i + 1)
    Ti = res.twists[i]
    g = N.rank
    if not Ti or N.rank == 0:
        out = FPModule(ring, (), ())
        M._cache[key] = out
        return out
    ambi = _blowup_twists(Ti, N.gen_twists, sign=-1)
    denom_i = _blockdiag_relations(len(Ti), N.relations, g)
    di1 = res.diffs[i]  # d_{i+1} columns
    if not di1:
        one = ring.field.one
        zm = ring.poly_ring.zero_mon
        U = [{(c, zm): one} for c in range(len(ambi))]
    else:
        ambi1 = _blowup_twists(res.twists[i + 1], N.gen_twists, sign=-1)
        delta = _hom_complex_map(di1, len(Ti), len(res.twists[i + 1]), g)
        denom_i1 = _blockdiag_relations(len(res.twists[i + 1]), N.relations, g)
        U = preimage_gens(ring, ambi1, delta, denom_i1)
    image_cols = []
    if i > 0 and res.diffs[i - 1]:
        # images of the Hom(F_{i-1}, N) basis inside Hom(F_i, N)
        image_cols = _hom_complex_map_images(res.diffs[i - 1], len(res.twists[i - 1]), g)
    H = homology_at(ring, ambi, U, image_cols, denom_i)
    out = minimal_module(H)
    M._cache[key] = out
    return out


def _hom_complex_map_images(diff_cols, src_outer, inner_rank):
    """Images in Hom(F_i, N) of the basis of Hom(F_{i-1}, N): component (l'', b)
    goes to sum over l of d_i[l'', l] at (l, b)."""
    cols = []
    for lpp in range(src_outer):
        for b in range(inner_rank):
            col = {}
            for l, dcol in enumerate(diff_cols):
                for (c, m), v in dcol.items():
                    if c == lpp:
                        col[(l * inner_rank + b, m)] = v
            cols.append(col)
    return cols


def tor_module(i: int, M: FPModule, N: FPModule) -> FPModule:
    """Tor_i^R(M, N), minimally presented."""
    if i < 0:
        raise InputError("negative homological index")
    if M.ring != N.ring:
        raise InputError("Tor of modules over different rings")
    if i == 0:
        return minimal_module(tensor_module(M, N))
    ring = M.ring
    res = free_resolution(M, i + 1)
    Ti = res.twists[i]
    g = N.rank
    if not Ti or g == 0:
        return FPModule(ring, (), ())
    ambi = _blowup_twists(Ti, N.gen_twists)
    denom_i = _blockdiag_relations(len(Ti), N.relations, g)
    # kernel of d_i ⊗ 1 into F_{i-1} ⊗ N
    amb_prev = _blowup_twists(res.twists[i - 1], N.gen_twists)
    dmap = _tensor_complex_map(res.diffs[i - 1], g)
    denom_prev = _blockdiag_relations(len(res.twists[i - 1]), N.relations, g)
    U = preimage_gens(ring, amb_prev, dmap, denom_prev)
    image_cols = _tensor_complex_map(res.diffs[i], g) if res.diffs[i] else []
    H = homology_at(ring, ambi, U, image_cols, denom_i)
    return minimal_module(H)


# ---------------------------------------------------------------------------
# graded pieces and exact linear algebra on them
# ---------------------------------------------------------------------------

def degree_part_basis(M: FPModule, degree: int):
    """k-basis of the degree-d part of M.

    Returns a list of (ambient_vec, gen_coords) pairs; for plain cokernels the
    two coincide (vectors over the generators).
    """
    ring = M.ring
    S = ring.poly_ring
    amb_twists, reps, denoms = M._ambient_data()
    sub = SubmoduleGB(ring, amb_twists, denoms)
    solver = GaussianSolver(ring.field)
    out = []
    spans = []
    for l, rep in enumerate(reps):
        dl = vec_degree(S, rep, amb_twists)
        want = degree - dl
        if want < 0:
            continue
        for m in monomials_of_degree(S, want):
            vec = vec_mul_poly(ring.field, rep, {m: ring.field.one})
            nf = sub.normal_form(vec)
            if not nf:
                continue
            if solver.add(nf, len(spans)):
                spans.append((nf, {(l, m): ring.field.one}))
                out.append((nf, {(l, m): ring.field.one}))
    return out


def module_dimension_at(M: FPModule, degree: int) -> int:
    return M.hilbert((degree, degree)).dim(degree)


# ---------------------------------------------------------------------------
# invariants
# ---------------------------------------------------------------------------

def annihilator(M: FPModule) -> Ideal:
    """ann_R(M) as the intersection of (relations : generator)."""
    if "annihilator" in M._cache:
        return M._cache["annihilator"]
    ring = M.ring
    if M.rank == 0 or M.is_zero():
        out = unit_ideal(ring)
        M._cache["annihilator"] = out
        return out
    S = ring.poly_ring
    result = None
    one = ring.field.one
    for i in range(M.rank):
        gen_vec = {(i, S.zero_mon): one}
        family = [gen_vec] + list(M.relations)
        polys = []
        for col in syzygies(ring, M.gen_twists, family):
            first = {m: c for (comp, m), c in col.items() if comp == 0}
            if first:
                p = ring.normal_form_poly(Poly(S, first))
                if not p.is_zero():
                    polys.append(p)
        part = Ideal(ring, polys)
        result = part if result is None else intersect_ideals(result, part)
    result = Ideal(ring, list(result.gb()))
    M._cache["annihilator"] = result
    return result


def module_dim(M: FPModule) -> int:
    """Krull dimension of the support; -1 for the zero module."""
    return krull_dimension(annihilator(M))


def depth(M: FPModule):
    """depth_R(M) at the homogeneous maximal ideal, as the least i with
    Ext^i(k, M) nonzero.  Returns +inf for the zero module."""
    if "depth" in M._cache:
        return M._cache["depth"]
    if M.is_zero():
        M._cache["depth"] = math.inf
        return math.inf
    k = residue_field(M.ring)
    top = ring_dimension(M.ring)
    for i in range(top + 2):
        if not ext_module(i, k, M).is_zero():
            M._cache["depth"] = i
            return i
    raise InputError("depth exceeded the ring dimension; inconsistent state")


def ring_depth(ring: GradedRing) -> int:
    if "depth" not in ring._cache:
        ring._cache["depth"] = depth(free_module(ring, (0,)))
    return ring._cache["depth"]


def is_cohen_macaulay(ring: GradedRing) -> bool:
    return ring_depth(ring) == ring_dimension(ring)


def restrict_to_ambient(M: FPModule) -> FPModule:
    """The same module viewed over the ambient polynomial ring: relations are
    augmented by (defining ideal)·(each generator)."""
    amb = M.ring.ambient()
    cols = [dict(c) for c in M.relations]
    for f in M.ring.defining_ideal:
        for i in range(M.rank):
            cols.append({(i, m): c for m, c in f.terms.items()})
    return FPModule(amb, M.gen_twists, cols)


def view_over_smaller_quotient(M: FPModule, ring_to: GradedRing, extra_ideal) -> FPModule:
    """View a module over R/a as a module over R: append a·(each generator).

    ``extra_ideal`` lists the generators of a as polynomials of the common
    ambient polynomial ring."""
    cols = [dict(c) for c in M.relations]
    for f in extra_ideal:
        for i in range(M.rank):
            cols.append({(i, m): c for m, c in f.terms.items()})
    return FPModule(ring_to, M.gen_twists, cols)


def induce_to_quotient(M: FPModule, ring_to: GradedRing) -> FPModule:
    """Reinterpret a module killed by the extra relations over a deeper quotient."""
    return FPModule(ring_to, M.gen_twists, M.relations)


# ---------------------------------------------------------------------------
# isomorphism testing
# ---------------------------------------------------------------------------

@dataclass
class IsoVerdict:
    status: str  # "yes" | "no" | "undetermined"
    twist: int = 0
    witness: tuple = None  # (f, g) with g∘f = id
    reason: str = ""

    @property
    def yes(self):
        return self.status == "yes"

    def to_json(self):
        return {"status": self.status, "twist": self.twist, "reason": self.reason}


def _surjective(phi: GradedMap) -> bool:
    ring = phi.source.ring
    cols = [c for c in phi.cols if c] + list(phi.target.relations)
    sub = SubmoduleGB(ring, phi.target.gen_twists, cols)
    return sub.is_whole_module()


def _left_inverse(f: GradedMap, back_basis):
    """Solve sum_t c_t (psi_t ∘ f) = id over the coefficient field."""
    M = f.source
    ring = M.ring
    r = M.rank
    amb_twists = _blowup_twists(M.gen_twists, M.gen_twists, sign=-1)
    denom = _blockdiag_relations(r, M.relations, r)
    sub = SubmoduleGB(ring, amb_twists, denom)

    def vectorize(g: GradedMap):
        v = {}
        for j, col in enumerate(g.cols):
            for (i, m), c in col.items():
                v[(j * r + i, m)] = c
        return sub.normal_form(v)

    solver = GaussianSolver(ring.field)
    tags = []
    for t, psi in enumerate(back_basis):
        comp = psi.compose(f)
        if solver.add(vectorize(comp), t):
            tags.append(t)
    target = vectorize(identity_map(M))
    combo = solver.solve(target)
    if combo is None:
        return None
    g = zero_map(f.target, M)
    for t, c in combo.items():
        g = g.add(back_basis[t].scale(c))
    return g


def is_isomorphic(M: FPModule, N: FPModule, allow_twist: bool = False,
                  rng=None, retries: int = 64) -> IsoVerdict:
    """Isomorphism verdict with certificates.

    "no" only on a Hilbert-table or annihilator mismatch; "yes" only with an
    explicit pair (f, g), f surjective and g∘f = id (which forces f to be an
    isomorphism, the Hilbert tables being equal).  Anything else is
    "undetermined" — never a silent failure.
    """
    import random

    if M.ring != N.ring:
        raise InputError("isomorphism test over different rings")
    if rng is None:
        rng = random.Random(20210 + M.rank + N.rank)
    Mm = minimal_module(M)
    Nm = minimal_module(N)
    if Mm.is_zero() and Nm.is_zero():
        return IsoVerdict("yes", 0, None, "both zero")
    if Mm.is_zero() != Nm.is_zero():
        return IsoVerdict("no", 0, None, "Hilbert tables differ (one module is zero)")

    window = default_window(Mm, Nm)
    hM = Mm.hilbert(window)
    hN = Nm.hilbert(window)
    twist = 0
    if allow_twist:
        fM, fN = hM.first_nonzero(), hN.first_nonzero()
        if fM is not None and fN is not None:
            twist = fN - fM
    Nt = twist_module(Nm, twist)
    hN = Nt.hilbert(window)
    if hM.as_dict() != hN.as_dict():
        return IsoVerdict("no", twist, None,
                          f"Hilbert tables differ on window {window}"
                          + (" at every aligning twist" if allow_twist else ""))
    if annihilator(Mm) != annihilator(Nm):
        return IsoVerdict("no", twist, None, "annihilators differ")

    _, fwd = hom_module(Mm, Nt)
    _, back = hom_module(Nt, Mm)
    if not fwd or not back:
        return IsoVerdict("undetermined", twist, None,
                          "no degree-zero homomorphisms to search")

    K = M.ring.field
    candidates = []
    for f in fwd:
        candidates.append(f)
    if len(fwd) > 1:
        total = fwd[0]
        for f in fwd[1:]:
            total = total.add(f)
        candidates.append(total)
    for _ in range(retries):
        g = zero_map(Mm, Nt)
        for f in fwd:
            g = g.add(f.scale(K.random_element(rng)))
        candidates.append(g)

    for f in candidates:
        if f.is_zero_map() and not Mm.is_zero():
            continue
        if not _surjective(f):
            continue
        g = _left_inverse(f, back)
        if g is None:
            continue
        if not g.compose(f).equals(identity_map(Mm)):
            continue
        return IsoVerdict("yes", twist, (f, g), "explicit mutually inverse pair")
    return IsoVerdict("undetermined", twist, None,
                      "no isomorphism found within the retry budget")
