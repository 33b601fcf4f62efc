"""Groebner machinery over free modules with twists.

A free-module element ("vec") is a sparse dict ``(component, monomial) -> coeff``.
The term order is position-over-term: component 0 has the highest priority,
ties broken by the ring's monomial order.  That makes the order an elimination
order for leading components, which is how syzygies are computed: append a
marker coordinate per generator, take a Groebner basis, and read off the
elements supported entirely in the marker block.

Everything here is exact and deterministic; quotient rings are handled by
folding the defining ideal into every submodule.
"""

from __future__ import annotations

from .errors import InputError, ShapeError
from .rings import (
    GradedRing,
    Poly,
    PolyRing,
    mon_div,
    mon_divides,
    mon_gcd_is_one,
    mon_lcm,
    mon_mul,
    monomials_of_degree,
)

Vec = dict  # (comp, mon) -> coeff


# ---------------------------------------------------------------------------
# vec arithmetic
# ---------------------------------------------------------------------------

def vec_iadd_scaled(K, target: Vec, src: Vec, mon, coeff) -> None:
    """target += coeff * mon * src, in place."""
    for (c, m), a in src.items():
        key = (c, mon_mul(m, mon))
        s = K.add(target.get(key, K.zero), K.mul(a, coeff))
        if s == K.zero:
            target.pop(key, None)
        else:
            target[key] = s


def vec_add(K, u: Vec, v: Vec) -> Vec:
    out = dict(u)
    for key, a in v.items():
        s = K.add(out.get(key, K.zero), a)
        if s == K.zero:
            out.pop(key, None)
        else:
            out[key] = s
    return out


def vec_scale(K, v: Vec, coeff) -> Vec:
    if coeff == K.zero:
        return {}
    return {key: K.mul(a, coeff) for key, a in v.items()}


def vec_neg(K, v: Vec) -> Vec:
    return {key: K.neg(a) for key, a in v.items()}


def vec_mul_poly(K, v: Vec, poly_terms: dict) -> Vec:
    out: Vec = {}
    for m, c in poly_terms.items():
        vec_iadd_scaled(K, out, v, m, c)
    return out


def vec_from_polys(polys, comps=None) -> Vec:
    """Assemble a vec from Poly entries (component i = polys[i] by default)."""
    out: Vec = {}
    for i, p in enumerate(polys):
        comp = comps[i] if comps is not None else i
        for m, c in p.terms.items():
            out[(comp, m)] = c
    return out


def vec_component(ring: PolyRing, v: Vec, comp: int) -> Poly:
    return Poly(ring, {m: c for (c0, m), c in v.items() if c0 == comp})


def vec_to_polys(ring: PolyRing, v: Vec, rank: int):
    return [vec_component(ring, v, c) for c in range(rank)]


def vec_degree(ring: PolyRing, v: Vec, twists) -> int | None:
    """Degree of a homogeneous vec: wdeg(m) - twist[comp].  None on zero."""
    degs = {ring.wdeg(m) - twists[c] for (c, m) in v}
    if not degs:
        return None
    if len(degs) > 1:
        raise InputError("inhomogeneous free-module element")
    return degs.pop()


def vec_is_homogeneous(ring: PolyRing, v: Vec, twists) -> bool:
    return len({ring.wdeg(m) - twists[c] for (c, m) in v}) <= 1


def vec_key(v: Vec):
    """Canonical hashable form of a vec."""
    return tuple(sorted(v.items()))


def term_key(ring: PolyRing, term):
    """Position-over-term sort key: larger key = larger term."""
    c, m = term
    return (-c, ring.mon_key(m))


def vec_lt(ring: PolyRing, v: Vec):
    """((comp, mon), coeff) of the leading term under POT order."""
    best = None
    best_key = None
    for term in v:
        k = term_key(ring, term)
        if best_key is None or k > best_key:
            best, best_key = term, k
    return best, v[best]


# ---------------------------------------------------------------------------
# reduction and Buchberger
# ---------------------------------------------------------------------------

def _find_reducer(lts, term):
    c, m = term
    for idx, ((bc, bm), _) in enumerate(lts):
        if bc == c and mon_divides(bm, m):
            return idx
    return None


def _comp_index(lts):
    by_comp: dict[int, list] = {}
    for idx, ((c, _m), _lc) in enumerate(lts):
        by_comp.setdefault(c, []).append(idx)
    return by_comp


def vec_normal_form(ring: PolyRing, v: Vec, basis, lts=None, track=False, by_comp=None):
    """Fully reduced normal form of v against a list of vecs.

    The remainder is unique for any Groebner basis (reduced or not).  Returns
    (remainder, quotients) where quotients[i] is the poly-dict q_i with
    v = sum q_i basis_i + remainder (quotients is None unless track).
    """
    K = ring.field
    if lts is None:
        lts = [vec_lt(ring, b) for b in basis]
    if by_comp is None:
        by_comp = _comp_index(lts)
    work = dict(v)
    remainder: Vec = {}
    quots = [dict() for _ in basis] if track else None
    while work:
        term, coeff = vec_lt(ring, work)
        idx = None
        for cand in by_comp.get(term[0], ()):
            if mon_divides(lts[cand][0][1], term[1]):
                idx = cand
                break
        if idx is None:
            remainder[term] = coeff
            del work[term]
            continue
        (bc, bm), blc = lts[idx]
        q = mon_div(term[1], bm)
        factor = K.div(coeff, blc)
        vec_iadd_scaled(K, work, basis[idx], q, K.neg(factor))
        if track:
            s = K.add(quots[idx].get(q, K.zero), factor)
            if s == K.zero:
                quots[idx].pop(q, None)
            else:
                quots[idx][q] = s
    return remainder, quots


def _spair(ring, f, g, ltf, ltg):
    K = ring.field
    (c, mf), cf = ltf
    (_, mg), cg = ltg
    l = mon_lcm(mf, mg)
    s: Vec = {}
    vec_iadd_scaled(K, s, f, mon_div(l, mf), K.inv(cf))
    vec_iadd_scaled(K, s, g, mon_div(l, mg), K.neg(K.inv(cg)))
    return s, l


def buchberger(ring: PolyRing, gens, rank: int, track=False, assume_gb_prefix=0,
               full_reduce=False):
    """Groebner basis of the submodule generated by ``gens``.

    The output is LT-minimal, monic and canonically sorted; with
    ``full_reduce`` the tails are reduced too, giving the unique reduced
    basis (needed only where canonical generating sets are exposed).  With
    ``track`` every returned element carries its representation as a
    combination of the input generators.  ``assume_gb_prefix=k`` declares
    gens[:k] to be an already-computed Groebner basis, so only pairs touching
    the new elements are processed.  Returns (basis, reps).
    """
    K = ring.field
    basis = []
    reps = [] if track else None
    for j, g in enumerate(gens):
        if not g:
            continue
        basis.append(dict(g))
        if track:
            reps.append({j: {ring.zero_mon: K.one}})
    lts = [vec_lt(ring, b) for b in basis]
    by_comp = _comp_index(lts)

    prefix = 0
    if assume_gb_prefix:
        # count surviving (nonzero) elements of the trusted prefix
        prefix = sum(1 for g in gens[:assume_gb_prefix] if g)

    pairs = []
    for i in range(len(basis)):
        for j in range(max(i + 1, prefix), len(basis)):
            if lts[i][0][0] == lts[j][0][0]:
                pairs.append((i, j))

    def pair_key(p):
        i, j = p
        l = mon_lcm(lts[i][0][1], lts[j][0][1])
        return (ring.wdeg(l), lts[i][0][0], i, j)

    import heapq

    heap = [(pair_key(p), p) for p in pairs]
    heapq.heapify(heap)

    while heap:
        _, (i, j) = heapq.heappop(heap)
        # coprime criterion is only valid for rank-one modules (ideals)
        if rank == 1 and mon_gcd_is_one(lts[i][0][1], lts[j][0][1]):
            continue
        s, _ = _spair(ring, basis[i], basis[j], lts[i], lts[j])
        if track:
            (c, mi), ci = lts[i]
            (_, mj), cj = lts[j]
            l = mon_lcm(mi, mj)
            rep: dict = {}
            _rep_iadd(K, rep, reps[i], mon_div(l, mi), K.inv(ci))
            _rep_iadd(K, rep, reps[j], mon_div(l, mj), K.neg(K.inv(cj)))
        r, quots = vec_normal_form(ring, s, basis, lts, track=track, by_comp=by_comp)
        if not r:
            continue
        if track:
            for t, q in enumerate(quots):
                for m, c in q.items():
                    _rep_iadd(K, rep, reps[t], m, K.neg(c))
            reps.append(rep)
        basis.append(r)
        lts.append(vec_lt(ring, r))
        new = len(basis) - 1
        by_comp.setdefault(lts[new][0][0], []).append(new)
        for t in range(new):
            if lts[t][0][0] == lts[new][0][0]:
                heapq.heappush(heap, (pair_key((t, new)), (t, new)))

    return _interreduce(ring, basis, reps, track, full_reduce)


def _rep_iadd(K, target, src, mon, coeff):
    for j, poly in src.items():
        tgt = target.setdefault(j, {})
        for m, c in poly.items():
            key = mon_mul(m, mon)
            s = K.add(tgt.get(key, K.zero), K.mul(c, coeff))
            if s == K.zero:
                tgt.pop(key, None)
            else:
                tgt[key] = s
        if not tgt:
            del target[j]


def _interreduce(ring, basis, reps, track, full_reduce):
    K = ring.field
    # drop elements whose leading term is divisible by another's; bucket by
    # leading component and scan in increasing monomial order so only kept
    # leading terms need checking
    lts = [vec_lt(ring, b) for b in basis]
    buckets: dict[int, list] = {}
    for i, ((c, m), _lc) in enumerate(lts):
        buckets.setdefault(c, []).append(i)
    keep = []
    for c, idxs in buckets.items():
        idxs.sort(key=lambda i: (ring.mon_key(lts[i][0][1]), i))
        kept_mons = []
        for i in idxs:
            m = lts[i][0][1]
            if not any(mon_divides(km, m) for km in kept_mons):
                keep.append(i)
                kept_mons.append(m)
    keep.sort()
    basis = [basis[i] for i in keep]
    if track:
        reps = [reps[i] for i in keep]
    out = []
    out_reps = [] if track else None
    for i in range(len(basis)):
        r = basis[i]
        rep = None
        if track:
            rep = {j: dict(p) for j, p in reps[i].items()}
        if full_reduce:
            others = basis[:i] + basis[i + 1:]
            r, quots = vec_normal_form(ring, r, others, track=track)
            if track:
                other_reps = reps[:i] + reps[i + 1:]
                for t, q in enumerate(quots):
                    for m, c in q.items():
                        _rep_iadd(K, rep, other_reps[t], m, K.neg(c))
            if not r:
                continue
        _, lc = vec_lt(ring, r)
        inv = K.inv(lc)
        r = vec_scale(K, r, inv)
        if track:
            rep = {j: {m: K.mul(c, inv) for m, c in p.items()} for j, p in rep.items()}
            out_reps.append(rep)
        out.append(r)
    ordered = sorted(range(len(out)), key=lambda i: term_key(ring, vec_lt(ring, out[i])[0]))
    basis = [out[i] for i in ordered]
    if track:
        return basis, [out_reps[i] for i in ordered]
    return basis, None


# ---------------------------------------------------------------------------
# rank-one conveniences (ideals in the ambient polynomial ring)
# ---------------------------------------------------------------------------

def reduced_groebner_polys(ring: PolyRing, polys):
    vecs = [{(0, m): c for m, c in p.terms.items()} for p in polys if p and not p.is_zero()]
    basis, _ = buchberger(ring, vecs, rank=1, full_reduce=True)
    return [vec_component(ring, b, 0) for b in basis]


def poly_normal_form(ring: PolyRing, f: Poly, gb_polys) -> Poly:
    v = {(0, m): c for m, c in f.terms.items()}
    basis = [{(0, m): c for m, c in g.terms.items()} for g in gb_polys]
    r, _ = vec_normal_form(ring, v, basis)
    return vec_component(ring, r, 0)


# ---------------------------------------------------------------------------
# submodules over a graded quotient ring
# ---------------------------------------------------------------------------

class SubmoduleGB:
    """A submodule of a twisted free module over a graded ring R = S/I.

    The defining ideal is folded in: membership, normal forms and leading
    terms are all relative to <gens> + I*F.  With ``track=True`` members can
    be lifted to explicit combinations of the original generators.
    """

    def __init__(self, ring: GradedRing, twists, gens, track=False):
        self.ring = ring
        self.twists = tuple(twists)
        self.rank = len(self.twists)
        self.gens = tuple(dict(g) for g in gens)
        self.track = track
        for g in self.gens:
            for (c, _m) in g:
                if not 0 <= c < self.rank:
                    raise ShapeError("generator component out of range")
            if not vec_is_homogeneous(ring.poly_ring, g, self.twists):
                raise InputError("inhomogeneous submodule generator")
        self._gb = None
        self._reps = None
        self._lts = None
        self._by_comp = None

    def _extended(self):
        ext = [dict(g) for g in self.gens]
        for f in self.ring.ideal_gb():
            for c in range(self.rank):
                ext.append({(c, m): coeff for m, coeff in f.terms.items()})
        return ext

    def gb(self):
        if self._gb is None:
            if self.track:
                self._gb, self._reps = buchberger(
                    self.ring.poly_ring, self._extended(), rank=self.rank, track=True
                )
            else:
                self._gb = self._gb_by_components()
            self._lts = [vec_lt(self.ring.poly_ring, b) for b in self._gb]
            self._by_comp = _comp_index(self._lts)
        return self._gb

    def _gb_by_components(self):
        """Union of per-component-class bases; valid because generators in
        disjoint classes never interact (and the ideal block is diagonal)."""
        S = self.ring.poly_ring
        gens = [g for g in self.gens if g]
        classes = _component_classes(self.rank, gens)
        memo = self.ring._cache.setdefault("subgb_memo", {})
        out = []
        touched = set()
        for cls in classes:
            pos = {c: p for p, c in enumerate(cls)}
            sub = []
            for g in gens:
                if next(iter(g))[0] in pos:
                    sub.append({(pos[c], m): v for (c, m), v in g.items()})
            if not sub:
                continue
            touched.update(cls)
            key = (tuple(cls_twists := tuple(self.twists[c] for c in cls)),
                   tuple(sorted(vec_key(v) for v in sub)))
            if key not in memo:
                family = [dict(v) for v in sub]
                for f in self.ring.ideal_gb():
                    for p in range(len(cls)):
                        family.append({(p, mn): c for mn, c in f.terms.items()})
                basis, _ = buchberger(S, family, rank=len(cls))
                memo[key] = basis
            back = {p: c for c, p in pos.items()}
            for b in memo[key]:
                out.append({(back[p], m): v for (p, m), v in b.items()})
        for c in range(self.rank):
            if c not in touched:
                for f in self.ring.ideal_gb():
                    out.append({(c, m): v for m, v in f.terms.items()})
        return out

    def normal_form(self, v: Vec) -> Vec:
        gb = self.gb()
        r, _ = vec_normal_form(self.ring.poly_ring, v, gb, self._lts,
                               by_comp=self._by_comp)
        return r

    def contains(self, v: Vec) -> bool:
        return not self.normal_form(v)

    def lift(self, v: Vec):
        """Express v as [poly coefficients on the original gens], or None.

        Requires construction with track=True.  The I*F part of the
        representation is discarded (it is zero in the quotient).
        """
        if not self.track:
            raise InputError("lift requires a tracking SubmoduleGB")
        gb = self.gb()
        r, quots = vec_normal_form(self.ring.poly_ring, v, gb, self._lts,
                                   track=True, by_comp=self._by_comp)
        if r:
            return None
        K = self.ring.field
        total: dict = {}
        for t, q in enumerate(quots):
            for m, c in q.items():
                _rep_iadd(K, total, self._reps[t], m, c)
        S = self.ring.poly_ring
        out = []
        for j in range(len(self.gens)):
            p = Poly(S, total.get(j, {}))
            out.append(self.ring.normal_form_poly(p))
        return out

    def leading_terms(self):
        self.gb()
        return [t for t, _lc in self._lts]

    def is_whole_module(self) -> bool:
        zm = self.ring.poly_ring.zero_mon
        one = self.ring.field.one
        return all(self.contains({(c, zm): one}) for c in range(self.rank))

    def key(self):
        return (self.ring.key, self.twists, tuple(sorted(vec_key(g) for g in self.gens)))


def _component_classes(rank: int, vecs):
    """Union-find partition of free-module components linked by vector supports."""
    parent = list(range(rank))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for v in vecs:
        comps = sorted({c for (c, _m) in v})
        for c in comps[1:]:
            ra, rb = find(comps[0]), find(c)
            if ra != rb:
                parent[rb] = ra
    classes: dict[int, list] = {}
    for c in range(rank):
        classes.setdefault(find(c), []).append(c)
    return [classes[r] for r in sorted(classes)]


def syzygies(ring: GradedRing, twists, gens):
    """Generators of the syzygy module of ``gens`` over R = S/I.

    Returns vecs of rank len(gens): columns c with sum_i c_i gens_i = 0 in the
    quotient ring, including the relations induced by the defining ideal.
    Each column is homogeneous; entries are normal forms mod I.

    Block-diagonal families decompose: generators supported on disjoint
    component classes have independent syzygies, computed separately (and
    memoized per ring), which keeps direct-sum-shaped inputs cheap.
    """
    S = ring.poly_ring
    twists = tuple(twists)
    r = len(twists)
    gens = [dict(g) for g in gens]
    for g in gens:
        if not vec_is_homogeneous(S, g, twists):
            raise InputError("inhomogeneous generator in syzygy computation")

    classes = _component_classes(r, gens)
    if len(classes) > 1 or any(not g for g in gens):
        out = []
        for i, g in enumerate(gens):
            if not g:
                out.append({(i, S.zero_mon): ring.field.one})
        for cls in classes:
            pos = {c: p for p, c in enumerate(cls)}
            idxs = [i for i, g in enumerate(gens) if g and next(iter(g))[0] in pos]
            if not idxs:
                continue
            sub = [{(pos[c], m): v for (c, m), v in gens[i].items()} for i in idxs]
            for col in _syzygies_core(ring, tuple(twists[c] for c in cls), sub):
                out.append({(idxs[j], m): v for (j, m), v in col.items()})
        return out
    return _syzygies_core(ring, twists, gens)


def _syzygies_core(ring: GradedRing, twists, gens):
    memo = ring._cache.setdefault("syzygy_memo", {})
    key = (twists, tuple(vec_key(g) for g in gens))
    if key in memo:
        return [dict(col) for col in memo[key]]
    S = ring.poly_ring
    r = len(twists)
    family = []
    for i, g in enumerate(gens):
        v = dict(g)
        v[(r + i, S.zero_mon)] = ring.field.one
        family.append(v)
    for f in ring.ideal_gb():
        for c in range(r):
            family.append({(c, mn): coeff for mn, coeff in f.terms.items()})
    basis, _ = buchberger(S, family, rank=r + len(gens))
    out = []
    for b in basis:
        if any(c < r for (c, _mn) in b):
            continue
        col = {}
        for (c, mn), coeff in b.items():
            col[(c - r, mn)] = coeff
        col = _nf_columns(ring, col)
        if col:
            out.append(col)
    memo[key] = [dict(col) for col in out]
    return out


def _nf_columns(ring: GradedRing, v: Vec) -> Vec:
    """Reduce each polynomial coordinate of v modulo the defining ideal."""
    if ring.is_ambient:
        return v
    S = ring.poly_ring
    comps: dict[int, dict] = {}
    for (c, mn), coeff in v.items():
        comps.setdefault(c, {})[mn] = coeff
    out: Vec = {}
    for c, terms in comps.items():
        p = ring.normal_form_poly(Poly(S, terms))
        for mn, coeff in p.terms.items():
            out[(c, mn)] = coeff
    return out


def nf_vec_mod_ideal(ring: GradedRing, v: Vec) -> Vec:
    return _nf_columns(ring, v)


# ---------------------------------------------------------------------------
# Hilbert counting
# ---------------------------------------------------------------------------

def standard_monomial_counts(ring: GradedRing, twists, lead_terms, degrees):
    """dim_k of (F/N)_d for each d: count monomials outside the leading-term module."""
    S = ring.poly_ring
    by_comp: dict[int, list] = {}
    for (c, m) in lead_terms:
        by_comp.setdefault(c, []).append(m)
    out = {}
    for d in degrees:
        n = 0
        for c, t in enumerate(twists):
            for m in monomials_of_degree(S, d + t):
                if not any(mon_divides(lm, m) for lm in by_comp.get(c, ())):
                    n += 1
        out[d] = n
    return out


def finite_standard_monomials(ring: GradedRing, twists, lead_terms):
    """All standard monomials (comp, mon) when F/N has finite length, else None.

    Finite length holds iff every component's leading-term ideal contains a
    pure power of every variable.
    """
    S = ring.poly_ring
    by_comp: dict[int, list] = {}
    for (c, m) in lead_terms:
        by_comp.setdefault(c, []).append(m)
    rank = len(twists)
    bounds = []
    for c in range(rank):
        box = []
        for v in range(S.nvars):
            exps = [
                m[v]
                for m in by_comp.get(c, ())
                if all(m[w] == 0 for w in range(S.nvars) if w != v)
            ]
            if not exps:
                return None
            box.append(min(exps))
        bounds.append(box)

    out = []
    for c in range(rank):
        stack = [()]
        for v in range(S.nvars):
            stack = [m + (e,) for m in stack for e in range(bounds[c][v])]
        for m in stack:
            if not any(mon_divides(lm, m) for lm in by_comp.get(c, ())):
                out.append((c, m))
    return out


# ---------------------------------------------------------------------------
# exact linear algebra over the coefficient field
# ---------------------------------------------------------------------------

class GaussianSolver:
    """Incremental exact row reduction with combination tracking.

    Vectors are sparse dicts keyed by arbitrary comparable keys.  ``add``
    inserts a vector tagged by an integer; ``reduce`` returns the residual of
    a vector and the combination of inserted tags that was subtracted.
    """

    def __init__(self, K):
        self.K = K
        self.rows = []  # (pivot_key, pivot-normalized row, combo dict[tag -> coeff])

    def reduce(self, vec):
        K = self.K
        v = dict(vec)
        combo: dict = {}
        changed = True
        while changed and v:
            changed = False
            for pk, row, rcombo in self.rows:
                c = v.get(pk)
                if c is not None and c != K.zero:
                    for k2, a in row.items():
                        s = K.sub(v.get(k2, K.zero), K.mul(c, a))
                        if s == K.zero:
                            v.pop(k2, None)
                        else:
                            v[k2] = s
                    for t, a in rcombo.items():
                        s = K.add(combo.get(t, K.zero), K.mul(c, a))
                        if s == K.zero:
                            combo.pop(t, None)
                        else:
                            combo[t] = s
                    changed = True
        return v, combo

    def add(self, vec, tag) -> bool:
        """Insert; returns False when vec is dependent on existing rows."""
        K = self.K
        v, combo = self.reduce(vec)
        if not v:
            return False
        pk = max(v)
        inv = K.inv(v[pk])
        row = {k: K.mul(a, inv) for k, a in v.items()}
        rcombo = {t: K.mul(K.neg(a), inv) for t, a in combo.items()}
        rcombo[tag] = K.add(rcombo.get(tag, K.zero), inv)
        self.rows.append((pk, row, rcombo))
        return True

    def solve(self, vec):
        """Combination of inserted tags equal to vec, or None."""
        v, combo = self.reduce(vec)
        if v:
            return None
        return combo

    @property
    def rank(self):
        return len(self.rows)
