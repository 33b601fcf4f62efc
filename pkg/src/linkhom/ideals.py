"""Homogeneous ideals in graded quotient rings: colon, intersection, dimension."""

from __future__ import annotations

from .errors import InputError
from .freemodules import syzygies, vec_component, vec_lt
from .rings import GradedRing, Poly, mon_divides


class Ideal:
    """A homogeneous ideal of a graded ring R = S/I, stored via S-representatives.

    The canonical form is the reduced Groebner basis of the full preimage in S
    (generators plus the defining ideal), so equality of ideals is equality of
    canonical bases.
    """

    def __init__(self, ring: GradedRing, gens):
        self.ring = ring
        cleaned = []
        for g in gens:
            if not isinstance(g, Poly) or g.ring != ring.poly_ring:
                raise InputError("ideal generator from a different ring")
            if not g.is_homogeneous():
                raise InputError(f"inhomogeneous ideal generator {g}")
            g = ring.normal_form_poly(g)
            if not g.is_zero():
                cleaned.append(g)
        self.gens = tuple(cleaned)
        self._gb = None

    def gb(self):
        """Reduced Groebner basis of the preimage in S."""
        if self._gb is None:
            from .freemodules import reduced_groebner_polys

            self._gb = tuple(
                reduced_groebner_polys(self.ring.poly_ring, list(self.gens) + list(self.ring.defining_ideal))
            )
        return self._gb

    def contains(self, f: Poly) -> bool:
        from .freemodules import poly_normal_form

        return poly_normal_form(self.ring.poly_ring, f, self.gb()).is_zero()

    def contains_ideal(self, other: "Ideal") -> bool:
        return all(self.contains(g) for g in other.gens)

    def is_zero(self) -> bool:
        """True when the ideal is the zero ideal of R."""
        return self.gb() == self.ring.ideal_gb()

    def is_unit(self) -> bool:
        return any(g.is_constant() and not g.is_zero() for g in self.gb())

    def key(self):
        return (self.ring.key, tuple(g.key() for g in self.gb()))

    def __eq__(self, other):
        return isinstance(other, Ideal) and self.ring == other.ring and self.gb() == other.gb()

    def __hash__(self):
        return hash(self.key())

    def canonical_strs(self):
        return [g.canonical_str() for g in self.gb()]

    def __repr__(self):
        return "(" + ", ".join(g.canonical_str() for g in self.gens) + ")"


def zero_ideal(ring: GradedRing) -> Ideal:
    return Ideal(ring, ())


def unit_ideal(ring: GradedRing) -> Ideal:
    return Ideal(ring, (ring.poly_ring.one(),))


def maximal_ideal(ring: GradedRing) -> Ideal:
    return Ideal(ring, ring.poly_ring.gens())


def _poly_vec(p: Poly):
    return {(0, m): c for m, c in p.terms.items()}


def colon_with_element(a: Ideal, g: Poly) -> list:
    """Generators of (a : g) = {r : r g in a}, via syzygies of [g | a]."""
    ring = a.ring
    g = ring.normal_form_poly(g)
    if g.is_zero():
        return [ring.poly_ring.one()]
    family = [_poly_vec(g)] + [_poly_vec(f) for f in a.gens]
    out = []
    for col in syzygies(ring, (0,), family):
        first = {m: c for (comp, m), c in col.items() if comp == 0}
        if first:
            out.append(ring.normal_form_poly(Poly(ring.poly_ring, first)))
    return [p for p in out if not p.is_zero()]


def intersect_ideals(a: Ideal, b: Ideal) -> Ideal:
    """a ∩ b via syzygies of the concatenated generator lists."""
    ring = a.ring
    if not a.gens:
        return a if a.is_zero() else Ideal(ring, a.gens)
    family = [_poly_vec(f) for f in a.gens] + [_poly_vec(g) for g in b.gens]
    k = len(a.gens)
    members = []
    S = ring.poly_ring
    for col in syzygies(ring, (0,), family):
        u = S.zero()
        for (comp, m), c in col.items():
            if comp < k:
                u = u + a.gens[comp] * S.monomial(m, c)
        u = ring.normal_form_poly(u)
        if not u.is_zero():
            members.append(u)
    # the zero ideal intersected with anything is zero; syzygies with no
    # a-support yield nothing, which is correct
    return Ideal(ring, members)


def colon_ideal(a: Ideal, b: Ideal) -> Ideal:
    """a : b = {r : r b ⊆ a}, intersecting (a : g) over the generators of b.

    The result carries its reduced Groebner basis as the generating set.
    """
    ring = a.ring
    if ring != b.ring:
        raise InputError("colon of ideals over different rings")
    if not b.gens:
        return unit_ideal(ring)  # a : (0) = (1)
    result = None
    for g in b.gens:
        part = Ideal(ring, colon_with_element(a, g))
        result = part if result is None else intersect_ideals(result, part)
    canon = Ideal(ring, [p for p in result.gb()])
    return canon


def krull_dimension(a: Ideal) -> int:
    """Krull dimension of R/a via the leading-term ideal of the preimage.

    Returns -1 for the unit ideal (empty scheme convention).
    """
    ring = a.ring
    gb = a.gb()
    if any(g.is_constant() and not g.is_zero() for g in gb):
        return -1
    n = ring.nvars
    lead = [g.lt()[0] for g in gb]
    best = 0
    # maximal subset Y of variables such that no leading monomial is
    # supported inside Y; brute force is fine at this variable count
    for mask in range(1 << n):
        size = bin(mask).count("1")
        if size <= best:
            continue
        ok = True
        for m in lead:
            if all((mask >> v) & 1 for v in range(n) if m[v] > 0):
                ok = False
                break
        if ok:
            best = size
    return best


def quotient_by_ideal(ring: GradedRing, a: Ideal, name=None) -> GradedRing:
    """The graded ring R/a, presented over the same ambient polynomial ring."""
    if a.is_unit():
        raise InputError("cannot form the zero ring R/(1)")
    gens = list(ring.defining_ideal) + [g for g in a.gens]
    return GradedRing(ring.poly_ring, gens, name=name)


def ring_dimension(ring: GradedRing) -> int:
    if "dim" not in ring._cache:
        ring._cache["dim"] = krull_dimension(zero_ideal(ring))
    return ring._cache["dim"]
