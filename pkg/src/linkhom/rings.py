"""Polynomial rings, sparse homogeneous polynomials, and graded quotient rings.

A monomial is a tuple of non-negative exponents, one per variable.  A
polynomial is a sparse dict ``monomial -> coefficient`` wrapped in :class:`Poly`.
:class:`GradedRing` is a quotient S/I of a polynomial ring by a homogeneous
ideal, the graded-local stand-in for a local ring: its maximal ideal is the
ideal of all variables.
"""

from __future__ import annotations

from functools import lru_cache

from .errors import InputError, ShapeError
from .fields import Field, field_from_key

Mon = tuple  # tuple[int, ...]


def mon_mul(a: Mon, b: Mon) -> Mon:
    return tuple(x + y for x, y in zip(a, b))


def mon_divides(a: Mon, b: Mon) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mon_div(b: Mon, a: Mon):
    """b / a, or None when a does not divide b."""
    q = tuple(y - x for x, y in zip(a, b))
    if any(e < 0 for e in q):
        return None
    return q


def mon_lcm(a: Mon, b: Mon) -> Mon:
    return tuple(max(x, y) for x, y in zip(a, b))


def mon_gcd_is_one(a: Mon, b: Mon) -> bool:
    return all(x == 0 or y == 0 for x, y in zip(a, b))


class PolyRing:
    """Ambient polynomial ring: field, named variables with positive weights,
    and a monomial order tag ('grevlex' or 'lex')."""

    def __init__(self, field: Field, variables, weights=None, order="grevlex"):
        self.field = field
        self.variables = tuple(variables)
        if len(set(self.variables)) != len(self.variables):
            raise InputError("duplicate variable names")
        self.weights = tuple(weights) if weights is not None else (1,) * len(self.variables)
        if len(self.weights) != len(self.variables) or any(w <= 0 for w in self.weights):
            raise InputError("weights must be positive, one per variable")
        if order not in ("grevlex", "lex"):
            raise InputError(f"unknown monomial order {order!r}")
        self.order = order
        self.nvars = len(self.variables)
        self.zero_mon = (0,) * self.nvars
        self.key = f"{field.key}[{','.join(self.variables)}]w{self.weights}o{order}"
        self._key_cache: dict = {}

    def wdeg(self, mon: Mon) -> int:
        return sum(w * e for w, e in zip(self.weights, mon))

    def mon_key(self, mon: Mon):
        """Sort key: larger key = larger monomial in the ring's order (cached)."""
        k = self._key_cache.get(mon)
        if k is None:
            if self.order == "grevlex":
                k = (self.wdeg(mon), tuple(-e for e in reversed(mon)))
            else:  # graded lex: total degree first, then lex
                k = (self.wdeg(mon), mon)
            self._key_cache[mon] = k
        return k

    # -- polynomial constructors -------------------------------------------

    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return Poly(self, {self.zero_mon: self.field.one})

    def const(self, c) -> "Poly":
        c = self.field.coerce(c)
        return Poly(self, {} if c == self.field.zero else {self.zero_mon: c})

    def var(self, i: int) -> "Poly":
        mon = tuple(1 if j == i else 0 for j in range(self.nvars))
        return Poly(self, {mon: self.field.one})

    def gens(self):
        return [self.var(i) for i in range(self.nvars)]

    def monomial(self, mon: Mon, coeff=1) -> "Poly":
        c = self.field.coerce(coeff)
        return Poly(self, {tuple(mon): c} if c != self.field.zero else {})

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"{self.field.key}[{','.join(self.variables)}]"


class Poly:
    """Sparse polynomial over a :class:`PolyRing`.  Immutable by convention."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms  # mon -> nonzero coeff

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        K = self.ring.field
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = K.add(out.get(m, K.zero), c)
            if s == K.zero:
                out.pop(m, None)
            else:
                out[m] = s
        return Poly(self.ring, out)

    def __neg__(self):
        K = self.ring.field
        return Poly(self.ring, {m: K.neg(c) for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        K = self.ring.field
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mon_mul(m1, m2)
                s = K.add(out.get(m, K.zero), K.mul(c1, c2))
                if s == K.zero:
                    out.pop(m, None)
                else:
                    out[m] = s
        return Poly(self.ring, out)

    def scale(self, c):
        K = self.ring.field
        c = K.coerce(c)
        if c == K.zero:
            return Poly(self.ring, {})
        return Poly(self.ring, {m: K.mul(cc, c) for m, cc in self.terms.items()})

    def lt(self):
        """(monomial, coeff) of the leading term; None on zero."""
        if not self.terms:
            return None
        key = self.ring.mon_key
        m = max(self.terms, key=key)
        return m, self.terms[m]

    def degree(self):
        """Weighted degree of a homogeneous polynomial (None on zero)."""
        if not self.terms:
            return None
        degs = {self.ring.wdeg(m) for m in self.terms}
        if len(degs) != 1:
            raise InputError(f"inhomogeneous polynomial {self}")
        return degs.pop()

    def is_homogeneous(self) -> bool:
        return len({self.ring.wdeg(m) for m in self.terms}) <= 1

    def is_constant(self) -> bool:
        return not self.terms or set(self.terms) == {self.ring.zero_mon}

    def constant_value(self):
        return self.terms.get(self.ring.zero_mon, self.ring.field.zero)

    def sorted_terms(self):
        key = self.ring.mon_key
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    def canonical_str(self) -> str:
        if not self.terms:
            return "0"
        K = self.ring.field
        parts = []
        for m, c in self.sorted_terms():
            factors = []
            for name, e in zip(self.ring.variables, m):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            cs = K.to_str(c)
            neg = cs.startswith("-")
            if neg:
                cs = cs[1:]
            if factors and cs == "1":
                body = "*".join(factors)
            elif factors:
                body = cs + "*" + "*".join(factors)
            else:
                body = cs
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append(("- " if neg else "+ ") + body)
        return " ".join(parts)

    def key(self):
        """Canonical hashable form."""
        return tuple(sorted(self.terms.items()))

    def __eq__(self, other):
        return isinstance(other, Poly) and self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring.key, self.key()))

    def __repr__(self):
        return self.canonical_str()


class GradedRing:
    """A graded quotient R = S/I of a polynomial ring by a homogeneous ideal.

    Graded-local: the homogeneous maximal ideal is generated by all variables.
    The reduced Groebner basis of I is computed lazily and then frozen; all
    module computations lift to S with the defining relations appended.
    """

    def __init__(self, poly_ring: PolyRing, defining_ideal=(), name=None):
        self.poly_ring = poly_ring
        gens = []
        for f in defining_ideal:
            if not isinstance(f, Poly) or f.ring != poly_ring:
                raise InputError("defining polynomial from a different ring")
            if f.is_zero():
                continue
            if not f.is_homogeneous():
                raise InputError(f"defining polynomial {f} is not homogeneous")
            if f.degree() == 0:
                raise InputError("defining ideal contains a unit")
            gens.append(f)
        self.defining_ideal = tuple(gens)
        self.name = name
        self.key = f"{poly_ring.key}/({';'.join(sorted(g.canonical_str() for g in gens))})"
        self._cache: dict = {}

    @property
    def field(self) -> Field:
        return self.poly_ring.field

    @property
    def variables(self):
        return self.poly_ring.variables

    @property
    def nvars(self) -> int:
        return self.poly_ring.nvars

    @property
    def is_ambient(self) -> bool:
        return not self.defining_ideal

    def ideal_gb(self):
        """Reduced Groebner basis of the defining ideal (tuple of Poly)."""
        if "ideal_gb" not in self._cache:
            from .freemodules import reduced_groebner_polys

            self._cache["ideal_gb"] = tuple(reduced_groebner_polys(self.poly_ring, self.defining_ideal))
        return self._cache["ideal_gb"]

    def normal_form_poly(self, f: Poly) -> Poly:
        """Canonical representative of f modulo the defining ideal."""
        from .freemodules import poly_normal_form

        return poly_normal_form(self.poly_ring, f, self.ideal_gb())

    def ambient(self) -> "GradedRing":
        """The polynomial ring S viewed as a graded ring with zero ideal."""
        if "ambient" not in self._cache:
            self._cache["ambient"] = GradedRing(self.poly_ring, ()) if self.defining_ideal else self
        return self._cache["ambient"]

    def __eq__(self, other):
        return isinstance(other, GradedRing) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        if self.name:
            return self.name
        base = repr(self.poly_ring)
        if self.defining_ideal:
            return f"{base}/({', '.join(g.canonical_str() for g in self.defining_ideal)})"
        return base


@lru_cache(maxsize=None)
def _mon_cache(nvars, degree, weights):
    if degree < 0:
        return ()
    if nvars == 0:
        return ((),) if degree == 0 else ()
    out = []
    w = weights[0]
    for e in range(degree // w + 1):
        for rest in _mon_cache(nvars - 1, degree - w * e, weights[1:]):
            out.append((e,) + rest)
    return tuple(out)


def monomials_of_degree(ring: PolyRing, degree: int):
    """All monomials of the given weighted degree, in a fixed canonical order."""
    return _mon_cache(ring.nvars, degree, ring.weights)


def parse_field(text: str) -> Field:
    return field_from_key(text)
