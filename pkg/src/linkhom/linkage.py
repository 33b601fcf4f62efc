"""The linkage apparatus: transposes, the syzygy-transpose operator, stability,
horizontal-linkage certification, universal pushforwards, and ideal linkage."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InputError, PreconditionError, PushforwardObstructed
from .freemodules import SubmoduleGB, vec_degree, vec_scale
from .hilbert import HilbertTable
from .ideals import Ideal, colon_ideal
from .modules import (
    FPModule,
    GradedMap,
    IsoVerdict,
    _blockdiag_relations,
    _blowup_twists,
    _hom_complex_map,
    cokernel_of_map,
    default_window,
    degree_part_basis,
    direct_sum,
    ext_module,
    free_module,
    free_resolution,
    hom_module,
    identity_map,
    is_isomorphic,
    kernel_of_map,
    minimal_module,
    minimal_presentation,
    subquotient,
    syzygy_module,
    tensor_module,
    tor_module,
    twist_module,
)


def _unwrap_semidualizing(C, allow_uncertified: bool):
    """Accept a certified SemidualizingModule, or a bare FPModule when
    explicitly overridden."""
    from .gclass import SemidualizingModule

    if isinstance(C, SemidualizingModule):
        return C.module
    if isinstance(C, FPModule):
        if allow_uncertified:
            return C
        raise PreconditionError(
            "C is not certified semidualizing; pass a SemidualizingModule or "
            "override with allow_uncertified=True"
        )
    raise InputError("C must be an FPModule or SemidualizingModule")


# ---------------------------------------------------------------------------
# transposes
# ---------------------------------------------------------------------------

def transpose(M: FPModule) -> FPModule:
    """Auslander transpose: cokernel of the R-dual of the minimal presentation."""
    if "transpose" in M._cache:
        return M._cache["transpose"]
    Mm = minimal_module(M)
    gen_twists = tuple(-s for s in Mm.rel_twists)
    cols = []
    for i in range(Mm.rank):
        col = {}
        for j, rel in enumerate(Mm.relations):
            for (c, m), v in rel.items():
                if c == i:
                    col[(j, m)] = v
        cols.append(col)
    raw = FPModule(Mm.ring, gen_twists, [c for c in cols if c])
    out = minimal_module(raw)
    M._cache["transpose"] = out
    return out


def _transpose_C_raw(Mm: FPModule, Cmod: FPModule):
    """coker Hom(f, C) for the minimal presentation f of M, unminimalized.

    Returns (module, delta_cols) where delta_cols are the images of the
    Hom(F0, C) generator space, indexed by (i, a)."""
    g = Cmod.rank
    h1_twists = _blowup_twists(Mm.rel_twists, Cmod.gen_twists, sign=-1)
    delta = _hom_complex_map(Mm.relations, Mm.rank, Mm.nrels, g)
    rels = [c for c in delta if c] + _blockdiag_relations(Mm.nrels, Cmod.relations, g)
    return FPModule(Mm.ring, h1_twists, rels), delta


def transpose_C(M: FPModule, C, allow_uncertified=False) -> FPModule:
    """Transpose with respect to a semidualizing module: coker Hom(f, C)."""
    Cmod = _unwrap_semidualizing(C, allow_uncertified)
    if M.ring != Cmod.ring:
        raise InputError("transpose_C over different rings")
    key = ("transpose_C", Cmod.key())
    if key in M._cache:
        return M._cache[key]
    Mm = minimal_module(M)
    raw, _ = _transpose_C_raw(Mm, minimal_module(Cmod))
    out = minimal_module(raw)
    M._cache[key] = out
    return out


# ---------------------------------------------------------------------------
# stability and free-summand splitting
# ---------------------------------------------------------------------------

def _find_free_splitting(Mm: FPModule, twist: int):
    """A split surjection onto R(twist) if one exists: (f, g) with f∘g = 1."""
    ring = Mm.ring
    K = ring.field
    Ra = free_module(ring, (twist,))
    _, maps_out = hom_module(Mm, Ra)
    if not maps_out:
        return None
    elements = degree_part_basis(Mm, -twist)  # Hom(R(twist), M)_0
    zm = ring.poly_ring.zero_mon
    for f in maps_out:
        for _amb, coords in elements:
            value = f.apply(coords)
            value = Ra.rel_submodule().normal_form(value)
            c = value.get((0, zm), K.zero)
            if c != K.zero:
                section = GradedMap(Ra, Mm, [vec_scale(K, coords, K.inv(c))], check=False)
                return f, section
    return None


def is_stable(M: FPModule) -> bool:
    """No nonzero free direct summand: the composition pairing
    Hom(M, R(a))_0 x Hom(R(a), M)_0 -> k vanishes for every generator twist a."""
    Mm = minimal_module(M)
    for twist in sorted(set(Mm.gen_twists)):
        if _find_free_splitting(Mm, twist) is not None:
            return False
    return True


def split_free_summands(M: FPModule):
    """(stable part, list of split free twists).  Exact, deterministic."""
    Mm = minimal_module(M)
    frees = []
    while True:
        hit = None
        for twist in sorted(set(Mm.gen_twists)):
            hit = _find_free_splitting(Mm, twist)
            if hit is not None:
                frees.append(twist)
                break
        if hit is None:
            return Mm, frees
        f, _g = hit
        Mm = minimal_module(kernel_of_map(f)[0])


# ---------------------------------------------------------------------------
# the linkage operator
# ---------------------------------------------------------------------------

def lambda_operator(M: FPModule) -> FPModule:
    """λM = Ω Tr M, computed through minimal presentations.

    On input with free summands the operator acts on the stable part (the
    transpose kills projectives anyway; splitting keeps the syzygy minimal).
    """
    if "lambda" in M._cache:
        return M._cache["lambda"]
    stable, _ = split_free_summands(M)
    if stable.is_zero():
        out = FPModule(M.ring, (), ())
    else:
        out = minimal_module(syzygy_module(transpose(stable)))
    M._cache["lambda"] = out
    return out


def lambda_C(M: FPModule, C, allow_uncertified=False) -> FPModule:
    """λ_C M = image of Hom(f, C) for the minimal presentation f of M."""
    Cmod = minimal_module(_unwrap_semidualizing(C, allow_uncertified))
    Mm, _ = split_free_summands(M)
    if Mm.is_zero():
        return FPModule(M.ring, (), ())
    g = Cmod.rank
    ring = M.ring
    h1_twists = _blowup_twists(Mm.rel_twists, Cmod.gen_twists, sign=-1)
    delta = _hom_complex_map(Mm.relations, Mm.rank, Mm.nrels, g)
    denom = _blockdiag_relations(Mm.nrels, Cmod.relations, g)
    sub = SubmoduleGB(ring, h1_twists, denom)
    U = [c for c in delta if c and not sub.contains(c)]
    if not U:
        return FPModule(ring, (), ())
    return minimal_module(subquotient(ring, h1_twists, U, denom))


# ---------------------------------------------------------------------------
# horizontal linkage certification
# ---------------------------------------------------------------------------

@dataclass
class LinkageCertificate:
    """Three independent routes to horizontal linkage, and their agreement.

    ``linked``: verdict of the double-application test M ≅ λ²M.
    ``consistent``: the double-application verdict agrees with
    [stable and Ext^1(Tr M, R) = 0]; a disagreement is a genuine failure of
    the criterion equivalence and is surfaced, never patched over.
    """

    module: FPModule
    lambda_module: FPModule
    lambda_squared: FPModule
    iso_witness: IsoVerdict
    stability_verdict: bool
    ext1_tr_vanishes: bool
    status: str = "ok"  # "ok" | "undetermined"

    @property
    def linked(self) -> bool:
        return self.iso_witness.yes

    @property
    def criterion(self) -> bool:
        return self.stability_verdict and self.ext1_tr_vanishes

    @property
    def consistent(self) -> bool:
        return self.status == "ok" and self.linked == self.criterion

    @property
    def valid(self) -> bool:
        return self.consistent


def certify_horizontal_linkage(M: FPModule, rng=None) -> LinkageCertificate:
    """Compute λM, λ²M, the twist-blind isomorphism verdict, stability, and
    Ext^1(Tr M, R); all three criteria are computed independently."""
    Mm = minimal_module(M)
    lam = lambda_operator(Mm)
    lam2 = lambda_operator(lam)
    iso = is_isomorphic(Mm, lam2, allow_twist=True, rng=rng)
    stable = is_stable(Mm)
    ext1 = ext_module(1, transpose(Mm), free_module(M.ring, (0,))).is_zero()
    status = "undetermined" if iso.status == "undetermined" else "ok"
    return LinkageCertificate(Mm, lam, lam2, iso, stable, ext1, status)


# ---------------------------------------------------------------------------
# universal pushforward
# ---------------------------------------------------------------------------

def universal_pushforward(M: FPModule, C, allow_uncertified=False):
    """An embedding f: M -> ⊕ C(twists) built from a generating set of
    Hom(M, C), with N = coker f satisfying Ext^1(N, C) = 0.

    Precondition (checked): Ext^1(Tr_C M, C) = 0; otherwise the obstruction
    table is raised in PushforwardObstructed.
    """
    Cmod = _unwrap_semidualizing(C, allow_uncertified)
    Mm = minimal_module(M)
    obstruction = ext_module(1, transpose_C(Mm, Cmod, allow_uncertified=True), Cmod)
    if not obstruction.is_zero():
        table = obstruction.finite_table() or obstruction.hilbert(default_window(obstruction))
        raise PushforwardObstructed("Ext^1(Tr_C M, C) != 0", table)

    H, _ = hom_module(Mm, Cmod)
    S = M.ring.poly_ring
    gC = Cmod.rank
    amb_twists, reps, _ = H._ambient_data()
    target = None
    pieces = []
    for rep in reps:
        d = vec_degree(S, rep, amb_twists)
        piece = twist_module(Cmod, d)
        pieces.append((rep, d, piece))
        target = piece if target is None else direct_sum(target, piece)
    if target is None:
        target = FPModule(M.ring, (), ())
        f = GradedMap(Mm, target, [{} for _ in range(Mm.rank)], check=False)
        N = FPModule(M.ring, (), ())
        return f, N
    cols = []
    for i in range(Mm.rank):
        col = {}
        for l, (rep, _d, _piece) in enumerate(pieces):
            for (idx, m), c in rep.items():
                if idx // gC == i:
                    col[(l * gC + idx % gC, m)] = c
        cols.append(col)
    f = GradedMap(Mm, target, cols, check=False)
    kernel, _incl = kernel_of_map(f)
    if not kernel.is_zero():
        raise InputError("pushforward failed to embed despite vanishing obstruction")
    N = minimal_module(cokernel_of_map(f))
    check = ext_module(1, N, Cmod)
    if not check.is_zero():
        raise InputError("pushforward cokernel has nonzero Ext^1 against C")
    return f, N


# ---------------------------------------------------------------------------
# ideal linkage
# ---------------------------------------------------------------------------

@dataclass
class IdealLink:
    c: Ideal
    I: Ideal
    J: Ideal
    verified: bool


def link_ideal(c: Ideal, I: Ideal) -> IdealLink:
    """J = c : I, verified when c : J recovers I (and c ⊆ I ∩ J)."""
    if c.ring != I.ring:
        raise InputError("linking ideal over a different ring")
    if not I.contains_ideal(c):
        raise InputError("the linking ideal must be contained in I")
    J = colon_ideal(c, I)
    back = colon_ideal(c, J)
    verified = back == I and J.contains_ideal(c)
    return IdealLink(c, I, J, verified)


# ---------------------------------------------------------------------------
# stable Hom
# ---------------------------------------------------------------------------

def stable_hom(M: FPModule, N: FPModule) -> FPModule:
    """Hom modulo maps factoring through frees, as Tor_1(Tr M, N)."""
    return tor_module(1, transpose(M), N)


def stable_hom_direct(M: FPModule, N: FPModule) -> FPModule:
    """The quotient-by-β definition, computed by exhibiting the maps that
    factor through frees.  Requires both modules to have finite length, where
    the factoring search is a finite linear-algebra problem."""
    if M.finite_table() is None or N.finite_table() is None:
        raise PreconditionError("direct stable Hom needs finite-length modules")
    Mm = minimal_module(M)
    Nm = minimal_module(N)
    ring = M.ring
    H, _ = hom_module(Mm, Nm)
    if H.rank == 0:
        return H
    amb_twists, reps, denoms = H._ambient_data()
    gN = Nm.rank
    HomMR, _ = hom_module(Mm, free_module(ring, (0,)))
    beta = []
    _, xi_reps, _ = HomMR._ambient_data()
    for xi in xi_reps:
        for b in range(gN):
            beta.append({(i * gN + b, m): c for (i, m), c in xi.items()})
    dens = list(denoms) + [v for v in beta if v]
    sub = SubmoduleGB(ring, amb_twists, dens)
    U = [u for u in reps if not sub.contains(u)]
    if not U:
        return FPModule(ring, (), ())
    return minimal_module(subquotient(ring, amb_twists, U, dens))
