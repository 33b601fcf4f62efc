"""Workspaces, script execution, check dispatch, and canonical report emission."""

from __future__ import annotations

import hashlib
import json
import random
import time
from dataclasses import dataclass, field

from .errors import InputError
from .gclass import (
    SemidualizingModule,
    canonical_module,
    canonical_semidualizing,
    default_bound,
    is_semidualizing,
    semidualizing_ring,
)
from .ideals import Ideal
from .linkage import lambda_operator, transpose
from .modules import (
    FPModule,
    cyclic_module,
    free_module,
    minimal_module,
    syzygy_module,
    twist_module,
)
from .rings import GradedRing, PolyRing
from .fields import field_from_key
from .checks import REGISTRY, CheckReport
from .script import (
    CheckStmt,
    IdealDecl,
    ModuleDecl,
    RingDecl,
    SemidualDecl,
    SessionScript,
    SetStmt,
)


@dataclass
class Settings:
    seed: int = 0
    bound: int | None = None  # None: per-ring default dim + depth + 2
    retries: int = 64
    window: tuple | None = None

    def to_json(self):
        return {"seed": self.seed, "bound": self.bound, "retries": self.retries,
                "window": list(self.window) if self.window else None}


class Workspace:
    """Named rings, modules, ideals and semidualizing bindings plus settings.

    All randomized searches draw from per-call-site generators derived from
    the seed, so results are independent of execution order.
    """

    def __init__(self, settings: Settings | None = None):
        self.settings = settings or Settings()
        self.rings: dict[str, GradedRing] = {}
        self.modules: dict[str, FPModule] = {}
        self.ideals: dict[str, Ideal] = {}
        self.semiduals: dict[str, SemidualizingModule] = {}

    # -- deterministic randomness -------------------------------------------

    def rng_for(self, *tags) -> random.Random:
        text = repr((self.settings.seed,) + tags)
        seed = int.from_bytes(hashlib.sha256(text.encode()).digest()[:8], "big")
        return random.Random(seed)

    def bound_for(self, ring: GradedRing) -> int:
        if self.settings.bound is not None:
            return max(self.settings.bound, 1)
        return default_bound(ring)

    def ring_semidualizing(self, ring: GradedRing) -> SemidualizingModule:
        return semidualizing_ring(ring, max(self.bound_for(ring),
                                            _dim_plus_one(ring)))

    def canonical_semidualizing(self, ring: GradedRing) -> SemidualizingModule:
        return canonical_semidualizing(ring, max(self.bound_for(ring),
                                                 _dim_plus_one(ring)))

    # -- binding ----------------------------------------------------------------

    def _fresh(self, name):
        for table in (self.rings, self.modules, self.ideals, self.semiduals):
            if name in table:
                raise InputError(f"name {name!r} is already bound")

    def bind_ring(self, name, ring):
        self._fresh(name)
        self.rings[name] = ring

    def bind_module(self, name, module):
        self._fresh(name)
        self.modules[name] = module

    def bind_ideal(self, name, ideal):
        self._fresh(name)
        self.ideals[name] = ideal

    def bind_semidual(self, name, sd):
        self._fresh(name)
        self.semiduals[name] = sd

    def resolve(self, name, kind):
        table = {"ring": self.rings, "module": self.modules,
                 "ideal": self.ideals, "semidualizing": self.semiduals}[kind]
        if name not in table:
            raise InputError(f"unbound {kind} name {name!r}")
        return table[name]

    def object_hash(self, name) -> str:
        for table in (self.modules, self.ideals):
            if name in table:
                obj = table[name]
                key = obj.key()
                return hashlib.sha256(repr(key).encode()).hexdigest()[:12]
        if name in self.semiduals:
            return self.semiduals[name].module.hash_id()
        if name in self.rings:
            return hashlib.sha256(self.rings[name].key.encode()).hexdigest()[:12]
        return "?"


def _dim_plus_one(ring):
    from .ideals import ring_dimension

    return ring_dimension(ring) + 1


# ---------------------------------------------------------------------------
# script execution
# ---------------------------------------------------------------------------

def _eval_module_expr(ws: Workspace, expr) -> FPModule:
    op = expr[0]
    if op == "coker":
        ring = ws.resolve(expr[1], "ring")
        rows, gens = expr[2], expr[3]
        if rows and len(rows) != len(gens):
            raise InputError("matrix needs one row per generator twist")
        cols = []
        ncols = len(rows[0]) if rows else 0
        for j in range(ncols):
            col = {}
            for i, row in enumerate(rows):
                p = row[j]
                for m, c in p.terms.items():
                    col[(i, m)] = c
            cols.append(col)
        return FPModule(ring, tuple(gens), cols)
    if op == "ideal_quotient":
        ring = ws.resolve(expr[1], "ring")
        return cyclic_module(ring, Ideal(ring, list(expr[2])))
    if op == "canonical":
        return canonical_module(ws.resolve(expr[1], "ring"))
    if op == "free":
        return free_module(ws.resolve(expr[1], "ring"), tuple(expr[2]))
    if op in ("syzygy", "transpose", "lambda"):
        name = expr[1]
        M = ws.modules.get(name)
        if M is None:
            M = ws.semiduals[name].module
        return {"syzygy": syzygy_module, "transpose": transpose,
                "lambda": lambda_operator}[op](M)
    if op == "twist":
        name = expr[1]
        M = ws.modules.get(name) or ws.semiduals[name].module
        return twist_module(M, expr[2])
    raise InputError(f"unknown module expression {op!r}")


def _build_ring(decl: RingDecl) -> GradedRing:
    fld = field_from_key(decl.field_key)
    poly_ring = PolyRing(fld, decl.variables)
    # declared polynomials were parsed over an identical ambient ring; rebuild
    # them over this instance for object identity
    from .rings import Poly

    rels = [Poly(poly_ring, dict(p.terms)) for p in decl.relations]
    return GradedRing(poly_ring, rels, name=decl.name)


def execute_script(script: SessionScript, settings: Settings | None = None):
    """Run a parsed script: bind declarations, certify semidualizing modules,
    run checks.  Returns (workspace, reports)."""
    ws = Workspace(settings or Settings())
    reports = []
    for st in script.statements:
        if isinstance(st, RingDecl):
            ws.bind_ring(st.name, _build_ring(st))
        elif isinstance(st, ModuleDecl):
            ws.bind_module(st.name, _eval_module_expr(ws, st.expr))
        elif isinstance(st, IdealDecl):
            ring = ws.resolve(st.ring, "ring")
            from .rings import Poly

            gens = [Poly(ring.poly_ring, dict(p.terms)) for p in st.gens]
            ws.bind_ideal(st.name, Ideal(ring, gens))
        elif isinstance(st, SemidualDecl):
            ws.bind_semidual(st.name, _eval_semidual(ws, st))
        elif isinstance(st, SetStmt):
            setattr(ws.settings, st.key, st.value)
        elif isinstance(st, CheckStmt):
            reports.append(run_check(st.check_id, st.args, ws))
        else:
            raise InputError(f"cannot execute {st!r}")
    return ws, reports


def _eval_semidual(ws: Workspace, st: SemidualDecl) -> SemidualizingModule:
    op = st.expr[0]
    if op == "canonical":
        ring = ws.resolve(st.expr[1], "ring")
        return ws.canonical_semidualizing(ring)
    if op == "free":
        ring = ws.resolve(st.expr[1], "ring")
        mod = free_module(ring, tuple(st.expr[2]))
    elif op == "name":
        name = st.expr[1]
        if name in ws.rings:
            return ws.ring_semidualizing(ws.rings[name])
        mod = ws.resolve(name, "module")
    else:
        raise InputError(f"unknown semidualizing expression {op!r}")
    bound = max(ws.bound_for(mod.ring), _dim_plus_one(mod.ring))
    out = is_semidualizing(mod, bound)
    if not isinstance(out, SemidualizingModule):
        raise InputError(
            f"semidualizing certification of {st.name!r} refuted: "
            f"{out.refuted_condition} (index {out.refuted_index})")
    return out


# ---------------------------------------------------------------------------
# check dispatch
# ---------------------------------------------------------------------------

def run_check(check_id: str, args, ws: Workspace,
              counterexample_script: str | None = None) -> CheckReport:
    """Resolve bindings against the registry signature and run one check."""
    if check_id not in REGISTRY:
        raise InputError(f"unknown check id {check_id!r}; known: "
                         + ", ".join(sorted(REGISTRY)))
    cdef = REGISTRY[check_id]
    if len(args) != len(cdef.signature):
        raise InputError(f"{check_id} expects {len(cdef.signature)} arguments "
                         f"({', '.join(cdef.signature)}), got {len(args)}")
    resolved = []
    inputs = {}
    for pos, (kind, arg) in enumerate(zip(cdef.signature, args)):
        if kind == "int":
            if not isinstance(arg, int):
                raise InputError(f"argument {pos} of {check_id} must be an integer")
            resolved.append(arg)
            inputs[f"arg{pos}:int"] = str(arg)
        else:
            obj = ws.resolve(arg, kind)
            resolved.append(obj)
            inputs[f"arg{pos}:{kind}"] = f"{arg}#{ws.object_hash(arg)}"
    t0 = time.perf_counter()
    report = cdef.fn(ws, *resolved)
    report.timing_ms = (time.perf_counter() - t0) * 1000.0
    report.inputs = inputs
    if report.verdict == "fail" and counterexample_script:
        report.counterexample = counterexample_script
    return report


# ---------------------------------------------------------------------------
# report emission
# ---------------------------------------------------------------------------

def exit_code(reports) -> int:
    """0 all pass / hypothesis-not-met, 1 any fail, 2 any undetermined."""
    verdicts = {r.verdict for r in reports}
    if "fail" in verdicts:
        return 1
    if "undetermined" in verdicts:
        return 2
    return 0


def emit_report(reports, settings: Settings) -> bytes:
    """Canonical JSON: stable key order, exact integers, no timing data, so
    equal (script, seed, settings) gives byte-identical output."""
    ordered = sorted(reports, key=lambda r: (r.check_id, sorted(r.inputs.values())))
    summary = {"pass": 0, "fail": 0, "hypothesis-not-met": 0, "undetermined": 0}
    for r in ordered:
        summary[r.verdict] += 1
    doc = {
        "schema": "linkhom-report/1",
        "settings": settings.to_json(),
        "checks": [r.to_json() for r in ordered],
        "summary": summary,
    }
    return (json.dumps(doc, sort_keys=True, separators=(",", ":"),
                       ensure_ascii=True) + "\n").encode()
