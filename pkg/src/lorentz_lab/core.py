"""Causal-structure carriers and axiom validation.

Two kinds of spaces live here: finite tables (every relation and time
separation stored explicitly) and analytic spaces (relations computed from
formulas, see :mod:`lorentz_lab.models`).  Both present the same read
interface so that the geometric machinery downstream does not care which
kind it is scanning.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Single absolute tolerance for axiom-level float comparisons.  All shipped
# formulas are algebraic, so 1e-9 cleanly separates genuine violations from
# rounding noise.
EPS = 1e-9

INF = math.inf


class StructuralError(ValueError):
    """Malformed input tables (shape/dtype problems, not axiom failures)."""


class PreconditionError(ValueError):
    """An operation was called outside its stated domain."""


class LorentzQuery:
    """Uniform read interface over any space kind.

    Finite tables answer from storage, analytic spaces from formulas; either
    way the answers must be deterministic and mutually consistent (``tau > 0``
    iff ``ll``, ``tau == 0`` when not ``leq``, ...) on any finite sample.
    """

    def sample_points(self):
        """Finite point sample used by global scans."""
        raise NotImplementedError

    def d(self, p, q) -> float:
        raise NotImplementedError

    def leq(self, p, q) -> bool:
        raise NotImplementedError

    def ll(self, p, q) -> bool:
        raise NotImplementedError

    def tau(self, p, q) -> float:
        raise NotImplementedError


def _as_square(arr, n, name, dtype):
    out = np.array(arr, dtype=dtype)  # always copy: instances own their tables
    if out.shape != (n, n):
        raise StructuralError(f"{name} table must be {n}x{n}, got {out.shape}")
    return out


class FiniteLorentzSpace(LorentzQuery):
    """Point set 0..n-1 with explicit metric, relation and time-separation tables.

    ``tau`` entries may be ``math.inf`` (explicit marker for an infinite time
    separation); globally hyperbolic examples must be marker-free.
    """

    def __init__(self, d, leq, ll, tau):
        d = np.array(d, dtype=float)
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise StructuralError(f"d table must be square, got shape {d.shape}")
        n = d.shape[0]
        self.n = n
        self._d = d
        self._leq = _as_square(leq, n, "leq", bool)
        self._ll = _as_square(ll, n, "ll", bool)
        self._tau = _as_square(tau, n, "tau", float)
        if np.isnan(self._d).any() or np.isnan(self._tau).any():
            raise StructuralError("NaN entries are not permitted")
        for a in (self._d, self._leq, self._ll, self._tau):
            a.setflags(write=False)

    def sample_points(self):
        return range(self.n)

    def d(self, p, q):
        return float(self._d[p, q])

    def leq(self, p, q):
        return bool(self._leq[p, q])

    def ll(self, p, q):
        return bool(self._ll[p, q])

    def tau(self, p, q):
        return float(self._tau[p, q])

    @property
    def has_infinite_tau(self) -> bool:
        return bool(np.isinf(self._tau).any())

    def tau_table(self):
        return self._tau

    def leq_table(self):
        return self._leq


@dataclass(frozen=True)
class AxiomCheck:
    name: str
    passed: bool
    witness: tuple | None = None
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.passed]

    def __getitem__(self, name):
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def validate_axioms(space: FiniteLorentzSpace) -> ValidationReport:
    """Check every structural axiom of a finite space, reporting one named
    outcome per axiom together with the first counterexample tuple found."""
    if not isinstance(space, FiniteLorentzSpace):
        raise StructuralError("validate_axioms expects a finite table space")
    n = space.n
    d, leq, ll, tau = space._d, space._leq, space._ll, space._tau
    checks = []

    def record(name, witness, detail=""):
        checks.append(AxiomCheck(name, witness is None, witness, detail))

    # metric axioms
    w = None
    for i in range(n):
        if abs(d[i, i]) > EPS:
            w = (i,)
            break
    record("d zero diagonal", w)

    w = None
    for i in range(n):
        for j in range(i + 1, n):
            if abs(d[i, j] - d[j, i]) > EPS:
                w = (i, j)
                break
        if w:
            break
    record("d symmetric", w)

    w = None
    for i in range(n):
        for j in range(n):
            if i != j and d[i, j] <= EPS:
                w = (i, j)
                break
        if w:
            break
    record("d positive off diagonal", w)

    w = None
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if d[i, k] > d[i, j] + d[j, k] + EPS:
                    w = (i, j, k)
                    break
            if w:
                break
        if w:
            break
    record("d triangle inequality", w)

    # relation axioms
    w = next(((i,) for i in range(n) if not leq[i, i]), None)
    record("leq reflexive", w)

    w = None
    for i in range(n):
        for j in range(n):
            if leq[i, j]:
                for k in range(n):
                    if leq[j, k] and not leq[i, k]:
                        w = (i, j, k)
                        break
            if w:
                break
        if w:
            break
    record("leq transitive", w)

    w = None
    for i in range(n):
        for j in range(n):
            if ll[i, j]:
                for k in range(n):
                    if ll[j, k] and not ll[i, k]:
                        w = (i, j, k)
                        break
            if w:
                break
        if w:
            break
    record("ll transitive", w)

    w = None
    for i in range(n):
        for j in range(n):
            if ll[i, j] and not leq[i, j]:
                w = (i, j)
                break
        if w:
            break
    record("ll contained in leq", w)

    # time separation axioms
    w = None
    for i in range(n):
        for j in range(n):
            if not leq[i, j] and tau[i, j] > EPS:
                w = (i, j)
                break
        if w:
            break
    record("tau zero when unrelated", w)

    w = None
    for i in range(n):
        for j in range(n):
            pos = tau[i, j] > EPS
            if pos != bool(ll[i, j]):
                w = (i, j)
                break
        if w:
            break
    record("tau positive iff timelike", w)

    w = None
    for i in range(n):
        for j in range(n):
            if not leq[i, j]:
                continue
            for k in range(n):
                if leq[j, k] and tau[i, k] < tau[i, j] + tau[j, k] - EPS:
                    w = (i, j, k)
                    break
            if w:
                break
        if w:
            break
    record("reverse triangle inequality", w)

    return ValidationReport(tuple(checks))


@dataclass(frozen=True)
class PushupReport:
    n_triples: int
    violations: tuple

    @property
    def passed(self) -> bool:
        return not self.violations


def check_pushup(space: LorentzQuery, sample) -> PushupReport:
    """Verify the push-up rules on all ordered triples of the sample:
    a timelike step followed by a causal one (or vice versa) must compose to
    a timelike relation.  An empty sample passes vacuously."""
    pts = list(sample)
    violations = []
    count = 0
    for x in pts:
        for y in pts:
            for z in pts:
                count += 1
                if space.ll(x, y) and space.leq(y, z) and not space.ll(x, z):
                    violations.append(("ll-leq", x, y, z))
                if space.leq(x, y) and space.ll(y, z) and not space.ll(x, z):
                    violations.append(("leq-ll", x, y, z))
    return PushupReport(count, tuple(violations))


@dataclass(frozen=True)
class DiamondSet:
    base: tuple
    kind: str  # "causal" or "timelike"
    members: tuple
    d_bound: float = 0.0  # diameter of the member set; finite-sample stand-in for compactness

    def __contains__(self, r):
        return r in self.members

    def __len__(self):
        return len(self.members)


def diamond(space: LorentzQuery, p, q, kind="causal") -> DiamondSet:
    """Points between p and q: causal kind collects every r with p<=r<=q,
    timelike kind every r with p<<r<<q, scanned over the space sample."""
    if kind == "causal":
        members = tuple(r for r in space.sample_points()
                        if space.leq(p, r) and space.leq(r, q))
    elif kind == "timelike":
        members = tuple(r for r in space.sample_points()
                        if space.ll(p, r) and space.ll(r, q))
    else:
        raise StructuralError(f"unknown diamond kind {kind!r}")
    bound = 0.0
    for i, a in enumerate(members):
        for b in members[i + 1:]:
            bound = max(bound, space.d(a, b))
    return DiamondSet((p, q), kind, members, bound)


def check_causal_convexity(space: LorentzQuery, subset) -> bool:
    """True iff the causal diamond of every pair drawn from the subset stays
    inside the subset."""
    members = set(subset)
    sample = list(space.sample_points())
    outside = [r for r in sample if r not in members]
    for p in members:
        for q in members:
            if not space.leq(p, q):
                continue
            for r in outside:
                if space.leq(p, r) and space.leq(r, q):
                    return False
    return True
