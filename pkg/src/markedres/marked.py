"""Marked sets over a quasi-stable module, reduction and the basis criterion."""
from __future__ import annotations

import random
from concurrent.futures import Executor
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Tuple

from .polyring import ModuleTerm, Poly, format_poly, format_term, iteration_key, unit_exps
from .quasistable import QuasiStableModule, nonmultiplicative


class MarkedSetError(ValueError):
    pass


class HeadNotInPommaretBasis(MarkedSetError):
    pass


class TailTermInU(MarkedSetError):
    pass


class DegreeMismatch(MarkedSetError):
    pass


class MissingHead(MarkedSetError):
    pass


class NotABasis(ValueError):
    def __init__(self, msg: str, witness=None):
        super().__init__(msg)
        self.witness = witness


@dataclass(frozen=True)
class MarkedElement:
    head: ModuleTerm
    poly: Poly  # head term with coefficient 1 plus tail

    @property
    def tail(self) -> Poly:
        return self.poly - Poly.term(self.head)

    @property
    def degree(self) -> int:
        return self.head.degree


class MarkedSet:
    """One marked element per Pommaret basis term of ``U``, in the basis order."""

    def __init__(self, U: QuasiStableModule, elements: Mapping[ModuleTerm, Poly], check: bool = True):
        self.U = U
        self.heads: List[ModuleTerm] = list(U.pommaret_basis)
        self.elements: Dict[ModuleTerm, MarkedElement] = {}
        if check:
            for h in elements:
                if h not in U._pset:
                    raise HeadNotInPommaretBasis(f"head {format_term(h, U.m > 1)} is not in the Pommaret basis")
            for h in self.heads:
                if h not in elements:
                    raise MissingHead(f"no marked element with head {format_term(h, U.m > 1)}")
        for h in self.heads:
            p = elements[h]
            if check:
                if p.coeff(h) != 1:
                    raise MarkedSetError(f"head {format_term(h, U.m > 1)} must have coefficient 1")
                for t in p.support():
                    if t == h:
                        continue
                    if t.degree != h.degree:
                        raise DegreeMismatch(
                            f"tail term {format_term(t, U.m > 1)} has degree {t.degree}, head has {h.degree}")
                    if U.contains(t):
                        raise TailTermInU(f"tail term {format_term(t, U.m > 1)} of f_{format_term(h)} lies in U")
            self.elements[h] = MarkedElement(h, p)

    @classmethod
    def from_tails(cls, U: QuasiStableModule, tails: Mapping[ModuleTerm, Poly]) -> "MarkedSet":
        for h, t in tails.items():
            if h in t.support():
                raise MarkedSetError(f"tail of {format_term(h)} contains its head")
        return cls(U, {h: Poly.term(h) + tails.get(h, Poly()) for h in set(U.pommaret_basis) | set(tails)})

    @classmethod
    def monomial(cls, U: QuasiStableModule) -> "MarkedSet":
        return cls(U, {h: Poly.term(h) for h in U.pommaret_basis})

    def __getitem__(self, head: ModuleTerm) -> Poly:
        return self.elements[head].poly

    def __iter__(self):
        return iter(self.heads)

    def __len__(self):
        return len(self.heads)

    def polys(self) -> List[Poly]:
        return [self.elements[h].poly for h in self.heads]

    def degrees(self) -> List[int]:
        return [h.degree for h in self.heads]

    def map_coeffs(self, fn) -> "MarkedSet":
        return MarkedSet(self.U, {h: self[h].map_coeffs(fn) for h in self.heads}, check=False)

    def is_rational(self) -> bool:
        return all(isinstance(c, Fraction) for h in self.heads for _, c in self[h].items())

    def __eq__(self, other):
        return isinstance(other, MarkedSet) and self.heads == other.heads and all(
            self[h] == other[h] for h in self.heads)

    def describe(self) -> str:
        return "\n".join(f"{format_term(h, self.U.m > 1)} | {format_poly(self.elements[h].tail)}"
                         for h in self.heads)


def make_marked_set(U: QuasiStableModule, assignments: Mapping[ModuleTerm, Poly]) -> MarkedSet:
    """Build a marked set from ``head -> tail`` assignments (missing heads get zero tails only
    if listed; every Pommaret term must be assigned)."""
    for h in U.pommaret_basis:
        if h not in assignments:
            raise MissingHead(f"no marked element with head {format_term(h, U.m > 1)}")
    return MarkedSet.from_tails(U, assignments)


@dataclass
class UniqueWriting:
    quotients: Dict[ModuleTerm, Poly]
    remainder: Poly
    steps: int = 0

    def quotient(self, head: ModuleTerm) -> Poly:
        return self.quotients.get(head, Poly())


def reduce(f: Poly, F: MarkedSet, rng: Optional[random.Random] = None) -> UniqueWriting:
    """Rewrite ``f`` as sum P_g f_g + g with remainder g supported outside U.

    Default strategy reduces the greatest reducible term in the iteration order; passing
    ``rng`` picks a random reducible term at each step instead.
    """
    U = F.U
    work = dict(f.x_coefficients())
    quot: Dict[ModuleTerm, Dict[ModuleTerm, object]] = {}
    steps = 0
    gen_of: Dict[ModuleTerm, Optional[ModuleTerm]] = {}

    def gen(t):
        g = gen_of.get(t, False)
        if g is False:
            g = U.cone_generator(t)
            gen_of[t] = g
        return g

    while True:
        reducible = [t for t in work if gen(t) is not None]
        if not reducible:
            break
        if rng is None:
            t = max(reducible, key=iteration_key)
        else:
            t = rng.choice(sorted(reducible, key=iteration_key))
        c = work[t]
        g = gen(t)
        eta = t.quotient(g)
        q = quot.setdefault(g, {})
        key = ModuleTerm(eta)
        s = q.get(key)
        s = c if s is None else s + c
        if s:
            q[key] = s
        else:
            q.pop(key, None)
        for u, v in F[g].items():
            w = u.times(eta)
            nv = work.get(w)
            nv = -(v * c) if nv is None else nv - v * c
            if nv:
                work[w] = nv
            else:
                work.pop(w, None)
        steps += 1
    quotients = {g: Poly(q) for g, q in quot.items() if q}
    return UniqueWriting(quotients, Poly(work), steps)


def reconstruct(w: UniqueWriting, F: MarkedSet) -> Poly:
    acc = w.remainder
    for g, P in w.quotients.items():
        acc = acc + P * F[g]
    return acc


@dataclass(frozen=True)
class BasisVerdict:
    is_basis: bool
    witness: Optional[Tuple[ModuleTerm, int, Poly]] = None

    def __bool__(self):
        return self.is_basis

    def describe(self, module: bool = False) -> str:
        if self.is_basis:
            return "marked basis"
        h, i, r = self.witness
        return f"not a marked basis: x{i}*f_{{{format_term(h, module)}}} has remainder {format_poly(r)}"


def prolongations(F: MarkedSet) -> List[Tuple[ModuleTerm, int]]:
    return [(h, i) for h in F.heads for i in nonmultiplicative(h)]


def _reduce_prolongation(args):
    F, h, i = args
    return reduce(F[h].shift_by(unit_exps(F.U.nvars, i)), F)


def prolongation_writings(F: MarkedSet, executor: Optional[Executor] = None
                          ) -> List[Tuple[ModuleTerm, int, UniqueWriting]]:
    pairs = prolongations(F)
    jobs = [(F, h, i) for h, i in pairs]
    if executor is not None and len(jobs) > 1:
        results = list(executor.map(_reduce_prolongation, jobs))
    else:
        results = [_reduce_prolongation(j) for j in jobs]
    return [(h, i, w) for (h, i), w in zip(pairs, results)]


def is_marked_basis(F: MarkedSet, executor: Optional[Executor] = None) -> BasisVerdict:
    for h, i, w in prolongation_writings(F, executor):
        if w.remainder:
            return BasisVerdict(False, (h, i, w.remainder))
    return BasisVerdict(True)


def truncate(F: MarkedSet, s: int) -> MarkedSet:
    """Marked basis of the degree->=s truncation of (F)."""
    v = is_marked_basis(F)
    if not v:
        raise NotABasis(v.describe(F.U.m > 1), v.witness)
    U = F.U
    if all(h.degree >= s for h in U.pommaret_basis):
        return F
    Us = U.truncation(s)
    elems = {}
    for h in Us.pommaret_basis:
        if h in F.elements:
            elems[h] = F[h]
        else:
            g = reduce(Poly.term(h), F).remainder
            elems[h] = Poly.term(h) - g
    return MarkedSet(Us, elems)
