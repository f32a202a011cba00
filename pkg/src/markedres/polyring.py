"""Exact sparse polynomials over Q or over a parameter polynomial ring.

Two layers:

* ``ParamPoly`` -- polynomials in named parameters (``C_0``, ``B_17`` ...)
  with rational coefficients. They serve as coefficients of the x-polynomials
  in the generic (scheme) computations.
* ``Poly`` -- elements of a graded free module ``R^m(-d)`` over
  ``R = A[x_0..x_n]`` stored as ``{ModuleTerm: coefficient}``. Ring elements
  are elements of ``R^1`` with zero shift.

Coefficients are either ``Fraction`` or ``ParamPoly``; all algorithms only use
``+``, ``-``, ``*`` and the zero test, so they run unchanged on both.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, NamedTuple, Optional, Tuple, Union

Param = Tuple[str, int]
Mono = Tuple[Tuple[Param, int], ...]


class PolyError(ValueError):
    pass


def param_name(p: Param) -> str:
    # index -1 marks an unnumbered parameter such as ``a``
    return p[0] if p[1] < 0 else f"{p[0]}_{p[1]}"


def parse_param(name: str) -> Param:
    m = re.fullmatch(r"([A-Za-z][A-Za-z]*)_?(\d*)", name)
    if not m:
        raise PolyError(f"bad parameter name {name!r}")
    fam, idx = m.groups()
    return (fam, int(idx) if idx else -1)


def _mono_mul(a: Mono, b: Mono) -> Mono:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


def _mono_deg(m: Mono) -> int:
    return sum(e for _, e in m)


class ParamPoly:
    """Sparse polynomial in named parameters with rational coefficients.

    Stored canonically: no zero coefficients, monomials as sorted tuples of
    ``((family, index), exponent)``.
    """

    __slots__ = ("_t", "_hash")

    def __init__(self, terms: Optional[Dict[Mono, Fraction]] = None):
        self._t: Dict[Mono, Fraction] = {}
        if terms:
            for m, c in terms.items():
                if c:
                    self._t[m] = Fraction(c)
        self._hash = None

    @classmethod
    def var(cls, family: str, index: int) -> "ParamPoly":
        return cls({(((family, index), 1),): Fraction(1)})

    @classmethod
    def const(cls, c) -> "ParamPoly":
        return cls({(): Fraction(c)})

    @staticmethod
    def _lift(x) -> "ParamPoly":
        if isinstance(x, ParamPoly):
            return x
        if isinstance(x, (int, Fraction)):
            return ParamPoly.const(x)
        return NotImplemented

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        if not o._t:
            return self
        if not self._t:
            return o
        t = dict(self._t)
        for m, c in o._t.items():
            s = t.get(m, 0) + c
            if s:
                t[m] = s
            else:
                t.pop(m, None)
        r = ParamPoly()
        r._t = t
        return r

    __radd__ = __add__

    def __neg__(self):
        r = ParamPoly()
        r._t = {m: -c for m, c in self._t.items()}
        return r

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return ParamPoly()
            r = ParamPoly()
            r._t = {m: c * other for m, c in self._t.items()}
            return r
        if not isinstance(other, ParamPoly):
            return NotImplemented
        if not self._t or not other._t:
            return ParamPoly()
        t: Dict[Mono, Fraction] = {}
        for m1, c1 in self._t.items():
            for m2, c2 in other._t.items():
                m = _mono_mul(m1, m2)
                s = t.get(m, 0) + c1 * c2
                if s:
                    t[m] = s
                else:
                    t.pop(m, None)
        r = ParamPoly()
        r._t = t
        return r

    __rmul__ = __mul__

    def __pow__(self, k: int):
        r = ParamPoly.const(1)
        for _ in range(k):
            r = r * self
        return r

    # predicates -----------------------------------------------------------
    def __bool__(self):
        return bool(self._t)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return not self._t
            return self._t == {(): Fraction(other)}
        if isinstance(other, ParamPoly):
            return self._t == other._t
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if self.is_constant():
                self._hash = hash(self.constant_value())
            else:
                self._hash = hash(frozenset(self._t.items()))
        return self._hash

    def is_constant(self) -> bool:
        return all(not m for m in self._t)

    def constant_value(self) -> Fraction:
        return self._t.get((), Fraction(0))

    def params(self) -> set:
        return {v for m in self._t for v, _ in m}

    def items(self):
        return self._t.items()

    def degree(self) -> int:
        return max((_mono_deg(m) for m in self._t), default=-1)

    def sorted_monos(self) -> List[Mono]:
        # graded lex on parameters; storage/display only
        return sorted(self._t, key=lambda m: (-_mono_deg(m), [(-0, v, -e) for v, e in m]))

    def subs(self, values: Dict[Param, object]):
        """Substitute parameters by numbers or ParamPolys.

        Returns a Fraction when the result has no parameters left and every
        substituted value was numeric, otherwise a ParamPoly.
        """
        acc = ParamPoly()
        for m, c in self._t.items():
            term = ParamPoly.const(c)
            for v, e in m:
                val = values.get(v)
                if val is None:
                    term = term * ParamPoly({((v, e),): Fraction(1)})
                else:
                    term = term * (ParamPoly._lift(val) ** e)
            acc = acc + term
        return acc

    def evaluate(self, values: Dict[Param, object]) -> Fraction:
        r = self.subs(values)
        if not r.is_constant():
            missing = sorted(param_name(p) for p in r.params())
            raise PolyError(f"unassigned parameters: {', '.join(missing)}")
        return r.constant_value()

    def primitive(self) -> "ParamPoly":
        """Content-free integer-coefficient associate with positive leading term."""
        if not self._t:
            return self
        from math import gcd

        den = 1
        for c in self._t.values():
            den = den * c.denominator // gcd(den, c.denominator)
        ints = {m: int(c * den) for m, c in self._t.items()}
        g = 0
        for v in ints.values():
            g = gcd(g, abs(v))
        lead = self.sorted_monos()[0]
        sgn = 1 if ints[lead] > 0 else -1
        return ParamPoly({m: Fraction(sgn * v, g) for m, v in ints.items()})

    def sort_key(self):
        return tuple((m, self._t[m]) for m in self.sorted_monos())

    def __repr__(self):
        return f"ParamPoly({self})"

    def __str__(self):
        if not self._t:
            return "0"
        out = []
        for i, m in enumerate(self.sorted_monos()):
            c = self._t[m]
            mono = "*".join(param_name(v) + (f"^{e}" if e > 1 else "") for v, e in m)
            neg = c < 0
            a = -c if neg else c
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            if i == 0:
                out.append(("-" if neg else "") + body)
            else:
                out.append((" - " if neg else " + ") + body)
        return "".join(out)


Coeff = Union[Fraction, ParamPoly]


def coeff_is_unit(c) -> bool:
    """Nonzero rational constant (invertible in every coefficient ring used here)."""
    if isinstance(c, ParamPoly):
        return bool(c) and c.is_constant()
    return c != 0


def coeff_to_fraction(c) -> Fraction:
    if isinstance(c, ParamPoly):
        if not c.is_constant():
            raise PolyError(f"coefficient {c} is not a constant")
        return c.constant_value()
    return Fraction(c)


# ---------------------------------------------------------------------------
# terms


class ModuleTerm(NamedTuple):
    """``x^exps * e_comp`` inside ``R^m(-d)``; ``shift`` is ``d_comp``."""

    exps: Tuple[int, ...]
    comp: int = 1
    shift: int = 0

    @property
    def degree(self) -> int:
        return sum(self.exps) + self.shift

    @property
    def tdeg(self) -> int:
        return sum(self.exps)

    def times(self, exps: Tuple[int, ...]) -> "ModuleTerm":
        return ModuleTerm(tuple(a + b for a, b in zip(self.exps, exps)), self.comp, self.shift)

    def times_var(self, i: int) -> "ModuleTerm":
        e = list(self.exps)
        e[i] += 1
        return ModuleTerm(tuple(e), self.comp, self.shift)

    def divides(self, other: "ModuleTerm") -> bool:
        return self.comp == other.comp and all(a <= b for a, b in zip(self.exps, other.exps))

    def quotient(self, other: "ModuleTerm") -> Tuple[int, ...]:
        """Exponent vector of ``self / other`` (caller checks divisibility)."""
        return tuple(a - b for a, b in zip(self.exps, other.exps))


def min_var(exps: Tuple[int, ...]) -> Optional[int]:
    for i, e in enumerate(exps):
        if e:
            return i
    return None


def max_var(exps: Tuple[int, ...]) -> Optional[int]:
    for i in range(len(exps) - 1, -1, -1):
        if exps[i]:
            return i
    return None


def unit_exps(nvars: int, i: Optional[int] = None) -> Tuple[int, ...]:
    e = [0] * nvars
    if i is not None:
        e[i] = 1
    return tuple(e)


def iteration_key(t: ModuleTerm):
    """Deterministic total order: component, degree, then reverse-lex (greater first)."""
    return (t.comp, t.degree) + t.exps


def display_key(exps: Tuple[int, ...]):
    """Descending sort key used to print polynomials and to number parameters.

    Degree, then an index-weighted degree where the last variable carries
    weight n+1, then reverse lexicographic. Purely presentational.
    """
    n = len(exps) - 1
    w = sum(i * e for i, e in enumerate(exps[:-1])) + (n + 1) * exps[-1]
    return (-sum(exps), -w) + exps


def terms_of_degree(nvars: int, s: int) -> List[Tuple[int, ...]]:
    """All exponent vectors of total degree ``s`` (display order, greatest first)."""
    if s < 0:
        return []
    out: List[Tuple[int, ...]] = []

    def rec(prefix, left, k):
        if k == nvars - 1:
            out.append(tuple(prefix + [left]))
            return
        for a in range(left, -1, -1):
            rec(prefix + [a], left - a, k + 1)

    if nvars == 0:
        return [()] if s == 0 else []
    rec([], s, 0)
    return sorted(out, key=display_key)


def terms_in_vars(nvars: int, s: int, top: int) -> List[Tuple[int, ...]]:
    """Degree-``s`` exponent vectors using only ``x_0..x_top``."""
    if top < 0:
        return [unit_exps(nvars)] if s == 0 else []
    sub = terms_of_degree(top + 1, s)
    pad = (0,) * (nvars - top - 1)
    return sorted((e + pad for e in sub), key=display_key)


# ---------------------------------------------------------------------------
# module elements


class Poly:
    """Element of a graded free module; a ring element when all comps are 1."""

    __slots__ = ("_t",)

    def __init__(self, terms: Optional[Dict[ModuleTerm, object]] = None):
        self._t: Dict[ModuleTerm, Coeff] = {}
        if terms:
            for k, c in terms.items():
                if isinstance(c, int):
                    c = Fraction(c)
                if c:
                    self._t[k] = c

    @classmethod
    def term(cls, t: ModuleTerm, c=1) -> "Poly":
        return cls({t: c})

    @classmethod
    def monomial(cls, exps: Tuple[int, ...], c=1) -> "Poly":
        return cls({ModuleTerm(tuple(exps)): c})

    @classmethod
    def constant(cls, nvars: int, c) -> "Poly":
        return cls({ModuleTerm(unit_exps(nvars)): c})

    # access ---------------------------------------------------------------
    def __iter__(self) -> Iterator[ModuleTerm]:
        return iter(sorted(self._t, key=iteration_key))

    def items(self):
        return [(t, self._t[t]) for t in self]

    def coeff(self, t: ModuleTerm):
        return self._t.get(t, Fraction(0))

    def support(self) -> set:
        return set(self._t)

    def __len__(self):
        return len(self._t)

    def __bool__(self):
        return bool(self._t)

    def __contains__(self, t):
        return t in self._t

    def is_homogeneous(self) -> bool:
        return len({t.degree for t in self._t}) <= 1

    def degree(self) -> Optional[int]:
        degs = {t.degree for t in self._t}
        if len(degs) > 1:
            raise PolyError("element is not homogeneous")
        return degs.pop() if degs else None

    def homogeneous_components(self) -> Dict[int, "Poly"]:
        out: Dict[int, Dict[ModuleTerm, Coeff]] = {}
        for t, c in self._t.items():
            out.setdefault(t.degree, {})[t] = c
        return {d: Poly(v) for d, v in sorted(out.items())}

    def components(self) -> Dict[int, "Poly"]:
        """Split into ring elements by component index."""
        out: Dict[int, Dict[ModuleTerm, Coeff]] = {}
        for t, c in self._t.items():
            out.setdefault(t.comp, {})[ModuleTerm(t.exps)] = c
        return {k: Poly(v) for k, v in out.items()}

    # arithmetic -----------------------------------------------------------
    def _raw(self, t):
        p = Poly()
        p._t = t
        return p

    def __add__(self, other: "Poly") -> "Poly":
        if not other._t:
            return self
        t = dict(self._t)
        for k, c in other._t.items():
            s = t.get(k)
            s = c if s is None else s + c
            if s:
                t[k] = s
            else:
                t.pop(k, None)
        return self._raw(t)

    def __neg__(self) -> "Poly":
        return self._raw({k: -c for k, c in self._t.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def scale(self, c) -> "Poly":
        if isinstance(c, int):
            c = Fraction(c)
        if not c:
            return Poly()
        t = {}
        for k, v in self._t.items():
            w = v * c
            if w:
                t[k] = w
        return self._raw(t)

    def shift_by(self, exps: Tuple[int, ...], c=None) -> "Poly":
        """Multiply by the monomial ``c * x^exps``."""
        t = {}
        for k, v in self._t.items():
            w = v if c is None else v * c
            if w:
                t[k.times(exps)] = w
        return self._raw(t)

    def __mul__(self, other):
        """Ring element times ring/module element, or times a coefficient."""
        if not isinstance(other, Poly):
            return self.scale(other)
        acc = Poly()
        for k, v in self._t.items():
            acc = acc + other.shift_by(k.exps, v)
        return acc

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self._t == other._t
        if isinstance(other, int) and other == 0:
            return not self._t
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._t.items()))

    def map_coeffs(self, fn) -> "Poly":
        return Poly({k: fn(v) for k, v in self._t.items()})

    def with_module(self, comp: int, shift: int = 0) -> "Poly":
        """Move a ring element into component ``comp`` with the given shift."""
        return self._raw({ModuleTerm(k.exps, comp, shift): v for k, v in self._t.items()})

    def subs_params(self, values: Dict[Param, object]) -> "Poly":
        def f(c):
            if isinstance(c, ParamPoly):
                r = c.subs(values)
                return r.constant_value() if r.is_constant() else r
            return c

        return self.map_coeffs(f)

    def x_coefficients(self) -> Dict[ModuleTerm, Coeff]:
        """Mapping term -> coefficient; reassembling gives back ``self``."""
        return {t: self._t[t] for t in self}

    def constant_part(self):
        """Coefficient of the degree-0 x-term of a ring element, or 0."""
        for k, v in self._t.items():
            if not any(k.exps):
                return v
        return Fraction(0)

    def __repr__(self):
        return f"Poly({format_poly(self)})"

    def __str__(self):
        return format_poly(self)


def canonicalize(p: Poly) -> Poly:
    """Drop zero coefficients and merge duplicates; idempotent."""
    t: Dict[ModuleTerm, Coeff] = {}
    for k, c in p._t.items():
        s = t.get(k)
        t[k] = c if s is None else s + c
    return Poly({k: v for k, v in t.items() if v})


def from_pairs(pairs: Iterable[Tuple[ModuleTerm, object]]) -> Poly:
    acc: Dict[ModuleTerm, Coeff] = {}
    for t, c in pairs:
        if isinstance(c, int):
            c = Fraction(c)
        s = acc.get(t)
        acc[t] = c if s is None else s + c
    return Poly({k: v for k, v in acc.items() if v})


def display_order(p: Poly) -> List[ModuleTerm]:
    return sorted(p.support(), key=lambda t: (t.comp, display_key(t.exps)))


# ---------------------------------------------------------------------------
# text formats


def format_exps(exps: Tuple[int, ...], sep: str = "*") -> str:
    parts = []
    for i in range(len(exps) - 1, -1, -1):
        e = exps[i]
        if e == 1:
            parts.append(f"x{i}")
        elif e > 1:
            parts.append(f"x{i}^{e}")
    return sep.join(parts)


def format_term(t: ModuleTerm, with_comp: bool = False) -> str:
    s = format_exps(t.exps) or "1"
    if with_comp:
        s = f"{s}*e{t.comp}" if s != "1" else f"e{t.comp}"
    return s


def _fmt_coeff_body(c) -> Tuple[bool, str, bool]:
    """(negative, body, is_one) for printing a coefficient."""
    if isinstance(c, ParamPoly):
        if c.is_constant():
            c = c.constant_value()
        else:
            monos = list(c.items())
            if len(monos) == 1 and monos[0][1] < 0:
                return True, str(-c), False
            s = str(c)
            return False, s if len(monos) == 1 else f"({s})", False
    c = Fraction(c)
    neg = c < 0
    a = -c if neg else c
    return neg, str(a), a == 1


def format_poly(p: Poly, with_comp: Optional[bool] = None) -> str:
    if not p:
        return "0"
    if with_comp is None:
        with_comp = any(t.comp != 1 for t in p.support())
    out = []
    for i, t in enumerate(display_order(p)):
        neg, body, one = _fmt_coeff_body(p.coeff(t))
        ts = format_term(t, with_comp)
        if ts == "1":
            piece = body
        elif one:
            piece = ts
        else:
            piece = f"{body}*{ts}"
        if i == 0:
            out.append(("-" if neg else "") + piece)
        else:
            out.append((" - " if neg else " + ") + piece)
    return "".join(out)


def format_marked(p: Poly, head: ModuleTerm, with_comp: bool = False) -> str:
    """Head in brackets first, then the rest of ``p``."""
    rest = p - Poly.term(head, p.coeff(head))
    hs = f"[{format_term(head, with_comp)}]"
    c = p.coeff(head)
    if c != 1:
        hs = f"{format_poly(Poly.term(head, c), with_comp)}"
    if not rest:
        return hs
    r = format_poly(rest, with_comp)
    return f"{hs} - {r[1:]}" if r.startswith("-") else f"{hs} + {r}"


def latex_exps(exps: Tuple[int, ...]) -> str:
    parts = []
    for i in range(len(exps) - 1, -1, -1):
        e = exps[i]
        if e == 1:
            parts.append(f"x_{{{i}}}")
        elif e > 1:
            parts.append(f"x_{{{i}}}^{{{e}}}")
    return "".join(parts)


def _latex_coeff(c) -> Tuple[bool, str, bool]:
    if isinstance(c, ParamPoly) and not c.is_constant():
        monos = list(c.items())
        if len(monos) == 1:
            m, v = monos[0]
            names = "".join(
                (fam if idx < 0 else f"{fam}_{{{idx}}}") + (f"^{{{e}}}" if e > 1 else "") for (fam, idx), e in m
            )
            if v == 1:
                return False, names, False
            if v == -1:
                return True, names, False
        return False, "(" + str(c) + ")", False
    c = coeff_to_fraction(c)
    neg = c < 0
    a = -c if neg else c
    body = str(a) if a.denominator == 1 else f"\\tfrac{{{a.numerator}}}{{{a.denominator}}}"
    return neg, body, a == 1


def latex_poly(p: Poly, head: Optional[ModuleTerm] = None) -> str:
    """Compact LaTeX rendering (head term first and wrapped in ``\\uwave``)."""
    if not p:
        return "0"
    order = display_order(p)
    if head is not None and head in p.support():
        order.remove(head)
        order.insert(0, head)
    out = []
    for i, t in enumerate(order):
        neg, body, one = _latex_coeff(p.coeff(t))
        ts = latex_exps(t.exps)
        if t == head:
            ts = f"\\uwave{{{ts}}}"
        if not ts:
            piece = body
        elif one:
            piece = ts
        else:
            piece = body + ts
        sign = "-" if neg else ("+" if i else "")
        out.append(sign + piece)
    return "".join(out)


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<var>x\d+)|(?P<basis>e\d+)|(?P<name>[A-Za-z][A-Za-z0-9_]*)|(?P<op>[-+*^()]))")


class ParseError(PolyError):
    def __init__(self, msg: str, text: str, pos: int):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"{msg} at line {line}, column {col}")
        self.line, self.col = line, col


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    return out


def parse_poly(text: str, nvars: int, shifts: Optional[List[int]] = None) -> Poly:
    """Parse ``-3/4*x1*x0^2 + a*x2*e2 - (C_1 + 1)*x0`` style input.

    Identifiers other than ``x<i>``/``e<k>`` are parameters; ``e<k>`` picks a
    component (default e1). Parenthesised groups are coefficient expressions.
    """
    toks = _tokenize(text)
    shifts = shifts or [0]
    i = 0

    def peek():
        return toks[i] if i < len(toks) else (None, None, len(text))

    def parse_coeff_expr():
        # inside parentheses: parameter polynomial
        nonlocal i
        acc = ParamPoly()
        sign = 1
        first = True
        while True:
            k, v, p = peek()
            if k == "op" and v in "+-":
                sign = -1 if v == "-" else 1
                i += 1
            elif not first:
                break
            acc = acc + parse_coeff_product() * sign
            sign = 1
            first = False
            k, v, p = peek()
            if not (k == "op" and v in "+-"):
                break
        return acc

    def parse_coeff_product():
        nonlocal i
        val = ParamPoly.const(1)
        while True:
            k, v, p = peek()
            if k == "num":
                val = val * Fraction(v)
                i += 1
            elif k == "name":
                val = val * ParamPoly.var(*parse_param(v))
                i += 1
            else:
                raise ParseError("expected coefficient", text, p)
            k, v, p = peek()
            if k == "op" and v == "^":
                i += 1
                k2, v2, p2 = peek()
                if k2 != "num" or "/" in v2:
                    raise ParseError("expected exponent", text, p2)
                # applies to the last factor only when it is a name; keep simple
                raise ParseError("exponents on coefficients are not supported", text, p)
            if k == "op" and v == "*":
                k2, _, _ = toks[i + 1] if i + 1 < len(toks) else (None, None, None)
                if k2 in ("num", "name"):
                    i += 1
                    continue
            return val

    terms: List[Tuple[ModuleTerm, object]] = []
    sign = 1
    expect_term = True
    while i < len(toks):
        k, v, p = peek()
        if k == "op" and v in "+-":
            if not expect_term and v in "+-":
                expect_term = True
            sign = sign * (-1 if v == "-" else 1)
            i += 1
            continue
        if not expect_term:
            raise ParseError(f"unexpected token {v!r}", text, p)
        coeff = ParamPoly.const(1)
        exps = [0] * nvars
        comp = 1
        seen_factor = False
        while True:
            k, v, p = peek()
            if k == "num":
                coeff = coeff * Fraction(v)
                i += 1
            elif k == "name":
                coeff = coeff * ParamPoly.var(*parse_param(v))
                i += 1
            elif k == "op" and v == "(":
                i += 1
                coeff = coeff * parse_coeff_expr()
                k2, v2, p2 = peek()
                if not (k2 == "op" and v2 == ")"):
                    raise ParseError("expected ')'", text, p2)
                i += 1
            elif k == "var":
                idx = int(v[1:])
                if idx >= nvars:
                    raise ParseError(f"unknown variable {v} (ring has x0..x{nvars - 1})", text, p)
                i += 1
                e = 1
                k2, v2, p2 = peek()
                if k2 == "op" and v2 == "^":
                    i += 1
                    k3, v3, p3 = peek()
                    if k3 != "num" or "/" in v3:
                        raise ParseError("expected integer exponent", text, p3)
                    e = int(v3)
                    i += 1
                exps[idx] += e
            elif k == "basis":
                comp = int(v[1:])
                if comp < 1 or comp > len(shifts):
                    raise ParseError(f"unknown basis vector {v}", text, p)
                i += 1
            else:
                raise ParseError("expected a term", text, p)
            seen_factor = True
            k, v, p = peek()
            if k == "op" and v == "*":
                i += 1
                continue
            if k == "op" and v == "^":
                raise ParseError("unexpected '^'", text, p)
            break
        if not seen_factor:
            raise ParseError("empty term", text, p)
        c = coeff.constant_value() if coeff.is_constant() else coeff
        terms.append((ModuleTerm(tuple(exps), comp, shifts[comp - 1]), c * sign))
        sign = 1
        expect_term = False
    if expect_term and terms:
        raise ParseError("dangling operator", text, len(text))
    return from_pairs(terms)


# ---------------------------------------------------------------------------
# matrices


class MatrixError(PolyError):
    pass


class PolyMatrix:
    """Matrix of ring elements for a graded map ``R(-cols) -> R(-rows)``."""

    def __init__(self, row_shifts: List[int], col_shifts: List[int],
                 entries: Optional[Dict[Tuple[int, int], Poly]] = None,
                 heads: Optional[List[Optional[Tuple[int, Tuple[int, ...]]]]] = None):
        self.row_shifts = list(row_shifts)
        self.col_shifts = list(col_shifts)
        self.entries: Dict[Tuple[int, int], Poly] = {}
        for (r, c), p in (entries or {}).items():
            if p:
                self.entries[(r, c)] = p
        self.heads = list(heads) if heads is not None else [None] * len(self.col_shifts)

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.row_shifts), len(self.col_shifts)

    def __getitem__(self, rc: Tuple[int, int]) -> Poly:
        return self.entries.get(rc, Poly())

    @classmethod
    def from_columns(cls, row_shifts: List[int], cols: List[Poly],
                     heads: Optional[List] = None) -> "PolyMatrix":
        """Columns are module elements over R^len(row_shifts) (components 1-based)."""
        col_shifts = []
        entries = {}
        for c, v in enumerate(cols):
            d = v.degree()
            col_shifts.append(d if d is not None else 0)
            for k, piece in v.components().items():
                entries[(k - 1, c)] = piece
        return cls(row_shifts, col_shifts, entries, heads)

    def column(self, c: int) -> Poly:
        acc = Poly()
        for r in range(self.shape[0]):
            acc = acc + self[(r, c)].with_module(r + 1, self.row_shifts[r])
        return acc

    def is_zero(self) -> bool:
        return not self.entries

    def check_homogeneous(self) -> bool:
        for (r, c), p in self.entries.items():
            want = self.col_shifts[c] - self.row_shifts[r]
            if any(t.tdeg != want for t in p.support()):
                return False
        return True

    def constant_entries(self) -> List[Tuple[int, int, object]]:
        out = []
        for (r, c) in sorted(self.entries, key=lambda rc: (rc[1], rc[0])):
            cp = self.entries[(r, c)].constant_part()
            if cp:
                out.append((r, c, cp))
        return out

    def map_entries(self, fn) -> "PolyMatrix":
        return PolyMatrix(self.row_shifts, self.col_shifts,
                          {rc: fn(p) for rc, p in self.entries.items()}, self.heads)

    def __eq__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return (self.row_shifts == other.row_shifts and self.col_shifts == other.col_shifts
                and self.entries == other.entries)

    def __repr__(self):
        return f"PolyMatrix({self.shape[0]}x{self.shape[1]})"


def identity_matrix(shifts: List[int], nvars: int) -> PolyMatrix:
    return PolyMatrix(shifts, shifts, {(i, i): Poly.constant(nvars, 1) for i in range(len(shifts))})


def matrix_multiply(a: PolyMatrix, b: PolyMatrix) -> PolyMatrix:
    if a.shape[1] != b.shape[0] or a.col_shifts != b.row_shifts:
        raise MatrixError(
            f"cannot multiply {a.shape} by {b.shape}: shifts {a.col_shifts} vs {b.row_shifts}")
    by_row: Dict[int, List[Tuple[int, Poly]]] = {}
    for (k, c), p in b.entries.items():
        by_row.setdefault(k, []).append((c, p))
    out: Dict[Tuple[int, int], Poly] = {}
    for (r, k), p in a.entries.items():
        for c, q in by_row.get(k, ()):
            out[(r, c)] = out.get((r, c), Poly()) + p * q
    return PolyMatrix(a.row_shifts, b.col_shifts, out, b.heads)
