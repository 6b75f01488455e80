#!/usr/bin/env python3
"""
ratfun.py - Exact multivariate rational functions over the Gaussian rationals.

Scalars of the engine live in a sympy PolyRing over QQ_I whose generators are
the Wirtinger variables z0..z{n-1}, zb0..zb{n-1} and a few auxiliary variables
(u stands for R² = Σ z_k zb_k). z and zb are independent commuting variables;
the reality constraint zb = conj(z) is only imposed by numeric evaluation.

Denominators are kept factored, as a canonical tuple of (monic factor, exponent)
pairs. Sums take the per-factor maximum exponent instead of multiplying
denominators, and a factor is cancelled whenever it divides the numerator
exactly. No multivariate GCD is ever computed: semantic equality is decided by
cross-multiplication.
"""

import logging
import operator
import os
import re
from functools import reduce

from dotenv import load_dotenv
from sympy.polys.domains import QQ, QQ_I
from sympy.polys.orderings import grlex
from sympy.polys.polyerrors import CoercionFailed
from sympy.polys.rings import PolyRing

from errors import DivisionByZero, ParseError, PoleAtPoint

load_dotenv()

logger = logging.getLogger(__name__)

# ── CONSTANTS ──────────────────────────────────────────────────────────────
POLE_TOLERANCE = float(os.getenv("GENRED_POLE_TOLERANCE", "1e-12"))
AUX_DEFAULT = ("u",)

ONE = QQ_I(1, 0)
ZERO = QQ_I(0, 0)
HALF = QQ_I(QQ(1, 2), 0)
I_UNIT = QQ_I(0, 1)


# ── Gaussian rationals ─────────────────────────────────────────────────────

def gq(re_part, im_part=0):
    """Build a Gaussian rational from ints, (p, q) tuples or QQ elements."""
    def conv(v):
        if isinstance(v, tuple):
            return QQ(*v)
        return QQ.convert(v)
    return QQ_I(conv(re_part), conv(im_part))


def gconj(c):
    return c.new(c.x, -c.y)


def to_complex(c):
    return complex(float(c.x), float(c.y))


def _rational_str(r):
    if r.denominator == 1:
        return str(r.numerator)
    return f"{r.numerator}/{r.denominator}"


def gaussian_str(c):
    """Canonical text of a Gaussian rational: "3/2", "-i", "3/2+1/2i"."""
    x, y = c.x, c.y
    if not y:
        return _rational_str(x)
    if y == 1:
        imag = "i"
    elif y == -1:
        imag = "-i"
    else:
        imag = _rational_str(y) + "i"
    if not x:
        return imag
    if imag.startswith("-"):
        return _rational_str(x) + imag
    return _rational_str(x) + "+" + imag


# ── Variable table ─────────────────────────────────────────────────────────

class VarTable:
    """
    Ordered variables of one chart.

    Complex charts hold z0..z{n-1}, zb0..zb{n-1} and the auxiliary variables.
    Real charts (real=True) hold only z0..z{n-1}, read as real coordinates,
    so conjugation fixes every variable.
    """

    __slots__ = ("n", "aux", "real", "names", "ring", "conj_perm")

    def __init__(self, n, aux=AUX_DEFAULT, real=False):
        self.n = int(n)
        self.aux = tuple(aux)
        self.real = bool(real)
        names = [f"z{i}" for i in range(self.n)]
        if not self.real:
            names += [f"zb{i}" for i in range(self.n)]
        names += list(self.aux)
        self.names = tuple(names)
        self.ring = PolyRing(self.names, QQ_I, grlex)
        perm = list(range(len(names)))
        if not self.real:
            for i in range(self.n):
                perm[i], perm[i + self.n] = i + self.n, i
        self.conj_perm = tuple(perm)

    def __eq__(self, other):
        if not isinstance(other, VarTable):
            return NotImplemented
        return (self.n, self.aux, self.real) == (other.n, other.aux, other.real)

    def __hash__(self):
        return hash((self.n, self.aux, self.real))

    def __repr__(self):
        kind = "real" if self.real else "complex"
        return f"VarTable(n={self.n}, aux={list(self.aux)}, {kind})"

    @property
    def nvars(self):
        return len(self.names)

    @property
    def coord_count(self):
        """Number of coordinate differentials, i.e. the top degree of the chart."""
        return self.n if self.real else 2 * self.n

    def index(self, var):
        if isinstance(var, int):
            if not 0 <= var < self.nvars:
                raise KeyError(f"variable index {var} outside {self!r}")
            return var
        try:
            return self.names.index(var)
        except ValueError:
            raise KeyError(f"unknown variable {var!r} for {self!r}") from None

    def holo(self, i):
        return i

    def antiholo(self, i):
        if self.real:
            raise KeyError("real charts carry no antiholomorphic variables")
        return self.n + i

    def is_aux(self, idx):
        return idx >= self.coord_count

    def aux_index(self, name):
        return self.coord_count + self.aux.index(name)


# ── Polynomial helpers ─────────────────────────────────────────────────────

def _prod(ring, polys):
    return reduce(operator.mul, polys, ring.one)


def _poly_conj(table, p):
    perm = table.conj_perm
    nv = table.nvars
    return table.ring.from_dict({
        tuple(m[perm[j]] for j in range(nv)): gconj(c) for m, c in p.iterterms()
    })


def _monomial_content(ring, p):
    """Largest monomial dividing p, as an exponent tuple."""
    content = None
    for m in p.itermonoms():
        content = m if content is None else tuple(min(a, b) for a, b in zip(content, m))
    return content


def _divide_monomial(ring, p, m):
    return ring.from_dict({tuple(a - b for a, b in zip(mm, m)): c for mm, c in p.iterterms()})


def _may_divide(p, f, nv):
    for i in range(nv):
        if f.degree(i) > p.degree(i):
            return False
    return True


def _factor_key(f):
    return (len(f), str(f))


def _poly_subst(ring, p, i, P, Q):
    """Return (p(x_i := P/Q)·Q^d, d) with d = deg_{x_i} p."""
    if not p:
        return p, 0
    d = p.degree(i)
    if d <= 0:
        return p, 0
    groups = {}
    for m, c in p.iterterms():
        groups.setdefault(m[i], {})[m[:i] + (0,) + m[i + 1:]] = c
    result = ring.zero
    for k, terms in groups.items():
        result += ring.from_dict(terms) * P ** k * Q ** (d - k)
    return result, d


def _eval_poly(p, values, convert):
    total = None
    for m, c in p.iterterms():
        t = convert(c)
        for v, k in zip(values, m):
            if k:
                t = t * v ** k
        total = t if total is None else total + t
    return convert(ZERO) if total is None else total


# ── Rational functions ─────────────────────────────────────────────────────

def _canonical(table, num, pairs):
    """Fold constants, split monomials, make factors monic, cancel, sort."""
    ring = table.ring
    if not num:
        return ring.zero, ()
    acc = {}
    for f, e in pairs:
        if not e:
            continue
        if f.is_ground:
            c = f.LC
            if not c:
                raise DivisionByZero("denominator factor is identically zero")
            num = num.quo_ground(c ** e)
            continue
        lc = f.LC
        if lc != ONE:
            f = f.quo_ground(lc)
            num = num.quo_ground(lc ** e)
        content = _monomial_content(ring, f)
        if any(content):
            f = _divide_monomial(ring, f, content)
            for i, k in enumerate(content):
                if k:
                    g = ring.gens[i]
                    acc[g] = acc.get(g, 0) + k * e
        if f.is_ground:
            continue
        acc[f] = acc.get(f, 0) + e
    return _cancel(table, num, acc)


def _cancel(table, num, acc):
    ring = table.ring
    nv = table.nvars
    if not num:
        return ring.zero, ()
    content = None
    out = {}
    for f, e in acc.items():
        if not e:
            continue
        if len(f) == 1:
            if content is None:
                content = list(_monomial_content(ring, num))
            i = next(j for j, k in enumerate(f.LM) if k)
            k = min(e, content[i])
            if k:
                m = tuple(k if j == i else 0 for j in range(nv))
                num = _divide_monomial(ring, num, m)
                content[i] -= k
                e -= k
        else:
            while e and _may_divide(num, f, nv):
                q, r = num.div(f)
                if r:
                    break
                num = q
                e -= 1
                content = None
        if e:
            out[f] = e
    den = tuple(sorted(out.items(), key=lambda fe: _factor_key(fe[0])))
    return num, den


class RatFun:
    """
    num / Π f^e with num a polynomial and the f monic, non-constant factors.

    Values are immutable; arithmetic returns new objects.
    """

    __slots__ = ("table", "num", "den")
    __hash__ = None

    def __init__(self, table, num, den=()):
        self.table = table
        self.num = num
        self.den = den

    # --- construction ---

    @classmethod
    def build(cls, table, num, pairs=()):
        num, den = _canonical(table, table.ring.ring_new(num), pairs)
        return cls(table, num, den)

    @classmethod
    def const(cls, table, c):
        return cls(table, table.ring.ground_new(QQ_I.convert(c)))

    @classmethod
    def zero(cls, table):
        return cls(table, table.ring.zero)

    @classmethod
    def one(cls, table):
        return cls(table, table.ring.one)

    @classmethod
    def var(cls, table, name):
        return cls(table, table.ring.gens[table.index(name)])

    @classmethod
    def parse(cls, table, text):
        return parse_scalar(table, text)

    # --- predicates ---

    def __bool__(self):
        return bool(self.num)

    def is_zero(self):
        return not self.num

    def is_polynomial(self):
        return not self.den

    def is_constant(self):
        return not self.den and self.num.is_ground

    def constant_value(self):
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.num.LC if self.num else ZERO

    def den_poly(self):
        ring = self.table.ring
        return _prod(ring, (f ** e for f, e in self.den))

    def depends_on(self, idx):
        if self.num and self.num.degree(idx) > 0:
            return True
        return any(f.degree(idx) > 0 for f, _ in self.den)

    # --- arithmetic ---

    def _coerce(self, other):
        if isinstance(other, RatFun):
            if other.table != self.table:
                raise ValueError(f"mixed variable tables {self.table!r} and {other.table!r}")
            return other
        return RatFun.const(self.table, other)

    def __neg__(self):
        return RatFun(self.table, -self.num, self.den)

    def __pos__(self):
        return self

    def __add__(self, other):
        other = self._coerce(other)
        if not other.num:
            return self
        if not self.num:
            return other
        if self.den == other.den:
            if not self.den:
                return RatFun(self.table, self.num + other.num)
            num, den = _cancel(self.table, self.num + other.num, dict(self.den))
            return RatFun(self.table, num, den)
        ring = self.table.ring
        da, db = dict(self.den), dict(other.den)
        lcm = {f: max(da.get(f, 0), db.get(f, 0)) for f in set(da) | set(db)}
        na = self.num * _prod(ring, (f ** (e - da.get(f, 0)) for f, e in lcm.items() if e > da.get(f, 0)))
        nb = other.num * _prod(ring, (f ** (e - db.get(f, 0)) for f, e in lcm.items() if e > db.get(f, 0)))
        num, den = _cancel(self.table, na + nb, lcm)
        return RatFun(self.table, num, den)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        if not self.num or not other.num:
            return RatFun.zero(self.table)
        if not self.den and not other.den:
            return RatFun(self.table, self.num * other.num)
        if other.is_constant():
            return RatFun(self.table, self.num.mul_ground(other.constant_value()), self.den)
        acc = dict(self.den)
        for f, e in other.den:
            acc[f] = acc.get(f, 0) + e
        num, den = _cancel(self.table, self.num * other.num, acc)
        return RatFun(self.table, num, den)

    __rmul__ = __mul__

    def scale(self, c):
        """Multiply by a Gaussian rational constant."""
        c = QQ_I.convert(c)
        if not c:
            return RatFun.zero(self.table)
        return RatFun(self.table, self.num.mul_ground(c), self.den)

    def inverse(self):
        if not self.num:
            raise DivisionByZero("inverse of the zero rational function")
        ring = self.table.ring
        num = _prod(ring, (f ** e for f, e in self.den))
        num, den = _canonical(self.table, num, [(self.num, 1)])
        return RatFun(self.table, num, den)

    def __truediv__(self, other):
        other = self._coerce(other)
        if not other.num:
            raise DivisionByZero(f"division of {self} by zero")
        if other.is_constant():
            return RatFun(self.table, self.num.quo_ground(other.constant_value()), self.den)
        ring = self.table.ring
        num = self.num * _prod(ring, (f ** e for f, e in other.den))
        num, den = _canonical(self.table, num, list(self.den) + [(other.num, 1)])
        return RatFun(self.table, num, den)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, k):
        if not isinstance(k, int):
            raise TypeError("only integer powers are supported")
        if k < 0:
            return self.inverse() ** (-k)
        if not self.den:
            return RatFun(self.table, self.num ** k)
        if k == 0:
            return RatFun.one(self.table)
        return RatFun(self.table, self.num ** k, tuple((f, e * k) for f, e in self.den))

    def __eq__(self, other):
        if not isinstance(other, RatFun):
            try:
                other = self._coerce(other)
            except (TypeError, ValueError, CoercionFailed):
                return NotImplemented
        if self.den == other.den:
            return self.num == other.num
        return not (self - other).num

    # --- calculus ---

    def diff(self, var):
        table = self.table
        ring = table.ring
        i = table.index(var)
        gen = ring.gens[i]
        dn = self.num.diff(gen)
        dep = [(f, e) for f, e in self.den if f.degree(i) > 0]
        if not dep:
            if not self.den:
                return RatFun(table, dn)
            num, den = _cancel(table, dn, dict(self.den))
            return RatFun(table, num, den)
        factors = [f for f, _ in dep]
        total = _prod(ring, factors)
        correction = ring.zero
        for k, (f, e) in enumerate(dep):
            others = _prod(ring, (g for j, g in enumerate(factors) if j != k))
            correction += f.diff(gen).mul_ground(QQ_I(e, 0)) * others
        acc = dict(self.den)
        for f, e in dep:
            acc[f] = e + 1
        num, den = _cancel(table, dn * total - self.num * correction, acc)
        return RatFun(table, num, den)

    def conj(self):
        num = _poly_conj(self.table, self.num)
        pairs = [(_poly_conj(self.table, f), e) for f, e in self.den]
        return RatFun.build(self.table, num, pairs)

    def subst(self, var, value):
        """Substitute var := value (a RatFun or a constant)."""
        table = self.table
        ring = table.ring
        i = table.index(var)
        value = self._coerce(value)
        if not self.depends_on(i):
            return self
        P = value.num
        Q = value.den_poly()
        num, dn = _poly_subst(ring, self.num, i, P, Q)
        pairs = []
        shift = -dn
        for f, e in self.den:
            g, df = _poly_subst(ring, f, i, P, Q)
            if not g:
                raise DivisionByZero(f"substituting {table.names[i]} collapses the denominator factor {f}")
            pairs.append((g, e))
            shift += e * df
        if shift > 0:
            num = num * Q ** shift
        elif shift < 0:
            pairs += [(g, k * (-shift)) for g, k in value.den]
        return RatFun.build(table, num, pairs)

    # --- evaluation ---

    def _point_values(self, z, convert, conjugate):
        table = self.table
        if len(z) != table.n:
            raise ValueError(f"expected {table.n} coordinates, got {len(z)}")
        values = list(z)
        if not table.real:
            values += [conjugate(v) for v in z]
        for name in table.aux:
            if name != "u":
                raise ValueError(f"no evaluation rule for auxiliary variable {name!r}")
            r2 = convert(ZERO)
            for v in z:
                r2 = r2 + v * conjugate(v)
            values.append(r2)
        return values

    def evaluate(self, z):
        """Complex float value at z, with zb := conj(z) and u := Σ|z|²."""
        values = self._point_values([complex(v) for v in z], to_complex, lambda v: v.conjugate())
        den = 1.0 + 0j
        for f, e in self.den:
            den *= _eval_poly(f, values, to_complex) ** e
        if abs(den) < POLE_TOLERANCE:
            raise PoleAtPoint(f"denominator of {self} vanishes at {tuple(z)}", payload=tuple(z))
        return _eval_poly(self.num, values, to_complex) / den

    def evaluate_exact(self, z):
        """Gaussian rational value at a Gaussian rational point."""
        z = [QQ_I.convert(v) for v in z]
        values = self._point_values(z, QQ_I.convert, gconj)
        den = ONE
        for f, e in self.den:
            den = den * _eval_poly(f, values, QQ_I.convert) ** e
        if not den:
            raise PoleAtPoint(f"denominator of {self} vanishes at the given point", payload=tuple(z))
        return _eval_poly(self.num, values, QQ_I.convert) / den

    # --- printing ---

    def __str__(self):
        num = poly_str(self.table, self.num)
        if not self.den:
            return num
        parts = []
        for f, e in self.den:
            s = f"({poly_str(self.table, f)})"
            parts.append(s if e == 1 else f"{s}^{e}")
        return f"({num})/({'*'.join(parts)})"

    def __repr__(self):
        return f"RatFun({self})"


# ── Operation entry points ─────────────────────────────────────────────────

_ARITH = {
    "add": operator.add,
    "sub": operator.sub,
    "mul": operator.mul,
    "div": operator.truediv,
}


def ratfun_arith(a, b, op):
    try:
        return _ARITH[op](a, b)
    except KeyError:
        raise ValueError(f"unknown arithmetic op {op!r}") from None


def ratfun_eq(a, b):
    return a == b


def ratfun_diff(a, var):
    return a.diff(var)


def ratfun_conj(a):
    return a.conj()


def ratfun_eval(a, z):
    return a.evaluate(z)


def ratfun_subst(a, var, value):
    return a.subst(var, value)


# ── Text grammar ───────────────────────────────────────────────────────────

def _monomial_str(table, m):
    parts = []
    for name, k in zip(table.names, m):
        if k == 1:
            parts.append(name)
        elif k:
            parts.append(f"{name}^{k}")
    return "*".join(parts)


def poly_str(table, p):
    if not p:
        return "0"
    out = ""
    for m, c in p.terms():
        mono = _monomial_str(table, m)
        if c == ONE:
            term = mono or "1"
        elif c == -ONE:
            term = "-" + (mono or "1")
        else:
            cs = gaussian_str(c)
            if c.x and c.y:
                cs = f"({cs})"
            term = f"{cs}*{mono}" if mono else cs
        if out and not term.startswith("-"):
            out += "+"
        out += term
    return out


_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+(?:/\d+)?i?|i)(?![A-Za-z0-9_]))"
    r"|(?P<name>[A-Za-z_]\w*)"
    r"|(?P<op>[-+*/^()]))"
)
# after "^" only an unsigned integer, so "z0^2/4" is (z0^2)/4
_EXPONENT = re.compile(r"\s*(?P<exp>\d+)(?![A-Za-z0-9_])")


def _tokenize(text):
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        after_caret = tokens and tokens[-1][1] == "^"
        m = (after_caret and _EXPONENT.match(text, pos)) or _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at position {pos} in {text!r}")
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    return tokens


def _literal(text):
    imaginary = text.endswith("i")
    body = text[:-1] if imaginary else text
    if not body:
        value = QQ(1)
    elif "/" in body:
        p, q = body.split("/")
        if int(q) == 0:
            raise ParseError(f"zero denominator in literal {text!r}")
        value = QQ(int(p), int(q))
    else:
        value = QQ(int(body))
    return QQ_I(0, value) if imaginary else QQ_I(value, 0)


class _ScalarParser:
    """Recursive descent over + − * / ^ with parentheses.

    Nodes are (RatFun, factors) where factors lists (poly, exponent) pairs
    whenever the value is known to be a product of polynomial powers; dividing
    by such a node keeps the factorization of the denominator.
    """

    def __init__(self, table, text):
        self.table = table
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None, len(self.text))

    def take(self, value=None):
        tok = self.peek()
        if tok[0] is None or (value is not None and tok[1] != value):
            expected = repr(value) if value else "a token"
            raise ParseError(f"expected {expected} at position {tok[2]} in {self.text!r}")
        self.pos += 1
        return tok

    def parse(self):
        node = self.expr()
        if self.pos != len(self.tokens):
            raise ParseError(f"trailing input at position {self.peek()[2]} in {self.text!r}")
        return node[0]

    @staticmethod
    def _poly_node(value):
        return (value, [(value.num, 1)] if value.is_polynomial() else None)

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            value = node[0] + rhs[0] if op == "+" else node[0] - rhs[0]
            node = self._poly_node(value)
        return node

    def term(self):
        node = self.unary()
        while self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            rhs = self.unary()
            if op == "*":
                value = node[0] * rhs[0]
                if node[1] is not None and rhs[1] is not None:
                    node = (value, node[1] + rhs[1])
                else:
                    node = self._poly_node(value)
            else:
                if not rhs[0]:
                    raise ParseError(f"division by zero in {self.text!r}")
                if rhs[1] is not None:
                    value = RatFun.build(self.table, node[0].num, list(node[0].den) + rhs[1])
                else:
                    value = node[0] / rhs[0]
                node = self._poly_node(value)
        return node

    def unary(self):
        tok = self.peek()
        if tok[1] == "-":
            self.take()
            value, factors = self.unary()
            minus = self.table.ring.ground_new(-ONE)
            return (-value, None if factors is None else [(minus, 1)] + factors)
        if tok[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        node = self.atom()
        if self.peek()[1] == "^":
            self.take()
            kind, text, pos = self.take()
            if kind != "exp":
                raise ParseError(f"exponent must be a nonnegative integer at position {pos} in {self.text!r}")
            k = int(text)
            value = node[0] ** k
            factors = None if node[1] is None else [(f, e * k) for f, e in node[1]]
            node = (value, factors)
        return node

    def atom(self):
        kind, text, pos = self.take()
        if kind == "num":
            value = RatFun.const(self.table, _literal(text))
            return self._poly_node(value)
        if kind == "name":
            try:
                value = RatFun.var(self.table, text)
            except KeyError as e:
                raise ParseError(f"unknown variable {text!r} at position {pos}") from e
            return self._poly_node(value)
        if text == "(":
            node = self.expr()
            self.take(")")
            return node
        raise ParseError(f"unexpected {text!r} at position {pos} in {self.text!r}")


def parse_scalar(table, text):
    if not isinstance(text, str) or not text.strip():
        raise ParseError(f"empty scalar expression {text!r}")
    try:
        return _ScalarParser(table, text).parse()
    except DivisionByZero as e:
        raise ParseError(f"division by zero in {text!r}") from e


# ── Cube roots of unity ────────────────────────────────────────────────────

def _cube_root_ring():
    return PolyRing(("z0", "z1", "z2", "lam"), QQ_I, grlex)


def reduce_mod_lambda(p):
    """Normal form modulo λ²+λ+1 in a ring whose last generator is λ."""
    lam = p.ring.gens[-1]
    return p.rem(lam ** 2 + lam + 1)


def cube_root_factorization_check():
    """The triangle cubic splits into the three lines z0 + λ^k z1 + λ^{2k} z2."""
    ring = _cube_root_ring()
    z0, z1, z2, lam = ring.gens
    product = (z0 + z1 + z2) * (z0 + lam * z1 + lam ** 2 * z2) * (z0 + lam ** 2 * z1 + lam * z2)
    cubic = z0 ** 3 + z1 ** 3 + z2 ** 3 - 3 * z0 * z1 * z2
    ok = reduce_mod_lambda(product - cubic) == 0
    logger.debug("cube-root factorization of the triangle cubic: %s", ok)
    return ok


def lambda_point_on_cubic():
    """(z1, z2) = (λ, λ²) lies on 1 + z1³ + z2³ − 3 z1 z2, and λ³ = 1."""
    ring = _cube_root_ring()
    lam = ring.gens[-1]
    value = 1 + lam ** 3 + lam ** 6 - 3 * lam * lam ** 2
    return reduce_mod_lambda(value) == 0 and reduce_mod_lambda(lam ** 3 - 1) == 0
