"""Exact Laurent polynomial arithmetic and 2x2 matrices over it.

Variables are (kind, label) pairs. Four kinds are used throughout the
package:

    "x"  cluster variables attached to arcs,
    "y"  coefficient variables attached to tagged arcs,
    "Y"  per-tile coefficient variables attached to ideal arcs,
    "b"  boundary segment variables.

Exponents are stored doubled, as integers, so that half-integer powers
coming from reduced matrix products remain exact. A stored exponent of 2
prints as power 1, a stored exponent of 1 prints as ^(1/2), and so on.
"""

from __future__ import annotations

import functools
import re

KINDS = ("x", "y", "Y", "b")
_KIND_ORDER = {k: i for i, k in enumerate(KINDS)}


class AlgebraError(ValueError):
    pass


class SubstituteNonMonomial(AlgebraError):
    """Raised when a substitution value is neither 1 nor a pure monomial."""


class ZeroPolynomial(AlgebraError):
    """Raised when an operation needs a nonzero polynomial."""


class NotUnimodular(AlgebraError):
    """Raised when inverting a matrix whose determinant is not 1."""


class PolyParseError(AlgebraError):
    """Raised on malformed canonical polynomial text."""


def var(kind, label):
    """Build a variable id, checking the kind."""
    if kind not in _KIND_ORDER:
        raise AlgebraError("unknown variable kind %r" % (kind,))
    return (kind, str(label))


def _var_key(v):
    return (_KIND_ORDER[v[0]], v[1])


class Mono:
    """A Laurent monomial: a finite map from variables to doubled exponents.

    Instances are immutable and hashable. Zero exponents are never stored.
    """

    __slots__ = ("_items", "_hash")

    def __init__(self, items=()):
        d = {}
        for v, e in dict(items).items():
            if v[0] not in _KIND_ORDER:
                raise AlgebraError("unknown variable kind %r" % (v[0],))
            e = int(e)
            if e:
                d[v] = e
        self._items = tuple(sorted(d.items(), key=lambda it: _var_key(it[0])))
        self._hash = hash(self._items)

    @classmethod
    def unit(cls):
        return cls()

    @classmethod
    def of(cls, kind, label, exp2=2):
        return cls({var(kind, label): exp2})

    def items(self):
        return self._items

    def exponent2(self, v):
        for w, e in self._items:
            if w == v:
                return e
        return 0

    def variables(self):
        return tuple(v for v, _ in self._items)

    def degree2(self):
        return sum(e for _, e in self._items)

    def is_unit(self):
        return not self._items

    def mul(self, other):
        d = dict(self._items)
        for v, e in other._items:
            d[v] = d.get(v, 0) + e
        return Mono(d)

    def inverse(self):
        return Mono({v: -e for v, e in self._items})

    def power2(self, exp2):
        """Raise to the power exp2/2. Requires the result to be integral."""
        d = {}
        for v, e in self._items:
            num = e * exp2
            if num % 2:
                raise SubstituteNonMonomial(
                    "power %s/2 of %s is not an exact Laurent monomial"
                    % (exp2, format_mono(self)))
            d[v] = num // 2
        return Mono(d)

    def __eq__(self, other):
        return isinstance(other, Mono) and self._items == other._items

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return "Mono(%s)" % format_mono(self)


def _mono_cmp(a, b):
    """Graded lexicographic comparison; the greater monomial sorts first."""
    da, db = a.degree2(), b.degree2()
    if da != db:
        return -1 if da > db else 1
    ia, ib = a.items(), b.items()
    i = j = 0
    while i < len(ia) or j < len(ib):
        va = _var_key(ia[i][0]) if i < len(ia) else None
        vb = _var_key(ib[j][0]) if j < len(ib) else None
        if vb is None or (va is not None and va < vb):
            ea, eb = ia[i][1], 0
            i += 1
        elif va is None or vb < va:
            ea, eb = 0, ib[j][1]
            j += 1
        else:
            ea, eb = ia[i][1], ib[j][1]
            i += 1
            j += 1
        if ea != eb:
            return -1 if ea > eb else 1
    return 0


_MONO_SORT_KEY = functools.cmp_to_key(_mono_cmp)


class Poly:
    """A Laurent polynomial: monomials with nonzero integer coefficients.

    The representation is canonical: equal polynomials compare equal and
    render to identical text.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms=()):
        d = {}
        for m, c in dict(terms).items():
            if not isinstance(m, Mono):
                raise AlgebraError("polynomial keys must be Mono instances")
            c = int(c)
            if c:
                d[m] = c
        self._terms = d
        self._hash = None

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def const(cls, c):
        return cls({Mono.unit(): c})

    @classmethod
    def one(cls):
        return cls.const(1)

    @classmethod
    def from_mono(cls, m, coeff=1):
        return cls({m: coeff})

    @classmethod
    def of_var(cls, kind, label, exp2=2):
        return cls.from_mono(Mono.of(kind, label, exp2))

    def terms(self):
        """Terms in canonical (graded lexicographic) order."""
        return [(m, self._terms[m]) for m in
                sorted(self._terms, key=_MONO_SORT_KEY)]

    def coefficient(self, m):
        return self._terms.get(m, 0)

    def variables(self):
        vs = set()
        for m in self._terms:
            vs.update(m.variables())
        return sorted(vs, key=_var_key)

    def is_zero(self):
        return not self._terms

    def is_one(self):
        return self._terms == {Mono.unit(): 1}

    def is_monomial(self):
        return len(self._terms) == 1

    def as_mono(self):
        """The single monomial of a one-term polynomial with coefficient 1."""
        if len(self._terms) != 1:
            raise SubstituteNonMonomial(
                "expected a monomial, got %s" % format_poly(self))
        (m, c), = self._terms.items()
        if c != 1:
            raise SubstituteNonMonomial(
                "expected coefficient 1, got %s" % format_poly(self))
        return m

    def __add__(self, other):
        other = _coerce(other)
        d = dict(self._terms)
        for m, c in other._terms.items():
            d[m] = d.get(m, 0) + c
        return Poly(d)

    __radd__ = __add__

    def __neg__(self):
        return Poly({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, Mono):
            other = Poly.from_mono(other)
        other = _coerce(other)
        d = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = m1.mul(m2)
                d[m] = d.get(m, 0) + c1 * c2
        return Poly(d)

    __rmul__ = __mul__

    def div_mono(self, m):
        """Divide by a monomial (always exact for Laurent polynomials)."""
        return self * m.inverse()

    def __eq__(self, other):
        if isinstance(other, int):
            other = Poly.const(other)
        return isinstance(other, Poly) and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self):
        return "Poly(%s)" % format_poly(self)

    def coefficient_signs(self):
        """The set of signs (+1/-1) occurring among the coefficients."""
        return {1 if c > 0 else -1 for c in self._terms.values()}

    def substitute(self, mapping):
        """Replace variables by monomial values.

        Each value must be 1 or a pure monomial (a one-term polynomial with
        coefficient 1, or a Mono). Anything else raises
        SubstituteNonMonomial. Substituting a non-square monomial into a
        half-integer power raises as well, since the result would leave the
        Laurent ring.
        """
        vals = {}
        for v, val in mapping.items():
            if isinstance(val, Mono):
                vals[v] = val
            elif isinstance(val, Poly):
                vals[v] = val.as_mono()
            elif val == 1:
                vals[v] = Mono.unit()
            else:
                raise SubstituteNonMonomial(
                    "substitution value for %s:%s must be 1 or a monomial"
                    % v)
        out = {}
        for m, c in self._terms.items():
            acc = Mono.unit()
            for v, e in m.items():
                if v in vals:
                    acc = acc.mul(vals[v].power2(e))
                else:
                    acc = acc.mul(Mono({v: e}))
            out[acc] = out.get(acc, 0) + c
        return Poly(out)

    def tropical_eval(self, variables=None):
        """Evaluate in the tropical semifield on the given variables.

        The result is the monomial whose exponent in each variable is the
        minimum exponent over all terms (a term not containing the variable
        counts as exponent 0). Variables outside the given set are ignored.
        Raises ZeroPolynomial on the zero polynomial.
        """
        if self.is_zero():
            raise ZeroPolynomial("tropical evaluation of the zero polynomial")
        if variables is None:
            variables = self.variables()
        variables = [v for v in variables]
        out = {}
        for v in variables:
            lo = min(m.exponent2(v) for m in self._terms)
            if lo:
                out[v] = lo
        return Mono(out)


def _coerce(p):
    if isinstance(p, Poly):
        return p
    if isinstance(p, int):
        return Poly.const(p)
    raise AlgebraError("cannot coerce %r to a polynomial" % (p,))


# ---------------------------------------------------------------------------
# canonical text form


def format_var(v):
    return "%s:%s" % v


def _format_factor(v, e):
    body = format_var(v)
    if e == 2:
        return body
    if e % 2 == 0:
        return "%s^%d" % (body, e // 2)
    return "%s^(%d/2)" % (body, e)


def format_mono(m):
    if m.is_unit():
        return "1"
    return "*".join(_format_factor(v, e) for v, e in m.items())


def format_poly(p):
    """Render in canonical text form.

    Terms appear in graded lexicographic order, joined by " + " or " - ";
    a leading negative term gets a bare "-" prefix.
    """
    terms = p.terms()
    if not terms:
        return "0"
    chunks = []
    for i, (m, c) in enumerate(terms):
        mag = abs(c)
        if m.is_unit():
            body = str(mag)
        elif mag == 1:
            body = format_mono(m)
        else:
            body = "%d*%s" % (mag, format_mono(m))
        if i == 0:
            chunks.append(("-" if c < 0 else "") + body)
        else:
            chunks.append((" - " if c < 0 else " + ") + body)
    return "".join(chunks)


_POWER_RE = re.compile(r"^(-?\d+)$|^\((-?\d+)/2\)$")


def _parse_factor(text):
    text = text.strip()
    if not text:
        raise PolyParseError("empty factor")
    if re.fullmatch(r"-?\d+", text):
        return int(text), Mono.unit()
    if "^" in text:
        base, _, pw = text.partition("^")
        m = _POWER_RE.match(pw.strip())
        if not m:
            raise PolyParseError("bad exponent %r" % pw)
        exp2 = int(m.group(1)) * 2 if m.group(1) is not None else int(m.group(2))
    else:
        base, exp2 = text, 2
    if ":" not in base:
        raise PolyParseError("bad variable %r" % base)
    kind, _, label = base.partition(":")
    if kind not in _KIND_ORDER or not label:
        raise PolyParseError("bad variable %r" % base)
    return 1, Mono({(kind, label): exp2})


def parse_poly(text):
    """Parse canonical text form back into a polynomial.

    Inverse of format_poly on canonical output; also tolerant of extra
    surrounding whitespace.
    """
    text = text.strip()
    if not text:
        raise PolyParseError("empty polynomial text")
    if text == "0":
        return Poly.zero()
    # Split into signed terms. Separators are " + " and " - "; a label may
    # itself contain "-" but never a space-padded one.
    pieces = re.split(r" ([+-]) ", text)
    signs = [1]
    terms = [pieces[0]]
    for i in range(1, len(pieces), 2):
        signs.append(1 if pieces[i] == "+" else -1)
        terms.append(pieces[i + 1])
    out = Poly.zero()
    for sign, term in zip(signs, terms):
        term = term.strip()
        if term.startswith("-"):
            sign = -sign
            term = term[1:]
        coeff = sign
        mono = Mono.unit()
        for factor in term.split("*"):
            c, m = _parse_factor(factor)
            coeff *= c
            mono = mono.mul(m)
        out = out + Poly.from_mono(mono, coeff)
    return out


# ---------------------------------------------------------------------------
# 2x2 matrices


class Mat2:
    """A 2x2 matrix with Laurent polynomial entries."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        self.a = _coerce(a)
        self.b = _coerce(b)
        self.c = _coerce(c)
        self.d = _coerce(d)

    @classmethod
    def identity(cls):
        return cls(1, 0, 0, 1)

    def __mul__(self, other):
        return Mat2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def __eq__(self, other):
        return (isinstance(other, Mat2) and self.a == other.a
                and self.b == other.b and self.c == other.c
                and self.d == other.d)

    def __neg__(self):
        return Mat2(-self.a, -self.b, -self.c, -self.d)

    def __repr__(self):
        return "Mat2([[%s, %s], [%s, %s]])" % (
            format_poly(self.a), format_poly(self.b),
            format_poly(self.c), format_poly(self.d))

    def det(self):
        return self.a * self.d - self.b * self.c

    def trace(self):
        return self.a + self.d

    def upper_right(self):
        return self.b

    def inverse_unimodular(self):
        """Invert, requiring determinant exactly 1."""
        if self.det() != Poly.one():
            raise NotUnimodular(
                "matrix determinant is %s, not 1" % format_poly(self.det()))
        return Mat2(self.d, -self.b, -self.c, self.a)

    def map_entries(self, fn):
        return Mat2(fn(self.a), fn(self.b), fn(self.c), fn(self.d))
