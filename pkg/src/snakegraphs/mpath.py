"""Matrix paths: step sequences whose 2x2 products expand curves.

Each step carries one of three elementary matrices over the Laurent
ring. A shear is unit lower triangular, a twist is diagonal in the
per-tile coefficient variable, and a pivot is antidiagonal. The product
of a curve's standard step sequence recovers the curve's expansion:
through the upper right entry for arcs, through the trace for loops.

Steps are listed in traversal order; the product multiplies later steps
on the left.
"""

from __future__ import annotations

from typing import NamedTuple

from .algebra import Mat2, Mono, Poly
from .surface import (
    CCW,
    CW,
    ValidationError,
    arc_layout,
    boundary_substitution,
    loop_layout,
    noose_substitution,
    phi_substitution,
)


class MPathError(ValueError):
    pass


class MixedSigns(MPathError):
    """A matrix entry whose coefficients do not share a sign."""


class StepFormatError(MPathError):
    pass


class Step(NamedTuple):
    """One elementary step.

    kind 1 (shear): tau, tau_prime, sigma set, mode is "cw" or "ccw".
    kind 2 (twist): only tau set, mode is "cw" or "ccw".
    kind 3 (pivot): only tau set, mode is +1 or -1.
    """

    kind: int
    tau: tuple
    tau_prime: tuple
    sigma: tuple
    mode: object


def shear(tau, tau_prime, sigma, direction):
    if direction not in (CW, CCW):
        raise StepFormatError("bad shear direction %r" % (direction,))
    return Step(1, tau, tau_prime, sigma, direction)


def twist(tau, direction):
    if direction not in (CW, CCW):
        raise StepFormatError("bad twist direction %r" % (direction,))
    return Step(2, tau, None, None, direction)


def pivot(tau, sign):
    if sign not in (1, -1):
        raise StepFormatError("bad pivot sign %r" % (sign,))
    return Step(3, tau, None, None, sign)


def _xp(v, exp2=2):
    return Poly.from_mono(Mono({v: exp2}))


def _coeff(v):
    return ("Y", v[1])


def step_matrix(step, reduced=False):
    """The 2x2 matrix of one step.

    With ``reduced`` set, twists split their coefficient variable into
    two half powers so that direction reversal inverts the matrix.
    """
    if step.kind == 1:
        s = _xp(step.sigma).div_mono(
            Mono({step.tau: 2}).mul(Mono({step.tau_prime: 2})))
        if step.mode == CCW:
            s = -s
        return Mat2(Poly.one(), Poly.zero(), s, Poly.one())
    if step.kind == 2:
        y = _coeff(step.tau)
        if reduced:
            lo, hi = Mono({y: -1}), Mono({y: 1})
        else:
            lo, hi = Mono.unit(), Mono({y: 2})
        if step.mode == CCW:
            lo, hi = hi, lo
        return Mat2(Poly.from_mono(lo), Poly.zero(),
                    Poly.zero(), Poly.from_mono(hi))
    if step.kind == 3:
        x = _xp(step.tau)
        xinv = _xp(step.tau, -2)
        if step.mode == 1:
            return Mat2(Poly.zero(), x, -xinv, Poly.zero())
        return Mat2(Poly.zero(), -x, xinv, Poly.zero())
    raise StepFormatError("unknown step kind %r" % (step.kind,))


def path_matrix(steps, reduced=False):
    m = Mat2.identity()
    for s in steps:
        m = step_matrix(s, reduced) * m
    return m


def invert_steps(steps):
    """Reverse the sequence and invert each step.

    Exact for shears and pivots; for twists the direction flip inverts
    the reduced matrix (the unreduced matrices differ by a monomial
    factor, which the absolute-value readings absorb).
    """
    flipped = []
    for s in reversed(steps):
        if s.kind == 1:
            flipped.append(shear(s.tau, s.tau_prime, s.sigma,
                                 CW if s.mode == CCW else CCW))
        elif s.kind == 2:
            flipped.append(twist(s.tau, CW if s.mode == CCW else CCW))
        else:
            flipped.append(pivot(s.tau, -s.mode))
    return flipped


def abs_poly(p):
    """The polynomial up to a global sign; all coefficients must agree."""
    signs = p.coefficient_signs()
    if signs == {1, -1}:
        raise MixedSigns("entry has coefficients of both signs")
    return -p if signs == {-1} else p


class MPath:
    """A step sequence together with its reading convention."""

    def __init__(self, steps, closed=False):
        self.steps = list(steps)
        self.closed = closed

    def matrix(self, reduced=False):
        return path_matrix(self.steps, reduced)

    def value(self, reduced=False):
        m = self.matrix(reduced)
        return abs_poly(m.trace() if self.closed else m.upper_right())


# -- standard sequences ----------------------------------------------------


def _transition_steps(v, diag, turns, glues):
    steps = []
    for j, turn in enumerate(turns):
        g = v(glues[j])
        t0, t1 = diag[j], diag[j + 1]
        steps.append(twist(t0, CW))
        if turn == CCW:
            steps.append(shear(t0, t1, g, CW))
        else:
            steps.append(shear(g, t0, t1, CW))
            steps.append(pivot(g, 1))
            steps.append(shear(g, t1, t0, CW))
    return steps


def standard_arc_path(tri, curve):
    lay = arc_layout(tri, curve)
    v = tri.variable
    diag = [v(c) for c in lay.diagonals]
    a, b = v(lay.corner_a), v(lay.corner_b)
    w, z = v(lay.corner_w), v(lay.corner_z)
    steps = [pivot(a, 1), shear(a, diag[0], b, CW)]
    steps += _transition_steps(v, diag, lay.turns, lay.glues)
    steps += [twist(diag[-1], CW), shear(diag[-1], z, w, CW), pivot(z, 1)]
    return MPath(steps, closed=False)


def standard_loop_path(tri, curve):
    lay = loop_layout(tri, curve)
    v = tri.variable
    diag = [v(c) for c in lay.diagonals]
    cut = v(lay.cut)
    steps = _transition_steps(v, diag, lay.turns, lay.glues)
    steps += [twist(diag[-1], CW), shear(cut, diag[-1], diag[0], CW),
              pivot(cut, 1), shear(cut, diag[0], diag[-1], CW)]
    return MPath(steps, closed=True)


def path_for_curve(tri, curve):
    if curve.kind == "arc":
        return standard_arc_path(tri, curve)
    if curve.kind == "loop":
        return standard_loop_path(tri, curve)
    raise ValidationError(
        "standard paths exist only for arcs and loops, not %r"
        % (curve.kind,))


# -- specializations -------------------------------------------------------


def chi_hat(path):
    return path.value(reduced=False)


def chi_bar(path):
    return path.value(reduced=True)


def chi(tri, path, keep_boundary=False):
    """The curve expansion: the unreduced reading pushed through the
    tagged-arc coefficient map and the noose rewriting."""
    p = chi_hat(path)
    p = p.substitute(phi_substitution(tri))
    p = p.substitute(noose_substitution(tri))
    if not keep_boundary:
        p = p.substitute(boundary_substitution(tri))
    return p


def a_coordinates(tri, path, keep_boundary=False):
    """Coefficient-free expansion: every y variable set to one."""
    p = chi(tri, path, keep_boundary)
    return p.substitute({v: 1 for v in p.variables() if v[0] == "y"})


def x_coordinates(path):
    """Reduced reading with every side variable set to one; what is left
    lives in half powers of the tile coefficients."""
    p = chi_bar(path)
    return p.substitute({v: 1 for v in p.variables() if v[0] in ("x", "b")})


# -- local adjustments -----------------------------------------------------


def reroute_shear(steps, index):
    """Replace the shear at ``index`` by the five-step detour around the
    other side of its triangle. The product picks up a global sign, so
    absolute readings are unchanged."""
    s = steps[index]
    if s.kind != 1:
        raise MPathError("step %d is not a shear" % index)
    if s.mode == CW:
        sg, d = -1, CCW
    else:
        sg, d = 1, CW
    block = [
        pivot(s.tau, sg),
        shear(s.tau, s.sigma, s.tau_prime, d),
        pivot(s.sigma, sg),
        shear(s.sigma, s.tau_prime, s.tau, d),
        pivot(s.tau_prime, sg),
    ]
    return steps[:index] + block + steps[index + 1:]


def insert_backtrack(steps, index, tau):
    """Insert a pivot immediately undone by its inverse."""
    return steps[:index] + [pivot(tau, 1), pivot(tau, -1)] + steps[index:]


def swap_twist_pivot(steps, index):
    """Exchange an adjacent twist and pivot, reversing the twist; the
    product is unchanged because antidiagonal factors conjugate the two
    diagonal forms into each other."""
    a, b = steps[index], steps[index + 1]
    if a.kind == 2 and b.kind == 3:
        pair = [b, twist(a.tau, CW if a.mode == CCW else CCW)]
    elif a.kind == 3 and b.kind == 2:
        pair = [twist(b.tau, CW if b.mode == CCW else CCW), a]
    else:
        raise MPathError("steps %d, %d are not a twist and pivot pair"
                         % (index, index + 1))
    return steps[:index] + pair + steps[index + 2:]


def prepend_shear(steps, tau, tau_prime, sigma, direction=CW):
    """Start an open path with an extra shear; the upper right entry of
    the product never sees it."""
    return [shear(tau, tau_prime, sigma, direction)] + steps


def rotate_loop(steps, k):
    """Cyclically rotate a closed path's steps; the trace is unchanged."""
    k %= len(steps)
    return steps[k:] + steps[:k]


# -- text form -------------------------------------------------------------


def _fmt_var(v):
    return "%s:%s" % v


def _parse_var(text):
    kind, sep, label = text.partition(":")
    if not sep or not label or kind not in ("x", "b", "y", "Y"):
        raise StepFormatError("bad variable %r" % (text,))
    return (kind, label)


def format_steps(steps):
    lines = []
    for s in steps:
        if s.kind == 1:
            lines.append("1 %s %s %s %s" % (
                s.mode, _fmt_var(s.tau), _fmt_var(s.tau_prime),
                _fmt_var(s.sigma)))
        elif s.kind == 2:
            lines.append("2 %s %s" % (s.mode, _fmt_var(s.tau)))
        else:
            lines.append("3 %s %s" % ("+" if s.mode == 1 else "-",
                                      _fmt_var(s.tau)))
    return "\n".join(lines)


def parse_steps(text):
    steps = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "1" and len(parts) == 5:
                steps.append(shear(_parse_var(parts[2]),
                                   _parse_var(parts[3]),
                                   _parse_var(parts[4]), parts[1]))
            elif parts[0] == "2" and len(parts) == 3:
                steps.append(twist(_parse_var(parts[2]), parts[1]))
            elif parts[0] == "3" and len(parts) == 3:
                if parts[1] not in ("+", "-"):
                    raise StepFormatError("bad pivot sign %r" % (parts[1],))
                steps.append(pivot(_parse_var(parts[2]),
                                   1 if parts[1] == "+" else -1))
            else:
                raise StepFormatError("bad step line %r" % (line,))
        except StepFormatError:
            raise
        except (IndexError, ValueError) as exc:
            raise StepFormatError("bad step line %r" % (line,)) from exc
    return steps
