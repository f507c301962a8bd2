"""Decorated coordinates of the once-punctured super torus and their flips.

A state holds three lambda-lengths ``(a, b, c)`` for the two sides and the
diagonal of the fundamental-domain quadrilateral, two odd mu-invariants
``(sigma, theta)`` for the two triangles, and three orientation signs
``spin = (s_a, s_b, s_c)``.  The sign of edge ``e`` fixes its W-invariant

    W_e = s_e * sigma * theta,

the product of the two mu-invariants ordered by the edge orientation.
Two gauge moves act trivially on the underlying geometry and are used for
normalization:

- the half-turn of the quadrilateral exchanges the two triangles,
  swapping ``sigma`` and ``theta`` and reversing every edge orientation
  (all three signs flip);
- a triangle reversal negates one mu-invariant and flips all three signs.

Both preserve every ``W_e``.  States are stored with ``s_c = +1`` (each
orbit has such a representative), so the four spin components are indexed
by ``(s_a, s_b)``.

The flip of the diagonal obeys the super Ptolemy relation in W-form,

    c f = a^2 + b^2 + a b W_c,

the new edge inherits the W-invariant of the old one, and the
mu-invariants rotate by

    sigma' = (b sigma - a theta) / sqrt(a^2 + b^2),
    theta' = (b theta + a sigma) / sqrt(a^2 + b^2).

These are exactly the transformation rules of the general quadrilateral
Ptolemy transformation specialized to the torus (both sides of the
quadrilateral are identified in pairs), and they keep the semi-perimeter

    h = a/(bc) + b/(ac) + c/(ab) + W_a/a + W_b/b + W_c/c

exactly invariant.  A double flip returns the same point of the decorated
moduli space; the raw mu-pair comes back rotated by a quarter turn in the
(sigma, theta) plane, which is one of the trivial gauge moves, so state
comparison (`isclose`) works modulo that finite gauge group.
"""

from __future__ import annotations

from dataclasses import dataclass
from random import Random
from typing import Iterable

from .grassmann import DomainError, GrassmannNumber

__all__ = [
    "DecoratedTorusState",
    "flip",
    "general_ptolemy",
    "w_invariants",
    "semi_perimeter",
    "h_lengths",
    "dehn_twist",
    "twist_sequence",
    "recursion_closed_form",
    "spin_class_id",
    "random_state",
]


@dataclass(frozen=True)
class DecoratedTorusState:
    """Point of decorated super Teichmueller space in fundamental-domain form."""

    a: GrassmannNumber
    b: GrassmannNumber
    c: GrassmannNumber
    sigma: GrassmannNumber
    theta: GrassmannNumber
    spin: tuple[int, int, int] = (1, 1, 1)

    def __post_init__(self):
        n = self.a.n
        for name in ("a", "b", "c"):
            v = getattr(self, name)
            if v.n != n:
                raise DomainError("mixed generator counts in state")
            if not v.is_even():
                raise DomainError(f"lambda-length {name} must be even")
            if v.body <= 0.0:
                raise DomainError(f"lambda-length {name} needs positive body")
        for name in ("sigma", "theta"):
            v = getattr(self, name)
            if v.n != n:
                raise DomainError("mixed generator counts in state")
            if not v.is_odd():
                raise DomainError(f"mu-invariant {name} must be odd")
        if len(self.spin) != 3 or any(s not in (-1, 1) for s in self.spin):
            raise DomainError("spin must be three signs +-1")
        if not isinstance(self.spin, tuple):
            object.__setattr__(self, "spin", tuple(self.spin))
        if self.spin[2] < 0:
            # half-turn gauge: swap triangles, flip all orientations; the
            # stored representative always has positive diagonal sign
            si, th = self.theta, self.sigma
            object.__setattr__(self, "sigma", si)
            object.__setattr__(self, "theta", th)
            object.__setattr__(self, "spin", tuple(-s for s in self.spin))

    @property
    def n(self) -> int:
        return self.a.n

    def lambdas(self) -> tuple[GrassmannNumber, ...]:
        return (self.a, self.b, self.c)

    def spin_class(self) -> int:
        return spin_class_id(self.spin)

    def mu_product(self) -> GrassmannNumber:
        return self.sigma * self.theta

    def isclose(self, other: "DecoratedTorusState", tol: float = 1e-12) -> bool:
        """Same point of the moduli space, modulo the trivial gauge moves.

        Lambda-lengths and spin signs must agree; the mu-pair may differ
        by a quarter-turn rotation (sigma, theta) -> (-theta, sigma),
        whose square is the global sign flip.
        """
        from .grassmann import allclose

        if self.spin != other.spin:
            return False
        for p, q in zip(self.lambdas(), other.lambdas()):
            if not allclose(p, q, tol):
                return False
        si, th = other.sigma, other.theta
        for _ in range(4):
            if allclose(self.sigma, si, tol) and allclose(self.theta, th, tol):
                return True
            si, th = -th, si
        return False

    def to_obj(self) -> dict:
        return {
            "N": self.n,
            "a": self.a.to_obj(),
            "b": self.b.to_obj(),
            "c": self.c.to_obj(),
            "sigma": self.sigma.to_obj(),
            "theta": self.theta.to_obj(),
            "spin": list(self.spin),
        }

    @classmethod
    def from_obj(cls, obj: dict) -> "DecoratedTorusState":
        return cls(
            a=GrassmannNumber.from_obj(obj["a"]),
            b=GrassmannNumber.from_obj(obj["b"]),
            c=GrassmannNumber.from_obj(obj["c"]),
            sigma=GrassmannNumber.from_obj(obj["sigma"]),
            theta=GrassmannNumber.from_obj(obj["theta"]),
            spin=tuple(obj.get("spin", (1, 1, 1))),
        )


def _make_state(a, b, c, sigma, theta, spin) -> DecoratedTorusState:
    return DecoratedTorusState(a, b, c, sigma, theta, tuple(spin))


def spin_class_id(spin: Iterable[int]) -> int:
    """Orbit of the sign triple under flipping all three signs, as 0..3."""
    sa, sb, sc = spin
    if sc < 0:
        sa, sb = -sa, -sb
    return (2 if sa < 0 else 0) + (1 if sb < 0 else 0)


def spin_for_class(class_id: int) -> tuple[int, int, int]:
    if class_id not in (0, 1, 2, 3):
        raise ValueError("spin class id must be 0..3")
    return (-1 if class_id & 2 else 1, -1 if class_id & 1 else 1, 1)


def w_invariants(state: DecoratedTorusState) -> tuple[GrassmannNumber, ...]:
    """Edge invariants (W_a, W_b, W_c); each is +-sigma*theta by orientation."""
    w = state.mu_product()
    sa, sb, sc = state.spin
    return (w * sa, w * sb, w * sc)


def h_lengths(a, b, c) -> tuple[GrassmannNumber, ...]:
    """Horocyclic segment lengths opposite the three edges: a/(bc) etc."""
    return (a / (b * c), b / (a * c), c / (a * b))


def semi_perimeter(state: DecoratedTorusState) -> GrassmannNumber:
    """Flip-invariant h = a/(bc) + b/(ac) + c/(ab) + sum W_e / e."""
    a, b, c = state.lambdas()
    wa, wb, wc = w_invariants(state)
    al, be, ga = h_lengths(a, b, c)
    return al + be + ga + wa / a + wb / b + wc / c


# ----------------------------------------------------------------------
# flips
# ----------------------------------------------------------------------
def _flip_diagonal(state: DecoratedTorusState) -> DecoratedTorusState:
    # stored states have s_c = +1, so W_c = sigma*theta and the Ptolemy
    # relation reads c f = a^2 + b^2 + a b sigma theta
    a, b, c = state.a, state.b, state.c
    si, th = state.sigma, state.theta
    sa, sb, _ = state.spin
    f = (a * a + b * b + a * b * (si * th)) / c
    d_inv = (a * a + b * b).sqrt().inverse()
    si2 = (b * si - a * th) * d_inv
    th2 = (b * th + a * si) * d_inv
    # the new diagonal inherits W_c; the sides swap roles in the redrawn
    # quadrilateral
    return _make_state(b, a, f, si2, th2, (sb, sa, 1))


def _permuted(state: DecoratedTorusState, perm: tuple[int, int, int]) -> DecoratedTorusState:
    vals = state.lambdas()
    bits = state.spin
    return _make_state(
        vals[perm[0]], vals[perm[1]], vals[perm[2]],
        state.sigma, state.theta,
        (bits[perm[0]], bits[perm[1]], bits[perm[2]]),
    )


def flip(state: DecoratedTorusState, edge: str) -> DecoratedTorusState:
    """Flip one edge of the triangulation; an involution on the quotient.

    The diagonal flips directly; a side edge is first rotated into the
    diagonal slot, flipped there, and rotated back.
    """
    if edge == "c":
        return _flip_diagonal(state)
    if edge == "a":
        out = _flip_diagonal(_permuted(state, (1, 2, 0)))
        return _permuted(out, (2, 0, 1))
    if edge == "b":
        out = _flip_diagonal(_permuted(state, (2, 0, 1)))
        return _permuted(out, (1, 2, 0))
    raise ValueError("edge must be one of 'a', 'b', 'c'")


def general_ptolemy(a, b, c, d, e, sigma, theta):
    """Flip of a generic decorated quadrilateral with diagonal e.

    Returns (f, sigma', theta') with e f = (ac + bd)(1 + sigma theta
    sqrt(chi)/(1 + chi)) and the rotated mu-invariants, where
    chi = ac/(bd) is the super cross ratio.  The product sigma' theta' =
    sigma theta is asserted.
    """
    for name, v in (("a", a), ("b", b), ("c", c), ("d", d), ("e", e)):
        if v.body <= 0.0:
            raise DomainError(f"lambda-length {name} needs positive body")
    chi = (a * c) / (b * d)
    sq_chi = chi.sqrt()
    inv_1chi = (1 + chi).inverse()
    f = (a * c + b * d) * (1 + sigma * theta * sq_chi * inv_1chi) / e
    sq_1chi_inv = (1 + chi).sqrt().inverse()
    sigma2 = (sigma - sq_chi * theta) * sq_1chi_inv
    theta2 = (theta + sq_chi * sigma) * sq_1chi_inv
    drift = (sigma2 * theta2 - sigma * theta).norm()
    if drift > 1e-12 * max(1.0, (sigma * theta).norm()):
        raise AssertionError(f"mu-product not preserved (drift {drift:.2e})")
    return f, sigma2, theta2


# ----------------------------------------------------------------------
# Dehn twists and the strip recursion
# ----------------------------------------------------------------------
_AXIS_TO_FRONT = {"a": (0, 1, 2), "b": (1, 0, 2), "c": (2, 0, 1)}
_AXIS_TO_BACK = {"a": (0, 1, 2), "b": (1, 0, 2), "c": (1, 2, 0)}


def _quarter_turn(state: DecoratedTorusState, k: int) -> DecoratedTorusState:
    """Gauge rotation (sigma, theta) -> (-theta, sigma), iterated k mod 4."""
    si, th = state.sigma, state.theta
    for _ in range(k % 4):
        si, th = -th, si
    return _make_state(state.a, state.b, state.c, si, th, state.spin)


def _twist_once(state: DecoratedTorusState, direction: int) -> DecoratedTorusState:
    # axis edge sits in the first slot and is fixed by the twist; the
    # negative direction is the exact functional inverse (the double flip
    # of one edge is a quarter turn on the mu-pair, which must be undone)
    if direction > 0:
        out = _flip_diagonal(_permuted(state, (0, 2, 1)))
        return _permuted(out, (1, 0, 2))
    out = _flip_diagonal(_quarter_turn(_permuted(state, (1, 0, 2)), -1))
    return _permuted(out, (0, 2, 1))


def dehn_twist(state: DecoratedTorusState, axis: str, power: int = 1) -> DecoratedTorusState:
    """Dehn twist along the curve disjoint from ``axis``, iterated ``power`` times.

    Classically one positive twist sends (x, y, z) to (x, z, (x^2+z^2)/y)
    in the axis-first ordering; the axis lambda-length is fixed and the
    slots are restored to the input arrangement afterwards.  Negative
    powers apply the exact inverse.
    """
    if axis not in _AXIS_TO_FRONT:
        raise ValueError("axis must be one of 'a', 'b', 'c'")
    cur = _permuted(state, _AXIS_TO_FRONT[axis])
    step = 1 if power >= 0 else -1
    for _ in range(abs(power)):
        cur = _twist_once(cur, step)
    return _permuted(cur, _AXIS_TO_BACK[axis])


def twist_sequence(state, axis: str, nmax: int):
    """Strip diagonals b_k for k = -nmax..nmax as (lambda, W) pairs.

    b_0 and b_{-1} are the two non-axis edges of the starting state; the
    twist shifts the sequence.  W_{b_k} alternates between two values
    (equal values in the spin classes where the two non-axis edges carry
    the same orientation sign).
    """
    base = _permuted(state, _AXIS_TO_FRONT[axis])
    seq: dict[int, tuple[GrassmannNumber, GrassmannNumber]] = {}

    def record(k, st):
        w = st.mu_product()
        seq.setdefault(k, (st.b, w * st.spin[1]))
        seq.setdefault(k - 1, (st.c, w * st.spin[2]))

    record(0, base)
    cur = base
    for k in range(1, nmax + 1):
        cur = _twist_once(cur, -1)
        record(k, cur)
    cur = base
    for k in range(1, nmax + 1):
        cur = _twist_once(cur, +1)
        record(-k, cur)
    return {k: seq[k] for k in sorted(seq) if -nmax <= k <= nmax}


def recursion_closed_form(state, axis: str, n: int, max_n: int = 64):
    """b_n from the solved three-term recursion of the twist orbit.

    The homogeneous part is x r^n + y r^{-n} with r + 1/r = a h - W_a
    (a the axis lambda-length); the particular part is
    a W_{b_n} / (a h - W_a -+ 2), minus sign when the W-sequence is
    constant and plus when it alternates.  x and y are solved from b_0,
    b_1 in the algebra.
    """
    from .osp12 import eigen_r

    if abs(n) > max_n:
        raise ValueError(f"|n| exceeds configured bound {max_n}")
    base = _permuted(state, _AXIS_TO_FRONT[axis])
    aa = base.a
    w = base.mu_product()
    w_axis = w * base.spin[0]
    w_even = w * base.spin[1]  # W_{b_k} for even k
    w_odd = w * base.spin[2]   # W_{b_k} for odd k (inherited from b_{-1})
    h = semi_perimeter(base)
    r = eigen_r(aa, h, w_axis)
    constant = base.spin[1] == base.spin[2]
    shift = -2.0 if constant else 2.0
    denom = (aa * h - w_axis + shift).inverse()

    def particular(k):
        return aa * (w_even if k % 2 == 0 else w_odd) * denom

    b0 = base.b
    b1 = _twist_once(base, -1).b
    u0 = b0 - particular(0)
    u1 = b1 - particular(1)
    r_inv = r.inverse()
    y = (u0 * r - u1) * (r - r_inv).inverse()
    x = u0 - y
    if x.body <= 0 or y.body <= 0:
        raise DomainError("recursion coefficients lost positive body")
    rn = r**n if n >= 0 else r_inv ** (-n)
    rmn = r_inv**n if n >= 0 else r ** (-n)
    return x * rn + y * rmn + particular(n)


# ----------------------------------------------------------------------
# sampling
# ----------------------------------------------------------------------
def random_state(
    rng: Random,
    n: int = 2,
    spin: tuple[int, int, int] | None = None,
    soul_scale: float = 0.1,
    odd_scale: float = 0.2,
    body_range: tuple[float, float] = (0.6, 1.8),
) -> DecoratedTorusState:
    """Random valid state for property sweeps; deterministic given the rng."""

    def signed(scale):
        return rng.choice((-1, 1)) * rng.uniform(0.3, 1.0) * scale

    def even(body):
        coeffs = {}
        for m in range(1, 1 << n):
            if m.bit_count() % 2 == 0 and rng.random() < 0.7:
                coeffs[m] = signed(soul_scale)
        return GrassmannNumber(n, coeffs) + body

    def odd():
        # every odd mask present, so mu-products are never degenerate
        coeffs = {
            m: signed(odd_scale)
            for m in range(1, 1 << n)
            if m.bit_count() % 2 == 1
        }
        return GrassmannNumber(n, coeffs)

    if spin is None:
        spin = spin_for_class(rng.randrange(4))
    lo, hi = body_range
    return DecoratedTorusState(
        a=even(rng.uniform(lo, hi)),
        b=even(rng.uniform(lo, hi)),
        c=even(rng.uniform(lo, hi)),
        sigma=odd(),
        theta=odd(),
        spin=tuple(spin),
    )
