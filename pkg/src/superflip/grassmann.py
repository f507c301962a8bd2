"""Finite-dimensional Grassmann algebra with real coefficients.

An element of the algebra on generators ``b1, ..., bN`` is a finite sum
``x = sum_I x_I * b_I`` over strictly increasing multi-indices
``I = (i1 < ... < ik)``, with ``b_I = b_{i1} * ... * b_{ik}`` and real
coefficients.  Generators anticommute (``b_i b_j = -b_j b_i``) and square
to zero, so the soul (the non-scalar part) of any element is nilpotent.
That nilpotency makes the analytic calculus exact: inverse, square root
and the elementary transcendental functions are finite Taylor sums about
the body, not approximations.

Multi-indices are stored as bitmasks over the ``N`` generators; the
anticommutation sign of a basis product is the parity of the merge of the
two bitmasks.  Coefficients are 64-bit floats.  Exact zero coefficients
are stripped (canonical form), but small ones are never pruned: the
algebra is exact-shape, tolerances belong to callers.
"""

from __future__ import annotations

import json
import math
from typing import Callable, Iterable, Iterator

__all__ = [
    "GrassmannNumber",
    "DimensionError",
    "NotInvertibleError",
    "DomainError",
    "analytic_apply",
    "exp",
    "log",
    "cosh",
    "sinh",
    "arcosh",
    "sqrt_positive",
    "inverse",
    "allclose",
]

MAX_GENERATORS = 16


class DimensionError(ValueError):
    """Operands live in Grassmann algebras with different generator counts."""


class NotInvertibleError(ZeroDivisionError):
    """Element has zero body, hence no inverse."""


class DomainError(ValueError):
    """Body of the argument is outside the domain of the requested function."""


def _merge_sign(a: int, b: int) -> int:
    """Sign of b_A * b_B from sorting the concatenated index lists.

    Counts inversions: pairs (i in A, j in B) with i > j.  Caller
    guarantees the masks are disjoint.
    """
    sign = 0
    t = b
    while t:
        low = t & -t
        j = low.bit_length() - 1
        sign += (a >> (j + 1)).bit_count()
        t ^= low
    return -1 if sign & 1 else 1


def _mask_from_indices(indices: Iterable[int], n: int) -> int:
    mask = 0
    prev = 0
    for i in indices:
        if not isinstance(i, int) or i < 1 or i > n:
            raise ValueError(f"generator label {i!r} outside 1..{n}")
        if i <= prev:
            raise ValueError("multi-index must be strictly increasing")
        prev = i
        mask |= 1 << (i - 1)
    return mask


def _indices_from_mask(mask: int) -> tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


class GrassmannNumber:
    """Immutable element of the real Grassmann algebra on ``n`` generators."""

    __slots__ = ("n", "_c")

    def __init__(self, n: int, coeffs: dict[int, float] | None = None):
        if not isinstance(n, int) or n < 0 or n > MAX_GENERATORS:
            raise ValueError(f"generator count must lie in 0..{MAX_GENERATORS}")
        self.n = n
        c: dict[int, float] = {}
        if coeffs:
            limit = 1 << n
            for mask, v in coeffs.items():
                if mask < 0 or mask >= limit:
                    raise ValueError(f"bitmask {mask} invalid for n={n}")
                fv = float(v)
                if fv != 0.0:
                    c[mask] = fv
        self._c = c

    # ------------------------------------------------------------------
    # construction helpers
    # ------------------------------------------------------------------
    @classmethod
    def zero(cls, n: int) -> "GrassmannNumber":
        return cls(n)

    @classmethod
    def one(cls, n: int) -> "GrassmannNumber":
        return cls(n, {0: 1.0})

    @classmethod
    def scalar(cls, n: int, value: float) -> "GrassmannNumber":
        return cls(n, {0: float(value)})

    @classmethod
    def generator(cls, n: int, i: int) -> "GrassmannNumber":
        """The generator ``b_i``, labels 1-based."""
        if i < 1 or i > n:
            raise ValueError(f"generator label {i} outside 1..{n}")
        return cls(n, {1 << (i - 1): 1.0})

    @classmethod
    def monomial(cls, n: int, indices: Iterable[int], coeff: float = 1.0) -> "GrassmannNumber":
        return cls(n, {_mask_from_indices(indices, n): float(coeff)})

    @classmethod
    def from_terms(cls, n: int, terms: Iterable[tuple[Iterable[int], float]]) -> "GrassmannNumber":
        c: dict[int, float] = {}
        for indices, v in terms:
            mask = _mask_from_indices(indices, n)
            c[mask] = c.get(mask, 0.0) + float(v)
        return cls(n, c)

    # ------------------------------------------------------------------
    # structure maps
    # ------------------------------------------------------------------
    @property
    def body(self) -> float:
        """Coefficient of the empty multi-index (the augmentation of x)."""
        return self._c.get(0, 0.0)

    def soul(self) -> "GrassmannNumber":
        """x minus its body; nilpotent of order at most n+1."""
        c = dict(self._c)
        c.pop(0, None)
        return GrassmannNumber(self.n, c)

    def degree_soul(self, k: int) -> "GrassmannNumber":
        """Homogeneous degree-k part; degree 0 means body * 1."""
        if k < 0 or k > self.n:
            raise ValueError(f"degree {k} outside 0..{self.n}")
        return GrassmannNumber(
            self.n, {m: v for m, v in self._c.items() if m.bit_count() == k}
        )

    def norm(self) -> float:
        """Sum of absolute coefficient values (Banach algebra norm)."""
        return sum(abs(v) for v in self._c.values())

    def even_part(self) -> "GrassmannNumber":
        return GrassmannNumber(
            self.n, {m: v for m, v in self._c.items() if not (m.bit_count() & 1)}
        )

    def odd_part(self) -> "GrassmannNumber":
        return GrassmannNumber(
            self.n, {m: v for m, v in self._c.items() if m.bit_count() & 1}
        )

    def is_even(self) -> bool:
        return all(not (m.bit_count() & 1) for m in self._c)

    def is_odd(self) -> bool:
        return all(m.bit_count() & 1 for m in self._c)

    def is_zero(self) -> bool:
        return not self._c

    # ------------------------------------------------------------------
    # ring operations
    # ------------------------------------------------------------------
    def _coerce(self, other) -> "GrassmannNumber | None":
        if isinstance(other, GrassmannNumber):
            if other.n != self.n:
                raise DimensionError(
                    f"mixed generator counts: {self.n} vs {other.n}"
                )
            return other
        if isinstance(other, (int, float)):
            return GrassmannNumber.scalar(self.n, other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        c = dict(self._c)
        for m, v in o._c.items():
            c[m] = c.get(m, 0.0) + v
        return GrassmannNumber(self.n, c)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        c = dict(self._c)
        for m, v in o._c.items():
            c[m] = c.get(m, 0.0) - v
        return GrassmannNumber(self.n, c)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return GrassmannNumber(self.n, {m: -v for m, v in self._c.items()})

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            f = float(other)
            return GrassmannNumber(self.n, {m: v * f for m, v in self._c.items()})
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out: dict[int, float] = {}
        for ma, va in self._c.items():
            for mb, vb in o._c.items():
                if ma & mb:
                    continue
                m = ma | mb
                out[m] = out.get(m, 0.0) + va * vb * _merge_sign(ma, mb)
        return GrassmannNumber(self.n, out)

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return self.__mul__(other)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, float)):
            return self * (1.0 / float(other))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        acc = GrassmannNumber.one(self.n)
        for _ in range(k):
            acc = acc * self
        return acc

    def __eq__(self, other):
        if isinstance(other, (int, float)):
            other = GrassmannNumber.scalar(self.n, other)
        if not isinstance(other, GrassmannNumber):
            return NotImplemented
        return self.n == other.n and self._c == other._c

    def __hash__(self):
        return hash((self.n, tuple(sorted(self._c.items()))))

    # ------------------------------------------------------------------
    # analytic calculus (exact: soul is nilpotent)
    # ------------------------------------------------------------------
    def inverse(self) -> "GrassmannNumber":
        """Multiplicative inverse via the finite geometric series in the soul."""
        eps = self.body
        if eps == 0.0:
            raise NotInvertibleError("zero body: element is not invertible")
        s = self.soul()
        acc = GrassmannNumber.one(self.n)
        term = GrassmannNumber.one(self.n)
        for _ in range(self.n):
            term = term * s * (-1.0 / eps)
            if term.is_zero():
                break
            acc = acc + term
        return acc * (1.0 / eps)

    def sqrt(self) -> "GrassmannNumber":
        """Square root with positive body; requires body > 0."""
        eps = self.body
        if eps <= 0.0:
            raise DomainError("square root needs positive body")
        s = self.soul()
        acc = GrassmannNumber.one(self.n)
        term = GrassmannNumber.one(self.n)
        binom = 1.0
        for j in range(1, self.n + 1):
            binom *= (0.5 - (j - 1)) / j
            term = term * s * (1.0 / eps)
            if term.is_zero():
                break
            acc = acc + term * binom
        return acc * math.sqrt(eps)

    def _taylor(self, derivs: Callable[[int], float]) -> "GrassmannNumber":
        """sum_j f^(j)(body) soul^j / j!, truncated exactly by nilpotency."""
        acc = GrassmannNumber.scalar(self.n, derivs(0))
        s = self.soul()
        power = GrassmannNumber.one(self.n)
        fact = 1.0
        for j in range(1, self.n + 1):
            power = power * s
            if power.is_zero():
                break
            fact *= j
            acc = acc + power * (derivs(j) / fact)
        return acc

    def exp(self) -> "GrassmannNumber":
        e = math.exp(self.body)
        return self._taylor(lambda j: e)

    def log(self) -> "GrassmannNumber":
        eps = self.body
        if eps <= 0.0:
            raise DomainError("log needs positive body")

        def d(j: int) -> float:
            if j == 0:
                return math.log(eps)
            return (-1.0) ** (j - 1) * math.factorial(j - 1) / eps**j

        return self._taylor(d)

    def cosh(self) -> "GrassmannNumber":
        c, s = math.cosh(self.body), math.sinh(self.body)
        return self._taylor(lambda j: c if j % 2 == 0 else s)

    def sinh(self) -> "GrassmannNumber":
        c, s = math.cosh(self.body), math.sinh(self.body)
        return self._taylor(lambda j: s if j % 2 == 0 else c)

    def arcosh(self) -> "GrassmannNumber":
        eps = self.body
        if eps <= 1.0:
            raise DomainError("arcosh needs body > 1")
        # f'(t) = (t^2-1)^(-1/2); f^(j) = P_j(t) (t^2-1)^(-(2j-1)/2) with
        # P_{j+1} = P_j' (t^2-1) - (2j-1) t P_j, P_1 = 1.
        polys: list[list[float]] = [[1.0]]
        for j in range(1, self.n):
            p = polys[-1]
            dp = [p[i] * i for i in range(1, len(p))]
            nxt = [0.0] * (len(p) + 1)
            for i, v in enumerate(dp):
                nxt[i + 2] += v
                nxt[i] -= v
            for i, v in enumerate(p):
                nxt[i + 1] -= (2 * j - 1) * v
            polys.append(nxt)

        def d(j: int) -> float:
            if j == 0:
                return math.acosh(eps)
            val = sum(c * eps**i for i, c in enumerate(polys[j - 1]))
            return val * (eps**2 - 1.0) ** (-(2 * j - 1) / 2.0)

        return self._taylor(d)

    # ------------------------------------------------------------------
    # serialization and display
    # ------------------------------------------------------------------
    def terms(self) -> Iterator[tuple[tuple[int, ...], float]]:
        for mask in sorted(self._c, key=lambda m: (m.bit_count(), m)):
            yield _indices_from_mask(mask), self._c[mask]

    def to_obj(self) -> dict:
        return {
            "N": self.n,
            "terms": [{"idx": list(idx), "c": c} for idx, c in self.terms()],
        }

    @classmethod
    def from_obj(cls, obj: dict) -> "GrassmannNumber":
        n = int(obj["N"])
        return cls.from_terms(n, [(t["idx"], t["c"]) for t in obj["terms"]])

    def to_json(self) -> str:
        return json.dumps(self.to_obj())

    @classmethod
    def from_json(cls, text: str) -> "GrassmannNumber":
        return cls.from_obj(json.loads(text))

    def __repr__(self):
        if not self._c:
            return "0"
        parts = []
        for idx, c in self.terms():
            base = "" if not idx else "b" + "".join(str(i) for i in idx)
            if base:
                parts.append(f"{c:+g}*{base}")
            else:
                parts.append(f"{c:+g}")
        out = "".join(parts)
        return out[1:] if out.startswith("+") else out


# ----------------------------------------------------------------------
# module-level functional interface
# ----------------------------------------------------------------------
def inverse(x: GrassmannNumber) -> GrassmannNumber:
    return x.inverse()


def sqrt_positive(x: GrassmannNumber) -> GrassmannNumber:
    return x.sqrt()


def exp(x: GrassmannNumber) -> GrassmannNumber:
    return x.exp()


def log(x: GrassmannNumber) -> GrassmannNumber:
    return x.log()


def cosh(x: GrassmannNumber) -> GrassmannNumber:
    return x.cosh()


def sinh(x: GrassmannNumber) -> GrassmannNumber:
    return x.sinh()


def arcosh(x: GrassmannNumber) -> GrassmannNumber:
    return x.arcosh()


_ANALYTIC = {"exp": exp, "log": log, "cosh": cosh, "sinh": sinh, "arcosh": arcosh}


def analytic_apply(tag: str, x: GrassmannNumber) -> GrassmannNumber:
    """Apply one of exp/log/cosh/sinh/arcosh by name."""
    try:
        f = _ANALYTIC[tag]
    except KeyError:
        raise ValueError(f"unknown analytic function {tag!r}") from None
    return f(x)


def allclose(x, y, tol: float = 1e-12, relative: bool = True) -> bool:
    """Whether two elements agree within tol, relatively by default."""
    if isinstance(x, (int, float)) and isinstance(y, GrassmannNumber):
        x = GrassmannNumber.scalar(y.n, x)
    if isinstance(y, (int, float)) and isinstance(x, GrassmannNumber):
        y = GrassmannNumber.scalar(x.n, y)
    d = (x - y).norm()
    if relative:
        scale = max(1.0, x.norm(), y.norm())
        return d <= tol * scale
    return d <= tol
