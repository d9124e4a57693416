"""Exact arithmetic in cyclotomic fields Q(zeta_N).

Elements are stored in the power basis 1, z, ..., z^(phi(N)-1) of Q(zeta_N),
fully reduced modulo the N-th cyclotomic polynomial.  Because Phi_N is
irreducible, a value is zero exactly when all of its coefficients vanish.

    >>> z = root_of_unity(3, 1)
    >>> z + z**2
    CycNum(3, [-1, 0])
    >>> (root_of_unity(4, 1) ** 2).is_zero()
    False
"""

from __future__ import annotations

import cmath
import json
import math
import re
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterable, Sequence, Union

__all__ = [
    "CycNum",
    "cyclotomic_polynomial",
    "root_of_unity",
    "arith",
    "as_cycnum",
    "parse_cycnum",
    "common_order",
]


def _poly_divmod(num: Sequence[int], den: Sequence[int]) -> tuple[list[int], list[int]]:
    """Divide integer polynomials (little-endian) by a monic divisor."""
    num = list(num)
    if den[-1] != 1:
        raise ValueError("divisor must be monic")
    dn = len(den) - 1
    if len(num) - 1 < dn:
        return [0], num
    quot = [0] * (len(num) - dn)
    for i in range(len(num) - 1, dn - 1, -1):
        c = num[i]
        if c:
            quot[i - dn] = c
            for j in range(dn + 1):
                num[i - dn + j] -= c * den[j]
    rem = num[:dn] or [0]
    return quot, rem


def _poly_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Return Phi_n as a tuple of integer coefficients, constant term first.

    Computed from x^n - 1 = prod_{d | n} Phi_d by exact division.

    >>> cyclotomic_polynomial(12)
    (1, 0, -1, 0, 1)
    """
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"cyclotomic order must be a positive integer, got {n!r}")
    if n == 1:
        return (-1, 1)
    num = [-1] + [0] * (n - 1) + [1]
    den = [1]
    for d in _divisors(n)[:-1]:
        den = _poly_mul(den, cyclotomic_polynomial(d))
    quot, rem = _poly_divmod(num, den)
    if any(rem):
        raise ArithmeticError(f"x^{n} - 1 not divisible by proper cyclotomic factors")
    return tuple(quot)


@lru_cache(maxsize=None)
def _totient(n: int) -> int:
    return len(cyclotomic_polynomial(n)) - 1


@lru_cache(maxsize=None)
def _power_table(n: int) -> tuple[tuple[int, ...], ...]:
    """Reduced coordinates of z^j for j in range(n), as integer vectors."""
    phi = cyclotomic_polynomial(n)
    deg = len(phi) - 1
    rows = []
    for j in range(n):
        poly = [0] * j + [1]
        _, rem = _poly_divmod(poly, phi)
        rows.append(tuple(rem + [0] * (deg - len(rem))))
    return tuple(rows)


def _reduce(coeffs: Sequence[Fraction], n: int) -> tuple[Fraction, ...]:
    phi = cyclotomic_polynomial(n)
    deg = len(phi) - 1
    c = list(coeffs)
    for i in range(len(c) - 1, deg - 1, -1):
        a = c[i]
        if a:
            for j in range(deg):
                if phi[j]:
                    c[i - deg + j] -= a * phi[j]
            c[i] = 0
    c = c[:deg]
    c.extend([Fraction(0)] * (deg - len(c)))
    return tuple(c)


Scalar = Union[int, Fraction]


class CycNum:
    """An exact element of the cyclotomic field Q(zeta_N).

    Instances are immutable.  Binary operations between elements of
    different orders embed both into Q(zeta_lcm) first.
    """

    __slots__ = ("_order", "_coeffs")

    def __init__(self, order: int, coeffs: Iterable[Scalar] = ()):
        if not isinstance(order, int) or order < 1:
            raise ValueError(f"order must be a positive integer, got {order!r}")
        object.__setattr__(self, "_order", order)
        raw = [Fraction(c) for c in coeffs]
        object.__setattr__(self, "_coeffs", _reduce(raw, order))

    @classmethod
    def _make(cls, order: int, coeffs: tuple[Fraction, ...]) -> "CycNum":
        obj = cls.__new__(cls)
        object.__setattr__(obj, "_order", order)
        object.__setattr__(obj, "_coeffs", coeffs)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("CycNum is immutable")

    @property
    def order(self) -> int:
        return self._order

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return self._coeffs

    @classmethod
    def rational(cls, value: Scalar, order: int = 1) -> "CycNum":
        return cls(order, [value])

    @classmethod
    def zero(cls, order: int = 1) -> "CycNum":
        return cls(order, [])

    @classmethod
    def one(cls, order: int = 1) -> "CycNum":
        return cls(order, [1])

    # -- structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self._coeffs)

    def is_rational(self) -> bool:
        return not any(self._coeffs[1:])

    def embed(self, order: int) -> "CycNum":
        """Return the same value viewed in Q(zeta_order); order must be a multiple."""
        if order == self._order:
            return self
        if order % self._order:
            raise ValueError(f"cannot embed Q(zeta_{self._order}) into Q(zeta_{order})")
        step = order // self._order
        table = _power_table(order)
        deg = _totient(order)
        out = [Fraction(0)] * deg
        for j, c in enumerate(self._coeffs):
            if c:
                row = table[(j * step) % order]
                for i, t in enumerate(row):
                    if t:
                        out[i] += c * t
        return CycNum._make(order, tuple(out))

    def restrict(self, order: int) -> "CycNum":
        """Inverse of :meth:`embed`; raises if the value is not in Q(zeta_order)."""
        if self._order % order:
            raise ValueError(f"Q(zeta_{order}) is not a subfield of Q(zeta_{self._order})")
        step = self._order // order
        table = _power_table(self._order)
        deg = _totient(order)
        # solve by matching images of the basis of the subfield
        images = [table[(j * step) % self._order] for j in range(deg)]
        sol = _solve_rational(images, self._coeffs)
        if sol is None:
            raise ValueError(f"value does not lie in Q(zeta_{order})")
        return CycNum._make(order, tuple(sol))

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other) -> tuple["CycNum", "CycNum"]:
        if isinstance(other, (int, Rational)):
            other = CycNum(self._order, [Fraction(other)])
        elif not isinstance(other, CycNum):
            return NotImplemented, NotImplemented  # type: ignore[return-value]
        if other._order == self._order:
            return self, other
        m = math.lcm(self._order, other._order)
        return self.embed(m), other.embed(m)

    def __add__(self, other):
        a, b = self._coerce(other)
        if a is NotImplemented:
            return NotImplemented
        return CycNum._make(a._order, tuple(x + y for x, y in zip(a._coeffs, b._coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        a, b = self._coerce(other)
        if a is NotImplemented:
            return NotImplemented
        return CycNum._make(a._order, tuple(x - y for x, y in zip(a._coeffs, b._coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return CycNum._make(self._order, tuple(-x for x in self._coeffs))

    def __pos__(self):
        return self

    def __mul__(self, other):
        a, b = self._coerce(other)
        if a is NotImplemented:
            return NotImplemented
        n = a._order
        if b.is_rational():
            a, b = b, a
        if a.is_rational():
            c = a._coeffs[0]
            return CycNum._make(n, tuple(c * y for y in b._coeffs))
        deg = len(a._coeffs)
        prod = [Fraction(0)] * (2 * deg - 1)
        for i, x in enumerate(a._coeffs):
            if x:
                for j, y in enumerate(b._coeffs):
                    if y:
                        prod[i + j] += x * y
        return CycNum._make(n, _reduce(prod, n))

    __rmul__ = __mul__

    def inverse(self) -> "CycNum":
        """Exact multiplicative inverse, found by solving the multiplication-by-self system."""
        if self.is_zero():
            raise ZeroDivisionError("zero has no inverse")
        n = self._order
        columns = [(self * root_of_unity(n, j)).coeffs for j in range(len(self._coeffs))]
        unit = [Fraction(1)] + [Fraction(0)] * (len(self._coeffs) - 1)
        return CycNum._make(n, tuple(_solve_rational(columns, unit)))

    def __truediv__(self, other):
        a, b = self._coerce(other)
        if a is NotImplemented:
            return NotImplemented
        return a * b.inverse()

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            raise ValueError("only integer exponents are supported")
        if exponent < 0:
            return self.inverse() ** -exponent
        result = CycNum.one(self._order)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def times_root(self, j: int, n: int) -> "CycNum":
        """Multiply by zeta_n^j (n must divide the order of self)."""
        if self._order % n:
            raise ValueError(f"zeta_{n} is not in Q(zeta_{self._order})")
        shift = (j % n) * (self._order // n)
        if not shift:
            return self
        table = _power_table(self._order)
        out = [Fraction(0)] * len(self._coeffs)
        for i, c in enumerate(self._coeffs):
            if c:
                for a, t in enumerate(table[(i + shift) % self._order]):
                    if t:
                        out[a] += c * t
        return CycNum._make(self._order, tuple(out))

    def __eq__(self, other):
        if isinstance(other, (int, Rational)):
            return self._coeffs[0] == other and not any(self._coeffs[1:])
        if not isinstance(other, CycNum):
            return NotImplemented
        if other._order == self._order:
            return self._coeffs == other._coeffs
        return (self - other).is_zero()

    # values of different orders can compare equal, so no stable hash exists
    __hash__ = None  # type: ignore[assignment]

    def __bool__(self):
        return not self.is_zero()

    # -- diagnostics -------------------------------------------------------

    def to_complex(self) -> complex:
        """Floating-point value; for display and diagnostics only."""
        w = cmath.exp(2j * math.pi / self._order)
        return sum(complex(float(c)) * w**j for j, c in enumerate(self._coeffs))

    def approx_equal(self, other: "CycNum", tol: float = 1e-9) -> bool:
        return abs(self.to_complex() - as_cycnum(other).to_complex()) <= tol

    def __repr__(self):
        cs = ", ".join(str(c) for c in self._coeffs)
        return f"CycNum({self._order}, [{cs}])"

    def __str__(self):
        terms = []
        for j, c in enumerate(self._coeffs):
            if not c:
                continue
            if j == 0:
                terms.append(str(c))
            else:
                mono = f"z{self._order}" + (f"^{j}" if j > 1 else "")
                if c == 1:
                    terms.append(mono)
                elif c == -1:
                    terms.append("-" + mono)
                else:
                    terms.append(f"{c}*{mono}")
        if not terms:
            return "0"
        return "+".join(terms).replace("+-", "-")

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        return {"N": self._order, "coeffs": [[c.numerator, c.denominator] for c in self._coeffs]}

    @classmethod
    def from_json(cls, data) -> "CycNum":
        if isinstance(data, (int, str)) and not isinstance(data, bool):
            return parse_cycnum(str(data))
        if not isinstance(data, dict) or set(data) != {"N", "coeffs"}:
            raise ValueError(f"malformed cyclotomic number: {data!r}")
        coeffs = []
        for item in data["coeffs"]:
            if isinstance(item, list) and len(item) == 2:
                coeffs.append(Fraction(int(item[0]), int(item[1])))
            elif isinstance(item, int) and not isinstance(item, bool):
                coeffs.append(Fraction(item))
            else:
                raise ValueError(f"malformed coefficient: {item!r}")
        n = data["N"]
        if not isinstance(n, int) or n < 1:
            raise ValueError(f"malformed order: {n!r}")
        return cls(n, coeffs)


def common_order(*values) -> int:
    m = 1
    for v in values:
        if isinstance(v, CycNum):
            m = math.lcm(m, v.order)
        elif isinstance(v, int):
            m = math.lcm(m, v)
    return m


def _solve_rational(columns: list[Sequence[int]], rhs: Sequence[Fraction]) -> list[Fraction] | None:
    """Solve sum_j x_j * columns[j] == rhs over Q; None if inconsistent."""
    rows = len(rhs)
    ncol = len(columns)
    mat = [[Fraction(columns[j][i]) for j in range(ncol)] + [Fraction(rhs[i])] for i in range(rows)]
    pivots = []
    r = 0
    for c in range(ncol):
        p = next((i for i in range(r, rows) if mat[i][c]), None)
        if p is None:
            continue
        mat[r], mat[p] = mat[p], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(rows):
            if i != r and mat[i][c]:
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
    if any(mat[i][-1] for i in range(r, rows)):
        return None
    sol = [Fraction(0)] * ncol
    for i, c in enumerate(pivots):
        sol[c] = mat[i][-1]
    return sol


def root_of_unity(n: int, j: int = 1) -> CycNum:
    """zeta_n^(j mod n) as an element of Q(zeta_n)."""
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"order must be a positive integer, got {n!r}")
    row = _power_table(n)[j % n]
    return CycNum._make(n, tuple(Fraction(x) for x in row))


def arith(a: CycNum, b=None, op: str = "add") -> CycNum:
    """Functional form of the field operations, for callers that dispatch on a name."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "pow":
        return a ** b
    if op == "negate":
        return -a
    raise ValueError(f"unknown operation {op!r}")


def as_cycnum(value, order: int = 1) -> CycNum:
    if isinstance(value, CycNum):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(value, (int, Rational)):
        return CycNum(order, [Fraction(value)])
    if isinstance(value, str):
        return parse_cycnum(value)
    if isinstance(value, dict):
        return CycNum.from_json(value)
    raise TypeError(f"cannot interpret {value!r} as a cyclotomic number")


_TERM = re.compile(
    r"""^(?P<coef>\d+(?:/\d+)?)?\*?
        (?:(?:z|zeta)(?P<n>\d+)(?:\^(?P<j>-?\d+))?)?$""",
    re.VERBOSE,
)


def parse_cycnum(text: str) -> CycNum:
    """Parse strings such as ``"1"``, ``"-1/2"``, ``"z4"``, ``"1+z3^2"``, ``"2*z8^3-1"``.

    A JSON object in the ``{"N": ..., "coeffs": ...}`` layout is also accepted.
    """
    s = text.strip()
    if s.startswith("{"):
        return CycNum.from_json(json.loads(s))
    s = s.replace(" ", "")
    if not s:
        raise ValueError("empty expression")
    if s[0] not in "+-":
        s = "+" + s
    parts = re.findall(r"[+-](?:[^+\-^]|\^-?\d+)*", s)
    if "".join(parts) != s:
        raise ValueError(f"cannot parse {text!r}")
    total = CycNum.zero()
    for part in parts:
        sign, body = part[0], part[1:]
        m = _TERM.match(body)
        if not body or not m or (m.group("coef") is None and m.group("n") is None):
            raise ValueError(f"cannot parse term {part!r} in {text!r}")
        coef = Fraction(m.group("coef")) if m.group("coef") else Fraction(1)
        if sign == "-":
            coef = -coef
        if m.group("n"):
            n = int(m.group("n"))
            j = int(m.group("j")) if m.group("j") else 1
            term = root_of_unity(n, j) * coef
        else:
            term = CycNum.rational(coef)
        total = total + term
    return total
