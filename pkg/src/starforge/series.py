"""Truncated series arithmetic.

TruncSeries models K[t]/(t^q) with exact rational coefficients, BiPoly
models (K[x]/(x^D))[t]/(t^q) as a dense D x q coefficient grid, and
MultiGerm is a tuple of either kind, one component per branch, each with
its own t-truncation level.

Truncations never change silently: mixing two different truncations in an
arithmetic operation is a usage error, and lifting or cutting a series is
always an explicit call.
"""

from __future__ import annotations

from .errors import NotAUnit, UsageError
from .linalg import mul_bitrunc, mul_trunc
from .scalars import QQ, scalar_to_string


def _pad(coeffs, n):
    coeffs = list(coeffs)
    if len(coeffs) > n:
        raise UsageError("%d coefficients exceed truncation %d" % (len(coeffs), n))
    return coeffs + [0] * (n - len(coeffs))


class TruncSeries:
    """Element of K[t]/(t^trunc)."""

    __slots__ = ("trunc", "coeffs")

    def __init__(self, trunc: int, coeffs=()):
        if trunc < 0:
            raise UsageError("negative truncation")
        self.trunc = trunc
        self.coeffs = _pad(coeffs, trunc)

    @classmethod
    def zero(cls, trunc: int) -> "TruncSeries":
        return cls(trunc)

    @classmethod
    def one(cls, trunc: int) -> "TruncSeries":
        return cls(trunc, [1] if trunc > 0 else [])

    @classmethod
    def t_power(cls, k: int, trunc: int) -> "TruncSeries":
        c = [0] * trunc
        if 0 <= k < trunc:
            c[k] = 1
        return cls(trunc, c)

    def _match(self, other: "TruncSeries"):
        if self.trunc != other.trunc:
            raise UsageError(
                "truncation mismatch: %d vs %d" % (self.trunc, other.trunc)
            )

    def __add__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        self._match(other)
        return TruncSeries(
            self.trunc, [a + b for a, b in zip(self.coeffs, other.coeffs)]
        )

    def __sub__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        self._match(other)
        return TruncSeries(
            self.trunc, [a - b for a, b in zip(self.coeffs, other.coeffs)]
        )

    def __neg__(self):
        return TruncSeries(self.trunc, [-a for a in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, TruncSeries):
            self._match(other)
            return TruncSeries(
                self.trunc, mul_trunc(self.coeffs, other.coeffs, self.trunc)
            )
        return TruncSeries(self.trunc, [a * other for a in self.coeffs])

    def __rmul__(self, other):
        return TruncSeries(self.trunc, [other * a for a in self.coeffs])

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self.trunc == other.trunc and all(
            a == b for a, b in zip(self.coeffs, other.coeffs)
        )

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    @property
    def c0(self):
        return self.coeffs[0] if self.trunc > 0 else 0

    def valuation(self):
        """Order of the first nonzero coefficient, or None for 0."""
        for i, c in enumerate(self.coeffs):
            if c != 0:
                return i
        return None

    def is_unit(self) -> bool:
        return self.trunc > 0 and self.coeffs[0] != 0

    def inverse(self) -> "TruncSeries":
        if not self.is_unit():
            raise NotAUnit("series with zero constant term")
        inv0 = QQ(1) / self.coeffs[0]
        out = [inv0] + [0] * (self.trunc - 1)
        for k in range(1, self.trunc):
            s = 0
            for j in range(1, k + 1):
                s = s + self.coeffs[j] * out[k - j]
            out[k] = -inv0 * s
        return TruncSeries(self.trunc, out)

    def shift_down(self, k: int) -> "TruncSeries":
        """Exact division by t^k; requires valuation >= k."""
        if any(c != 0 for c in self.coeffs[:k]):
            raise UsageError("division by t^%d of a series of lower order" % k)
        return TruncSeries(self.trunc - k, self.coeffs[k:])

    def lift(self, trunc: int, tail=None) -> "TruncSeries":
        """Re-present at higher truncation; new coefficients default to 0."""
        if trunc < self.trunc:
            raise UsageError("lift to a lower truncation")
        extra = [0] * (trunc - self.trunc) if tail is None else list(tail)
        if len(extra) != trunc - self.trunc:
            raise UsageError("lift tail has wrong length")
        return TruncSeries(trunc, self.coeffs + extra)

    def cut(self, trunc: int) -> "TruncSeries":
        if trunc > self.trunc:
            raise UsageError("cut to a higher truncation")
        return TruncSeries(trunc, self.coeffs[:trunc])

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            cs = scalar_to_string(c)
            if i == 0:
                terms.append(cs)
            else:
                tp = "t" if i == 1 else "t^%d" % i
                terms.append(tp if cs == "1" else "%s*%s" % (cs, tp))
        body = " + ".join(terms) if terms else "0"
        return "(%s mod t^%d)" % (body, self.trunc)


class BiPoly:
    """Element of (K[x]/(x^xdeg))[t]/(t^trunc), dense flat grid."""

    __slots__ = ("xdeg", "trunc", "coeffs")

    def __init__(self, xdeg: int, trunc: int, coeffs=()):
        if xdeg <= 0 or trunc < 0:
            raise UsageError("bad bivariate truncation")
        self.xdeg = xdeg
        self.trunc = trunc
        self.coeffs = _pad(coeffs, xdeg * trunc)

    @classmethod
    def zero(cls, xdeg: int, trunc: int) -> "BiPoly":
        return cls(xdeg, trunc)

    @classmethod
    def one(cls, xdeg: int, trunc: int) -> "BiPoly":
        return cls.monomial(0, 0, xdeg, trunc)

    @classmethod
    def monomial(cls, e: int, k: int, xdeg: int, trunc: int, coeff=1) -> "BiPoly":
        """coeff * x^e t^k, silently zero when outside the grid."""
        c = [0] * (xdeg * trunc)
        if 0 <= e < xdeg and 0 <= k < trunc:
            c[e * trunc + k] = coeff
        return cls(xdeg, trunc, c)

    @classmethod
    def from_tseries(cls, s: TruncSeries, xdeg: int) -> "BiPoly":
        c = [0] * (xdeg * s.trunc)
        c[: s.trunc] = list(s.coeffs)
        return cls(xdeg, s.trunc, c)

    def _match(self, other: "BiPoly"):
        if self.xdeg != other.xdeg or self.trunc != other.trunc:
            raise UsageError("bivariate truncation mismatch")

    def __add__(self, other):
        if not isinstance(other, BiPoly):
            return NotImplemented
        self._match(other)
        return BiPoly(
            self.xdeg, self.trunc, [a + b for a, b in zip(self.coeffs, other.coeffs)]
        )

    def __sub__(self, other):
        if not isinstance(other, BiPoly):
            return NotImplemented
        self._match(other)
        return BiPoly(
            self.xdeg, self.trunc, [a - b for a, b in zip(self.coeffs, other.coeffs)]
        )

    def __neg__(self):
        return BiPoly(self.xdeg, self.trunc, [-a for a in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, BiPoly):
            self._match(other)
            return BiPoly(
                self.xdeg,
                self.trunc,
                mul_bitrunc(self.coeffs, other.coeffs, self.xdeg, self.trunc),
            )
        return BiPoly(self.xdeg, self.trunc, [a * other for a in self.coeffs])

    def __rmul__(self, other):
        return BiPoly(self.xdeg, self.trunc, [other * a for a in self.coeffs])

    def __eq__(self, other):
        if not isinstance(other, BiPoly):
            return NotImplemented
        return (
            self.xdeg == other.xdeg
            and self.trunc == other.trunc
            and all(a == b for a, b in zip(self.coeffs, other.coeffs))
        )

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def get(self, e: int, k: int):
        return self.coeffs[e * self.trunc + k]

    def tcoeff(self, k: int):
        """Coefficient of t^k as an x-coefficient list of length xdeg."""
        return [self.coeffs[e * self.trunc + k] for e in range(self.xdeg)]

    def restrict_c(self):
        """Restriction to the central branch: the t = 0 slice, x kept."""
        return self.tcoeff(0) if self.trunc > 0 else [0] * self.xdeg

    def t_valuation(self):
        """Smallest k with a nonzero t^k slice, or None for 0."""
        for k in range(self.trunc):
            if any(self.coeffs[e * self.trunc + k] != 0 for e in range(self.xdeg)):
                return k
        return None

    def is_unit(self) -> bool:
        return self.trunc > 0 and self.coeffs[0] != 0

    def inverse(self) -> "BiPoly":
        """Inverse when the (x^0, t^0) coefficient is nonzero."""
        if not self.is_unit():
            raise NotAUnit("bivariate element with zero constant term")
        d, n = self.xdeg, self.trunc
        a0 = self.tcoeff(0)
        inv0 = _xpoly_inverse(a0, d)
        slices = [inv0] + [None] * (n - 1)
        for k in range(1, n):
            acc = [0] * d
            for j in range(1, k + 1):
                aj = self.tcoeff(j)
                if all(c == 0 for c in aj):
                    continue
                bj = slices[k - j]
                conv = _xpoly_mul(aj, bj, d)
                acc = [p + q for p, q in zip(acc, conv)]
            slices[k] = [-c for c in _xpoly_mul(inv0, acc, d)]
        out = [0] * (d * n)
        for k, sl in enumerate(slices):
            for e in range(d):
                out[e * n + k] = sl[e]
        return BiPoly(d, n, out)

    def shift_down_t(self, k: int) -> "BiPoly":
        """Exact division by t^k; requires t-valuation >= k."""
        d, n = self.xdeg, self.trunc
        for kk in range(k):
            if any(self.coeffs[e * n + kk] != 0 for e in range(d)):
                raise UsageError("t-division below valuation")
        out = [0] * (d * (n - k))
        for e in range(d):
            out[e * (n - k) : (e + 1) * (n - k)] = self.coeffs[
                e * n + k : (e + 1) * n
            ]
        return BiPoly(d, n - k, out)

    def lift(self, trunc: int) -> "BiPoly":
        if trunc < self.trunc:
            raise UsageError("lift to a lower truncation")
        d, n = self.xdeg, self.trunc
        out = [0] * (d * trunc)
        for e in range(d):
            out[e * trunc : e * trunc + n] = self.coeffs[e * n : (e + 1) * n]
        return BiPoly(d, trunc, out)

    def cut(self, trunc: int) -> "BiPoly":
        if trunc > self.trunc:
            raise UsageError("cut to a higher truncation")
        d, n = self.xdeg, self.trunc
        out = []
        for e in range(d):
            out.extend(self.coeffs[e * n : e * n + trunc])
        return BiPoly(d, trunc, out)

    def dx(self) -> "BiPoly":
        """Partial derivative in x."""
        d, n = self.xdeg, self.trunc
        out = [0] * (d * n)
        for e in range(1, d):
            for k in range(n):
                out[(e - 1) * n + k] = e * self.coeffs[e * n + k]
        return BiPoly(d, n, out)

    def __repr__(self):
        terms = []
        for e in range(self.xdeg):
            for k in range(self.trunc):
                c = self.coeffs[e * self.trunc + k]
                if c == 0:
                    continue
                mono = []
                if e:
                    mono.append("x" if e == 1 else "x^%d" % e)
                if k:
                    mono.append("t" if k == 1 else "t^%d" % k)
                cs = scalar_to_string(c)
                if not mono:
                    terms.append(cs)
                elif cs == "1":
                    terms.append("*".join(mono))
                else:
                    terms.append(cs + "*" + "*".join(mono))
        body = " + ".join(terms) if terms else "0"
        return "(%s mod x^%d, t^%d)" % (body, self.xdeg, self.trunc)


def _xpoly_mul(a, b, d):
    out = [0] * d
    for i in range(d):
        if a[i] == 0:
            continue
        for j in range(d - i):
            if b[j] != 0:
                out[i + j] = out[i + j] + a[i] * b[j]
    return out


def _xpoly_inverse(a, d):
    if a[0] == 0:
        raise NotAUnit("x-polynomial with zero constant term")
    inv0 = QQ(1) / a[0]
    out = [inv0] + [0] * (d - 1)
    for k in range(1, d):
        s = 0
        for j in range(1, k + 1):
            s = s + a[j] * out[k - j]
        out[k] = -inv0 * s
    return out


class MultiGerm:
    """Tuple of one series per branch; the basic element of every model."""

    __slots__ = ("parts",)

    def __init__(self, parts):
        self.parts = tuple(parts)
        if not self.parts:
            raise UsageError("empty germ")

    @classmethod
    def diagonal(cls, coeffs, levels, xdeg=None) -> "MultiGerm":
        """The same t-only polynomial on every branch."""
        parts = []
        for q in levels:
            s = TruncSeries(q, [coeffs[i] if i < len(coeffs) else 0 for i in range(q)])
            parts.append(s if xdeg is None else BiPoly.from_tseries(s, xdeg))
        return cls(parts)

    def __len__(self):
        return len(self.parts)

    def __getitem__(self, i):
        return self.parts[i]

    def __add__(self, other):
        if not isinstance(other, MultiGerm):
            return NotImplemented
        return MultiGerm([a + b for a, b in zip(self.parts, other.parts)])

    def __sub__(self, other):
        if not isinstance(other, MultiGerm):
            return NotImplemented
        return MultiGerm([a - b for a, b in zip(self.parts, other.parts)])

    def __neg__(self):
        return MultiGerm([-a for a in self.parts])

    def __mul__(self, other):
        if isinstance(other, MultiGerm):
            return MultiGerm([a * b for a, b in zip(self.parts, other.parts)])
        return MultiGerm([a * other for a in self.parts])

    def __rmul__(self, other):
        return MultiGerm([other * a for a in self.parts])

    def __eq__(self, other):
        if not isinstance(other, MultiGerm):
            return NotImplemented
        return len(self.parts) == len(other.parts) and all(
            a == b for a, b in zip(self.parts, other.parts)
        )

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.parts)

    def __repr__(self):
        return "MultiGerm(%s)" % ", ".join(repr(p) for p in self.parts)
