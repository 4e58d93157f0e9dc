"""Exact rational scalars.

Every computation in the package runs over the rationals.  gmpy2's mpq is
used when present (it is several times faster than Fraction on the row
reductions that dominate run time); the stdlib Fraction is the fallback.
Both types interoperate with int and compare exactly, so the rest of the
code never needs to know which backend is active.
"""

from __future__ import annotations

import os
from fractions import Fraction

if os.environ.get("STARFORGE_PURE"):
    _impl = "fraction"
else:
    try:
        from gmpy2 import mpq as _mpq

        _impl = "gmpy2"
    except ImportError:
        _impl = "fraction"

if _impl == "gmpy2":

    def QQ(num=0, den=1):
        return _mpq(num, den)

else:

    def QQ(num=0, den=1):
        return Fraction(num, den)


ZERO = QQ(0)
ONE = QQ(1)

BACKEND = _impl


def is_zero(a) -> bool:
    return a == 0


def scalar_from_string(s: str):
    """Parse "num" or "num/den" into an exact rational."""
    from .errors import UsageError

    s = s.strip()
    try:
        if "/" in s:
            num, den = s.split("/", 1)
            d = int(den)
            if d == 0:
                raise UsageError("zero denominator in %r" % s)
            return QQ(int(num), d)
        return QQ(int(s))
    except ValueError:
        raise UsageError("not a rational: %r" % s) from None


def scalar_to_string(a) -> str:
    """Format an exact rational as "num" or "num/den" (canonical, no floats)."""
    num, den = a.numerator, a.denominator
    if den == 1:
        return str(num)
    return "%d/%d" % (num, den)
