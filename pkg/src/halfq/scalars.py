"""Exact rational scalars and symmetric q-numbers.

All arithmetic in this package is exact: scalars are arbitrary-precision
rationals kept in canonical form (positive denominator, gcd 1).  gmpy2's mpq
is used when available, with fractions.Fraction as a drop-in fallback; both
satisfy the same canonical-form contract and print as "p/q" or "p".
"""

from dataclasses import dataclass

from .errors import AdmissibilityError, InvalidParameterError

try:
    from gmpy2 import mpq as _ratimpl
except ImportError:  # pragma: no cover - gmpy2 is installed in normal setups
    from fractions import Fraction as _ratimpl

ZERO = _ratimpl(0)
ONE = _ratimpl(1)


def rat(x, y=None):
    """Build an exact rational from ints, strings like "p/q", or rationals."""
    if y is not None:
        if y == 0:
            raise InvalidParameterError("zero denominator")
        return _ratimpl(x, y)
    if isinstance(x, float):
        raise InvalidParameterError("refusing float %r; pass an exact rational" % x)
    try:
        return _ratimpl(x)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise InvalidParameterError("not a rational: %r" % (x,)) from exc


def parse_rational(s):
    """Parse the canonical "p/q" (or "p") string form."""
    if not isinstance(s, str):
        raise InvalidParameterError("expected string, got %r" % (s,))
    return rat(s.strip())


def format_rational(x):
    """Canonical string form, round-trips through parse_rational."""
    return str(x)


@dataclass(frozen=True)
class DeformationParam:
    """Nonzero rational deformation parameter q."""

    q: object

    def __post_init__(self):
        object.__setattr__(self, "q", rat(self.q))
        if self.q == 0:
            raise InvalidParameterError("deformation parameter must be nonzero")


def _qval(q):
    if isinstance(q, DeformationParam):
        return q.q
    qv = rat(q)
    if qv == 0:
        raise InvalidParameterError("deformation parameter must be nonzero")
    return qv


def q_number(j, q):
    """Symmetric q-analogue of the integer j >= 0.

    j_q = q^(j-1) + q^(j-3) + ... + q^(1-j); the empty sum at j = 0 is 0.
    """
    if not isinstance(j, int) or j < 0:
        raise InvalidParameterError("j must be a nonnegative integer, got %r" % (j,))
    qv = _qval(q)
    total = ZERO
    for i in range(j):
        total += qv ** (j - 1 - 2 * i)
    return total


def is_q_admissible(j, q):
    """True when k_q is nonzero for every 1 <= k <= j."""
    qv = _qval(q)
    return all(q_number(k, qv) != 0 for k in range(1, j + 1))


def require_admissible(j, q):
    """Raise AdmissibilityError naming the first vanishing q-number."""
    qv = _qval(q)
    for k in range(1, j + 1):
        if q_number(k, qv) == 0:
            raise AdmissibilityError("%d_q vanishes at q=%s" % (k, qv))
