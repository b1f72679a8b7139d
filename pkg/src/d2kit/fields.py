"""Exact scalar fields: arbitrary-precision rationals and prime fields.

Rational scalars are gmpy2.mpq values (always reduced, positive denominator);
prime-field scalars are FpScalar residues in [0, p).  Every other module is
generic over a Field object and never touches raw scalar internals.
"""

from __future__ import annotations

from fractions import Fraction

try:
    from gmpy2 import mpq
except ImportError:  # pragma: no cover
    mpq = Fraction


class FieldError(ValueError):
    pass


class FpScalar:
    """Residue in [0, p).  Supports field arithmetic with ints and FpScalars."""

    __slots__ = ("v", "p")

    def __init__(self, v, p):
        self.v = int(v) % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, FpScalar):
            if other.p != self.p:
                raise FieldError("mixing residues mod %d and mod %d" % (self.p, other.p))
            return other.v
        if isinstance(other, int):
            return other % self.p
        return None

    def __add__(self, other):
        w = self._coerce(other)
        if w is None:
            return NotImplemented
        return FpScalar(self.v + w, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        w = self._coerce(other)
        if w is None:
            return NotImplemented
        return FpScalar(self.v - w, self.p)

    def __rsub__(self, other):
        w = self._coerce(other)
        if w is None:
            return NotImplemented
        return FpScalar(w - self.v, self.p)

    def __mul__(self, other):
        w = self._coerce(other)
        if w is None:
            return NotImplemented
        return FpScalar(self.v * w, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        w = self._coerce(other)
        if w is None:
            return NotImplemented
        if w == 0:
            raise ZeroDivisionError("division by zero in F_%d" % self.p)
        return FpScalar(self.v * pow(w, -1, self.p), self.p)

    def __rtruediv__(self, other):
        w = self._coerce(other)
        if w is None:
            return NotImplemented
        if self.v == 0:
            raise ZeroDivisionError("division by zero in F_%d" % self.p)
        return FpScalar(w * pow(self.v, -1, self.p), self.p)

    def __neg__(self):
        return FpScalar(-self.v, self.p)

    def __eq__(self, other):
        if isinstance(other, FpScalar):
            return self.p == other.p and self.v == other.v
        if isinstance(other, int):
            return self.v == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return "%d" % self.v


def _is_prime(n):
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class RationalField:
    """The field of rationals.  Elements are gmpy2.mpq (or Fraction fallback)."""

    name = "Q"
    char = 0

    def __init__(self):
        self.zero = mpq(0)
        self.one = mpq(1)

    def of(self, v):
        """Coerce an int, string 'p/q', Fraction or mpq into a scalar."""
        if isinstance(v, (int, Fraction)) or type(v) is type(self.zero):
            return mpq(v)
        if isinstance(v, str):
            return self.parse(v)
        raise FieldError("cannot coerce %r into Q" % (v,))

    def parse(self, s):
        s = s.strip()
        if "/" in s:
            num, den = s.split("/")
            return mpq(int(num), int(den))
        return mpq(int(s))

    def fmt(self, x):
        if x.denominator == 1:
            return str(x.numerator)
        return "%d/%d" % (x.numerator, x.denominator)

    def to_json(self, x):
        return self.fmt(x)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "Q"


class PrimeField:
    """The field F_p of residues modulo a prime p."""

    char = None

    def __init__(self, p):
        if not _is_prime(p):
            raise FieldError("%d is not prime" % p)
        self.p = p
        self.char = p
        self.name = "Fp:%d" % p
        self.zero = FpScalar(0, p)
        self.one = FpScalar(1, p)

    def of(self, v):
        if isinstance(v, FpScalar):
            if v.p != self.p:
                raise FieldError("residue mod %d used in F_%d" % (v.p, self.p))
            return v
        if isinstance(v, int):
            return FpScalar(v, self.p)
        if isinstance(v, str):
            return self.parse(v)
        if isinstance(v, Fraction) or type(v) is type(mpq(0)):
            num = int(v.numerator) % self.p
            den = int(v.denominator) % self.p
            if den == 0:
                raise FieldError("denominator divisible by %d" % self.p)
            return FpScalar(num * pow(den, -1, self.p), self.p)
        raise FieldError("cannot coerce %r into F_%d" % (v, self.p))

    def parse(self, s):
        s = s.strip()
        if "/" in s:
            num, den = s.split("/")
            return self.of(Fraction(int(num), int(den)))
        return FpScalar(int(s), self.p)

    def fmt(self, x):
        return str(x.v)

    def to_json(self, x):
        return x.v

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))

    def __repr__(self):
        return self.name


QQ = RationalField()

_fp_cache = {}


def GF(p):
    """Prime field with interned instances, so GF(7) is GF(7)."""
    if p not in _fp_cache:
        _fp_cache[p] = PrimeField(p)
    return _fp_cache[p]


def field_from_name(name):
    """Inverse of Field.name: 'Q' or 'Fp:<p>'."""
    if name == "Q":
        return QQ
    if name.startswith("Fp:"):
        return GF(int(name[3:]))
    raise FieldError("unknown field %r" % name)
