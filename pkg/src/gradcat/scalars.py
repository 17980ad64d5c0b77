"""Exact ground fields and the small amount of linear algebra built on them.

Two fields are supported: the rationals (``Fraction``) and prime fields
(``ModP``).  All routines below only use ``+ - * /`` and truth testing, so
they work for either kind of scalar.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import NotPrime


class ModP:
    """Residue class modulo a prime ``p``."""

    __slots__ = ("value", "p")

    def __init__(self, value, p):
        self.value = value % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, ModP):
            if other.p != self.p:
                raise ValueError("mixing residues modulo different primes")
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else ModP(self.value + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else ModP(self.value - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else ModP(o - self.value, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else ModP(self.value * o, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o % self.p == 0:
            raise ZeroDivisionError("division by zero in F_%d" % self.p)
        return ModP(self.value * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, other):
        return ModP(other, self.p) / self

    def __neg__(self):
        return ModP(-self.value, self.p)

    def __bool__(self):
        return self.value != 0

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return (self.value - o) % self.p == 0

    def __hash__(self):
        return hash((self.value, self.p))

    def __repr__(self):
        return "%d (mod %d)" % (self.value, self.p)

    def __str__(self):
        return str(self.value)


def _is_prime(n):
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class Field:
    """Ground field: rationals when ``char == 0``, otherwise ``F_char``."""

    char: int = 0

    def __post_init__(self):
        if self.char != 0 and not _is_prime(self.char):
            raise NotPrime("field characteristic %r is not prime" % (self.char,))

    @classmethod
    def rationals(cls):
        return cls(0)

    @classmethod
    def prime(cls, p):
        return cls(p)

    def __call__(self, x):
        if isinstance(x, str):
            x = Fraction(x.strip())
        if self.char == 0:
            if isinstance(x, ModP):
                raise ValueError("cannot coerce a residue into Q")
            return Fraction(x)
        if isinstance(x, ModP):
            return ModP(x.value, self.char)
        x = Fraction(x)
        if x.denominator % self.char == 0:
            raise ZeroDivisionError("denominator vanishes in F_%d" % self.char)
        return ModP(x.numerator * pow(x.denominator, -1, self.char), self.char)

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def __str__(self):
        return "Q" if self.char == 0 else "F_%d" % self.char


# --- linear algebra over an exact field -------------------------------------
# Vectors are lists of scalars, matrices are lists of rows.


def rref(rows, ncols):
    """Reduced row echelon form.

    Returns ``(basis, pivots)``: nonzero rows of the RREF and their pivot
    columns (strictly increasing).  Pivots are taken at the first usable
    column, so the result only depends on the row space and column order.
    """
    m = [list(r) for r in rows if any(r)]
    pivots = []
    r = 0
    for c in range(ncols):
        if r == len(m):
            break
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def reduce_vector(vec, basis, pivots):
    """Subtract the echelon basis so that ``vec`` vanishes on all pivots."""
    v = list(vec)
    for row, c in zip(basis, pivots):
        if v[c]:
            f = v[c]
            v = [a - f * b for a, b in zip(v, row)]
    return v


def rank(rows, ncols):
    return len(rref(rows, ncols)[1])


def identity_matrix(n, one=1):
    zero = one - one
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def mat_vec(matrix, vec):
    return [sum((a * b for a, b in zip(row, vec)), 0) for row in matrix]


def mat_mul(a, b):
    if not a:
        return []
    inner = len(b)
    ncols = len(b[0]) if b else 0
    out = []
    for row in a:
        out.append([sum((row[k] * b[k][j] for k in range(inner)), 0) for j in range(ncols)])
    return out


def transpose(matrix, nrows_if_empty=0):
    if not matrix:
        return [[] for _ in range(nrows_if_empty)]
    return [list(col) for col in zip(*matrix)]


def inverse(matrix, field):
    """Inverse of a square matrix, or ``None`` when it is singular."""
    n = len(matrix)
    aug = [list(matrix[i]) + identity_matrix(n, field.one)[i] for i in range(n)]
    red, piv = rref(aug, 2 * n)
    if piv[:n] != list(range(n)) or len(red) < n:
        return None
    return [row[n:] for row in red]


def solve(columns, target, field):
    """Coefficients ``c`` with ``sum(c_i * columns[i]) == target``, or None."""
    n = len(columns)
    dim = len(target)
    aug = [[columns[j][i] for j in range(n)] + [target[i]] for i in range(dim)]
    red, piv = rref(aug, n + 1)
    if n in piv:
        return None
    c = [field.zero] * n
    for row, p in zip(red, piv):
        c[p] = row[n]
    return c
