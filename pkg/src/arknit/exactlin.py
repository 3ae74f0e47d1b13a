"""Exact scalars and dense linear algebra over the rationals and prime fields.

Scalars are plain Python values: `fractions.Fraction` for the rational field
(always in lowest terms with positive denominator, which Fraction guarantees)
and ints in ``[0, p)`` for a prime field.  A `Field` object supplies the
arithmetic and the string encoding, so matrices never mix fields silently.

All elimination routines return the reduced row echelon form, which is unique
for a given matrix; every basis produced here (kernels, solutions) is
therefore deterministic.  Rational elimination clears denominators and works
on primitive integer rows, dividing out gcds as it goes, so no rounding path
exists anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


class ExactLinError(Exception):
    """Base class for linear-algebra errors."""


class DimensionMismatchError(ExactLinError):
    pass


class FieldMismatchError(ExactLinError):
    pass


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


class Field:
    """Arithmetic and serialization for one scalar domain."""

    kind = "abstract"

    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def from_int(self, n: int):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def format(self, a) -> str:
        raise NotImplementedError

    def parse(self, s: str):
        raise NotImplementedError

    @property
    def characteristic_zero(self) -> bool:
        return self.kind == "rational"


class RationalField(Field):
    kind = "rational"

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def from_int(self, n: int):
        return Fraction(n)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(a)

    def format(self, a) -> str:
        return str(Fraction(a))

    def parse(self, s: str):
        return Fraction(s)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("rational")

    def __repr__(self):
        return "QQ"


class PrimeField(Field):
    kind = "prime"

    def __init__(self, p: int):
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p

    def zero(self):
        return 0

    def one(self):
        return 1 % self.p

    def from_int(self, n: int):
        return n % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.p - 2, self.p)

    def format(self, a) -> str:
        return str(a % self.p)

    def parse(self, s: str):
        return int(s) % self.p

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("prime", self.p))

    def __repr__(self):
        return f"GF({self.p})"


QQ = RationalField()


def field_from_str(s: str) -> Field:
    """Parse a session field spec: "rational" or "prime:P"."""
    if s == "rational":
        return QQ
    if s.startswith("prime:"):
        return PrimeField(int(s.split(":", 1)[1]))
    raise ValueError(f"unknown field spec {s!r}")


def field_to_str(f: Field) -> str:
    return "rational" if f.kind == "rational" else f"prime:{f.p}"


class Mat:
    """A dense matrix over one field.  Treated as immutable after construction.

    The shape is tracked explicitly so zero-row and zero-column matrices keep
    their dimensions (kernels and ranks of empty maps matter here)."""

    __slots__ = ("rows", "cols", "field", "data")

    def __init__(self, field: Field, data, shape: tuple | None = None):
        self.field = field
        self.data = tuple(tuple(row) for row in data)
        rows = len(self.data)
        cols = len(self.data[0]) if rows else 0
        if shape is not None:
            if rows and (rows, cols) != tuple(shape):
                raise DimensionMismatchError("data does not match declared shape")
            rows, cols = shape
        self.rows = rows
        self.cols = cols
        for row in self.data:
            if len(row) != self.cols:
                raise DimensionMismatchError("ragged rows")

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "Mat":
        z = field.zero()
        return cls(field, [[z] * cols for _ in range(rows)], shape=(rows, cols))

    @classmethod
    def identity(cls, field: Field, n: int) -> "Mat":
        z, o = field.zero(), field.one()
        return cls(field, [[o if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def from_ints(cls, field: Field, data) -> "Mat":
        return cls(field, [[field.from_int(x) for x in row] for row in data])

    @classmethod
    def column(cls, field: Field, entries) -> "Mat":
        entries = list(entries)
        return cls(field, [[e] for e in entries], shape=(len(entries), 1))

    def __getitem__(self, rc):
        r, c = rc
        return self.data[r][c]

    def __eq__(self, other):
        return (
            isinstance(other, Mat)
            and self.field == other.field
            and self.data == other.data
        )

    def __hash__(self):
        return hash((self.field, self.data))

    def __repr__(self):
        return f"Mat({self.rows}x{self.cols}, {self.field!r})"

    def is_zero(self) -> bool:
        z = self.field.zero()
        return all(x == z for row in self.data for x in row)

    def transpose(self) -> "Mat":
        return Mat(
            self.field,
            [[self.data[r][c] for r in range(self.rows)] for c in range(self.cols)],
            shape=(self.cols, self.rows),
        )

    def add(self, other: "Mat") -> "Mat":
        _check_same_field(self, other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatchError("shape mismatch in add")
        f = self.field
        return Mat(
            f,
            [[f.add(a, b) for a, b in zip(ra, rb)] for ra, rb in zip(self.data, other.data)],
            shape=(self.rows, self.cols),
        )

    def sub(self, other: "Mat") -> "Mat":
        _check_same_field(self, other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatchError("shape mismatch in sub")
        f = self.field
        return Mat(
            f,
            [[f.sub(a, b) for a, b in zip(ra, rb)] for ra, rb in zip(self.data, other.data)],
            shape=(self.rows, self.cols),
        )

    def scale(self, c) -> "Mat":
        f = self.field
        return Mat(f, [[f.mul(c, x) for x in row] for row in self.data], shape=(self.rows, self.cols))

    def column_vectors(self):
        return [
            Mat(self.field, [[self.data[r][c]] for r in range(self.rows)], shape=(self.rows, 1))
            for c in range(self.cols)
        ]

    def flat(self):
        return [x for row in self.data for x in row]

    def to_strings(self):
        return [[self.field.format(x) for x in row] for row in self.data]

    @classmethod
    def from_strings(cls, field: Field, data) -> "Mat":
        return cls(field, [[field.parse(x) for x in row] for row in data])


def _check_same_field(a: Mat, b: Mat):
    if a.field != b.field:
        raise FieldMismatchError(f"mixed fields {a.field!r} and {b.field!r}")


def mat_mul(a: Mat, b: Mat) -> Mat:
    """Exact matrix product."""
    _check_same_field(a, b)
    if a.cols != b.rows:
        raise DimensionMismatchError(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    f = a.field
    if a.rows == 0 or b.cols == 0:
        return Mat.zeros(f, a.rows, b.cols)
    zero = f.zero()
    if a.cols == 0:
        return Mat.zeros(f, a.rows, b.cols)
    bt = list(zip(*b.data))
    out = []
    for row in a.data:
        out_row = []
        for col in bt:
            acc = zero
            for x, y in zip(row, col):
                if x != zero and y != zero:
                    acc = f.add(acc, f.mul(x, y))
            out_row.append(acc)
        out.append(out_row)
    return Mat(f, out, shape=(a.rows, b.cols))


def _strip_gcd(row):
    g = 0
    for x in row:
        if x:
            g = gcd(g, abs(x))
            if g == 1:
                return row
    if g > 1:
        return [x // g for x in row]
    return row


def _rref_rational(data):
    """RREF of a Fraction matrix via primitive-integer row elimination.

    Returns (rows of Fractions, pivot column list).
    """
    nrows = len(data)
    ncols = len(data[0]) if nrows else 0
    rows = []
    for frow in data:
        denom_lcm = 1
        for x in frow:
            d = x.denominator
            denom_lcm = denom_lcm * d // gcd(denom_lcm, d)
        rows.append(_strip_gcd([int(x * denom_lcm) for x in frow]))
    pivots = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, nrows):
            if rows[i][c]:
                pr = i
                break
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        pv = rows[r][c]
        for i in range(r + 1, nrows):
            x = rows[i][c]
            if x:
                ri, rr = rows[i], rows[r]
                rows[i] = _strip_gcd([ri[j] * pv - rr[j] * x for j in range(ncols)])
        pivots.append(c)
        r += 1
    # back-substitution, still over the integers
    for k in range(len(pivots) - 1, -1, -1):
        c = pivots[k]
        pv = rows[k][c]
        for i in range(k):
            x = rows[i][c]
            if x:
                ri, rk = rows[i], rows[k]
                rows[i] = _strip_gcd([ri[j] * pv - rk[j] * x for j in range(ncols)])
    out = []
    for k in range(len(pivots)):
        pv = rows[k][pivots[k]]
        out.append([Fraction(x, pv) for x in rows[k]])
    zero_row = [Fraction(0)] * ncols
    for _ in range(nrows - len(pivots)):
        out.append(list(zero_row))
    return out, pivots


def _rref_prime(data, p: int):
    nrows = len(data)
    ncols = len(data[0]) if nrows else 0
    rows = [list(row) for row in data]
    pivots = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, nrows):
            if rows[i][c] % p:
                pr = i
                break
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = pow(rows[r][c], p - 2, p)
        rows[r] = [(x * inv) % p for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c]:
                x = rows[i][c]
                rr = rows[r]
                rows[i] = [(rows[i][j] - x * rr[j]) % p for j in range(ncols)]
        pivots.append(c)
        r += 1
    ordered = rows[: len(pivots)] + [[0] * ncols for _ in range(nrows - len(pivots))]
    return ordered, pivots


def rref(a: Mat):
    """Reduced row echelon form of `a` together with its pivot columns."""
    if a.rows == 0 or a.cols == 0:
        return a, []
    if a.field.kind == "rational":
        rows, pivots = _rref_rational([list(r) for r in a.data])
    else:
        rows, pivots = _rref_prime([list(r) for r in a.data], a.field.p)
    return Mat(a.field, rows), pivots


def rank(a: Mat) -> int:
    """Rank over the matrix's field; rank + kernel dimension == cols."""
    _, pivots = rref(a)
    return len(pivots)


def kernel_basis(a: Mat):
    """Canonical basis of the right null space, as a list of column vectors.

    The vectors come from the unique RREF: one per free column, with entry 1
    there and the negated reduced entries at the pivot positions, so the
    output is deterministic.
    """
    f = a.field
    if a.cols == 0:
        return []
    if a.rows == 0:
        return [Mat.column(f, [f.one() if i == j else f.zero() for i in range(a.cols)]) for j in range(a.cols)]
    r, pivots = rref(a)
    pivot_set = set(pivots)
    basis = []
    for free in range(a.cols):
        if free in pivot_set:
            continue
        v = [f.zero()] * a.cols
        v[free] = f.one()
        for i, pc in enumerate(pivots):
            v[pc] = f.neg(r[i, free])
        basis.append(Mat.column(f, v))
    return basis


def solve(a: Mat, b: Mat):
    """A particular solution X of aX = b, or None when inconsistent.

    Free variables are set to zero, so the answer is deterministic.
    """
    _check_same_field(a, b)
    if a.rows != b.rows:
        raise DimensionMismatchError("row count mismatch in solve")
    f = a.field
    if b.cols == 0:
        return Mat.zeros(f, a.cols, 0)
    if a.cols == 0:
        return None if not b.is_zero() else Mat.zeros(f, 0, b.cols)
    aug = Mat(f, [list(ra) + list(rb) for ra, rb in zip(a.data, b.data)])
    r, pivots = rref(aug)
    if any(p >= a.cols for p in pivots):
        return None
    x = [[f.zero()] * b.cols for _ in range(a.cols)]
    for i, pc in enumerate(pivots):
        for j in range(b.cols):
            x[pc][j] = r[i, a.cols + j]
    return Mat(f, x)


class RowSpan:
    """Incrementally maintained row space used for spans and membership tests.

    Rows are kept in echelon form (pivot-normalized), so `dim` is exact and
    `contains` is a pure reduction.  The basis depends on insertion order but
    the span and its dimension do not.
    """

    def __init__(self, field: Field, width: int):
        self.field = field
        self.width = width
        self.rows = []  # list of (pivot index, row list)

    def _reduce(self, vec):
        f = self.field
        v = list(vec)
        zero = f.zero()
        for pc, row in self.rows:
            x = v[pc]
            if x != zero:
                for j in range(pc, self.width):
                    v[j] = f.sub(v[j], f.mul(x, row[j]))
        return v

    def insert(self, vec) -> bool:
        """Insert a vector; returns True when it enlarged the span."""
        f = self.field
        v = self._reduce(vec)
        zero = f.zero()
        pc = next((j for j, x in enumerate(v) if x != zero), None)
        if pc is None:
            return False
        inv = f.inv(v[pc])
        row = [f.mul(inv, x) for x in v]
        self.rows.append((pc, row))
        self.rows.sort(key=lambda t: t[0])
        return True

    def contains(self, vec) -> bool:
        zero = self.field.zero()
        return all(x == zero for x in self._reduce(vec))

    @property
    def dim(self) -> int:
        return len(self.rows)
