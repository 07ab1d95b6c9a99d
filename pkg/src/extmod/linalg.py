"""Exact dense linear algebra over prime fields and the rationals.

Matrices carry their field and keep every entry in canonical reduced form:
the least non-negative residue mod p, or a ``Fraction`` in lowest terms when
the characteristic is 0.  Subspaces are stored as bases in reduced
column-echelon form, which is unique per subspace, so subspace equality is
plain equality of basis matrices.  No floating point is used anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class Field:
    """F_p for a prime p, or the rational numbers when characteristic is 0.

    Elements are plain ints in ``[0, p)`` for prime characteristic and
    ``Fraction`` values in characteristic 0.
    """

    characteristic: int

    def __post_init__(self) -> None:
        p = self.characteristic
        if p != 0 and not _is_prime(p):
            raise ValueError(f"characteristic must be 0 or a prime, got {p}")

    @property
    def zero(self):
        return 0 if self.characteristic else Fraction(0)

    @property
    def one(self):
        return 1 if self.characteristic else Fraction(1)

    def coerce(self, value):
        """Reduce an integer (or exact rational) to canonical form."""
        p = self.characteristic
        if p == 0:
            return Fraction(value)
        if isinstance(value, Fraction):
            if value.denominator % p == 0:
                raise ZeroDivisionError(f"denominator not invertible mod {p}")
            return value.numerator * pow(value.denominator, -1, p) % p
        return int(value) % p

    def add(self, a, b):
        p = self.characteristic
        return (a + b) % p if p else a + b

    def sub(self, a, b):
        p = self.characteristic
        return (a - b) % p if p else a - b

    def mul(self, a, b):
        p = self.characteristic
        return (a * b) % p if p else a * b

    def neg(self, a):
        p = self.characteristic
        return (-a) % p if p else -a

    def inv(self, a):
        p = self.characteristic
        if p:
            return pow(a, -1, p)
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return Fraction(1) / a

    def format_scalar(self, a) -> str:
        if self.characteristic:
            return str(a)
        f = Fraction(a)
        return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"

    def parse_scalar(self, token: str):
        token = token.strip()
        if "/" in token:
            if self.characteristic:
                raise ValueError(f"fractional coefficient {token!r} in prime characteristic")
            num, den = token.split("/", 1)
            return Fraction(int(num), int(den))
        return self.coerce(int(token))


QQ = Field(0)
GF2 = Field(2)


def _row_reduce(field: Field, rows: list[list], n_pivot_cols: int) -> list[int]:
    """In-place reduced row echelon over the first n_pivot_cols columns.

    Row operations always apply to the full row width, so callers can append
    augmented columns.  Returns the pivot column indices.
    """
    p = field.characteristic
    m = len(rows)
    n = len(rows[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(min(n_pivot_cols, n)):
        pr = None
        for i in range(r, m):
            if rows[i][c]:
                pr = i
                break
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        a = rows[r][c]
        if a != field.one:
            inv = field.inv(a)
            if p:
                rows[r] = [(x * inv) % p for x in rows[r]]
            else:
                rows[r] = [x * inv for x in rows[r]]
        top = rows[r]
        for i in range(m):
            if i != r and rows[i][c]:
                f = rows[i][c]
                if p:
                    rows[i] = [(x - f * y) % p for x, y in zip(rows[i], top)]
                else:
                    rows[i] = [x - f * y for x, y in zip(rows[i], top)]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return pivots


class Matrix:
    """Immutable dense matrix over a :class:`Field`.

    Acts on column vectors (plain tuples): ``m.apply(v)`` computes ``m @ v``.
    """

    __slots__ = ("field", "nrows", "ncols", "rows")

    def __init__(self, field: Field, rows, ncols: int | None = None, _raw: bool = False):
        self.field = field
        if _raw:
            self.rows = rows
        else:
            self.rows = tuple(tuple(field.coerce(x) for x in row) for row in rows)
        self.nrows = len(self.rows)
        if self.nrows:
            self.ncols = len(self.rows[0])
            if any(len(r) != self.ncols for r in self.rows):
                raise ValueError("ragged rows")
            if ncols is not None and ncols != self.ncols:
                raise ValueError("ncols does not match row length")
        else:
            if ncols is None:
                raise ValueError("empty matrix needs an explicit column count")
            self.ncols = ncols

    # -- constructors --------------------------------------------------------

    @classmethod
    def zeros(cls, field: Field, nrows: int, ncols: int) -> "Matrix":
        z = field.zero
        return cls(field, tuple((z,) * ncols for _ in range(nrows)), ncols=ncols, _raw=True)

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        z, o = field.zero, field.one
        rows = tuple(tuple(o if i == j else z for j in range(n)) for i in range(n))
        return cls(field, rows, ncols=n, _raw=True)

    @classmethod
    def from_rows(cls, field: Field, rows, ncols: int | None = None) -> "Matrix":
        return cls(field, rows, ncols=ncols)

    @classmethod
    def from_cols(cls, field: Field, cols, nrows: int | None = None) -> "Matrix":
        cols = [tuple(field.coerce(x) for x in col) for col in cols]
        if cols:
            nrows = len(cols[0])
            return cls(field, tuple(zip(*cols)), ncols=len(cols), _raw=True)
        if nrows is None:
            raise ValueError("empty column list needs an explicit row count")
        return cls.zeros(field, nrows, 0)

    @classmethod
    def column(cls, field: Field, vec) -> "Matrix":
        return cls.from_cols(field, [tuple(vec)])

    # -- basic structure -----------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def row(self, i) -> tuple:
        return self.rows[i]

    def col(self, j) -> tuple:
        return tuple(r[j] for r in self.rows)

    def cols(self) -> list[tuple]:
        return [self.col(j) for j in range(self.ncols)]

    def transpose(self) -> "Matrix":
        if self.nrows == 0 or self.ncols == 0:
            return Matrix.zeros(self.field, self.ncols, self.nrows)
        return Matrix(self.field, tuple(zip(*self.rows)), ncols=self.nrows, _raw=True)

    def is_zero(self) -> bool:
        return all(not x for row in self.rows for x in row)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.field == other.field and self.shape == other.shape
                and self.rows == other.rows)

    def __hash__(self) -> int:
        return hash((self.field, self.ncols, self.rows))

    def __repr__(self) -> str:
        return f"Matrix({self.field.characteristic}, {self.nrows}x{self.ncols})"

    # -- arithmetic ------------------------------------------------------------

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        p = self.field.characteristic
        bcols = other.cols()
        if p:
            rows = tuple(
                tuple(sum(a * b for a, b in zip(arow, bcol)) % p for bcol in bcols)
                for arow in self.rows)
        else:
            rows = tuple(
                tuple(sum((a * b for a, b in zip(arow, bcol)), Fraction(0)) for bcol in bcols)
                for arow in self.rows)
        return Matrix(self.field, rows, ncols=other.ncols, _raw=True)

    def apply(self, vec) -> tuple:
        if len(vec) != self.ncols:
            raise ValueError("vector length mismatch")
        p = self.field.characteristic
        if p:
            return tuple(sum(a * b for a, b in zip(row, vec)) % p for row in self.rows)
        return tuple(sum((a * b for a, b in zip(row, vec)), Fraction(0)) for row in self.rows)

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        f = self.field
        rows = tuple(tuple(f.add(a, b) for a, b in zip(r1, r2))
                     for r1, r2 in zip(self.rows, other.rows))
        return Matrix(f, rows, ncols=self.ncols, _raw=True)

    def __sub__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        f = self.field
        rows = tuple(tuple(f.sub(a, b) for a, b in zip(r1, r2))
                     for r1, r2 in zip(self.rows, other.rows))
        return Matrix(f, rows, ncols=self.ncols, _raw=True)

    def scaled(self, c) -> "Matrix":
        f = self.field
        c = f.coerce(c)
        rows = tuple(tuple(f.mul(c, x) for x in row) for row in self.rows)
        return Matrix(f, rows, ncols=self.ncols, _raw=True)

    def __neg__(self) -> "Matrix":
        return self.scaled(self.field.neg(self.field.one))

    def power(self, k: int) -> "Matrix":
        if self.nrows != self.ncols:
            raise ValueError("power of a non-square matrix")
        out = Matrix.identity(self.field, self.nrows)
        for _ in range(k):
            out = out @ self
        return out

    # -- elimination ----------------------------------------------------------

    def rref_pivots(self) -> tuple["Matrix", tuple[int, ...]]:
        rows = [list(r) for r in self.rows]
        piv = _row_reduce(self.field, rows, self.ncols)
        return Matrix(self.field, tuple(tuple(r) for r in rows),
                      ncols=self.ncols, _raw=True), tuple(piv)

    def rref(self) -> "Matrix":
        """Reduced row-echelon form (canonical for the row space)."""
        return self.rref_pivots()[0]

    def rank(self) -> int:
        return len(self.rref_pivots()[1])

    def kernel_matrix(self) -> "Matrix":
        """Columns span the null space {v : self @ v = 0}."""
        red, piv = self.rref_pivots()
        free = [c for c in range(self.ncols) if c not in piv]
        f = self.field
        cols = []
        for fc in free:
            v = [f.zero] * self.ncols
            v[fc] = f.one
            for i, pc in enumerate(piv):
                v[pc] = f.neg(red[i, fc])
            cols.append(tuple(v))
        return Matrix.from_cols(f, cols, nrows=self.ncols)

    def solve(self, rhs: "Matrix") -> "Matrix | None":
        """A particular solution X of self @ X = rhs, or None if inconsistent."""
        if rhs.nrows != self.nrows:
            raise ValueError("rhs row count mismatch")
        n = self.ncols
        aug = [list(r1) + list(r2) for r1, r2 in zip(self.rows, rhs.rows)]
        if not aug:
            aug = []
        piv = _row_reduce(self.field, aug, n)
        for row in aug[len(piv):]:
            if any(row[n:]):
                return None
        f = self.field
        xrows = [[f.zero] * rhs.ncols for _ in range(n)]
        for i, pc in enumerate(piv):
            xrows[pc] = aug[i][n:]
        return Matrix(f, tuple(tuple(r) for r in xrows), ncols=rhs.ncols, _raw=True)

    def solve_vector(self, vec) -> tuple | None:
        sol = self.solve(Matrix.column(self.field, vec))
        return sol.col(0) if sol is not None else None

    def inverse(self) -> "Matrix | None":
        if self.nrows != self.ncols:
            raise ValueError("inverse of a non-square matrix")
        sol = self.solve(Matrix.identity(self.field, self.nrows))
        if sol is None:
            return None
        # solve() returns a particular solution; it is the inverse only at full rank
        if self.rank() != self.nrows:
            return None
        return sol


def hstack(mats: list[Matrix]) -> Matrix:
    if not mats:
        raise ValueError("hstack of nothing")
    field = mats[0].field
    nrows = mats[0].nrows
    if any(m.nrows != nrows or m.field != field for m in mats):
        raise ValueError("hstack row count / field mismatch")
    rows = tuple(tuple(x for m in mats for x in m.rows[i]) for i in range(nrows))
    return Matrix(field, rows, ncols=sum(m.ncols for m in mats), _raw=True)


class SubspaceBasis:
    """A subspace of F^n with a canonical echelon basis.

    The basis is held as the reduced row-echelon form of the spanning vectors
    written as rows, so ``vectors()`` returns the canonical basis and two
    subspaces are equal iff their stored data is equal.  The column-matrix
    view required by matrix operations is ``basis_matrix()``.
    """

    __slots__ = ("field", "ambient_dim", "echelon_rows", "pivot_rows")

    def __init__(self, field: Field, ambient_dim: int, echelon_rows: tuple, pivot_rows: tuple):
        self.field = field
        self.ambient_dim = ambient_dim
        self.echelon_rows = echelon_rows
        self.pivot_rows = pivot_rows

    @classmethod
    def from_spanning(cls, field: Field, ambient_dim: int, vectors) -> "SubspaceBasis":
        """Canonicalize a list of spanning vectors (or a column matrix)."""
        if isinstance(vectors, Matrix):
            if vectors.nrows != ambient_dim:
                raise ValueError("ambient dimension mismatch")
            vecs = vectors.cols()
        else:
            vecs = [tuple(field.coerce(x) for x in v) for v in vectors]
        for v in vecs:
            if len(v) != ambient_dim:
                raise ValueError("ambient dimension mismatch")
        rows = [list(v) for v in vecs]
        piv = _row_reduce(field, rows, ambient_dim)
        kept = tuple(tuple(r) for r in rows[:len(piv)])
        return cls(field, ambient_dim, kept, tuple(piv))

    @classmethod
    def zero(cls, field: Field, ambient_dim: int) -> "SubspaceBasis":
        return cls(field, ambient_dim, (), ())

    @classmethod
    def full(cls, field: Field, ambient_dim: int) -> "SubspaceBasis":
        ident = Matrix.identity(field, ambient_dim)
        return cls(field, ambient_dim, ident.rows, tuple(range(ambient_dim)))

    @property
    def dim(self) -> int:
        return len(self.echelon_rows)

    def vectors(self) -> list[tuple]:
        return list(self.echelon_rows)

    def basis_matrix(self) -> Matrix:
        return Matrix.from_cols(self.field, self.echelon_rows, nrows=self.ambient_dim)

    def is_zero(self) -> bool:
        return self.dim == 0

    def is_full(self) -> bool:
        return self.dim == self.ambient_dim

    def reduce_vector(self, vec) -> tuple:
        """Residue of vec after subtracting its projection onto the basis."""
        f = self.field
        w = [f.coerce(x) for x in vec]
        if len(w) != self.ambient_dim:
            raise ValueError("ambient dimension mismatch")
        for row, pr in zip(self.echelon_rows, self.pivot_rows):
            c = w[pr]
            if c:
                w = [f.sub(x, f.mul(c, y)) for x, y in zip(w, row)]
        return tuple(w)

    def contains_vector(self, vec) -> bool:
        return not any(self.reduce_vector(vec))

    def coords_of(self, vec) -> tuple | None:
        """Coefficients of vec over the canonical basis, or None if outside."""
        f = self.field
        w = [f.coerce(x) for x in vec]
        coeffs = []
        for row, pr in zip(self.echelon_rows, self.pivot_rows):
            c = w[pr]
            coeffs.append(c)
            if c:
                w = [f.sub(x, f.mul(c, y)) for x, y in zip(w, row)]
        if any(w):
            return None
        return tuple(coeffs)

    def contains_subspace(self, other: "SubspaceBasis") -> bool:
        if other.ambient_dim != self.ambient_dim:
            raise ValueError("ambient dimension mismatch")
        return all(self.contains_vector(v) for v in other.echelon_rows)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SubspaceBasis):
            return NotImplemented
        return (self.field == other.field and self.ambient_dim == other.ambient_dim
                and self.echelon_rows == other.echelon_rows)

    def __hash__(self) -> int:
        return hash((self.field, self.ambient_dim, self.echelon_rows))

    def __repr__(self) -> str:
        return f"SubspaceBasis(dim {self.dim} of F^{self.ambient_dim})"


# -- subspace operations -------------------------------------------------------

def rref(m: Matrix) -> Matrix:
    return m.rref()


def kernel(m: Matrix) -> SubspaceBasis:
    """The null space of m as a subspace of the domain F^ncols."""
    return SubspaceBasis.from_spanning(m.field, m.ncols, m.kernel_matrix())


def image(m: Matrix) -> SubspaceBasis:
    """The column space of m as a subspace of the codomain F^nrows."""
    return SubspaceBasis.from_spanning(m.field, m.nrows, m.cols())


def preimage_space(m: Matrix, u: SubspaceBasis) -> SubspaceBasis:
    """The subspace {v : m @ v lies in u} of the domain of m."""
    if u.ambient_dim != m.nrows:
        raise ValueError(f"ambient dimension mismatch: map into F^{m.nrows}, "
                         f"subspace of F^{u.ambient_dim}")
    if u.dim == 0:
        return kernel(m)
    aug = hstack([m, -u.basis_matrix()])
    ker = aug.kernel_matrix()
    heads = [col[:m.ncols] for col in ker.cols()]
    return SubspaceBasis.from_spanning(m.field, m.ncols, heads)


def intersect(u: SubspaceBasis, v: SubspaceBasis) -> SubspaceBasis:
    if u.ambient_dim != v.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    if u.dim == 0 or v.dim == 0:
        return SubspaceBasis.zero(u.field, u.ambient_dim)
    bu = u.basis_matrix()
    aug = hstack([bu, -v.basis_matrix()])
    ker = aug.kernel_matrix()
    vecs = [bu.apply(col[:bu.ncols]) for col in ker.cols()]
    return SubspaceBasis.from_spanning(u.field, u.ambient_dim, vecs)


def sum_space(u: SubspaceBasis, v: SubspaceBasis) -> SubspaceBasis:
    if u.ambient_dim != v.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    return SubspaceBasis.from_spanning(u.field, u.ambient_dim,
                                       u.vectors() + v.vectors())


def quotient_dim(u: SubspaceBasis, v: SubspaceBasis) -> int:
    """dim(u / v) for a contained pair v <= u (checked)."""
    if u.ambient_dim != v.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    if not u.contains_subspace(v):
        raise ValueError("quotient_dim: second subspace is not contained in the first")
    return u.dim - v.dim


def standard_complement(u: SubspaceBasis) -> list[tuple]:
    """Coordinate vectors at the non-pivot positions: a complement basis of u."""
    f = u.field
    comp = []
    for i in range(u.ambient_dim):
        if i not in u.pivot_rows:
            v = [f.zero] * u.ambient_dim
            v[i] = f.one
            comp.append(tuple(v))
    return comp
