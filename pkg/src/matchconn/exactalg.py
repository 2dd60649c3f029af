"""Exact linear algebra over the rationals and prime fields.

Two storage regimes share one interface: small matrices live as Python lists
of exact scalars (int or Fraction), big 0/1 matrices live as numpy integer
arrays. Rational rank and determinant go through fraction-free (Bareiss)
elimination, so no rounding ever happens; prime-field work reduces to
vectorized integer row elimination on machine words.

Key choices:
  * rank() over Q first tries a single mod-p elimination; if that already
    reaches min(m, n) the rational rank is certified exactly (rank can only
    drop under reduction), which avoids Bareiss on huge full-rank inputs.
  * inverses use exact Gauss-Jordan (Fraction or mod-p), not Bareiss.
  * the large elimination tier chunks row updates to bound temporary
    allocations and honors a memory ceiling from the environment.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

__all__ = [
    "Rationals",
    "PrimeField",
    "RATIONALS",
    "ExactMatrix",
    "CapacityError",
    "ValidationError",
    "rank",
    "det",
    "inverse",
    "kronecker",
    "nullity_shift",
    "full_rank_submatrix",
    "identity",
    "write_matrix",
    "read_matrix",
    "parse_field",
    "field_token",
    "is_prime",
]

# Memory ceiling for the large elimination tier, in megabytes.
MEMORY_ENV_VAR = "MATCHCONN_MEMORY_MB"
DEFAULT_MEMORY_MB = 4096

# Prime used by the full-rank certification shortcut in rational rank.
_CERT_PRIME = 1_000_003


class ValidationError(ValueError):
    """Bad input: malformed data, field mismatch, shape mismatch."""


class CapacityError(ValidationError):
    """Request exceeds a documented size or memory ceiling."""


# ---------------------------------------------------------------------------
# fields


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for all 64-bit inputs."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for p in small:
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class Rationals:
    """Marker for the field Q."""

    def __repr__(self) -> str:
        return "Q"


@dataclass(frozen=True)
class PrimeField:
    """The field Z/pZ for a prime p below 2^16 (machine-word arithmetic)."""

    p: int

    def __post_init__(self) -> None:
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise ValidationError(f"modulus {self.p!r} is not prime")
        if self.p >= 1 << 16:
            raise CapacityError(f"prime {self.p} exceeds the 2^16 machine-word ceiling")

    def __repr__(self) -> str:
        return f"GF({self.p})"


FieldSpec = Rationals | PrimeField
RATIONALS = Rationals()


def parse_field(token: str) -> FieldSpec:
    """Parse a field token: 'q' for the rationals, 'p:<prime>' for Z/p."""
    t = token.strip().lower()
    if t == "q":
        return RATIONALS
    if t.startswith("p:"):
        try:
            p = int(t[2:])
        except ValueError as exc:
            raise ValidationError(f"bad field token {token!r}") from exc
        return PrimeField(p)
    raise ValidationError(f"bad field token {token!r} (expected 'q' or 'p:<prime>')")


def field_token(field: FieldSpec) -> str:
    return "q" if isinstance(field, Rationals) else f"p:{field.p}"


def _memory_limit_bytes() -> int:
    raw = os.environ.get(MEMORY_ENV_VAR, "")
    try:
        mb = int(raw) if raw else DEFAULT_MEMORY_MB
    except ValueError:
        mb = DEFAULT_MEMORY_MB
    return mb * (1 << 20)


# ---------------------------------------------------------------------------
# matrix container


class ExactMatrix:
    """Labeled matrix over Q or Z/p with exact entries.

    Rows and columns may carry arbitrary hashable labels (matchings,
    fingerprints, partitions); plumbing code mostly ignores them, but the
    constrained submatrix extraction filters on them.

    Storage is either a numpy integer array (`_arr`) or a list of row lists
    of Python scalars (`_rows`); exactly one is set.
    """

    __slots__ = ("field", "nrows", "ncols", "row_labels", "col_labels", "_arr", "_rows")

    def __init__(
        self,
        field: FieldSpec,
        data,
        row_labels: Sequence | None = None,
        col_labels: Sequence | None = None,
    ) -> None:
        self.field = field
        if isinstance(data, np.ndarray):
            if data.ndim != 2:
                raise ValidationError("matrix data must be 2-dimensional")
            if not np.issubdtype(data.dtype, np.integer):
                raise ValidationError("numpy-backed matrices must have integer dtype")
            self._arr = data
            self._rows = None
            self.nrows, self.ncols = data.shape
        else:
            rows = [list(r) for r in data]
            self.nrows = len(rows)
            self.ncols = len(rows[0]) if rows else 0
            for r in rows:
                if len(r) != self.ncols:
                    raise ValidationError("ragged rows in matrix data")
            if isinstance(field, PrimeField):
                p = field.p
                rows = [[int(x) % p for x in r] for r in rows]
            self._rows = rows
            self._arr = None
        self.row_labels = list(row_labels) if row_labels is not None else list(range(self.nrows))
        self.col_labels = list(col_labels) if col_labels is not None else list(range(self.ncols))
        if len(self.row_labels) != self.nrows or len(self.col_labels) != self.ncols:
            raise ValidationError("label count does not match matrix shape")

    # -- construction helpers ------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def is_numpy(self) -> bool:
        return self._arr is not None

    def numpy(self, dtype=np.int64) -> np.ndarray:
        """Entries as a numpy array (mod p for prime fields). Exact ints only."""
        if self._arr is not None:
            a = self._arr.astype(dtype, copy=True)
        else:
            for r in self._rows:
                for x in r:
                    if isinstance(x, Fraction) and x.denominator != 1:
                        raise ValidationError("matrix has non-integer entries")
            a = np.array([[int(x) for x in r] for r in self._rows], dtype=dtype)
            if self.nrows == 0 or self.ncols == 0:
                a = a.reshape(self.nrows, self.ncols)
        if isinstance(self.field, PrimeField):
            a %= self.field.p
        return a

    def rows(self) -> list[list]:
        """Entries as Python scalar row lists (copies)."""
        if self._rows is not None:
            return [list(r) for r in self._rows]
        return [[int(x) for x in row] for row in self._arr]

    def __getitem__(self, rc: tuple[int, int]):
        i, j = rc
        if self._rows is not None:
            return self._rows[i][j]
        return int(self._arr[i, j])

    def with_field(self, field: FieldSpec) -> "ExactMatrix":
        """Same entries reinterpreted over another field (ints reduced mod p)."""
        if field == self.field:
            return self
        if self._arr is not None:
            return ExactMatrix(field, self._arr, self.row_labels, self.col_labels)
        if isinstance(field, PrimeField):
            for r in self._rows:
                for x in r:
                    if isinstance(x, Fraction) and x.denominator != 1:
                        if x.denominator % field.p == 0:
                            raise ValidationError(
                                f"denominator divisible by {field.p}; cannot reduce"
                            )
            p = field.p
            rows = [
                [
                    (int(x) % p)
                    if not isinstance(x, Fraction) or x.denominator == 1
                    else int(x.numerator) * pow(x.denominator, -1, p) % p
                    for x in r
                ]
                for r in self._rows
            ]
            return ExactMatrix(field, rows, self.row_labels, self.col_labels)
        return ExactMatrix(field, self.rows(), self.row_labels, self.col_labels)

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "ExactMatrix":
        rl = [self.row_labels[i] for i in row_idx]
        cl = [self.col_labels[j] for j in col_idx]
        if self._arr is not None:
            a = self._arr[np.ix_(row_idx, col_idx)] if row_idx and col_idx else np.zeros(
                (len(row_idx), len(col_idx)), dtype=self._arr.dtype
            )
            return ExactMatrix(self.field, a, rl, cl)
        rows = [[self._rows[i][j] for j in col_idx] for i in row_idx]
        return ExactMatrix(self.field, rows, rl, cl)

    def transpose(self) -> "ExactMatrix":
        if self._arr is not None:
            return ExactMatrix(self.field, self._arr.T.copy(), self.col_labels, self.row_labels)
        rows = [[self._rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)]
        return ExactMatrix(self.field, rows, self.col_labels, self.row_labels)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        if self.field != other.field or self.shape != other.shape:
            return False
        if self._arr is not None and other._arr is not None:
            return bool(np.array_equal(self._arr, other._arr))
        a = self.rows() if self._rows is None else self._rows
        b = other.rows() if other._rows is None else other._rows
        return all(
            a[i][j] == b[i][j] for i in range(self.nrows) for j in range(self.ncols)
        )

    def __repr__(self) -> str:
        return f"ExactMatrix({self.field!r}, {self.nrows}x{self.ncols})"


def identity(n: int, field: FieldSpec = RATIONALS) -> ExactMatrix:
    return ExactMatrix(field, np.eye(n, dtype=np.int64))


# ---------------------------------------------------------------------------
# elimination engines


def _bareiss(rows: list[list], want_det: bool) -> tuple[int, object]:
    """Fraction-free elimination on a scratch copy. Returns (rank, det).

    det is only meaningful for square input; it is 0 when rank < n and
    otherwise the signed final pivot, which Bareiss guarantees equals the
    determinant. Works verbatim for Fraction entries too (divisions exact
    over a field, and still exact over Z by the Bareiss divisibility lemma).
    """
    m = len(rows)
    n = len(rows[0]) if m else 0
    a = [list(r) for r in rows]
    prev = 1
    sign = 1
    r = 0
    for c in range(n):
        if r == m:
            break
        piv = None
        for i in range(r, m):
            if a[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            a[r], a[piv] = a[piv], a[r]
            sign = -sign
        p = a[r][c]
        use_int = isinstance(p, int) and isinstance(prev, int)
        for i in range(r + 1, m):
            ai = a[i]
            f = ai[c]
            ar = a[r]
            if f == 0:
                if use_int:
                    for j in range(c + 1, n):
                        ai[j] = (ai[j] * p) // prev
                else:
                    for j in range(c + 1, n):
                        ai[j] = (ai[j] * p) / prev
            else:
                if use_int:
                    for j in range(c + 1, n):
                        ai[j] = (ai[j] * p - f * ar[j]) // prev
                else:
                    for j in range(c + 1, n):
                        ai[j] = (ai[j] * p - f * ar[j]) / prev
            ai[c] = 0
        prev = p
        r += 1
    if not want_det:
        return r, 0
    if m != n:
        raise ValidationError("determinant of a non-square matrix")
    if r < n:
        return r, 0
    d = sign * prev
    if isinstance(d, Fraction) and d.denominator == 1:
        d = int(d)
    return r, d


def _clear_denominators(rows: list[list]) -> list[list[int]]:
    """Scale each row by the lcm of its denominators (rank-preserving)."""
    from math import lcm

    out = []
    for r in rows:
        dens = [x.denominator for x in r if isinstance(x, Fraction)]
        if dens:
            s = lcm(*dens)
            out.append([int(x * s) if isinstance(x, Fraction) else int(x) * s for x in r])
        else:
            out.append([int(x) for x in r])
    return out


def _rank_mod_numpy(a: np.ndarray, p: int, progress: Callable[[int], None] | None = None) -> int:
    """Row elimination mod p on an int array. Chunked updates for big inputs."""
    m, n = a.shape
    if m == 0 or n == 0:
        return 0
    big = m * n > 16_000_000
    if big:
        need = a.size * 4 + min(m, 4096) * n * 4
        if need > _memory_limit_bytes():
            raise CapacityError(
                f"elimination needs about {need >> 20} MB, over the "
                f"{_memory_limit_bytes() >> 20} MB ceiling ({MEMORY_ENV_VAR})"
            )
        work = np.ascontiguousarray(a.astype(np.int32) % p)
    else:
        work = np.ascontiguousarray(a.astype(np.int64) % p)
    r = 0
    chunk = 2048
    for c in range(n):
        col = work[r:, c]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            tmp = work[r].copy()
            work[r] = work[i]
            work[i] = tmp
        inv = pow(int(work[r, c]), -1, p)
        row = (work[r, c:].astype(np.int64) * inv) % p
        work[r, c:] = row
        if big:
            row32 = row.astype(np.int32)
            for lo in range(r + 1, m, chunk):
                hi = min(lo + chunk, m)
                f = work[lo:hi, c]
                mask = f != 0
                if not mask.any():
                    continue
                blk = work[lo:hi, c:]
                upd = blk[mask].astype(np.int64)
                upd -= np.multiply.outer(f[mask].astype(np.int64), row)
                upd %= p
                blk[mask] = upd.astype(np.int32)
        else:
            f = work[r + 1 :, c]
            mask = f != 0
            if mask.any():
                blk = work[r + 1 :, c:]
                sel = blk[mask]
                sel -= np.multiply.outer(f[mask], row)
                sel %= p
                blk[mask] = sel
        r += 1
        if progress is not None:
            progress(r)
        if r == m:
            break
    return r


def _rows_mod(matrix: ExactMatrix, p: int) -> list[list[int]]:
    if matrix._rows is not None:
        out = []
        for r in matrix._rows:
            row = []
            for x in r:
                if isinstance(x, Fraction) and x.denominator != 1:
                    if x.denominator % p == 0:
                        raise ValidationError(f"denominator divisible by {p}")
                    row.append(int(x.numerator) * pow(x.denominator, -1, p) % p)
                else:
                    row.append(int(x) % p)
            out.append(row)
        return out
    return (matrix._arr.astype(np.int64) % p).tolist()


# ---------------------------------------------------------------------------
# public operations


def rank(matrix: ExactMatrix) -> int:
    """Exact rank over the matrix's own field."""
    if matrix.nrows == 0 or matrix.ncols == 0:
        return 0
    if isinstance(matrix.field, PrimeField):
        arr = matrix._arr if matrix._arr is not None else matrix.numpy()
        return _rank_mod_numpy(arr, matrix.field.p)
    # Rationals: certify via one modular elimination when full rank, which is
    # exact (rank mod p never exceeds rational rank); otherwise Bareiss.
    try:
        r_mod = _rank_mod_numpy(matrix.numpy() % _CERT_PRIME, _CERT_PRIME)
        if r_mod == min(matrix.nrows, matrix.ncols):
            return r_mod
    except (ValidationError, OverflowError):
        pass
    rows = matrix.rows() if matrix._rows is None else matrix._rows
    if any(isinstance(x, Fraction) for r in rows for x in r):
        rows = _clear_denominators(rows)
    r, _ = _bareiss(rows, want_det=False)
    return r


def det(matrix: ExactMatrix):
    """Exact determinant (int/Fraction over Q, residue over Z/p)."""
    if matrix.nrows != matrix.ncols:
        raise ValidationError("determinant of a non-square matrix")
    n = matrix.nrows
    if n == 0:
        return 1 if isinstance(matrix.field, Rationals) else 1 % matrix.field.p
    if isinstance(matrix.field, PrimeField):
        p = matrix.field.p
        a = [r[:] for r in _rows_mod(matrix, p)]
        d = 1
        for c in range(n):
            piv = next((i for i in range(c, n) if a[i][c]), None)
            if piv is None:
                return 0
            if piv != c:
                a[c], a[piv] = a[piv], a[c]
                d = (p - d) % p
            d = d * a[c][c] % p
            inv = pow(a[c][c], -1, p)
            for i in range(c + 1, n):
                f = a[i][c] * inv % p
                if f:
                    ai, ac = a[i], a[c]
                    for j in range(c, n):
                        ai[j] = (ai[j] - f * ac[j]) % p
        return d
    rows = matrix.rows() if matrix._rows is None else [r[:] for r in matrix._rows]
    fracs = [x for r in rows for x in r if isinstance(x, Fraction) and x.denominator != 1]
    if fracs:
        _, d = _bareiss(rows, want_det=True)
        return Fraction(d) if not isinstance(d, Fraction) else d
    _, d = _bareiss([[int(x) for x in r] for r in rows], want_det=True)
    return d


def inverse(matrix: ExactMatrix) -> ExactMatrix:
    """Exact inverse by Gauss-Jordan; raises on singular input."""
    if matrix.nrows != matrix.ncols:
        raise ValidationError("inverse of a non-square matrix")
    n = matrix.nrows
    fld = matrix.field
    if isinstance(fld, PrimeField):
        p = fld.p
        a = _rows_mod(matrix, p)
        aug = [a[i][:] + [int(j == i) for j in range(n)] for i in range(n)]
        for c in range(n):
            piv = next((i for i in range(c, n) if aug[i][c]), None)
            if piv is None:
                raise ValidationError("matrix is singular over " + repr(fld))
            aug[c], aug[piv] = aug[piv], aug[c]
            inv = pow(aug[c][c], -1, p)
            aug[c] = [x * inv % p for x in aug[c]]
            for i in range(n):
                if i != c and aug[i][c]:
                    f = aug[i][c]
                    row_c = aug[c]
                    aug[i] = [(x - f * y) % p for x, y in zip(aug[i], row_c)]
        rows = [r[n:] for r in aug]
        return ExactMatrix(fld, rows, matrix.col_labels, matrix.row_labels)
    aug = [[Fraction(x) for x in row] + [Fraction(int(j == i)) for j in range(n)]
           for i, row in enumerate(matrix.rows() if matrix._rows is None else matrix._rows)]
    for c in range(n):
        piv = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if piv is None:
            raise ValidationError("matrix is singular over Q")
        aug[c], aug[piv] = aug[piv], aug[c]
        pv = aug[c][c]
        aug[c] = [x / pv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                row_c = aug[c]
                aug[i] = [x - f * y for x, y in zip(aug[i], row_c)]
    rows = [[x if x.denominator != 1 else int(x) for x in r[n:]] for r in aug]
    return ExactMatrix(fld, rows, matrix.col_labels, matrix.row_labels)


def kronecker(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    """Kronecker product; labels become (label_a, label_b) pairs."""
    if a.field != b.field:
        raise ValidationError("kronecker over mismatched fields")
    rl = [(x, y) for x in a.row_labels for y in b.row_labels]
    cl = [(x, y) for x in a.col_labels for y in b.col_labels]
    try:
        arr = np.kron(a.numpy(), b.numpy())
        if isinstance(a.field, PrimeField):
            arr %= a.field.p
        return ExactMatrix(a.field, arr, rl, cl)
    except ValidationError:
        pass
    ra, rb = a.rows(), b.rows()
    rows = [
        [ra[i][k] * rb[j][l] for k in range(a.ncols) for l in range(b.ncols)]
        for i in range(a.nrows)
        for j in range(b.nrows)
    ]
    return ExactMatrix(a.field, rows, rl, cl)


def nullity_shift(matrix: ExactMatrix, shift) -> int:
    """dim ker(A - shift*I) over the matrix's field."""
    if matrix.nrows != matrix.ncols:
        raise ValidationError("nullity_shift needs a square matrix")
    n = matrix.nrows
    if isinstance(matrix.field, PrimeField):
        p = matrix.field.p
        a = matrix.numpy()
        a = (a - (int(shift) % p) * np.eye(n, dtype=a.dtype)) % p
        return n - _rank_mod_numpy(a, p)
    rows = matrix.rows()
    s = shift if isinstance(shift, (int, Fraction)) else Fraction(shift)
    for i in range(n):
        rows[i][i] = rows[i][i] - s
    shifted = ExactMatrix(RATIONALS, rows)
    return n - rank(shifted)


class _IncrementalBasis:
    """Row space basis maintained in reduced form for greedy extraction."""

    def __init__(self, field: FieldSpec, width: int) -> None:
        self.field = field
        self.width = width
        self.pivots: dict[int, list] = {}

    def try_add(self, row: Sequence) -> bool:
        fld = self.field
        if isinstance(fld, PrimeField):
            p = fld.p
            v = [int(x) % p for x in row]
            for c, basis_row in self.pivots.items():
                f = v[c]
                if f:
                    v = [(x - f * y) % p for x, y in zip(v, basis_row)]
            lead = next((c for c, x in enumerate(v) if x), None)
            if lead is None:
                return False
            inv = pow(v[lead], -1, p)
            self.pivots[lead] = [x * inv % p for x in v]
            return True
        v = [Fraction(x) for x in row]
        for c, basis_row in self.pivots.items():
            f = v[c]
            if f != 0:
                v = [x - f * y for x, y in zip(v, basis_row)]
        lead = next((c for c, x in enumerate(v) if x != 0), None)
        if lead is None:
            return False
        pv = v[lead]
        self.pivots[lead] = [x / pv for x in v]
        return True


def full_rank_submatrix(
    matrix: ExactMatrix,
    row_filter: Callable | None = None,
    col_filter: Callable | None = None,
) -> tuple[list[int], list[int]]:
    """Greedy maximal nonsingular submatrix within filtered rows/columns.

    Filters are predicates on labels (None keeps everything). Scans rows in
    canonical order keeping each row that grows the row space of the filtered
    column block, then symmetrically prunes columns; the result is a square
    index pair with nonzero determinant, deterministic for fixed input.
    """
    rows_ok = [
        i for i in range(matrix.nrows) if row_filter is None or row_filter(matrix.row_labels[i])
    ]
    cols_ok = [
        j for j in range(matrix.ncols) if col_filter is None or col_filter(matrix.col_labels[j])
    ]
    if not rows_ok or not cols_ok:
        return [], []
    sub = matrix.submatrix(rows_ok, cols_ok)
    data = sub.rows()
    basis = _IncrementalBasis(matrix.field, len(cols_ok))
    kept_rows = [i for pos, i in enumerate(rows_ok) if basis.try_add(data[pos])]
    pos_of = {i: pos for pos, i in enumerate(rows_ok)}
    cols_data = [
        [data[pos_of[i]][jj] for i in kept_rows] for jj in range(len(cols_ok))
    ]
    basis_c = _IncrementalBasis(matrix.field, len(kept_rows))
    kept_cols = [j for jj, j in enumerate(cols_ok) if basis_c.try_add(cols_data[jj])]
    if len(kept_rows) != len(kept_cols):
        raise AssertionError("row and column ranks disagree; elimination bug")
    return kept_rows, kept_cols


# ---------------------------------------------------------------------------
# interchange format


def _scalar_to_text(x) -> str:
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x.numerator}/{x.denominator}"
    return str(int(x))


def _scalar_from_text(s: str, field: FieldSpec):
    if "/" in s:
        if isinstance(field, PrimeField):
            raise ValidationError("fractional entry in a prime-field matrix file")
        num, den = s.split("/", 1)
        return Fraction(int(num), int(den))
    v = int(s)
    if isinstance(field, PrimeField):
        return v % field.p
    return v


def write_matrix(matrix: ExactMatrix, path) -> None:
    """Plain text interchange: header 'rows cols field', then row lines."""
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"{matrix.nrows} {matrix.ncols} {field_token(matrix.field)}\n")
        if matrix._arr is not None:
            for row in matrix._arr:
                fh.write(" ".join(str(int(x)) for x in row) + "\n")
        else:
            for row in matrix._rows:
                fh.write(" ".join(_scalar_to_text(x) for x in row) + "\n")


def read_matrix(path) -> ExactMatrix:
    with open(path, "r", encoding="ascii") as fh:
        header = fh.readline().split()
        if len(header) != 3:
            raise ValidationError(f"bad matrix header in {path}")
        try:
            m, n = int(header[0]), int(header[1])
        except ValueError as exc:
            raise ValidationError(f"bad matrix shape in {path}") from exc
        field = parse_field(header[2])
        rows = []
        for _ in range(m):
            parts = fh.readline().split()
            if len(parts) != n:
                raise ValidationError(f"row with {len(parts)} entries, expected {n}, in {path}")
            rows.append([_scalar_from_text(s, field) for s in parts])
        trailing = fh.read().strip()
        if trailing:
            raise ValidationError(f"trailing data after matrix body in {path}")
    return ExactMatrix(field, rows)
