"""Dense matrices over a coefficient domain."""

from __future__ import annotations

from typing import Any, Callable, Iterable, List, Optional, Sequence

from qetale.domains import QQ, Domain
from qetale.exceptions import DomainError, PreconditionError
from qetale.upoly import UPoly


class Matrix:
    """Row-major dense matrix."""

    __slots__ = ("rows", "cols", "entries", "domain")

    def __init__(self, rows: int, cols: int, entries: Sequence[Any], domain: Domain = QQ) -> None:
        if len(entries) != rows * cols:
            raise DomainError(f"expected {rows * cols} entries, got {len(entries)}")
        self.rows = rows
        self.cols = cols
        self.entries = tuple(entries)
        self.domain = domain

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Any]], domain: Domain = QQ) -> "Matrix":
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else 0
        flat: List[Any] = []
        for row in rows:
            if len(row) != ncols:
                raise DomainError("ragged rows")
            flat.extend(domain.convert(c) if isinstance(c, int) else c for c in row)
        return cls(nrows, ncols, flat, domain)

    @classmethod
    def zeros(cls, rows: int, cols: int, domain: Domain = QQ) -> "Matrix":
        return cls(rows, cols, [domain.zero] * (rows * cols), domain)

    @classmethod
    def identity(cls, n: int, domain: Domain = QQ) -> "Matrix":
        zero, one = domain.zero, domain.one
        return cls(n, n, [one if i == j else zero for i in range(n) for j in range(n)], domain)

    def __getitem__(self, ij: Any) -> Any:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> List[Any]:
        return list(self.entries[i * self.cols : (i + 1) * self.cols])

    def column(self, j: int) -> List[Any]:
        return [self.entries[i * self.cols + j] for i in range(self.rows)]

    def tolist(self) -> List[List[Any]]:
        return [self.row(i) for i in range(self.rows)]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def submatrix(self, row_idx: Iterable[int], col_idx: Iterable[int]) -> "Matrix":
        row_idx, col_idx = list(row_idx), list(col_idx)
        return Matrix(
            len(row_idx),
            len(col_idx),
            [self[i, j] for i in row_idx for j in col_idx],
            self.domain,
        )

    def map(self, fn: Callable[[Any], Any], domain: Optional[Domain] = None) -> "Matrix":
        return Matrix(self.rows, self.cols, [fn(c) for c in self.entries], domain or self.domain)

    # -- arithmetic ----------------------------------------------------------

    def _check_shape(self, other: "Matrix") -> None:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DomainError("matrix shape mismatch")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_shape(other)
        return Matrix(self.rows, self.cols, [a + b for a, b in zip(self.entries, other.entries)], self.domain)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_shape(other)
        return Matrix(self.rows, self.cols, [a - b for a, b in zip(self.entries, other.entries)], self.domain)

    def __neg__(self) -> "Matrix":
        return Matrix(self.rows, self.cols, [-a for a in self.entries], self.domain)

    def scale(self, c: Any) -> "Matrix":
        return Matrix(self.rows, self.cols, [a * c for a in self.entries], self.domain)

    def __mul__(self, other: Any) -> "Matrix":
        if not isinstance(other, Matrix):
            return self.scale(other)
        if self.cols != other.rows:
            raise DomainError("matrix product shape mismatch")
        dom = self.domain
        n, m, p = self.rows, self.cols, other.cols
        a, b = self.entries, other.entries
        out: List[Any] = []
        for i in range(n):
            for j in range(p):
                acc = dom.zero
                for k in range(m):
                    x = a[i * m + k]
                    if dom.is_zero(x):
                        continue
                    y = b[k * p + j]
                    if dom.is_zero(y):
                        continue
                    acc = acc + x * y
                out.append(dom.canonical(acc))
        return Matrix(n, p, out, dom)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and all(
            a == b for a, b in zip(self.entries, other.entries)
        )

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.entries))

    def is_zero_matrix(self) -> bool:
        return all(self.domain.is_zero(c) for c in self.entries)

    # -- invariants ----------------------------------------------------------

    def trace(self) -> Any:
        if not self.is_square:
            raise PreconditionError("trace of a non-square matrix")
        acc = self.domain.zero
        for i in range(self.rows):
            acc = acc + self[i, i]
        return self.domain.canonical(acc)

    def det(self) -> Any:
        """Fraction-free Bareiss elimination; exact over any integral domain."""
        if not self.is_square:
            raise PreconditionError("determinant of a non-square matrix")
        dom = self.domain
        n = self.rows
        if n == 0:
            return dom.one
        m = [self.row(i) for i in range(n)]
        sign = 1
        prev = dom.one
        for k in range(n - 1):
            if dom.is_zero(m[k][k]):
                pivot = next((i for i in range(k + 1, n) if not dom.is_zero(m[i][k])), None)
                if pivot is None:
                    return dom.zero
                m[k], m[pivot] = m[pivot], m[k]
                sign = -sign
            akk = m[k][k]
            for i in range(k + 1, n):
                aik = m[i][k]
                for j in range(k + 1, n):
                    m[i][j] = dom.exquo(akk * m[i][j] - aik * m[k][j], prev)
            prev = akk
        result = m[n - 1][n - 1]
        return -result if sign < 0 else result

    def char_poly(self) -> UPoly:
        """Characteristic polynomial ``det(lambda*I - M)`` by Faddeev-LeVerrier."""
        if not self.is_square:
            raise PreconditionError("characteristic polynomial of a non-square matrix")
        dom = self.domain
        n = self.rows
        coeffs: List[Any] = [dom.zero] * (n + 1)
        coeffs[n] = dom.one
        ident = Matrix.identity(n, dom)
        mk = Matrix.zeros(n, n, dom)
        for k in range(1, n + 1):
            mk = self * mk + ident.scale(coeffs[n - k + 1])
            amk = self * mk
            coeffs[n - k] = dom.canonical(dom.exquo(-amk.trace(), dom.convert(k)))
        return UPoly(coeffs, dom)

    def evaluate_poly(self, p: UPoly) -> "Matrix":
        """Return ``p(M)`` by Horner's rule."""
        if not self.is_square:
            raise PreconditionError("polynomial of a non-square matrix")
        n = self.rows
        acc = Matrix.zeros(n, n, self.domain)
        ident = Matrix.identity(n, self.domain)
        for c in reversed(p.coeffs):
            acc = self * acc + ident.scale(c)
        return acc

    def __repr__(self) -> str:
        return f"Matrix({self.tolist()!r})"
