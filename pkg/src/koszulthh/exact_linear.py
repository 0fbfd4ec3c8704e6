"""Exact linear algebra over Q and F_p.

Scalars are plain Python values: ``fractions.Fraction`` over the rationals and
``int`` residues in ``[0, p)`` over a prime field.  ``FieldSpec.coerce`` is the
only way values should enter a matrix, which keeps the normal-form invariants
(lowest terms, reduced residues) in one place.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple, Union

Scalar = Union[Fraction, int]


class FieldError(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class FieldSpec:
    kind: str  # "rationals" | "prime_field"
    characteristic: int = 0

    def __post_init__(self):
        if self.kind == "rationals":
            if self.characteristic != 0:
                raise FieldError("rationals have characteristic 0")
        elif self.kind == "prime_field":
            if not _is_prime(self.characteristic):
                raise FieldError(f"{self.characteristic} is not a prime")
        else:
            raise FieldError(f"unknown field kind {self.kind!r}")

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls("rationals", 0)

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls("prime_field", p)

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        """Parse ``Q`` or ``Fp:P`` (also accepts ``F2``-style shorthand)."""
        t = text.strip()
        if t in ("Q", "QQ", "rationals"):
            return cls.rationals()
        if t.startswith("Fp:"):
            return cls.prime(int(t[3:]))
        if t.startswith("F") and t[1:].isdigit():
            return cls.prime(int(t[1:]))
        raise FieldError(f"cannot parse field {text!r}")

    @property
    def is_rational(self) -> bool:
        return self.characteristic == 0

    def __str__(self):
        return "Q" if self.is_rational else f"Fp:{self.characteristic}"

    # --- scalar arithmetic -------------------------------------------------
    def coerce(self, value) -> Scalar:
        """Bring an int, Fraction or ``"p/q"`` string into normal form."""
        if isinstance(value, str):
            value = Fraction(value.strip())
        if self.is_rational:
            return Fraction(value)
        p = self.characteristic
        if isinstance(value, Fraction):
            if value.denominator % p == 0:
                raise FieldError(f"{value} has no image in F_{p}")
            return value.numerator * pow(value.denominator, -1, p) % p
        return int(value) % p

    def zero(self) -> Scalar:
        return Fraction(0) if self.is_rational else 0

    def one(self) -> Scalar:
        return Fraction(1) if self.is_rational else 1

    def add(self, a: Scalar, b: Scalar) -> Scalar:
        return a + b if self.is_rational else (a + b) % self.characteristic

    def mul(self, a: Scalar, b: Scalar) -> Scalar:
        return a * b if self.is_rational else (a * b) % self.characteristic

    def neg(self, a: Scalar) -> Scalar:
        return -a if self.is_rational else (-a) % self.characteristic

    def inv(self, a: Scalar) -> Scalar:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(a) if self.is_rational else pow(a, -1, self.characteristic)

    def sign(self, negative: bool) -> Scalar:
        return self.neg(self.one()) if negative else self.one()

    def format(self, a: Scalar) -> str:
        return str(a)


QQ = FieldSpec.rationals()
F2 = FieldSpec.prime(2)


class SparseMatrix:
    """Immutable sparse matrix; only nonzero entries are stored."""

    __slots__ = ("rows", "cols", "field", "_entries")

    def __init__(self, rows: int, cols: int, entries: Mapping[Tuple[int, int], object], field: FieldSpec):
        if rows < 0 or cols < 0:
            raise ValueError("negative shape")
        clean: Dict[Tuple[int, int], Scalar] = {}
        for (r, c), v in entries.items():
            if not (0 <= r < rows and 0 <= c < cols):
                raise IndexError(f"entry ({r}, {c}) outside {rows}x{cols}")
            v = field.coerce(v)
            if v != 0:
                clean[(r, c)] = v
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "_entries", clean)

    def __setattr__(self, name, value):
        raise AttributeError("SparseMatrix is immutable")

    @classmethod
    def zero(cls, rows: int, cols: int, field: FieldSpec) -> "SparseMatrix":
        return cls(rows, cols, {}, field)

    @classmethod
    def identity(cls, n: int, field: FieldSpec) -> "SparseMatrix":
        return cls(n, n, {(i, i): 1 for i in range(n)}, field)

    @classmethod
    def from_dense(cls, data: Sequence[Sequence[object]], field: FieldSpec, cols: int | None = None) -> "SparseMatrix":
        rows = len(data)
        if cols is None:
            cols = len(data[0]) if rows else 0
        entries = {(i, j): v for i, row in enumerate(data) for j, v in enumerate(row) if v != 0}
        return cls(rows, cols, entries, field)

    @property
    def entries(self) -> Dict[Tuple[int, int], Scalar]:
        return dict(self._entries)

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def nnz(self) -> int:
        return len(self._entries)

    def is_zero(self) -> bool:
        return not self._entries

    def get(self, r: int, c: int) -> Scalar:
        return self._entries.get((r, c), self.field.zero())

    def items(self):
        return self._entries.items()

    def to_dense(self) -> List[List[Scalar]]:
        out = [[self.field.zero()] * self.cols for _ in range(self.rows)]
        for (r, c), v in self._entries.items():
            out[r][c] = v
        return out

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(self.cols, self.rows, {(c, r): v for (r, c), v in self._entries.items()}, self.field)

    def scale(self, s) -> "SparseMatrix":
        s = self.field.coerce(s)
        f = self.field
        return SparseMatrix(self.rows, self.cols, {k: f.mul(v, s) for k, v in self._entries.items()}, f)

    def __neg__(self):
        return self.scale(-1)

    def __add__(self, other: "SparseMatrix") -> "SparseMatrix":
        _check_same_field(self, other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"cannot add {self.shape} and {other.shape}")
        f = self.field
        acc = dict(self._entries)
        for k, v in other._entries.items():
            acc[k] = f.add(acc.get(k, f.zero()), v)
        return SparseMatrix(self.rows, self.cols, acc, f)

    def __sub__(self, other: "SparseMatrix") -> "SparseMatrix":
        return self + (-other)

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        _check_same_field(self, other)
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot compose {self.shape} with {other.shape}")
        f = self.field
        by_row: Dict[int, List[Tuple[int, Scalar]]] = {}
        for (r, c), v in other._entries.items():
            by_row.setdefault(r, []).append((c, v))
        acc: Dict[Tuple[int, int], Scalar] = {}
        for (i, k), a in self._entries.items():
            for j, b in by_row.get(k, ()):
                key = (i, j)
                acc[key] = f.add(acc.get(key, f.zero()), f.mul(a, b))
        return SparseMatrix(self.rows, other.cols, acc, f)

    def apply(self, vec: Sequence[Scalar]) -> List[Scalar]:
        if len(vec) != self.cols:
            raise DimensionMismatch(f"vector of length {len(vec)} for {self.shape} matrix")
        f = self.field
        out = [f.zero()] * self.rows
        for (r, c), v in self._entries.items():
            if vec[c] != 0:
                out[r] = f.add(out[r], f.mul(v, vec[c]))
        return out

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return (self.shape == other.shape and self.field == other.field
                and self._entries == other._entries)

    def __hash__(self):
        return hash((self.rows, self.cols, self.field, frozenset(self._entries.items())))

    def __repr__(self):
        return f"SparseMatrix({self.rows}x{self.cols}, nnz={self.nnz}, field={self.field})"


def _check_same_field(a: SparseMatrix, b: SparseMatrix):
    if a.field != b.field:
        raise FieldError(f"mixed fields {a.field} and {b.field}")


def hstack(blocks: Sequence[SparseMatrix], rows: int, field: FieldSpec) -> SparseMatrix:
    entries = {}
    off = 0
    for b in blocks:
        if b.rows != rows:
            raise DimensionMismatch("row counts differ in hstack")
        for (r, c), v in b.items():
            entries[(r, c + off)] = v
        off += b.cols
    return SparseMatrix(rows, off, entries, field)


# --- elimination -------------------------------------------------------------

def _row_dicts(m: SparseMatrix) -> List[Dict[int, Scalar]]:
    rows: List[Dict[int, Scalar]] = [dict() for _ in range(m.rows)]
    for (r, c), v in m.items():
        rows[r][c] = v
    return [r for r in rows if r]


def _pivot_key(field: FieldSpec):
    if field.is_rational:
        return lambda v: (abs(v.numerator) + abs(v.denominator), abs(v.numerator))
    return lambda v: 0


def _eliminate(m: SparseMatrix, full: bool):
    """Markowitz-style elimination on a private copy of the rows.

    Picks the column with the fewest nonzeros among active rows, then within
    it the shortest row with the smallest pivot.  Returns the list of
    ``(pivot_col, normalized_row)`` pairs; with ``full`` the pivot rows are
    also back-substituted into each other (reduced echelon form).
    """
    f = m.field
    rows = _row_dicts(m)
    active = set(range(len(rows)))
    col_rows: Dict[int, set] = {}
    for i, r in enumerate(rows):
        for c in r:
            col_rows.setdefault(c, set()).add(i)
    key = _pivot_key(f)
    pivots: List[Tuple[int, Dict[int, Scalar]]] = []

    while active:
        live = [(len(s), c) for c, s in col_rows.items() if s]
        if not live:
            break
        _, pc = min(live)
        cand = col_rows[pc]
        pr = min(cand, key=lambda i: (len(rows[i]), key(rows[i][pc]), i))
        prow = rows[pr]
        inv = f.inv(prow[pc])
        prow = {c: f.mul(v, inv) for c, v in prow.items()}
        active.discard(pr)
        for c in prow:
            col_rows[c].discard(pr)
        for i in list(col_rows[pc]):
            target = rows[i]
            factor = target[pc]
            for c, v in prow.items():
                nv = f.add(target.get(c, f.zero()), f.neg(f.mul(factor, v)))
                if nv == 0:
                    if c in target:
                        del target[c]
                        col_rows[c].discard(i)
                else:
                    if c not in target:
                        col_rows.setdefault(c, set()).add(i)
                    target[c] = nv
            if not target:
                active.discard(i)
        pivots.append((pc, prow))

    if full:
        # back-substitute so every pivot column is a unit vector
        for k in range(len(pivots) - 1, -1, -1):
            pc, prow = pivots[k]
            for j in range(len(pivots)):
                if j == k:
                    continue
                oc, orow = pivots[j]
                factor = orow.get(pc)
                if factor:
                    for c, v in prow.items():
                        nv = f.add(orow.get(c, f.zero()), f.neg(f.mul(factor, v)))
                        if nv == 0:
                            orow.pop(c, None)
                        else:
                            orow[c] = nv
    return pivots


def rank(m: SparseMatrix) -> int:
    if m.rows == 0 or m.cols == 0 or m.is_zero():
        return 0
    return len(_eliminate(m, full=False))


def kernel_basis(m: SparseMatrix) -> List[Tuple[Scalar, ...]]:
    """Exact basis of the null space, one dense tuple per vector."""
    f = m.field
    pivots = _eliminate(m, full=True) if not m.is_zero() else []
    pivot_cols = {pc: row for pc, row in pivots}
    basis = []
    for free in range(m.cols):
        if free in pivot_cols:
            continue
        v = [f.zero()] * m.cols
        v[free] = f.one()
        for pc, row in pivot_cols.items():
            coeff = row.get(free)
            if coeff:
                v[pc] = f.neg(coeff)
        basis.append(tuple(v))
    return basis


def image_dimension_of_composite(a: SparseMatrix, b: SparseMatrix) -> int:
    """rank(a @ b); raises DimensionMismatch if not composable."""
    return rank(a @ b)


def columns_matrix(vectors: Iterable[Sequence[Scalar]], rows: int, field: FieldSpec) -> SparseMatrix:
    entries = {}
    n = 0
    for j, v in enumerate(vectors):
        n = j + 1
        for i, x in enumerate(v):
            if x != 0:
                entries[(i, j)] = x
    return SparseMatrix(rows, n, entries, field)
