"""Chain complexes of degreewise finite-dimensional vector spaces.

Homological indexing throughout: ``d_n : C_n -> C_{n-1}``.  A complex may be
a truncation of an infinite one; ``certified`` then records the degree range
on which its homology agrees with the untruncated complex.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .exact_linear import (
    DimensionMismatch,
    FieldError,
    FieldSpec,
    SparseMatrix,
    kernel_basis,
    rank,
)


class WindowError(ValueError):
    """A degree outside the certified range was requested."""


class BoundednessError(ValueError):
    pass


@dataclass(frozen=True)
class TruncationWindow:
    lo: int
    hi: int
    word_bound: int = 0
    certified: bool = True

    def __post_init__(self):
        if self.lo > self.hi:
            raise WindowError(f"empty window [{self.lo}, {self.hi}]")

    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def contains(self, n: int) -> bool:
        return self.lo <= n <= self.hi

    def with_word_bound(self, s: int) -> "TruncationWindow":
        return replace(self, word_bound=s)

    def __str__(self):
        return f"[{self.lo}, {self.hi}] (s_max={self.word_bound}{'' if self.certified else ', uncertified'})"


def as_window(w) -> TruncationWindow:
    if isinstance(w, TruncationWindow):
        return w
    lo, hi = w
    return TruncationWindow(int(lo), int(hi))


@dataclass(frozen=True)
class GradedBasis:
    field: FieldSpec
    degrees: Mapping[int, Tuple[str, ...]]

    def __post_init__(self):
        clean = {}
        for n, labels in self.degrees.items():
            labels = tuple(labels)
            if len(set(labels)) != len(labels):
                raise ValueError(f"duplicate labels in degree {n}")
            if labels:
                clean[int(n)] = labels
        object.__setattr__(self, "degrees", clean)

    def dim(self, n: int) -> int:
        return len(self.degrees.get(n, ()))

    def labels(self, n: int) -> Tuple[str, ...]:
        return self.degrees.get(n, ())

    def support(self) -> List[int]:
        return sorted(self.degrees)

    def index(self, n: int) -> Dict[str, int]:
        return {lab: i for i, lab in enumerate(self.labels(n))}

    def total_dim(self) -> int:
        return sum(len(v) for v in self.degrees.values())


@dataclass(frozen=True)
class BettiTable:
    entries: Mapping[int, int]
    window: TruncationWindow

    def __post_init__(self):
        for n in self.entries:
            if not self.window.contains(n):
                raise WindowError(f"degree {n} outside {self.window}")
        object.__setattr__(self, "entries", {n: int(self.entries.get(n, 0)) for n in self.window.degrees()})

    def __getitem__(self, n: int) -> int:
        if not self.window.contains(n):
            raise WindowError(f"degree {n} outside {self.window}")
        return self.entries[n]

    def nonzero(self) -> Dict[int, int]:
        return {n: v for n, v in self.entries.items() if v}

    def negated(self) -> "BettiTable":
        w = TruncationWindow(-self.window.hi, -self.window.lo, self.window.word_bound, self.window.certified)
        return BettiTable({-n: v for n, v in self.entries.items()}, w)

    def restrict(self, lo: int, hi: int) -> "BettiTable":
        w = TruncationWindow(lo, hi, self.window.word_bound, self.window.certified)
        return BettiTable({n: v for n, v in self.entries.items() if lo <= n <= hi}, w)

    def same_values(self, other: "BettiTable") -> bool:
        return dict(self.entries) == dict(other.entries)


@dataclass(frozen=True)
class Violation:
    kind: str
    degree: Optional[int]
    message: str
    witnesses: Tuple[str, ...] = ()


@dataclass(frozen=True)
class ValidationReport:
    violations: Tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def first(self) -> Optional[Violation]:
        return self.violations[0] if self.violations else None

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class ChainComplex:
    """``differential[n]`` is the matrix of d_n with rows indexed by C_{n-1}.

    ``certified`` is ``None`` for a complex that is not a truncation; otherwise
    the closed range of degrees where homology is trustworthy.
    """

    basis: GradedBasis
    differential: Mapping[int, SparseMatrix] = field(default_factory=dict)
    certified: Optional[Tuple[int, int]] = None
    word_length: Optional[Mapping[str, int]] = None

    @property
    def field(self) -> FieldSpec:
        return self.basis.field

    def d(self, n: int) -> SparseMatrix:
        m = self.differential.get(n)
        if m is None:
            return SparseMatrix.zero(self.basis.dim(n - 1), self.basis.dim(n), self.field)
        return m

    def is_certified(self, n: int) -> bool:
        if self.certified is None:
            return True
        return self.certified[0] <= n <= self.certified[1]

    def support(self) -> List[int]:
        return self.basis.support()


def validate_complex(c: ChainComplex) -> ValidationReport:
    out: List[Violation] = []
    f = c.field
    for n, m in sorted(c.differential.items()):
        if m.field != f:
            out.append(Violation("field", n, f"d_{n} is over {m.field}, basis over {f}"))
            continue
        if m.shape != (c.basis.dim(n - 1), c.basis.dim(n)):
            out.append(Violation("shape", n, f"d_{n} has shape {m.shape}, expected "
                                             f"{(c.basis.dim(n - 1), c.basis.dim(n))}"))
    if out:
        return ValidationReport(tuple(out))
    for n in sorted(c.differential):
        if n - 1 not in c.differential:
            continue
        sq = c.differential[n - 1] @ c.differential[n]
        if not sq.is_zero():
            (r, col), v = min(sq.items())
            src = c.basis.labels(n)[col]
            tgt = c.basis.labels(n - 2)[r]
            out.append(Violation("d_squared", n, f"d_{n - 1} d_{n} != 0: coefficient {v} of {tgt} in d^2({src})",
                                 (src, tgt)))
            break
    return ValidationReport(tuple(out))


def _check_window(c: ChainComplex, w: TruncationWindow):
    for n in w.degrees():
        if not c.is_certified(n):
            raise WindowError(f"degree {n} outside certified range {c.certified}")


def homology_dimension(c: ChainComplex, n: int) -> int:
    dim = c.basis.dim(n)
    if dim == 0:
        return 0
    return dim - rank(c.d(n)) - rank(c.d(n + 1))


def homology_dimensions(c: ChainComplex, window) -> BettiTable:
    w = as_window(window)
    _check_window(c, w)
    ranks: Dict[int, int] = {}

    def rk(n):
        if n not in ranks:
            ranks[n] = rank(c.d(n))
        return ranks[n]

    entries = {}
    for n in w.degrees():
        dim = c.basis.dim(n)
        entries[n] = dim - rk(n) - rk(n + 1) if dim else 0
    return BettiTable(entries, w)


def homology_basis(c: ChainComplex, n: int):
    """Cycle basis of degree n together with the boundary matrix into degree n."""
    cycles = kernel_basis(c.d(n)) if c.basis.dim(n) else []
    return cycles, c.d(n + 1)


def dual_label(label: str) -> str:
    return label + "*"


def dual_complex(c: ChainComplex) -> ChainComplex:
    """Degreewise linear dual, regraded so the differential again lowers degree.

    D(C)_m = (C_{-m})^*, and D_m = (-1)^m (d_{1-m})^T.
    """
    f = c.field
    degs = {-n: tuple(dual_label(lab) for lab in labels) for n, labels in c.basis.degrees.items()}
    basis = GradedBasis(f, degs)
    diff = {}
    for n, m in c.differential.items():
        dm = 1 - n
        t = m.transpose()
        diff[dm] = t if dm % 2 == 0 else -t
    cert = None if c.certified is None else (-c.certified[1], -c.certified[0])
    wl = None if c.word_length is None else {dual_label(k): v for k, v in c.word_length.items()}
    return ChainComplex(basis, diff, cert, wl)


def _tensor_label(a: str, b: str) -> str:
    return f"({a})⊗({b})"


def tensor_complex(a: ChainComplex, b: ChainComplex, window=None) -> ChainComplex:
    """Tensor product with Koszul sign d(x⊗y) = dx⊗y + (-1)^|x| x⊗dy.

    With a window, only degrees in ``[lo-1, hi+1]`` are kept and differentials
    are stored for ``[lo, hi+1]``; the certified range is the intersection of
    the window with what both factors certify.
    """
    if a.field != b.field:
        raise FieldError(f"mixed fields {a.field} and {b.field}")
    f = a.field
    sup_a, sup_b = a.support(), b.support()
    if window is not None:
        w = as_window(window)
        keep = range(w.lo - 1, w.hi + 2)
    else:
        w = None
        keep = None
    blocks: Dict[int, List[Tuple[int, int]]] = {}
    for i in sup_a:
        for j in sup_b:
            n = i + j
            if keep is not None and n not in keep:
                continue
            blocks.setdefault(n, []).append((i, j))
    degrees: Dict[int, List[str]] = {}
    offsets: Dict[Tuple[int, int], int] = {}
    for n in sorted(blocks):
        labels: List[str] = []
        for i, j in sorted(blocks[n]):
            offsets[(i, j)] = len(labels)
            labels.extend(_tensor_label(x, y) for x in a.basis.labels(i) for y in b.basis.labels(j))
        degrees[n] = labels
    basis = GradedBasis(f, degrees)

    diff = {}
    for n in sorted(blocks):
        if n - 1 not in blocks:
            continue
        if keep is not None and n == keep[0]:
            continue
        entries = {}
        for i, j in blocks[n]:
            off = offsets[(i, j)]
            nb = b.basis.dim(j)
            # d_a ⊗ 1
            if (i - 1, j) in offsets:
                tgt = offsets[(i - 1, j)]
                for (r, c), v in a.d(i).items():
                    for y in range(nb):
                        entries[(tgt + r * nb + y, off + c * nb + y)] = v
            # (-1)^i 1 ⊗ d_b
            if (i, j - 1) in offsets:
                tgt = offsets[(i, j - 1)]
                nb1 = b.basis.dim(j - 1)
                sgn = -1 if i % 2 else 1
                for x in range(a.basis.dim(i)):
                    for (r, c), v in b.d(j).items():
                        entries[(tgt + x * nb1 + r, off + x * nb + c)] = sgn * v
        diff[n] = SparseMatrix(basis.dim(n - 1), basis.dim(n), entries, f)

    cert = _tensor_certified(a, b, w)
    return ChainComplex(basis, diff, cert)


def _tensor_certified(a: ChainComplex, b: ChainComplex, w: Optional[TruncationWindow]):
    # The caller vouches for the window when a factor is truncated: every
    # degree pair (i, j) summing into [lo, hi + 1] must be full in both factors.
    if a.certified is None and b.certified is None:
        return None if w is None else (w.lo, w.hi)
    if w is None:
        raise WindowError("tensor product of truncated complexes needs an explicit window")
    return (w.lo, w.hi)


def euler_characteristic(c: ChainComplex) -> int:
    if c.certified is not None:
        raise BoundednessError("truncated complex: Euler characteristic is not defined")
    return sum((-1 if n % 2 else 1) * c.basis.dim(n) for n in c.support())


def zero_complex(field: FieldSpec) -> ChainComplex:
    return ChainComplex(GradedBasis(field, {}), {})


def complex_from_dims(field: FieldSpec, dims: Mapping[int, int], diffs: Mapping[int, SparseMatrix] = None,
                      prefix: str = "e") -> ChainComplex:
    degrees = {n: tuple(f"{prefix}{n}_{i}" for i in range(k)) for n, k in dims.items()}
    return ChainComplex(GradedBasis(field, degrees), dict(diffs or {}))
