"""Truncated normalized bar construction B(k, A, k) and the Koszul dual.

A bar word [a1|...|as] has degree sum(|ai| + 1).  With
eps_j = sum_{i<=j} (|ai| + 1) the differential sends the i-th letter to
-(-1)^{eps_{i-1}} [..|d ai|..] (so d(sa) = -s(da)) and merges letters i, i+1
with sign (-1)^{eps_i}.  With the window
``[lo, hi]`` the complex is built on degrees ``[lo - 1, hi + 1]`` from words
of length at most ``word_bound``: degrees ``[lo, hi + 1]`` are complete, and
degree ``lo - 1`` only needs to contain the image of ``d_lo`` (words of
bounded length form a subcomplex).  That is exactly what homology on
``[lo, hi]`` requires.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .dga import Connectivity, DGAlgebra, Vector, _sign
from .exact_linear import FieldSpec, Scalar, SparseMatrix
from .graded_complex import (
    BettiTable,
    ChainComplex,
    GradedBasis,
    TruncationWindow,
    WindowError,
    as_window,
    dual_label,
    homology_dimensions,
)

Word = Tuple[str, ...]


class NotCertifiable(WindowError):
    """No truncation of the requested construction is provably exact on the window."""


_SIMPLE = re.compile(r"^[A-Za-z][A-Za-z0-9_]*$")


def bar_letter(label: str) -> str:
    if _SIMPLE.match(label):
        return label[0] + "̄" + label[1:]
    return f"s({label})"


def word_label(word: Word) -> str:
    return "[" + "|".join(bar_letter(x) for x in word) + "]"


def letter_gap(a: DGAlgebra) -> Optional[int]:
    """Smallest |shifted degree| of an ideal letter, or None for k."""
    ideal = a.ideal
    if not ideal:
        return None
    return min(abs(a.degree_of[x] + 1) for x in ideal)


def _check_connectivity(a: DGAlgebra):
    for x in a.ideal:
        d = a.degree_of[x]
        if a.connectivity is Connectivity.CONNECTIVE and d < 1:
            raise NotCertifiable(f"non-unit element {x} in degree {d} of a connective algebra")
        if a.connectivity is Connectivity.SIMPLY_COCONNECTIVE and d > -2:
            raise NotCertifiable(f"element {x} in degree {d} violates simple coconnectivity")


def certify_window(a, lo: int, hi: int) -> TruncationWindow:
    """Certified word bound for constructions on ``[lo, hi]``.

    Connective: a word of length s has degree >= gap*s.  Simply coconnective:
    degree <= -gap*s.  Words in the complete range therefore have length at
    most ``|far end| // gap``; that number is the word bound.
    """
    if lo > hi:
        raise NotCertifiable(f"empty window [{lo}, {hi}]")
    a = materialize(a, *bar_needs(a.connectivity, lo, hi))
    gap = letter_gap(a)
    if gap is None:
        return TruncationWindow(lo, hi, 0, True)
    _check_connectivity(a)
    if a.connectivity is Connectivity.CONNECTIVE:
        if lo < 0:
            raise NotCertifiable(f"window [{lo}, {hi}] reaches negative degrees of a connective construction")
        if a.truncated_at is not None and a.truncated_at < hi + 1:
            raise NotCertifiable(f"algebra is only exact up to degree {a.truncated_at}; need {hi + 1}")
        s_max = (hi + 1) // gap
    else:
        if hi > 0:
            raise NotCertifiable(f"window [{lo}, {hi}] reaches positive degrees of a coconnective construction")
        if a.truncated_at is not None and a.truncated_at > lo - 2:
            raise NotCertifiable(f"algebra is only exact down to degree {a.truncated_at}; need {lo - 2}")
        s_max = abs(lo) // gap
    return TruncationWindow(lo, hi, s_max, True)


def materialize(a, lo: int, hi: int) -> DGAlgebra:
    """Expand a lazy recipe far enough for constructions on ``[lo, hi]``."""
    if isinstance(a, DGAlgebra):
        return a
    return a.expand(lo, hi)


def _require(w) -> TruncationWindow:
    if not isinstance(w, TruncationWindow):
        raise WindowError("construction needs a window from certify_window")
    if not w.certified:
        raise WindowError(f"window {w} is not certified")
    return w


def enumerate_words(letters: Sequence[Tuple[str, int]], max_len: int, lo: int, hi: int,
                    start: int = 0) -> List[Tuple[Word, int]]:
    """All words of length <= max_len with start + sum(shifted) in [lo, hi].

    Letter shifts must all share one sign (checked by certification), which
    makes partial sums monotone and the search finite.
    """
    if not letters:
        return [((), start)] if lo <= start <= hi else []
    positive = letters[0][1] > 0
    out: List[Tuple[Word, int]] = []

    def rec(word: List[str], deg: int):
        if lo <= deg <= hi:
            out.append((tuple(word), deg))
        if len(word) == max_len:
            return
        for lab, sh in letters:
            nd = deg + sh
            if positive and nd > hi:
                continue
            if not positive and nd < lo:
                continue
            word.append(lab)
            rec(word, nd)
            word.pop()

    rec([], start)
    return out


@dataclass(frozen=True)
class BarComplex:
    complex: ChainComplex
    words: Mapping[str, Word]
    word_length: Mapping[str, int]
    window: TruncationWindow
    algebra: DGAlgebra

    def betti(self, window=None) -> BettiTable:
        w = self.window if window is None else as_window(window)
        return homology_dimensions(self.complex, w)


def _shifts(a: DGAlgebra) -> List[Tuple[str, int]]:
    return sorted(((x, a.degree_of[x] + 1) for x in a.ideal), key=lambda t: (abs(t[1]), t[0]))


def _assemble(field: FieldSpec, entries_by_deg: Dict[int, List[Tuple[str, int]]], lo: int, hi: int,
              differential_of) -> Tuple[Dict[int, SparseMatrix], Dict[object, int]]:
    """Shared matrix assembly for bar-type complexes.

    ``entries_by_deg[n]`` lists ``(key, word_length)``; ``differential_of(key)``
    yields ``(target_key, coeff)`` pairs.
    """
    index: Dict[int, Dict[object, int]] = {}
    for n, items in entries_by_deg.items():
        index[n] = {k: i for i, (k, _) in enumerate(items)}
    lengths: Dict[object, int] = {k: s for items in entries_by_deg.values() for k, s in items}
    diff: Dict[int, SparseMatrix] = {}
    for n in range(lo, hi + 2):
        src = entries_by_deg.get(n, [])
        tgt = index.get(n - 1, {})
        if not src or not tgt:
            continue
        acc: Dict[Tuple[int, int], Scalar] = {}
        for j, (key, s) in enumerate(src):
            for t, c in differential_of(key):
                i = tgt.get(t)
                if i is None:
                    raise RuntimeError(f"differential leaves the built complex: {key} -> {t}")
                ds = lengths[t] - s
                if ds not in (0, -1):
                    raise RuntimeError(f"word-length filtration violated: {key} -> {t}")
                acc[(i, j)] = field.add(acc.get((i, j), field.zero()), c)
        m = SparseMatrix(len(tgt), len(src), acc, field)
        if not m.is_zero():
            diff[n] = m
    return diff, lengths


def bar_construction(a: DGAlgebra, w: TruncationWindow) -> BarComplex:
    w = _require(w)
    f = a.field
    deg = a.degree_of
    words = enumerate_words(_shifts(a), w.word_bound, w.lo - 1, w.hi + 1)
    by_deg: Dict[int, List[Tuple[Word, int]]] = {}
    for word, n in words:
        by_deg.setdefault(n, []).append((word, len(word)))
    for n in by_deg:
        by_deg[n].sort(key=lambda t: (t[1], t[0]))

    def diff(word: Word):
        eps = 0
        out = []
        for i, x in enumerate(word):
            s_prev = eps
            eps += deg[x] + 1
            for t, c in a.d(x).items():
                out.append((word[:i] + (t,) + word[i + 1:], f.mul(_sign(f, s_prev + 1), c)))
            if i + 1 < len(word):
                for t, c in a.mul(x, word[i + 1]).items():
                    out.append((word[:i] + (t,) + word[i + 2:], f.mul(_sign(f, eps), c)))
        return out

    mats, lengths = _assemble(f, by_deg, w.lo, w.hi, diff)
    labels = {n: tuple(word_label(wd) for wd, _ in items) for n, items in by_deg.items()}
    basis = GradedBasis(f, labels)
    wmap = {word_label(wd): wd for items in by_deg.values() for wd, _ in items}
    wl = {lab: len(wd) for lab, wd in wmap.items()}
    cx = ChainComplex(basis, mats, (w.lo, w.hi), wl)
    return BarComplex(cx, wmap, wl, w, a)


# --- Koszul dual ---------------------------------------------------------------

def koszul_dual(a: DGAlgebra, w: TruncationWindow) -> DGAlgebra:
    """Graded dual of the truncated bar complex with the concatenation product.

    phi_u · phi_v = (-1)^{|u||v|} phi_{uv}, the dual of deconcatenation, and
    D(phi) = (-1)^{|phi|} phi∘d.  The result is a truncated algebra exact on
    the dual of the complete bar degrees.
    """
    w = _require(w)
    f = a.field
    if a.is_unit_algebra:
        return DGAlgebra(f, [(dual_label(word_label(())), 0)], dual_label(word_label(())),
                         connectivity=a.connectivity, name=_dual_name(a))
    if not (w.lo - 1 <= 0 <= w.hi + 1):
        raise WindowError(f"bar window {w} must reach degree 0 to contain the unit")
    bar = bar_construction(a, w)
    cx = bar.complex
    full_lo, full_hi = w.lo, w.hi + 1
    basis: List[Tuple[str, int]] = []
    label_of: Dict[Word, str] = {}
    for n in range(full_lo, full_hi + 1):
        for lab in cx.basis.labels(n):
            word = bar.words[lab]
            dl = dual_label(lab)
            basis.append((dl, -n))
            label_of[word] = dl
    deg_of_word = {word: sum(a.degree_of[x] + 1 for x in word) for word in label_of}

    # concatenation product
    prod: Dict[Tuple[str, str], Vector] = {}
    words = list(label_of)
    for u in words:
        for v in words:
            if not u or not v:
                continue
            uv = u + v
            lab = label_of.get(uv)
            if lab is None:
                continue
            s = _sign(f, deg_of_word[u] * deg_of_word[v])
            prod[(label_of[u], label_of[v])] = {lab: s}

    # transpose of the bar differential, sign (-1)^m in dual degree m
    diff: Dict[str, Vector] = {}
    for n in range(full_lo, full_hi):
        m_dual = -n
        mat = cx.differential.get(n + 1)
        if mat is None:
            continue
        rows = cx.basis.labels(n)
        cols = cx.basis.labels(n + 1)
        s = _sign(f, m_dual)
        for (r, c), v in mat.items():
            src = label_of[bar.words[rows[r]]]
            tgt = label_of[bar.words[cols[c]]]
            diff.setdefault(src, {})[tgt] = f.mul(s, v)

    conn = a.connectivity.flipped()
    trunc = -full_hi if a.connectivity is Connectivity.CONNECTIVE else -full_lo
    return DGAlgebra(f, basis, label_of[()], prod, diff, conn, trunc, _dual_name(a))


def _dual_name(a: DGAlgebra) -> str:
    return f"D({a.name})" if a.name else "D(?)"


def dual_bar_window(a_conn: Connectivity, lo: int, hi: int) -> Tuple[int, int]:
    """Bar window whose Koszul dual supports constructions on ``[lo, hi]``.

    A connective dual must be exact up to ``hi + 1``; a coconnective dual down
    to ``lo - 2``.
    """
    if a_conn is Connectivity.SIMPLY_COCONNECTIVE:
        return (-(max(hi, 0) + 1), 0)
    return (0, max(1 - lo, 0))


def bar_needs(a_conn: Connectivity, lo: int, hi: int) -> Tuple[int, int]:
    """Degree range of the algebra that a bar/Hochschild window ``[lo, hi]`` touches."""
    if a_conn is Connectivity.CONNECTIVE:
        return (0, hi + 1)
    return (lo - 2, 0)


def koszul_dual_covering(a, lo: int, hi: int, extra_words: int = 0) -> DGAlgebra:
    """Koszul dual truncated generously enough for homology, bar and Hochschild
    constructions on the dual-degree window ``[lo, hi]``."""
    conn = a.connectivity
    blo, bhi = dual_bar_window(conn, lo, hi)
    need = bar_needs(conn, blo, bhi)
    alg = materialize(a, *need)
    w = certify_window(alg, blo, bhi)
    if extra_words:
        w = w.with_word_bound(w.word_bound + extra_words)
    return koszul_dual(alg, w)


def koszul_dual_homology(a, lo: int, hi: int, extra_words: int = 0) -> BettiTable:
    d = koszul_dual_covering(a, lo, hi, extra_words)
    from .dga import underlying_complex
    return homology_dimensions(underlying_complex(d), (lo, hi))


def bar_homology(a, lo: int, hi: int, extra_words: int = 0) -> BettiTable:
    alg = materialize(a, *bar_needs(a.connectivity, lo, hi))
    w = certify_window(alg, lo, hi)
    if extra_words:
        w = w.with_word_bound(w.word_bound + extra_words)
    return bar_construction(alg, w).betti()


def double_centralizer_report(a, window):
    """Compare H(A) with H(DDA) on the window (in A's degrees)."""
    from .duality import DualityReport, verdict_for
    from .dga import underlying_complex

    w = as_window(window)
    lo, hi = w.lo, w.hi
    conn = a.connectivity
    base = materialize(a, *bar_needs(conn, lo, hi))
    if base.is_unit_algebra:
        left = homology_dimensions(underlying_complex(base), w)
        return DualityReport(left, left, w, verdict_for(left, left), "H(A)", "H(DDA)")
    # the dual of A has the other connectivity; its dual must cover [lo, hi]
    blo, bhi = dual_bar_window(conn.flipped(), lo, hi)
    nlo, nhi = bar_needs(conn.flipped(), blo, bhi)
    da = koszul_dual_covering(a, nlo, nhi)
    dda = koszul_dual(da, certify_window(da, blo, bhi))
    left = homology_dimensions(underlying_complex(base), w)
    right = homology_dimensions(underlying_complex(dda), w)
    return DualityReport(left, right, w, verdict_for(left, right),
                         f"H(A) from the underlying complex of {base.name}",
                         f"H(DDA): dual of the bar complex of {da.name} on [{blo}, {bhi}]")
