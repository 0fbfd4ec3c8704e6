"""Dimension-level check of D(THH(A)) ≃ THH(B^op) with B the Koszul dual of A."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

from .bar_koszul import koszul_dual_covering
from .dga import Connectivity, opposite_dga
from .graded_complex import BettiTable, TruncationWindow, as_window, dual_complex, homology_dimensions
from .hochschild import hochschild_for


class HypothesisViolation(ValueError):
    """The input is outside the finiteness hypothesis of the duality statement."""


@dataclass(frozen=True)
class Verdict:
    passed: bool
    first_mismatch: Optional[int] = None

    def __str__(self):
        if self.passed:
            return "pass"
        if self.first_mismatch is None:
            return "fail"
        return f"fail at degree {self.first_mismatch}"


@dataclass(frozen=True)
class DualityReport:
    left_table: BettiTable
    right_table: BettiTable
    compared_window: TruncationWindow
    verdict: Verdict
    left_provenance: str = ""
    right_provenance: str = ""
    hypothesis_violated: bool = False
    notes: Dict[str, object] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict.passed


def verdict_for(left: BettiTable, right: BettiTable, window=None) -> Verdict:
    w = as_window(window) if window is not None else left.window
    for m in w.degrees():
        lv = left.entries.get(m, 0)
        rv = right.entries.get(m, 0)
        if lv != rv:
            return Verdict(False, m)
    return Verdict(True)


def _side(conn: Connectivity, lo: int, hi: int) -> Optional[Tuple[int, int]]:
    """Intersect [lo, hi] with the degrees where a construction on an algebra of
    this connectivity can be nonzero."""
    if conn is Connectivity.CONNECTIVE:
        lo = max(lo, 0)
    else:
        hi = min(hi, 0)
    return (lo, hi) if lo <= hi else None


def _pad(table: Optional[BettiTable], w: TruncationWindow) -> BettiTable:
    entries = {} if table is None else {n: v for n, v in table.entries.items() if w.contains(n)}
    return BettiTable(entries, TruncationWindow(w.lo, w.hi))


def verify_thh_duality(a, w, extra_words: int = 0, strict: bool = False) -> DualityReport:
    """left[m] = H_m of the linear dual of HC(A); right[m] = HH_m of the opposite Koszul dual.

    Both sides are computed on the part of ``w`` where they can be nonzero and
    padded with zeros elsewhere.  ``extra_words`` raises every word bound
    past the certified one (used to test truncation stability).

    Inputs that are infinite or not simply coconnective still get a report,
    flagged ``hypothesis_violated``; with ``strict`` they raise instead.
    """
    w = as_window(w)
    conn = a.connectivity
    violated = not (a.is_finite and conn is Connectivity.SIMPLY_COCONNECTIVE)
    notes: Dict[str, object] = {}
    if violated:
        why = "infinite total dimension" if not a.is_finite else "not simply coconnective"
        notes["hypothesis"] = f"input is {why}; the duality statement needs a finitely built algebra"
        if strict:
            raise HypothesisViolation(notes["hypothesis"])

    left = None
    hc_rng = _side(conn, -w.hi, -w.lo)
    if hc_rng is not None:
        hc = hochschild_for(a, *hc_rng, extra_words=extra_words)
        dual = dual_complex(hc.complex)
        left = homology_dimensions(dual, (-hc_rng[1], -hc_rng[0]))

    right = None
    dual_rng = _side(conn.flipped(), w.lo, w.hi)
    name = getattr(a, "name", "")
    if dual_rng is not None:
        b = koszul_dual_covering(a, *dual_rng, extra_words=extra_words)
        right = hochschild_for(opposite_dga(b), *dual_rng, extra_words=extra_words).betti()

    lt, rt = _pad(left, w), _pad(right, w)
    return DualityReport(
        lt, rt, w, verdict_for(lt, rt),
        f"dual of the Hochschild complex of {name or 'A'} on {hc_rng}",
        f"Hochschild complex of the opposite Koszul dual of {name or 'A'} on {dual_rng}",
        violated, notes,
    )


def free_loop_profile(n: int, w, field=None, via_dual: bool = False) -> DualityReport:
    """HH of the loop-space model of S^n against the closed-form Betti numbers of LS^n.

    By default the loop model is the small strict one from the corpus; with
    ``via_dual`` it is the truncated Koszul dual of the sphere cochain model.
    """
    from .corpus import build_algebra, free_loop_sphere_betti, sphere_name
    from .exact_linear import QQ

    if n < 2:
        raise ValueError("free loop profile needs n >= 2")
    f = QQ if field is None else field
    w = as_window(w)
    if via_dual:
        sphere = build_algebra(sphere_name(n), f)
        rng = _side(Connectivity.CONNECTIVE, w.lo, w.hi)
        model = koszul_dual_covering(sphere, *rng) if rng else None
        how = f"Koszul dual of {sphere.name}"
    else:
        model = build_algebra(f"poly:{n}", f)
        rng = _side(model.connectivity, w.lo, w.hi)
        how = model.name
    left = hochschild_for(model, *rng).betti() if rng else None
    lt = _pad(left, w)
    rt = free_loop_sphere_betti(n, w, f)
    return DualityReport(lt, rt, w, verdict_for(lt, rt),
                         f"Hochschild homology of {how}",
                         f"closed-form Betti numbers of the free loop space of S^{n} over {f}")
