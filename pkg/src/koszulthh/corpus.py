"""Built-in example algebras and their checked-in expected Betti tables.

Expected tables live in ``corpus_data/`` as CSV in the CLI's own format, one
file per (entry, kind, field), with provenance notes in ``manifest.json``.
They are produced by ``scripts/make_expected.py`` from the independent
oracles in ``tests/oracles.py``, never from this package's engine.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Dict, List, Mapping, Optional, Tuple

from .dga import Connectivity, DGAlgebra, unit_algebra
from .exact_linear import QQ, FieldSpec
from .graded_complex import BettiTable, TruncationWindow, as_window

KINDS = ("hh", "koszul-dual-homology", "duality-left", "duality-right")

# shipped instances and the size N of their default windows
CATALOG: Dict[str, int] = {
    "unit": 4,
    "sphere-odd:3": 12,
    "sphere-odd:5": 12,
    "sphere-even:2": 12,
    "sphere-even:4": 12,
    "proj-plane-like": 10,
    "poly:3": 12,
    "poly:2": 12,
    "sq0:2:-2": 5,
    "sq0:3:-3": 5,
}

FIELDS = ("Q", "F2")


class PolyRecipe:
    """k[y] with |y| = n - 1 >= 1, expanded lazily up to a requested degree.

    For even n the generator is odd and this is the free algebra on y
    (y·y = y^2 != 0), the loop-space model of an even sphere.
    """

    connectivity = Connectivity.CONNECTIVE
    is_finite = False

    def __init__(self, n: int, field: FieldSpec = QQ):
        if n < 2:
            raise ValueError("poly:n needs n >= 2")
        self.n = n
        self.field = field
        self.name = f"poly:{n}"

    @staticmethod
    def label(k: int) -> str:
        return {0: "1", 1: "y"}.get(k, f"y^{k}")

    def expand(self, lo: int, hi: int) -> DGAlgebra:
        top = max(hi, 0)
        e = self.n - 1
        ks = range(top // e + 1)
        basis = [(self.label(k), k * e) for k in ks]
        prod = {(self.label(i), self.label(j)): {self.label(i + j): 1}
                for i in ks for j in ks if i and j and i + j in ks}
        return DGAlgebra(self.field, basis, "1", prod, {}, Connectivity.CONNECTIVE, top, self.name)

    def __repr__(self):
        return f"PolyRecipe({self.n}, {self.field})"


def square_zero(field: FieldSpec, g: int, d: int, name: str = "") -> DGAlgebra:
    basis = [("1", 0)] + [(f"x{i}" if g > 1 else "x", d) for i in range(1, g + 1)]
    return DGAlgebra(field, basis, "1", {}, {}, Connectivity.SIMPLY_COCONNECTIVE, None, name)


def truncated_poly(field: FieldSpec, e: int, n: int, name: str = "") -> DGAlgebra:
    """k[x]/x^n with |x| = e < 0."""
    lab = lambda k: {0: "1", 1: "x"}.get(k, f"x^{k}")
    basis = [(lab(k), k * e) for k in range(n)]
    prod = {(lab(i), lab(j)): {lab(i + j): 1} for i in range(1, n) for j in range(1, n) if i + j < n}
    return DGAlgebra(field, basis, "1", prod, {}, Connectivity.SIMPLY_COCONNECTIVE, None, name)


_SPEC = re.compile(r"^(sphere-odd|sphere-even|poly):(\d+)$|^sq0:(\d+):(-?\d+)$")


def build_algebra(name: str, field: FieldSpec = QQ):
    """Algebra (or lazy recipe) for any well-formed corpus name."""
    if name == "unit":
        a = unit_algebra(field)
        a.name = "unit"
        return a
    if name == "proj-plane-like":
        return truncated_poly(field, -2, 3, name)
    m = _SPEC.match(name)
    if not m:
        raise LookupError(f"unknown corpus entry {name!r}")
    if m.group(1):
        kind, n = m.group(1), int(m.group(2))
        if kind == "poly":
            return PolyRecipe(n, field)
        if kind == "sphere-odd" and (n % 2 == 0 or n < 3):
            raise LookupError(f"{name}: odd spheres need odd n >= 3")
        if kind == "sphere-even" and (n % 2 or n < 2):
            raise LookupError(f"{name}: even spheres need even n >= 2")
        return square_zero(field, 1, -n, name)
    g, d = int(m.group(3)), int(m.group(4))
    if g < 1 or d > -2:
        raise LookupError(f"{name}: need g >= 1 and d <= -2")
    return square_zero(field, g, d, name)


def sphere_name(n: int) -> str:
    return f"sphere-odd:{n}" if n % 2 else f"sphere-even:{n}"


def field_slug(field: FieldSpec) -> str:
    if field.is_rational:
        return "Q"
    return f"F{field.characteristic}"


def kind_window(name: str, kind: str, connectivity: Connectivity, size: int) -> TruncationWindow:
    natural = (0, size) if connectivity is Connectivity.CONNECTIVE else (-size, 0)
    if kind == "hh":
        return TruncationWindow(*natural)
    if kind == "koszul-dual-homology":
        return TruncationWindow(-natural[1], -natural[0])
    if kind in ("duality-left", "duality-right"):
        return TruncationWindow(-size, size)
    raise LookupError(f"unknown computation kind {kind!r}")


def kinds_for(a) -> Tuple[str, ...]:
    if a.is_finite:
        return KINDS
    return KINDS[:2]


def data_filename(name: str, kind: str, field: FieldSpec) -> str:
    return f"{name.replace(':', '_')}__{kind}__{field_slug(field)}.csv"


def parse_table_csv(text: str) -> BettiTable:
    lines = text.strip("\n").split("\n")
    if lines[0] != "degree,dimension":
        raise ValueError(f"unexpected header {lines[0]!r}")
    rows = [tuple(int(x) for x in ln.split(",")) for ln in lines[1:]]
    if not rows:
        raise ValueError("empty table")
    return BettiTable(dict(rows), TruncationWindow(rows[0][0], rows[-1][0]))


@lru_cache(maxsize=None)
def manifest() -> dict:
    return json.loads(resources.files(__package__).joinpath("corpus_data/manifest.json").read_text())


@lru_cache(maxsize=None)
def _load(name: str, kind: str, slug: str) -> BettiTable:
    fn = f"{name.replace(':', '_')}__{kind}__{slug}.csv"
    path = resources.files(__package__).joinpath("corpus_data").joinpath(fn)
    if not path.is_file():
        raise LookupError(f"no expected {kind} table for {name} over {slug}")
    return parse_table_csv(path.read_text())


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    algebra: object
    default_window: TruncationWindow
    expected: Mapping[str, BettiTable]
    provenance: Mapping[str, str] = field(default_factory=dict)
    field: FieldSpec = QQ

    @property
    def provenance_note(self) -> str:
        return "; ".join(f"{k}: {v}" for k, v in sorted(self.provenance.items()))

    def window(self, kind: str) -> TruncationWindow:
        return self.expected[kind].window

    def materialized(self, lo: Optional[int] = None, hi: Optional[int] = None) -> DGAlgebra:
        if isinstance(self.algebra, DGAlgebra):
            return self.algebra
        w = self.default_window
        return self.algebra.expand(w.lo if lo is None else lo, (w.hi + 1) if hi is None else hi)


def corpus_names() -> List[str]:
    return list(CATALOG)


def corpus_get(name: str, field: FieldSpec = QQ) -> CorpusEntry:
    if name not in CATALOG:
        raise LookupError(f"unknown corpus entry {name!r}; known: {', '.join(CATALOG)}")
    slug = field_slug(field)
    if slug not in FIELDS:
        raise LookupError(f"corpus tables exist only over {', '.join(FIELDS)}")
    a = build_algebra(name, field)
    size = CATALOG[name]
    expected = {k: _load(name, k, slug) for k in kinds_for(a)}
    notes = manifest()["entries"][name]["provenance"]
    return CorpusEntry(name, a, kind_window(name, "hh", a.connectivity, size), expected,
                       {k: notes[k] for k in expected}, field)


def corpus_expected(name: str, kind: str, field: FieldSpec = QQ) -> BettiTable:
    entry = corpus_get(name, field)
    if kind not in entry.expected:
        raise LookupError(f"{name} has no expected {kind!r} table")
    return entry.expected[kind]


def free_loop_sphere_betti(n: int, w, field: FieldSpec = QQ) -> BettiTable:
    """Betti numbers of the free loop space of S^n.

    Degree 0 plus a pair of classes in degrees m(n-1), m(n-1)+1 for every
    m >= 1, except that for even n and odd characteristic the pairs with
    even m are missing.
    """
    w = as_window(w)
    entries: Dict[int, int] = {0: 1} if w.contains(0) else {}
    m = 1
    while m * (n - 1) <= w.hi:
        if n % 2 or m % 2 or field.characteristic == 2:
            for deg in (m * (n - 1), m * (n - 1) + 1):
                if w.contains(deg):
                    entries[deg] = entries.get(deg, 0) + 1
        m += 1
    return BettiTable(entries, TruncationWindow(w.lo, w.hi))
