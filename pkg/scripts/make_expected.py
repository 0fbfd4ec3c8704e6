"""Regenerate the corpus expected tables from tests/oracles.py.

    python scripts/make_expected.py [--check]

Writes src/koszulthh/corpus_data/*.csv and manifest.json.  Only the oracles
are used; the package itself is consulted for the catalog and the window
convention, never for a homology computation.
"""

import argparse
import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "tests"))
sys.path.insert(0, str(ROOT / "src"))

import oracles as O  # noqa: E402
from koszulthh.corpus import CATALOG, data_filename, kind_window, kinds_for, build_algebra  # noqa: E402
from koszulthh.exact_linear import F2, QQ  # noqa: E402

OUT = ROOT / "src" / "koszulthh" / "corpus_data"

LEFT_NOTE = "negated hh oracle (linear duality preserves dimensions degreewise)"


def expected_tables(name, char):
    """(kind -> (table, note)) for one entry; windows are filled in by the caller."""
    N = CATALOG[name]
    big = N + 2
    if name == "unit":
        one = {0: 1}
        note = "trivial: k has homology k in degree 0"
        return {k: (one, note) for k in ("hh", "koszul-dual-homology", "duality-left", "duality-right")}
    if name == "proj-plane-like":
        hh = O.hh_truncated_poly(3, -2, char, -big, 0)
        return {
            "hh": (hh, "periodic bimodule resolution of k[x]/x^3"),
            "koszul-dual-homology": (O.negate(O.tor_truncated_poly(3, -2, -big, 0)),
                                     "minimal resolution of k over k[x]/x^3 (Tor), negated"),
            "duality-left": (O.negate(hh), LEFT_NOTE),
            "duality-right": (O.negate(hh), "duality prediction applied to the resolution oracle; "
                                            "agrees with the Sullivan-model count for the free loop space of CP^2"),
        }
    kind, *params = name.split(":")
    if kind == "poly":
        n = int(params[0])
        if n % 2:
            hh, note = O.hh_polynomial_even(n - 1, 0, big), "small complex k[y] ⊗ Λ(σy) with zero differential"
        else:
            hh, note = O.hh_tensor_algebra(1, n - 1, char, 0, big), "signed cyclic word count for a free algebra"
        return {
            "hh": (hh, note),
            "koszul-dual-homology": ({0: 1, -n: 1}, "Tor of a free algebra: k ⊕ k(sy), negated"),
        }
    if kind in ("sphere-odd", "sphere-even"):
        g, d = 1, -int(params[0])
    else:
        g, d = int(params[0]), int(params[1])
    hh = O.hh_square_zero(g, d, char, -big, 0)
    return {
        "hh": (hh, "signed cyclic word count for a square-zero algebra (invariants and coinvariants of rotation)"),
        "koszul-dual-homology": (O.words_count(g, -(d + 1), 0, big), "word count in the free dual algebra"),
        "duality-left": (O.negate(hh), LEFT_NOTE),
        "duality-right": (O.hh_tensor_algebra(g, -(d + 1), char, 0, big),
                          "signed cyclic word count for the free dual algebra"),
    }


def render(table, lo, hi):
    rows = ["degree,dimension"] + [f"{m},{table.get(m, 0)}" for m in range(lo, hi + 1)]
    return "\n".join(rows) + "\n"


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--check", action="store_true", help="fail if files on disk differ")
    args = ap.parse_args(argv)
    OUT.mkdir(parents=True, exist_ok=True)
    manifest = {"entries": {}}
    stale = []
    for name, N in CATALOG.items():
        prov = {}
        for field, char in ((QQ, 0), (F2, 2)):
            a = build_algebra(name, field)
            tables = expected_tables(name, char)
            for kind in kinds_for(a):
                table, note = tables[kind]
                w = kind_window(name, kind, a.connectivity, N)
                text = render(table, w.lo, w.hi)
                path = OUT / data_filename(name, kind, field)
                if args.check:
                    if not path.exists() or path.read_text() != text:
                        stale.append(path.name)
                else:
                    path.write_text(text)
                prov[kind] = note
        manifest["entries"][name] = {"size": N, "provenance": prov}
    mpath = OUT / "manifest.json"
    mtext = json.dumps(manifest, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    if args.check:
        if not mpath.exists() or mpath.read_text() != mtext:
            stale.append(mpath.name)
        if stale:
            print("stale:", *stale)
            return 1
        print("corpus data up to date")
        return 0
    mpath.write_text(mtext)
    print(f"wrote {len(list(OUT.glob('*.csv')))} tables to {OUT}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
