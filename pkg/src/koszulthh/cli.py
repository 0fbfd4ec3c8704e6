"""Command-line interface: ``koszulthh <command> [DGA_FILE] [options]``.

Exit codes: 0 success/pass, 1 validation failure, 2 parse or usage error,
3 window not certifiable, 4 verdict fail, 5 hypothesis violation.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from .bar_koszul import bar_homology, double_centralizer_report, koszul_dual_homology, materialize
from .corpus import CATALOG, build_algebra, corpus_get, kinds_for, parse_table_csv
from .dga import Connectivity, DGAlgebra, underlying_complex, validate_dga
from .duality import DualityReport, verify_thh_duality
from .exact_linear import QQ, FieldError, FieldSpec
from .graded_complex import BettiTable, TruncationWindow, WindowError, homology_dimensions
from .hochschild import hh_dimensions, shuffle_monoidality_check

EXIT_OK, EXIT_INVALID, EXIT_PARSE, EXIT_WINDOW, EXIT_FAIL, EXIT_HYPOTHESIS = range(6)

COMMANDS = ("validate", "homology", "bar", "koszul-dual", "hh", "duality-check",
            "double-centralizer", "shuffle-check", "corpus")


class DgaParseError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


class DgaValidationError(ValueError):
    def __init__(self, report):
        self.report = report
        v = report.first
        super().__init__(f"{v.kind} (degree {v.degree}): {v.message}")


class UsageError(ValueError):
    pass


# --- DGA files -------------------------------------------------------------------

def _line_of(text: str, needle: str) -> Optional[int]:
    m = re.search(re.escape(json.dumps(needle)), text)
    return text.count("\n", 0, m.start()) + 1 if m else None


def _vector(items, where: str, text: str) -> Dict[str, str]:
    if not isinstance(items, list):
        raise DgaParseError(f"{where}: result must be a list", _line_of(text, where))
    out = {}
    for it in items:
        if not isinstance(it, dict) or "basis" not in it or "coeff" not in it:
            raise DgaParseError(f"{where}: each term needs 'basis' and 'coeff'", _line_of(text, where))
        c = it["coeff"]
        if not isinstance(c, (str, int)) or isinstance(c, bool):
            raise DgaParseError(f"{where}: coefficient {c!r} must be an integer or a string",
                                _line_of(text, str(it["basis"])))
        out[it["basis"]] = str(c)
    return out


def load_dga(text: str, name: str = "") -> DGAlgebra:
    """Parse the JSON DGA format; raises DgaParseError or DgaValidationError."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise DgaParseError(e.msg, e.lineno) from None
    if not isinstance(doc, dict):
        raise DgaParseError("top level must be an object", 1)
    for key in ("basis", "unit"):
        if key not in doc:
            raise DgaParseError(f"missing required key {key!r}")
    try:
        fld = FieldSpec.parse(str(doc.get("field", "Q")))
    except (FieldError, ValueError) as e:
        raise DgaParseError(str(e), _line_of(text, "field")) from None
    basis = []
    for b in doc["basis"]:
        if not isinstance(b, dict) or not isinstance(b.get("name"), str) or not isinstance(b.get("degree"), int):
            raise DgaParseError(f"basis entry {b!r} needs a string name and an integer degree",
                                _line_of(text, b.get("name", "basis") if isinstance(b, dict) else "basis"))
        basis.append((b["name"], b["degree"]))
    names = {n for n, _ in basis}
    prod = {}
    for p in doc.get("products", []):
        if not isinstance(p, dict) or not {"left", "right", "result"} <= set(p):
            raise DgaParseError(f"product entry {p!r} needs left, right, result", _line_of(text, "products"))
        prod[(p["left"], p["right"])] = _vector(p["result"], f"{p['left']}*{p['right']}", text)
    diff = {}
    for d in doc.get("differential", []):
        if not isinstance(d, dict) or not {"on", "result"} <= set(d):
            raise DgaParseError(f"differential entry {d!r} needs on, result", _line_of(text, "differential"))
        diff[d["on"]] = _vector(d["result"], f"d({d['on']})", text)
    conn_text = doc.get("connectivity")
    if conn_text is None:
        ideal = [deg for n, deg in basis if n != doc["unit"]]
        conn = Connectivity.CONNECTIVE if ideal and min(ideal) > 0 else Connectivity.SIMPLY_COCONNECTIVE
    else:
        try:
            conn = Connectivity.parse(conn_text)
        except ValueError as e:
            raise DgaParseError(str(e), _line_of(text, conn_text)) from None
    # labels used in products/differentials must exist; report with a line
    for (l, r), vec in prod.items():
        for lab in (l, r, *vec):
            if lab not in names:
                raise DgaParseError(f"unknown basis element {lab!r}", _line_of(text, lab))
    for l, vec in diff.items():
        for lab in (l, *vec):
            if lab not in names:
                raise DgaParseError(f"unknown basis element {lab!r}", _line_of(text, lab))
    try:
        a = DGAlgebra(fld, basis, doc["unit"], prod, diff, conn, None, doc.get("name", name))
    except (ValueError, ZeroDivisionError) as e:
        raise DgaParseError(str(e)) from None
    rep = validate_dga(a)
    if not rep.ok:
        raise DgaValidationError(rep)
    return a


def parse_dga_file(path) -> DGAlgebra:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as e:
        raise DgaParseError(f"cannot read {p}: {e.strerror}") from None
    return load_dga(text, p.stem)


# --- reports -------------------------------------------------------------------

@dataclass(frozen=True)
class ReportDocument:
    command: str
    source: str
    field: str
    window: Tuple[int, int]
    columns: Tuple[str, ...]
    rows: Tuple[Tuple[int, ...], ...]
    provenance: Tuple[str, ...] = ()
    verdict: Optional[str] = None
    first_mismatch: Optional[int] = None
    hypothesis_violated: bool = False
    notes: Tuple[Tuple[str, str], ...] = ()

    @classmethod
    def from_table(cls, t: BettiTable, command: str, source: str, fld: FieldSpec,
                   provenance: Sequence[str] = ()) -> "ReportDocument":
        rows = tuple((m, t.entries[m]) for m in t.window.degrees())
        return cls(command, source, str(fld), (t.window.lo, t.window.hi), ("degree", "dimension"), rows,
                   tuple(provenance))

    @classmethod
    def from_duality(cls, r: DualityReport, command: str, source: str, fld: FieldSpec) -> "ReportDocument":
        w = r.compared_window
        rows = tuple((m, r.left_table.entries.get(m, 0), r.right_table.entries.get(m, 0)) for m in w.degrees())
        notes = tuple(sorted((str(k), str(v)) for k, v in r.notes.items()))
        return cls(command, source, str(fld), (w.lo, w.hi), ("degree", "left", "right"), rows,
                   (r.left_provenance, r.right_provenance), "pass" if r.passed else "fail",
                   r.verdict.first_mismatch, r.hypothesis_violated, notes)

    def table(self, column: int = 1) -> BettiTable:
        return BettiTable({row[0]: row[column] for row in self.rows}, TruncationWindow(*self.window))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["window"] = {"lo": self.window[0], "hi": self.window[1]}
        d["rows"] = [list(r) for r in self.rows]
        d["notes"] = dict(self.notes)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ReportDocument":
        return cls(d["command"], d["source"], d["field"], (d["window"]["lo"], d["window"]["hi"]),
                   tuple(d["columns"]), tuple(tuple(r) for r in d["rows"]), tuple(d["provenance"]),
                   d["verdict"], d["first_mismatch"], d["hypothesis_violated"],
                   tuple(sorted(d["notes"].items())))

    @classmethod
    def from_json(cls, text: str) -> "ReportDocument":
        return cls.from_dict(json.loads(text))


def emit_report(r: ReportDocument, fmt: str = "text") -> str:
    """Render without a trailing newline.  csv and json are byte-deterministic."""
    if fmt == "csv":
        lines = [",".join(r.columns)] + [",".join(str(x) for x in row) for row in r.rows]
        return "\n".join(lines)
    if fmt == "json":
        return json.dumps(r.to_dict(), sort_keys=True, indent=2, ensure_ascii=False)
    if fmt != "text":
        raise UsageError(f"unknown format {fmt!r}")
    out = [f"{r.command}: {r.source} over {r.field}, window [{r.window[0]}, {r.window[1]}]"]
    width = max([len(c) for c in r.columns] + [len(str(x)) for row in r.rows for x in row] + [6])
    out.append("  ".join(c.rjust(width) for c in r.columns))
    for row in r.rows:
        out.append("  ".join(str(x).rjust(width) for x in row))
    for p in r.provenance:
        out.append(f"# {p}")
    for k, v in r.notes:
        out.append(f"# {k}: {v}")
    if r.verdict is not None:
        tail = "" if r.first_mismatch is None else f" (first mismatch at degree {r.first_mismatch})"
        out.append(f"verdict: {r.verdict}{tail}")
    if r.hypothesis_violated:
        out.append("hypothesis violated: input is not finitely built")
    return "\n".join(out)


# --- argument handling -------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="koszulthh", description="Koszul duality and Hochschild homology of small DGAs.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for cmd in COMMANDS:
        p = sub.add_parser(cmd)
        p.add_argument("dga", nargs="*", help="DGA file(s) in the JSON format")
        p.add_argument("--corpus", action="append", default=[], metavar="NAME")
        p.add_argument("--field", default=None, help="Q or Fp:P (default Q)")
        p.add_argument("--window", default=None, metavar="LO:HI")
        p.add_argument("--format", default="text", choices=("text", "csv", "json"))
        p.add_argument("--out", default=None, metavar="PATH")
        p.add_argument("--expect", default=None, metavar="CSV",
                       help="compare the emitted table with a degree,dimension CSV; exit 4 on mismatch")
        if cmd == "corpus":
            p.add_argument("--kind", default=None, help="expected table kind to print")
            p.add_argument("--verify", action="store_true", help="recompute the table and compare")
    return ap


def parse_window(text: Optional[str]) -> Optional[Tuple[int, int]]:
    if text is None:
        return None
    m = re.fullmatch(r"\s*(-?\d+)\s*:\s*(-?\d+)\s*", text)
    if not m:
        raise UsageError(f"window must look like LO:HI, got {text!r}")
    lo, hi = int(m.group(1)), int(m.group(2))
    if lo > hi:
        raise UsageError(f"empty window {text!r}")
    return lo, hi


def _algebras(args, fld: Optional[FieldSpec]) -> List[Tuple[str, object]]:
    out = []
    for path in args.dga:
        a = parse_dga_file(path)
        if fld is not None and a.field != fld:
            raise UsageError(f"{path} is over {a.field}, but --field {fld} was given")
        out.append((path, a))
    for name in args.corpus:
        out.append((name, build_algebra(name, fld or QQ)))
    return out


def _one(algs):
    if len(algs) != 1:
        raise UsageError(f"expected exactly one algebra, got {len(algs)}")
    return algs[0]


def _need_window(win, what):
    if win is None:
        raise UsageError(f"{what} needs --window LO:HI")
    return win


def _default_window(a, win):
    if win is not None:
        return win
    if not getattr(a, "is_finite", False):
        raise UsageError("truncated computation: --window LO:HI is mandatory")
    degs = list(a.degree_of.values())
    return min(degs), max(degs)


def _run(args) -> Tuple[int, Optional[ReportDocument], str]:
    fld = FieldSpec.parse(args.field) if args.field else None
    win = parse_window(args.window)
    cmd = args.command

    if cmd == "corpus":
        return _run_corpus(args, fld, win)

    algs = _algebras(args, fld)
    if cmd == "shuffle-check":
        if len(algs) != 2:
            raise UsageError("shuffle-check needs two algebras")
        (na, a), (nb, b) = algs
        lo, hi = _need_window(win, cmd)
        aa = materialize(a, lo - 2, hi + 1)
        bb = materialize(b, lo - 2, hi + 1)
        r = shuffle_monoidality_check(aa, bb, (lo, hi))
        doc = ReportDocument.from_duality(r, cmd, f"{na} ⊗ {nb}", aa.field)
        return (EXIT_OK if r.passed else EXIT_FAIL), doc, ""

    name, a = _one(algs)
    f = a.field
    if cmd == "validate":
        lo, hi = _default_window(a, win)
        alg = materialize(a, lo, hi)
        rep = validate_dga(alg)
        if not rep.ok:
            raise DgaValidationError(rep)
        return EXIT_OK, None, f"{name}: valid ({len(alg.degree_of)} basis elements, {alg.connectivity.value})"
    if cmd == "homology":
        lo, hi = _default_window(a, win)
        from .bar_koszul import bar_needs
        alg = materialize(a, *bar_needs(a.connectivity, lo, hi))
        t = homology_dimensions(underlying_complex(alg), (lo, hi))
        return EXIT_OK, ReportDocument.from_table(t, cmd, name, f, ["homology of the underlying complex"]), ""
    if cmd == "bar":
        lo, hi = _need_window(win, cmd)
        t = bar_homology(a, lo, hi)
        return EXIT_OK, ReportDocument.from_table(t, cmd, name, f, ["normalized bar construction"]), ""
    if cmd == "koszul-dual":
        lo, hi = _need_window(win, cmd)
        t = koszul_dual_homology(a, lo, hi)
        return EXIT_OK, ReportDocument.from_table(t, cmd, name, f, ["dual of the bar construction"]), ""
    if cmd == "hh":
        lo, hi = _need_window(win, cmd)
        t = hh_dimensions(a, (lo, hi))
        return EXIT_OK, ReportDocument.from_table(t, cmd, name, f, ["normalized Hochschild complex"]), ""
    if cmd == "duality-check":
        lo, hi = _need_window(win, cmd)
        r = verify_thh_duality(a, (lo, hi))
        doc = ReportDocument.from_duality(r, cmd, name, f)
        if r.hypothesis_violated:
            return EXIT_HYPOTHESIS, doc, "hypothesis violated: " + str(r.notes.get("hypothesis", ""))
        return (EXIT_OK if r.passed else EXIT_FAIL), doc, ""
    if cmd == "double-centralizer":
        lo, hi = _need_window(win, cmd)
        r = double_centralizer_report(a, (lo, hi))
        return (EXIT_OK if r.passed else EXIT_FAIL), ReportDocument.from_duality(r, cmd, name, f), ""
    raise UsageError(f"unknown command {cmd!r}")


def _run_corpus(args, fld, win):
    f = fld or QQ
    if not args.corpus:
        lines = []
        for name in CATALOG:
            a = build_algebra(name, f)
            lines.append(f"{name}: {', '.join(kinds_for(a))}")
        return EXIT_OK, None, "\n".join(lines)
    name = _one([(n, None) for n in args.corpus])[0]
    entry = corpus_get(name, f)
    kind = args.kind or "hh"
    if kind not in entry.expected:
        raise LookupError(f"{name} has no {kind!r} table")
    t = entry.expected[kind]
    doc = ReportDocument.from_table(t, "corpus", name, f, [entry.provenance[kind]])
    if not args.verify:
        return EXIT_OK, doc, ""
    w = t.window
    if kind == "hh":
        got = hh_dimensions(entry.algebra, w)
    elif kind == "koszul-dual-homology":
        got = koszul_dual_homology(entry.algebra, w.lo, w.hi)
    else:
        r = verify_thh_duality(entry.algebra, w)
        got = r.left_table if kind == "duality-left" else r.right_table
    ok = got.entries == t.entries
    return (EXIT_OK if ok else EXIT_FAIL), doc, f"{name} {kind}: {'reproduced' if ok else 'MISMATCH'}"


def _join_windows(argv: Sequence[str]) -> List[str]:
    # "--window -10:10" would otherwise be read as an unknown option
    out, it = [], iter(argv)
    for tok in it:
        if tok == "--window":
            nxt = next(it, None)
            out.append(tok if nxt is None else f"--window={nxt}")
        else:
            out.append(tok)
    return out


def run_command(argv: Sequence[str], stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(_join_windows(argv))
        code, doc, message = _run(args)
        if doc is not None:
            text = emit_report(doc, args.format)
            if args.out:
                Path(args.out).write_text(text + "\n")
            else:
                print(text, file=stdout)
            if args.expect and code == EXIT_OK:
                expected = parse_table_csv(Path(args.expect).read_text())
                if expected.entries != doc.table().entries:
                    message = f"table differs from {args.expect}"
                    code = EXIT_FAIL
        elif args.expect:
            raise UsageError("--expect needs a command that emits a table")
        if message:
            print(message, file=stderr if code else stdout)
        return code
    except SystemExit as e:  # --help
        return int(e.code or 0)
    except (UsageError, DgaParseError, FieldError, LookupError) as e:
        print(f"error: {e}", file=stderr)
        return EXIT_PARSE
    except DgaValidationError as e:
        print(f"invalid: {e}", file=stderr)
        return EXIT_INVALID
    except WindowError as e:
        print(f"window: {e}", file=stderr)
        return EXIT_WINDOW
    except OSError as e:
        print(f"error: {e}", file=stderr)
        return EXIT_PARSE


def main(argv=None) -> int:
    return run_command(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
