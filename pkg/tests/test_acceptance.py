"""Acceptance criteria, one test each, exact integer tolerances and wall-clock limits.

Every test prints a single ``[ACCEPT] <id> PASS|FAIL`` line to the terminal.
"""

import subprocess
import sys
import time
from contextlib import contextmanager

import pytest

from koszulthh.bar_koszul import (
    bar_construction,
    bar_needs,
    certify_window,
    double_centralizer_report,
    koszul_dual_covering,
    koszul_dual_homology,
    materialize,
)
from koszulthh.cli import run_command
from koszulthh.corpus import CATALOG, build_algebra, corpus_get
from koszulthh.dga import DGAlgebra, opposite_dga, tensor_dga, underlying_complex, validate_dga
from koszulthh.duality import verify_thh_duality
from koszulthh.exact_linear import F2, QQ
from koszulthh.graded_complex import dual_complex, tensor_complex, validate_complex
from koszulthh.hochschild import hh_dimensions, hochschild_for, shuffle_map, shuffle_monoidality_check

import oracles


@pytest.fixture
def criterion(capsys):
    @contextmanager
    def run(cid, title, limit):
        t0 = time.perf_counter()
        ok = False
        try:
            yield
            elapsed = time.perf_counter() - t0
            assert elapsed < limit, f"took {elapsed:.1f}s, limit {limit}s"
            ok = True
        finally:
            elapsed = time.perf_counter() - t0
            with capsys.disabled():
                print(f"\n[ACCEPT] {cid:>2} {'PASS' if ok else 'FAIL'}  {title}  ({elapsed:.2f}s / {limit}s)")
    return run


def w5():
    return DGAlgebra(QQ, [("1", 0), ("w", -5)], "1", name="sphere-odd:5")


def test_c01_law_suite(criterion):
    with criterion(1, "law suite: corpus algebras and every produced complex", 5):
        for name in CATALOG:
            for f in (QQ, F2):
                e = corpus_get(name, f)
                assert validate_dga(e.materialized()).ok, name
        s3, sq = build_algebra("sphere-odd:3"), build_algebra("sq0:2:-2")
        proj, poly = build_algebra("proj-plane-like"), build_algebra("poly:3")
        cxs = [
            bar_construction(s3, certify_window(s3, -10, 0)).complex,
            bar_construction(proj, certify_window(proj, -8, 0)).complex,
            bar_construction(materialize(poly, *bar_needs(poly.connectivity, 0, 8)),
                             certify_window(poly, 0, 8)).complex,
            hochschild_for(s3, -10, 0).complex,
            hochschild_for(sq, -5, 0).complex,
            hochschild_for(poly, 0, 8).complex,
            hochschild_for(opposite_dga(koszul_dual_covering(sq, 0, 5)), 0, 5).complex,
            dual_complex(hochschild_for(proj, -8, 0).complex),
            underlying_complex(tensor_dga(s3, proj, window=(-8, 0))),
            tensor_complex(hochschild_for(s3, -6, 0).complex, hochschild_for(proj, -6, 0).complex, (-6, 0)),
            hochschild_for(tensor_dga(s3, sq, window=(-7, 0)), -5, 0).complex,
        ]
        for cx in cxs:
            assert validate_complex(cx).ok


def test_c02_koszul_dual_of_odd_sphere(criterion):
    with criterion(2, "Koszul dual of sphere-odd:3 on [0,12]", 10):
        t = koszul_dual_homology(build_algebra("sphere-odd:3"), 0, 12)
        expect = oracles.pad(oracles.words_count(1, 2, 0, 12), 0, 12)
        assert t.entries == expect
        assert t.nonzero() == {m: 1 for m in range(0, 13, 2)}


def test_c03_free_loop_profile(criterion):
    with criterion(3, "HH of poly:3 on [0,12]", 30):
        t = hh_dimensions(build_algebra("poly:3"), (0, 12))
        expect = oracles.pad(oracles.hh_polynomial_even(2, 0, 12), 0, 12)
        assert t.entries == expect
        assert t[1] == 0 and all(t[m] == 1 for m in [0] + list(range(2, 13)))


def test_c04_main_duality(criterion):
    with criterion(4, "duality on sphere-odd:3, |m| <= 10", 60):
        r = verify_thh_duality(build_algebra("sphere-odd:3"), (-10, 10))
        assert r.passed
        assert r.left_table.entries == r.right_table.entries
        assert r.left_table.nonzero() == oracles.negate(oracles.hh_square_zero(1, -3, 0, -10, 0))
        assert not r.hypothesis_violated


def test_c05_noncommutative_duality(criterion):
    with criterion(5, "duality on sq0:2:-2, |m| <= 5", 60):
        r = verify_thh_duality(build_algebra("sq0:2:-2"), (-5, 5))
        assert r.passed
        assert r.left_table.nonzero() == oracles.negate(oracles.hh_square_zero(2, -2, 0, -5, 0))
        assert r.right_table.nonzero() == oracles.hh_tensor_algebra(2, 1, 0, 0, 5)


def test_c06_double_centralizer(criterion):
    with criterion(6, "double centralizer of sphere-odd:3 on [-8,0]", 60):
        r = double_centralizer_report(build_algebra("sphere-odd:3"), (-8, 0))
        assert r.passed
        assert r.left_table.nonzero() == r.right_table.nonzero() == {0: 1, -3: 1}


def test_c07_shuffle_monoidality(criterion):
    with criterion(7, "shuffle map for sphere-odd:3 and sphere-odd:5", 30):
        a, b = build_algebra("sphere-odd:3"), w5()
        sh = shuffle_map(a, b, (-12, 0))
        assert all(v == 0 for v in sh.chain_map_defect().values())
        r = shuffle_monoidality_check(a, b, (-12, 0))
        assert r.passed
        assert r.notes == {"chain_map": True, "homology_iso": True}
        ta = oracles.hh_square_zero(1, -3, 0, -12, 0)
        tb = oracles.hh_square_zero(1, -5, 0, -12, 0)
        kun = {}
        for i, x in ta.items():
            for j, y in tb.items():
                if i + j >= -12:
                    kun[i + j] = kun.get(i + j, 0) + x * y
        assert r.left_table.nonzero() == r.right_table.nonzero() == kun


def test_c08_hypothesis_sensitivity(criterion):
    with criterion(8, "duality-check on poly:3 exits 5", 5):
        code = run_command(["duality-check", "--corpus", "poly:3", "--window", "-6:6"],
                           stdout=_Null(), stderr=_Null())
        assert code == 5
        assert verify_thh_duality(build_algebra("poly:3"), (-6, 6)).hypothesis_violated


def test_c09_field_robustness(criterion):
    with criterion(9, "criteria 2 and 4 over F2", 60):
        q2 = koszul_dual_homology(build_algebra("sphere-odd:3", QQ), 0, 12)
        f2 = koszul_dual_homology(build_algebra("sphere-odd:3", F2), 0, 12)
        assert q2.entries == f2.entries
        q4 = verify_thh_duality(build_algebra("sphere-odd:3", QQ), (-10, 10))
        f4 = verify_thh_duality(build_algebra("sphere-odd:3", F2), (-10, 10))
        assert f4.passed
        assert q4.left_table.entries == f4.left_table.entries
        assert q4.right_table.entries == f4.right_table.entries


def _recompute(entry, kind, extra):
    w = entry.expected[kind].window
    a = entry.algebra
    if kind == "hh":
        return hochschild_for(a, w.lo, w.hi, extra_words=extra).betti()
    if kind == "koszul-dual-homology":
        return koszul_dual_homology(a, w.lo, w.hi, extra_words=extra)
    r = verify_thh_duality(a, w, extra_words=extra)
    return r.left_table if kind == "duality-left" else r.right_table


def test_c10_truncation_stability(criterion):
    with criterion(10, "word bound s_max+1 leaves every corpus table unchanged", 120):
        for name in CATALOG:
            for f in (QQ, F2):
                e = corpus_get(name, f)
                for kind, expected in e.expected.items():
                    base = _recompute(e, kind, 0)
                    more = _recompute(e, kind, 1)
                    assert base.entries == more.entries == expected.entries, (name, str(f), kind)


def test_c11_determinism(criterion):
    runs = [
        ["koszul-dual", "--corpus", "sphere-odd:3", "--window", "0:12"],
        ["hh", "--corpus", "poly:3", "--window", "0:12"],
        ["duality-check", "--corpus", "sphere-odd:3", "--window", "-10:10"],
    ]
    with criterion(11, "CSV output of criteria 2-4 byte-identical across runs", 60):
        for argv in runs:
            outs = [subprocess.run([sys.executable, "-m", "koszulthh", *argv, "--format", "csv"],
                                   capture_output=True, check=True).stdout for _ in range(2)]
            assert outs[0] == outs[1]
            assert outs[0].startswith(b"degree,")


class _Null:
    def write(self, s):
        return len(s)

    def flush(self):
        pass
