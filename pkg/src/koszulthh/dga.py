"""Augmented differential graded algebras given by structure constants.

An algebra is stored on a homogeneous basis ``unit + augmentation ideal``.
Unlisted products and differentials are zero; products with the unit are
filled in automatically.

Infinite algebras (polynomial algebras, Koszul duals) are carried as
truncations: ``truncated_at`` is the top degree ``T`` of a connective algebra
or the bottom degree ``L`` of a simply coconnective one.  A truncated algebra
contains every basis element of the untruncated one with degree in
``[L, 0]`` (resp. ``[0, T]``); products landing in that range are exact, and
the differential is exact on every element except those of degree ``L``.
"""

from __future__ import annotations

import math
from enum import Enum
from itertools import product as iproduct
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .exact_linear import FieldError, FieldSpec, Scalar, SparseMatrix
from .graded_complex import (
    ChainComplex,
    GradedBasis,
    ValidationReport,
    Violation,
    as_window,
)

Vector = Dict[str, Scalar]


class Connectivity(str, Enum):
    CONNECTIVE = "connective"
    SIMPLY_COCONNECTIVE = "simply_coconnective"

    @classmethod
    def parse(cls, text: str) -> "Connectivity":
        t = text.strip().replace("-", "_")
        for c in cls:
            if c.value == t:
                return c
        raise ValueError(f"unknown connectivity {text!r}")

    def flipped(self) -> "Connectivity":
        if self is Connectivity.CONNECTIVE:
            return Connectivity.SIMPLY_COCONNECTIVE
        return Connectivity.CONNECTIVE


def _add_into(acc: Vector, vec: Mapping[str, Scalar], coeff: Scalar, field: FieldSpec):
    for k, v in vec.items():
        nv = field.add(acc.get(k, field.zero()), field.mul(coeff, v))
        if nv == 0:
            acc.pop(k, None)
        else:
            acc[k] = nv


class DGAlgebra:
    """Finite-presentation (or truncated) augmented DGA.

    Treat instances as immutable; every operation returns a new algebra.
    """

    def __init__(self, field: FieldSpec, basis: Sequence[Tuple[str, int]], unit: str,
                 product: Mapping[Tuple[str, str], Mapping[str, object]] = None,
                 differential: Mapping[str, Mapping[str, object]] = None,
                 connectivity: Connectivity = Connectivity.SIMPLY_COCONNECTIVE,
                 truncated_at: Optional[int] = None, name: str = ""):
        self.field = field
        self.degree_of: Dict[str, int] = {}
        for lab, deg in basis:
            if lab in self.degree_of:
                raise ValueError(f"duplicate basis label {lab!r}")
            self.degree_of[lab] = int(deg)
        self.unit = unit
        self.connectivity = Connectivity(connectivity)
        self.truncated_at = truncated_at
        self.name = name
        self.product: Dict[Tuple[str, str], Vector] = {}
        for key, vec in (product or {}).items():
            clean = self._clean(vec)
            if clean:
                self.product[tuple(key)] = clean
        if unit in self.degree_of:
            for lab in self.degree_of:
                self.product.setdefault((unit, lab), {lab: field.one()})
                self.product.setdefault((lab, unit), {lab: field.one()})
        self.differential: Dict[str, Vector] = {}
        for lab, vec in (differential or {}).items():
            clean = self._clean(vec)
            if clean:
                self.differential[lab] = clean

    def _clean(self, vec: Mapping[str, object]) -> Vector:
        out: Vector = {}
        for k, v in vec.items():
            c = self.field.coerce(v)
            if c != 0:
                out[k] = self.field.add(out.get(k, self.field.zero()), c)
                if out[k] == 0:
                    del out[k]
        return out

    # --- basic accessors ---------------------------------------------------
    @property
    def labels(self) -> List[str]:
        return list(self.degree_of)

    @property
    def ideal(self) -> List[str]:
        return [lab for lab in self.degree_of if lab != self.unit]

    def degree(self, label: str) -> int:
        return self.degree_of[label]

    @property
    def is_finite(self) -> bool:
        return self.truncated_at is None

    @property
    def is_unit_algebra(self) -> bool:
        return not self.ideal

    @property
    def basis(self) -> GradedBasis:
        degs: Dict[int, List[str]] = {}
        for lab, d in self.degree_of.items():
            degs.setdefault(d, []).append(lab)
        return GradedBasis(self.field, {d: tuple(v) for d, v in degs.items()})

    def mul(self, a: str, b: str) -> Vector:
        return self.product.get((a, b), {})

    def d(self, a: str) -> Vector:
        return self.differential.get(a, {})

    def mul_vec(self, u: Mapping[str, Scalar], v: Mapping[str, Scalar]) -> Vector:
        f = self.field
        out: Vector = {}
        for a, x in u.items():
            for b, y in v.items():
                p = self.product.get((a, b))
                if p:
                    _add_into(out, p, f.mul(x, y), f)
        return out

    def d_vec(self, u: Mapping[str, Scalar]) -> Vector:
        out: Vector = {}
        for a, x in u.items():
            dv = self.differential.get(a)
            if dv:
                _add_into(out, dv, x, self.field)
        return out

    def in_exact_range(self, degree: int) -> bool:
        """Products landing in this degree are exact."""
        if self.truncated_at is None:
            return True
        if self.connectivity is Connectivity.CONNECTIVE:
            return degree <= self.truncated_at
        return degree >= self.truncated_at

    def d_exact(self, degree: int) -> bool:
        """The differential of elements of this degree is exact."""
        if self.truncated_at is None:
            return True
        if self.connectivity is Connectivity.CONNECTIVE:
            return degree <= self.truncated_at
        return degree >= self.truncated_at + 1

    def structure(self):
        """Hashable normal form used for exact equality checks."""
        return (self.field, tuple(sorted(self.degree_of.items())), self.unit,
                tuple(sorted((k, tuple(sorted(v.items()))) for k, v in self.product.items())),
                tuple(sorted((k, tuple(sorted(v.items()))) for k, v in self.differential.items())),
                self.connectivity, self.truncated_at)

    def __eq__(self, other):
        if not isinstance(other, DGAlgebra):
            return NotImplemented
        return self.structure() == other.structure()

    def __hash__(self):
        return hash(self.structure())

    def __repr__(self):
        t = "" if self.truncated_at is None else f", truncated_at={self.truncated_at}"
        return f"DGAlgebra({self.name or '?'}, dim={len(self.degree_of)}, {self.connectivity.value}{t}, {self.field})"


def _sign(f: FieldSpec, exponent: int) -> Scalar:
    return f.sign(exponent % 2 == 1)


def validate_dga(a: DGAlgebra) -> ValidationReport:
    """Exact check of the algebra axioms; stops at the first failing family."""
    f = a.field
    deg = a.degree_of
    out: List[Violation] = []

    def fail(kind, degree, msg, *wit):
        out.append(Violation(kind, degree, msg, tuple(wit)))
        return ValidationReport(tuple(out))

    if a.unit not in deg:
        return fail("unit", None, f"unit {a.unit!r} is not a basis label", a.unit)
    if deg[a.unit] != 0:
        return fail("unit", deg[a.unit], "unit must sit in degree 0", a.unit)

    for (x, y), vec in a.product.items():
        for lab in (x, y, *vec):
            if lab not in deg:
                return fail("label", None, f"unknown label {lab!r} in product {x}·{y}", x, y)
        for lab in vec:
            if deg[lab] != deg[x] + deg[y]:
                return fail("degree", deg[x] + deg[y],
                            f"{x}·{y} has a term {lab} of degree {deg[lab]}, expected {deg[x] + deg[y]}", x, y)
    for x, vec in a.differential.items():
        for lab in (x, *vec):
            if lab not in deg:
                return fail("label", None, f"unknown label {lab!r} in d({x})", x)
        for lab in vec:
            if deg[lab] != deg[x] - 1:
                return fail("degree", deg[x] - 1,
                            f"d({x}) has a term {lab} of degree {deg[lab]}, expected {deg[x] - 1}", x)

    # connectivity
    ideal = a.ideal
    for x in ideal:
        dx = deg[x]
        if a.connectivity is Connectivity.CONNECTIVE and dx < 1:
            return fail("connectivity", dx, f"connective algebra has non-unit {x} in degree {dx}", x)
        if a.connectivity is Connectivity.SIMPLY_COCONNECTIVE and dx > -2:
            return fail("connectivity", dx, f"simply coconnective algebra has non-unit {x} in degree {dx}", x)

    # unit axioms
    for x in deg:
        one = {x: f.one()}
        if a.mul(a.unit, x) != one or a.mul(x, a.unit) != one:
            return fail("unit", deg[x], f"unit axiom fails on {x}", x)
    if a.d(a.unit):
        return fail("unit", 0, "d(1) must vanish", a.unit)

    # augmentation: the ideal is closed under products and d
    for x in ideal:
        for y in ideal:
            if a.unit in a.mul(x, y):
                return fail("augmentation", 0, f"{x}·{y} has a unit component", x, y)
        if a.unit in a.d(x):
            return fail("augmentation", 0, f"d({x}) has a unit component", x)

    # d^2 = 0
    for x in deg:
        if not (a.d_exact(deg[x]) and a.d_exact(deg[x] - 1)):
            continue
        dd = a.d_vec(a.d(x))
        if dd:
            return fail("d_squared", deg[x], f"d(d({x})) = {dd}", x)

    # associativity and Leibniz, restricted to the exact range
    by_deg = sorted(ideal, key=lambda lab: (abs(deg[lab]), lab))
    for x in by_deg:
        for y in by_deg:
            dxy = deg[x] + deg[y]
            if not a.in_exact_range(dxy):
                break  # by_deg is sorted by |degree| and all ideal degrees share a sign
            xy = a.mul(x, y)
            if a.d_exact(dxy):
                lhs = a.d_vec(xy)
                rhs: Vector = {}
                _add_into(rhs, a.mul_vec(a.d(x), {y: f.one()}), f.one(), f)
                _add_into(rhs, a.mul_vec({x: f.one()}, a.d(y)), _sign(f, deg[x]), f)
                if lhs != rhs:
                    return fail("leibniz", dxy, f"Leibniz rule fails on ({x}, {y})", x, y)
            for z in by_deg:
                if not a.in_exact_range(dxy + deg[z]):
                    break
                left = a.mul_vec(xy, {z: f.one()})
                right = a.mul_vec({x: f.one()}, a.mul(y, z))
                if left != right:
                    return fail("associativity", dxy + deg[z], f"({x}·{y})·{z} != {x}·({y}·{z})", x, y, z)
    return ValidationReport(())


def opposite_dga(a: DGAlgebra) -> DGAlgebra:
    """Graded opposite: x ·op y = (-1)^{|x||y|} y·x."""
    f = a.field
    prod = {}
    for (x, y), vec in a.product.items():
        s = _sign(f, a.degree_of[x] * a.degree_of[y])
        prod[(y, x)] = {k: f.mul(s, v) for k, v in vec.items()}
    name = a.name[:-3] if a.name.endswith("^op") else (a.name + "^op" if a.name else "")
    return DGAlgebra(f, list(a.degree_of.items()), a.unit, prod, a.differential,
                     a.connectivity, a.truncated_at, name)


def tensor_label(x: str, y: str) -> str:
    return f"{x}⊗{y}"


def tensor_dga(a: DGAlgebra, b: DGAlgebra, window=None) -> DGAlgebra:
    """(a1⊗b1)(a2⊗b2) = (-1)^{|b1||a2|} a1a2 ⊗ b1b2, Leibniz differential."""
    if a.field != b.field:
        raise FieldError(f"mixed fields {a.field} and {b.field}")
    f = a.field
    if a.is_unit_algebra:
        conn = b.connectivity
    elif b.is_unit_algebra:
        conn = a.connectivity
    elif a.connectivity != b.connectivity:
        raise ValueError("tensor product of algebras with different connectivity")
    else:
        conn = a.connectivity

    truncs = [t for t in (a.truncated_at, b.truncated_at) if t is not None]
    trunc: Optional[int] = None
    if truncs:
        trunc = min(truncs) if conn is Connectivity.CONNECTIVE else max(truncs)
    if window is not None:
        w = as_window(window)
        if conn is Connectivity.CONNECTIVE:
            trunc = w.hi if trunc is None else min(trunc, w.hi)
        else:
            trunc = w.lo if trunc is None else max(trunc, w.lo)

    def keep(d):
        if trunc is None:
            return True
        return d <= trunc if conn is Connectivity.CONNECTIVE else d >= trunc

    basis = []
    for x, y in iproduct(a.degree_of, b.degree_of):
        dd = a.degree_of[x] + b.degree_of[y]
        if keep(dd):
            basis.append((tensor_label(x, y), dd))
    present = {lab for lab, _ in basis}
    prod: Dict[Tuple[str, str], Vector] = {}
    pairs = [(x, y) for x, y in iproduct(a.degree_of, b.degree_of) if tensor_label(x, y) in present]
    for x1, y1 in pairs:
        for x2, y2 in pairs:
            pa, pb = a.mul(x1, x2), b.mul(y1, y2)
            if not pa or not pb:
                continue
            s = _sign(f, b.degree_of[y1] * a.degree_of[x2])
            vec: Vector = {}
            for u, cu in pa.items():
                for v, cv in pb.items():
                    lab = tensor_label(u, v)
                    if lab in present:
                        vec[lab] = f.add(vec.get(lab, f.zero()), f.mul(s, f.mul(cu, cv)))
            prod[(tensor_label(x1, y1), tensor_label(x2, y2))] = vec
    diff: Dict[str, Vector] = {}
    for x, y in pairs:
        vec: Vector = {}
        for u, cu in a.d(x).items():
            lab = tensor_label(u, y)
            if lab in present:
                vec[lab] = f.add(vec.get(lab, f.zero()), cu)
        s = _sign(f, a.degree_of[x])
        for v, cv in b.d(y).items():
            lab = tensor_label(x, v)
            if lab in present:
                vec[lab] = f.add(vec.get(lab, f.zero()), f.mul(s, cv))
        diff[tensor_label(x, y)] = vec
    name = f"{a.name}⊗{b.name}" if a.name and b.name else ""
    return DGAlgebra(f, basis, tensor_label(a.unit, b.unit), prod, diff, conn, trunc, name)


def underlying_complex(a: DGAlgebra) -> ChainComplex:
    """Forget the product.  Truncated algebras give complexes certified on the exact side."""
    f = a.field
    basis = a.basis
    diff = {}
    for n in basis.support():
        if not basis.dim(n - 1):
            continue
        tgt = basis.index(n - 1)
        entries = {}
        for j, lab in enumerate(basis.labels(n)):
            for t, v in a.d(lab).items():
                entries[(tgt[t], j)] = v
        if entries:
            diff[n] = SparseMatrix(basis.dim(n - 1), basis.dim(n), entries, f)
    cert = None
    if a.truncated_at is not None:
        if a.connectivity is Connectivity.CONNECTIVE:
            cert = (-math.inf, a.truncated_at - 1)
        else:
            cert = (a.truncated_at + 1, math.inf)
    return ChainComplex(basis, diff, cert)


def unit_algebra(field: FieldSpec, connectivity: Connectivity = Connectivity.SIMPLY_COCONNECTIVE) -> DGAlgebra:
    return DGAlgebra(field, [("1", 0)], "1", connectivity=connectivity, name="unit")


def relabel(a: DGAlgebra, mapping: Mapping[str, str]) -> DGAlgebra:
    m = lambda lab: mapping.get(lab, lab)
    prod = {(m(x), m(y)): {m(k): v for k, v in vec.items()} for (x, y), vec in a.product.items()}
    diff = {m(x): {m(k): v for k, v in vec.items()} for x, vec in a.differential.items()}
    return DGAlgebra(a.field, [(m(lab), d) for lab, d in a.degree_of.items()], m(a.unit), prod, diff,
                     a.connectivity, a.truncated_at, a.name)
