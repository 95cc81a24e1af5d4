"""Executable polynomial checks for affine multisets under the field model.

AG(m,q) is identified with GF(q^m) through the extension's fixed GF(q)-basis,
turning affine lines into cosets of F_q-multiple sets.  For a multiset M and
an evaluation point y, the product

    R(X, y) = prod over b in M of (X + (y - b)^(q-1))

has a rigid shape: at support points it factors as X^t times a power of
(X^N + (-1)^(m-1)) times a p-th power (N = (q^m-1)/(q-1)); away from the
support it is a p-th power outright; and the low X-coefficients sigma_j
vanish for every j below (q^m - q)/(q-1) that is prime to p.  This module
verifies those facts on concrete multisets instead of taking them on faith.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from .codes import PointMultiset
from .galois import Field, FieldExtension, Params, extension_field, lucas_binom
from .geometry import CapExceeded, Geometry

MODEL_CAP = 6561


# ---------------------------------------------------------------------------
# dense univariate polynomials over a (small) field
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class UniPoly:
    """Dense univariate polynomial; coeffs[i] is the X^i coefficient."""

    field: Field
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        c = np.asarray(self.coeffs, dtype=np.int64)
        nz = np.nonzero(c)[0]
        c = c[: int(nz[-1]) + 1] if nz.size else c[:0]
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    @property
    def is_zero(self) -> bool:
        return len(self.coeffs) == 0

    @property
    def is_monic(self) -> bool:
        return len(self.coeffs) > 0 and int(self.coeffs[-1]) == 1

    def coefficient(self, i: int) -> int:
        return int(self.coeffs[i]) if 0 <= i < len(self.coeffs) else 0

    def __eq__(self, other) -> bool:
        return (isinstance(other, UniPoly) and self.field == other.field
                and np.array_equal(self.coeffs, other.coeffs))

    def __repr__(self) -> str:
        return f"UniPoly(deg={self.degree})"


def _mul_linear(E: Field, coeffs: np.ndarray, c: int) -> np.ndarray:
    """Multiply by the monic linear factor (X + c)."""
    out = np.zeros(len(coeffs) + 1, dtype=np.int64)
    out[1:] = coeffs
    if c:
        out[:-1] = E.add_vec(out[:-1], E.mul_vec(coeffs, c))
    return out


def _poly_mul(E: Field, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = np.zeros(len(a) + len(b) - 1, dtype=np.int64)
    for i, ai in enumerate(a):
        if ai:
            out[i:i + len(b)] = E.add_vec(out[i:i + len(b)], E.mul_vec(int(ai), b))
    return out


def _poly_divmod(E: Field, a: np.ndarray, d: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Long division by a monic divisor."""
    assert int(d[-1]) == 1
    rem = a.copy()
    dd = len(d) - 1
    if len(a) - 1 < dd:
        return np.zeros(0, dtype=np.int64), rem
    quot = np.zeros(len(a) - dd, dtype=np.int64)
    for i in range(len(quot) - 1, -1, -1):
        c = int(rem[i + dd])
        if c:
            quot[i] = c
            rem[i:i + dd + 1] = E.sub_vec(rem[i:i + dd + 1], E.mul_vec(c, d))
    return quot, rem[:dd]


# ---------------------------------------------------------------------------
# the affine field model
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class AgFieldModel:
    """Bijection between AG(m,q) points and GF(q^m) elements."""

    geometry: Geometry
    ext: FieldExtension
    point_elem: np.ndarray  # point index -> field element
    elem_point: np.ndarray  # field element -> point index

    @property
    def field(self) -> Field:
        return self.ext.field


def field_model(geometry: Geometry, sample_lines: int = 100,
                seed: int = 0, cap: int = MODEL_CAP) -> AgFieldModel:
    """Identify AG(m,q) with GF(q^m) and verify lines map to cosets."""
    if geometry.kind != "ag":
        raise ValueError("the field model is built on affine geometries")
    q, m = geometry.field.order, geometry.params.m
    if q ** m > cap:
        raise CapExceeded(f"q^m = {q ** m} exceeds the model cap {cap}")
    ext = extension_field(geometry.field, m)
    E = ext.field
    coords = np.array(geometry.affine_tuples, dtype=np.int64)
    point_elem = ext.lift_vec(coords)
    if sorted(point_elem.tolist()) != list(range(E.order)):
        raise RuntimeError("coordinate lift is not a bijection")  # pragma: no cover
    elem_point = np.empty(E.order, dtype=np.int64)
    elem_point[point_elem] = np.arange(geometry.v)
    model = AgFieldModel(geometry, ext, point_elem, elem_point)
    _verify_line_cosets(model, sample_lines, seed)
    return model


def _verify_line_cosets(model: AgFieldModel, sample_lines: int, seed: int) -> None:
    E = model.field
    lines = model.geometry.blocks(1).point_matrix
    rng = np.random.default_rng(seed)
    n = min(sample_lines, lines.shape[0])
    picks = rng.choice(lines.shape[0], size=n, replace=False)
    scalars = model.ext.embed_table
    for li in picks:
        elems = model.point_elem[lines[li]]
        diffs = E.sub_vec(elems, int(elems[0]))
        beta = int(diffs[np.nonzero(diffs)[0][0]])
        coset = set(int(x) for x in E.mul_vec(scalars, beta))
        if set(int(x) for x in diffs) != coset:
            raise RuntimeError(f"line {li} does not map to a coset")


# ---------------------------------------------------------------------------
# the product polynomial and its structure checks
# ---------------------------------------------------------------------------

def _factor_constants(model: AgFieldModel, M: PointMultiset, y: int) -> np.ndarray:
    """(y - b)^(q-1), one entry per multiset element (with multiplicity)."""
    E = model.field
    q = model.ext.base.order
    elems = model.point_elem[np.array(M.support, dtype=np.int64)]
    consts = E.pow_vec(E.sub_vec(y, elems), q - 1)
    reps = np.array([M.mu[i] for i in M.support], dtype=np.int64)
    return np.repeat(consts, reps)


def redei_poly(model: AgFieldModel, M: PointMultiset, y: int) -> UniPoly:
    """R(X, y): the monic degree-|M| product of (X + (y-b)^(q-1))."""
    if not M.mu:
        raise ValueError("empty multiset")
    if M.geometry is not model.geometry:
        raise ValueError("multiset does not live in the model's geometry")
    E = model.field
    coeffs = np.ones(1, dtype=np.int64)
    for c in _factor_constants(model, M, y):
        coeffs = _mul_linear(E, coeffs, int(c))
    return UniPoly(E, coeffs)


def redei_poly_tree(model: AgFieldModel, M: PointMultiset, y: int) -> UniPoly:
    """Same product evaluated as a balanced tree; a cross-check route."""
    E = model.field
    polys = [np.array([int(c), 1], dtype=np.int64)
             for c in _factor_constants(model, M, y)]
    while len(polys) > 1:
        nxt = [_poly_mul(E, polys[i], polys[i + 1])
               for i in range(0, len(polys) - 1, 2)]
        if len(polys) % 2:
            nxt.append(polys[-1])
        polys = nxt
    return UniPoly(E, polys[0])


def pth_power_root(poly: UniPoly) -> tuple[bool, UniPoly | None]:
    """Whether the polynomial is a p-th power; if so, its canonical root.

    In characteristic p a polynomial is a p-th power exactly when every
    monomial exponent is divisible by p; each root coefficient is the
    (|F|/p)-th power of the original one.
    """
    E = poly.field
    p = E.p
    if poly.is_zero:
        return True, UniPoly(E, np.zeros(0, dtype=np.int64))
    exps = np.nonzero(poly.coeffs)[0]
    if np.any(exps % p):
        return False, None
    root = np.zeros(poly.degree // p + 1, dtype=np.int64)
    root[exps // p] = E.pow_vec(poly.coeffs[exps], E.order // p)
    back = E.pow_vec(root[exps // p], p)
    if not np.array_equal(back, poly.coeffs[exps]):  # pragma: no cover
        return False, None
    return True, UniPoly(E, root)


@dataclass(frozen=True)
class FactorizationResult:
    passed: bool
    multiplicity: int
    quotient_root: UniPoly | None
    reason: str | None


def support_factorization(model: AgFieldModel, M: PointMultiset, y: int,
                          precomputed: UniPoly | None = None) -> FactorizationResult:
    """Check R(X,y) = X^t (X^N + (-1)^(m-1))^(p-t) g(X)^p at a support point.

    Failure of any division step is a fail verdict, not an exception; only a
    non-support y is a usage error.
    """
    E = model.field
    p = E.p
    q = model.ext.base.order
    m = model.ext.m
    point = int(model.elem_point[y])
    t = M.mu.get(point)
    if t is None:
        raise ValueError("y is not in the multiset's support")
    R = precomputed if precomputed is not None else redei_poly(model, M, y)
    if np.any(R.coeffs[:t]):
        return FactorizationResult(False, t, None, f"X^{t} does not divide R")
    N = (E.order - 1) // (q - 1)
    sign = 1 if m % 2 else p - 1  # (-1)^(m-1) as a prime-field scalar
    base = np.zeros(N + 1, dtype=np.int64)
    base[0], base[N] = sign, 1
    divisor = np.ones(1, dtype=np.int64)
    for _ in range(p - t):
        divisor = _poly_mul(E, divisor, base)
    quot, rem = _poly_divmod(E, R.coeffs[t:].copy(), divisor)
    if np.any(rem):
        return FactorizationResult(False, t, None,
                                   f"(X^{N} + {sign})^{p - t} does not divide R/X^{t}")
    ok, root = pth_power_root(UniPoly(E, quot))
    if not ok:
        return FactorizationResult(False, t, None, "quotient is not a p-th power")
    if not root.is_monic:
        return FactorizationResult(False, t, root, "p-th root is not monic")
    assert t + (p - t) * N + p * root.degree == M.size
    return FactorizationResult(True, t, root, None)


# ---------------------------------------------------------------------------
# coefficient vanishing scan
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoefficientVerdict:
    j: int
    required_zero: bool          # inside the vanishing range and prime to p
    all_zero: bool
    offending_y: int | None
    observed: tuple[int, ...]    # distinct values seen (capped)


def required_vanishing_js(params: Params) -> list[int]:
    """The coefficient indices that must vanish: 0 < j < (q^m - q)/(q - 1), p∤j."""
    q = params.q
    ceiling = (q ** params.m - q) // (q - 1)
    return [j for j in range(1, ceiling) if j % params.p]


def coefficient_scan(model: AgFieldModel, M: PointMultiset,
                     js: Sequence[int] | None = None) -> dict[int, CoefficientVerdict]:
    """Evaluate sigma_j(y) (the X^(|M|-j) coefficient of R) at every y.

    The sigma_j have Y-degree below q^m, so vanishing at every one of the
    q^m points certifies the zero polynomial.
    """
    params = model.geometry.params
    required = set(required_vanishing_js(params))
    if js is None:
        js = sorted(required)
    size = M.size
    state: dict[int, dict] = {
        j: {"zero": True, "bad": None, "seen": set()} for j in js}
    for y in model.field.elements():
        R = redei_poly(model, M, y)
        for j in js:
            val = R.coefficient(size - j) if j <= size else 0
            st = state[j]
            if len(st["seen"]) < 16:
                st["seen"].add(val)
            if val and st["zero"]:
                st["zero"] = False
                st["bad"] = y
    return {j: CoefficientVerdict(j, j in required, st["zero"], st["bad"],
                                  tuple(sorted(st["seen"])))
            for j, st in state.items()}


def lucas_coefficient_check(m_size: int, kp: int, p: int) -> int:
    """binomial(|M|, kp) mod p, the residue driving the counting contradiction."""
    return lucas_binom(m_size, kp, p)


@dataclass(frozen=True)
class ExtremalBinomial:
    kp: int
    m_size: int
    residue: int
    admissible: bool   # 0 < kp < q^(m-2)
    vacuous: bool      # no admissible kp exists at all


def extremal_binomial_report(params: Params, kp: int) -> ExtremalBinomial:
    """Residue of binomial((p-1)(q^(m-1)+q^(m-2)) + kp, kp) mod p."""
    q, p, m = params.q, params.p, params.m
    limit = q ** (m - 2) if m >= 2 else 0
    base = (p - 1) * (q ** (m - 1) + q ** (m - 2)) if m >= 2 else 0
    size = base + kp
    return ExtremalBinomial(kp, size, lucas_coefficient_check(size, kp, p),
                            0 < kp < limit, limit <= 1)


# ---------------------------------------------------------------------------
# full oracle run
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OracleReport:
    support_checked: int
    support_passed: int
    support_failures: tuple[tuple[int, str], ...]   # (y, reason)
    nonsupport_checked: int
    nonsupport_passed: int
    nonsupport_failures: tuple[int, ...]            # y values
    scan: dict[int, CoefficientVerdict]
    all_passed: bool

    def to_json(self) -> dict:
        return {
            "support": {"checked": self.support_checked,
                        "passed": self.support_passed,
                        "failures": [{"y": y, "reason": r}
                                     for y, r in self.support_failures]},
            "nonsupport": {"checked": self.nonsupport_checked,
                           "passed": self.nonsupport_passed,
                           "failures": list(self.nonsupport_failures)},
            "sigma_scan": {str(j): {"required_zero": v.required_zero,
                                    "all_zero": v.all_zero,
                                    "offending_y": v.offending_y}
                           for j, v in self.scan.items()},
            "all_passed": self.all_passed,
        }


def oracle_report(M: PointMultiset, model: AgFieldModel | None = None,
                  js: Sequence[int] | None = None) -> OracleReport:
    """Run every per-point verdict and the coefficient scan in one sweep."""
    if model is None:
        model = field_model(M.geometry)
    E = model.field
    params = model.geometry.params
    required = set(required_vanishing_js(params))
    if js is None:
        js = sorted(required)
    size = M.size
    support_elems = set(int(model.point_elem[i]) for i in M.support)
    sup_fail: list[tuple[int, str]] = []
    non_fail: list[int] = []
    scan_state: dict[int, dict] = {j: {"zero": True, "bad": None, "seen": set()} for j in js}
    for y in E.elements():
        R = redei_poly(model, M, y)
        if y in support_elems:
            res = support_factorization(model, M, y, precomputed=R)
            if not res.passed:
                sup_fail.append((y, res.reason or "unknown"))
        else:
            ok, _ = pth_power_root(R)
            if not ok:
                non_fail.append(y)
        for j in js:
            val = R.coefficient(size - j) if j <= size else 0
            st = scan_state[j]
            if len(st["seen"]) < 16:
                st["seen"].add(val)
            if val and st["zero"]:
                st["zero"] = False
                st["bad"] = y
    scan = {j: CoefficientVerdict(j, j in required, st["zero"], st["bad"],
                                  tuple(sorted(st["seen"])))
            for j, st in scan_state.items()}
    n_sup = len(support_elems)
    n_non = E.order - n_sup
    scan_ok = all(v.all_zero for v in scan.values() if v.required_zero)
    all_ok = not sup_fail and not non_fail and scan_ok
    return OracleReport(n_sup, n_sup - len(sup_fail), tuple(sup_fail),
                        n_non, n_non - len(non_fail), tuple(non_fail),
                        scan, all_ok)
