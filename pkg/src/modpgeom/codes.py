"""Multisets, characteristic vectors, incidence codes and their bounds.

A point multiset holds reduced multiplicities in 1..p-1; its characteristic
vector is the length-v coordinate vector with sigma (coordinate sum, the
multiset size) and weight (support size).  The p-ary incidence code of the
points-vs-blocks design provides dual membership, p-rank and exhaustive
dual minimum-weight searches, and every lower bound the suite knows about
is evaluated through ``bound_report``.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .galois import Params
from .geometry import Geometry, Subspace, affine_geometry, projective_geometry
from .linalg import nullspace_modp, rref_modp

MINWEIGHT_BUDGET = 1 << 24
_CHUNK = 1 << 13


class BudgetExceeded(RuntimeError):
    """An exhaustive enumeration would exceed its configured budget."""


# ---------------------------------------------------------------------------
# multisets and characteristic vectors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PointMultiset:
    """A multiset of points with multiplicities reduced into 1..p-1."""

    geometry: Geometry
    mu: dict[int, int]

    def __post_init__(self) -> None:
        p, v = self.geometry.params.p, self.geometry.v
        for i, m in self.mu.items():
            if not 0 <= i < v:
                raise ValueError(f"point index {i} out of range")
            if not 1 <= m <= p - 1:
                raise ValueError(f"multiplicity {m} outside 1..{p - 1}")

    @property
    def size(self) -> int:
        return sum(self.mu.values())

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(sorted(self.mu))

    @property
    def support_size(self) -> int:
        return len(self.mu)

    def __len__(self) -> int:
        return len(self.mu)


@dataclass(frozen=True, eq=False)
class CharVector:
    """Coordinate vector of a multiset: entries in 0..p-1, one per point."""

    geometry: Geometry
    values: np.ndarray

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=np.int64) % self.geometry.params.p
        if vals.shape != (self.geometry.v,):
            raise ValueError("coordinate vector length must equal the point count")
        object.__setattr__(self, "values", vals)

    @property
    def sigma(self) -> int:
        return int(self.values.sum())

    @property
    def weight(self) -> int:
        return int(np.count_nonzero(self.values))

    def digits(self) -> str:
        return "".join(str(int(x)) for x in self.values)

    def __eq__(self, other) -> bool:
        return (isinstance(other, CharVector)
                and self.geometry is other.geometry
                and np.array_equal(self.values, other.values))


def char_vector(M: PointMultiset) -> CharVector:
    vals = np.zeros(M.geometry.v, dtype=np.int64)
    for i, m in M.mu.items():
        vals[i] = m
    return CharVector(M.geometry, vals)


def multiset_of(s: CharVector) -> PointMultiset:
    mu = {int(i): int(v) for i, v in enumerate(s.values) if v}
    return PointMultiset(s.geometry, mu)


def char_vector_from_digits(geometry: Geometry, digits: str) -> CharVector:
    if len(digits) != geometry.v:
        raise ValueError("digit string length must equal the point count")
    return CharVector(geometry, np.array([int(c) for c in digits], dtype=np.int64))


def reduce_multiplicities(geometry: Geometry, raw: Mapping[int, int]) -> PointMultiset:
    """Reduce arbitrary positive multiplicities mod p, dropping multiples of p.

    Line sums change by multiples of p only, so validity is preserved.
    Raises if everything reduces away.
    """
    p = geometry.params.p
    mu = {}
    for i, m in raw.items():
        if m <= 0:
            raise ValueError("multiplicities must be positive")
        r = m % p
        if r:
            mu[int(i)] = r
    if not mu:
        raise ValueError("all multiplicities vanished mod p: the reduced multiset is empty")
    return PointMultiset(geometry, mu)


# ---------------------------------------------------------------------------
# incidence codes
# ---------------------------------------------------------------------------

class IncidenceCode:
    """The F_p-span of the block incidence vectors, with dual services."""

    def __init__(self, geometry: Geometry, k: int = 1):
        self.geometry = geometry
        self.k = k
        self.matrix = geometry.incidence_matrix(k)
        self._rank: int | None = None
        self._nullspace: np.ndarray | None = None

    @property
    def rank(self) -> int:
        if self._rank is None:
            self._rank = len(rref_modp(self.matrix, self.geometry.params.p)[1])
        return self._rank

    @property
    def dual_dim(self) -> int:
        return self.geometry.v - self.rank

    @property
    def nullspace(self) -> np.ndarray:
        if self._nullspace is None:
            self._nullspace = nullspace_modp(self.matrix, self.geometry.params.p)
        return self._nullspace

    def __repr__(self) -> str:
        return f"IncidenceCode({self.geometry!r}, k={self.k})"


def incidence_code(geometry: Geometry, k: int = 1) -> IncidenceCode:
    cache = getattr(geometry, "_code_cache", None)
    if cache is None:
        cache = {}
        geometry._code_cache = cache
    if k not in cache:
        cache[k] = IncidenceCode(geometry, k)
    return cache[k]


def p_rank(code: IncidenceCode) -> int:
    return code.rank


@dataclass(frozen=True)
class LineCheck:
    valid: bool
    offending_block: int | None
    residue: int | None


def line_residue_check(M: PointMultiset | CharVector) -> LineCheck:
    """Whether every line meets the multiset in 0 mod p points."""
    s = char_vector(M) if isinstance(M, PointMultiset) else M
    geom = s.geometry
    p = geom.params.p
    residues = s.values[geom.blocks(1).point_matrix].sum(axis=1) % p
    bad = np.nonzero(residues)[0]
    if bad.size:
        b = int(bad[0])
        return LineCheck(False, b, int(residues[b]))
    return LineCheck(True, None, None)


def dual_membership(s: CharVector, code: IncidenceCode) -> bool:
    if s.geometry.v != code.matrix.shape[1]:
        raise ValueError("vector length does not match the code")
    p = code.geometry.params.p
    return not np.any((code.matrix.astype(np.int64) @ s.values) % p)


# ---------------------------------------------------------------------------
# exhaustive dual minimum weight
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MinWeightResult:
    metric: str
    minimum: int
    witness: CharVector
    min_weight: int
    min_sigma: int
    enumerated: int


def min_weight_exhaustive(code: IncidenceCode, metric: str = "w",
                          budget: int = MINWEIGHT_BUDGET) -> MinWeightResult:
    """Exhaustive minimum of w or sigma over all nonzero dual codewords.

    Enumerates every F_p-combination of a nullspace basis in fixed chunks;
    refuses (rather than samples) when p**dual_dim exceeds the budget.
    """
    if metric not in ("w", "sigma"):
        raise ValueError("metric must be 'w' or 'sigma'")
    p = code.geometry.params.p
    d = code.dual_dim
    if d == 0:
        raise ValueError("the dual code is trivial")
    total = p ** d
    if total > budget:
        raise BudgetExceeded(
            f"{p}^{d} = {total} dual codewords exceed the budget {budget}")
    B = code.nullspace
    pp = p ** np.arange(d, dtype=np.int64)
    best_w, best_s = None, None
    wit_w = wit_s = None
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        C = (idx[:, None] // pp) % p
        W = (C @ B) % p
        if start == 0:
            W = W[1:]
        if W.shape[0] == 0:
            continue
        weights = np.count_nonzero(W, axis=1)
        sigmas = W.sum(axis=1)
        iw, isig = int(np.argmin(weights)), int(np.argmin(sigmas))
        if best_w is None or weights[iw] < best_w:
            best_w, wit_w = int(weights[iw]), W[iw].copy()
        if best_s is None or sigmas[isig] < best_s:
            best_s, wit_s = int(sigmas[isig]), W[isig].copy()
    geom = code.geometry
    witness = CharVector(geom, wit_w if metric == "w" else wit_s)
    minimum = best_w if metric == "w" else best_s
    return MinWeightResult(metric, minimum, witness, best_w, best_s, total - 1)


@dataclass(frozen=True)
class KSpaceReduction:
    value: int
    reduced_value: int
    equal: bool


def kspace_dual_minweight(params: Params, k: int,
                          budget: int = MINWEIGHT_BUDGET) -> KSpaceReduction:
    """Dual minimum weight of the points-vs-k-spaces code, with the
    points-vs-lines value of the reduced geometry PG(m-k+1, q) alongside."""
    geom = projective_geometry(params.p, params.h, params.m)
    value = min_weight_exhaustive(incidence_code(geom, k), "w", budget).minimum
    reduced_geom = projective_geometry(params.p, params.h, params.m - k + 1)
    reduced = min_weight_exhaustive(incidence_code(reduced_geom, 1), "w", budget).minimum
    return KSpaceReduction(value, reduced, value == reduced)


# ---------------------------------------------------------------------------
# coordinate-wise operations
# ---------------------------------------------------------------------------

def scale(s: CharVector, lam: int) -> CharVector:
    """Coordinate-wise multiplication by a nonzero residue; keeps the support."""
    p = s.geometry.params.p
    if lam % p == 0:
        raise ValueError("scaling by 0 mod p collapses the vector")
    return CharVector(s.geometry, (s.values * (lam % p)) % p)


def p_minus_one_multiset(M: PointMultiset) -> PointMultiset:
    """Same support, multiplicities (p-1)*mu reduced into 1..p-1."""
    p = M.geometry.params.p
    return PointMultiset(M.geometry, {i: ((p - 1) * m) % p for i, m in M.mu.items()})


def extend_affine_to_projective(s: CharVector) -> CharVector:
    """Zero-pad an affine vector onto the hyperplane-at-infinity indices."""
    geom = s.geometry
    if geom.kind != "ag":
        raise ValueError("input must live in an affine geometry")
    pg = projective_geometry(geom.params.p, geom.params.h, geom.params.m,
                             geom.field.modulus)
    emb = getattr(geom, "_pg_embedding", None)
    if emb is None:
        emb = np.array([pg.point_index(pt) for pt in geom.points], dtype=np.int64)
        geom._pg_embedding = emb
    vals = np.zeros(pg.v, dtype=np.int64)
    vals[emb] = s.values
    return CharVector(pg, vals)


# ---------------------------------------------------------------------------
# hyperplane spectrum and affine restriction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HyperplaneSpectrum:
    mode: str
    pairs: tuple[tuple[int, int], ...]  # (intersection size, hyperplane count)
    count_identity: bool                # sum z_i = number of hyperplanes
    incidence_identity: bool            # sum n_i z_i = total * (q^m-1)/(q-1)
    n_min: int
    meets_every_hyperplane: bool
    times_q_bound: bool | None          # total >= q * n_min, when applicable


def hyperplane_spectrum(M: PointMultiset, mode: str = "support") -> HyperplaneSpectrum:
    """Distribution of hyperplane intersection numbers of a multiset."""
    if mode not in ("support", "weighted"):
        raise ValueError("mode must be 'support' or 'weighted'")
    geom = M.geometry
    if geom.kind != "pg":
        raise ValueError("hyperplane spectra are a projective service")
    if not M.mu:
        raise ValueError("empty multiset")
    q, m = geom.field.order, geom.params.m
    support = np.array(M.support, dtype=np.int64)
    inc = geom.incidence_values(geom.hyperplane_forms(), support) == 0
    if mode == "support":
        counts = inc.sum(axis=1)
        total = M.support_size
    else:
        mu_arr = np.array([M.mu[int(i)] for i in support], dtype=np.int64)
        counts = inc @ mu_arr
        total = M.size
    ns, zs = np.unique(counts, return_counts=True)
    pairs = tuple((int(n), int(z)) for n, z in zip(ns, zs))
    n_hyper = (q ** (m + 1) - 1) // (q - 1)
    per_point = (q ** m - 1) // (q - 1)
    count_ok = int(zs.sum()) == n_hyper
    incidence_ok = int((ns * zs).sum()) == total * per_point
    n_min = int(ns[0])
    meets_every = n_min > 0
    bound = (total >= q * n_min) if meets_every else None
    return HyperplaneSpectrum(mode, pairs, count_ok, incidence_ok,
                              n_min, meets_every, bound)


def disjoint_hyperplane(M: PointMultiset) -> Subspace | None:
    """First hyperplane (canonical order) missing the support, if any."""
    geom = M.geometry
    if geom.kind != "pg":
        raise ValueError("disjoint-hyperplane search is a projective service")
    support = np.array(M.support, dtype=np.int64)
    forms = geom.hyperplane_forms()
    vals = geom.incidence_values(forms, support)
    misses = np.nonzero(np.all(vals != 0, axis=1))[0]
    if misses.size == 0:
        return None
    return geom.hyperplane_subspace(forms[int(misses[0])])


def affine_restriction(M: PointMultiset, hyperplane: Subspace) -> PointMultiset:
    """Re-coordinatize so the given disjoint hyperplane is at infinity.

    The collineation sends the hyperplane to X_m = 0, so the multiset lands
    in AG(m,q) with its line residues intact.
    """
    geom = M.geometry
    F = geom.field
    m = geom.params.m
    form = _hyperplane_form(geom, hyperplane)
    support = np.array(M.support, dtype=np.int64)
    vals = geom.incidence_values(form[None, :], support)
    if np.any(vals == 0):
        raise ValueError("the hyperplane meets the multiset")
    pivot = int(np.argmax(form != 0))
    rows = [[1 if c == j else 0 for c in range(m + 1)]
            for j in range(m + 1) if j != pivot]
    T = np.array(rows + [form.tolist()], dtype=np.int64)
    ag = affine_geometry(geom.params.p, geom.params.h, m, F.modulus)
    mu = {}
    for i, mult in M.mu.items():
        pt = np.array(geom.points[i], dtype=np.int64)
        y = np.zeros(m + 1, dtype=np.int64)
        for c in range(m + 1):
            y = F.add_vec(y, F.mul_vec(pt[c], T[:, c]))
        inv = F.inv(int(y[m]))
        coords = tuple(F.mul(inv, int(y[c])) for c in range(m))
        mu[ag.affine_index(coords)] = mult
    if len(mu) != len(M.mu):
        raise RuntimeError("affine restriction was not injective")  # pragma: no cover
    return PointMultiset(ag, mu)


def _hyperplane_form(geom: Geometry, hyperplane: Subspace) -> np.ndarray:
    from .linalg import field_nullspace
    forms = field_nullspace(geom.field, np.array(hyperplane.basis, dtype=np.int64))
    if forms.shape[0] != 1:
        raise ValueError("not a hyperplane")
    return geom.normalize_rows(forms[0][None, :])[0]


# ---------------------------------------------------------------------------
# lower bounds
# ---------------------------------------------------------------------------

BOUND_NAMES = (
    "delsarte_dual_weight",
    "bagchi_inamdar_dual_weight",
    "zero_one_planar_weight",
    "unit_coordinate_sigma",
    "no_unit_coordinate_sigma",
    "projective_weight",
    "kspace_weight",
    "paired_values_sigma",
    "char3_sigma",
    "char5_sigma",
)


def bound_value(name: str, p: int, h: int, m: int, k: int | None = None) -> int:
    """Exact integer value of a named lower bound for the given parameters."""
    q = p ** h
    qf = Fraction(q)
    if name == "delsarte_dual_weight":
        val = (qf + p) * qf ** (m - 2)
    elif name == "bagchi_inamdar_dual_weight":
        N = Fraction(q ** m - 1, q - 1)
        val = 2 * (N * (1 - Fraction(1, p)) + Fraction(1, p))
    elif name == "zero_one_planar_weight":
        val = Fraction((p - 1) * (q + p))
    elif name in ("unit_coordinate_sigma", "paired_values_sigma"):
        val = (p - 1) * (qf ** (m - 1) + qf ** (m - 2)) + qf ** (m - 2)
    elif name == "no_unit_coordinate_sigma":
        val = 2 * qf ** (m - 1) + 2 * p * qf ** (m - 2)
    elif name == "projective_weight":
        val = 2 * (qf ** (m - 1) * (p - 1) / p + qf ** (m - 2))
    elif name == "kspace_weight":
        if k is None:
            raise ValueError("kspace_weight needs k")
        val = 2 * (qf ** (m - k) * (p - 1) / p + qf ** (m - k - 1))
    elif name == "char3_sigma":
        val = 2 * qf ** (m - 1) + 3 * qf ** (m - 2)
    elif name == "char5_sigma":
        val = 4 * qf ** (m - 1) + 5 * qf ** (m - 2)
    else:
        raise ValueError(f"unknown bound {name!r}")
    if val.denominator != 1:
        raise ValueError(f"bound {name} is not integral for p={p}, h={h}, m={m}, k={k}")
    return int(val)


@dataclass(frozen=True)
class BoundRow:
    name: str
    metric: str  # "w" or "sigma"
    value: int
    applies: bool
    satisfied: bool | None


@dataclass(frozen=True)
class BoundReport:
    rows: tuple[BoundRow, ...]
    sigma: int
    weight: int
    flags: dict

    @property
    def violations(self) -> tuple[BoundRow, ...]:
        return tuple(r for r in self.rows if r.applies and r.satisfied is False)

    def to_json(self) -> dict:
        return {
            "bounds": [{"name": r.name, "metric": r.metric, "value": r.value,
                        "applies": r.applies, "satisfied": r.satisfied}
                       for r in self.rows],
            "sigma": self.sigma,
            "weight": self.weight,
            "flags": dict(self.flags),
        }


def _paired_value(values: np.ndarray, p: int) -> int | None:
    """The t with 1 <= t <= (p-1)/2 such that all nonzero entries lie in
    {t, p-t}, or None."""
    nz = set(int(x) for x in values[values != 0])
    if not nz:
        return None
    for t in range(1, (p - 1) // 2 + 1):
        if nz <= {t, p - t}:
            return t
    return None


def bound_report(subject: PointMultiset | CharVector, k: int = 1) -> BoundReport:
    """Evaluate every applicable lower bound against a multiset or vector.

    Hypothesis flags (dual membership, unit coordinates, paired values) are
    always computed from the input, never taken on trust.  ``k`` selects the
    points-vs-k-spaces code the vector is checked against; the classic line
    bounds only fire for k = 1.
    """
    s = char_vector(subject) if isinstance(subject, PointMultiset) else subject
    geom = s.geometry
    p, h, m = geom.params.p, geom.params.h, geom.params.m
    q = geom.field.order
    vals = s.values
    nonzero = bool(np.any(vals))
    has_unit = bool(np.any(vals == 1))
    zero_one = bool(np.all(vals <= 1))
    paired_t = _paired_value(vals, p) if p > 2 else None
    in_dual = dual_membership(s, incidence_code(geom, k)) if nonzero else True
    affine = geom.kind == "ag"
    flags = {
        "kind": geom.kind, "p": p, "h": h, "m": m, "q": q, "k": k,
        "nonzero": nonzero, "in_dual": in_dual,
        "has_unit_coordinate": has_unit, "zero_one": zero_one,
        "paired_t": paired_t,
    }
    rows: list[BoundRow] = []

    def row(name: str, metric: str, applies: bool, kk: int | None = None) -> None:
        try:
            value = bound_value(name, p, h, m, kk)
        except ValueError:
            return
        measured = s.weight if metric == "w" else s.sigma
        rows.append(BoundRow(name, metric, value, applies,
                             (measured >= value) if applies else None))

    base = nonzero and in_dual and m >= 2
    line = base and k == 1
    row("delsarte_dual_weight", "w", line)
    row("bagchi_inamdar_dual_weight", "w", line)
    row("zero_one_planar_weight", "w", line and m == 2 and q > p and zero_one)
    row("unit_coordinate_sigma", "sigma", line and affine and q > p and p > 2 and has_unit)
    row("no_unit_coordinate_sigma", "sigma", line and affine and not has_unit)
    row("projective_weight", "w", line and q > p)
    if k <= m - 1:
        row("kspace_weight", "w", base and q > p, k)
    row("paired_values_sigma", "sigma",
        line and p > 2 and h > 1 and paired_t is not None)
    row("char3_sigma", "sigma", line and p == 3 and h > 1)
    row("char5_sigma", "sigma", line and p == 5 and h > 1)
    return BoundReport(tuple(rows), s.sigma, s.weight, flags)


# ---------------------------------------------------------------------------
# CSV I/O
# ---------------------------------------------------------------------------

def write_multiset_csv(M: PointMultiset, path: str) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["point", "multiplicity"])
        for i in M.support:
            w.writerow([i, M.mu[i]])


def read_multiset_csv(geometry: Geometry, path: str) -> PointMultiset:
    mu: dict[int, int] = {}
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].startswith("#") or row[0] == "point":
                continue
            i, m = int(row[0]), int(row[1])
            if i in mu:
                raise ValueError(f"duplicate point index {i}")
            mu[i] = m
    if not mu:
        raise ValueError("empty multiset")
    return PointMultiset(geometry, mu)
