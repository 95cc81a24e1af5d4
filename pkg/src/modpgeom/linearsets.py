"""F_p-subspaces of F_q^(m+1), their linear sets, and extremal constructions.

The ambient F_q-vector space is flattened to F_p coordinates through the
field's fixed basis (coordinate 0 digits first), so subspaces have unique
RREF bases over F_p.  The two constructions below — the graph of a
scattered linearized map with a prime-subfield tail coordinate, and the
subspace whose linear set fills the hyperplane X_m = 0 — combine through a
symmetric difference into multisets meeting every line in 0 mod p points.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .codes import PointMultiset
from .galois import Field, LinearizedPoly, Params, gaussian_binomial, get_field
from .geometry import CapExceeded, Geometry, normalized_tuples, rref_bases
from .linalg import nullspace_modp, rank_modp, rref_modp

SUBSPACE_SEARCH_CAP = 1_000_000


@dataclass(frozen=True)
class FpSubspace:
    """An F_p-subspace of F_p^n in canonical RREF form."""

    p: int
    ncols: int
    basis: tuple[tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.basis)

    def matrix(self) -> np.ndarray:
        return np.array(self.basis, dtype=np.int64)

    def __repr__(self) -> str:
        return f"FpSubspace(p={self.p}, rank={self.rank}, ncols={self.ncols})"


def fp_subspace(p: int, rows: Sequence[Sequence[int]], ncols: int | None = None) -> FpSubspace:
    """Canonicalize spanning rows (entries mod p) into an FpSubspace."""
    A = np.array(rows, dtype=np.int64)
    if A.ndim != 2:
        raise ValueError("expected a matrix of rows")
    if ncols is not None and A.shape[1] != ncols:
        raise ValueError("row length mismatch")
    R, pivots = rref_modp(A, p)
    if not pivots:
        raise ValueError("rank-0 subspace")
    R = R[: len(pivots)]
    return FpSubspace(p, A.shape[1], tuple(tuple(int(x) for x in r) for r in R))


# ---------------------------------------------------------------------------
# flattening F_q coordinates to F_p digits and back
# ---------------------------------------------------------------------------

def flatten_vector(field: Field, vec: Sequence[int]) -> tuple[int, ...]:
    out: list[int] = []
    for x in vec:
        out.extend(field.coeffs(x))
    return tuple(out)


def unflatten_matrix(field: Field, digits: np.ndarray, width: int) -> np.ndarray:
    """(N, h*width) digit matrix -> (N, width) matrix of field elements."""
    h = field.degree
    pows = field.p ** np.arange(h, dtype=np.int64)
    return digits.reshape(digits.shape[0], width, h) @ pows


# ---------------------------------------------------------------------------
# linear sets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LinearSet:
    """The projective points defined by the nonzero vectors of an F_p-subspace."""

    geometry: Geometry
    subspace: FpSubspace
    point_indices: tuple[int, ...]

    @property
    def rank(self) -> int:
        return self.subspace.rank

    def __len__(self) -> int:
        return len(self.point_indices)


def _nonzero_combos(p: int, r: int) -> np.ndarray:
    idx = np.arange(1, p ** r, dtype=np.int64)
    pp = p ** np.arange(r, dtype=np.int64)
    return (idx[:, None] // pp) % p


def linear_set(geometry: Geometry, U: FpSubspace) -> LinearSet:
    """Enumerate, normalize and deduplicate the p^r - 1 nonzero vectors of U."""
    if geometry.kind != "pg":
        raise ValueError("linear sets live in projective geometries")
    F = geometry.field
    h, m = F.degree, geometry.params.m
    if U.ncols != h * (m + 1):
        raise ValueError("subspace does not match the flattened ambient space")
    if U.rank < 1:
        raise ValueError("rank-0 subspace")
    combos = _nonzero_combos(U.p, U.rank)
    digits = (combos @ U.matrix()) % U.p
    elems = unflatten_matrix(F, digits, m + 1)
    keys = geometry.pack_keys(geometry.normalize_rows(elems))
    idx = geometry.lookup_points(np.unique(keys))
    return LinearSet(geometry, U, tuple(int(i) for i in idx))


def is_scattered(f: LinearizedPoly) -> tuple[bool, int]:
    """Whether |{f(x)/x : x nonzero}| hits its maximum (q-1)/(p-1)."""
    if f.is_zero:
        raise ValueError("the zero map is not eligible")
    F = f.field
    xs = np.arange(1, F.order, dtype=np.int64)
    ratios = F.mul_vec(f.eval_vec(xs), F.inv_vec(xs))
    count = int(np.unique(ratios).size)
    return count == (F.order - 1) // (F.p - 1), count


# ---------------------------------------------------------------------------
# the two subspaces behind the extremal construction
# ---------------------------------------------------------------------------

def _check_additive(field: Field, g: Callable, m: int, samples: int = 50) -> None:
    rng = np.random.default_rng(2024)
    q = field.order
    for _ in range(samples):
        u = tuple(int(x) for x in rng.integers(0, q, m - 1))
        v = tuple(int(x) for x in rng.integers(0, q, m - 1))
        uv = tuple(field.add(a, b) for a, b in zip(u, v))
        if g(uv) != field.add(g(u), g(v)):
            raise ValueError("custom map is not additive")
        c = int(rng.integers(1, field.p))
        cu = tuple(field.mul(c, a) for a in u)
        if g(cu) != field.mul(c % field.p, g(u)):
            raise ValueError("custom map is not F_p-homogeneous")


def graph_subspace(geometry: Geometry, f: LinearizedPoly | None = None,
                   custom_map: Callable[[tuple[int, ...]], int] | None = None) -> FpSubspace:
    """The rank h(m-1)+1 subspace {(x_0..x_{m-2}, g(x), y) : x_i in F_q, y in F_p}.

    By default g(x) = f(x_0) for a linearized polynomial f; ``custom_map``
    may supply any F_p-linear map F_q^(m-1) -> F_q instead (additivity is
    spot-checked, and downstream validation re-verifies the line residues
    rather than assuming them).
    """
    F, m = geometry.field, geometry.params.m
    if m < 2:
        raise ValueError("the construction needs m >= 2")
    if custom_map is None:
        if f is None:
            raise ValueError("either f or custom_map is required")
        if f.field is not F and f.field != F:
            raise ValueError("f must live over the geometry's field")
        custom_map = lambda xs: f(xs[0])
    else:
        _check_additive(F, custom_map, m)
    h = F.degree
    rows = []
    for i in range(m - 1):
        for j in range(h):
            e = F.p ** j
            xs = tuple(e if c == i else 0 for c in range(m - 1))
            vec = list(xs) + [custom_map(xs), 0]
            rows.append(flatten_vector(F, vec))
    rows.append(flatten_vector(F, (0,) * (m - 1) + (0, 1)))
    U = fp_subspace(F.p, rows)
    if U.rank != h * (m - 1) + 1:
        raise ValueError("the map collapsed the graph; expected rank h(m-1)+1")
    return U


def hyperplane_subspace(geometry: Geometry) -> FpSubspace:
    """The rank h(m-1)+1 subspace {(x_0..x_{m-2}, y, 0)}; its linear set is
    the full hyperplane X_m = 0."""
    F, m = geometry.field, geometry.params.m
    if m < 2:
        raise ValueError("the construction needs m >= 2")
    h = F.degree
    rows = []
    for i in range(m - 1):
        for j in range(h):
            e = F.p ** j
            vec = tuple(e if c == i else 0 for c in range(m - 1)) + (0, 0)
            rows.append(flatten_vector(F, vec))
    rows.append(flatten_vector(F, (0,) * (m - 1) + (1, 0)))
    return fp_subspace(F.p, rows)


def symdiff_multiset(LU: LinearSet, LW: LinearSet, t: int) -> PointMultiset:
    """Multiset with value t on L_U minus L_W and p-t on L_W minus L_U."""
    geom = LU.geometry
    if geom is not LW.geometry:
        raise ValueError("linear sets live in different geometries")
    p, h, m = geom.params.p, geom.params.h, geom.params.m
    if not 1 <= t <= p - 1:
        raise ValueError(f"t must lie in 1..{p - 1}")
    expected = h * (m - 1) + 1
    if LU.rank != expected or LW.rank != expected:
        raise ValueError(f"both linear sets must have rank {expected}")
    su, sw = set(LU.point_indices), set(LW.point_indices)
    mu = {i: t for i in su - sw}
    mu.update({i: p - t for i in sw - su})
    if not mu:
        warnings.warn("the two linear sets coincide; symmetric difference is empty")
        raise ValueError("degenerate construction: empty symmetric difference")
    return PointMultiset(geom, mu)


# ---------------------------------------------------------------------------
# evasiveness
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EvasiveResult:
    evasive: bool
    max_intersection_dim: int
    threshold: int
    witness_form: tuple[int, ...] | None


def evasive_check(field: Field, U: FpSubspace, ambient_dim: int) -> EvasiveResult:
    """Whether every F_q-hyperplane of F_q^ambient_dim meets U in F_p-dimension
    at most (ambient_dim - 2) * h."""
    h = field.degree
    if ambient_dim < 2:
        raise ValueError("ambient dimension must be >= 2")
    if U.ncols != h * ambient_dim:
        raise ValueError("subspace does not match the flattened ambient space")
    n_forms = (field.order ** ambient_dim - 1) // (field.order - 1)
    if n_forms > 100_000:
        raise CapExceeded("too many hyperplanes to scan")
    threshold = (ambient_dim - 2) * h
    UB = U.matrix()
    best, witness = -1, None
    for form in normalized_tuples(field, ambient_dim):
        # F_p-matrix of v -> sum_c form_c * v_c, as h rows per output digit
        cols = []
        for c in range(ambient_dim):
            for j in range(h):
                cols.append(field.coeffs(field.mul(form[c], field.p ** j)))
        A = np.array(cols, dtype=np.int64).T  # (h, h*ambient_dim)
        K = nullspace_modp(A, field.p)
        stacked = np.vstack([UB, K])
        dim = U.rank + K.shape[0] - rank_modp(stacked, field.p)
        if dim > best:
            best, witness = dim, form
    return EvasiveResult(best <= threshold, best, threshold,
                         witness if best > threshold else None)


# ---------------------------------------------------------------------------
# maximum linear set search
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MaxLinearSetResult:
    mode: str
    rank: int
    tried: int
    max_size: int
    witness: FpSubspace
    bound: int | None            # only for rank h*m
    within_bound: bool | None
    trivial_bound: int
    seed: int | None


def rank_hm_bound(params: Params) -> int:
    """Upper bound for linear sets of rank h*m: q^(m-1)(q-1)/(p-1) + (q^(m-1)-1)/(q-1)."""
    q, p, m = params.q, params.p, params.m
    return q ** (m - 1) * (q - 1) // (p - 1) + (q ** (m - 1) - 1) // (q - 1)


def max_linearset_size(geometry: Geometry, rank: int, mode: str = "exhaustive",
                       samples: int = 1000, seed: int | None = 0,
                       cap: int = SUBSPACE_SEARCH_CAP) -> MaxLinearSetResult:
    """Largest |L_U| over rank-r subspaces, exhaustively or by seeded sampling."""
    F = geometry.field
    p, h, m = geometry.params.p, geometry.params.h, geometry.params.m
    n = h * (m + 1)
    if not 1 <= rank <= n:
        raise ValueError("rank out of range")
    combos = _nonzero_combos(p, rank)
    key_w = geometry._key_weights
    Fp = get_field(p, 1)

    def set_size(B: np.ndarray) -> int:
        digits = (combos @ B) % p
        elems = unflatten_matrix(F, digits, m + 1)
        keys = geometry.pack_keys(geometry.normalize_rows(elems))
        return int(np.unique(keys).size)

    best, best_B = -1, None
    if mode == "exhaustive":
        total = gaussian_binomial(n, rank, p)
        if total > cap:
            raise CapExceeded(f"{total} subspaces exceed the search cap {cap}")
        tried = 0
        for basis in rref_bases(Fp, n, rank):
            B = np.array(basis, dtype=np.int64)
            size = set_size(B)
            tried += 1
            if size > best:
                best, best_B = size, basis
        used_seed = None
    elif mode == "sampled":
        rng = np.random.default_rng(seed)
        tried = 0
        while tried < samples:
            B = rng.integers(0, p, (rank, n)).astype(np.int64)
            if rank_modp(B, p) != rank:
                continue
            tried += 1
            size = set_size(B)
            if size > best:
                best = size
                best_B = tuple(tuple(int(x) for x in r) for r in rref_modp(B, p)[0][:rank])
        used_seed = seed
    else:
        raise ValueError("mode must be 'exhaustive' or 'sampled'")

    bound = rank_hm_bound(geometry.params) if rank == h * m else None
    trivial = (p ** rank - 1) // (p - 1)
    return MaxLinearSetResult(mode, rank, tried, best,
                              FpSubspace(p, n, best_B), bound,
                              None if bound is None else best <= bound,
                              trivial, used_seed)
