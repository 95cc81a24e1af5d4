"""Points, subspaces and incidence in PG(m,q) and AG(m,q).

Projective points are stored as normalized homogeneous tuples (leftmost
nonzero coordinate 1) of field element indices, enumerated in ascending
lexicographic order.  The affine space is the projective space minus the
hyperplane X_m = 0: affine points carry coordinate tuples in F_q^m, listed
in lexicographic order, and internally keep their normalized projective
representative so that the affine-to-projective embedding is a plain index
map.
"""

from __future__ import annotations

import csv
import itertools
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from .galois import Field, Params, gaussian_binomial, get_field
from .linalg import field_nullspace, field_rank, field_rref

POINT_CAP = 100_000
BLOCK_CAP = 10_000_000


class CapExceeded(RuntimeError):
    """An enumeration would exceed the configured desk-scale cap."""


def normalized_tuples(field: Field, length: int) -> list[tuple[int, ...]]:
    """All normalized tuples of the given length, ascending lexicographic."""
    out: list[tuple[int, ...]] = []
    for lead in range(length - 1, -1, -1):
        prefix = (0,) * lead + (1,)
        for tail in itertools.product(range(field.order), repeat=length - lead - 1):
            out.append(prefix + tail)
    return out


def rref_bases(field: Field, ncols: int, nrows: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    """All reduced-row-echelon bases of nrows-dimensional subspaces of F_q^ncols.

    Pivot column sets run in ascending order, free entries in lexicographic
    order, so the sequence is canonical and reproducible.
    """
    q = field.order
    for pivots in itertools.combinations(range(ncols), nrows):
        free = [(r, c) for r in range(nrows) for c in range(ncols)
                if c > pivots[r] and c not in pivots]
        template = np.zeros((nrows, ncols), dtype=np.int64)
        for r, pc in enumerate(pivots):
            template[r, pc] = 1
        for values in itertools.product(range(q), repeat=len(free)):
            M = template.copy()
            for (r, c), v in zip(free, values):
                M[r, c] = v
            yield tuple(tuple(int(x) for x in row) for row in M)


@dataclass(frozen=True)
class Subspace:
    """A projective subspace given by its canonical RREF basis over GF(q)."""

    geometry: "Geometry"
    basis: tuple[tuple[int, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.basis) - 1

    @property
    def points(self) -> tuple[int, ...]:
        return self.geometry.subspace_points(self)

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, basis={self.basis})"


@dataclass(frozen=True)
class BlockSet:
    """All blocks of one dimension: subspaces plus their point-index matrix."""

    k: int
    subspaces: tuple[Subspace, ...]
    point_matrix: np.ndarray  # (n_blocks, points_per_block), sorted rows

    def __len__(self) -> int:
        return len(self.subspaces)


class Geometry:
    """PG(m,q) or AG(m,q) with cached enumerations and incidence services."""

    def __init__(self, kind: str, params: Params, modulus: Sequence[int] | None = None,
                 point_cap: int = POINT_CAP, block_cap: int = BLOCK_CAP):
        if kind not in ("pg", "ag"):
            raise ValueError("kind must be 'pg' or 'ag'")
        self.kind = kind
        self.params = params
        self.field = get_field(params.p, params.h, modulus)
        self.point_cap = point_cap
        self.block_cap = block_cap
        q, m = self.field.order, params.m
        self.v = (q ** (m + 1) - 1) // (q - 1) if kind == "pg" else q ** m
        if self.v > point_cap:
            raise CapExceeded(f"{self.v} points exceed the cap {point_cap}")
        self._build_points()
        self._blocks: dict[int, BlockSet] = {}

    # -- points --------------------------------------------------------------

    def _build_points(self) -> None:
        q, m = self.field.order, self.params.m
        if q ** (m + 1) >= 1 << 62:
            raise CapExceeded("coordinate keys would overflow")
        if self.kind == "pg":
            pts = normalized_tuples(self.field, m + 1)
            self.affine_tuples: list[tuple[int, ...]] | None = None
        else:
            F = self.field
            pts = []
            self.affine_tuples = []
            for tup in itertools.product(range(q), repeat=m):
                vec = tup + (1,)
                lead = next(x for x in vec if x)
                inv = F.inv(lead)
                pts.append(tuple(F.mul(inv, x) for x in vec))
                self.affine_tuples.append(tup)
        self.points: list[tuple[int, ...]] = pts
        self._point_index = {pt: i for i, pt in enumerate(pts)}
        arr = np.array(pts, dtype=np.int64)
        self._points_array = arr
        self._key_weights = (q ** np.arange(m, -1, -1)).astype(np.int64)
        keys = arr @ self._key_weights
        self._keys = keys
        self._sort_perm = np.argsort(keys, kind="stable")
        self._sorted_keys = keys[self._sort_perm]
        if self.kind == "ag":
            self._affine_index = {t: i for i, t in enumerate(self.affine_tuples)}

    def point_index(self, pt: Sequence[int]) -> int:
        return self._point_index[tuple(pt)]

    def affine_index(self, tup: Sequence[int]) -> int:
        if self.kind != "ag":
            raise ValueError("affine coordinates only exist in affine geometries")
        return self._affine_index[tuple(tup)]

    def affine_coords(self, i: int) -> tuple[int, ...]:
        if self.kind != "ag":
            raise ValueError("affine coordinates only exist in affine geometries")
        return self.affine_tuples[i]

    def lookup_points(self, keys: np.ndarray) -> np.ndarray:
        """Map packed coordinate keys to point indices; -1 when absent."""
        pos = np.minimum(np.searchsorted(self._sorted_keys, keys), self.v - 1)
        found = self._sorted_keys[pos] == keys
        return np.where(found, self._sort_perm[pos], -1)

    def normalize_rows(self, rows: np.ndarray) -> np.ndarray:
        """Scale each nonzero row so its leftmost nonzero entry is 1."""
        F = self.field
        lead_pos = np.argmax(rows != 0, axis=-1)
        lead = np.take_along_axis(rows, lead_pos[..., None], axis=-1)[..., 0]
        return F.mul_vec(rows, F.inv_vec(lead)[..., None])

    def pack_keys(self, rows: np.ndarray) -> np.ndarray:
        return rows @ self._key_weights

    # -- subspaces and blocks --------------------------------------------------

    def subspace(self, rows: Sequence[Sequence[int]]) -> Subspace:
        """Canonicalize arbitrary spanning rows into a Subspace."""
        R, pivots = field_rref(self.field, np.array(rows, dtype=np.int64))
        R = R[: len(pivots)]
        return Subspace(self, tuple(tuple(int(x) for x in row) for row in R))

    def subspace_points(self, sub: Subspace) -> tuple[int, ...]:
        F = self.field
        basis = np.array(sub.basis, dtype=np.int64)
        combos = np.array(normalized_tuples(F, basis.shape[0]), dtype=np.int64)
        acc = np.zeros((combos.shape[0], basis.shape[1]), dtype=np.int64)
        for j in range(basis.shape[0]):
            acc = F.add_vec(acc, F.mul_vec(combos[:, j][:, None], basis[j][None, :]))
        idx = self.lookup_points(self.pack_keys(self.normalize_rows(acc)))
        idx = idx[idx >= 0]
        return tuple(sorted(int(i) for i in set(idx.tolist())))

    def n_blocks(self, k: int) -> int:
        q, m = self.field.order, self.params.m
        if self.kind == "pg":
            return gaussian_binomial(m + 1, k + 1, q)
        return q ** (m - 1) * (q ** m - 1) // (q - 1)

    def blocks(self, k: int = 1) -> BlockSet:
        """All k-dimensional blocks with their point-index rows."""
        if self.kind == "ag" and k != 1:
            raise ValueError("affine geometries enumerate lines only")
        if not 1 <= k <= self.params.m:
            raise ValueError(f"block dimension {k} out of range 1..{self.params.m}")
        if k not in self._blocks:
            if gaussian_binomial(self.params.m + 1, k + 1, self.field.order) > self.block_cap:
                raise CapExceeded("block enumeration exceeds the cap")
            self._blocks[k] = self._enumerate_blocks(k)
        return self._blocks[k]

    def _enumerate_blocks(self, k: int) -> BlockSet:
        F, m = self.field, self.params.m
        bases = list(rref_bases(F, m + 1, k + 1))
        B = np.array(bases, dtype=np.int64)  # (nb, k+1, m+1)
        combos = np.array(normalized_tuples(F, k + 1), dtype=np.int64)  # (s, k+1)
        acc = np.zeros((B.shape[0], combos.shape[0], m + 1), dtype=np.int64)
        for j in range(k + 1):
            acc = F.add_vec(acc, F.mul_vec(combos[None, :, j, None], B[:, None, j, :]))
        idx = self.lookup_points(self.pack_keys(self.normalize_rows(acc)))
        if self.kind == "pg":
            matrix = np.sort(idx, axis=1)
            keep = np.arange(len(bases))
        else:
            hits = idx >= 0
            keep = np.nonzero(hits.sum(axis=1) == F.order)[0]
            matrix = np.sort(
                idx[keep][hits[keep]].reshape(len(keep), F.order), axis=1)
        subs = tuple(Subspace(self, bases[i]) for i in keep)
        return BlockSet(k, subs, matrix)

    def incidence_matrix(self, k: int = 1) -> np.ndarray:
        bs = self.blocks(k)
        M = np.zeros((len(bs), self.v), dtype=np.uint8)
        M[np.arange(len(bs))[:, None], bs.point_matrix] = 1
        return M

    # -- incidence queries -------------------------------------------------

    def line_through(self, i: int, j: int) -> Subspace:
        if i == j:
            raise ValueError("two distinct points are required")
        sub = self.subspace([self.points[i], self.points[j]])
        if len(sub.basis) != 2:
            raise ValueError("points do not span a line")
        return sub

    def hyperplane_forms(self) -> np.ndarray:
        """Normalized linear forms, one per hyperplane, in canonical order."""
        return np.array(normalized_tuples(self.field, self.params.m + 1), dtype=np.int64)

    def hyperplane_subspace(self, form: Sequence[int]) -> Subspace:
        kernel = field_nullspace(self.field, np.array([form], dtype=np.int64))
        return self.subspace(kernel)

    def hyperplanes_through(self, sub: Subspace) -> list[Subspace]:
        """The q+1 hyperplanes containing a codimension-2 subspace."""
        if self.kind != "pg":
            raise ValueError("hyperplane pencils are a projective service")
        if sub.dim != self.params.m - 2:
            raise ValueError("expected a subspace of projective dimension m-2")
        F = self.field
        forms = field_nullspace(F, np.array(sub.basis, dtype=np.int64))
        if forms.shape[0] != 2:
            raise ValueError("degenerate input subspace")
        out = []
        for a, b in normalized_tuples(F, 2):
            form = F.add_vec(F.mul_vec(a, forms[0]), F.mul_vec(b, forms[1]))
            out.append(self.hyperplane_subspace(form))
        return out

    def incidence_values(self, forms: np.ndarray, point_idx: np.ndarray) -> np.ndarray:
        """Evaluate each form at each point; entry 0 means incident."""
        F = self.field
        pts = self._points_array[point_idx]
        acc = np.zeros((forms.shape[0], pts.shape[0]), dtype=np.int64)
        for c in range(forms.shape[1]):
            acc = F.add_vec(acc, F.mul_vec(forms[:, c][:, None], pts[:, c][None, :]))
        return acc

    def __repr__(self) -> str:
        name = "PG" if self.kind == "pg" else "AG"
        return f"{name}({self.params.m},{self.field.order})"


@lru_cache(maxsize=None)
def _geometry(kind: str, p: int, h: int, m: int, modulus: tuple | None) -> Geometry:
    return Geometry(kind, Params(p, h, m), modulus)


def projective_geometry(p: int, h: int, m: int, modulus: Sequence[int] | None = None) -> Geometry:
    return _geometry("pg", p, h, m, tuple(modulus) if modulus else None)


def affine_geometry(p: int, h: int, m: int, modulus: Sequence[int] | None = None) -> Geometry:
    return _geometry("ag", p, h, m, tuple(modulus) if modulus else None)


def make_geometry(kind: str, p: int, h: int, m: int) -> Geometry:
    return _geometry(kind, p, h, m, None)


def enumerate_points(geom: Geometry) -> list[tuple[int, ...]]:
    return list(geom.points)


def enumerate_subspaces(geom: Geometry, k: int) -> tuple[Subspace, ...]:
    return geom.blocks(k).subspaces


# -- CSV export -------------------------------------------------------------

def export_points_csv(geom: Geometry, path: str) -> None:
    """One row per point: index followed by per-coordinate coefficient tuples."""
    F = geom.field
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["index"] + [f"x{i}" for i in range(geom.params.m + 1)])
        for i, pt in enumerate(geom.points):
            w.writerow([i] + [":".join(str(c) for c in F.coeffs(x)) for x in pt])


def export_blocks_csv(geom: Geometry, k: int, path: str) -> None:
    """One row per block: index followed by its sorted point indices."""
    bs = geom.blocks(k)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["block", "points"])
        for i, row in enumerate(bs.point_matrix):
            w.writerow([i, " ".join(str(int(x)) for x in row)])
