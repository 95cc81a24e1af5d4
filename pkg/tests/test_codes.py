import numpy as np
import pytest

from modpgeom.codes import (
    BudgetExceeded,
    CharVector,
    PointMultiset,
    affine_restriction,
    bound_report,
    bound_value,
    char_vector,
    char_vector_from_digits,
    disjoint_hyperplane,
    dual_membership,
    extend_affine_to_projective,
    hyperplane_spectrum,
    incidence_code,
    kspace_dual_minweight,
    line_residue_check,
    min_weight_exhaustive,
    multiset_of,
    p_minus_one_multiset,
    p_rank,
    read_multiset_csv,
    reduce_multiplicities,
    scale,
    write_multiset_csv,
)
from modpgeom.galois import LinearizedPoly, Params
from modpgeom.geometry import affine_geometry, projective_geometry
from modpgeom.linearsets import (
    graph_subspace,
    hyperplane_subspace,
    linear_set,
    symdiff_multiset,
)


def construction_multiset(p, h, m, t=1):
    geom = projective_geometry(p, h, m)
    f = LinearizedPoly.monomial(geom.field, 1)
    LU = linear_set(geom, graph_subspace(geom, f))
    LW = linear_set(geom, hyperplane_subspace(geom))
    return symdiff_multiset(LU, LW, t)


def brute_force_dual_minimum(geom):
    """Scan every vector of F_p^v for orthogonality to all lines; wholly
    independent of the nullspace-based search."""
    p, v = geom.params.p, geom.v
    M = geom.incidence_matrix(1).astype(np.int64)
    best_w, best_s = None, None
    pp = p ** np.arange(v, dtype=np.int64)
    total = p ** v
    for start in range(0, total, 1 << 16):
        idx = np.arange(start, min(start + (1 << 16), total), dtype=np.int64)
        V = (idx[:, None] // pp) % p
        ok = ~np.any((V @ M.T) % p, axis=1)
        ok[idx == 0] = False
        if not np.any(ok):
            continue
        W = V[ok]
        ws = np.count_nonzero(W, axis=1).min()
        ss = W.sum(axis=1).min()
        best_w = ws if best_w is None else min(best_w, int(ws))
        best_s = ss if best_s is None else min(best_s, int(ss))
    return int(best_w), int(best_s)


# -- conversions --------------------------------------------------------------

def test_char_vector_of_construction():
    M = construction_multiset(3, 2, 2)
    s = char_vector(M)
    assert s.sigma == 21 and s.weight == 15
    assert sorted(M.mu.values()).count(1) == 9
    assert sorted(M.mu.values()).count(2) == 6
    assert multiset_of(s).mu == M.mu


def test_empty_multiset_round_trip():
    geom = projective_geometry(3, 1, 2)
    M = PointMultiset(geom, {})
    s = char_vector(M)
    assert s.sigma == 0 and s.weight == 0


def test_all_ones_vector():
    geom = projective_geometry(3, 1, 2)
    s = CharVector(geom, np.ones(13, dtype=np.int64))
    assert multiset_of(s).size == 13


def test_digit_string_round_trip():
    geom = projective_geometry(2, 1, 2)
    s = CharVector(geom, np.array([1, 0, 1, 1, 0, 0, 1]))
    assert char_vector_from_digits(geom, s.digits()) == s


def test_reduce_multiplicities():
    geom = projective_geometry(3, 1, 2)
    M = reduce_multiplicities(geom, {0: 3, 1: 4, 2: 5})
    assert M.mu == {1: 1, 2: 2}
    again = reduce_multiplicities(geom, dict(M.mu))
    assert again.mu == M.mu  # idempotent on reduced input
    line = projective_geometry(3, 1, 2).blocks(1).point_matrix[0]
    with pytest.raises(ValueError, match="empty"):
        reduce_multiplicities(geom, {int(i): 3 for i in line})


def test_reduce_preserves_line_residues():
    geom = projective_geometry(3, 1, 2)
    rng = np.random.default_rng(4)
    raw = {int(i): int(rng.integers(1, 12)) for i in rng.choice(13, 6, replace=False)}
    reduced = reduce_multiplicities(geom, raw)
    p = 3
    for row in geom.blocks(1).point_matrix:
        before = sum(raw.get(int(i), 0) for i in row) % p
        after = sum(reduced.mu.get(int(i), 0) for i in row) % p
        assert before == after


# -- line residues and dual membership ----------------------------------------

def test_line_residue_check_construction_examples():
    assert line_residue_check(construction_multiset(3, 2, 2)).valid
    assert line_residue_check(construction_multiset(3, 2, 3)).valid


def test_single_point_fails_line_check():
    geom = projective_geometry(3, 2, 2)
    res = line_residue_check(PointMultiset(geom, {5: 1}))
    assert not res.valid and res.offending_block is not None


def test_fano_dual_membership():
    geom = projective_geometry(2, 1, 2)
    code = incidence_code(geom)
    line0 = set(int(i) for i in geom.blocks(1).point_matrix[0])
    comp = CharVector(geom, np.array([0 if i in line0 else 1 for i in range(7)]))
    single = CharVector(geom, np.array([1 if i in line0 else 0 for i in range(7)]))
    zero = CharVector(geom, np.zeros(7, dtype=np.int64))
    assert dual_membership(comp, code)
    assert not dual_membership(single, code)
    assert dual_membership(zero, code)


def test_line_residue_equals_dual_membership():
    geom = projective_geometry(3, 1, 2)
    code = incidence_code(geom)
    rng = np.random.default_rng(9)
    for _ in range(60):
        s = CharVector(geom, rng.integers(0, 3, geom.v))
        assert line_residue_check(s).valid == dual_membership(s, code)


@pytest.mark.parametrize("p,h,m", [(3, 2, 2), (3, 2, 3), (5, 2, 2)])
def test_constructions_are_dual_members(p, h, m):
    M = construction_multiset(p, h, m)
    s = char_vector(M)
    code = incidence_code(M.geometry)
    assert line_residue_check(M).valid and dual_membership(s, code)
    assert M.size % p == 0


# -- p-rank ---------------------------------------------------------------------

def test_p_rank_examples():
    assert p_rank(incidence_code(projective_geometry(2, 1, 2))) == 4
    assert incidence_code(projective_geometry(2, 1, 2)).dual_dim == 3
    assert p_rank(incidence_code(projective_geometry(3, 1, 2))) == 7
    assert incidence_code(projective_geometry(3, 1, 2)).dual_dim == 6


def test_p_rank_pg29_double_elimination():
    geom = projective_geometry(3, 2, 2)
    code = incidence_code(geom)
    assert code.rank == 37
    # second elimination on a shuffled row order must agree
    from modpgeom.linalg import rref_modp
    rng = np.random.default_rng(31)
    shuffled = code.matrix[rng.permutation(code.matrix.shape[0])]
    assert len(rref_modp(shuffled, 3)[1]) == 37


# -- exhaustive minimum weights -------------------------------------------------

def test_min_weight_fano_vs_brute_force():
    geom = projective_geometry(2, 1, 2)
    res = min_weight_exhaustive(incidence_code(geom))
    assert (res.min_weight, res.min_sigma) == brute_force_dual_minimum(geom) == (4, 4)
    assert res.min_weight == bound_value("delsarte_dual_weight", 2, 1, 2) == 4
    assert res.witness.weight == 4
    assert dual_membership(res.witness, incidence_code(geom))


def test_min_weight_pg23_vs_brute_force():
    geom = projective_geometry(3, 1, 2)
    res = min_weight_exhaustive(incidence_code(geom))
    bw, bs = brute_force_dual_minimum(geom)
    assert res.min_weight == bw == 6
    assert res.min_sigma == bs
    assert res.min_weight == bound_value("bagchi_inamdar_dual_weight", 3, 1, 2) == 6


def test_min_weight_pg19_both_metrics():
    geom = projective_geometry(3, 2, 1)
    code = incidence_code(geom)
    res_w = min_weight_exhaustive(code, "w")
    res_s = min_weight_exhaustive(code, "sigma")
    assert res_w.minimum == res_w.min_weight == 2
    assert res_s.minimum == res_s.min_sigma == 3
    bw, bs = brute_force_dual_minimum(geom)
    assert (bw, bs) == (2, 3)
    assert res_s.min_sigma >= res_w.min_weight


def test_min_weight_budget_guard():
    geom = projective_geometry(3, 2, 2)
    with pytest.raises(BudgetExceeded):
        min_weight_exhaustive(incidence_code(geom), budget=1 << 10)


def test_kspace_reduction_pg32():
    red = kspace_dual_minweight(Params(2, 1, 3), 2)
    assert red.value == red.reduced_value == 4 and red.equal
    red1 = kspace_dual_minweight(Params(2, 1, 3), 1)
    assert red1.value == bound_value("kspace_weight", 2, 1, 3, 1) == 8
    full = kspace_dual_minweight(Params(2, 1, 3), 3)
    assert full.value == 2  # the full-space block gives the sum-zero code


# -- coordinate-wise operations -------------------------------------------------

def test_scale_examples():
    geom = projective_geometry(5, 1, 2)
    s = CharVector(geom, np.array([1, 3, 0] + [0] * (geom.v - 3)))
    assert scale(s, 2).values[:3].tolist() == [2, 1, 0]
    assert scale(s, 1) == s
    for lam in range(1, 5):
        assert scale(s, lam).weight == s.weight
    with pytest.raises(ValueError):
        scale(s, 5)


def test_scale_preserves_dual_membership():
    geom = projective_geometry(3, 1, 2)
    code = incidence_code(geom)
    B = code.nullspace
    rng = np.random.default_rng(2)
    for _ in range(20):
        coeffs = rng.integers(0, 3, B.shape[0])
        s = CharVector(geom, (coeffs @ B) % 3)
        for lam in (1, 2):
            assert dual_membership(scale(s, lam), code)


def test_p_minus_one_multiset():
    geom = projective_geometry(3, 2, 2)
    M = construction_multiset(3, 2, 2)
    flipped = p_minus_one_multiset(M)
    assert flipped.support == M.support
    assert all(flipped.mu[i] == (2 * M.mu[i]) % 3 for i in M.support)
    s = char_vector(M)
    assert M.size + flipped.size == 3 * s.weight
    geom5 = projective_geometry(5, 1, 2)
    M5 = PointMultiset(geom5, {0: 2})
    assert p_minus_one_multiset(M5).mu[0] == 3


# -- spectra ---------------------------------------------------------------------

def test_fano_complement_spectrum():
    geom = projective_geometry(2, 1, 2)
    line0 = set(int(i) for i in geom.blocks(1).point_matrix[0])
    comp = PointMultiset(geom, {i: 1 for i in range(7) if i not in line0})
    spec = hyperplane_spectrum(comp)
    assert spec.pairs == ((0, 1), (2, 6))
    assert spec.count_identity and spec.incidence_identity
    assert spec.n_min == 0 and not spec.meets_every_hyperplane


def test_construction_weighted_spectrum():
    M = construction_multiset(3, 2, 2)
    spec = hyperplane_spectrum(M, "weighted")
    assert spec.count_identity and spec.incidence_identity
    total = sum(n * z for n, z in spec.pairs)
    assert total == 21 * 10
    assert sum(z for _, z in spec.pairs) == 91


def test_spectrum_rejects_empty():
    geom = projective_geometry(3, 1, 2)
    with pytest.raises(ValueError):
        hyperplane_spectrum(PointMultiset(geom, {}))


def test_spectrum_identities_random_multisets():
    geom = projective_geometry(3, 2, 2)
    rng = np.random.default_rng(12)
    for _ in range(25):
        size = int(rng.integers(1, 30))
        support = rng.choice(geom.v, size, replace=False)
        mu = {int(i): int(rng.integers(1, 3)) for i in support}
        for mode in ("support", "weighted"):
            spec = hyperplane_spectrum(PointMultiset(geom, mu), mode)
            assert spec.count_identity and spec.incidence_identity


# -- affine/projective transfer ---------------------------------------------------

def test_extension_preserves_sigma_weight_and_membership():
    M = construction_multiset(3, 2, 2)
    H = disjoint_hyperplane(M)
    Ma = affine_restriction(M, H)
    assert Ma.size == 21 and line_residue_check(Ma).valid
    s = char_vector(Ma)
    ext = extend_affine_to_projective(s)
    assert ext.sigma == s.sigma == 21 and ext.weight == s.weight == 15
    assert ext.geometry.v == 91
    pg = ext.geometry
    assert dual_membership(ext, incidence_code(pg))
    zero = CharVector(Ma.geometry, np.zeros(81, dtype=np.int64))
    assert extend_affine_to_projective(zero).sigma == 0


def test_affine_restriction_requires_disjoint_hyperplane():
    M = construction_multiset(3, 2, 2)
    geom = M.geometry
    # pick a hyperplane through a support point
    forms = geom.hyperplane_forms()
    vals = geom.incidence_values(forms, np.array(M.support))
    hit = int(np.nonzero(np.any(vals == 0, axis=1))[0][0])
    with pytest.raises(ValueError):
        affine_restriction(M, geom.hyperplane_subspace(forms[hit]))


# -- bounds ------------------------------------------------------------------------

def test_bound_values_pinned():
    assert bound_value("delsarte_dual_weight", 2, 1, 2) == 4
    assert bound_value("bagchi_inamdar_dual_weight", 3, 1, 2) == 6
    assert bound_value("bagchi_inamdar_dual_weight", 3, 2, 2) == 14
    assert bound_value("bagchi_inamdar_dual_weight", 3, 2, 3) == 122
    assert bound_value("projective_weight", 3, 2, 2) == 14
    assert bound_value("projective_weight", 3, 2, 3) == 126
    assert bound_value("unit_coordinate_sigma", 3, 2, 2) == 21
    assert bound_value("unit_coordinate_sigma", 3, 2, 3) == 189
    assert bound_value("unit_coordinate_sigma", 5, 2, 2) == 105
    assert bound_value("zero_one_planar_weight", 3, 2, 2) == 2 * 12
    assert bound_value("char3_sigma", 3, 2, 2) == 21
    assert bound_value("char5_sigma", 5, 2, 2) == 105


def test_no_unit_bound_equals_doubled_delsarte():
    for p, h, m in [(3, 2, 2), (3, 2, 3), (5, 2, 2), (3, 2, 4), (7, 2, 3)]:
        assert (bound_value("no_unit_coordinate_sigma", p, h, m)
                == 2 * bound_value("delsarte_dual_weight", p, h, m))


def test_bound_report_construction_attains():
    M = construction_multiset(3, 2, 2)
    rep = bound_report(M)
    assert rep.sigma == 21 and rep.weight == 15
    assert not rep.violations
    row = {r.name: r for r in rep.rows}
    assert row["paired_values_sigma"].applies
    assert row["paired_values_sigma"].value == 21 and row["paired_values_sigma"].satisfied
    assert row["char3_sigma"].applies and row["char3_sigma"].satisfied
    # projective input: the affine-only bounds stay quiet
    assert not row["unit_coordinate_sigma"].applies


def test_bound_report_affine_side():
    M = construction_multiset(3, 2, 2)
    Ma = affine_restriction(M, disjoint_hyperplane(M))
    rep = bound_report(Ma)
    row = {r.name: r for r in rep.rows}
    assert row["unit_coordinate_sigma"].applies
    assert row["unit_coordinate_sigma"].value == 21
    assert row["unit_coordinate_sigma"].satisfied  # attained with equality
    assert rep.flags["has_unit_coordinate"] and rep.flags["in_dual"]
    assert not rep.violations


def test_bound_report_zero_one_vector():
    geom = projective_geometry(2, 1, 2)
    line0 = set(int(i) for i in geom.blocks(1).point_matrix[0])
    comp = PointMultiset(geom, {i: 1 for i in range(7) if i not in line0})
    rep = bound_report(comp)
    row = {r.name: r for r in rep.rows}
    assert rep.flags["zero_one"]
    assert row["delsarte_dual_weight"].satisfied
    # q = p here, so the planar 0/1 bound does not fire
    assert not row["zero_one_planar_weight"].applies


def test_bound_report_json_shape():
    M = construction_multiset(3, 2, 2)
    data = bound_report(M).to_json()
    assert set(data) == {"bounds", "sigma", "weight", "flags"}
    assert all(set(b) == {"name", "metric", "value", "applies", "satisfied"}
               for b in data["bounds"])


def test_bound_improvement_arithmetic():
    assert bound_value("projective_weight", 3, 2, 3) > bound_value(
        "bagchi_inamdar_dual_weight", 3, 2, 3)
    assert bound_value("projective_weight", 3, 2, 2) == bound_value(
        "bagchi_inamdar_dual_weight", 3, 2, 2) == 14


# -- CSV --------------------------------------------------------------------------

def test_multiset_csv_round_trip(tmp_path):
    M = construction_multiset(3, 2, 2)
    path = tmp_path / "m.csv"
    write_multiset_csv(M, str(path))
    back = read_multiset_csv(M.geometry, str(path))
    assert back.mu == M.mu
    empty = tmp_path / "empty.csv"
    empty.write_text("point,multiplicity\n")
    with pytest.raises(ValueError, match="empty"):
        read_multiset_csv(M.geometry, str(empty))
