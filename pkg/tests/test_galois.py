import math

import numpy as np
import pytest
from sympy.polys.domains import ZZ
from sympy.polys import galoistools as gfx

from modpgeom.galois import (
    Field,
    LinearizedPoly,
    Params,
    default_modulus,
    extension_field,
    gaussian_binomial,
    get_field,
    lucas_binom,
)


def sympy_mul(field, a, b):
    """Independent product via sympy's dense GF arithmetic (big-endian)."""
    ca = list(reversed(field.coeffs(a)))
    cb = list(reversed(field.coeffs(b)))
    mod = list(reversed(field.modulus))
    prod = gfx.gf_mul(ca, cb, field.p, ZZ)
    red = gfx.gf_rem(prod, mod, field.p, ZZ)
    red = list(reversed(red)) + [0] * field.degree
    return field.element(red[: field.degree])


def test_prime_field_default_modulus():
    f3 = Field(3, 1)
    assert f3.modulus == (0, 1)
    assert f3.order == 3
    assert f3.add(2, 2) == 1 and f3.mul(2, 2) == 1


def test_gf9_default_modulus_is_x2_plus_1():
    assert default_modulus(3, 2) == (1, 0, 1)
    assert get_field(3, 2).modulus == (1, 0, 1)


def test_reducible_modulus_rejected():
    # x^2 + 2 = x^2 - 1 has the root 1 mod 3
    with pytest.raises(ValueError, match="reducible"):
        Field(3, 2, (2, 0, 1))


def test_nonprime_p_rejected():
    with pytest.raises(ValueError, match="prime"):
        Field(6, 1)


def test_gf9_product_of_one_plus_x():
    F = get_field(3, 2)
    a = F.element((1, 1))
    assert F.coeffs(F.mul(a, a)) == (0, 2)  # (1+x)^2 = 2x mod x^2+1


@pytest.mark.parametrize("p,d", [(2, 3), (3, 2), (5, 2), (3, 4)])
def test_mul_matches_sympy(p, d):
    F = get_field(p, d)
    rng = np.random.default_rng(7)
    for _ in range(60):
        a, b = int(rng.integers(F.order)), int(rng.integers(F.order))
        assert F.mul(a, b) == sympy_mul(F, a, b)


def test_mul_identity_random():
    F = get_field(3, 2)
    rng = np.random.default_rng(1)
    for a in rng.integers(0, 9, 20):
        assert F.mul(int(a), 1) == int(a)


def test_inverse_exhaustive_gf9():
    F = get_field(3, 2)
    for a in range(1, 9):
        assert F.mul(a, F.inv(a)) == 1
    with pytest.raises(ZeroDivisionError):
        F.inv(0)


def test_frobenius_of_one_plus_x():
    F = get_field(3, 2)
    a = F.element((1, 1))
    cube = F.mul(F.mul(a, a), a)
    assert F.frobenius(a, 1) == cube == F.element((1, 2))


def test_frobenius_identity_and_prime_subfield():
    F = get_field(3, 2)
    for a in F.elements():
        assert F.frobenius(a, 0) == a
    for c in range(3):
        assert F.frobenius(c, 1) == c


@pytest.mark.parametrize("p,d", [(2, 2), (2, 3), (3, 2), (5, 2), (3, 4)])
def test_power_order_and_frobenius_fixed_field(p, d):
    F = get_field(p, d)
    fixed = []
    for a in F.elements():
        assert F.pow(a, p ** d) == a
        if F.frobenius(a, 1) == a:
            fixed.append(a)
    assert fixed == list(range(p))  # Frobenius fixes exactly the prime subfield


def test_frobenius_additive():
    F = get_field(3, 4)
    rng = np.random.default_rng(3)
    for _ in range(50):
        a, b = int(rng.integers(F.order)), int(rng.integers(F.order))
        assert F.frobenius(F.add(a, b), 1) == F.add(F.frobenius(a, 1), F.frobenius(b, 1))


def test_vectorised_ops_match_scalar():
    F = get_field(5, 2)
    rng = np.random.default_rng(11)
    a = rng.integers(0, F.order, 100)
    b = rng.integers(0, F.order, 100)
    assert all(int(x) == F.add(int(u), int(v)) for x, u, v in zip(F.add_vec(a, b), a, b))
    assert all(int(x) == F.mul(int(u), int(v)) for x, u, v in zip(F.mul_vec(a, b), a, b))
    nz = a[a != 0]
    assert all(int(x) == F.inv(int(u)) for x, u in zip(F.inv_vec(nz), nz))
    assert all(int(x) == F.pow(int(u), 7) for x, u in zip(F.pow_vec(a, 7), a))


# -- linearized polynomials --------------------------------------------------

def test_linearized_monomial_equals_frobenius():
    F = get_field(3, 2)
    f = LinearizedPoly.monomial(F, 1)  # x^3
    a = F.element((1, 1))
    assert f(a) == F.frobenius(a, 1) == F.element((1, 2))


def test_linearized_at_zero_and_identity():
    F = get_field(3, 2)
    f = LinearizedPoly(F, (2, 7))
    assert f(0) == 0
    ident = LinearizedPoly.identity(F)
    for a in F.elements():
        assert ident(a) == a


def test_linearized_additivity():
    F = get_field(5, 2)
    f = LinearizedPoly(F, (3, 14))
    rng = np.random.default_rng(5)
    for _ in range(40):
        a, b = int(rng.integers(F.order)), int(rng.integers(F.order))
        assert f(F.add(a, b)) == F.add(f(a), f(b))
        c = int(rng.integers(1, F.p))
        assert f(F.mul(c, a)) == F.mul(c, f(a))


# -- extension fields ---------------------------------------------------------

def test_extension_degree_one_is_identity():
    F = get_field(3, 2)
    ext = extension_field(F, 1)
    assert ext.field is F
    assert [ext.embed(a) for a in F.elements()] == list(F.elements())


def test_extension_embedding_homomorphism_tower():
    # GF(9) inside GF(6561) = GF(9^4)
    F = get_field(3, 2)
    ext = extension_field(F, 4)
    E = ext.field
    assert E.order == 6561
    assert ext.embed(0) == 0 and ext.embed(1) == 1
    rng = np.random.default_rng(17)
    for _ in range(50):
        a, b = int(rng.integers(9)), int(rng.integers(9))
        assert ext.embed(F.add(a, b)) == E.add(ext.embed(a), ext.embed(b))
        assert ext.embed(F.mul(a, b)) == E.mul(ext.embed(a), ext.embed(b))


@pytest.mark.parametrize("p,h,m", [(3, 2, 2), (3, 2, 3), (5, 2, 2), (2, 2, 3), (3, 2, 4)])
def test_extension_basis_lift_is_bijection(p, h, m):
    base = get_field(p, h)
    ext = extension_field(base, m)
    q = base.order
    assert ext.field.order == q ** m
    coords = np.array(
        [[(i // q ** j) % q for j in range(m)] for i in range(q ** m)], dtype=np.int64)
    lifted = ext.lift_vec(coords)
    assert sorted(lifted.tolist()) == list(range(q ** m))


# -- counting helpers ---------------------------------------------------------

def test_lucas_examples():
    assert lucas_binom(21, 3, 3) == 1 == math.comb(21, 3) % 3  # 1330 mod 3
    assert lucas_binom(4, 2, 2) == 0
    for n in range(0, 30, 7):
        assert lucas_binom(n, 0, 5) == 1


@pytest.mark.parametrize("p", [2, 3, 5])
def test_lucas_brute_force(p):
    for n in range(61):
        for k in range(61):
            assert lucas_binom(n, k, p) == math.comb(n, k) % p


def test_gaussian_binomial_values():
    assert gaussian_binomial(6, 4, 3) == 11011
    assert gaussian_binomial(4, 2, 9) == 7462
    assert gaussian_binomial(3, 2, 9) == 91
    assert gaussian_binomial(5, 0, 7) == 1
    assert gaussian_binomial(3, 4, 2) == 0


def test_field_json_roundtrip():
    F = get_field(5, 2)
    data = F.to_json()
    assert data == {"p": 5, "degree": 2, "modulus": list(F.modulus)}
    assert Field.from_json(data) == F


def test_params_validation():
    with pytest.raises(ValueError):
        Params(4, 1, 2)
    assert Params(3, 2, 2).q == 9
