"""Exact arithmetic in small prime-power Galois fields.

Elements of GF(p**d) are integers in ``range(p**d)``: the base-p digits of
the integer are the coefficients of the residue polynomial, constant
coefficient least significant.  With this encoding 0 and 1 are the additive
and multiplicative identities, the prime subfield occupies ``range(p)``,
and the enumeration order 0, 1, 2, ... is the canonical element order used
everywhere downstream.

Multiplication runs off discrete-log tables built at construction time,
addition off a digit table, so both scalar and whole-array operations are
cheap.  Fields are immutable once built.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

# Fields above this size are out of scope for a table-driven desk tool.
MAX_FIELD_ORDER = 1 << 24


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in range(2, int(math.isqrt(n)) + 1):
        if n % d == 0:
            return False
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


@dataclass(frozen=True)
class Params:
    """Ambient parameters: prime p, extension degree h, dimension m."""

    p: int
    h: int
    m: int

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise ValueError(f"p = {self.p} is not prime")
        if self.h < 1:
            raise ValueError("extension degree h must be >= 1")
        if self.m < 1:
            raise ValueError("dimension m must be >= 1")

    @property
    def q(self) -> int:
        return self.p ** self.h


# ---------------------------------------------------------------------------
# dense polynomial helpers over F_p (coefficient lists, constant term first)
# ---------------------------------------------------------------------------

def _ptrim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _pmul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _ptrim(out)


def _pmod(a: Sequence[int], f: Sequence[int], p: int) -> list[int]:
    # f monic
    r = list(a)
    df = len(f) - 1
    while len(r) - 1 >= df and r:
        lead = r[-1]
        if lead:
            shift = len(r) - 1 - df
            for j, fj in enumerate(f):
                r[shift + j] = (r[shift + j] - lead * fj) % p
        r.pop()
    return _ptrim(r)


def _pgcd(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a, b = list(a), list(b)
    while b:
        inv = pow(b[-1], -1, p)
        bm = [(c * inv) % p for c in b]
        a, b = b, _pmod(a, bm, p)
    return a


def _ppowmod(base: Sequence[int], e: int, f: Sequence[int], p: int) -> list[int]:
    result = [1]
    acc = _pmod(base, f, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, acc, p), f, p)
        acc = _pmod(_pmul(acc, acc, p), f, p)
        e >>= 1
    return result


def is_irreducible(coeffs: Sequence[int], p: int) -> bool:
    """Whether a monic polynomial over F_p is irreducible.

    Checks gcd(f, x^(p^k) - x) for k up to deg(f)/2; a proper factor of
    degree k would show up in the k-th gcd.
    """
    d = len(coeffs) - 1
    if d < 1 or coeffs[-1] != 1:
        raise ValueError("modulus must be monic of degree >= 1")
    if d == 1:
        return True
    r = [0, 1]  # x
    for _ in range(d // 2):
        r = _ppowmod(r, p, coeffs, p)  # r <- r^p mod f
        rx = list(r) + [0] * max(0, 2 - len(r))
        rx[1] = (rx[1] - 1) % p  # r - x
        g = _pgcd(list(coeffs), _ptrim(rx), p)
        if len(g) - 1 > 0:
            return False
    return True


def default_modulus(p: int, degree: int) -> tuple[int, ...]:
    """Lowest monic irreducible of the given degree over F_p.

    "Lowest" means smallest integer encoding of the non-leading
    coefficients (constant coefficient least significant), which makes the
    choice reproducible across runs.
    """
    if degree == 1:
        return (0, 1)
    for n in range(p ** degree):
        low, t = [], n
        for _ in range(degree):
            low.append(t % p)
            t //= p
        cand = low + [1]
        if is_irreducible(cand, p):
            return tuple(cand)
    raise RuntimeError("no irreducible polynomial found")  # unreachable


class Field:
    """GF(p**degree) with integer-encoded elements and table arithmetic."""

    def __init__(self, p: int, degree: int, modulus: Sequence[int] | None = None):
        if not is_prime(p):
            raise ValueError(f"p = {p} is not prime")
        if degree < 1:
            raise ValueError("degree must be >= 1")
        order = p ** degree
        if order > MAX_FIELD_ORDER:
            raise ValueError(f"field order {order} exceeds supported cap {MAX_FIELD_ORDER}")
        if modulus is None:
            modulus = default_modulus(p, degree)
        else:
            modulus = tuple(int(c) % p for c in modulus)
            if len(modulus) != degree + 1 or modulus[-1] != 1:
                raise ValueError("modulus must be monic of matching degree")
            if not is_irreducible(modulus, p):
                raise ValueError(f"modulus {list(modulus)} is reducible over F_{p}")
        self.p = p
        self.degree = degree
        self.order = order
        self.modulus = tuple(modulus)
        self.zero = 0
        self.one = 1

        self._pows = p ** np.arange(degree, dtype=np.int64)
        digits = np.empty((order, degree), dtype=np.int64)
        t = np.arange(order, dtype=np.int64)
        for j in range(degree):
            digits[:, j] = t % p
            t //= p
        self._dig = digits

        self._build_log_tables()

    # -- construction internals -------------------------------------------

    def _mul_poly(self, a: int, b: int) -> int:
        ca = [int(x) for x in self._dig[a]]
        cb = [int(x) for x in self._dig[b]]
        r = _pmod(_pmul(ca, cb, self.p), list(self.modulus), self.p)
        return sum(c * self.p ** i for i, c in enumerate(r))

    def _pow_poly(self, a: int, e: int) -> int:
        result, acc = 1, a
        while e:
            if e & 1:
                result = self._mul_poly(result, acc)
            acc = self._mul_poly(acc, acc)
            e >>= 1
        return result

    def _build_log_tables(self) -> None:
        n1 = self.order - 1
        if n1 == 1:
            gen = 1
        else:
            gen = None
            factors = _prime_factors(n1)
            for cand in range(2, self.order):
                if all(self._pow_poly(cand, n1 // f) != 1 for f in factors):
                    gen = cand
                    break
            if gen is None:  # pragma: no cover - cannot happen for a field
                raise RuntimeError("no multiplicative generator found")
        self.generator = gen
        exp = np.empty(2 * n1, dtype=np.int64)
        log = np.zeros(self.order, dtype=np.int64)
        val = 1
        for k in range(n1):
            exp[k] = val
            log[val] = k
            val = self._mul_poly(val, gen)
        if val != 1:
            raise RuntimeError("generator order mismatch")  # pragma: no cover
        exp[n1:] = exp[:n1]
        self._exp = exp
        self._log = log

    # -- scalar arithmetic --------------------------------------------------

    def element(self, coeffs: Iterable[int]) -> int:
        cs = list(coeffs)
        if len(cs) > self.degree:
            raise ValueError("too many coefficients")
        if any(not 0 <= c < self.p for c in cs):
            raise ValueError("coefficients must lie in range(p)")
        return sum(c * self.p ** i for i, c in enumerate(cs))

    def coeffs(self, a: int) -> tuple[int, ...]:
        return tuple(int(x) for x in self._dig[a])

    def elements(self) -> range:
        return range(self.order)

    def add(self, a: int, b: int) -> int:
        return int(((self._dig[a] + self._dig[b]) % self.p) @ self._pows)

    def neg(self, a: int) -> int:
        return int(((self.p - self._dig[a]) % self.p) @ self._pows)

    def sub(self, a: int, b: int) -> int:
        return int(((self._dig[a] - self._dig[b]) % self.p) @ self._pows)

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self._exp[self._log[a] + self._log[b]])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        n1 = self.order - 1
        return int(self._exp[(n1 - self._log[a]) % n1])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e == 0:
                return 1
            if e < 0:
                raise ZeroDivisionError("zero to a negative power")
            return 0
        n1 = self.order - 1
        return int(self._exp[(self._log[a] * (e % n1)) % n1])

    def frobenius(self, a: int, i: int = 1) -> int:
        """a raised to the p^i power (i taken modulo the degree)."""
        return self.pow(a, self.p ** (i % self.degree))

    # -- vectorised arithmetic on integer arrays ----------------------------

    def add_vec(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        return ((self._dig[a] + self._dig[b]) % self.p) @ self._pows

    def sub_vec(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        return ((self._dig[a] - self._dig[b]) % self.p) @ self._pows

    def neg_vec(self, a):
        a = np.asarray(a, dtype=np.int64)
        return ((self.p - self._dig[a]) % self.p) @ self._pows

    def mul_vec(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        prod = self._exp[self._log[a] + self._log[b]]
        return np.where((a == 0) | (b == 0), 0, prod)

    def inv_vec(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("zero has no inverse")
        n1 = self.order - 1
        return self._exp[(n1 - self._log[a]) % n1]

    def pow_vec(self, a, e: int):
        a = np.asarray(a, dtype=np.int64)
        n1 = self.order - 1
        powed = self._exp[(self._log[a] * (e % n1)) % n1]
        return np.where(a == 0, 1 if e == 0 else 0, powed)

    def frobenius_vec(self, a, i: int = 1):
        return self.pow_vec(a, self.p ** (i % self.degree))

    # -- misc ---------------------------------------------------------------

    def to_json(self) -> dict:
        return {"p": self.p, "degree": self.degree, "modulus": list(self.modulus)}

    @classmethod
    def from_json(cls, data: dict) -> "Field":
        return cls(int(data["p"]), int(data["degree"]), data["modulus"])

    def __eq__(self, other) -> bool:
        return (isinstance(other, Field)
                and (self.p, self.degree, self.modulus) == (other.p, other.degree, other.modulus))

    def __hash__(self) -> int:
        return hash((self.p, self.degree, self.modulus))

    def __repr__(self) -> str:
        return f"GF({self.order})"


_FIELD_CACHE: dict[tuple, Field] = {}


def get_field(p: int, degree: int, modulus: Sequence[int] | None = None) -> Field:
    """Cached Field constructor; the default modulus is deterministic."""
    key = (p, degree, tuple(modulus) if modulus is not None else None)
    if key not in _FIELD_CACHE:
        _FIELD_CACHE[key] = Field(p, degree, modulus)
    return _FIELD_CACHE[key]


# ---------------------------------------------------------------------------
# linearized polynomials
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LinearizedPoly:
    """Map x -> sum a_i x^(p^i) on a field of characteristic p.

    Such maps are additive and F_p-homogeneous, so they are exactly the
    F_p-linear endomorphisms of the field.
    """

    field: Field
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.coeffs) > self.field.degree:
            raise ValueError("at most one coefficient per Frobenius power")
        if any(not 0 <= c < self.field.order for c in self.coeffs):
            raise ValueError("coefficients must be field elements")

    @classmethod
    def monomial(cls, field: Field, i: int, coeff: int = 1) -> "LinearizedPoly":
        cs = [0] * (i + 1)
        cs[i] = coeff
        return cls(field, tuple(cs))

    @classmethod
    def identity(cls, field: Field) -> "LinearizedPoly":
        return cls(field, (1,))

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __call__(self, x: int) -> int:
        F = self.field
        acc = 0
        for i, a in enumerate(self.coeffs):
            if a:
                acc = F.add(acc, F.mul(a, F.frobenius(x, i)))
        return acc

    def eval_vec(self, xs):
        F = self.field
        xs = np.asarray(xs, dtype=np.int64)
        acc = np.zeros_like(xs)
        for i, a in enumerate(self.coeffs):
            if a:
                acc = F.add_vec(acc, F.mul_vec(a, F.frobenius_vec(xs, i)))
        return acc

    def __repr__(self) -> str:
        terms = [f"{a}*x^{self.field.p ** i}" for i, a in enumerate(self.coeffs) if a]
        return " + ".join(terms) if terms else "0"


# ---------------------------------------------------------------------------
# extension fields with an explicit embedding and base-field basis
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FieldExtension:
    """GF(q^m) over GF(q) with an explicit embedding and GF(q)-basis.

    The extension is realised as GF(p^(h*m)) with its own default modulus;
    the base field embeds through the smallest root of its modulus, and the
    basis is 1, g, ..., g^(m-1) for g the residue class of the variable,
    which generates the extension over any subfield.
    """

    base: Field
    field: Field
    m: int
    embed_table: np.ndarray
    basis: tuple[int, ...]

    def embed(self, a: int) -> int:
        return int(self.embed_table[a])

    def lift_coords(self, coords: Sequence[int]) -> int:
        """Map a length-m tuple over the base field to an extension element."""
        F = self.field
        acc = 0
        for a, e in zip(coords, self.basis):
            acc = F.add(acc, F.mul(self.embed(a), e))
        return acc

    def lift_vec(self, coord_matrix) -> np.ndarray:
        """Vectorised lift of an (N, m) coordinate matrix."""
        F = self.field
        cm = np.asarray(coord_matrix, dtype=np.int64)
        acc = np.zeros(cm.shape[0], dtype=np.int64)
        for i, e in enumerate(self.basis):
            acc = F.add_vec(acc, F.mul_vec(self.embed_table[cm[:, i]], e))
        return acc


def extension_field(base: Field, m: int, modulus: Sequence[int] | None = None) -> FieldExtension:
    """Build GF(q^m) over GF(q) = base, with embedding and basis."""
    if m < 1:
        raise ValueError("extension degree must be >= 1")
    if m == 1:
        ident = np.arange(base.order, dtype=np.int64)
        return FieldExtension(base, base, 1, ident, (1,))
    ext = get_field(base.p, base.degree * m, modulus)
    # smallest root of the base modulus inside the extension
    xs = np.arange(ext.order, dtype=np.int64)
    acc = np.full(ext.order, base.modulus[-1] % base.p, dtype=np.int64)
    for c in reversed(base.modulus[:-1]):
        acc = ext.add_vec(ext.mul_vec(acc, xs), np.full(ext.order, c, dtype=np.int64))
    roots = xs[acc == 0]
    if roots.size == 0:  # pragma: no cover - the subfield always exists
        raise RuntimeError("base modulus has no root in the extension")
    beta = int(roots.min())
    embed = np.zeros(base.order, dtype=np.int64)
    for i in range(base.degree):
        bi = ext.pow(beta, i)
        embed = ext.add_vec(embed, ext.mul_vec(base._dig[:, i], bi))
    gamma = base.p  # residue class of the variable
    basis = tuple(ext.pow(gamma, i) for i in range(m))
    return FieldExtension(base, ext, m, embed, basis)


# ---------------------------------------------------------------------------
# counting helpers
# ---------------------------------------------------------------------------

def lucas_binom(n: int, k: int, p: int) -> int:
    """binomial(n, k) mod p via digit-wise binomials in base p."""
    if n < 0 or k < 0:
        raise ValueError("n and k must be non-negative")
    if not is_prime(p):
        raise ValueError("p must be prime")
    out = 1
    while n or k:
        dn, dk = n % p, k % p
        if dk > dn:
            return 0
        out = (out * math.comb(dn, dk)) % p
        n //= p
        k //= p
    return out


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of an n-dimensional space over F_q."""
    if k < 0 or k > n:
        return 0
    num = math.prod(q ** (n - i) - 1 for i in range(k))
    den = math.prod(q ** (i + 1) - 1 for i in range(k))
    return num // den
