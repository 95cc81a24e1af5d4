"""Galois field arithmetic: construction, Frobenius maps, extensions.

Elements of GF(p^d) are plain integers; the base-p digits of an element are
its coefficient vector over F_p, constant coefficient least significant.
"""

from modpgeom import Field, LinearizedPoly, extension_field, get_field, lucas_binom

# GF(9) gets the lowest-encoding irreducible modulus by default: x^2 + 1.
F9 = get_field(3, 2)
print("GF(9) modulus coefficients (constant first):", F9.modulus)

# The element 1 + x is the integer 4 = 1 + 1*3.
a = F9.element((1, 1))
print("(1+x)^2 ->", F9.coeffs(F9.mul(a, a)), "  # 2x, since x^2 = -1")

# Every nonzero element has an inverse.
print("inverses OK:", all(F9.mul(x, F9.inv(x)) == 1 for x in range(1, 9)))

# Frobenius x -> x^p generates the field automorphisms and fixes exactly F_p.
print("frobenius(1+x) =", F9.coeffs(F9.frobenius(a)), " (equals (1+x)^3)")
print("fixed elements:", [x for x in F9.elements() if F9.frobenius(x) == x])

# A linearized polynomial sum a_i x^(p^i) is an F_p-linear map of the field.
f = LinearizedPoly.monomial(F9, 1)  # x^3
b = F9.element((2, 1))
print("f additive:", f(F9.add(a, b)) == F9.add(f(a), f(b)))

# A user-supplied modulus is verified; reducible ones are rejected.
try:
    Field(3, 2, (2, 0, 1))  # x^2 + 2 has the root 1 mod 3
except ValueError as exc:
    print("rejected:", exc)

# Extensions come with an explicit embedding and a base-field basis, so
# coordinate tuples over GF(q) biject with elements of GF(q^m).
ext = extension_field(F9, 2)
print("extension:", ext.field, " embed(1) =", ext.embed(1))
print("lift of (1+x, 2):", ext.lift_coords((a, 2)))

# Binomial residues mod p via base-p digits.
print("binomial(21,3) mod 3 =", lucas_binom(21, 3, 3), " (1330 = 3*443 + 1)")
