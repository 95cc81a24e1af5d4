"""Projective and affine geometries: points, blocks, incidence, p-rank.

The affine space sits inside the projective one as the complement of the
hyperplane X_m = 0, so affine characteristic vectors zero-pad into
projective ones without reindexing.
"""

from modpgeom.codes import incidence_code
from modpgeom.geometry import affine_geometry, projective_geometry

pg = projective_geometry(3, 2, 2)   # PG(2,9)
ag = affine_geometry(3, 2, 2)       # AG(2,9)
print(pg, "has", pg.v, "points and", len(pg.blocks(1)), "lines of size",
      pg.blocks(1).point_matrix.shape[1])
print(ag, "has", ag.v, "points and", len(ag.blocks(1)), "lines of size",
      ag.blocks(1).point_matrix.shape[1])

# Points are normalized homogeneous tuples in ascending lexicographic order.
print("first points of PG(2,9):", pg.points[:3])
print("affine (0,0) maps to projective representative", ag.points[0])

# The line through two points is canonical (RREF basis), so argument order
# does not matter.
line = pg.line_through(0, 1)
print("line through points 0, 1:", line.basis, "->", len(line.points), "points")

# Every codimension-2 subspace lies on exactly q+1 hyperplanes, and the
# pencil covers the whole space.
pencil = pg.hyperplanes_through(pg.subspace([pg.points[0]]))
print("pencil through a point:", len(pencil), "lines; union covers",
      len(set().union(*[set(h.points) for h in pencil])), "points")

# Incidence matrices over F_p and their p-ranks.  For PG(2,9) over F_3 the
# rank is 37, so the dual code has dimension 91 - 37 = 54.
for geom in (projective_geometry(2, 1, 2), projective_geometry(3, 1, 2), pg):
    code = incidence_code(geom)
    print(f"{geom}: incidence {code.matrix.shape}, p-rank {code.rank}, "
          f"dual dimension {code.dual_dim}")

# PG(3,9) enumerates 7462 lines through the same machinery.
pg3 = projective_geometry(3, 2, 3)
print(pg3, "has", len(pg3.blocks(1)), "lines")
