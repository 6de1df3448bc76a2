"""Critical points of a quadratic on the unit sphere.

The stationarity condition Hz = (z'Hz) z makes every critical point a
unit eigenvector, and with repeated eigenvalues whole subspheres go
critical.  The script enumerates representatives for a matrix with a
repeated eigenvalue, verifies the eigen-residual, and shows that
random non-eigenvector directions sit at a strictly positive distance
from stationarity.
"""

import numpy as np

from l0quad import (
    SymMatrix,
    crit_points_general,
    dist_subdiff_sphere_quad,
    riemannian_grad_norm,
)


def main():
    rng = np.random.default_rng(5)
    # eigenvalues 3, 1, 1, -2: the middle pair merges into one family
    q, _ = np.linalg.qr(rng.standard_normal((4, 4)))
    h = SymMatrix(q @ np.diag([3.0, 1.0, 1.0, -2.0]) @ q.T)

    out = crit_points_general(h)
    print("families (eigenvalue, multiplicity):")
    for fam in out.families:
        print("  lambda = %+.4f  dim = %d" % (fam.eigenvalue, len(fam.indices)))

    print("\nrepresentatives:")
    for z in out.representatives:
        hz = h.entries @ z
        res = np.linalg.norm(hz - (z @ hz) * z)
        print("  value %+.4f  eigen-residual %.1e" % (z @ hz, res))

    worst = np.inf
    for _ in range(2000):
        z = rng.standard_normal(4)
        z /= np.linalg.norm(z)
        worst = min(worst, dist_subdiff_sphere_quad(h, z))
    print("\nsmallest distance over 2000 random unit vectors: %.3e" % worst)

    z = out.representatives[0]
    print("closed form vs projected gradient at a representative: %.1e vs %.1e"
          % (dist_subdiff_sphere_quad(h, z), riemannian_grad_norm(h, z)))


if __name__ == "__main__":
    main()
