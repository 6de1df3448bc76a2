"""How the combined prox prunes and reshapes a fixed input.

One vector u, every domain, two sparsity models.  With the counting
penalty the effective weight t*nu decides which coordinates survive;
with the hard sparsity cap the domain decides *which* k entries win,
not just the largest ones (the simplex keeps mass balance in view).
Every output is cross-checked against support enumeration.
"""

import numpy as np

from l0quad import (
    SparsityBall,
    Theta,
    ZeroNorm,
    prox_bruteforce,
    prox_theta_h,
)

U = np.array([1.3, -0.4, 0.05, 0.9, -1.1])


def check(theta, h, t):
    x = prox_theta_h(theta, h, U, t)
    ref = prox_bruteforce(theta, h, U, t)
    nnz = int(np.count_nonzero(x != 0.0))
    hv = h.nu * nnz if isinstance(h, ZeroNorm) else 0.0
    val = 0.5 * float(np.sum((x - U) ** 2)) + t * hv
    assert val - ref.value <= 1e-9
    return x


def main():
    print("u =", U)

    print("\ncounting penalty, growing weight (free domain):")
    for t in (0.01, 0.1, 0.5, 1.0):
        x = check(Theta.ZERO, ZeroNorm(1.0), t)
        print("  t*nu = %-5.2f survivors %s" % (t, sorted(map(int, np.nonzero(x)[0]))))

    print("\nhard cap kappa = 2 across domains:")
    h = SparsityBall(2)
    for theta in Theta:
        x = check(theta, h, 0.3)
        with np.printoptions(precision=3, suppress=True):
            print("  %-14s -> %s" % (theta.name, x))

    print("\nsimplex vs plain top-2 on nonnegative weights:")
    # the cap interacts with normalization: the simplex prox may keep a
    # smaller coordinate when it projects better after renormalizing
    x = check(Theta.SIMPLEX, h, 0.3)
    print("  kept %s out of top-2-by-magnitude %s"
          % (sorted(map(int, np.nonzero(x)[0])),
             sorted(map(int, np.argsort(-np.abs(U))[:2]))))


if __name__ == "__main__":
    main()
