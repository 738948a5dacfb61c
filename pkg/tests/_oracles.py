"""Independent brute-force oracles used by the test suite.

These deliberately avoid the library's root-finding path: roots are located
by dense sign scanning plus plain bisection on the quartic's monomial form.
"""

import numpy as np


def dense_positive_roots(coeffs, samples=100_000, refine_tol=1e-12):
    """Positive real roots of a polynomial by dense sign scan + bisection.

    Samples are log-spaced on (0, R] with R the Cauchy bound, so small and
    large roots are resolved at the same relative resolution.
    """
    coeffs = np.asarray(coeffs, dtype=float)
    R = 1.0 + np.sum(np.abs(coeffs[1:])) / abs(coeffs[0])
    lo = abs(coeffs[-1]) / (abs(coeffs[-1]) + np.sum(np.abs(coeffs[:-1])))  # inverse Cauchy
    xs = np.geomspace(max(lo * 0.5, 1e-300), R, samples)
    vals = np.polyval(coeffs, xs)
    roots = []
    for i in np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]:
        a, b = xs[i], xs[i + 1]
        fa = vals[i]
        for _ in range(200):
            mid = 0.5 * (a + b)
            fm = np.polyval(coeffs, mid)
            if fm == 0.0 or (b - a) <= refine_tol * max(1.0, mid):
                break
            if fa * fm < 0.0:
                b = mid
            else:
                a, fa = mid, fm
        roots.append(0.5 * (a + b))
    exact_hits = xs[vals == 0.0]
    roots.extend(float(x) for x in exact_hits)
    return sorted(roots)
