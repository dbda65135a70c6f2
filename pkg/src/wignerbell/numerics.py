"""Small numerical primitives: erf, bisection, Hermitian eigenvalues."""
import math

import numpy as np

from .errors import InvalidArgument


def erf(x):
    """Error function. Delegates to the C library (``math.erf``)."""
    return math.erf(x)


def normal_cdf(x):
    return 0.5 * (1.0 + math.erf(x / math.sqrt(2.0)))


def bisect(f, lo, hi, xtol=1e-10, maxiter=200):
    """Root of ``f`` in ``[lo, hi]`` by bisection.

    Stops once the bracket is narrower than `xtol` and returns its midpoint.
    Raises :class:`InvalidArgument` if ``f(lo)`` and ``f(hi)`` share a sign.
    """
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise InvalidArgument(f"f does not change sign on [{lo}, {hi}]")
    for _ in range(maxiter):
        if hi - lo < xtol:
            break
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def jacobi_eigvalsh_real(a, tol=1e-14, max_sweeps=100):
    """Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.

    Sweeps until the off-diagonal Frobenius norm drops below
    ``tol * max(1, ||a||_F)``. Returns eigenvalues in ascending order.
    """
    a = np.array(a, dtype=float)
    n = a.shape[0]
    offdiag = ~np.eye(n, dtype=bool)
    limit = tol * max(1.0, float(np.linalg.norm(a)))
    for _ in range(max_sweeps):
        if float(np.linalg.norm(a[offdiag])) < limit:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                # rotation angle that zeroes a[p, q]
                tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, tau) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                ap = a[:, p].copy()
                aq = a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                rp = a[p, :].copy()
                rq = a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
    else:
        raise RuntimeError("Jacobi iteration did not converge")
    return np.sort(np.diag(a))


def eigvalsh(h, tol=1e-14):
    """Eigenvalues of a Hermitian matrix, ascending.

    The complex matrix ``A + iB`` is embedded as the real symmetric
    ``[[A, -B], [B, A]]``, whose spectrum is that of ``h`` with every
    eigenvalue doubled.
    """
    h = np.asarray(h)
    if not np.iscomplexobj(h):
        return jacobi_eigvalsh_real(h, tol)
    a, b = h.real, h.imag
    big = np.block([[a, -b], [b, a]])
    return jacobi_eigvalsh_real(big, tol)[::2]
