"""Inner loops of the infinite products.

Each kernel exists twice: a numba ``@njit`` version and a pure-numpy
version with identical truncation rules.  ``GGL_DISABLE_NUMBA=1`` (or numba
being unavailable) selects the numpy path at import time.

Every kernel returns the sum of complex logarithms of the kept factors, a
rigorous bound on the modulus of the omitted part of that sum, the number
of factors used, and diagnostics for zero/pole proximity.
"""

import math
import os

import numpy as np

TWO_PI = 2.0 * math.pi


def _flag(name):
    return os.environ.get(name, "").strip().lower() in ("1", "true", "yes", "on")


try:  # pragma: no cover - exercised by whichever path is active
    if _flag("GGL_DISABLE_NUMBA"):
        raise ImportError
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

BACKEND = "numba" if HAVE_NUMBA else "numpy"


# --------------------------------------------------------------------------
# theta_0(z, tau) = prod_j (1 - e(( j+1) tau - z)) (1 - e(j tau + z)),  e(t) = exp(2 pi i t)


def theta_logsum_py(z, tau, tol, max_terms):
    qabs = math.exp(-TWO_PI * tau.imag)
    # |e((j+1)tau - z)| and |e(j tau + z)| decrease geometrically in j.
    za, zb = -TWO_PI * (tau.imag - z.imag), -TWO_PI * z.imag
    need = max(
        0.0,
        (math.log(1.0 / tol) + za) / (TWO_PI * tau.imag),
        (math.log(1.0 / tol) + zb) / (TWO_PI * tau.imag),
    )
    n = int(math.floor(need)) + 1
    if n > max_terms:
        return 0j, math.inf, n, 0.0, 0.0
    j = np.arange(n)
    ta = np.exp(2j * math.pi * ((j + 1) * tau - z))
    tb = np.exp(2j * math.pi * (j * tau + z))
    fa, fb = 1.0 - ta, 1.0 - tb
    minabs = float(min(np.abs(fa).min(), np.abs(fb).min()))
    la, lb = np.log(fa), np.log(fb)
    s = complex(la.sum() + lb.sum())
    mag = float(np.abs(la).sum() + np.abs(lb).sum())
    tail = (abs(ta[-1]) + abs(tb[-1])) * qabs / (1.0 - qabs)
    return s, tail / (1.0 - tol), 2 * n, minabs, mag


# --------------------------------------------------------------------------
# Gamma(z, tau, sigma) = prod_{j,k} (1 - e((j+1)tau + (k+1)sigma - z)) / (1 - e(j tau + k sigma + z))


def gamma_logsum_py(z, tau, sigma, tol, max_terms):
    qt = math.exp(-TWO_PI * tau.imag)
    qs = math.exp(-TWO_PI * sigma.imag)
    logtol = math.log(tol)
    # Log-moduli of the two families at (j, k):
    #   num: -2pi((j+1)t + (k+1)s - zi),  den: -2pi(j t + k s + zi)
    s_tot = 0j
    mag = 0.0
    tail = 0.0
    count = 0
    minden = math.inf
    jmin = kmin = -1
    j = 0
    while True:
        ln0 = -TWO_PI * ((j + 1) * tau.imag + sigma.imag - z.imag)
        ld0 = -TWO_PI * (j * tau.imag + z.imag)
        if ln0 < logtol and ld0 < logtol:
            tail += (math.exp(ln0) + math.exp(ld0)) / ((1.0 - qt) * (1.0 - qs))
            break
        kn = max(0.0, (ln0 - logtol) / (TWO_PI * sigma.imag))
        kd = max(0.0, (ld0 - logtol) / (TWO_PI * sigma.imag))
        nk = int(math.floor(max(kn, kd))) + 1
        count += 2 * nk
        if count > max_terms:
            return 0j, math.inf, count, 0.0, -1, -1, 0.0
        k = np.arange(nk)
        tn = np.exp(2j * math.pi * ((j + 1) * tau + (k + 1) * sigma - z))
        td = np.exp(2j * math.pi * (j * tau + k * sigma + z))
        fd = 1.0 - td
        ad = np.abs(fd)
        i = int(np.argmin(ad))
        if ad[i] < minden:
            minden, jmin, kmin = float(ad[i]), j, i
        ln_, ld_ = np.log(1.0 - tn), np.log(fd)
        s_tot += complex(ln_.sum() - ld_.sum())
        mag += float(np.abs(ln_).sum() + np.abs(ld_).sum())
        tail += (abs(tn[-1]) + abs(td[-1])) * qs / (1.0 - qs)
        j += 1
    return s_tot, tail / (1.0 - tol), count, minden, jmin, kmin, mag


# --------------------------------------------------------------------------
# Cone products over the image lattice {(h11 k1, h21 k1 + h22 k2)}:
#   m > 0, n <= 0:  +log(1 - exp(-2 pi i (k1 u1 + k2 u2 - wg)))
#   m <= 0, n > 0:  -log(1 - exp(+2 pi i (k1 u1 + k2 u2 - wg)))


def _cone_tail(r, rho, c):
    # sum_{r' > r} (4 r' + 2) c rho^r'
    a = rho ** (r + 1)
    s1 = a * ((r + 1) - r * rho) / (1.0 - rho) ** 2
    s0 = a / (1.0 - rho)
    return c * (4.0 * s1 + 2.0 * s0)


def _shell_points(r):
    if r == 0:
        return np.zeros(1, np.int64), np.zeros(1, np.int64)
    side = np.arange(-r, r + 1)
    inner = np.arange(-r + 1, r)
    m = np.concatenate([np.full(2 * r + 1, -r), inner, inner, np.full(2 * r + 1, r)])
    n = np.concatenate([side, np.full(inner.size, -r), np.full(inner.size, r), side])
    order = np.lexsort((n, m))
    return m[order], n[order]


def cone_logsum_py(u1, u2, wg, h11, h21, h22, rho, cbound, tol, max_terms):
    s_tot = 0j
    mag = 0.0
    count = 0
    minden = math.inf
    r = 1
    while True:
        m, n = _shell_points(r)
        plus = (m > 0) & (n <= 0)
        minus = (m <= 0) & (n > 0)
        keep = (plus | minus) & (m % h11 == 0)
        k1 = m // h11
        keep &= (n - h21 * k1) % h22 == 0
        m, n, k1, plus = m[keep], n[keep], k1[keep], plus[keep]
        k2 = (n - h21 * k1) // h22
        ph = k1 * u1 + k2 * u2 - wg
        t = np.where(plus, np.exp(-2j * math.pi * ph), np.exp(2j * math.pi * ph))
        f = 1.0 - t
        lg = np.log(f)
        s_tot += complex(np.where(plus, lg, -lg).sum())
        mag += float(np.abs(lg).sum())
        if (~plus).any():
            minden = min(minden, float(np.abs(f[~plus]).min()))
        count += t.size
        shell_max = float(np.abs(t).max()) if t.size else 0.0
        tail = _cone_tail(r, rho, cbound)
        if shell_max < tol and tail < tol:
            return s_tot, tail / (1.0 - tol), count, minden, r, mag
        if count > max_terms:
            return s_tot, math.inf, count, minden, r, mag
        r += 1


if HAVE_NUMBA:

    @njit(cache=True, nogil=True)
    def theta_logsum_nb(z, tau, tol, max_terms):
        qabs = math.exp(-TWO_PI * tau.imag)
        za = -TWO_PI * (tau.imag - z.imag)
        zb = -TWO_PI * z.imag
        need = max(
            0.0,
            (math.log(1.0 / tol) + za) / (TWO_PI * tau.imag),
            (math.log(1.0 / tol) + zb) / (TWO_PI * tau.imag),
        )
        n = int(math.floor(need)) + 1
        if n > max_terms:
            return 0j, math.inf, n, 0.0, 0.0
        s = 0j
        mag = 0.0
        minabs = math.inf
        ta = 0j
        tb = 0j
        for j in range(n):
            ta = np.exp(2j * math.pi * ((j + 1) * tau - z))
            tb = np.exp(2j * math.pi * (j * tau + z))
            fa = 1.0 - ta
            fb = 1.0 - tb
            minabs = min(minabs, abs(fa), abs(fb))
            la = np.log(fa)
            lb = np.log(fb)
            s += la + lb
            mag += abs(la) + abs(lb)
        tail = (abs(ta) + abs(tb)) * qabs / (1.0 - qabs)
        return s, tail / (1.0 - tol), 2 * n, minabs, mag

    @njit(cache=True, nogil=True)
    def gamma_logsum_nb(z, tau, sigma, tol, max_terms):
        qt = math.exp(-TWO_PI * tau.imag)
        qs = math.exp(-TWO_PI * sigma.imag)
        logtol = math.log(tol)
        s_tot = 0j
        mag = 0.0
        tail = 0.0
        count = 0
        minden = math.inf
        jmin = -1
        kmin = -1
        j = 0
        while True:
            ln0 = -TWO_PI * ((j + 1) * tau.imag + sigma.imag - z.imag)
            ld0 = -TWO_PI * (j * tau.imag + z.imag)
            if ln0 < logtol and ld0 < logtol:
                tail += (math.exp(ln0) + math.exp(ld0)) / ((1.0 - qt) * (1.0 - qs))
                break
            kn = max(0.0, (ln0 - logtol) / (TWO_PI * sigma.imag))
            kd = max(0.0, (ld0 - logtol) / (TWO_PI * sigma.imag))
            nk = int(math.floor(max(kn, kd))) + 1
            count += 2 * nk
            if count > max_terms:
                return 0j, math.inf, count, 0.0, -1, -1, 0.0
            tn = 0j
            td = 0j
            for k in range(nk):
                tn = np.exp(2j * math.pi * ((j + 1) * tau + (k + 1) * sigma - z))
                td = np.exp(2j * math.pi * (j * tau + k * sigma + z))
                fd = 1.0 - td
                ad = abs(fd)
                if ad < minden:
                    minden = ad
                    jmin = j
                    kmin = k
                ln_ = np.log(1.0 - tn)
                ld_ = np.log(fd)
                s_tot += ln_ - ld_
                mag += abs(ln_) + abs(ld_)
            tail += (abs(tn) + abs(td)) * qs / (1.0 - qs)
            j += 1
        return s_tot, tail / (1.0 - tol), count, minden, jmin, kmin, mag

    @njit(cache=True, nogil=True)
    def cone_logsum_nb(u1, u2, wg, h11, h21, h22, rho, cbound, tol, max_terms):
        s_tot = 0j
        mag = 0.0
        count = 0
        minden = math.inf
        r = 1
        while True:
            shell_max = 0.0
            for m in range(-r, r + 1):
                step = 1 if (m == -r or m == r) else 2 * r
                n = -r
                while n <= r:
                    plus = m > 0 and n <= 0
                    minus = m <= 0 and n > 0
                    if (plus or minus) and m % h11 == 0:
                        k1 = m // h11
                        if (n - h21 * k1) % h22 == 0:
                            k2 = (n - h21 * k1) // h22
                            ph = k1 * u1 + k2 * u2 - wg
                            if plus:
                                t = np.exp(-2j * math.pi * ph)
                            else:
                                t = np.exp(2j * math.pi * ph)
                            f = 1.0 - t
                            lg = np.log(f)
                            if plus:
                                s_tot += lg
                            else:
                                s_tot -= lg
                                minden = min(minden, abs(f))
                            mag += abs(lg)
                            count += 1
                            shell_max = max(shell_max, abs(t))
                    n += step
            a = rho ** (r + 1)
            tail = cbound * (4.0 * a * ((r + 1) - r * rho) / (1.0 - rho) ** 2 + 2.0 * a / (1.0 - rho))
            if shell_max < tol and tail < tol:
                return s_tot, tail / (1.0 - tol), count, minden, r, mag
            if count > max_terms:
                return s_tot, math.inf, count, minden, r, mag
            r += 1

    theta_logsum = theta_logsum_nb
    gamma_logsum = gamma_logsum_nb
    cone_logsum = cone_logsum_nb
else:
    theta_logsum = theta_logsum_py
    gamma_logsum = gamma_logsum_py
    cone_logsum = cone_logsum_py
