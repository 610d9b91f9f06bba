"""Hot inner loops, each with a numba-compiled and a pure-numpy variant.

The active backend is chosen once at import time.  Set the environment
variable ``CYCLICDIFF_DISABLE_NUMBA=1`` to force the numpy path (numba is
also skipped automatically when it is not importable).  Both variants of
every kernel stay importable under ``<name>_numba`` / ``<name>_numpy`` so
tests and the benchmark can compare them directly.
"""

import math
import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

_DISABLE = os.environ.get("CYCLICDIFF_DISABLE_NUMBA", "").strip().lower()
USE_NUMBA = numba is not None and _DISABLE not in ("1", "true", "yes", "on")
BACKEND = "numba" if USE_NUMBA else "numpy"


def _jit(fn):
    if numba is None:  # pragma: no cover
        return fn
    return numba.njit(cache=True, nogil=True)(fn)


# ---------------------------------------------------------------------------
# repeated cyclic difference with rescaling
# ---------------------------------------------------------------------------

def _iterate_loops(x, steps, lo, hi):
    n, d = x.shape
    cur = x.copy()
    nxt = np.empty_like(cur)
    logscale = 0.0
    for s in range(steps):
        sq = 0.0
        for l in range(n):
            m = l + 1
            if m == n:
                m = 0
            for a in range(d):
                v = cur[m, a] - cur[l, a]
                nxt[l, a] = v
                sq += v * v
        cur, nxt = nxt, cur
        if sq == 0.0:
            return cur, logscale, s + 1, True
        norm = math.sqrt(sq)
        if norm < lo or norm > hi:
            inv = 1.0 / norm
            for l in range(n):
                for a in range(d):
                    cur[l, a] *= inv
            logscale += math.log(norm)
    return cur, logscale, steps, False


iterate_numba = _jit(_iterate_loops)


def iterate_numpy(x, steps, lo, hi):
    cur = np.array(x, dtype=np.float64, copy=True)
    logscale = 0.0
    for s in range(steps):
        cur = np.roll(cur, -1, axis=0) - cur
        norm = float(np.sqrt(np.sum(cur * cur)))
        if norm == 0.0:
            return cur, logscale, s + 1, True
        if norm < lo or norm > hi:
            cur /= norm
            logscale += math.log(norm)
    return cur, logscale, steps, False


def iterate(x, steps, lo=1e-6, hi=1e6):
    """Apply ``steps`` cyclic differences to the (n, d) array ``x``.

    Returns ``(values, logscale, steps_done, hit_zero)``; the true state is
    ``exp(logscale) * values``.  Iteration stops early if the state becomes
    exactly zero.
    """
    x = np.ascontiguousarray(x, dtype=np.float64)
    if USE_NUMBA:
        return iterate_numba(x, int(steps), float(lo), float(hi))
    return iterate_numpy(x, int(steps), float(lo), float(hi))


# ---------------------------------------------------------------------------
# direct O(n^2) DFT along axis 0
# ---------------------------------------------------------------------------

def twiddles(n, sign):
    """exp(sign * 2*pi*i*m/n) for m = 0..n-1, with exact values at quarter turns."""
    m = np.arange(n)
    return cospi_frac(2 * m, n) + 1j * sign * sinpi_frac(2 * m, n)


def sinpi_frac(num, den):
    """sin(pi * num / den) for integer ``num`` and ``den``, argument-reduced exactly."""
    num = np.mod(np.asarray(num, dtype=np.int64), 2 * den)
    neg = num >= den
    num = np.where(neg, num - den, num)
    num = np.where(2 * num > den, den - num, num)
    out = np.sin(np.pi * num / den)
    return np.where(neg, -out, out)


def cospi_frac(num, den):
    return sinpi_frac(2 * np.asarray(num, dtype=np.int64) + den, 2 * den)


def _dft_loops(x, w):
    n, m = x.shape
    out = np.zeros((n, m), dtype=np.complex128)
    scale = 1.0 / math.sqrt(n)
    for k in range(n):
        for j in range(n):
            tw = w[(j * k) % n]
            for a in range(m):
                out[k, a] += x[j, a] * tw
        for a in range(m):
            out[k, a] *= scale
    return out


dft_numba = _jit(_dft_loops)


def dft_numpy(x, w):
    n = x.shape[0]
    idx = np.mod(np.outer(np.arange(n), np.arange(n)), n)
    return (w[idx] @ x) / math.sqrt(n)


def dft_direct(x, sign=-1):
    """Unitary DFT of each column of the complex (n, m) array ``x``.

    ``sign=-1`` is the forward transform, ``sign=+1`` the inverse.
    """
    x = np.ascontiguousarray(x, dtype=np.complex128)
    w = twiddles(x.shape[0], sign)
    if USE_NUMBA:
        return dft_numba(x, w)
    return dft_numpy(x, w)


# ---------------------------------------------------------------------------
# iterative radix-2 FFT (power-of-two n only)
# ---------------------------------------------------------------------------

def _bit_reverse(n):
    bits = n.bit_length() - 1
    rev = np.zeros(n, dtype=np.int64)
    for i in range(n):
        r = 0
        v = i
        for _ in range(bits):
            r = (r << 1) | (v & 1)
            v >>= 1
        rev[i] = r
    return rev


def _fft2_loops(x, w, rev):
    n, m = x.shape
    out = np.empty((n, m), dtype=np.complex128)
    for i in range(n):
        for a in range(m):
            out[i, a] = x[rev[i], a]
    size = 2
    while size <= n:
        half = size // 2
        stride = n // size
        for start in range(0, n, size):
            for j in range(half):
                tw = w[j * stride]
                for a in range(m):
                    u = out[start + j, a]
                    v = out[start + j + half, a] * tw
                    out[start + j, a] = u + v
                    out[start + j + half, a] = u - v
        size *= 2
    scale = 1.0 / math.sqrt(n)
    for i in range(n):
        for a in range(m):
            out[i, a] *= scale
    return out


fft2_numba = _jit(_fft2_loops)


def fft2_numpy(x, w, rev):
    n = x.shape[0]
    out = x[rev].copy()
    size = 2
    while size <= n:
        half = size // 2
        tw = w[np.arange(half) * (n // size)][None, :, None]
        blocks = out.reshape(n // size, size, -1)
        u = blocks[:, :half, :].copy()
        v = blocks[:, half:, :] * tw
        blocks[:, :half, :] = u + v
        blocks[:, half:, :] = u - v
        size *= 2
    return out / math.sqrt(n)


def fft_radix2(x, sign=-1):
    """Unitary radix-2 FFT of each column; ``n`` must be a power of two."""
    x = np.ascontiguousarray(x, dtype=np.complex128)
    n = x.shape[0]
    if n < 1 or n & (n - 1):
        raise ValueError(f"radix-2 FFT needs a power-of-two length, got {n}")
    w = twiddles(n, sign)
    rev = _bit_reverse(n)
    if USE_NUMBA:
        return fft2_numba(x, w, rev)
    return fft2_numpy(x, w, rev)


# ---------------------------------------------------------------------------
# binomial (higher-order difference) evaluation
# ---------------------------------------------------------------------------

def signed_binomials(t):
    """(-1)**(t+i) * C(t, i) for i = 0..t as float64 (exact for t <= 56)."""
    return np.array([(-1) ** (t + i) * math.comb(t, i) for i in range(t + 1)],
                    dtype=np.float64)


def _binomial_loops(x, c):
    n, d = x.shape
    out = np.zeros((n, d))
    for k in range(n):
        for i in range(c.shape[0]):
            src = (k + i) % n
            for a in range(d):
                out[k, a] += c[i] * x[src, a]
    return out


binomial_numba = _jit(_binomial_loops)


def binomial_numpy(x, c):
    n = x.shape[0]
    idx = np.mod(np.arange(n)[:, None] + np.arange(c.shape[0])[None, :], n)
    return np.einsum("i,kia->ka", c, x[idx])


def binomial(x, t):
    x = np.ascontiguousarray(x, dtype=np.float64)
    c = signed_binomials(int(t))
    if USE_NUMBA:
        return binomial_numba(x, c)
    return binomial_numpy(x, c)
