"""Monte Carlo estimate of the probability that XY has only real eigenvalues.

Each trial draws X and Y with independent standard normal entries, forms
M = XY, reduces it to Hessenberg form with Householder reflections and runs
Francis double-shift QR until the matrix is quasi-triangular.  The 1x1
diagonal blocks are real eigenvalues; a 2x2 block holds a real pair when its
discriminant t^2 - 4d is non-negative.

Random numbers come from a counter-based SplitMix64 stream keyed by
(seed, trial index), so a run is reproducible bit for bit no matter how the
trials are split across worker threads.  The compiled kernels release the
GIL, which is what makes the thread pool useful.
"""

from __future__ import annotations

import csv
import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Optional, TextIO

import numpy as np
from numba import njit

from gpiq.errors import ConvergenceError, DomainError

log = logging.getLogger(__name__)

SEED_ENV = "GPIQ_SEED"
DEFAULT_SEED = 20150623
MAX_DISCARD_FRACTION = 1e-4
BORDERLINE_DISCRIMINANT = 1e-12
DEFLATION_EPS = 4 * np.finfo(np.float64).eps
ITERATIONS_PER_EIGENVALUE = 30  # times dim

_MASK64 = (1 << 64) - 1
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_TRIAL_STRIDE = np.uint64(0xD1B54A32D192ED03)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_TWO_M53 = 1.0 / 9007199254740992.0


@dataclass(frozen=True)
class GaussianMatrixPair:
    dim: int
    X: np.ndarray
    Y: np.ndarray

    @property
    def product(self) -> np.ndarray:
        return self.X @ self.Y


@dataclass(frozen=True)
class McEstimate:
    """Outcome of :func:`estimate_prob`.

    ``trials`` counts the trials that entered the estimate; ``discards``
    the ones dropped because QR did not converge.
    """

    dim: int
    trials: int
    successes: int
    seed: int
    discards: int = 0
    borderline: int = 0

    @property
    def estimate(self) -> float:
        return self.successes / self.trials

    @property
    def std_error(self) -> float:
        p = self.estimate
        return math.sqrt(p * (1 - p) / self.trials)


# -- random numbers --------------------------------------------------------


@njit(cache=True, nogil=True)
def _mix64(z):
    z = (z ^ (z >> _S30)) * _MIX1
    z = (z ^ (z >> _S27)) * _MIX2
    return z ^ (z >> _S31)


@njit(cache=True, nogil=True)
def _stream_start(seed, trial):
    return _mix64(_mix64(seed) + np.uint64(trial) * _TRIAL_STRIDE)


@njit(cache=True, nogil=True)
def _fill_normals(seed, trial, out):
    """Fill ``out`` (flat) with standard normals from the (seed, trial) stream."""
    state = _stream_start(seed, trial)
    n = out.shape[0]
    i = 0
    while i < n:
        state += _GOLDEN
        u1 = ((_mix64(state) >> _S11) + 0.5) * _TWO_M53
        state += _GOLDEN
        u2 = ((_mix64(state) >> _S11) + 0.5) * _TWO_M53
        r = math.sqrt(-2.0 * math.log(u1))
        theta = 2.0 * math.pi * u2
        out[i] = r * math.cos(theta)
        if i + 1 < n:
            out[i + 1] = r * math.sin(theta)
        i += 2


# -- eigenvalue classification ---------------------------------------------


@njit(cache=True, nogil=True)
def _hessenberg_inplace(a):
    n = a.shape[0]
    v = np.empty(n)
    for k in range(n - 2):
        m = n - k - 1
        alpha = 0.0
        for i in range(m):
            v[i] = a[k + 1 + i, k]
            alpha += v[i] * v[i]
        alpha = math.sqrt(alpha)
        if alpha == 0.0:
            continue
        if v[0] > 0:
            alpha = -alpha
        v[0] -= alpha
        vnorm2 = 0.0
        for i in range(m):
            vnorm2 += v[i] * v[i]
        if vnorm2 == 0.0:
            continue
        for j in range(k, n):
            s = 0.0
            for i in range(m):
                s += v[i] * a[k + 1 + i, j]
            f = 2.0 * s / vnorm2
            for i in range(m):
                a[k + 1 + i, j] -= f * v[i]
        for i in range(n):
            s = 0.0
            for jj in range(m):
                s += v[jj] * a[i, k + 1 + jj]
            f = 2.0 * s / vnorm2
            for jj in range(m):
                a[i, k + 1 + jj] -= f * v[jj]
        a[k + 1, k] = alpha
        for i in range(k + 2, n):
            a[i, k] = 0.0


@njit(cache=True, nogil=True)
def _francis_real_count(a, eps, max_its, borderline_tol):
    """Real eigenvalue count of an upper Hessenberg matrix (destroyed).

    Returns (count, borderline) where borderline counts 2x2 blocks whose
    discriminant lies within ``borderline_tol`` of zero; count is -1 when
    some eigenvalue needs more than ``max_its`` iterations.
    """
    n = a.shape[0]
    anorm = 0.0
    for i in range(n):
        for j in range(max(i - 1, 0), n):
            anorm += abs(a[i, j])
    count = 0
    borderline = 0
    nn = n - 1
    x = y = w = p = q = r = z = s = 0.0
    while nn >= 0:
        its = 0
        while True:
            l = nn
            while l >= 1:
                s = abs(a[l - 1, l - 1]) + abs(a[l, l])
                if s == 0.0:
                    s = anorm
                if abs(a[l, l - 1]) <= eps * s:
                    a[l, l - 1] = 0.0
                    break
                l -= 1
            x = a[nn, nn]
            if l == nn:
                count += 1
                nn -= 1
                break
            y = a[nn - 1, nn - 1]
            w = a[nn, nn - 1] * a[nn - 1, nn]
            if l == nn - 1:
                p = 0.5 * (y - x)
                disc = 4.0 * (p * p + w)  # t^2 - 4d of the block
                if abs(disc) <= borderline_tol:
                    borderline += 1
                if disc >= 0.0:
                    count += 2
                nn -= 2
                break
            if its >= max_its:
                return -1, borderline
            if its == 10 or its == 20:
                # exceptional shift
                for i in range(nn + 1):
                    a[i, i] -= x
                s = abs(a[nn, nn - 1]) + abs(a[nn - 1, nn - 2])
                x = 0.75 * s
                y = x
                w = -0.4375 * s * s
            its += 1
            m = nn - 2
            while m >= l:
                z = a[m, m]
                r = x - z
                s = y - z
                p = (r * s - w) / a[m + 1, m] + a[m, m + 1]
                q = a[m + 1, m + 1] - z - r - s
                r = a[m + 2, m + 1]
                s = abs(p) + abs(q) + abs(r)
                p /= s
                q /= s
                r /= s
                if m == l:
                    break
                u = abs(a[m, m - 1]) * (abs(q) + abs(r))
                v = abs(p) * (abs(a[m - 1, m - 1]) + abs(z) + abs(a[m + 1, m + 1]))
                if u <= 2.220446049250313e-16 * v:
                    break
                m -= 1
            for i in range(m + 2, nn + 1):
                a[i, i - 2] = 0.0
                if i != m + 2:
                    a[i, i - 3] = 0.0
            for k in range(m, nn):
                if k != m:
                    p = a[k, k - 1]
                    q = a[k + 1, k - 1]
                    r = 0.0
                    if k != nn - 1:
                        r = a[k + 2, k - 1]
                    x = abs(p) + abs(q) + abs(r)
                    if x != 0.0:
                        p /= x
                        q /= x
                        r /= x
                s = math.sqrt(p * p + q * q + r * r)
                if p < 0:
                    s = -s
                if s != 0.0:
                    if k == m:
                        if l != m:
                            a[k, k - 1] = -a[k, k - 1]
                    else:
                        a[k, k - 1] = -s * x
                    p += s
                    x = p / s
                    y = q / s
                    z = r / s
                    q /= p
                    r /= p
                    for j in range(k, nn + 1):
                        p = a[k, j] + q * a[k + 1, j]
                        if k != nn - 1:
                            p += r * a[k + 2, j]
                            a[k + 2, j] -= p * z
                        a[k + 1, j] -= p * y
                        a[k, j] -= p * x
                    mmin = nn if nn < k + 3 else k + 3
                    for i in range(l, mmin + 1):
                        p = x * a[i, k] + y * a[i, k + 1]
                        if k != nn - 1:
                            p += z * a[i, k + 2]
                            a[i, k + 2] -= p * r
                        a[i, k + 1] -= p * q
                        a[i, k] -= p
    return count, borderline


@njit(cache=True, nogil=True)
def _run_block(dim, seed, start, stop, eps, max_its, borderline_tol):
    """Trials ``start <= t < stop``: (successes, discards, borderline, parity_faults)."""
    normals = np.empty(2 * dim * dim)
    m = np.empty((dim, dim))
    successes = 0
    discards = 0
    borderline = 0
    parity_faults = 0
    off = dim * dim
    for t in range(start, stop):
        _fill_normals(seed, t, normals)
        for i in range(dim):
            for j in range(dim):
                acc = 0.0
                for l in range(dim):
                    acc += normals[i * dim + l] * normals[off + l * dim + j]
                m[i, j] = acc
        _hessenberg_inplace(m)
        count, border = _francis_real_count(m, eps, max_its, borderline_tol)
        borderline += border
        if count < 0:
            discards += 1
            continue
        if (dim - count) % 2 != 0:
            parity_faults += 1
        if count == dim:
            successes += 1
    return successes, discards, borderline, parity_faults


# -- public API --------------------------------------------------------------


def _seed64(seed: int) -> np.uint64:
    return np.uint64(int(seed) & _MASK64)


def sample_pair(dim: int, seed: int, trial: int = 0) -> GaussianMatrixPair:
    """The matrices used by trial ``trial`` of a run seeded with ``seed``."""
    if dim < 1:
        raise DomainError(f"dim must be positive, got {dim}")
    normals = np.empty(2 * dim * dim)
    _fill_normals(_seed64(seed), trial, normals)
    x = normals[: dim * dim].reshape(dim, dim).copy()
    y = normals[dim * dim :].reshape(dim, dim).copy()
    return GaussianMatrixPair(dim, x, y)


def hessenberg(m) -> np.ndarray:
    """Upper Hessenberg matrix orthogonally similar to ``m``."""
    a = np.array(m, dtype=np.float64, copy=True)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DomainError("hessenberg needs a square matrix")
    _hessenberg_inplace(a)
    return a


def real_eigen_count(m) -> int:
    """Number of real eigenvalues of a real square matrix, with multiplicity."""
    a = hessenberg(m)
    if not np.all(np.isfinite(a)):
        raise DomainError("matrix entries must be finite")
    n = a.shape[0]
    count, _ = _francis_real_count(
        a, DEFLATION_EPS, ITERATIONS_PER_EIGENVALUE * n, BORDERLINE_DISCRIMINANT
    )
    if count < 0:
        raise ConvergenceError(f"Francis QR did not converge on a {n}x{n} matrix")
    return count


def resolve_seed(flag: Optional[int] = None) -> int:
    """Seed from the flag, else $GPIQ_SEED, else the package default."""
    if flag is not None:
        return flag
    env = os.environ.get(SEED_ENV)
    if env:
        try:
            return int(env, 0)
        except ValueError:
            raise DomainError(f"{SEED_ENV}={env!r} is not an integer") from None
    return DEFAULT_SEED


def estimate_prob(
    dim: int,
    trials: int,
    seed: Optional[int] = None,
    workers: int = 1,
    chunk: int = 1 << 16,
) -> McEstimate:
    if dim < 1:
        raise DomainError(f"dim must be positive, got {dim}")
    if trials < 1:
        raise DomainError(f"trials must be positive, got {trials}")
    if workers < 1:
        raise DomainError(f"workers must be positive, got {workers}")
    seed = resolve_seed(seed)
    key = _seed64(seed)
    max_its = ITERATIONS_PER_EIGENVALUE * dim
    bounds = [(s, min(s + chunk, trials)) for s in range(0, trials, chunk)]

    def run(b):
        return _run_block(dim, key, b[0], b[1], DEFLATION_EPS, max_its, BORDERLINE_DISCRIMINANT)

    if workers == 1:
        results = [run(b) for b in bounds]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, bounds))
    successes, discards, borderline, parity = (sum(col) for col in zip(*results))

    if parity:
        raise AssertionError(f"{parity} trials gave a real-eigenvalue count of wrong parity")
    if borderline:
        log.info("dim=%d: %d block discriminants within %g of zero", dim, borderline,
                 BORDERLINE_DISCRIMINANT)
    if discards:
        log.warning("dim=%d: discarded %d non-converged trials", dim, discards)
        if discards > MAX_DISCARD_FRACTION * trials:
            raise ConvergenceError(
                f"{discards} of {trials} trials failed to converge (limit "
                f"{MAX_DISCARD_FRACTION:.2%})"
            )
    return McEstimate(dim, trials - discards, successes, seed, discards, borderline)


MC_HEADER = ("dim", "trials", "successes", "estimate", "std_error", "discards", "seed")


def write_mc_csv(results: Iterable[McEstimate], out: TextIO, header: bool = True) -> None:
    writer = csv.writer(out, lineterminator="\n")
    if header:
        writer.writerow(MC_HEADER)
    for r in results:
        writer.writerow(
            [r.dim, r.trials, r.successes, f"{r.estimate:.6f}", f"{r.std_error:.6f}",
             r.discards, r.seed]
        )
