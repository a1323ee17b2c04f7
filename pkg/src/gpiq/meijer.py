"""Meijer G-functions of the class G^{2,2}_{3,3}(z | a1, a2, c ; b1, b2, c+n).

A common parameter ``c`` in the upper and lower lists lets the function be
written as a finite sum of regularized Gauss hypergeometric functions of
``1 - z``.  At ``z = 1`` every hypergeometric factor collapses to a reciprocal
Gamma, so with half-integer parameters the value is an exact
:class:`~gpiq.exact.PiMonomial`.

The exact path (:func:`meijer_g_unit`, :func:`meijer_g_jk`) never touches
floating point; the general-``z`` path (:func:`meijer_g_general_z`) is float
only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from decimal import localcontext
from fractions import Fraction
from functools import lru_cache

from gpiq.errors import ConvergenceError, DomainError
from gpiq.exact import HalfInt, PiMonomial, binomial_exact, gamma_exact, pochhammer_exact

DEFAULT_TERM_CAP = 10000
_CONSECUTIVE_SMALL = 3


@dataclass(frozen=True)
class MeijerParams:
    """Parameters ``(a1, a2, b1, b2, c, n)``.

    Exactness is not checked here; call :meth:`gamma_arguments` or any
    evaluator to find out whether a given tuple qualifies.
    """

    a1: HalfInt
    a2: HalfInt
    b1: HalfInt
    b2: HalfInt
    c: HalfInt
    n: int = 0

    def __post_init__(self):
        for name in ("a1", "a2", "b1", "b2", "c"):
            object.__setattr__(self, name, HalfInt.of(getattr(self, name)))
        if not isinstance(self.n, int) or self.n < 0:
            raise DomainError(f"n must be a non-negative integer, got {self.n!r}")

    @classmethod
    def for_jk(cls, j: int, k: int) -> "MeijerParams":
        """The kernel parameters a1 = a2 = 5/2 - j, b1 = 1, b2 = k + 1, c = 2, n = k - 1."""
        JkIndex(j, k)
        a = HalfInt(5 - 2 * j)
        return cls(a, a, HalfInt(2), HalfInt(2 * k + 2), HalfInt(4), k - 1)

    def gamma_arguments(self) -> dict[str, HalfInt]:
        """Every Gamma argument of the unit-argument sum, keyed by a readable label.

        Raises :class:`DomainError` naming the first argument that is not a
        positive half-integer.
        """
        a1, a2, b1, b2 = self.a1, self.a2, self.b1, self.b2
        args = {"1-a1+b2": 1 - a1 + b2, "1-a2+b2": 1 - a2 + b2}
        for mu in range(self.n + 1):
            args[f"{mu}+1-a1+b1"] = mu + 1 - a1 + b1
            args[f"{mu}+1-a2+b1"] = mu + 1 - a2 + b1
            args[f"{mu}+2-a1-a2+b1+b2"] = mu + 2 - a1 - a2 + b1 + b2
        for label, x in args.items():
            if x <= 0:
                raise DomainError(
                    f"Gamma argument {label} = {x} is not a positive half-integer"
                )
        return args


@dataclass(frozen=True)
class JkIndex:
    j: int
    k: int

    def __post_init__(self):
        j, k = self.j, self.k
        if not (isinstance(j, int) and isinstance(k, int)) or j < 1 or k < 1:
            raise DomainError(f"j and k must be positive integers, got ({j}, {k})")

    def __iter__(self):
        yield self.j
        yield self.k


def meijer_g_unit(p: MeijerParams) -> PiMonomial:
    """Exact value at ``z = 1``."""
    p.gamma_arguments()
    a1, a2, b1, b2 = p.a1, p.a2, p.b1, p.b2
    shift = p.c - b1
    total = PiMonomial(0)
    for mu in range(p.n + 1):
        weight = binomial_exact(p.n, mu) * pochhammer_exact(shift, p.n - mu)
        if weight == 0:
            continue
        term = (
            gamma_exact(mu + 1 - a1 + b1)
            * gamma_exact(mu + 1 - a2 + b1)
            / gamma_exact(mu + 2 - a1 - a2 + b1 + b2)
        )
        total = total + weight * term
    return gamma_exact(1 - a1 + b2) * gamma_exact(1 - a2 + b2) * total


def _jk_gamma_sum(j: int, k: int) -> PiMonomial:
    total = PiMonomial(0)
    for mu in range(k):
        total = total + gamma_exact(HalfInt(2 * mu + 2 * j - 1)) ** 2 / (
            math.factorial(mu) * math.factorial(mu + 2 * j + k - 2)
        )
    return total


def _jk_pi_squared_coeff(j: int, k: int) -> Fraction:
    f = math.factorial
    total = Fraction(0)
    for mu in range(k):
        # 16^(2 - mu - 2j - k) is always a reciprocal power of 16
        total += Fraction(
            f(2 * mu + 2 * j - 2) ** 2,
            16 ** (mu + 2 * j + k - 2)
            * f(mu)
            * f(mu + j - 1) ** 2
            * f(mu + 2 * j + k - 2),
        )
    return Fraction(f(k - 1) * f(2 * j + 2 * k - 2) ** 2, f(j + k - 1) ** 2) * total


def meijer_g_jk_forms(j: int, k: int) -> tuple[PiMonomial, PiMonomial]:
    """Both closed forms of the kernel entry: the Gamma sum and the explicit pi^2 form."""
    JkIndex(j, k)
    gamma_form = (
        gamma_exact(k) * gamma_exact(HalfInt(2 * j + 2 * k - 1)) ** 2 * _jk_gamma_sum(j, k)
    )
    pi_form = PiMonomial(_jk_pi_squared_coeff(j, k), 4)
    return gamma_form, pi_form


@lru_cache(maxsize=None)
def meijer_g_jk(j: int, k: int) -> PiMonomial:
    """Kernel entry G^{2,2}_{3,3}(1 | 5/2-j, 5/2-j, 2 ; 1, 1+k, 1+k), a rational times pi^2."""
    gamma_form, pi_form = meijer_g_jk_forms(j, k)
    if gamma_form != pi_form:
        raise AssertionError(
            f"closed forms disagree at (j, k) = ({j}, {k}): {gamma_form} != {pi_form}"
        )
    return pi_form


def reciprocal_gamma(x: float) -> float:
    """1/Gamma(x), zero at the poles."""
    if x <= 0 and float(x).is_integer():
        return 0.0
    return 1.0 / math.gamma(x)


def hyp2f1_reg(
    alpha: float,
    beta: float,
    gamma: float,
    w: float,
    tol: float = 1e-15,
    max_terms: int = DEFAULT_TERM_CAP,
) -> float:
    """Regularized Gauss hypergeometric function 2F1(alpha, beta; gamma; w) / Gamma(gamma).

    Summed term by term until three consecutive terms fall below
    ``tol`` relative to the partial sum.
    """
    if tol <= 0:
        raise DomainError(f"tol must be positive, got {tol}")
    if not abs(w) < 1:
        raise DomainError(f"series needs |w| < 1, got w = {w}")
    if w == 0:
        return reciprocal_gamma(gamma)

    s = 0
    if gamma <= 0 and float(gamma).is_integer():
        # Terms before gamma + s = 1 vanish; start there with Gamma(1) = 1.
        s = int(1 - gamma)
        term = 1.0
        for i in range(s):
            term *= (alpha + i) * (beta + i) * w / (i + 1)
    else:
        term = 1.0 / math.gamma(gamma)

    partial = 0.0
    small = 0
    while s < max_terms:
        partial += term
        if abs(term) <= tol * abs(partial):
            small += 1
            if small >= _CONSECUTIVE_SMALL:
                return partial
        else:
            small = 0
        term *= (alpha + s) * (beta + s) * w / ((gamma + s) * (s + 1))
        s += 1
    raise ConvergenceError(
        f"2F1({alpha}, {beta}; {gamma}; {w}) not converged after {max_terms} terms"
    )


def meijer_g_general_z(
    p: MeijerParams, z: float, tol: float = 1e-15, max_terms: int = DEFAULT_TERM_CAP
) -> float:
    """Float evaluation for ``|1 - z| < 1`` via the finite hypergeometric sum."""
    if not abs(1 - z) < 1:
        raise DomainError(f"general-z evaluation needs |1 - z| < 1, got z = {z}")
    p.gamma_arguments()
    a1, a2, b1, b2 = p.a1, p.a2, p.b1, p.b2
    shift = p.c - b1
    total = 0.0
    for mu in range(p.n + 1):
        weight = binomial_exact(p.n, mu) * pochhammer_exact(shift, p.n - mu)
        if weight == 0:
            continue
        x1 = float(mu + 1 - a1 + b1)
        x2 = float(mu + 1 - a2 + b1)
        y = float(mu + 2 - a1 - a2 + b1 + b2)
        total += (
            float(weight)
            * math.gamma(x1)
            * math.gamma(x2)
            * z ** (mu + float(b1))
            * hyp2f1_reg(x1, x2, y, 1 - z, tol, max_terms)
        )
    return math.gamma(float(1 - a1 + b2)) * math.gamma(float(1 - a2 + b2)) * total


@dataclass(frozen=True)
class IdentityCheck:
    lhs: float
    rhs: float
    residual: float
    passed: bool

    def __bool__(self):
        return self.passed


def _richardson(partials: list[float], first_power: int) -> tuple[float, float]:
    """Extrapolate partial sums at n, 2n, 4n, ... whose error is
    sum_{p >= first_power} c_p n^-p.  Returns (value, error estimate)."""
    table = list(partials)
    previous = table[-1]
    power = first_power
    while len(table) > 1:
        previous = table[-1]
        f = 2.0**power
        table = [(f * table[i + 1] - table[i]) / (f - 1) for i in range(len(table) - 1)]
        power += 1
    return table[0], abs(table[0] - previous)


def sum_3f2_unit(j: int, k: int, max_terms: int = DEFAULT_TERM_CAP) -> tuple[float, float]:
    """3F2(1, J, J; k+1, 2J; 1) / (Gamma(k+1) Gamma(2J)) with J = j + k - 1/2.

    The parameter excess is ``k``, so terms decay like ``s^-(k+1)`` and the
    tail after ``n`` terms has an expansion in powers ``n^-k, n^-(k+1), ...``.
    Partial sums at doubling ``n`` are Richardson-extrapolated on that
    expansion.  Returns (value, error estimate).
    """
    JkIndex(j, k)
    big_j = j + k - 0.5
    excess = (k + 1 + 2 * big_j) - (1 + big_j + big_j)  # sum(lower) - sum(upper)
    if not excess > 0:
        raise AssertionError(f"parameter excess {excess} must be positive")

    start, levels = 16, 10
    checkpoints = {start * 2**i for i in range(levels)}
    n_max = start * 2 ** (levels - 1)
    if n_max > max_terms:
        raise ConvergenceError(f"3F2 sum needs {n_max} terms, cap is {max_terms}")

    partials = []
    term, acc = 1.0, 0.0
    for s in range(n_max):
        acc += term
        if s + 1 in checkpoints:
            partials.append(acc)
        term *= (big_j + s) ** 2 / ((k + 1 + s) * (2 * big_j + s))
    scale = 1.0 / (math.factorial(k) * math.factorial(2 * j + 2 * k - 2))
    value, err = _richardson(partials, k)
    return value * scale, err * scale


def check_3f2_identity(j: int, k: int, tol: float = 1e-8) -> IdentityCheck:
    """Compare the summed 3F2 series with its closed form in exact Gammas."""
    lhs, _ = sum_3f2_unit(j, k)
    big_j = HalfInt(2 * j + 2 * k - 1)
    first = gamma_exact(HalfInt(2 * j - 1)) ** 2 * gamma_exact(k) / gamma_exact(big_j) ** 4
    second = _jk_gamma_sum(j, k) / gamma_exact(big_j) ** 2
    # The two pieces carry different powers of pi, so they meet only as decimals.
    with localcontext() as ctx:
        ctx.prec = 50
        rhs = float(first.to_decimal(50) - second.to_decimal(50))
    residual = abs(lhs - rhs)
    return IdentityCheck(lhs, rhs, residual, residual < tol)


def derivative_recursion_residual(p: MeijerParams, z: float = 0.9, h: float = 1e-5) -> float:
    """Relative mismatch of -z^(1+e) d/dz[z^-e G_n(z)] against G_{n+1}(z), e = c + n.

    The derivative is a central difference with step ``h``.
    """
    c = float(p.c) + p.n

    def scaled(x):
        return x**-c * meijer_g_general_z(p, x)

    lhs = -(z ** (1 + c)) * (scaled(z + h) - scaled(z - h)) / (2 * h)
    rhs = meijer_g_general_z(replace(p, n=p.n + 1), z)
    return abs(lhs - rhs) / abs(rhs)


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    detail: str


def run_identity_suite(
    j_max: int = 10, k_max: int = 10, tol: float = 1e-8, fd_tol: float = 1e-6
) -> list[SuiteResult]:
    """Check the kernel identities over 1 <= j <= j_max, 1 <= k <= k_max."""
    pairs = [(j, k) for j in range(1, j_max + 1) for k in range(1, k_max + 1)]
    results = []

    bad = [(j, k) for j, k in pairs if len(set(meijer_g_jk_forms(j, k))) != 1]
    results.append(SuiteResult("closed-forms-agree", not bad, f"mismatches: {bad}" if bad
                               else f"{len(pairs)} pairs exact"))

    bad = [(j, k) for j, k in pairs if meijer_g_jk(j, k).half_pi_exponent != 4]
    results.append(SuiteResult("rational-times-pi^2", not bad, f"violations: {bad}" if bad
                               else f"{len(pairs)} pairs"))

    bad = [(j, k) for j, k in pairs if meijer_g_unit(MeijerParams.for_jk(j, k)) != meijer_g_jk(j, k)]
    results.append(SuiteResult("unit-sum-specialization", not bad, f"mismatches: {bad}" if bad
                               else f"{len(pairs)} pairs exact"))

    worst = max(check_3f2_identity(j, k, tol).residual for j, k in pairs)
    results.append(SuiteResult("3F2-identity", worst < tol, f"max residual {worst:.3e} (tol {tol:g})"))

    base = MeijerParams.for_jk(1, 1)
    rel = derivative_recursion_residual(base)
    results.append(SuiteResult("derivative-recursion", rel < fd_tol,
                               f"relative error {rel:.3e} at z=0.9 (tol {fd_tol:g})"))
    return results
