"""Exact probability that all eigenvalues of XY are real, X and Y independent
N x N real Gaussian matrices.

The probability is a Gamma prefactor times a determinant of kernel entries
from :func:`gpiq.meijer.meijer_g_jk`; for odd N one extra column of squared
half-integer Gammas is appended.  Each kernel column carries a single power
of pi, so the pi powers are factored out column by column and the remaining
determinant is taken over the rationals with fraction-free elimination.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from functools import lru_cache, reduce
from typing import Iterable, Optional, Sequence, TextIO

from gpiq.errors import DomainError, StructuralError
from gpiq.exact import HalfInt, PiMonomial, gamma_exact
from gpiq.meijer import meijer_g_jk

try:
    from gmpy2 import divexact as _divexact, mpz as _bigint
except ImportError:  # pragma: no cover - plain ints are correct, only slower
    _bigint = int

    def _divexact(a, b):
        return a // b

PI_OVER_FOUR_LOG = math.log(math.pi / 4)


@dataclass(frozen=True)
class KernelMatrix:
    dim: int
    entries: tuple[tuple[PiMonomial, ...], ...]
    column_pi_exponents: tuple[int, ...]

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[PiMonomial]]) -> "KernelMatrix":
        dim = len(columns)
        if any(len(col) != dim for col in columns):
            raise DomainError("kernel matrix must be square")
        exponents = []
        for k, col in enumerate(columns):
            seen = {e.half_pi_exponent for e in col if not e.is_zero()}
            if len(seen) > 1:
                raise StructuralError(f"column {k} mixes pi exponents {sorted(seen)}")
            exponents.append(seen.pop() if seen else 0)
        rows = tuple(tuple(columns[k][j] for k in range(dim)) for j in range(dim))
        return cls(dim, rows, tuple(exponents))

    def residual(self) -> list[list[Fraction]]:
        """Rational matrix left after factoring each column's power of pi."""
        return [[e.coeff for e in row] for row in self.entries]

    @property
    def pi_exponent(self) -> int:
        return sum(self.column_pi_exponents)


@dataclass(frozen=True)
class ExactProbability:
    """p_{N,N} as an exact monomial.

    ``float_value`` underflows to 0.0 once p drops below the double range
    (N above about 77); ``decimal_value`` and ``log10`` stay usable.
    """

    dim: int
    value: PiMonomial

    @property
    def decimal_value(self) -> Decimal:
        return self.value.to_decimal(50)

    @property
    def float_value(self) -> float:
        return float(self.decimal_value)

    @property
    def log10(self) -> float:
        return self.value.log10()


@dataclass(frozen=True)
class TableRow:
    n: int
    probability: ExactProbability
    ratio: Optional[float]


@lru_cache(maxsize=None)
def prefactor(n: int) -> PiMonomial:
    """prod_{j=1}^{N} 1 / Gamma(j/2)^2."""
    if n < 1:
        raise DomainError(f"N must be positive, got {n}")
    out = PiMonomial(1)
    for j in range(1, n + 1):
        out = out / gamma_exact(HalfInt(j)) ** 2
    return out


def _gamma_column(rows: int) -> list[PiMonomial]:
    return [gamma_exact(HalfInt(2 * j - 1)) ** 2 for j in range(1, rows + 1)]


def _g_column(k: int, rows: int) -> list[PiMonomial]:
    return [meijer_g_jk(j, k) for j in range(1, rows + 1)]


def build_kernel(n: int) -> KernelMatrix:
    if n < 2:
        raise DomainError(f"kernel needs N >= 2, got {n}")
    if n % 2 == 0:
        m = n // 2
        return KernelMatrix.from_columns([_g_column(k, m) for k in range(1, m + 1)])
    m = (n + 1) // 2
    columns = [_g_column(k, m) for k in range(1, m)]
    columns.append(_gamma_column(m))
    return KernelMatrix.from_columns(columns)


def _integer_rows(m: Sequence[Sequence]) -> tuple[list[list[int]], int]:
    """Scale each row by the lcm of its denominators; return rows and the total scale."""
    rows, scale = [], 1
    for row in m:
        fr = [Fraction(x) for x in row]
        lcm = reduce(math.lcm, (x.denominator for x in fr), 1)
        rows.append([_bigint(x.numerator * (lcm // x.denominator)) for x in fr])
        scale *= lcm
    return rows, scale


def _bareiss(a: list[list[int]], pivoting: bool = True) -> list[int]:
    """In-place Bareiss elimination on an integer matrix.

    Returns the successive pivots; without row exchanges the k-th pivot is
    the leading k x k principal minor.  With ``pivoting`` the sign of the
    last entry accounts for the exchanges.  A zero pivot that cannot be
    exchanged away ends the list early (the matrix is singular, or without
    ``pivoting`` the next minor vanishes).
    """
    n = len(a)
    sign, prev = 1, _bigint(1)
    pivots = []
    for k in range(n):
        if a[k][k] == 0:
            if not pivoting:
                pivots.append(0)
                return pivots
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                pivots.append(0)
                return pivots
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        pivot = a[k][k]
        pivots.append(sign * pivot)
        row_k = a[k]
        for i in range(k + 1, n):
            row_i = a[i]
            aik = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = _divexact(row_i[j] * pivot - aik * row_k[j], prev)
            row_i[k] = 0
        prev = pivot
    return pivots


def det_bareiss(m: Sequence[Sequence]) -> Fraction:
    """Exact determinant of a square matrix of rationals."""
    n = len(m)
    if any(len(row) != n for row in m):
        raise DomainError("determinant needs a square matrix")
    if n == 0:
        return Fraction(1)
    rows, scale = _integer_rows(m)
    pivots = _bareiss(rows)
    if len(pivots) < n:
        return Fraction(0)
    return Fraction(int(pivots[-1]), scale)


def leading_minors(m: Sequence[Sequence]) -> list[Fraction]:
    """Determinants of all leading principal submatrices, from one elimination.

    Minors after the first vanishing one are computed individually.
    """
    n = len(m)
    rows, _ = _integer_rows(m)
    row_scales = [_integer_rows([row])[1] for row in m]
    pivots = _bareiss(rows, pivoting=False)
    out = []
    scale = 1
    for k, piv in enumerate(pivots):
        scale *= row_scales[k]
        out.append(Fraction(int(piv), scale))
    for k in range(len(out), n):
        out.append(det_bareiss([row[: k + 1] for row in m[: k + 1]]))
    return out


def _assemble(n: int, pi_exponent: int, det: Fraction) -> ExactProbability:
    value = prefactor(n) * PiMonomial(det, pi_exponent)
    expected = 2 * (n // 2)
    if value.half_pi_exponent != expected:
        raise StructuralError(
            f"p_{n} has pi exponent {value.half_pi_exponent}/2, expected {expected}/2"
        )
    if not 0 < value.coeff or not value.to_decimal(50) <= 1:
        raise ArithmeticError(f"p_{n} = {value} is not a probability")
    return ExactProbability(n, value)


@lru_cache(maxsize=None)
def prob_all_real(n: int) -> ExactProbability:
    if not isinstance(n, int) or n < 1:
        raise DomainError(f"N must be a positive integer, got {n!r}")
    if n == 1:
        return ExactProbability(1, PiMonomial(1))
    kernel = build_kernel(n)
    return _assemble(n, kernel.pi_exponent, det_bareiss(kernel.residual()))


def asymptotic_log(n: int) -> float:
    """Natural log of the leading large-N form (pi/4)^(N^2/2)."""
    if n < 1:
        raise DomainError(f"N must be positive, got {n}")
    return n * n / 2 * PI_OVER_FOUR_LOG


def _ratio(prev: ExactProbability, cur: ExactProbability, nxt: ExactProbability) -> float:
    r = PiMonomial(4, -2) * prev.value * nxt.value / cur.value**2
    return r.to_float()


def ratio_statistic(n: int) -> float:
    """(4/pi) p_{N-1} p_{N+1} / p_N^2, exact until the final conversion."""
    if n < 2:
        raise DomainError(f"ratio needs N >= 2, got {n}")
    return _ratio(prob_all_real(n - 1), prob_all_real(n), prob_all_real(n + 1))


def _all_probabilities(n_max: int) -> list[ExactProbability]:
    """p_1 .. p_{n_max} from two eliminations.

    Even N = 2m is the leading m x m minor of the kernel matrix.  Odd
    N = 2m + 1 is a leading (m+1) x (m+1) minor of the kernel with the Gamma
    column moved to the front, which flips the sign by (-1)^m.
    """
    probs = [ExactProbability(1, PiMonomial(1))]
    if n_max == 1:
        return probs
    m_even = n_max // 2
    m_odd = (n_max - 1) // 2
    g_cols = max(m_even, m_odd)
    g_rows = max(m_even, m_odd + 1)
    g = [[meijer_g_jk(j, k).coeff for k in range(1, g_cols + 1)] for j in range(1, g_rows + 1)]

    even = leading_minors([row[:m_even] for row in g[:m_even]]) if m_even else []
    gamma_col = [e.coeff for e in _gamma_column(m_odd + 1)]
    odd = leading_minors([[gamma_col[j]] + g[j][:m_odd] for j in range(m_odd + 1)])

    for n in range(2, n_max + 1):
        if n % 2 == 0:
            m = n // 2
            probs.append(_assemble(n, 4 * m, even[m - 1]))
        else:
            m = (n - 1) // 2
            probs.append(_assemble(n, 4 * m + 2, (-1) ** m * odd[m]))
    return probs


def probability_table(n_max: int) -> list[TableRow]:
    """Rows N = 1..n_max; the ratio is None for N = 1."""
    if n_max < 1:
        raise DomainError(f"N_max must be positive, got {n_max}")
    probs = _all_probabilities(n_max + 1)
    rows = []
    for i in range(n_max):
        ratio = _ratio(probs[i - 1], probs[i], probs[i + 1]) if i >= 1 else None
        rows.append(TableRow(i + 1, probs[i], ratio))
    return rows


TABLE_HEADER = ("N", "exact", "float", "ratio")


def format_sig6(value: Decimal) -> str:
    """Six significant digits, falling back to Decimal outside the double range."""
    f = float(value)
    if f != 0.0 or value == 0:
        return f"{f:.5e}"
    return format(value, ".5e")


def format_row(row: TableRow) -> list[str]:
    return [
        str(row.n),
        row.probability.value.to_text(),
        format_sig6(row.probability.decimal_value),
        "" if row.ratio is None else f"{row.ratio:.5f}",
    ]


def write_table_csv(rows: Iterable[TableRow], out: TextIO, header: bool = True) -> None:
    writer = csv.writer(out, lineterminator="\n")
    if header:
        writer.writerow(TABLE_HEADER)
    for row in rows:
        writer.writerow(format_row(row))
