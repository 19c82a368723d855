"""
Exact truncated power series and the sortable-pattern generating functions

UniSeries carries Fraction coefficients; BiSeries carries elements of the
rational function field QQ(q). Both keep c_0 ... c_N and never read past N.
The generating function P(x) = sum s(n) x^n is expanded two ways (closed form
and functional equation), and so is its refinement P_[q](x) by distinct socks.
"""

import time
from abc import ABC, abstractmethod
from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Type, TypeVar

import mpmath
from loguru import logger
from sympy import QQ
from sympy.polys.fields import FracElement, field

from config import get_cap
from errors import PreconditionError, SeriesError

QField, q = field("q", QQ)

K_PAPER = 0.34313

S = TypeVar("S", bound="TruncatedSeries")


class TruncatedSeries(ABC):
    """c_0 + c_1 x + ... + c_N x^N + O(x^(N+1))"""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence):
        if not coeffs:
            raise SeriesError("a truncated series needs at least the constant term")
        self.coeffs = tuple(self.coerce(c) for c in coeffs)

    @classmethod
    @abstractmethod
    def coerce(cls, value):
        """Bring an int, Fraction or field element into the coefficient ring"""

    @classmethod
    @abstractmethod
    def zero_coeff(cls):
        ...

    @classmethod
    def polynomial(cls: Type[S], coeffs: Sequence, order: int) -> S:
        """Polynomial truncated (or zero-padded) to the given order"""
        padded = list(coeffs[: order + 1]) + [cls.zero_coeff()] * (order + 1 - len(coeffs))
        return cls(padded)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n: int):
        if not 0 <= n <= self.order:
            raise SeriesError(f"coefficient {n} is beyond truncation order {self.order}")
        return self.coeffs[n]

    def __len__(self) -> int:
        return len(self.coeffs)

    def __eq__(self, other) -> bool:
        return type(self) is type(other) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((type(self).__name__, self.coeffs))

    def __repr__(self) -> str:
        head = ", ".join(str(c) for c in self.coeffs[:6])
        more = ", ..." if len(self.coeffs) > 6 else ""
        return f"{type(self).__name__}([{head}{more}], N={self.order})"

    def valuation(self) -> Optional[int]:
        """Index of the first nonzero coefficient, None for the zero series"""
        for n, c in enumerate(self.coeffs):
            if c:
                return n
        return None

    def truncate(self: S, order: int) -> S:
        if order > self.order:
            raise SeriesError(f"cannot extend order {self.order} to {order}")
        return type(self)(self.coeffs[: order + 1])

    def shift_down(self: S, k: int) -> S:
        """Divide by x^k; the first k coefficients must vanish"""
        if any(self.coeffs[:k]):
            raise SeriesError(f"series is not divisible by x^{k}")
        return type(self)(self.coeffs[k:])

    def scale(self: S, c) -> S:
        c = self.coerce(c)
        return type(self)([c * a for a in self.coeffs])

    def __add__(self, other):
        return series_add(self, other)

    def __sub__(self, other):
        return series_add(self, other.scale(-1))

    def __neg__(self):
        return self.scale(-1)

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return series_mul(self, other)
        return self.scale(other)

    __rmul__ = __mul__


class UniSeries(TruncatedSeries):
    """Series over the rationals"""

    __slots__ = ()

    @classmethod
    def coerce(cls, value) -> Fraction:
        if isinstance(value, FracElement):
            raise SeriesError("rational function coefficient in a univariate series")
        return Fraction(value)

    @classmethod
    def zero_coeff(cls) -> Fraction:
        return Fraction(0)

    def integers(self) -> List[int]:
        """Coefficients as ints; each must be a non-negative integer"""
        out = []
        for n, c in enumerate(self.coeffs):
            if c.denominator != 1 or c < 0:
                raise SeriesError(f"coefficient {n} is {c}, not a non-negative integer")
            out.append(c.numerator)
        return out


class BiSeries(TruncatedSeries):
    """Series in x with coefficients in QQ(q)"""

    __slots__ = ()

    @classmethod
    def coerce(cls, value) -> FracElement:
        if isinstance(value, FracElement):
            return QField(value)
        value = Fraction(value)
        return QField(value.numerator) / QField(value.denominator)

    @classmethod
    def zero_coeff(cls) -> FracElement:
        return QField.zero


def _same_kind(f: TruncatedSeries, g: TruncatedSeries) -> None:
    if type(f) is not type(g):
        raise SeriesError(f"cannot combine {type(f).__name__} with {type(g).__name__}")


def series_add(f: S, g: S) -> S:
    _same_kind(f, g)
    N = min(f.order, g.order)
    return type(f)([f.coeffs[n] + g.coeffs[n] for n in range(N + 1)])


def series_mul(f: S, g: S) -> S:
    _same_kind(f, g)
    N = min(f.order, g.order)
    a, b = f.coeffs, g.coeffs
    zero = f.zero_coeff()
    out = []
    for n in range(N + 1):
        total = zero
        for i in range(n + 1):
            if a[i] and b[n - i]:
                total += a[i] * b[n - i]
        out.append(total)
    return type(f)(out)


def series_inverse(f: S) -> S:
    """1/f, for f with nonzero constant term"""
    a = f.coeffs
    if not a[0]:
        raise SeriesError("cannot invert a series with zero constant term")
    inv0 = f.coerce(1) / a[0]
    g = [inv0]
    for n in range(1, f.order + 1):
        total = f.zero_coeff()
        for i in range(1, n + 1):
            if a[i]:
                total += a[i] * g[n - i]
        g.append(-inv0 * total)
    return type(f)(g)


def series_sqrt(f: S) -> S:
    """The square root g with g_0 = 1, from g^2 = f solved degree by degree"""
    a = f.coeffs
    one = f.coerce(1)
    if a[0] != one:
        raise SeriesError(f"square root needs constant term 1, got {a[0]}")
    half = one / 2
    g = [one]
    for n in range(1, f.order + 1):
        # sum_{i=1}^{n-1} g_i g_{n-i}, folded by symmetry
        cross = f.zero_coeff()
        for i in range(1, (n + 1) // 2):
            cross += g[i] * g[n - i]
        cross *= 2
        if n % 2 == 0:
            cross += g[n // 2] * g[n // 2]
        g.append((a[n] - cross) * half)
    return type(f)(g)


def divide_at_valuation(num: S, den: S) -> S:
    """num / den after cancelling the common power of x

    The result has order min(N_num, N_den) - val(den).
    """
    _same_kind(num, den)
    v_den = den.valuation()
    if v_den is None:
        raise SeriesError("division by the zero series")
    v_num = num.valuation()
    if v_num is not None and v_num < v_den:
        raise SeriesError(f"valuation mismatch: numerator {v_num} < denominator {v_den}")
    N = min(num.order, den.order)
    if N < v_den:
        raise SeriesError(f"truncation order {N} is below the denominator valuation {v_den}")
    quotient = series_mul(num.truncate(N).shift_down(v_den), series_inverse(den.truncate(N).shift_down(v_den)))
    return quotient


def _check_constant_free(P: TruncatedSeries, label: str) -> None:
    if P.coeffs[0]:
        raise SeriesError(f"{label} has nonzero constant term {P.coeffs[0]}")


def p_closed_form(N: int) -> UniSeries:
    """P(x) through x^N from the radical expression"""
    if N < 1:
        raise PreconditionError(f"expansion order must be >= 1, got {N}")
    started = time.time()
    radicand = UniSeries.polynomial([1, -6, 7, -2, 1], N + 1)
    numerator = UniSeries.polynomial([-1, 3, -3], N + 1) + series_sqrt(radicand)
    denominator = UniSeries.polynomial([0, -4, 4], N + 1)
    P = divide_at_valuation(numerator, denominator)
    _check_constant_free(P, "P(x)")
    P.integers()
    logger.debug(f"✅ Closed-form P(x) through x^{N} in {time.time() - started:.2f}s")
    return P


def _solve_functional(
    kind: Type[S],
    N: int,
    base: Sequence,
    y: Sequence,
    t,
    c,
) -> S:
    """Solve P = base + c/(1-x) * W with W = u + u W and u = t P y

    y has no constant term, so coefficient n of the right side only reads
    P_0 ... P_{n-1}.
    """
    if y[0]:
        raise SeriesError("fixed-point dependency violated: y has a constant term")
    zero = kind.zero_coeff()
    t, c = kind.coerce(t), kind.coerce(c)
    P = [kind.coerce(base[0])]
    u = [zero]
    W = [zero]
    running = zero
    for n in range(1, N + 1):
        convolution = zero
        for i in range(n):
            if P[i] and y[n - i]:
                convolution += P[i] * y[n - i]
        u.append(t * convolution)
        w = u[n]
        for i in range(1, n):
            if u[i] and W[n - i]:
                w += u[i] * W[n - i]
        W.append(w)
        running += w
        P.append(kind.coerce(base[n]) + c * running)
    return kind(P)


def p_functional_eq(N: int) -> UniSeries:
    """P(x) as the fixed point of P = y + (1/(2(1-x))) * 2Py / (1 - 2Py), y = x/(1-x)"""
    if N < 1:
        raise PreconditionError(f"expansion order must be >= 1, got {N}")
    started = time.time()
    y = [0] + [1] * N
    P = _solve_functional(UniSeries, N, y, y, 2, Fraction(1, 2))
    _check_constant_free(P, "P(x)")
    P.integers()
    logger.debug(f"✅ Functional-equation P(x) through x^{N} in {time.time() - started:.2f}s")
    return P


def coefficient_polynomials(P: BiSeries) -> List[List[int]]:
    """[x^n] P as integer coefficient lists in ascending powers of q"""
    rows = []
    for n, f in enumerate(P.coeffs):
        if not f.denom.is_ground:
            raise SeriesError(f"coefficient of x^{n} is not a polynomial in q: {f.as_expr()}")
        scale = _to_fraction(f.denom.LC)
        terms = {monom[0]: _to_fraction(coeff) / scale for monom, coeff in f.numer.terms()}
        row = [0] * (max(terms) + 1 if terms else 0)
        for degree, value in terms.items():
            if value.denominator != 1 or value < 0:
                raise SeriesError(f"coefficient of x^{n} q^{degree} is {value}, not a non-negative integer")
            row[degree] = value.numerator
        rows.append(row)
    return rows


def _to_fraction(value) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


def evaluate_at_one(P: BiSeries) -> UniSeries:
    """Substitute q = 1 coefficientwise"""
    out = []
    for n, f in enumerate(P.coeffs):
        numer = sum((_to_fraction(c) for _, c in f.numer.terms()), Fraction(0))
        denom = sum((_to_fraction(c) for _, c in f.denom.terms()), Fraction(0))
        if denom == 0:
            raise SeriesError(f"coefficient of x^{n} has a pole at q = 1")
        out.append(numer / denom)
    return UniSeries(out)


def pq_closed_form(N: int) -> BiSeries:
    """P_[q](x) through x^N from the radical expression"""
    if N < 1:
        raise PreconditionError(f"expansion order must be >= 1, got {N}")
    started = time.time()
    q2 = q * q
    radicand = BiSeries.polynomial([1, -2 * (q + 2), q2 + 2 * q + 4, -2 * q2, q2], N + 1)
    numerator = BiSeries.polynomial([-q, q2 + 2 * q, -(q2 + 2 * q)], N + 1) + series_sqrt(radicand).scale(q)
    denominator = BiSeries.polynomial([0, -2 * (q + 1), 2 * (q + 1)], N + 1)
    P = divide_at_valuation(numerator, denominator)
    _check_constant_free(P, "P_[q](x)")
    coefficient_polynomials(P)
    logger.debug(f"✅ Closed-form P_[q](x) through x^{N} in {time.time() - started:.2f}s")
    return P


def pq_functional_eq(N: int) -> BiSeries:
    """P_[q] = qy + q^2/((q+1)(1-x)) * u/(1-u) with u = (1 + 1/q) P_[q] y"""
    if N < 1:
        raise PreconditionError(f"expansion order must be >= 1, got {N}")
    started = time.time()
    y = [0] + [1] * N
    base = [QField.zero] + [q] * N
    P = _solve_functional(BiSeries, N, base, y, 1 + 1 / q, q * q / (q + 1))
    _check_constant_free(P, "P_[q](x)")
    coefficient_polynomials(P)
    logger.debug(f"✅ Functional-equation P_[q](x) through x^{N} in {time.time() - started:.2f}s")
    return P


EXPANSIONS: Dict[Tuple[bool, str], Callable[[int], TruncatedSeries]] = {
    (False, "closed"): p_closed_form,
    (False, "functional"): p_functional_eq,
    (True, "closed"): pq_closed_form,
    (True, "functional"): pq_functional_eq,
}


def render_q_polynomial(row: Sequence[int]) -> str:
    """Ascending powers of q: [0, 1, 1] -> 'q + q^2'"""
    terms = []
    for degree, coeff in enumerate(row):
        if coeff == 0:
            continue
        if degree == 0:
            terms.append(str(coeff))
            continue
        power = "q" if degree == 1 else f"q^{degree}"
        terms.append(power if coeff == 1 else f"{coeff} {power}")
    return " + ".join(terms) if terms else "0"


def quartic(x):
    return 1 - 6 * x + 7 * x**2 - 2 * x**3 + x**4


def quartic_smallest_root(precision: Optional[int] = None) -> mpmath.mpf:
    """Smallest positive root x0 of 1 - 6x + 7x^2 - 2x^3 + x^4, by bisection on [0, 1/2]"""
    precision = precision if precision is not None else get_cap("precision")
    if precision < 10:
        raise PreconditionError(f"precision must be at least 10 digits, got {precision}")
    with mpmath.workdps(precision + 10):
        lo, hi = mpmath.mpf(0), mpmath.mpf(1) / 2
        tolerance = mpmath.mpf(10) ** (-(precision + 5))
        while hi - lo > tolerance:
            mid = (lo + hi) / 2
            if quartic(mid) > 0:
                lo = mid
            else:
                hi = mid
        root = (lo + hi) / 2
        closed = (1 - mpmath.sqrt(8 * mpmath.sqrt(2) - 11)) / 2
        if abs(root - closed) > mpmath.mpf(10) ** (-precision):
            raise SeriesError(f"bisection root {root} disagrees with the radical form {closed}")
    logger.debug(f"🔧 x0 = {mpmath.nstr(root, 15)} at {precision} digits")
    return root


@dataclass
class AsymptoticEstimate:
    x0: mpmath.mpf
    c: mpmath.mpf
    K_estimate: mpmath.mpf
    N_used: int
    beta: float = 0.5
    samples: Dict[int, mpmath.mpf] = dataclass_field(default_factory=dict)


def _k_value(s_n: int, x0: mpmath.mpf, n: int) -> mpmath.mpf:
    return mpmath.mpf(s_n) * x0**n * mpmath.mpf(n) ** mpmath.mpf(1.5)


def K_sequence(
    N: int,
    samples: int = 8,
    precision: Optional[int] = None,
    P: Optional[UniSeries] = None,
) -> Dict[int, mpmath.mpf]:
    """Raw K_n = s(n) x0^n n^(3/2) at evenly spaced n up to N"""
    if samples < 1:
        raise PreconditionError(f"need at least one sample, got {samples}")
    precision = precision if precision is not None else get_cap("precision")
    P = P if P is not None else p_closed_form(N)
    counts = P.integers()
    x0 = quartic_smallest_root(precision)
    step = max(1, N // samples)
    with mpmath.workdps(precision + 10):
        return {n: _k_value(counts[n], x0, n) for n in range(step, N + 1, step)}


def estimate_K(N: Optional[int] = None, precision: Optional[int] = None) -> AsymptoticEstimate:
    """K from s(n) ~ K c^n n^(-3/2), extrapolated as 2 K_2m - K_m with m = N // 2"""
    N = N if N is not None else get_cap("asympt_terms")
    precision = precision if precision is not None else get_cap("precision")
    if N < 100:
        raise PreconditionError(f"asymptotic estimate needs N >= 100, got {N}")
    logger.info(f"🚀 Expanding P(x) to order {N} for the growth constant")
    P = p_closed_form(N)
    counts = P.integers()
    x0 = quartic_smallest_root(precision)
    m = N // 2
    with mpmath.workdps(precision + 10):
        k_m = _k_value(counts[m], x0, m)
        k_2m = _k_value(counts[2 * m], x0, 2 * m)
        estimate = 2 * k_2m - k_m
        c = 1 / x0
    samples = K_sequence(N, precision=precision, P=P)
    logger.info(f"✅ K ~ {mpmath.nstr(estimate, 8)} from K_{m} and K_{2 * m}")
    return AsymptoticEstimate(x0=x0, c=c, K_estimate=estimate, N_used=N, samples=samples)
