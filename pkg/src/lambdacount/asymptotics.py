"""Floating-point asymptotics for BCI(p) and closed terms.

Everything with factorial growth is evaluated in log space; exact counts are
converted through :func:`lambdacount.exactnum.log_int`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from scipy.integrate import quad

from .exactnum import log_int
from .sequences import catalan, closed_list, linearized_list, phi_list, q_poly

# ------------------------------------------------------------- linearized part


def beta(p: int) -> float:
    return (4 * p + 2) ** p / math.factorial(p)


def gamma_exp(p: int) -> float:
    return p * (p - 2) / (2 * p + 1)


def compute_Bp(p: int) -> float:
    """``C_{p-1} prod_{k=1..p} 1/Gamma(1 + (2(p-k)-1)/(2p+1))``."""
    if p < 1:
        raise ValueError("p must be >= 1")
    s = sum(math.lgamma(1 + (2 * (p - k) - 1) / (2 * p + 1)) for k in range(1, p + 1))
    return catalan(p - 1) * math.exp(-s)


def eml_base_constant() -> float:
    """``exp(-int_1^2 log Gamma(x) dx)`` by adaptive quadrature."""
    val, _ = quad(math.lgamma, 1.0, 2.0, epsabs=1e-15, epsrel=1e-14)
    return math.exp(-val)


def compute_Bp_eml(p: int) -> float:
    """Euler-Maclaurin form ``C_{p-1} * base^((2p+1)/2)``; accurate to a factor ``1 + O(1/p)``."""
    if p < 1:
        raise ValueError("p must be >= 1")
    return catalan(p - 1) * eml_base_constant() ** ((2 * p + 1) / 2)


def log_linear_shape(p: int, j: int) -> float:
    """``log(beta^(j-1) j^gamma (j-1)!^p)``."""
    return (j - 1) * math.log(beta(p)) + gamma_exp(p) * math.log(j) + p * math.lgamma(j)


def linearized_ratio(p: int, j: int) -> float:
    """``l_{p,j} / (B_p beta^(j-1) j^gamma (j-1)!^p)``; tends to 1."""
    lin = linearized_list(p, j)[j]
    return math.exp(log_int(lin) - math.log(compute_Bp(p)) - log_linear_shape(p, j))


# ------------------------------------------------------------------ a_p


@dataclass(frozen=True)
class ApReport:
    p: int
    n_terms: int
    partial: float  # K_p(n_terms) from exact values
    tail: float  # estimated log of the remaining factors
    value: float  # partial * exp(tail)
    last_step: float  # relative change of the last exact factor

    def __float__(self) -> float:
        return self.value


def _q_float(p: int, j: float) -> float:
    """``Q_p(j) = 4^p binom(((2p+1)j + 2p - 3)/2, p)`` in floating point."""
    top = ((2 * p + 1) * j + 2 * p - 3) / 2
    acc = 4.0**p
    for i in range(p):
        acc *= (top - i) / (i + 1)
    return acc


@lru_cache(maxsize=None)
def compute_ap(p: int, n_terms: int = 500, tail: bool = True) -> ApReport:
    """Estimate ``a_p = lim phi_n / l_{p,n}`` (indices counting unary nodes).

    ``K_p(n) = prod_{j<n} (1 + Gamma_j / Q_p(j))`` with
    ``Gamma_j = (phi_{j+1} - Q_p(j) phi_j) / phi_j``, the binary-split mass,
    taken from exact values.  For ``j >= n_terms`` the factors are estimated
    from the two leading split terms ``Gamma_j ~ 2 phi_1 + 2 phi_2 / Q_p(j-1)``,
    summed to ``100 n_terms`` with an integral remainder beyond.  The tail
    matters for ``p = 2`` where ``K_p`` converges like ``1/n``.
    """
    if p < 2:
        raise ValueError("a_p is defined for p >= 2")
    if n_terms < 3:
        raise ValueError("n_terms must be >= 3")
    phi = phi_list(p, n_terms)
    if len(phi) <= n_terms:  # pragma: no cover - phi_list always extends
        raise ValueError("phi table too short")
    log_k = 0.0
    step = 0.0
    for j in range(1, n_terms):
        split = phi[j + 1] - q_poly(p, j) * phi[j]
        step = math.exp(log_int(split) - log_int(phi[j]) - log_int(q_poly(p, j))) if split else 0.0
        log_k += math.log1p(step)
    log_tail = 0.0
    if tail:
        f1, f2 = float(phi[1]), float(phi[2])
        stop = 100 * n_terms
        for j in range(n_terms, stop):
            q = _q_float(p, j)
            log_tail += math.log1p((2 * f1 + 2 * f2 / _q_float(p, j - 1)) / q)
        log_tail += 2 * f1 / (beta(p) * (p - 1) * (stop - 0.5) ** (p - 1))
    partial = math.exp(log_k)
    return ApReport(p, n_terms, partial, log_tail, partial * math.exp(log_tail), step)


# --------------------------------------------------------------- constants


@dataclass(frozen=True)
class BciConstants:
    p: int
    beta_p: float
    gamma_p: float
    B_p: float
    a_p: float
    A_p: float
    bar_beta_p: float
    bar_gamma_p: float
    bar_A_p: float

    @classmethod
    def compute(cls, p: int, n_terms: int = 500) -> "BciConstants":
        b, g, B = beta(p), gamma_exp(p), compute_Bp(p)
        a = compute_ap(p, n_terms).value
        A = a * B
        return cls(
            p=p,
            beta_p=b,
            gamma_p=g,
            B_p=B,
            a_p=a,
            A_p=A,
            bar_beta_p=b / math.e**p,
            bar_gamma_p=-5 * p / (4 * p + 2),
            bar_A_p=(2 * math.pi / math.e**2) ** (p / 2) * A,
        )


def bci_estimate(p: int, j: int, A: Optional[float] = None) -> float:
    """Log of ``A_p beta^(j-1) j^gamma (j-1)!^p``, the estimate for BCI(p) terms
    with ``j`` unary nodes (size ``(2p+1)j - 1``)."""
    if p < 2:
        raise ValueError("the BCI(p) estimate needs p >= 2")
    if j < 1:
        raise ValueError("j must be >= 1")
    if A is None:
        A = compute_Bp(p) * compute_ap(p).value
    return math.log(A) + log_linear_shape(p, j)


def bci_ratio(p: int, j: int, A: Optional[float] = None) -> float:
    """Exact count divided by the estimate."""
    phi = phi_list(p, j)[j]
    return math.exp(log_int(phi) - bci_estimate(p, j, A))


def bci1_growth(n: int) -> float:
    """``(n/3) log(2n/e) - (1/6) log n`` for BCI(1) sizes ``n = 2 mod 3``."""
    if n < 2 or n % 3 != 2:
        raise ValueError(f"BCI(1) has no terms of size {n}; sizes are 2 mod 3")
    return (n / 3) * math.log(2 * n / math.e) - math.log(n) / 6


@dataclass(frozen=True)
class Bci1Fit:
    """Ratios ``g_n / exp(bci1_growth(n))``; the constant is a fit, not a theorem."""

    sizes: list
    ratios: list

    @property
    def fitted_constant(self) -> float:
        return self.ratios[-1]

    def change_over(self, lo_size: int) -> float:
        """Relative change of the ratio between the first support point >= lo_size and the last."""
        for s, r in zip(self.sizes, self.ratios):
            if s >= lo_size:
                return abs(self.ratios[-1] / r - 1)
        raise ValueError("lo_size beyond the fitted range")

    def last_decade_change(self) -> float:
        return self.change_over(self.sizes[-1] // 10)


def bci1_fit(max_size: int) -> Bci1Fit:
    j_max = (max_size + 1) // 3
    if j_max < 1:
        raise ValueError("max_size must be >= 2")
    phi = phi_list(1, j_max)
    sizes, ratios = [], []
    for j in range(1, j_max + 1):
        n = 3 * j - 1
        sizes.append(n)
        ratios.append(math.exp(log_int(phi[j]) - bci1_growth(n)))
    return Bci1Fit(sizes, ratios)


# --------------------------------------------------------- closed-term bounds


@dataclass(frozen=True)
class BoundReport:
    """Exact ``log lambda_n`` next to the two exponents (additive constants omitted)."""

    n: int
    log_lambda: float
    lower_exponent: float
    upper_exponent: float
    epsilon: float

    @property
    def normalized(self) -> float:
        """``(2/n) log lambda_n - log(n / log n)``."""
        return 2 * self.log_lambda / self.n - math.log(self.n / math.log(self.n))

    @staticmethod
    def corridor(slack: float = 0.5) -> tuple[float, float]:
        return math.log(4) - 1 - slack, math.log(9) - 1 + slack

    def in_corridor(self, slack: float = 0.5) -> bool:
        lo, hi = self.corridor(slack)
        return lo <= self.normalized <= hi

    def gap_to_lower(self, slack: float = 0.5) -> float:
        return self.normalized - self.corridor(slack)[0]


def lower_exponent(n: int) -> float:
    ln = math.log(n)
    return (n / 2) * math.log(4 * n / (math.e * ln)) + math.log(math.sqrt(ln) / n)


def upper_exponent(n: int, epsilon: float) -> float:
    ln = math.log(n)
    return (
        (n / 2) * math.log(9 * (1 + epsilon) * n / (math.e * ln))
        + (n / (2 * ln)) * math.log(ln)
        - 1.5 * ln
    )


def lambda_bounds(n: int, epsilon: float = 0.1, lam: Optional[int] = None) -> BoundReport:
    if n < 3:
        raise ValueError("bounds need n >= 3")
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if lam is None:
        lam = closed_list(n)[n]
    return BoundReport(n, log_int(lam), lower_exponent(n), upper_exponent(n, epsilon), epsilon)


def lambda_bound_table(n_lo: int, n_hi: int, epsilon: float = 0.1) -> list[BoundReport]:
    lam = closed_list(n_hi)
    return [lambda_bounds(n, epsilon, lam[n]) for n in range(max(n_lo, 3), n_hi + 1)]


# ----------------------------------------------------------------- Lambert W


def lambert_w(x: float) -> float:
    """Principal branch of ``W`` on ``x >= 0`` by Halley iteration."""
    if x < 0:
        raise ValueError("lambert_w is implemented for x >= 0")
    if x == 0:
        return 0.0
    w = math.log1p(x) if x < math.e else math.log(x) - math.log(math.log(x))
    for _ in range(100):
        ew = math.exp(w)
        f = w * ew - x
        fp = ew * (w + 1)
        new = w - f / (fp - (w + 2) * f / (2 * w + 2))
        if abs(new - w) <= 1e-15 * max(1.0, abs(new)):
            return new
        w = new
    return w


def lambert_expansion(n: float) -> float:
    """``log n - log log n + 1``, the leading terms of ``W(e n)``."""
    return math.log(n) - math.log(math.log(n)) + 1


def n_u_bracket(n: float) -> tuple[float, float, float]:
    """``(n/log n, n/W(en), n/(log n - log log n))``; the middle lies between the ends."""
    ln = math.log(n)
    return n / ln, n / lambert_w(math.e * n), n / (ln - math.log(ln))
