"""
Polynomials in log(x/q).

Residues of (polar jet) * exp(w log(x/q)) are polynomials in log(x/q) of
degree one less than the pole order; this module carries them around and
integrates them in closed form.
"""

from dataclasses import dataclass
from math import comb, factorial
from typing import Tuple

import mpmath
from mpmath import mpf

from .laurent import LaurentJet, coefficientwise_deviation

MAX_DEGREE = 4


@dataclass(frozen=True)
class LogPolynomial:
    """
    sum_j coeffs[j] * log(x/q)^j.

    Attributes:
        q: Positive integer scale
        coeffs: b_0, ..., b_deg (deg <= 4)
    """

    q: int
    coeffs: Tuple[mpf, ...]

    def __post_init__(self):
        if self.q < 1:
            raise ValueError(f"LogPolynomial scale must be positive, got {self.q}")
        if not 1 <= len(self.coeffs) <= MAX_DEGREE + 1:
            raise ValueError(f"LogPolynomial degree must lie in 0..{MAX_DEGREE}")
        object.__setattr__(self, "coeffs",
                           tuple(c if isinstance(c, mpf) else mpf(c) for c in self.coeffs))

    @classmethod
    def from_residue(cls, jet: LaurentJet, q: int) -> "LogPolynomial":
        """
        Res_{w=0} jet(w) * exp(w L) as a polynomial in L: b_j = c_{-1-j} / j!.
        """
        m = max(jet.pole_order, 1)
        return cls(q, tuple(jet.coefficient(-1 - j) / factorial(j) for j in range(m)))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coefficient(self, j: int) -> mpf:
        return self.coeffs[j] if j < len(self.coeffs) else mpf(0)

    def evaluate_log(self, L) -> mpf:
        result = mpf(0)
        for c in reversed(self.coeffs):
            result = result * L + c
        return result

    def evaluate(self, x) -> mpf:
        """Value at x > 0."""
        return self.evaluate_log(mpmath.log(mpf(x) / self.q))

    __call__ = evaluate

    def square(self) -> "LogPolynomial":
        n = len(self.coeffs)
        if 2 * (n - 1) > MAX_DEGREE:
            raise ValueError(f"Squaring degree {n - 1} exceeds degree {MAX_DEGREE}")
        out = [mpmath.fsum(self.coefficient(i) * self.coefficient(j - i) for i in range(j + 1))
               for j in range(2 * n - 1)]
        return LogPolynomial(self.q, tuple(out))

    def shift(self, c) -> "LogPolynomial":
        """The polynomial L -> self(L + c), same scale."""
        c = mpf(c)
        n = len(self.coeffs)
        out = [mpmath.fsum(self.coeffs[j] * comb(j, i) * c ** (j - i) for j in range(i, n))
               for i in range(n)]
        return LogPolynomial(self.q, tuple(out))

    def rescale(self, q: int) -> "LogPolynomial":
        """Same function of x, re-expanded in log(x/q)."""
        if q == self.q:
            return self
        shifted = self.shift(mpmath.log(mpf(q) / self.q))
        return LogPolynomial(q, shifted.coeffs)

    def scaled(self, factor) -> "LogPolynomial":
        factor = mpf(factor)
        return LogPolynomial(self.q, tuple(factor * c for c in self.coeffs))

    def __add__(self, other: "LogPolynomial") -> "LogPolynomial":
        if other.q != self.q:
            other = other.rescale(self.q)
        n = max(len(self.coeffs), len(other.coeffs))
        return LogPolynomial(self.q, tuple(self.coefficient(j) + other.coefficient(j)
                                           for j in range(n)))

    def integrate(self, a, b) -> mpf:
        """
        Closed-form integral over [a, b] in x.

        With u = x/q, the integral of (log u)^k dx is
        q * u * sum_{i<=k} (-1)^{k-i} k!/i! (log u)^i.
        """
        a, b = mpf(a), mpf(b)
        if a <= 0 or b <= 0:
            raise ValueError("Integration limits must be positive")
        return self._antiderivative(b) - self._antiderivative(a)

    def _antiderivative(self, x) -> mpf:
        u = x / self.q
        log_u = mpmath.log(u)
        terms = []
        for k, bk in enumerate(self.coeffs):
            inner = mpmath.fsum((-1) ** (k - i) * mpf(factorial(k)) / factorial(i) * log_u ** i
                                for i in range(k + 1))
            terms.append(bk * inner)
        return self.q * u * mpmath.fsum(terms)

    def max_abs_on(self, a, b) -> mpf:
        """max |P(x)| for x in [a, b], from the endpoints and interior critical points."""
        lo, hi = mpmath.log(mpf(a) / self.q), mpmath.log(mpf(b) / self.q)
        candidates = [lo, hi]
        derivative = [j * self.coeffs[j] for j in range(1, len(self.coeffs))]
        while derivative and derivative[-1] == 0:
            derivative.pop()
        if len(derivative) >= 2:
            for root in mpmath.polyroots(list(reversed(derivative))):
                if abs(mpmath.im(root)) < mpf(10) ** (-mpmath.mp.dps // 2):
                    r = mpmath.re(root)
                    if lo <= r <= hi:
                        candidates.append(r)
        return max(abs(self.evaluate_log(L)) for L in candidates)

    def max_relative_deviation(self, other: "LogPolynomial") -> mpf:
        """Coefficient-wise relative deviation from other, at a common scale."""
        if other.q != self.q:
            other = other.rescale(self.q)
        n = max(len(self.coeffs), len(other.coeffs))
        pairs = ((self.coefficient(j), other.coefficient(j)) for j in range(n))
        return coefficientwise_deviation(pairs)
