"""
Truncated Laurent expansions ("jets") about a fixed center.

A jet with pole order m and truncation order K stores c_{-m}, ..., c_K, the
coefficients of w^j with w = s - center, and stands for
sum_j c_j w^j + O(w^{K+1}).
"""

from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, Sequence, Tuple, Union

import mpmath
from mpmath import mpf

MAX_POLE_ORDER = 3
DEFAULT_ORDER = 3
RELATIVE_FLOOR = mpf("1e-30")

Scalar = Union[int, float, mpf]


class JetError(ValueError):
    """Invalid jet operation: mixed centers, pole order overflow, lost truncation order."""


class JetCenter(str, Enum):
    """
    Expansion point.

    ZERO tags expansions of f(s + 1) about s = 0; they share the coefficients
    of f about s = 1 and differ only in which variable w names.
    """
    ONE = "s=1"
    ZERO = "s=0"


@dataclass(frozen=True)
class LaurentJet:
    coeffs: Tuple[mpf, ...]
    pole_order: int = 0
    center: JetCenter = JetCenter.ONE

    def __post_init__(self):
        if not 0 <= self.pole_order <= MAX_POLE_ORDER:
            raise JetError(f"Pole order {self.pole_order} outside 0..{MAX_POLE_ORDER}")
        if len(self.coeffs) < self.pole_order + 1:
            raise JetError("Jet must retain at least the w^0 coefficient")
        # mpf(x) rounds to the ambient precision, so mpf inputs are kept as given
        object.__setattr__(self, "coeffs", tuple(c if isinstance(c, mpf) else mpf(c) for c in self.coeffs))

    # construction ---------------------------------------------------------

    @classmethod
    def from_terms(cls, terms: Dict[int, Scalar], order: int = DEFAULT_ORDER,
                   center: JetCenter = JetCenter.ONE) -> "LaurentJet":
        """Build a jet from {exponent: coefficient}; exponents above order are dropped."""
        low = min([0] + [j for j in terms if j < 0])
        coeffs = [terms.get(j, 0) for j in range(low, order + 1)]
        return cls(tuple(coeffs), -low, center)

    @classmethod
    def constant(cls, value: Scalar, order: int = DEFAULT_ORDER,
                 center: JetCenter = JetCenter.ONE) -> "LaurentJet":
        return cls.from_terms({0: value}, order, center)

    @classmethod
    def analytic(cls, taylor: Sequence[Scalar], center: JetCenter = JetCenter.ONE) -> "LaurentJet":
        return cls(tuple(taylor), 0, center)

    # accessors --------------------------------------------------------------

    @property
    def order(self) -> int:
        """Truncation order K."""
        return len(self.coeffs) - self.pole_order - 1

    def coefficient(self, j: int) -> mpf:
        if j > self.order:
            raise JetError(f"Coefficient of w^{j} is beyond truncation order {self.order}")
        if j < -self.pole_order:
            return mpf(0)
        return self.coeffs[j + self.pole_order]

    def is_analytic(self) -> bool:
        return self.normalized().pole_order == 0

    def normalized(self) -> "LaurentJet":
        """Drop exactly-zero leading coefficients, lowering the pole order."""
        m = self.pole_order
        coeffs = self.coeffs
        while m > 0 and coeffs[0] == 0:
            coeffs = coeffs[1:]
            m -= 1
        return LaurentJet(coeffs, m, self.center)

    def truncated(self, order: int) -> "LaurentJet":
        if order > self.order:
            raise JetError(f"Cannot extend truncation order {self.order} to {order}")
        return LaurentJet(self.coeffs[:self.pole_order + order + 1], self.pole_order, self.center)

    def recentered(self, center: JetCenter) -> "LaurentJet":
        return LaurentJet(self.coeffs, self.pole_order, center)

    def evaluate(self, w) -> mpf:
        """Sum of the retained terms at w (w != 0 when a pole is present)."""
        return mpmath.fsum(c * mpmath.power(w, j - self.pole_order)
                           for j, c in enumerate(self.coeffs))

    # arithmetic -------------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, LaurentJet):
            return jet_add(self, other)
        return jet_add(self, LaurentJet.constant(other, self.order, self.center))

    __radd__ = __add__

    def __neg__(self):
        return jet_scale(self, -1)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        return jet_mul(self, other)

    __rmul__ = __mul__


def _check_center(a: LaurentJet, b: LaurentJet) -> None:
    if a.center != b.center:
        raise JetError(f"Cannot combine jets about {a.center.value} and {b.center.value}")


def jet_add(a: LaurentJet, b: LaurentJet) -> LaurentJet:
    _check_center(a, b)
    m = max(a.pole_order, b.pole_order)
    order = min(a.order, b.order)
    coeffs = [a.coefficient(j) + b.coefficient(j) for j in range(-m, order + 1)]
    return LaurentJet(tuple(coeffs), m, a.center)


def jet_scale(a: LaurentJet, c: Scalar) -> LaurentJet:
    c = mpf(c)
    return LaurentJet(tuple(c * x for x in a.coeffs), a.pole_order, a.center)


def jet_mul(a: LaurentJet, b: Union[LaurentJet, Scalar]) -> LaurentJet:
    """
    Product of two jets.

    The result keeps the terms determined by the inputs: with a known to
    O(w^{Ka+1}) and b carrying a pole of order mb, the product is known to
    O(w^{Ka-mb+1}), so K = min(Ka - mb, Kb - ma).
    """
    if not isinstance(b, LaurentJet):
        return jet_scale(a, b)
    _check_center(a, b)
    m = a.pole_order + b.pole_order
    if m > MAX_POLE_ORDER:
        raise JetError(f"Product pole order {m} exceeds {MAX_POLE_ORDER}")
    order = min(a.order - b.pole_order, b.order - a.pole_order)
    if order < 0:
        raise JetError("Product would not determine the w^0 coefficient")
    coeffs = []
    for j in range(-m, order + 1):
        terms = []
        for i in range(-a.pole_order, j + b.pole_order + 1):
            if i > a.order:
                break
            terms.append(a.coefficient(i) * b.coefficient(j - i))
        coeffs.append(mpmath.fsum(terms))
    return LaurentJet(tuple(coeffs), m, a.center)


def jet_product(jets: Iterable[LaurentJet], order: int = DEFAULT_ORDER,
                center: JetCenter = JetCenter.ONE) -> LaurentJet:
    result = LaurentJet.constant(1, order, center)
    for j in jets:
        result = jet_mul(result, j)
    return result


def jet_sum(jets: Iterable[LaurentJet], order: int = DEFAULT_ORDER,
            center: JetCenter = JetCenter.ONE) -> LaurentJet:
    """Sum of analytic or polar jets, accumulating each coefficient with fsum."""
    jets = list(jets)
    if not jets:
        return LaurentJet.constant(0, order, center)
    for j in jets:
        _check_center(jets[0], j)
    m = max(j.pole_order for j in jets)
    order = min(j.order for j in jets)
    coeffs = [mpmath.fsum(j.coefficient(i) for j in jets) for i in range(-m, order + 1)]
    return LaurentJet(tuple(coeffs), m, jets[0].center)


def exp_linear_jet(L, center: JetCenter = JetCenter.ONE, order: int = DEFAULT_ORDER) -> LaurentJet:
    """Jet of exp(L * w): coefficients L^j / j!."""
    L = mpf(L)
    coeffs = []
    term = mpf(1)
    for j in range(order + 1):
        coeffs.append(term)
        term = term * L / (j + 1)
    return LaurentJet(tuple(coeffs), 0, center)


def power_jet(base: int, sign: int = 1, center: JetCenter = JetCenter.ONE,
              order: int = DEFAULT_ORDER) -> LaurentJet:
    """Jet of base^{sign * s} expanded at s = 1 + w: base^sign * exp(sign * w * log base)."""
    if base < 1:
        raise ValueError(f"power_jet requires a positive base, got {base}")
    if base == 1:
        return LaurentJet.constant(1, order, center)
    scale = mpf(base) if sign > 0 else 1 / mpf(base)
    return jet_scale(exp_linear_jet(sign * mpmath.log(base), center, order), scale)


def geometric_jet(center: JetCenter = JetCenter.ONE, order: int = DEFAULT_ORDER) -> LaurentJet:
    """Jet of 1/s = 1/(1 + w)."""
    return LaurentJet(tuple((-1) ** j for j in range(order + 1)), 0, center)


def residue_of(jet: LaurentJet) -> mpf:
    """Coefficient of w^{-1}."""
    return jet.coefficient(-1)


def coefficientwise_deviation(pairs: Iterable[Tuple[mpf, mpf]]) -> mpf:
    """
    max |x - y| / max(|x|, |y|) over coefficient pairs.

    Pairs smaller than RELATIVE_FLOOR times the largest coefficient are
    rounding noise at any supported precision; they are measured against
    the largest coefficient instead of themselves.
    """
    pairs = list(pairs)
    scale = max((max(abs(x), abs(y)) for x, y in pairs), default=mpf(0))
    if not scale:
        return mpf(0)
    floor = scale * RELATIVE_FLOOR
    worst = mpf(0)
    for x, y in pairs:
        size = max(abs(x), abs(y))
        worst = max(worst, abs(x - y) / (size if size >= floor else scale))
    return worst
