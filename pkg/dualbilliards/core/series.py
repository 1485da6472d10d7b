"""Power series in the expansion parameter mu, truncated at a fixed order."""

from fractions import Fraction

from dualbilliards.core.exactpoly import MultiPoly, PCoeff

DEFAULT_ORDER = 3


class TruncatedSeries:
    """c_0 + c_1*mu + ... + c_order*mu^order with MultiPoly coefficients."""

    __slots__ = ("coefficients", "order", "variables")

    def __init__(self, coefficients, order=DEFAULT_ORDER, variables=None):
        coefficients = list(coefficients)
        if variables is None:
            if not coefficients:
                raise ValueError("variables are required for an empty series")
            variables = coefficients[0].variables
        variables = tuple(variables)
        for c in coefficients:
            if c.variables != variables:
                raise ValueError(f"series coefficient over {c.variables}, expected {variables}")
        coefficients = coefficients[: order + 1]
        coefficients += [MultiPoly.zero(variables)] * (order + 1 - len(coefficients))
        self.coefficients = tuple(coefficients)
        self.order = order
        self.variables = variables

    @classmethod
    def constant(cls, poly, order=DEFAULT_ORDER):
        return cls([poly], order, poly.variables)

    @classmethod
    def geometric(cls, C, order=DEFAULT_ORDER):
        """1 / (1 - mu*C) expanded as sum (mu*C)^j."""
        coefficients = [MultiPoly.constant(1, C.variables)]
        for _ in range(order):
            coefficients.append(coefficients[-1] * C)
        return cls(coefficients, order, C.variables)

    @classmethod
    def binomial(cls, C, exponent, order=DEFAULT_ORDER):
        """(1 + mu*C)^exponent for a rational or formal (PCoeff) exponent."""
        if not isinstance(exponent, PCoeff):
            exponent = Fraction(exponent)
        coefficients = []
        weight = Fraction(1)
        power = MultiPoly.constant(1, C.variables)
        for j in range(order + 1):
            coefficients.append(power * weight)
            weight = weight * (exponent - j) / (j + 1)
            power = power * C
        return cls(coefficients, order, C.variables)

    def coefficient(self, j):
        return self.coefficients[j]

    def _check(self, other):
        if other.order != self.order:
            raise ValueError(
                f"truncation order mismatch: {self.order} vs {other.order}"
            )
        if other.variables != self.variables:
            raise ValueError(f"arity mismatch: {self.variables} vs {other.variables}")

    def __add__(self, other):
        self._check(other)
        return TruncatedSeries(
            [a + b for a, b in zip(self.coefficients, other.coefficients)],
            self.order,
            self.variables,
        )

    def __neg__(self):
        return TruncatedSeries([-c for c in self.coefficients], self.order, self.variables)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            self._check(other)
            out = [MultiPoly.zero(self.variables)] * (self.order + 1)
            for i, a in enumerate(self.coefficients):
                if a.is_zero():
                    continue
                for j in range(self.order + 1 - i):
                    b = other.coefficients[j]
                    if not b.is_zero():
                        out[i + j] = out[i + j] + a * b
            return TruncatedSeries(out, self.order, self.variables)
        return TruncatedSeries(
            [c * other for c in self.coefficients], self.order, self.variables
        )

    __rmul__ = __mul__

    def __pow__(self, n):
        result = TruncatedSeries.constant(MultiPoly.constant(1, self.variables), self.order)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.order == other.order and self.coefficients == other.coefficients

    __hash__ = None

    def reflect(self):
        """mu -> -mu."""
        return TruncatedSeries(
            [c if j % 2 == 0 else -c for j, c in enumerate(self.coefficients)],
            self.order,
            self.variables,
        )

    def truncate(self, order):
        if order > self.order:
            raise ValueError(f"cannot raise truncation order {self.order} to {order}")
        return TruncatedSeries(self.coefficients[: order + 1], order, self.variables)

    def __repr__(self):
        return f"TruncatedSeries([{', '.join(str(c) for c in self.coefficients)}])"


def compose_series(g, arg_x, arg_y, prefactor):
    """prefactor * g(arg_x, arg_y) as a truncated mu-series."""
    arg_x._check(arg_y)
    arg_x._check(prefactor)
    if len(g.variables) != 2:
        raise ValueError(f"g must be bivariate, got {g.variables}")
    one = TruncatedSeries.constant(MultiPoly.constant(1, arg_x.variables), arg_x.order)
    powers_x, powers_y = [one], [one]
    total = TruncatedSeries([], arg_x.order, arg_x.variables)
    for (a, b), coeff in sorted(g.terms.items()):
        while len(powers_x) <= a:
            powers_x.append(powers_x[-1] * arg_x)
        while len(powers_y) <= b:
            powers_y.append(powers_y[-1] * arg_y)
        total = total + (powers_x[a] * powers_y[b]) * coeff
    return prefactor * total
