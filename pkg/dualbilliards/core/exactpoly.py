"""
Exact sparse multivariate polynomials.

Coefficients are ``fractions.Fraction`` or, when the formal parameter p is in play,
``PCoeff`` (a dense polynomial in p over Q). Monomial order is graded lexicographic
with the variable tuple giving the priority (x > y > z).
"""

import heapq
from fractions import Fraction

XYZ = ("x", "y", "z")
XY = ("x", "y")
DEGREE_OF_ZERO = float("-inf")


class PCoeff:
    """Dense polynomial in the formal parameter p, lowest power first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        coeffs = [Fraction(c) for c in coeffs]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        self.coeffs = tuple(coeffs)

    @classmethod
    def p(cls):
        return cls((0, 1))

    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else DEGREE_OF_ZERO

    def is_constant(self):
        return len(self.coeffs) <= 1

    def constant(self):
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def leading(self):
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __call__(self, value):
        result = Fraction(0)
        for c in reversed(self.coeffs):
            result = result * value + c
        return result

    def __bool__(self):
        return bool(self.coeffs)

    def __neg__(self):
        return PCoeff(-c for c in self.coeffs)

    def __add__(self, other):
        other = _lift(other)
        if other is NotImplemented:
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return PCoeff(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __sub__(self, other):
        other = _lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _lift(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, PCoeff):
            if not self.coeffs or not other.coeffs:
                return PCoeff()
            out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, a in enumerate(self.coeffs):
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
            return PCoeff(out)
        if isinstance(other, (int, Fraction)):
            return PCoeff(c * other for c in self.coeffs)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, PCoeff):
            if not other.is_constant():
                raise ValueError("division by a non-constant polynomial in p")
            other = other.constant()
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division of a p-coefficient by zero")
            return PCoeff(c / other for c in self.coeffs)
        return NotImplemented

    def __eq__(self, other):
        other = _lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        if self.is_constant():
            return hash(self.constant())
        return hash(self.coeffs)

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for power in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[power]
            if c == 0:
                continue
            mono = "" if power == 0 else ("p" if power == 1 else f"p^{power}")
            parts.append(_signed_term(c, mono))
        return _join_terms(parts)

    def __repr__(self):
        return f"PCoeff({[str(c) for c in self.coeffs]})"


def _lift(value):
    if isinstance(value, PCoeff):
        return value
    if isinstance(value, (int, Fraction)):
        return PCoeff((value,))
    return NotImplemented


def _coerce(coeff):
    if isinstance(coeff, PCoeff):
        return coeff.constant() if coeff.is_constant() else coeff
    if isinstance(coeff, (int, Fraction, str)) and not isinstance(coeff, bool):
        return Fraction(coeff)
    raise TypeError(f"unsupported coefficient type {type(coeff).__name__}")


def _signed_term(coeff, mono):
    """Returns (sign, body) for one rendered term."""
    negative = coeff < 0
    magnitude = -coeff if negative else coeff
    if mono and magnitude == 1:
        body = mono
    elif mono:
        body = f"{magnitude}*{mono}"
    else:
        body = str(magnitude)
    return negative, body


def _join_terms(parts):
    text = ""
    for i, (negative, body) in enumerate(parts):
        if i == 0:
            text = f"-{body}" if negative else body
        else:
            text += f" - {body}" if negative else f" + {body}"
    return text


def grlex_key(exps):
    return (sum(exps), exps)


class MultiPoly:
    """Immutable sparse polynomial: ``terms`` maps exponent tuples to nonzero coefficients."""

    __slots__ = ("variables", "terms")

    def __init__(self, variables, terms=None):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise ValueError(f"duplicate variables in {variables}")
        clean = {}
        for exps, coeff in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != len(variables):
                raise ValueError(
                    f"exponent vector {exps} does not match variables {variables}"
                )
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            coeff = _coerce(coeff)
            if coeff:
                clean[exps] = coeff
        self.variables = variables
        self.terms = clean

    @classmethod
    def _raw(cls, variables, terms):
        poly = cls.__new__(cls)
        poly.variables = variables
        clean = {}
        for exps, coeff in terms.items():
            if isinstance(coeff, PCoeff) and coeff.is_constant():
                coeff = coeff.constant()
            if coeff:
                clean[exps] = coeff
        poly.terms = clean
        return poly

    # --- constructors -------------------------------------------------

    @classmethod
    def zero(cls, variables=XYZ):
        return cls._raw(tuple(variables), {})

    @classmethod
    def constant(cls, value, variables=XYZ):
        variables = tuple(variables)
        return cls(variables, {(0,) * len(variables): value})

    @classmethod
    def var(cls, name, variables=XYZ):
        variables = tuple(variables)
        if name not in variables:
            raise ValueError(f"unknown variable {name!r} for {variables}")
        exps = tuple(1 if v == name else 0 for v in variables)
        return cls._raw(variables, {exps: Fraction(1)})

    # --- inspection ---------------------------------------------------

    def index(self, var):
        try:
            return self.variables.index(var)
        except ValueError:
            raise ValueError(f"unknown variable {var!r} for {self.variables}") from None

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(not any(e) for e in self.terms)

    def constant_value(self):
        return self.terms.get((0,) * len(self.variables), Fraction(0))

    def has_formal_p(self):
        return any(isinstance(c, PCoeff) for c in self.terms.values())

    def degree(self):
        if not self.terms:
            return DEGREE_OF_ZERO
        return max(sum(e) for e in self.terms)

    def degree_in(self, var):
        i = self.index(var)
        if not self.terms:
            return DEGREE_OF_ZERO
        return max(e[i] for e in self.terms)

    def is_homogeneous(self):
        return len({sum(e) for e in self.terms}) <= 1

    def leading_term(self):
        if not self.terms:
            raise ValueError("the zero polynomial has no leading term")
        exps = max(self.terms, key=grlex_key)
        return exps, self.terms[exps]

    def max_abs_coefficient(self):
        if self.has_formal_p():
            raise ValueError("coefficient size needs a numeric p")
        return max((abs(float(c)) for c in self.terms.values()), default=0.0)

    # --- arithmetic ---------------------------------------------------

    def _check_same(self, other):
        if self.variables != other.variables:
            raise ValueError(
                f"arity mismatch: {self.variables} vs {other.variables}"
            )

    def _promote(self, other):
        if isinstance(other, MultiPoly):
            self._check_same(other)
            return other
        if isinstance(other, (int, Fraction, PCoeff)):
            return MultiPoly.constant(other, self.variables)
        return NotImplemented

    def __add__(self, other):
        other = self._promote(other)
        if other is NotImplemented:
            return NotImplemented
        terms = dict(self.terms)
        for exps, coeff in other.terms.items():
            terms[exps] = terms.get(exps, 0) + coeff
        return MultiPoly._raw(self.variables, terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._promote(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._promote(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, PCoeff)):
            return MultiPoly._raw(
                self.variables, {e: c * other for e, c in self.terms.items()}
            )
        other = self._promote(other)
        if other is NotImplemented:
            return NotImplemented
        terms = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                exps = tuple(a + b for a, b in zip(ea, eb))
                terms[exps] = terms.get(exps, 0) + ca * cb
        return MultiPoly._raw(self.variables, terms)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError(f"exponent must be a nonnegative integer, got {n!r}")
        result = MultiPoly.constant(1, self.variables)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, PCoeff)):
            other = MultiPoly.constant(other, self.variables)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.variables == other.variables and self.terms == other.terms

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    # --- calculus and substitution ------------------------------------

    def diff(self, var):
        i = self.index(var)
        terms = {}
        for exps, coeff in self.terms.items():
            if exps[i]:
                lowered = exps[:i] + (exps[i] - 1,) + exps[i + 1 :]
                terms[lowered] = coeff * exps[i]
        return MultiPoly._raw(self.variables, terms)

    def coefficients_in(self, var):
        """Returns {power: coefficient polynomial} with respect to ``var``."""
        i = self.index(var)
        buckets = {}
        for exps, coeff in self.terms.items():
            stripped = exps[:i] + (0,) + exps[i + 1 :]
            buckets.setdefault(exps[i], {})[stripped] = coeff
        return {k: MultiPoly._raw(self.variables, t) for k, t in buckets.items()}

    def specialize(self, assignments):
        """Substitutes exact scalars for some variables and drops them."""
        for var in assignments:
            self.index(var)
        keep = [i for i, v in enumerate(self.variables) if v not in assignments]
        values = [
            (i, Fraction(assignments[v]))
            for i, v in enumerate(self.variables)
            if v in assignments
        ]
        terms = {}
        for exps, coeff in self.terms.items():
            for i, value in values:
                coeff = coeff * value ** exps[i]
            reduced = tuple(exps[i] for i in keep)
            terms[reduced] = terms.get(reduced, 0) + coeff
        return MultiPoly._raw(tuple(self.variables[i] for i in keep), terms)

    def with_variables(self, variables):
        """Re-expresses the polynomial over a superset (or reordering) of its variables."""
        variables = tuple(variables)
        missing = [v for v in self.variables if v not in variables]
        if missing and any(
            e[self.index(v)] for e in self.terms for v in missing
        ):
            raise ValueError(f"variables {missing} still occur in {self}")
        positions = [
            self.variables.index(v) if v in self.variables else None for v in variables
        ]
        terms = {}
        for exps, coeff in self.terms.items():
            new = tuple(exps[i] if i is not None else 0 for i in positions)
            terms[new] = coeff
        return MultiPoly._raw(variables, terms)

    def compose(self, images):
        """Substitutes ``images[i]`` (polynomials sharing one variable tuple) for variable i."""
        images = list(images)
        if len(images) != len(self.variables):
            raise ValueError(
                f"need {len(self.variables)} images, got {len(images)}"
            )
        target = images[0].variables
        for image in images:
            if image.variables != target:
                raise ValueError("all images must share one variable tuple")
        powers = [[MultiPoly.constant(1, target)] for _ in images]
        result = MultiPoly.zero(target)
        for exps, coeff in self.terms.items():
            term = MultiPoly.constant(coeff, target)
            for i, e in enumerate(exps):
                while len(powers[i]) <= e:
                    powers[i].append(powers[i][-1] * images[i])
                if e:
                    term = term * powers[i][e]
            result = result + term
        return result

    def eval_p(self, value):
        """Fixes the formal parameter p at an exact value."""
        value = Fraction(value)
        terms = {
            e: (c(value) if isinstance(c, PCoeff) else c) for e, c in self.terms.items()
        }
        return MultiPoly._raw(self.variables, terms)

    def evaluate(self, values, p=None):
        """Evaluates at numeric (float/complex/Fraction) values, in variable order."""
        values = list(values)
        if len(values) != len(self.variables):
            raise ValueError(f"need {len(self.variables)} values, got {len(values)}")
        total = 0
        for exps, coeff in self.terms.items():
            if isinstance(coeff, PCoeff):
                if p is None:
                    raise ValueError("polynomial carries the formal parameter p")
                coeff = coeff(Fraction(p))
            if isinstance(values[0], Fraction):
                term = coeff
            else:
                term = float(coeff)
            for v, e in zip(values, exps):
                if e:
                    term = term * v**e
            total = total + term
        return total

    # --- rendering ----------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for exps in sorted(self.terms, key=grlex_key, reverse=True):
            coeff = self.terms[exps]
            mono = "*".join(
                v if e == 1 else f"{v}^{e}"
                for v, e in zip(self.variables, exps)
                if e
            )
            if isinstance(coeff, PCoeff):
                body = f"({coeff})*{mono}" if mono else f"({coeff})"
                parts.append((False, body))
            else:
                parts.append(_signed_term(coeff, mono))
        return _join_terms(parts)

    def __repr__(self):
        return f"MultiPoly({self.variables}, {str(self)!r})"


# --- module-level operations ----------------------------------------------


def add(a, b):
    a._check_same(b)
    return a + b


def mul(a, b):
    a._check_same(b)
    return a * b


def diff(a, var):
    return a.diff(var)


def dehomogenize(F):
    """f(x, y) = F(x, y, 1)."""
    if F.variables != XYZ:
        raise ValueError(f"expected a polynomial in {XYZ}, got {F.variables}")
    return F.specialize({"z": 1})


def homogenize(f, d):
    """Multiplies each term of f(x, y) by z^(d - term degree)."""
    if f.variables != XY:
        raise ValueError(f"expected a polynomial in {XY}, got {f.variables}")
    if not f.is_zero() and d < f.degree():
        raise ValueError(f"target degree {d} is below deg f = {f.degree()}")
    terms = {(a, b, d - a - b): c for (a, b), c in f.terms.items()}
    return MultiPoly._raw(XYZ, terms)


def divide_remainder(a, f):
    """Single-divisor reduction: a = q*f + r, no term of r divisible by LT(f)."""
    a._check_same(f)
    if f.is_zero():
        raise ValueError("division by the zero polynomial")
    lead_exps, lead_coeff = f.leading_term()
    if isinstance(lead_coeff, PCoeff):
        raise ValueError("leading coefficient of the divisor must be rational")
    inverse = 1 / lead_coeff
    tail = [(e, c) for e, c in f.terms.items() if e != lead_exps]

    work = dict(a.terms)
    heap = [(-sum(e), tuple(-x for x in e), e) for e in work]
    heapq.heapify(heap)
    quotient, remainder = {}, {}
    while heap:
        exps = heapq.heappop(heap)[2]
        coeff = work.pop(exps, None)
        if coeff is None:
            continue
        if all(e >= l for e, l in zip(exps, lead_exps)):
            shift = tuple(e - l for e, l in zip(exps, lead_exps))
            factor = coeff * inverse
            quotient[shift] = factor
            for fe, fc in tail:
                target = tuple(s + e for s, e in zip(shift, fe))
                value = work.get(target, 0) - factor * fc
                if value:
                    if target not in work:
                        heapq.heappush(
                            heap, (-sum(target), tuple(-x for x in target), target)
                        )
                    work[target] = value
                else:
                    work.pop(target, None)
        else:
            remainder[exps] = coeff
    return (
        MultiPoly._raw(a.variables, quotient),
        MultiPoly._raw(a.variables, remainder),
    )


def is_divisible(a, f):
    return divide_remainder(a, f)[1].is_zero()


def _exact_quotient(num, den):
    if den.is_constant():
        return num * (1 / den.constant_value())
    quotient, remainder = divide_remainder(num, den)
    if not remainder.is_zero():
        raise ArithmeticError("fraction-free elimination produced an inexact division")
    return quotient


def bareiss_determinant(matrix):
    """Fraction-free determinant of a square matrix of MultiPoly entries."""
    n = len(matrix)
    if n == 0:
        raise ValueError("empty matrix")
    variables = matrix[0][0].variables
    rows = [list(row) for row in matrix]
    negate = False
    previous = MultiPoly.constant(1, variables)
    for k in range(n - 1):
        if rows[k][k].is_zero():
            pivot = next((i for i in range(k + 1, n) if not rows[i][k].is_zero()), None)
            if pivot is None:
                return MultiPoly.zero(variables)
            rows[k], rows[pivot] = rows[pivot], rows[k]
            negate = not negate
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                numerator = rows[i][j] * rows[k][k] - rows[i][k] * rows[k][j]
                rows[i][j] = _exact_quotient(numerator, previous)
            rows[i][k] = MultiPoly.zero(variables)
        previous = rows[k][k]
    det = rows[n - 1][n - 1]
    return -det if negate else det


def sylvester_matrix(a, b, var):
    m, l = a.degree_in(var), b.degree_in(var)
    ca, cb = a.coefficients_in(var), b.coefficients_in(var)
    zero = MultiPoly.zero(a.variables)
    size = m + l
    rows = []
    for shift in range(l):
        row = [zero] * size
        for power, coeff in ca.items():
            row[shift + m - power] = coeff
        rows.append(row)
    for shift in range(m):
        row = [zero] * size
        for power, coeff in cb.items():
            row[shift + l - power] = coeff
        rows.append(row)
    return rows


def resultant(a, b, var):
    """Sylvester resultant of a and b with respect to ``var`` (Bareiss elimination)."""
    a._check_same(b)
    a.index(var)
    if a.is_zero() or b.is_zero():
        raise ValueError("resultant of the zero polynomial")
    if a.degree_in(var) == 0 and b.degree_in(var) == 0:
        raise ValueError(f"both polynomials are constant in {var}")
    return bareiss_determinant(sylvester_matrix(a, b, var))


# --- univariate helpers (dense lists, lowest power first) -----------------


def _univariate(u):
    if u.is_zero():
        raise ValueError("zero polynomial")
    live = {i for exps in u.terms for i, e in enumerate(exps) if e}
    if len(live) > 1:
        raise ValueError(f"{u} is not univariate")
    index = live.pop() if live else 0
    dense = [Fraction(0)] * (max(e[index] for e in u.terms) + 1)
    for exps, coeff in u.terms.items():
        if isinstance(coeff, PCoeff):
            raise ValueError("univariate helpers need rational coefficients")
        dense[exps[index]] = coeff
    return index, dense


def _from_dense(dense, index, variables):
    terms = {}
    for power, coeff in enumerate(dense):
        exps = tuple(power if i == index else 0 for i in range(len(variables)))
        terms[exps] = coeff
    return MultiPoly._raw(variables, terms)


def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _monic(a):
    a = _trim(a)
    lead = a[-1]
    return [c / lead for c in a]


def _derivative(a):
    return [c * i for i, c in enumerate(a)][1:]


def _dense_divmod(a, b):
    a, b = _trim(a), _trim(b)
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    quotient = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    remainder = list(a)
    while len(remainder) >= len(b) and remainder:
        shift = len(remainder) - len(b)
        factor = remainder[-1] / b[-1]
        quotient[shift] = factor
        for i, c in enumerate(b):
            remainder[shift + i] -= factor * c
        remainder = _trim(remainder)
    return _trim(quotient), remainder


def _dense_gcd(a, b):
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, _dense_divmod(a, b)[1]
    return _monic(a)


def _dense_sub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    return _trim([x - y for x, y in zip(a, b)])


def squarefree_part(u):
    """u / gcd(u, u'), made monic: same roots, all simple."""
    index, dense = _univariate(u)
    if len(dense) == 1:
        return MultiPoly.constant(1, u.variables)
    g = _dense_gcd(dense, _derivative(dense))
    part = _monic(_dense_divmod(dense, g)[0])
    return _from_dense(part, index, u.variables)


def squarefree_decomposition(u):
    """Yun's algorithm: [(monic factor, multiplicity)], factors pairwise coprime."""
    index, f = _univariate(u)
    if len(f) == 1:
        return []
    f = _monic(f)
    df = _derivative(f)
    b = _dense_gcd(f, df)
    c = _dense_divmod(f, b)[0]
    d = _dense_sub(_dense_divmod(df, b)[0], _derivative(c))
    out = []
    multiplicity = 1
    while len(_trim(c)) > 1:
        a = _dense_gcd(c, d) if d else _monic(c)
        c = _dense_divmod(c, a)[0]
        d = _dense_sub(_dense_divmod(d, a)[0], _derivative(c)) if d else []
        if len(a) > 1:
            out.append((_from_dense(a, index, u.variables), multiplicity))
        multiplicity += 1
    return out


def dense_coefficients(u):
    """Rational coefficients of a univariate polynomial, lowest power first."""
    return _univariate(u)[1]
