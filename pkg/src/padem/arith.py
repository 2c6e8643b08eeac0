"""Exact scalar and univariate integer-polynomial arithmetic.

Residues mod a prime p are plain ints in [0, p).  Polynomials in Z[q]
keep arbitrary-precision integer coefficients so that cyclotomic
division and multiplication stay exact no matter how the coefficients
grow.
"""

from __future__ import annotations

import functools
import math

from .errors import DivisibilityError, DomainError

#: Largest prime accepted by default.  Everything is exact, so the bound
#: only guards against accidentally huge inputs.
MAX_PRIME = 97


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


_checked_primes: set[int] = set()


def require_prime(p: int, bound: int = MAX_PRIME) -> int:
    if p in _checked_primes and p <= bound:
        return p
    if not isinstance(p, int) or not is_prime(p):
        raise DomainError(f"{p!r} is not a prime")
    if p > bound:
        raise DomainError(f"prime {p} exceeds the configured bound {bound}")
    _checked_primes.add(p)
    return p


def binomial_mod_p(n: int, k: int, p: int) -> int:
    """Binomial coefficient C(n, k) reduced mod p.

    Negative upper index uses C(n, k) = (-1)^k C(k - n - 1, k), the
    convention matching C(n, k) = n(n-1)...(n-k+1)/k!.  Nonnegative n
    goes through Lucas' theorem.
    """
    require_prime(p)
    if k < 0:
        raise DomainError("binomial lower index must be nonnegative")
    if n < 0:
        sign = -1 if k % 2 else 1
        return (sign * binomial_mod_p(k - n - 1, k, p)) % p
    out = 1
    while k:
        nd, kd = n % p, k % p
        if kd > nd:
            return 0
        out = (out * math.comb(nd, kd)) % p
        n //= p
        k //= p
    return out


@functools.cache
def _euler_row(n: int, p: int) -> tuple[int, ...]:
    # Coefficients of (1 + x + ... + x^(p-1))^n mod p, by repeated
    # convolution with the length-p row of ones.
    row = [1]
    for _ in range(n):
        new = [0] * (len(row) + p - 1)
        for i, c in enumerate(row):
            if c:
                for j in range(p):
                    new[i + j] = (new[i + j] + c) % p
        row = new
    return tuple(row)


def generalized_binomial(n: int, k: int, p: int) -> int:
    """Coefficient of x^k in (1 + x + ... + x^(p-1))^n, reduced mod p.

    Agrees with binomial_mod_p(n, k, 2) when p = 2.
    """
    require_prime(p)
    if n < 0 or k < 0:
        raise DomainError("generalized binomial needs nonnegative arguments")
    row = _euler_row(n, p)
    return row[k] if k < len(row) else 0


class IntPolynomial:
    """Sparse polynomial in one variable q with integer coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: dict[int, int] | None = None):
        clean: dict[int, int] = {}
        if coeffs:
            for d, c in coeffs.items():
                if d < 0:
                    raise DomainError("negative exponents are not supported")
                if c:
                    clean[d] = c
        self.coeffs = clean

    @classmethod
    def zero(cls) -> "IntPolynomial":
        return cls()

    @classmethod
    def one(cls) -> "IntPolynomial":
        return cls({0: 1})

    @classmethod
    def monomial(cls, coeff: int, degree: int) -> "IntPolynomial":
        return cls({degree: coeff})

    @classmethod
    def q_power_minus_one(cls, n: int) -> "IntPolynomial":
        """q^n - 1."""
        return cls({n: 1, 0: -1})

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        if not self.coeffs:
            return -1
        return max(self.coeffs)

    def coefficient(self, d: int) -> int:
        return self.coeffs.get(d, 0)

    def coefficient_list(self) -> list[int]:
        """Dense list [c_0, c_1, ..., c_deg]."""
        if not self.coeffs:
            return [0]
        out = [0] * (self.degree() + 1)
        for d, c in self.coeffs.items():
            out[d] = c
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, IntPolynomial) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(frozenset(self.coeffs.items()))

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        new = dict(self.coeffs)
        for d, c in other.coeffs.items():
            new[d] = new.get(d, 0) + c
        return IntPolynomial(new)

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial({d: -c for d, c in self.coeffs.items()})

    def __sub__(self, other: "IntPolynomial") -> "IntPolynomial":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return IntPolynomial({d: c * other for d, c in self.coeffs.items()})
        new: dict[int, int] = {}
        for d1, c1 in self.coeffs.items():
            for d2, c2 in other.coeffs.items():
                d = d1 + d2
                new[d] = new.get(d, 0) + c1 * c2
        return IntPolynomial(new)

    def __rmul__(self, other: int) -> "IntPolynomial":
        return self * other

    def exact_div(self, divisor: "IntPolynomial") -> "IntPolynomial":
        """Exact division over Z; raises DivisibilityError on any remainder."""
        if divisor.is_zero():
            raise DomainError("division by the zero polynomial")
        rem = dict(self.coeffs)
        lead_deg = divisor.degree()
        lead_coeff = divisor.coeffs[lead_deg]
        quo: dict[int, int] = {}
        while rem:
            d = max(rem)
            if d < lead_deg:
                raise DivisibilityError("polynomial division is not exact")
            c, r = divmod(rem[d], lead_coeff)
            if r:
                raise DivisibilityError("polynomial division is not exact")
            shift = d - lead_deg
            quo[shift] = c
            for dd, cc in divisor.coeffs.items():
                key = dd + shift
                val = rem.get(key, 0) - c * cc
                if val:
                    rem[key] = val
                else:
                    rem.pop(key, None)
        return IntPolynomial(quo)

    def evaluate(self, x: int) -> int:
        return sum(c * x**d for d, c in self.coeffs.items())

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for d in sorted(self.coeffs):
            c = self.coeffs[d]
            if d == 0:
                body = str(c)
            else:
                q = "q" if d == 1 else f"q^{d}"
                if c == 1:
                    body = q
                elif c == -1:
                    body = f"-{q}"
                else:
                    body = f"{c}*{q}"
            parts.append(body)
        out = parts[0]
        for body in parts[1:]:
            out += body if body.startswith("-") else "+" + body
        return out

    def __repr__(self) -> str:
        return f"IntPolynomial({self})"


def divisors(n: int) -> list[int]:
    if n < 1:
        raise DomainError("divisors of a nonpositive integer")
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return small + large[::-1]


@functools.cache
def cyclotomic(d: int) -> IntPolynomial:
    """d-th cyclotomic polynomial over Z, by exact recursive division."""
    if d < 1:
        raise DomainError("cyclotomic index must be positive")
    result = IntPolynomial.q_power_minus_one(d)
    for e in divisors(d):
        if e < d:
            result = result.exact_div(cyclotomic(e))
    return result


def factor_quotient(numerator_exp: int, denominator_exp: int) -> list[int]:
    """Cyclotomic indices d with (1 - q^num)/(1 - q^den) = prod Phi_d(q).

    These are the divisors of the numerator exponent that do not divide
    the denominator exponent.  The factorization is checked by exact
    multiplication before returning.
    """
    if numerator_exp < 1 or denominator_exp < 1:
        raise DomainError("exponents must be positive")
    if numerator_exp % denominator_exp:
        raise DomainError(
            f"{denominator_exp} does not divide {numerator_exp}"
        )
    ds = [d for d in divisors(numerator_exp) if denominator_exp % d]
    quotient = IntPolynomial.q_power_minus_one(numerator_exp).exact_div(
        IntPolynomial.q_power_minus_one(denominator_exp)
    )
    product = IntPolynomial.one()
    for d in ds:
        product = product * cyclotomic(d)
    if product != quotient:
        raise DomainError("cyclotomic factorization failed verification")
    return ds
