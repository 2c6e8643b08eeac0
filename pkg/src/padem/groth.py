"""Graded dimensions of finite-dimensional quotients of the dual algebra
of reduced powers, and the resulting Grothendieck-group presentations.

A profile stores the exponents r_k of a quotient by the p^(r_k)-th powers
of the dual generators; r_k = 0 kills the generator outright.  The graded
dimension is an exact product of geometric factors in Z[q], and the
presentation factors it into cyclotomic polynomials.
"""

from __future__ import annotations

from dataclasses import dataclass

from .arith import IntPolynomial, cyclotomic, factor_quotient, require_prime
from .errors import DomainError
from .steenrod import (
    GRADING_TOPOLOGICAL,
    GRADINGS,
    SteenrodElement,
    adem_normalize,
)


def _check_profile_condition(r: tuple[int, ...]) -> None:
    """Admissibility of the exponent sequence: for 0 < j < m either
    r_m >= r_{m-j} - j or r_m >= r_j, with r = 0 beyond the stored tail.

    This is the closure condition for the quotient to be a Hopf quotient;
    the finite filtration profiles (n, n-1, ..., 1) all satisfy it with
    equality in the first branch.
    """
    if not r:
        return
    reach = len(r) + max(r) + 1

    def get(k: int) -> int:
        return r[k - 1] if k <= len(r) else 0

    for m in range(2, reach + 1):
        for j in range(1, m):
            if get(m) >= get(m - j) - j or get(m) >= get(j):
                continue
            raise DomainError(
                f"profile {r} violates the sub-Hopf condition at (m={m}, j={j})"
            )


@dataclass(frozen=True)
class SubHopfProfile:
    """Profile of a finite-dimensional sub-Hopf algebra of the reduced
    powers: prime, exponent sequence r_k, and grading convention."""

    p: int
    exponents: tuple[int, ...]
    grading: str = GRADING_TOPOLOGICAL

    def __post_init__(self):
        require_prime(self.p)
        object.__setattr__(self, "exponents", tuple(self.exponents))
        if any(r < 0 for r in self.exponents):
            raise DomainError("profile exponents must be nonnegative")
        if self.grading not in GRADINGS:
            raise DomainError(f"unknown grading {self.grading!r}")
        _check_profile_condition(self.exponents)

    @classmethod
    def filtration(cls, n: int, p: int, grading: str = GRADING_TOPOLOGICAL) -> "SubHopfProfile":
        """The level-n filtration algebra A(n), generated by the powers
        P^(p^j) for 0 <= j < n; its profile is (n, n-1, ..., 1)."""
        if n < 0:
            raise DomainError("filtration level must be nonnegative")
        return cls(p, tuple(range(n, 0, -1)), grading)

    def heights(self) -> tuple[int, ...]:
        """The truncation heights p^(r_k)."""
        return tuple(self.p**r for r in self.exponents)


def xi_degree(k: int, profile: SubHopfProfile) -> int:
    """Degree of the k-th dual generator under the profile's grading."""
    if k < 1:
        raise DomainError("generator index must be positive")
    p = profile.p
    if profile.grading == GRADING_TOPOLOGICAL:
        return 2 * (p**k - 1)
    return 2 * (p**k - 1) // (p - 1)


def graded_dimension(profile: SubHopfProfile) -> IntPolynomial:
    """dim_q of the sub-Hopf algebra: the product over k of
    (1 - q^(h_k d_k)) / (1 - q^(d_k)) with h_k = p^(r_k), d_k = |xi_k|."""
    result = IntPolynomial.one()
    for k, height in enumerate(profile.heights(), start=1):
        deg = xi_degree(k, profile)
        factor = IntPolynomial({i * deg: 1 for i in range(height)})
        result = result * factor
    return result


def k0_presentation(profile: SubHopfProfile) -> dict:
    """The Grothendieck-group presentation Z[q] / (dim_q A).

    Returns the relation polynomial, its cyclotomic factor indices (with
    multiplicity), and the ring description.  The factorization is
    verified by exact multiplication.
    """
    relation = graded_dimension(profile)
    factors: list[int] = []
    for k, height in enumerate(profile.heights(), start=1):
        if height == 1:
            continue
        deg = xi_degree(k, profile)
        factors.extend(factor_quotient(height * deg, deg))
    factors.sort()
    product = IntPolynomial.one()
    for d in factors:
        product = product * cyclotomic(d)
    if product != relation:
        raise DomainError("cyclotomic factorization failed verification")
    return {
        "ring": "Z[q]",
        "relation": relation,
        "cyclotomic_factors": factors,
    }


def enumerate_an_basis(
    n: int, p: int, degree_cap: int = 64, grading: str = GRADING_TOPOLOGICAL
) -> tuple[dict[int, int], bool]:
    """Graded dimensions of the subalgebra generated by P^(p^j), j < n,
    found by closing the generators under product + admissible rewriting.

    Products are explored in increasing degree, so every dimension at or
    below the cap is exact.  The result is certified complete when an
    entire band of width max(generator degree) above the top nonzero
    degree fits under the cap and is empty; otherwise the flag is False
    and the dimensions are a partial lower picture.
    """
    require_prime(p)
    if n < 0:
        raise DomainError("level must be nonnegative")
    scale = 2 * (p - 1) if grading == GRADING_TOPOLOGICAL else 2
    generators = [SteenrodElement.p_power(p, p**j, grading) for j in range(n)]
    gen_degrees = [scale * p**j for j in range(n)]

    # Echelonized span vectors per degree, keyed by admissible word.
    span: dict[int, list[dict]] = {}
    word_key = lambda w: (sum(w), w)

    def reduce_and_insert(degree: int, vec: dict):
        """Gaussian step; returns the reduced vector if independent."""
        rows = span.setdefault(degree, [])
        vec = dict(vec)
        # Rows carry distinct leads and every entry of a row is at most
        # its lead, so one descending pass fully reduces.
        for row in sorted(rows, key=lambda r: word_key(max(r, key=word_key)), reverse=True):
            lead = max(row, key=word_key)
            if lead in vec:
                c = vec[lead] * pow(row[lead], -1, p) % p
                for w, rc in row.items():
                    val = (vec.get(w, 0) - c * rc) % p
                    if val:
                        vec[w] = val
                    else:
                        vec.pop(w, None)
        if not vec:
            return None
        rows.append(vec)
        return vec

    unit = SteenrodElement.one(p, grading)
    reduce_and_insert(0, dict(unit.terms))
    frontier: list[tuple[int, SteenrodElement]] = [(0, unit)]
    while frontier:
        frontier.sort(key=lambda item: item[0])
        degree, element = frontier.pop(0)
        for gen, gdeg in zip(generators, gen_degrees):
            new_degree = degree + gdeg
            if new_degree > degree_cap:
                continue
            product = adem_normalize(gen * element)
            if product.is_zero():
                continue
            reduced = reduce_and_insert(new_degree, dict(product.terms))
            if reduced is not None:
                frontier.append(
                    (new_degree, SteenrodElement(p, dict(reduced), grading))
                )

    dims = {deg: len(rows) for deg, rows in sorted(span.items()) if rows}
    if n == 0:
        return dims, True
    top = max(dims)
    certified = top + max(gen_degrees) <= degree_cap
    return dims, certified
