"""The nilHecke algebra NH_n: operator words, their action on polynomials,
a rewriting normal form, and Schubert polynomials.

Words are tuples over the alphabet ('x', i) for multiplication by x_i and
('d', j) for the divided difference at j.  The normal form writes every
element as a combination of x^a * D_w with w a permutation; a D-word that
is not reduced collapses to zero, which subsumes D_j^2 = 0 and the braid
relation.  Elements are immutable; normalization caches on the instance
but is idempotent and safe under concurrent reads.
"""

from __future__ import annotations

import functools

from .errors import DomainError, MismatchError
from .poly import Monomial, Polynomial, exact_divide, grlex_key

Letter = tuple[str, int]
Word = tuple[Letter, ...]


class Permutation:
    """Permutation of {1..n} in one-line notation."""

    __slots__ = ("images", "_length", "_word")

    def __init__(self, images: tuple[int, ...]):
        images = tuple(images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise DomainError(f"{images} is not a permutation of 1..{len(images)}")
        self.images = images
        self._length = None
        self._word = None

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def longest(cls, n: int) -> "Permutation":
        return cls(tuple(range(n, 0, -1)))

    @classmethod
    def transposition(cls, n: int, j: int) -> "Permutation":
        if not 1 <= j < n:
            raise DomainError(f"transposition index {j} out of range")
        images = list(range(1, n + 1))
        images[j - 1], images[j] = images[j], images[j - 1]
        return cls(tuple(images))

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        """Composition (self*other)(i) = self(other(i))."""
        if self.n != other.n:
            raise MismatchError("permutations of different sizes")
        return Permutation(tuple(self.images[other.images[i] - 1] for i in range(self.n)))

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, v in enumerate(self.images):
            inv[v - 1] = i + 1
        return Permutation(tuple(inv))

    def length(self) -> int:
        """Number of inversions."""
        if self._length is None:
            im = self.images
            self._length = sum(
                1
                for a in range(self.n)
                for b in range(a + 1, self.n)
                if im[a] > im[b]
            )
        return self._length

    def reduced_word(self) -> tuple[int, ...]:
        """Lexicographically least reduced word, multiplying left to right."""
        if self._word is None:
            word = []
            w = self
            while w.length():
                inv = w.inverse()
                j = next(
                    i for i in range(1, w.n) if inv.images[i - 1] > inv.images[i]
                )
                word.append(j)
                w = Permutation.transposition(w.n, j) * w
            self._word = tuple(word)
        return self._word

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __repr__(self) -> str:
        return f"Permutation{self.images}"


def divided_difference(f: Polynomial, j: int) -> Polynomial:
    """(f - s_j f) / (x_j - x_{j+1}).

    The division is exact for every input; a DivisibilityError here
    indicates a bug and is asserted against in the test suite.
    """
    if not 1 <= j < f.n:
        raise DomainError(f"divided difference index {j} out of range 1..{f.n - 1}")
    numerator = f - f.transpose(j)
    if numerator.is_zero():
        return Polynomial.zero(f.p, f.n)
    return exact_divide(numerator, _root_difference(f.p, f.n, j))


@functools.cache
def _root_difference(p: int, n: int, j: int) -> Polynomial:
    return Polynomial.variable(p, n, j) - Polynomial.variable(p, n, j + 1)


@functools.cache
def _normalize_word(n: int, word: Word) -> tuple[tuple[Monomial, tuple[int, ...], int], ...]:
    """Rewrite a word into the x^a * D_w spanning set, over Z.

    Returns ((exponents, permutation images, integer coefficient), ...).
    Coefficients are reduced mod p by the caller.
    """
    out: dict[tuple[Monomial, tuple[int, ...]], int] = {}
    stack: list[tuple[int, Word]] = [(1, word)]
    while stack:
        coeff, w = stack.pop()
        for pos in range(len(w) - 1):
            kind, i = w[pos]
            kind2, j = w[pos + 1]
            if kind == "d" and kind2 == "x":
                head, tail = w[:pos], w[pos + 2 :]
                if j == i:
                    # D_i X_i = X_{i+1} D_i + 1
                    stack.append((coeff, head + (("x", i + 1), ("d", i)) + tail))
                    stack.append((coeff, head + tail))
                elif j == i + 1:
                    # D_i X_{i+1} = X_i D_i - 1
                    stack.append((coeff, head + (("x", i), ("d", i)) + tail))
                    stack.append((-coeff, head + tail))
                else:
                    stack.append((coeff, head + (("x", j), ("d", i)) + tail))
                break
        else:
            exps = [0] * n
            dword = []
            for kind, i in w:
                if kind == "x":
                    exps[i - 1] += 1
                else:
                    dword.append(i)
            perm = Permutation.identity(n)
            for i in dword:
                perm = perm * Permutation.transposition(n, i)
            if perm.length() != len(dword):
                continue  # non-reduced D-words vanish
            key = (tuple(exps), perm.images)
            out[key] = out.get(key, 0) + coeff
    return tuple((m, im, c) for (m, im), c in out.items() if c)


@functools.lru_cache(maxsize=65536)
def _compile_word(n: int, word: Word) -> tuple:
    """Execution plan for a word acting rightmost-first: runs of X letters
    collapse to single monomial shifts."""
    ops = []
    pending: list[int] | None = None
    for kind, i in reversed(word):
        if kind == "x":
            if pending is None:
                pending = [0] * n
            pending[i - 1] += 1
        else:
            if pending is not None:
                ops.append(("x", tuple(pending)))
                pending = None
            ops.append(("d", i))
    if pending is not None:
        ops.append(("x", tuple(pending)))
    return tuple(ops)


class NilHeckeElement:
    """F_p-linear combination of words in X_i and D_j acting on F_p[x_1..x_n]."""

    __slots__ = ("p", "n", "terms", "_normal")

    def __init__(self, p: int, n: int, terms: dict[Word, int] | None = None):
        if n < 1:
            raise DomainError("need at least one variable")
        self.p = p
        self.n = n
        clean: dict[Word, int] = {}
        if terms:
            for word, c in terms.items():
                self._check_word(word)
                c %= p
                if c:
                    clean[tuple(word)] = c
        self.terms = clean
        self._normal = None

    def _check_word(self, word: Word) -> None:
        for kind, i in word:
            if kind == "x":
                if not 1 <= i <= self.n:
                    raise DomainError(f"X index {i} out of range 1..{self.n}")
            elif kind == "d":
                if not 1 <= i < self.n:
                    raise DomainError(f"D index {i} out of range 1..{self.n - 1}")
            else:
                raise DomainError(f"unknown letter kind {kind!r}")

    # -- constructors ------------------------------------------------

    @classmethod
    def zero(cls, p: int, n: int) -> "NilHeckeElement":
        return cls(p, n)

    @classmethod
    def one(cls, p: int, n: int) -> "NilHeckeElement":
        return cls(p, n, {(): 1})

    @classmethod
    def x_gen(cls, p: int, n: int, i: int) -> "NilHeckeElement":
        return cls(p, n, {(("x", i),): 1})

    @classmethod
    def d_gen(cls, p: int, n: int, j: int) -> "NilHeckeElement":
        return cls(p, n, {(("d", j),): 1})

    @classmethod
    def from_word(cls, p: int, n: int, word: Word, coeff: int = 1) -> "NilHeckeElement":
        return cls(p, n, {tuple(word): coeff})

    @classmethod
    def from_polynomial(cls, f: Polynomial) -> "NilHeckeElement":
        """The multiplication operator of a polynomial."""
        terms: dict[Word, int] = {}
        for m, c in f.terms.items():
            word = []
            for i, e in enumerate(m):
                word.extend([("x", i + 1)] * e)
            terms[tuple(word)] = c
        return cls(f.p, f.n, terms)

    @classmethod
    def from_normal_form(
        cls, p: int, n: int, nf: dict[tuple[Monomial, tuple[int, ...]], int]
    ) -> "NilHeckeElement":
        terms: dict[Word, int] = {}
        for (exps, images), c in nf.items():
            word: list[Letter] = []
            for i, e in enumerate(exps):
                word.extend([("x", i + 1)] * e)
            word.extend(("d", j) for j in Permutation(images).reduced_word())
            key = tuple(word)
            terms[key] = (terms.get(key, 0) + c) % p
        return cls(p, n, terms)

    # -- algebra -----------------------------------------------------

    def _check_compatible(self, other: "NilHeckeElement") -> None:
        if self.p != other.p or self.n != other.n:
            raise MismatchError("nilHecke elements over different rings")

    def __add__(self, other: "NilHeckeElement") -> "NilHeckeElement":
        self._check_compatible(other)
        new = dict(self.terms)
        for w, c in other.terms.items():
            new[w] = (new.get(w, 0) + c) % self.p
        return NilHeckeElement(self.p, self.n, new)

    def __neg__(self) -> "NilHeckeElement":
        return NilHeckeElement(self.p, self.n, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "NilHeckeElement") -> "NilHeckeElement":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            c = other % self.p
            return NilHeckeElement(self.p, self.n, {w: v * c for w, v in self.terms.items()})
        self._check_compatible(other)
        new: dict[Word, int] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                new[w] = (new.get(w, 0) + c1 * c2) % self.p
        return NilHeckeElement(self.p, self.n, new)

    def __rmul__(self, other: int) -> "NilHeckeElement":
        return self * other

    def __pow__(self, k: int) -> "NilHeckeElement":
        if k < 0:
            raise DomainError("negative power of an operator")
        out = NilHeckeElement.one(self.p, self.n)
        for _ in range(k):
            out = out * self
        return out

    def is_zero(self) -> bool:
        return not self.normal_form()

    def word_degree(self, word: Word) -> int:
        return 2 * sum(1 if kind == "x" else -1 for kind, _ in word)

    def degree(self):
        """Maximum degree over normal-form terms, or None if zero."""
        nf = self.normal_form()
        if not nf:
            return None
        return max(2 * sum(exps) - 2 * Permutation(im).length() for exps, im in nf)

    # -- action and normal form --------------------------------------

    def apply(self, f: Polynomial) -> Polynomial:
        """Act on a polynomial; the rightmost letter acts first."""
        if f.p != self.p or f.n != self.n:
            raise MismatchError("operand over a different ring")
        out = Polynomial.zero(self.p, self.n)
        for word, c in self.terms.items():
            g = f
            for kind, payload in _compile_word(self.n, word):
                if g.is_zero():
                    break
                if kind == "x":
                    g = g.shift_monomial(payload)
                else:
                    g = divided_difference(g, payload)
            out = out + g * c
        return out

    def normal_form(self) -> dict[tuple[Monomial, tuple[int, ...]], int]:
        """Coefficients on the basis x^a * D_w, keyed (exponents, images)."""
        if self._normal is None:
            nf: dict[tuple[Monomial, tuple[int, ...]], int] = {}
            for word, c in self.terms.items():
                for exps, images, z in _normalize_word(self.n, word):
                    key = (exps, images)
                    val = (nf.get(key, 0) + c * z) % self.p
                    if val:
                        nf[key] = val
                    else:
                        nf.pop(key, None)
            self._normal = nf
        return self._normal

    def normalize(self) -> "NilHeckeElement":
        """Rewrite into the x^a * D_w basis."""
        out = NilHeckeElement.from_normal_form(self.p, self.n, self.normal_form())
        out._normal = dict(self.normal_form())
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, NilHeckeElement):
            return NotImplemented
        return (
            self.p == other.p
            and self.n == other.n
            and self.normal_form() == other.normal_form()
        )

    def __hash__(self) -> int:
        return hash((self.p, self.n, frozenset(self.normal_form().items())))

    def __str__(self) -> str:
        nf = self.normal_form()
        if not nf:
            return "0"
        def sort_key(item):
            (exps, images) = item
            return (grlex_key(exps), images)
        parts = []
        for exps, images in sorted(nf, key=sort_key, reverse=True):
            c = nf[(exps, images)]
            factors = []
            for i, e in enumerate(exps):
                if e == 1:
                    factors.append(f"x{i + 1}")
                elif e > 1:
                    factors.append(f"x{i + 1}^{e}")
            factors.extend(f"D{j}" for j in Permutation(images).reduced_word())
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            else:
                parts.append(f"{c}*" + "*".join(factors))
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"NilHeckeElement(p={self.p}, n={self.n}, {self})"


def apply_d_word(f: Polynomial, word: tuple[int, ...]) -> Polynomial:
    """Apply D_{word[0]} ... D_{word[-1]}, rightmost first."""
    for j in reversed(word):
        f = divided_difference(f, j)
    return f


@functools.cache
def staircase_monomial(p: int, n: int) -> Polynomial:
    """x_1^{n-1} x_2^{n-2} ... x_{n-1}."""
    exps = tuple(n - 1 - i for i in range(n))
    return Polynomial.monomial(p, n, exps)


@functools.cache
def schubert(w: Permutation, n: int, p: int) -> Polynomial:
    """Schubert polynomial of w: apply D_{w^{-1} w_0} to the staircase."""
    if w.n != n:
        raise MismatchError("permutation size does not match variable count")
    u = w.inverse() * Permutation.longest(n)
    return apply_d_word(staircase_monomial(p, n), u.reduced_word())


def all_permutations(n: int) -> list[Permutation]:
    import itertools

    return [Permutation(images) for images in itertools.permutations(range(1, n + 1))]


def reconstruct_operator(
    p: int,
    n: int,
    fn,
    degree_bound: int,
    note: str = "operator",
) -> NilHeckeElement:
    """Write a linear operator on F_p[x_1..x_n] in the x^a * D_w basis.

    The candidate is extracted from the operator's values on Schubert
    polynomials (processing permutations by increasing length peels off
    one D_w coefficient at a time) and then checked against fn on every
    monomial within the degree bound.  Operators that are not actually
    nilHecke elements fail the check and raise ReconstructionError.
    """
    from .errors import ReconstructionError
    from .poly import monomials_up_to_degree

    perms = sorted(all_permutations(n), key=lambda w: (w.length(), w.images))
    parts: dict[Permutation, Polynomial] = {}
    for w in perms:
        val = fn(schubert(w, n, p))
        for u, coeff_poly in parts.items():
            du = apply_d_word(schubert(w, n, p), u.reduced_word())
            if not du.is_zero():
                val = val - coeff_poly * du
        parts[w] = val

    result = NilHeckeElement.zero(p, n)
    for w, coeff_poly in parts.items():
        if coeff_poly.is_zero():
            continue
        dword = tuple(("d", j) for j in w.reduced_word())
        result = result + NilHeckeElement.from_polynomial(
            coeff_poly
        ) * NilHeckeElement.from_word(p, n, dword)
    result = result.normalize()

    for exps in monomials_up_to_degree(n, degree_bound):
        y = Polynomial.monomial(p, n, exps)
        if result.apply(y) != fn(y):
            raise ReconstructionError(
                f"{note} is not realized by a nilHecke element"
            )
    return result


def sym_linearity_check(e: NilHeckeElement, degree_bound: int) -> bool:
    """Does e commute with multiplication by every elementary symmetric
    polynomial, on all monomials within the degree bound?"""
    from .poly import elementary_symmetric, monomials_up_to_degree

    p, n = e.p, e.n
    for i in range(1, n + 1):
        g = elementary_symmetric(i, n, p)
        for exps in monomials_up_to_degree(n, degree_bound - 2 * i):
            f = Polynomial.monomial(p, n, exps)
            if e.apply(g * f) != g * e.apply(f):
                return False
    return True
