"""nilHecke operator tests: relations, normal form, Schubert polynomials."""

import random

import numpy as np
import pytest

from padem.errors import DivisibilityError, DomainError
from padem.nilhecke import (
    NilHeckeElement,
    Permutation,
    all_permutations,
    apply_d_word,
    divided_difference,
    reconstruct_operator,
    schubert,
    sym_linearity_check,
)
from padem.pdg import nilhecke_relations
from padem.poly import (
    Polynomial,
    elementary_symmetric,
    monomials_up_to_degree,
)

PRIMES = (2, 3, 5)


def random_word_element(rng, p, n, max_len=5):
    letters = []
    for _ in range(rng.randint(1, max_len)):
        if rng.random() < 0.5:
            letters.append(("x", rng.randint(1, n)))
        else:
            letters.append(("d", rng.randint(1, n - 1)))
    return NilHeckeElement.from_word(p, n, tuple(letters), rng.randrange(1, p))


def random_poly(rng, p, n, max_exp=3, terms=3):
    t = {}
    for _ in range(rng.randint(1, terms)):
        t[tuple(rng.randint(0, max_exp) for _ in range(n))] = rng.randrange(1, p)
    return Polynomial(p, n, t)


# -- permutations --------------------------------------------------------


def test_permutation_basics():
    w = Permutation((2, 3, 1))
    assert w.length() == 2
    assert w.inverse() == Permutation((3, 1, 2))
    assert (w * w.inverse()) == Permutation.identity(3)
    assert Permutation.longest(4).length() == 6
    with pytest.raises(DomainError):
        Permutation((1, 1, 3))


def test_reduced_words_are_reduced_and_least():
    for n in (2, 3, 4):
        for w in all_permutations(n):
            word = w.reduced_word()
            assert len(word) == w.length()
            prod = Permutation.identity(n)
            for j in word:
                prod = prod * Permutation.transposition(n, j)
            assert prod == w
    assert Permutation.longest(3).reduced_word() == (1, 2, 1)


# -- divided differences -------------------------------------------------


def test_divided_difference_examples():
    p, n = 5, 2
    x1, x2 = Polynomial.variable(p, n, 1), Polynomial.variable(p, n, 2)
    assert divided_difference(x1, 1) == Polynomial.one(p, n)
    assert divided_difference(x1 * x2, 1).is_zero()
    assert divided_difference(x1 * x1, 1) == x1 + x2
    with pytest.raises(DomainError):
        divided_difference(x1, 2)


@pytest.mark.parametrize("p", PRIMES)
def test_divided_difference_never_fails_and_lowers_degree(p):
    rng = random.Random(5)
    for n in (2, 3):
        for _ in range(30):
            f = random_poly(rng, p, n)
            for j in range(1, n):
                g = divided_difference(f, j)  # DivisibilityError = bug
                if f.is_homogeneous() and not f.is_zero() and not g.is_zero():
                    assert g.homogeneous_degree() == f.homogeneous_degree() - 2


@pytest.mark.parametrize("p", PRIMES)
def test_twisted_leibniz(p):
    rng = random.Random(7)
    for n in (2, 3):
        for _ in range(30):
            f, g = random_poly(rng, p, n), random_poly(rng, p, n)
            for j in range(1, n):
                lhs = divided_difference(f * g, j)
                rhs = divided_difference(f, j) * g + f.transpose(j) * divided_difference(g, j)
                assert lhs == rhs


@pytest.mark.parametrize("p", PRIMES)
def test_symmetric_equivariance(p):
    rng = random.Random(9)
    for n in (2, 3):
        for _ in range(20):
            f = random_poly(rng, p, n)
            for i in range(1, n + 1):
                e = elementary_symmetric(i, n, p)
                for j in range(1, n):
                    assert divided_difference(e * f, j) == e * divided_difference(f, j)


# -- element algebra and action -------------------------------------------


def test_apply_examples():
    p, n = 5, 2
    one = Polynomial.one(p, n)
    x1 = Polynomial.variable(p, n, 1)
    d1x1 = NilHeckeElement.d_gen(p, n, 1) * NilHeckeElement.x_gen(p, n, 1)
    assert d1x1.apply(one) == one
    x1d1 = NilHeckeElement.x_gen(p, n, 1) * NilHeckeElement.d_gen(p, n, 1)
    assert x1d1.apply(x1) == x1
    d1d1 = NilHeckeElement.d_gen(p, n, 1) * NilHeckeElement.d_gen(p, n, 1)
    rng = random.Random(1)
    for _ in range(10):
        assert d1d1.apply(random_poly(rng, p, n)).is_zero()


@pytest.mark.parametrize("p", PRIMES)
@pytest.mark.parametrize("n", (2, 3, 4))
def test_defining_relations_as_operators(p, n):
    monos = monomials_up_to_degree(n, 12)
    for name, lhs, rhs in nilhecke_relations(p, n):
        diff = lhs - rhs
        for exps in monos:
            assert diff.apply(Polynomial.monomial(p, n, exps)).is_zero(), name


def test_normalize_examples():
    p, n = 3, 2
    d1 = NilHeckeElement.d_gen(p, n, 1)
    x1 = NilHeckeElement.x_gen(p, n, 1)
    x2 = NilHeckeElement.x_gen(p, n, 2)
    got = (d1 * x1).normalize()
    assert got == x2 * d1 + NilHeckeElement.one(p, n)
    assert str(got) == "x2*D1 + 1"
    assert (x1 * d1).normalize() == x1 * d1
    p3, n3 = 3, 3
    d1, d2 = NilHeckeElement.d_gen(p3, n3, 1), NilHeckeElement.d_gen(p3, n3, 2)
    assert (d1 * d2 * d1 - d2 * d1 * d2).is_zero()


@pytest.mark.parametrize("p", PRIMES)
def test_normalize_preserves_action(p):
    rng = random.Random(13)
    for n in (2, 3, 4):
        for _ in range(25):
            e = random_word_element(rng, p, n)
            nf = e.normalize()
            for word, _ in nf.terms.items():
                kinds = [k for k, _ in word]
                split = kinds.count("x")
                assert all(k == "x" for k in kinds[:split])
                assert all(k == "d" for k in kinds[split:])
            for _ in range(3):
                f = random_poly(rng, p, n)
                assert e.apply(f) == nf.apply(f)


def test_word_degrees():
    e = NilHeckeElement.from_word(5, 3, (("x", 1), ("x", 2), ("d", 1)))
    assert e.word_degree((("x", 1), ("x", 2), ("d", 1))) == 2
    assert e.degree() == 2


# -- Schubert polynomials -------------------------------------------------


def test_schubert_examples():
    assert schubert(Permutation.longest(2), 2, 3) == Polynomial.variable(3, 2, 1)
    assert schubert(Permutation.identity(3), 3, 3) == Polynomial.one(3, 3)
    assert schubert(Permutation.identity(2), 2, 5) == Polynomial.one(5, 2)


def test_schubert_well_defined_across_reduced_words():
    # D_w is independent of the chosen reduced word of w.
    p, n = 3, 3
    w0 = Permutation.longest(n)
    f = Polynomial(p, n, {(3, 2, 1): 1, (2, 2, 0): 2})
    a = apply_d_word(f, (1, 2, 1))
    b = apply_d_word(f, (2, 1, 2))
    assert a == b
    assert schubert(w0, n, p) == Polynomial.monomial(p, n, (2, 1, 0))


@pytest.mark.parametrize("p", PRIMES)
@pytest.mark.parametrize("n", (2, 3, 4))
def test_schubert_basis_independent_in_coinvariants(p, n):
    """Schubert classes stay independent modulo nonconstant symmetric
    polynomials, checked degree by degree with dense linear algebra."""
    by_degree = {}
    for w in all_permutations(n):
        by_degree.setdefault(2 * w.length(), []).append(schubert(w, n, p))
    for degree, schuberts in by_degree.items():
        half = degree // 2
        monos = [m for m in monomials_up_to_degree(n, degree) if sum(m) == half]
        index = {m: i for i, m in enumerate(monos)}
        ideal_rows = []
        for i in range(1, n + 1):
            e = elementary_symmetric(i, n, p)
            for m in monomials_up_to_degree(n, degree - 2 * i):
                if sum(m) != half - i:
                    continue
                g = e * Polynomial.monomial(p, n, m)
                row = np.zeros(len(monos), dtype=np.int64)
                for mm, c in g.terms.items():
                    row[index[mm]] = c
                ideal_rows.append(row)
        base = np.array(ideal_rows, dtype=np.int64) if ideal_rows else np.zeros((0, len(monos)), dtype=np.int64)
        base_rank = _rank(base, p)
        rows = list(base)
        for f in schuberts:
            row = np.zeros(len(monos), dtype=np.int64)
            for mm, c in f.terms.items():
                row[index[mm]] = c
            rows.append(row)
        full_rank = _rank(np.array(rows, dtype=np.int64), p)
        assert full_rank == base_rank + len(schuberts)


def _rank(mat, p):
    if mat.size == 0:
        return 0
    m = mat.copy() % p
    rows, cols = m.shape
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        piv = None
        for i in range(r, rows):
            if m[i, c]:
                piv = i
                break
        if piv is None:
            continue
        m[[r, piv]] = m[[piv, r]]
        m[r] = m[r] * pow(int(m[r, c]), -1, p) % p
        for i in range(rows):
            if i != r and m[i, c]:
                m[i] = (m[i] - m[i, c] * m[r]) % p
        r += 1
    return r


# -- Sym-linearity and reconstruction --------------------------------------


def test_sym_linearity_of_generators():
    p, n = 3, 2
    assert sym_linearity_check(NilHeckeElement.d_gen(p, n, 1), 10)
    assert sym_linearity_check(NilHeckeElement.x_gen(p, n, 1), 10)
    d1 = NilHeckeElement.d_gen(p, n, 1)
    x1 = NilHeckeElement.x_gen(p, n, 1)
    x2 = NilHeckeElement.x_gen(p, n, 2)
    identity = d1 * x1 - x2 * d1
    assert identity == NilHeckeElement.one(p, n)
    assert sym_linearity_check(identity, 10)


def test_reconstruct_operator_roundtrip():
    rng = random.Random(3)
    for p, n in ((3, 2), (2, 3)):
        for _ in range(5):
            e = random_word_element(rng, p, n)
            rebuilt = reconstruct_operator(p, n, e.apply, 10)
            assert rebuilt == e


def test_reconstruct_operator_rejects_non_nilhecke():
    from padem.errors import ReconstructionError

    p, n = 3, 2

    def frobenius(f):
        return Polynomial(p, n, {tuple(3 * e for e in m): c for m, c in f.terms.items()})

    with pytest.raises(ReconstructionError):
        reconstruct_operator(p, n, frobenius, 8)
