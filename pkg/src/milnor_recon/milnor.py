"""Graded quotient algebras of homogeneous polynomial maps.

For ``P = (p_1, ..., p_n)`` with all ``p_r`` homogeneous of degree ``m``
the quotient ``Q[z]/(p_1, ..., p_n)`` is graded, and when ``P`` is finite
at the origin it vanishes above degree ``n(m-1)``. Everything here is
degree-by-degree linear algebra on monomial coordinates.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .algebra import AlgebraTable, Subspace
from .errors import InvalidTable, NotFinite, NotHomogeneous
from .exact import (
    Monomial,
    PolyMap,
    Polynomial,
    Vector,
    determinant,
    gradient,
    inverse,
    jacobian_det,
    matmul,
    monomials_of_degree,
    solve,
    transpose,
)
from .algebra import annihilator, maximal_ideal


def map_degree(P: Sequence[Polynomial]) -> int:
    """Common degree of the components, raising if they are not all m-forms."""
    if not P:
        raise NotHomogeneous("empty map")
    n = P[0].nvars
    degs = {p.degree() for p in P if not p.is_zero()}
    if any(p.nvars != n for p in P) or len(degs) != 1 or not all(p.is_homogeneous() for p in P):
        raise NotHomogeneous("components must be homogeneous of one common degree")
    return degs.pop()


def gradient_map(Q: Polynomial) -> PolyMap:
    if not Q.is_homogeneous() or Q.degree() < 3:
        raise NotHomogeneous("expected a form of degree at least 3")
    return gradient(Q)


def graded_ideal_piece(P: Sequence[Polynomial], i: int) -> Subspace:
    """Degree-``i`` part of the ideal generated by ``P``, in monomial coordinates."""
    m = map_degree(P)
    n = P[0].nvars
    monos = monomials_of_degree(n, i)
    if i < m:
        return Subspace.zero(len(monos))
    mults = monomials_of_degree(n, i - m)
    rows = []
    for p in P:
        for mu in mults:
            rows.append((p * Polynomial.monomial(mu)).coords(monos))
    return Subspace.span(len(monos), rows)


def is_finite_at_origin(P: Sequence[Polynomial]) -> bool:
    m = map_degree(P)
    n = P[0].nvars
    if len(P) != n:
        return False
    top = n * (m - 1) + 1
    return graded_ideal_piece(P, top).dim == len(monomials_of_degree(n, top))


@dataclass
class DegreePiece:
    degree: int
    monomials: list[Monomial]
    ideal: Subspace
    pivots: list[int]
    quotient_basis: list[Monomial]


class GradedQuotient:
    """Per-degree normal forms for ``Q[z]/(P)``."""

    def __init__(self, P: Sequence[Polynomial]):
        self.generators = tuple(P)
        self.m = map_degree(P)
        self.n = P[0].nvars
        if not is_finite_at_origin(P):
            raise NotFinite("the map is not finite at the origin")
        self.top = self.n * (self.m - 1)
        self.pieces: list[DegreePiece] = []
        for i in range(self.top + 1):
            ideal = graded_ideal_piece(P, i)
            monos = monomials_of_degree(self.n, i)
            pivots = [next(c for c, x in enumerate(row) if x) for row in ideal.basis]
            qb = [mu for c, mu in enumerate(monos) if c not in set(pivots)]
            self.pieces.append(DegreePiece(i, monos, ideal, pivots, qb))
        # global coordinates: concatenation of quotient bases by degree
        self.basis: list[Monomial] = [mu for pc in self.pieces for mu in pc.quotient_basis]
        self.degrees: list[int] = [pc.degree for pc in self.pieces for _ in pc.quotient_basis]
        self.offsets: list[int] = []
        off = 0
        for pc in self.pieces:
            self.offsets.append(off)
            off += len(pc.quotient_basis)
        self.dim = off
        self._index = {mu: k for k, mu in enumerate(self.basis)}

    def hilbert_function(self) -> list[int]:
        return [len(pc.quotient_basis) for pc in self.pieces]

    def normal_form_degree(self, p: Polynomial, i: int) -> Vector:
        """Quotient-basis coordinates of a degree-``i`` form."""
        if i > self.top:
            return []
        pc = self.pieces[i]
        v = p.coords(pc.monomials)
        for row, c in zip(pc.ideal.basis, pc.pivots):
            if v[c]:
                f = v[c]
                v = [a - f * b for a, b in zip(v, row)]
        pivset = set(pc.pivots)
        return [x for c, x in enumerate(v) if c not in pivset]

    def normal_form(self, p: Polynomial) -> Vector:
        """Coordinates of the class of ``p`` over :attr:`basis`."""
        out: Vector = []
        for i in range(self.top + 1):
            out.extend(self.normal_form_degree(p.homogeneous_part(i), i))
        return out


@dataclass
class GradedTable:
    table: AlgebraTable
    degree_of_basis_vector: list[int]
    basis_polys: list[Polynomial]
    quotient: GradedQuotient
    # rows: table basis vectors in canonical quotient coordinates
    change: list[Vector]

    @property
    def monomial_of_basis_vector(self) -> list[Monomial | None]:
        out = []
        for p in self.basis_polys:
            out.append(next(iter(p.terms)) if len(p.terms) == 1 else None)
        return out

    def class_of(self, p: Polynomial) -> Vector:
        """Table coordinates of the class of ``p``."""
        nf = self.quotient.normal_form(p)
        coords = solve(transpose(self.change), nf)
        assert coords is not None
        return coords


def build_milnor_table(
    P: Sequence[Polynomial],
    basis: Sequence[tuple[int, Polynomial]] | None = None,
) -> GradedTable:
    """Multiplication table of ``Q[z]/(P)``.

    ``basis=None`` uses the canonical monomial basis (non-pivot monomials of
    each RREF ideal piece). Otherwise ``basis`` is a list of
    ``(degree, polynomial)`` pairs whose classes must form a basis.
    """
    G = GradedQuotient(P)
    N = G.dim
    if basis is None:
        polys = [Polynomial.monomial(mu) for mu in G.basis]
        degs = list(G.degrees)
        change = [[Fraction(int(i == j)) for j in range(N)] for i in range(N)]
    else:
        if len(basis) != N:
            raise InvalidTable(f"explicit basis has {len(basis)} elements, algebra has dimension {N}")
        degs = [int(d) for d, _ in basis]
        polys = [p for _, p in basis]
        change = [G.normal_form(p) for p in polys]
        if determinant(change) == 0:
            raise InvalidTable("explicit basis elements are linearly dependent in the quotient")
    # product of table vectors a, b in canonical coordinates, then back to table coordinates
    inv = inverse(change)

    def canonical_product(a: int, b: int) -> Vector:
        if basis is None:
            mu = tuple(x + y for x, y in zip(G.basis[a], G.basis[b]))
            return G.normal_form(Polynomial.monomial(mu))
        return G.normal_form(polys[a] * polys[b])

    products = {}
    for a in range(N):
        for b in range(a, N):
            nf = canonical_product(a, b)
            coords = matmul([nf], inv)[0]
            products[(a, b)] = {j: c for j, c in enumerate(coords) if c}
    T = AlgebraTable(N, products)
    return GradedTable(T, degs, polys, G, change)


def hilbert_function(P: Sequence[Polynomial]) -> list[int]:
    return GradedQuotient(P).hilbert_function()


def socle_jacobian_check(P: Sequence[Polynomial], G: GradedTable) -> bool:
    """The class of ``det(dP)`` is nonzero and spans the socle of ``G``."""
    J = jacobian_det(P)
    cls = G.class_of(J)
    if not any(cls):
        return False
    ann = annihilator(G.table, maximal_ideal(G.table))
    return ann == Subspace.span(G.table.dim, [cls])


def change_basis(T: AlgebraTable, S: Sequence[Sequence[Fraction]]) -> AlgebraTable:
    """Table in the basis ``e'_a = sum_b S[a][b] e_b`` (``S`` invertible)."""
    N = T.dim
    Sinv = inverse(S)
    rows = [list(r) for r in S]
    products = {}
    for a in range(N):
        for b in range(a, N):
            old = T.mul(rows[a], rows[b])
            new = matmul([old], Sinv)[0]
            products[(a, b)] = {j: c for j, c in enumerate(new) if c}
    return AlgebraTable(N, products)


def scramble_matrix(N: int, seed: int, lo: int = -3, hi: int = 3, attempts: int = 100) -> list[list[Fraction]]:
    if seed == 0:
        return [[Fraction(int(i == j)) for j in range(N)] for i in range(N)]
    rng = random.Random(seed)
    for _ in range(attempts):
        S = [[Fraction(rng.randint(lo, hi)) for _ in range(N)] for _ in range(N)]
        if determinant(S) != 0:
            return S
    raise RuntimeError("could not draw an invertible matrix")


def scramble_table(T: AlgebraTable, seed: int) -> AlgebraTable:
    """Seeded random invertible change of basis. Seed 0 is the identity."""
    if seed == 0:
        return AlgebraTable(T.dim, T.products)
    return change_basis(T, scramble_matrix(T.dim, seed))


def expected_hilbert_function(n: int, m: int) -> list[int]:
    """Coefficients of ``(1 + u + ... + u^{m-1})^n``."""
    coeffs = [1]
    for _ in range(n):
        nxt = [0] * (len(coeffs) + m - 1)
        for i, c in enumerate(coeffs):
            for k in range(m):
                nxt[i + k] += c
        coeffs = nxt
    return coeffs
