"""Finite-dimensional commutative algebras given by structure constants.

An algebra element is a coordinate vector (list of Fractions) over the
table basis ``e_0, ..., e_{N-1}``. Subspaces of that coordinate space are
stored canonically as RREF rows, so equality is exact comparison.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import InvalidTable, NotGorenstein, NotInSpan, NotLocal, NoUnit
from .exact import (
    Matrix,
    Polynomial,
    Vector,
    frac,
    identity,
    nilpotency_check,
    rref,
    solve,
    kernel_basis,
    transpose,
)


@dataclass(frozen=True)
class Subspace:
    ambient_dim: int
    basis: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def span(cls, ambient_dim: int, vectors: Iterable[Sequence]) -> Subspace:
        rows = [list(map(frac, v)) for v in vectors]
        for v in rows:
            if len(v) != ambient_dim:
                raise ValueError("vector length does not match ambient dimension")
        if not rows:
            return cls(ambient_dim, ())
        r, _, rk = rref(rows)
        return cls(ambient_dim, tuple(tuple(row) for row in r[:rk]))

    @classmethod
    def zero(cls, ambient_dim: int) -> Subspace:
        return cls(ambient_dim, ())

    @classmethod
    def whole(cls, ambient_dim: int) -> Subspace:
        return cls.span(ambient_dim, identity(ambient_dim))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def is_zero(self) -> bool:
        return not self.basis

    def __add__(self, other: Subspace) -> Subspace:
        return Subspace.span(self.ambient_dim, self.basis + other.basis)

    def contains(self, v: Sequence) -> bool:
        return (self + Subspace.span(self.ambient_dim, [v])).dim == self.dim

    def __le__(self, other: Subspace) -> bool:
        return (self + other).dim == other.dim

    def vectors(self) -> list[Vector]:
        return [list(row) for row in self.basis]


class AlgebraTable:
    """Commutative algebra with basis ``e_0..e_{N-1}``.

    ``products`` maps ``(k, l)`` to a sparse vector ``{j: c}`` meaning
    ``e_k e_l = sum_j c e_j``. Only ``k <= l`` is stored; missing pairs
    are zero products.
    """

    def __init__(self, dim: int, products: Mapping[tuple[int, int], Mapping[int, object]]):
        if dim < 1:
            raise InvalidTable("dimension must be at least 1")
        self.dim = dim
        clean: dict[tuple[int, int], dict[int, Fraction]] = {}
        for (k, l), vec in products.items():
            if not (0 <= k < dim and 0 <= l < dim):
                raise InvalidTable(f"index pair {(k, l)} out of range")
            if k > l:
                k, l = l, k
            entry = clean.setdefault((k, l), {})
            for j, c in vec.items():
                if not 0 <= j < dim:
                    raise InvalidTable(f"output index {j} out of range")
                c = frac(c)
                if c:
                    entry[j] = entry.get(j, Fraction(0)) + c
            for j in [j for j, c in entry.items() if not c]:
                del entry[j]
            if not entry:
                del clean[(k, l)]
        self.products = clean
        self._struct = [[None] * dim for _ in range(dim)]
        for k in range(dim):
            for l in range(dim):
                vec = clean.get((min(k, l), max(k, l)), {})
                self._struct[k][l] = sorted(vec.items())

    def __eq__(self, other):
        return isinstance(other, AlgebraTable) and (self.dim, self.products) == (
            other.dim,
            other.products,
        )

    def __repr__(self):
        return f"AlgebraTable(dim={self.dim}, nonzero_products={len(self.products)})"

    @classmethod
    def from_dense(cls, dim: int, prod) -> AlgebraTable:
        """Build from a callable or nested list giving ``e_k e_l`` as a dense vector."""
        get = prod if callable(prod) else (lambda k, l: prod[k][l])
        products = {}
        for k in range(dim):
            for l in range(k, dim):
                products[(k, l)] = {j: c for j, c in enumerate(get(k, l)) if c}
        return cls(dim, products)

    def basis_vector(self, k: int) -> Vector:
        v = [Fraction(0)] * self.dim
        v[k] = Fraction(1)
        return v

    def product(self, k: int, l: int) -> Vector:
        out = [Fraction(0)] * self.dim
        for j, c in self._struct[k][l]:
            out[j] = c
        return out

    def mul(self, x: Sequence[Fraction], y: Sequence[Fraction]) -> Vector:
        out = [Fraction(0)] * self.dim
        for k, xk in enumerate(x):
            if not xk:
                continue
            row = self._struct[k]
            for l, yl in enumerate(y):
                if not yl:
                    continue
                s = xk * yl
                for j, c in row[l]:
                    out[j] += s * c
        return out


@dataclass
class ValidationReport:
    valid: bool
    violations: list[tuple[int, int, int]] = field(default_factory=list)


def validate_table(T: AlgebraTable) -> ValidationReport:
    """Check associativity on every basis triple."""
    N = T.dim
    bad = []
    basis = [T.basis_vector(k) for k in range(N)]
    prods = [[T.product(a, b) for b in range(N)] for a in range(N)]
    for a in range(N):
        for b in range(a, N):
            ab = prods[a][b]
            for c in range(N):
                if T.mul(ab, basis[c]) != T.mul(basis[a], prods[b][c]):
                    bad.append((a, b, c))
    return ValidationReport(not bad, bad)


def unit(T: AlgebraTable) -> Vector:
    """Solve ``sum_k alpha_k e_k e_l = e_l`` for all ``l``."""
    N = T.dim
    rows, rhs = [], []
    for l in range(N):
        cols = [T.product(k, l) for k in range(N)]
        for j in range(N):
            rows.append([cols[k][j] for k in range(N)])
            rhs.append(Fraction(int(j == l)))
    alpha = solve(rows, rhs)
    if alpha is None:
        raise NoUnit("the algebra has no multiplicative identity")
    return alpha


def mult_matrix(T: AlgebraTable, a: Sequence[Fraction]) -> Matrix:
    """Matrix of ``x -> a x``; column ``l`` holds ``a e_l``."""
    cols = [T.mul(a, T.basis_vector(l)) for l in range(T.dim)]
    return transpose(cols)


def residue_values(T: AlgebraTable) -> list[Fraction]:
    """``beta_k`` with ``e_k - beta_k 1`` in the maximal ideal.

    ``beta_k = trace(C_k) / N``, certified by nilpotency of ``C_k - beta_k Id``.
    """
    N = T.dim
    betas = []
    for k in range(N):
        C = mult_matrix(T, T.basis_vector(k))
        beta = sum((C[i][i] for i in range(N)), Fraction(0)) / N
        M = [[C[i][j] - (beta if i == j else 0) for j in range(N)] for i in range(N)]
        if not nilpotency_check(M):
            raise NotLocal(f"e_{k} - {beta}*1 is not nilpotent; the algebra is not local")
        betas.append(beta)
    return betas


def maximal_ideal(T: AlgebraTable) -> Subspace:
    one = unit(T)
    betas = residue_values(T)
    vecs = [[(1 if j == k else 0) - betas[k] * one[j] for j in range(T.dim)] for k in range(T.dim)]
    m = Subspace.span(T.dim, vecs)
    if m.dim != T.dim - 1:
        raise NotLocal("maximal ideal has the wrong dimension")
    return m


def subspace_product(T: AlgebraTable, U: Subspace, V: Subspace) -> Subspace:
    return Subspace.span(T.dim, [T.mul(u, v) for u in U.basis for v in V.basis])


def ideal_powers(T: AlgebraTable, m: Subspace) -> list[Subspace]:
    """``[m^0 = A, m^1, ..., m^nu, 0]``."""
    powers = [Subspace.whole(T.dim), m]
    while not powers[-1].is_zero():
        nxt = subspace_product(T, m, powers[-1])
        if nxt.dim >= powers[-1].dim:
            raise NotLocal("powers of the ideal do not descend to zero")
        powers.append(nxt)
    return powers


def nil_index(T: AlgebraTable, m: Subspace) -> int:
    return len(ideal_powers(T, m)) - 2


def annihilator(T: AlgebraTable, m: Subspace) -> Subspace:
    """``{x in m : x m = 0}``."""
    gens = m.vectors()
    if not gens:
        return Subspace.zero(T.dim)
    # unknowns y_i with x = sum_i y_i gens[i]; one equation per (basis b, coord j)
    prods = [[T.mul(g, b) for g in gens] for b in gens]
    rows = [[prods[b][i][j] for i in range(len(gens))] for b in range(len(gens)) for j in range(T.dim)]
    ker = kernel_basis(rows, cols=len(gens))
    vecs = [[sum((y[i] * gens[i][j] for i in range(len(gens))), Fraction(0)) for j in range(T.dim)] for y in ker]
    return Subspace.span(T.dim, vecs)


def is_gorenstein(T: AlgebraTable) -> bool:
    return annihilator(T, maximal_ideal(T)).dim == 1


def complement_basis(inner: Subspace, outer: Subspace) -> list[Vector]:
    """Greedy scan of ``outer``'s canonical rows for a complement of ``inner``."""
    target = outer.dim - inner.dim
    kept: list[Vector] = []
    current = inner
    for row in outer.basis:
        if len(kept) == target:
            break
        bigger = current + Subspace.span(outer.ambient_dim, [row])
        if bigger.dim > current.dim:
            kept.append(list(row))
            current = bigger
    return kept


def project_coords(x: Sequence[Fraction], S_basis: Sequence[Sequence[Fraction]], kernel: Subspace) -> Vector:
    """Coordinates over ``S_basis`` of the component of ``x`` in ``span(S) + kernel``."""
    gens = [list(s) for s in S_basis] + kernel.vectors()
    if not gens:
        if any(x):
            raise NotInSpan("vector lies outside the direct sum")
        return []
    cols = transpose(gens)
    sol = solve(cols, list(x))
    if sol is None:
        raise NotInSpan("vector lies outside the direct sum")
    return sol[: len(S_basis)]


def eval_poly_in_algebra(T: AlgebraTable, q: Polynomial, args: Sequence[Sequence[Fraction]], one: Sequence[Fraction] | None = None) -> Vector:
    """Substitute algebra elements for the variables of ``q``."""
    if q.nvars != len(args):
        raise ValueError("need one algebra element per variable")
    if one is None:
        one = unit(T)
    powers: dict[tuple[int, int], Vector] = {}

    def power(j: int, k: int) -> Vector:
        if k == 0:
            return list(one)
        if (j, k) not in powers:
            powers[(j, k)] = list(args[j]) if k == 1 else T.mul(power(j, k - 1), args[j])
        return powers[(j, k)]

    out = [Fraction(0)] * T.dim
    for e, c in q.terms.items():
        term = list(one)
        for j, k in enumerate(e):
            if k:
                term = T.mul(term, power(j, k))
        out = [o + c * t for o, t in zip(out, term)]
    return out


def loewy_dims(T: AlgebraTable) -> list[int]:
    powers = ideal_powers(T, maximal_ideal(T))
    return [powers[i].dim - powers[i + 1].dim for i in range(len(powers) - 1)]


def check_gorenstein(T: AlgebraTable, m: Subspace) -> Subspace:
    ann = annihilator(T, m)
    if ann.dim != 1:
        raise NotGorenstein(f"socle has dimension {ann.dim}, expected 1")
    return ann
