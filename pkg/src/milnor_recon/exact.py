"""Exact rational matrices and sparse multivariate polynomials.

Scalars are :class:`fractions.Fraction` throughout. Matrices are plain
lists of rows; the helpers never mutate their arguments.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations_with_replacement, permutations
from math import comb
from typing import Iterable, Mapping, Sequence

from .errors import NotClosed, NotHomogeneous

Matrix = list[list[Fraction]]
Vector = list[Fraction]
Monomial = tuple[int, ...]


def frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


def to_matrix(rows: Iterable[Iterable]) -> Matrix:
    return [[frac(x) for x in row] for row in rows]


def zeros(rows: int, cols: int) -> Matrix:
    return [[Fraction(0)] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    m = zeros(n, n)
    for i in range(n):
        m[i][i] = Fraction(1)
    return m


def transpose(m: Sequence[Sequence[Fraction]], cols: int | None = None) -> Matrix:
    if not m:
        return [[] for _ in range(cols or 0)]
    return [list(col) for col in zip(*m)]


def matmul(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> Matrix:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    out = zeros(len(a), cols)
    for i, row in enumerate(a):
        acc = out[i]
        for k in range(inner):
            x = row[k]
            if x:
                bk = b[k]
                for j in range(cols):
                    if bk[j]:
                        acc[j] += x * bk[j]
    return out


def matvec(a: Sequence[Sequence[Fraction]], v: Sequence[Fraction]) -> Vector:
    return [sum((x * y for x, y in zip(row, v) if x and y), Fraction(0)) for row in a]


def is_zero_matrix(m: Sequence[Sequence[Fraction]]) -> bool:
    return all(not x for row in m for x in row)


def rref(m: Sequence[Sequence[Fraction]]) -> tuple[Matrix, list[int], int]:
    """Reduced row echelon form of ``m``.

    Returns ``(R, pivots, rank)``; ``R`` has the same shape as ``m``.
    """
    r = [list(map(frac, row)) for row in m]
    nrows = len(r)
    ncols = len(r[0]) if r else 0
    pivots: list[int] = []
    prow = 0
    for c in range(ncols):
        if prow == nrows:
            break
        for i in range(prow, nrows):
            if r[i][c]:
                break
        else:
            continue
        r[prow], r[i] = r[i], r[prow]
        p = r[prow][c]
        if p != 1:
            r[prow] = [x / p for x in r[prow]]
        piv = r[prow]
        for i in range(nrows):
            if i != prow and r[i][c]:
                f = r[i][c]
                r[i] = [x - f * y for x, y in zip(r[i], piv)]
        pivots.append(c)
        prow += 1
    return r, pivots, len(pivots)


def rank(m: Sequence[Sequence[Fraction]]) -> int:
    return rref(m)[2]


def solve(m: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> Vector | None:
    """One exact solution of ``m x = b`` (free variables set to 0), or None."""
    ncols = len(m[0]) if m else 0
    aug = [list(row) + [frac(bi)] for row, bi in zip(m, b)]
    if len(aug) != len(b):
        raise ValueError("right-hand side length does not match row count")
    r, pivots, _ = rref(aug)
    if pivots and pivots[-1] == ncols:
        return None
    x = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        x[c] = r[i][ncols]
    return x


def kernel_basis(m: Sequence[Sequence[Fraction]], cols: int | None = None) -> Matrix:
    """RREF basis (as rows) of the null space ``{x : m x = 0}``."""
    ncols = len(m[0]) if m else (cols or 0)
    r, pivots, _ = rref(m) if m else ([], [], 0)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -r[i][fc]
        basis.append(v)
    return rref(basis)[0] if basis else []


def left_kernel_basis(m: Sequence[Sequence[Fraction]], rows: int | None = None) -> Matrix:
    """RREF basis of ``{y : y m = 0}``."""
    nrows = len(m) if m else (rows or 0)
    if not m or not m[0]:
        return identity(nrows)
    return kernel_basis(transpose(m), cols=nrows)


def determinant(m: Sequence[Sequence[Fraction]]) -> Fraction:
    a = [list(map(frac, row)) for row in m]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for i in range(c + 1, n):
            if a[i][c]:
                f = a[i][c] / a[c][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return det


def inverse(m: Sequence[Sequence[Fraction]]) -> Matrix:
    n = len(m)
    aug = [list(map(frac, row)) + e for row, e in zip(m, identity(n))]
    r, pivots, _ = rref(aug)
    if pivots[:n] != list(range(n)) or len(pivots) != n:
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in r]


def nilpotency_check(m: Sequence[Sequence[Fraction]]) -> bool:
    """True iff ``m`` is nilpotent, i.e. ``m^N = 0``; ``N`` is reached by
    repeated squaring."""
    n = len(m)
    power = [list(row) for row in m]
    k = 1
    while k < n:
        if is_zero_matrix(power):
            return True
        power = matmul(power, power)
        k *= 2
    return is_zero_matrix(power)


# ---------------------------------------------------------------------------
# Polynomials


def monomials_of_degree(n: int, d: int) -> list[Monomial]:
    """All exponent vectors of total degree ``d`` in ``n`` variables,
    lexicographically decreasing."""
    if n < 1 or d < 0:
        raise ValueError("need n >= 1 and d >= 0")
    out = []
    for combo in combinations_with_replacement(range(n), d):
        e = [0] * n
        for v in combo:
            e[v] += 1
        out.append(tuple(e))
    out.sort(reverse=True)
    assert len(out) == comb(d + n - 1, d)
    return out


class Polynomial:
    """Sparse polynomial over Q in ``nvars`` variables.

    ``terms`` maps exponent tuples to nonzero Fractions. Instances are
    treated as immutable.
    """

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Monomial, object] | None = None):
        self.nvars = nvars
        clean: dict[Monomial, Fraction] = {}
        for e, c in (terms or {}).items():
            e = tuple(int(x) for x in e)
            if len(e) != nvars or any(x < 0 for x in e):
                raise ValueError(f"bad exponent vector {e} for {nvars} variables")
            c = frac(c)
            if c:
                clean[e] = clean.get(e, Fraction(0)) + c
                if not clean[e]:
                    del clean[e]
        self.terms = clean
        self._hash = None

    # construction helpers
    @classmethod
    def constant(cls, nvars: int, c=1) -> Polynomial:
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars: int, j: int) -> Polynomial:
        e = [0] * nvars
        e[j] = 1
        return cls(nvars, {tuple(e): 1})

    @classmethod
    def monomial(cls, exps: Sequence[int], c=1) -> Polynomial:
        return cls(len(exps), {tuple(exps): c})

    @classmethod
    def from_coords(cls, nvars: int, monos: Sequence[Monomial], coords: Sequence) -> Polynomial:
        return cls(nvars, {e: c for e, c in zip(monos, coords) if c})

    # queries
    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self, d: int | None = None) -> bool:
        degs = {sum(e) for e in self.terms}
        if d is None:
            return len(degs) <= 1
        return degs <= {d}

    def homogeneous_part(self, d: int) -> Polynomial:
        return Polynomial(self.nvars, {e: c for e, c in self.terms.items() if sum(e) == d})

    def coeff(self, e: Monomial) -> Fraction:
        return self.terms.get(tuple(e), Fraction(0))

    def coords(self, monos: Sequence[Monomial]) -> Vector:
        return [self.coeff(e) for e in monos]

    # arithmetic
    def _check(self, other: Polynomial) -> None:
        if self.nvars != other.nvars:
            raise ValueError("variable count mismatch")

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(self.nvars, other)
        self._check(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t.get(e, Fraction(0)) + c
        return Polynomial(self.nvars, t)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            c = frac(other)
            return Polynomial(self.nvars, {e: c * v for e, v in self.terms.items()})
        self._check(other)
        t: dict[Monomial, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, Fraction(0)) + c1 * c2
        return Polynomial(self.nvars, t)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Polynomial.constant(self.nvars)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Polynomial.constant(self.nvars, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        return sorted(self.terms.items(), key=lambda t: (-sum(t[0]), tuple(-x for x in t[0])))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                f"z{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def substitute(self, values: Sequence[Polynomial]) -> Polynomial:
        """Compose with ``values`` (one polynomial per variable)."""
        if len(values) != self.nvars:
            raise ValueError("need one value per variable")
        target = values[0].nvars if values else 0
        out = Polynomial(target)
        cache: dict[tuple[int, int], Polynomial] = {}
        for e, c in self.terms.items():
            term = Polynomial.constant(target, c)
            for j, k in enumerate(e):
                if k:
                    if (j, k) not in cache:
                        cache[(j, k)] = values[j] ** k
                    term = term * cache[(j, k)]
            out = out + term
        return out

    def linear_change(self, L: Sequence[Sequence[Fraction]]) -> Polynomial:
        """``z -> p(L z)``."""
        n = self.nvars
        lin = [
            Polynomial(n, {tuple(int(i == k) for i in range(n)): L[j][k] for k in range(n)})
            for j in range(n)
        ]
        return self.substitute(lin)


PolyMap = tuple[Polynomial, ...]


def partial_derivative(p: Polynomial, j: int) -> Polynomial:
    if not 0 <= j < p.nvars:
        raise IndexError(f"variable index {j} out of range")
    t = {}
    for e, c in p.terms.items():
        if e[j]:
            e2 = list(e)
            e2[j] -= 1
            t[tuple(e2)] = c * e[j]
    return Polynomial(p.nvars, t)


def gradient(p: Polynomial) -> PolyMap:
    return tuple(partial_derivative(p, j) for j in range(p.nvars))


def _perm_sign(perm: Sequence[int]) -> int:
    sign = 1
    seen = list(perm)
    for i in range(len(seen)):
        while seen[i] != i:
            j = seen[i]
            seen[i], seen[j] = seen[j], seen[i]
            sign = -sign
    return sign


def poly_det(entries: Sequence[Sequence[Polynomial]], nvars: int) -> Polynomial:
    """Leibniz expansion; fine for the n <= 4 sizes used here."""
    n = len(entries)
    out = Polynomial(nvars)
    for perm in permutations(range(n)):
        term = Polynomial.constant(nvars, _perm_sign(perm))
        for i, j in enumerate(perm):
            term = term * entries[i][j]
            if term.is_zero():
                break
        out = out + term
    return out


def jacobian_det(P: Sequence[Polynomial]) -> Polynomial:
    n = len(P)
    if any(p.nvars != n for p in P):
        raise ValueError("map must have n components in n variables")
    jac = [[partial_derivative(p, s) for s in range(n)] for p in P]
    return poly_det(jac, n)


def apply_matrix(D: Sequence[Sequence[Fraction]], P: Sequence[Polynomial]) -> PolyMap:
    """Left action ``(D P)_r = sum_s D[r][s] P_s``."""
    nv = P[0].nvars
    return tuple(
        sum((P[s] * D[r][s] for s in range(len(P)) if D[r][s]), Polynomial(nv))
        for r in range(len(D))
    )


def euler_integrate(Psi: Sequence[Polynomial]) -> Polynomial:
    """Potential of a closed homogeneous 1-form via Euler's identity."""
    n = len(Psi)
    degs = {p.degree() for p in Psi if not p.is_zero()}
    if len(degs) != 1 or not all(p.is_homogeneous() for p in Psi):
        raise NotHomogeneous("components must be homogeneous of one common degree")
    m = degs.pop()
    if m < 1:
        raise NotHomogeneous("components must have degree >= 1")
    Q = Polynomial(n)
    for r, psi in enumerate(Psi):
        Q = Q + Polynomial.variable(n, r) * psi
    Q = Q * Fraction(1, m + 1)
    if gradient(Q) != tuple(Psi):
        raise NotClosed("the 1-form is not closed; no potential exists")
    return Q
