"""Recover a form from a map linearly equivalent to its gradient, and
classical invariants of ternary cubics.

A matrix ``D`` is sought for which the 1-form with coefficients ``D Phi``
is closed; that condition is linear in the entries of ``D``. Any
invertible solution integrates (Euler's identity) to a form whose
gradient is ``D Phi``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations, product
from math import factorial
from typing import Sequence

from .errors import DegenerateCubic, DegreeTooLow, HessePencilDegenerate, NoNondegenerateSolution, NotHomogeneous
from .exact import (
    Matrix,
    Monomial,
    Polynomial,
    _perm_sign,
    apply_matrix,
    determinant,
    euler_integrate,
    kernel_basis,
    monomials_of_degree,
    partial_derivative,
)
from .milnor import map_degree

DEFAULT_SEARCH_BOUND = 10000


@dataclass
class ClosednessSystem:
    n: int
    # unknown k is the entry D[k // n][k % n]
    equations: Matrix
    labels: list[tuple[int, int, Monomial]]

    def solution_space(self) -> Matrix:
        return kernel_basis(self.equations, cols=self.n * self.n)

    def satisfied_by(self, D: Sequence[Sequence[Fraction]]) -> bool:
        flat = [D[r][s] for r in range(self.n) for s in range(self.n)]
        return all(sum(a * x for a, x in zip(row, flat)) == 0 for row in self.equations)


def closedness_system(Phi: Sequence[Polynomial]) -> ClosednessSystem:
    """Linear conditions on ``D`` for ``d(sum_r (D Phi)_r dz_r) = 0``."""
    m = map_degree(Phi)
    n = len(Phi)
    monos = monomials_of_degree(n, m - 1) if m >= 1 else []
    # dPhi[k][j] = d Phi_k / d z_j
    dPhi = [[partial_derivative(p, j) for j in range(n)] for p in Phi]
    rows, labels = [], []
    for r in range(n):
        for s in range(r + 1, n):
            # d Psi_r / dz_s - d Psi_s / dz_r, Psi_r = sum_k D[r][k] Phi_k
            for mu in monos:
                row = [Fraction(0)] * (n * n)
                for k in range(n):
                    row[r * n + k] += dPhi[k][s].coeff(mu)
                    row[s * n + k] -= dPhi[k][r].coeff(mu)
                rows.append(row)
                labels.append((r, s, mu))
    return ClosednessSystem(n, rows, labels)


def _reshape(v: Sequence[Fraction], n: int) -> Matrix:
    return [list(v[r * n:(r + 1) * n]) for r in range(n)]


def nondegenerate_solution(sys: ClosednessSystem, search_bound: int = DEFAULT_SEARCH_BOUND) -> Matrix:
    """First invertible ``D`` in a deterministic walk over small integer
    combinations of the solution-space basis."""
    n = sys.n
    basis = sys.solution_space()
    tried = 0
    for support in range(1, len(basis) + 1):
        coeff_sets = [(1,)] if support == 1 else list(product((1, -1, 2, -2), repeat=support))
        for idx in combinations(range(len(basis)), support):
            for coeffs in coeff_sets:
                if tried >= search_bound:
                    raise NoNondegenerateSolution(f"no invertible solution within {search_bound} candidates")
                tried += 1
                v = [sum((c * basis[i][k] for c, i in zip(coeffs, idx)), Fraction(0)) for k in range(n * n)]
                D = _reshape(v, n)
                if determinant(D) != 0:
                    return D
    raise NoNondegenerateSolution(
        f"solution space of dimension {len(basis)} has no invertible member among {tried} candidates"
    )


def recover_form(
    Phi: Sequence[Polynomial],
    D0: Sequence[Sequence[Fraction]] | None = None,
    search_bound: int = DEFAULT_SEARCH_BOUND,
    allow_linear: bool = False,
) -> Polynomial:
    m = map_degree(Phi)
    if m < 2 and not allow_linear:
        raise DegreeTooLow("map components must have degree at least 2")
    if D0 is None:
        D0 = nondegenerate_solution(closedness_system(Phi), search_bound)
    elif determinant(D0) == 0:
        raise NoNondegenerateSolution("the supplied matrix is singular")
    return euler_integrate(apply_matrix(D0, Phi))


def recover_form_with_matrix(Phi: Sequence[Polynomial], search_bound: int = DEFAULT_SEARCH_BOUND) -> tuple[Polynomial, Matrix]:
    D0 = nondegenerate_solution(closedness_system(Phi), search_bound)
    return recover_form(Phi, D0), D0


# ---------------------------------------------------------------------------
# Ternary cubics

# Symbolic-method bracket monomials; each copy of the cubic appears in
# exactly three brackets.
_S_BRACKETS = ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3))
_T_BRACKETS = ((0, 1, 2), (0, 1, 3), (0, 2, 4), (1, 2, 5), (3, 4, 5), (3, 4, 5))

# Scale the raw bracket values to the Aronhold normalization
# S(x^3+y^3+z^3+6a xyz) = a - a^4, T = 1 - 20a^3 - 8a^6.
_S_SCALE = Fraction(-1, 31104)
_T_SCALE = Fraction(-1, 279936)


@lru_cache(maxsize=None)
def _bracket_operator(brackets: tuple[tuple[int, int, int], ...]) -> dict[tuple[Monomial, ...], int]:
    """Expand a product of 3x3 brackets of differential operators.

    Keys are sorted tuples of per-copy exponent vectors, values are
    integer coefficients already multiplied by the ``alpha!`` factors.
    """
    copies = 1 + max(max(b) for b in brackets)
    perms = [(p, _perm_sign(p)) for p in permutations(range(3))]
    expanded: dict[tuple[Monomial, ...], int] = {}
    for choice in product(perms, repeat=len(brackets)):
        exps = [[0, 0, 0] for _ in range(copies)]
        sign = 1
        for bracket, (perm, sg) in zip(brackets, choice):
            sign *= sg
            for copy, var in zip(bracket, perm):
                exps[copy][var] += 1
        key = tuple(sorted(tuple(e) for e in exps))
        expanded[key] = expanded.get(key, 0) + sign
    out = {}
    for key, c in expanded.items():
        if c:
            weight = 1
            for e in key:
                weight *= factorial(e[0]) * factorial(e[1]) * factorial(e[2])
            out[key] = c * weight
    return out


def _evaluate_bracket(Q: Polynomial, brackets) -> Fraction:
    total = Fraction(0)
    for key, c in _bracket_operator(brackets).items():
        term = Fraction(c)
        for e in key:
            a = Q.coeff(e)
            if not a:
                break
            term *= a
        else:
            total += term
    return total


def _check_cubic(Q: Polynomial) -> None:
    if Q.nvars != 3 or not Q.is_homogeneous(3) or Q.is_zero():
        raise NotHomogeneous("expected a ternary cubic form")


def aronhold_S(Q: Polynomial) -> Fraction:
    _check_cubic(Q)
    return _S_SCALE * _evaluate_bracket(Q, _S_BRACKETS)


def aronhold_T(Q: Polynomial) -> Fraction:
    _check_cubic(Q)
    return _T_SCALE * _evaluate_bracket(Q, _T_BRACKETS)


def hesse_cubic(t) -> Polynomial:
    """``z1^3 + z2^3 + z3^3 + t z1 z2 z3``."""
    return Polynomial(3, {(3, 0, 0): 1, (0, 3, 0): 1, (0, 0, 3): 1, (1, 1, 1): Fraction(t)})


def j_of_Qt(t) -> Fraction:
    """Closed formula for J on the Hesse pencil."""
    t = Fraction(t)
    t3 = t ** 3
    if t3 + 27 == 0:
        raise HessePencilDegenerate("t^3 = -27 gives a singular cubic")
    return -t3 * (t3 - 216) ** 3 / (110592 * (t3 + 27) ** 3)


@lru_cache(maxsize=None)
def j_calibration() -> Fraction:
    """The constant ``c`` in ``J = c S^3 / Delta``, fixed on the Hesse pencil
    at t = 1, 2 and checked at t = 3."""
    consts = []
    for t in (1, 2, 3):
        Q = hesse_cubic(t)
        S, T = aronhold_S(Q), aronhold_T(Q)
        consts.append(j_of_Qt(t) * (T * T + 64 * S ** 3) / S ** 3)
    if not consts[0] == consts[1] == consts[2]:
        raise ArithmeticError(f"inconsistent calibration constants {consts}")
    return consts[0]


@dataclass(frozen=True)
class CubicInvariants:
    S: Fraction
    T: Fraction
    Delta: Fraction
    J: Fraction


def cubic_invariants(Q: Polynomial) -> CubicInvariants:
    S, T = aronhold_S(Q), aronhold_T(Q)
    delta = T * T + 64 * S ** 3
    if delta == 0:
        raise DegenerateCubic("the cubic is singular (Delta = 0)")
    return CubicInvariants(S, T, delta, j_calibration() * S ** 3 / delta)
