"""Recover a homogeneous polynomial map from an abstract algebra table.

Pipeline: maximal ideal and nil-index, ``n = dim m/m^2``,
``m = nu/n + 1``, a complement ``f`` to ``m^2`` in ``m``, images of the
degree-``m`` monomials at ``f`` projected modulo ``m^{m+1}``, and the
``n`` linear relations among them. Those relations are the coefficient
rows of the recovered map.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algebra import (
    AlgebraTable,
    Subspace,
    annihilator,
    check_gorenstein,
    complement_basis,
    eval_poly_in_algebra,
    ideal_powers,
    maximal_ideal,
    project_coords,
    unit,
)
from .errors import (
    BadAmbientDim,
    DimensionMismatch,
    KernelDimMismatch,
    MilnorReconError,
    NotFiniteAtOrigin,
    NotInSpan,
    NuNotDivisible,
)
from .exact import (
    Matrix,
    Monomial,
    PolyMap,
    Polynomial,
    Vector,
    left_kernel_basis,
    monomials_of_degree,
    rref,
    solve,
    transpose,
)
from .milnor import build_milnor_table, is_finite_at_origin


@dataclass
class Structure:
    """Basis-free data of a local Gorenstein table."""

    one: Vector
    ideal: Subspace
    powers: list[Subspace]  # m^0 .. m^nu, 0
    nu: int
    socle: Subspace

    @property
    def loewy(self) -> list[int]:
        return [self.powers[i].dim - self.powers[i + 1].dim for i in range(len(self.powers) - 1)]


@dataclass
class ReconstructionReport:
    N: int
    nu: int
    n: int
    m: int
    f_coords: list[Vector]
    gamma: Matrix
    phi: PolyMap
    monomials: list[Monomial]
    loewy: list[int]
    diagnostics: list[tuple[str, str]] = field(default_factory=list)


def analyze(T: AlgebraTable) -> Structure:
    one = unit(T)
    mi = maximal_ideal(T)
    socle = check_gorenstein(T, mi)
    powers = ideal_powers(T, mi)
    return Structure(one, mi, powers, len(powers) - 2, socle)


def recover_dims(T: AlgebraTable, st: Structure | None = None) -> tuple[int, int, int]:
    """``(n, m, nu)`` from the table alone."""
    st = st or analyze(T)
    n = st.powers[1].dim - st.powers[2].dim
    if n < 2:
        raise BadAmbientDim(f"dim m/m^2 = {n}, need at least 2 variables")
    if st.nu % n:
        raise NuNotDivisible(f"nil-index {st.nu} is not divisible by n = {n}")
    return n, st.nu // n + 1, st.nu


def monomial_images(
    T: AlgebraTable,
    f: Sequence[Vector],
    m: int,
    st: Structure | None = None,
) -> tuple[list[Vector], list[Vector], Matrix]:
    """Images ``q_rho(f)``, a complement ``S`` to ``m^{m+1}`` in ``m^m``,
    and the ``K x (K-n)`` matrix of projections onto ``S``."""
    st = st or analyze(T)
    n = len(f)
    monos = monomials_of_degree(n, m)
    K = len(monos)
    upper = st.powers[m] if m < len(st.powers) else Subspace.zero(T.dim)
    lower = st.powers[m + 1] if m + 1 < len(st.powers) else Subspace.zero(T.dim)
    S = complement_basis(lower, upper)
    if len(S) != K - n:
        raise DimensionMismatch(f"dim m^{m}/m^{m + 1} = {len(S)}, expected K - n = {K - n}")
    images = [eval_poly_in_algebra(T, Polynomial.monomial(mu), f, one=st.one) for mu in monos]
    try:
        pi = [project_coords(x, S, lower) for x in images]
    except NotInSpan as exc:
        raise DimensionMismatch(f"monomial image outside m^{m}") from exc
    return images, S, pi


def relation_matrix(pi_coords: Matrix, n: int | None = None) -> Matrix:
    """RREF basis of the linear relations among the rows of ``pi_coords``."""
    K = len(pi_coords)
    gamma = left_kernel_basis(pi_coords, rows=K)
    expected = n if n is not None else K - (len(pi_coords[0]) if pi_coords else 0)
    if len(gamma) != expected or not gamma:
        raise KernelDimMismatch(f"found {len(gamma)} relations, expected {expected}")
    return gamma


def reconstruct_map(T: AlgebraTable) -> ReconstructionReport:
    diag: list[tuple[str, str]] = []
    st = analyze(T)
    diag.append(("maximal_ideal", f"dim {st.ideal.dim}, nil-index {st.nu}, Gorenstein"))
    n, m, nu = recover_dims(T, st)
    diag.append(("dimensions", f"n={n}, m={m}"))
    f = complement_basis(st.powers[2], st.powers[1])
    diag.append(("complement", f"{len(f)} generators"))
    _, S, pi = monomial_images(T, f, m, st)
    diag.append(("projection", f"dim S = {len(S)}"))
    gamma = relation_matrix(pi, n)
    diag.append(("relations", f"{len(gamma)} independent relations"))
    monos = monomials_of_degree(n, m)
    phi = tuple(Polynomial.from_coords(n, monos, row) for row in gamma)
    if not is_finite_at_origin(phi):
        raise NotFiniteAtOrigin("the recovered map has a nontrivial common zero")
    diag.append(("finite", "recovered map is finite at the origin"))
    return ReconstructionReport(T.dim, nu, n, m, f, gamma, phi, monos, st.loewy, diag)


@dataclass
class Verdict:
    status: str  # "candidate" or "rejected"
    reason: str | None = None
    detail: str = ""
    report: ReconstructionReport | None = None
    certificate: dict | None = None

    @property
    def ok(self) -> bool:
        return self.status == "candidate"


def invariants(T: AlgebraTable) -> dict:
    st = analyze(T)
    return {"dim": T.dim, "nu": st.nu, "loewy": st.loewy, "socle_dim": annihilator(T, st.ideal).dim}


def recognize(T: AlgebraTable) -> Verdict:
    """Run the pipeline and compare basis-free invariants with the rebuilt
    quotient algebra. Passing is a necessary condition only."""
    try:
        report = reconstruct_map(T)
    except MilnorReconError as exc:
        return Verdict("rejected", exc.reason, str(exc))
    rebuilt = build_milnor_table(report.phi).table
    ours, theirs = invariants(T), invariants(rebuilt)
    cert = {"input": ours, "rebuilt": theirs}
    if ours != theirs:
        return Verdict("rejected", "InvariantMismatch", "rebuilt algebra differs", report, cert)
    return Verdict("candidate", None, "all necessary conditions hold", report, cert)


def linear_alignment(source: Sequence[Polynomial], target: Sequence[Polynomial]) -> list[list[Fraction]] | None:
    """Matrix ``B`` with ``target = B source`` when both maps span the same
    space of forms, else None."""
    monos = sorted({e for p in list(source) + list(target) for e in p.terms}, reverse=True)
    src = [p.coords(monos) for p in source]
    cols = transpose(src) if src else []
    B = []
    for p in target:
        row = solve(cols, p.coords(monos))
        if row is None:
            return None
        B.append(row)
    if rref(B)[2] != len(source):
        return None
    return B
