"""The Ẽ6 multiplication table, transcribed verbatim (0-based indices)."""

from fractions import Fraction

from milnor_recon.algebra import AlgebraTable


def e6_table(t) -> AlgebraTable:
    t = Fraction(t)
    s = t / 3
    # keys use the 1-based names e1..e8
    prods = {
        (2, 2): {3: -s, 6: 2 * s},
        (2, 3): {6: 1},
        (2, 4): {5: 1, 6: -1, 8: -1},
        (2, 5): {7: 1},
        (2, 8): {7: 1},
        (4, 4): {7: -s},
        (4, 5): {3: 1, 6: -2},
        (4, 7): {6: 1},
        (4, 8): {3: 1, 6: -2},
        (5, 5): {5: -s, 6: 2 + t, 8: s},
        (5, 8): {5: -s, 6: 1 + t, 8: s},
        (8, 8): {5: -s, 6: t, 8: s},
    }
    for j in range(1, 9):
        prods[(1, j)] = {j: 1}
    return AlgebraTable(8, {(k - 1, l - 1): {j - 1: c for j, c in v.items()} for (k, l), v in prods.items()})


def e(*idx, coeffs=None):
    """Coordinate vector of a combination of e1..e8 (1-based)."""
    v = [Fraction(0)] * 8
    for i, k in enumerate(idx):
        v[k - 1] += Fraction(coeffs[i]) if coeffs else 1
    return v
