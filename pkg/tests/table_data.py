"""Shared expected data for the certification tables (used by both the unit
tests and the acceptance suite)."""

from fractions import Fraction


def sqrt21(G):
    s = (G.field.zeta(7 * G.p) - G.field.zeta(-7 * G.p)) * (G.tau - G.taubar)
    assert s * s == 21
    return s


def sqrt7(G):
    assert G.n % 4 == 0
    s = G.field.zeta(G.n // 4) * (G.tau - G.taubar)
    assert s * s == 7
    return s


def table5_expectations(p, G):
    """bisector index -> (vertical lines, horizontal lines) on the chart of
    B1 and B3; exact field elements for closed forms, floats for decimals."""
    F = G.field.from_fraction
    if p == 3:
        s21 = sqrt21(G)
        v22 = F(Fraction(1, 2)) + s21 * Fraction(1, 42)
        h22 = (5 - s21) * Fraction(1, 6)
        v18 = (s21 - 3) * Fraction(1, 6)
        h4 = (7 - s21) * Fraction(1, 21)
        return {
            2: ([F(0)], []), 4: ([F(0)], [h4]),
            11: ([(21 + s21) * Fraction(1, 42)], [F(0)]), 12: ([], [F(0)]),
            18: ([v18], []), 21: ([v18], [h4]),
            22: ([v22], [h22]), 24: ([], [h22]), 26: ([v22], []),
        }
    if p == 4:
        s7 = sqrt7(G)
        h4 = 1 - s7 * Fraction(5, 14)
        v11 = (s7 * 5 - 7) * Fraction(1, 14)
        v18 = (3 - s7) * Fraction(1, 2)
        v22 = F(Fraction(-1, 2)) + s7 * Fraction(5, 14)
        h22 = 4 - s7 * Fraction(3, 2)
        return {
            2: ([F(0)], []), 4: ([F(0)], [h4]),
            11: ([v11], [F(0)]), 12: ([], [F(0)]),
            18: ([v18], []), 21: ([v18], [h4]),
            22: ([v22], [h22]), 24: ([], [h22]), 26: ([v22], []),
        }
    if p == 6:
        s21 = sqrt21(G)
        h4 = 4 - s21 * Fraction(6, 7)
        v11 = (s21 * 3 - 7) * Fraction(1, 14)
        v18 = (5 - s21) * Fraction(1, 2)
        v22 = F(Fraction(-1, 2)) + s21 * Fraction(3, 14)
        h22 = (23 - s21 * 5) * Fraction(1, 2)
        return {
            2: ([F(0)], []), 4: ([F(0)], [h4]),
            11: ([v11], [F(0)]), 12: ([], [F(0)]),
            18: ([v18], []), 21: ([v18], [h4]),
            22: ([v22], [h22]), 24: ([], [h22]), 26: ([v22], []),
        }
    dec = {
        5: {2: ([0.0], []), 4: ([0.0], [0.05801393]),
            11: ([0.44786394], [0.0]), 12: ([], [0.0]),
            18: ([0.18371174], []), 21: ([0.18371174], [0.05801393]),
            22: ([0.44786394], [0.03375000]), 24: ([], [0.03375000]),
            26: ([0.44786394], [])},
        8: {2: ([0.0], []), 4: ([0.0], [0.11986937]),
            11: ([0.57827900], [0.0]), 12: ([], [0.0]),
            18: ([0.27949078], []), 21: ([0.27949078], [0.11986937]),
            22: ([0.57827900], [0.07811509]), 24: ([], [0.07811509]),
            26: ([0.57827900], [])},
        # B18's closed form is printed with the wrong sign in the source
        # table; the exact gcd gives +(sqrt7-sqrt3)/2.
        12: {2: ([0.0], []), 4: ([0.0], [0.28759793]),
             11: ([0.80219658], [0.0]), 12: ([], [0.0]),
             18: ([0.45685025], []), 21: ([0.45685025], [0.28759793]),
             22: ([0.80219658], [0.20871215]), 24: ([], [0.20871215]),
             26: ([0.80219658], [])},
    }
    return dec[p]


# critical points inside the ridge of B1 and B3 (there are none for p <= 6)
TABLE6 = {
    8: {9: (0.22347669, 0.06214532, 11.44128654)},
    12: {9: (0.38008133, 0.18112900, 0.23597323),
         10: (0.38823985, 0.13852442, 0.18097266)},
}

EULER_VALUES = {
    3: Fraction(2, 63), 4: Fraction(25, 224), 5: Fraction(47, 280),
    6: Fraction(25, 126), 8: Fraction(99, 448), 12: Fraction(221, 1008),
}
