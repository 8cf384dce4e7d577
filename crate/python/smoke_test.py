"""Quick end-to-end check of the trop_morse_py extension module."""

from fractions import Fraction

import trop_morse_py as tm


def main():
    curve, divisor = tm.fixture("elliptic:3")
    rr = tm.verify_rr(curve, divisor)
    assert rr["lhs"] == rr["rhs"] == 3 and rr["ok"], rr
    assert tm.validate(curve, divisor) == []

    torus = tm.fixture("diag:2,3")
    points = tm.PointSet.from_torus(torus)
    assert len(points) == 6 and points.euler() == 6
    assert tm.bohr_sommerfeld_count([[2, 1], [0, 3]]) == 6
    assert tm.smith_diagonal([[2, 0], [0, 3]]) == [1, 6]

    segment = tm.fixture("segment:5")
    plus = tm.PointSet.from_toric(segment, 1)
    minus = tm.PointSet.from_toric(segment, -1)
    assert plus.euler() == 6 and minus.euler() == -4
    assert segment.ehrhart() == [Fraction(1), Fraction(5)]

    left = tm.PointSet.from_curve(*tm.fixture("elliptic:2"))
    product = left * tm.PointSet.from_curve(curve, divisor)
    assert product.euler() == 6

    assert tm.sym_euler(2, 3) == 4
    check = tm.verify_sym(left, 3)
    assert check["formula"] == check["oracle"] == 4

    m = tm.GradedModule.free(1, 2) + tm.GradedModule.free(0, 1)
    assert m.euler() == -1

    print("smoke test ok")


if __name__ == "__main__":
    main()
