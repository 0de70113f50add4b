"""Smoke test for the jp_toric_py extension module."""

from fractions import Fraction
from pathlib import Path

import jp_toric_py as jt

FIXTURES = Path(__file__).resolve().parents[1] / "crates" / "core" / "tests" / "fixtures"


def main():
    half = jt.expand(["1/2"], depth=10)
    assert half.blocks == [[0], [2]] and half.terminated

    golden = jt.expand([{"quadratic": [-1, 1, 5, 2]}], depth=12)
    assert golden.blocks == [[0]] + [[1]] * 11

    trib = jt.DigitSequence(3, [[1, 1]] * 60)
    assert jt.detect_periodicity(trib, 4, 4) == (0, 1)
    (lo1, hi1), (lo2, hi2) = jt.reconstruct(trib, tolerance_exp10=-20)
    assert lo2 <= hi2 and hi2 - lo2 < Fraction(1, 10**20)
    assert Fraction(18392867552, 10**10) < hi2 and lo2 < Fraction(18392867553, 10**10)

    b = jt.digit_matrix([1, 1])
    assert abs(b.determinant()) == 1
    assert (b @ b.inverse()).is_identity()
    assert (b ** 3) == b @ b @ b

    assert jt.theta_from_lambda([(2, 1), (1, 1), (3, 1)]) == [Fraction(1, 2), Fraction(3, 2)]

    text = trib.to_json()
    assert jt.DigitSequence.from_json(text) == trib

    tail = jt.DigitSequence.from_json((FIXTURES / "tail_n3.json").read_text())
    base = jt.ToricAFAlgebra(tail)
    heads = [[[1, 1]], [[2, 1]]]
    images = [
        jt.ToricAFAlgebra(jt.DigitSequence(3, h + tail.blocks, False)) for h in heads
    ]
    w = images[0].stably_isomorphic(images[1])
    assert w is not None and w["offsets"] == [1, 1]
    assert base.to_dot(2).startswith("digraph bratteli {")

    rep = jt.build_representation(["a", "b"], [[1, -1]], base, images)
    assert rep.dimension == 3
    assert rep.matrices[0] == b
    assert all(ok for _, ok in rep.verify_relators())
    assert rep.homomorphism_failures(count=50, seed=1) == 0

    try:
        jt.expand(["2.0000", "0.5"], depth=3, max_precision=256)
    except jt.PrecisionExhaustedError:
        pass
    else:
        raise AssertionError("straddling interval should not certify a digit")

    print("smoke test passed")


if __name__ == "__main__":
    main()
