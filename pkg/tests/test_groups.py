"""Group tables, affine actions, and their validation witnesses."""

from fractions import Fraction

import pytest

from gcl.groups import GroupData, GroupValidationError, cyclic_group, product_of_cyclics

ROT90 = ((0, -1), (1, 0))
IDENT2 = ((1, 0), (0, 1))


def _rot_powers():
    mats = [IDENT2]
    for _ in range(3):
        prev = mats[-1]
        mats.append(
            tuple(
                tuple(sum(prev[i][k] * ROT90[k][j] for k in range(2)) for j in range(2))
                for i in range(2)
            )
        )
    return mats


def test_cyclic_group_basics():
    g = cyclic_group(4)
    assert g.identity == 0
    assert g.inv(1) == 3
    assert g.mul(3, 2) == 1
    assert g.prod([1, 1, 1, 1]) == 0
    assert list(g.elements()) == [0, 1, 2, 3]


def test_product_of_cyclics_klein():
    g = product_of_cyclics([2, 2])
    assert g.size == 4
    for a in g.elements():
        assert g.inv(a) == a
    assert g.tuple_labels[g.mul(1, 2)] == (1, 1)


def test_tuples_are_lexicographic():
    g = cyclic_group(2)
    assert list(g.tuples(2)) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert list(g.tuples(0)) == [()]


def test_translation_action_on_frequencies():
    # Z/2 shifting the circle by 1/2; characters pick up (-1)^k
    g = cyclic_group(2, dim=1, order=2, translations=[(Fraction(0),), (Fraction(1, 2),)])
    shift, freq = g.act_freq(1, (3,))
    assert (shift % 2, freq) == (1, (3,))
    shift, freq = g.act_freq(1, (2,))
    assert (shift % 2, freq) == (0, (2,))


def test_rotation_action_on_frequencies():
    g = cyclic_group(4, dim=2, order=4, matrices=_rot_powers(),
                     translations=[(Fraction(0), Fraction(0))] * 4)
    shift, freq = g.act_freq(1, (1, 0))
    assert shift == 0 and freq == (0, -1)
    # applying the generator four times round-trips
    f = (2, 5)
    for _ in range(4):
        _, f = g.act_freq(1, f)
    assert f == (2, 5)
    assert g.dx_pullback_row(1, 0) == (0, -1)


def test_right_action_composition_law():
    # b_{gh} = A_h b_g + b_h holds for the translation family k -> k/4
    g = cyclic_group(4, dim=1, order=4,
                     translations=[(Fraction(k, 4),) for k in range(4)])
    assert g.size == 4  # construction already validates the law


def test_nonassociative_table_rejected():
    with pytest.raises(GroupValidationError) as exc:
        GroupData(["e", "a", "b"], [[0, 1, 2], [1, 2, 0], [2, 1, 0]])
    assert "associative" in str(exc.value)
    assert exc.value.witness is not None


def test_missing_inverse_rejected():
    with pytest.raises(GroupValidationError):
        GroupData(["e", "a"], [[0, 1], [1, 1]])


def test_broken_action_law_rejected():
    with pytest.raises(GroupValidationError) as exc:
        cyclic_group(2, dim=1, order=3,
                     translations=[(Fraction(0),), (Fraction(1, 3),)])
    assert "right action" in str(exc.value)


def test_translation_denominator_must_divide_order():
    with pytest.raises(GroupValidationError) as exc:
        cyclic_group(2, dim=1, order=1,
                     translations=[(Fraction(0),), (Fraction(1, 2),)])
    assert "denominator" in str(exc.value)
