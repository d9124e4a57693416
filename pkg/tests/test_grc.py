import cmath
import itertools
import random
from fractions import Fraction

import pytest

from kdiff import CycNum, parse_cycnum, root_of_unity
from kdiff.generate import compare, random_instances
from kdiff.grc import (
    BudgetExceeded,
    check_4ab,
    check_condition_4,
    check_condition_4hat,
    cover_offsets_pass,
    p_nk_evaluate,
    p_nk_vanishes,
    verify_instance,
)
from kdiff.twisted import InvalidInstanceError, scale_roots

from instances import (
    cubic_single_zero,
    random_gauge,
    relabel_levels,
    three_level_chain,
    two_level_abelian,
    two_loop_vertex,
)


def roots(*texts):
    return [parse_cycnum(s) for s in texts]


def test_p_vanishes_examples():
    assert p_nk_vanishes(roots("1", "1"), 2) == (True, (0, 1))
    assert p_nk_vanishes(roots("1", "z8"), 2) == (False, None)
    assert p_nk_vanishes(roots("1", "z3", "z3^2"), 3) == (True, (0, 0, 0))
    assert p_nk_vanishes([], 4) == (True, ())
    assert p_nk_vanishes(roots("0"), 3) == (True, (0,))


def test_p_closed_forms():
    assert p_nk_evaluate(roots("2", "1"), 2) == 9
    assert p_nk_evaluate(roots("1+z5"), 3) == parse_cycnum("1+z5") ** 3
    assert p_nk_evaluate([], 3) == 1


def _complex_product(rs, k):
    z = cmath.exp(2j * cmath.pi / k)
    total = 1
    for exps in itertools.product(range(k), repeat=len(rs)):
        total *= sum(r.to_complex() * z ** j for r, j in zip(rs, exps))
    return total


@pytest.mark.parametrize("seed", range(4))
def test_p_evaluate_matches_floating_point(seed):
    rng = random.Random(seed)
    for _ in range(25):
        k = rng.randint(1, 3)
        rs = [parse_cycnum(rng.choice(["1", "-2", "z3", "1/2+z4", "z6^5"])) for _ in range(rng.randint(1, 3))]
        expected = _complex_product(rs, k)
        assert abs(p_nk_evaluate(rs, k).to_complex() - expected) <= 1e-9 * max(1.0, abs(expected))


def test_p_depends_only_on_kth_powers():
    rs = roots("1", "2-z5", "z3")
    base = p_nk_evaluate(rs, 3)
    for i in range(3):
        moved = list(rs)
        moved[i] = moved[i] * root_of_unity(3, 1)
        assert p_nk_evaluate(moved, 3) == base


def test_p_budget():
    with pytest.raises(BudgetExceeded):
        p_nk_evaluate(roots("1", "1", "1"), 3, budget=26)
    with pytest.raises(BudgetExceeded):
        p_nk_vanishes(roots("1", "z8", "z8", "z8"), 2, budget=3)


def test_three_level_chain_holds_by_criss_cross():
    t = three_level_chain()
    report = check_condition_4(t)
    assert report.holds is True
    lower = report.instances[-1]
    assert (lower.level, lower.case) == (-2, "iv")
    assert lower.witness == {"K": -1, "offsets": {1: 0, 2: 1}}
    assert all(verify_instance(t, v) for v in report.instances)
    cover = check_condition_4hat(t)
    assert cover.holds is True
    assert cover.witness == {1: 0, 2: 1, 3: 0}
    assert cover_offsets_pass(t, cover.witness)


def test_three_level_chain_violated_with_cancelling_roots():
    t = three_level_chain("1", "-1", "1")
    report = check_condition_4(t, all_cases=True)
    assert report.holds is False
    assert [v.level for v in report.violated()] == [-2]
    assert report.violated()[0].satisfied_cases == []
    assert check_condition_4hat(t).holds is False


def test_three_level_chain_holds_when_lower_residue_vanishes():
    t = three_level_chain("1", "-1", "0")
    report = check_condition_4(t)
    assert report.holds is True
    assert [v.case for v in report.instances] == ["v", "v"]
    assert all(verify_instance(t, v) for v in report.instances)
    assert check_condition_4hat(t) == (True, {1: 0, 2: 0, 3: 0})


def test_single_level_instances_hold_vacuously():
    for t in (cubic_single_zero(), two_loop_vertex(), two_loop_vertex(False)):
        assert check_condition_4(t).instances == []
        assert check_condition_4(t).holds is True
        assert check_condition_4hat(t).holds is True


def test_invalid_instance_is_rejected():
    with pytest.raises(InvalidInstanceError):
        check_condition_4(three_level_chain("1", "1", "0"))
    with pytest.raises(InvalidInstanceError):
        check_condition_4hat(three_level_chain("1", "1", "0"))


def test_abelian_condition_examples():
    assert check_4ab(two_level_abelian()).instances[0].case == "v"
    assert check_4ab(two_level_abelian(("1", "1"))).holds is False
    assert check_4ab(two_level_abelian(("1", "1"), top_pole=True)).instances[0].case == "i"
    with pytest.raises(ValueError):
        check_4ab(three_level_chain())


def test_k1_direct_condition_agrees_with_abelian_condition():
    for t in random_instances(200, seed=2, ks=(1,)):
        assert check_condition_4(t).holds == check_4ab(t).holds


def test_budget_gives_indeterminate_verdict():
    t = three_level_chain()
    assert check_condition_4hat(t, budget=1).holds is None
    assert check_condition_4hat(t, budget=1).status == "indeterminate"
    assert check_condition_4(t, budget=0).holds is None


def test_budget_from_environment(monkeypatch):
    monkeypatch.setenv("KDIFF_BUDGET", "1")
    assert check_condition_4hat(three_level_chain()).holds is None
    monkeypatch.delenv("KDIFF_BUDGET")
    assert check_condition_4hat(three_level_chain()).holds is True


def test_report_json_shape():
    data = check_condition_4(three_level_chain()).to_json()
    assert data["holds"] is True
    assert set(data["instances"][0]) == {"level", "component_vertices", "case", "witness"}


@pytest.mark.parametrize("seed", range(3))
def test_criteria_agree_and_witnesses_verify(seed):
    for t in random_instances(150, seed=100 + seed, ks=(2, 3, 4)):
        direct, cover = compare(t)
        assert direct == cover
        report = check_condition_4(t)
        for v in report.instances:
            if v.satisfied:
                assert verify_instance(t, v)
        found = check_condition_4hat(t)
        if found.holds:
            assert cover_offsets_pass(t, found.witness)


@pytest.mark.parametrize("seed", range(3))
def test_verdicts_survive_gauge_and_relabelling(seed):
    rng = random.Random(seed)
    for t in random_instances(80, seed=200 + seed, ks=(2, 3, 4)):
        before = (check_condition_4(t).holds, check_condition_4hat(t).holds)
        moved = random_gauge(t, rng)
        assert (check_condition_4(moved).holds, check_condition_4hat(moved).holds) == before
    broken = three_level_chain("1", "-1", "1")
    assert check_condition_4(relabel_levels(broken, rng)).holds is False


def test_rational_scaling_keeps_chain_verdicts():
    for args, expected in [(("0", "0", "1"), True), (("1", "-1", "1"), False), (("1", "-1", "0"), True)]:
        t = three_level_chain(*args)
        scaled = scale_roots(t, CycNum.from_json(str(Fraction(7, 3))))
        assert check_condition_4(scaled).holds is expected
        assert check_condition_4hat(scaled).holds is expected
