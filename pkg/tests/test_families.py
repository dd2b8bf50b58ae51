from __future__ import annotations

import json

import pytest

from betalab import beta_dynamics as bd
from betalab import families_finiteness as ff
from betalab.exact_field import NotPisot
from betalab.families_finiteness import ConstraintViolation, FamilySpec, build


def P(n):
    return build(FamilySpec("P", n))


def test_family_constraints():
    with pytest.raises(ConstraintViolation):
        FamilySpec("Q", 4, 2, 1)
    with pytest.raises(ConstraintViolation):
        FamilySpec("Q", 4, 1, 2)
    with pytest.raises(ConstraintViolation):
        FamilySpec("R", 4, c=4)
    with pytest.raises(ConstraintViolation):
        FamilySpec("R", 4, c=0)
    with pytest.raises(ConstraintViolation):
        FamilySpec("X", 4)
    assert FamilySpec("R", 4, c=-3).coeffs == (1, -4, 1, -4, -3, 3)


def test_q211_polynomial():
    assert FamilySpec("Q", 2, 1, 1).coeffs == (1, -2, 0, -1, -1)
    assert build(FamilySpec("Q", 2, 1, 1)).floor_beta == 2


def test_r_family_floor_and_pisot_flag():
    assert build(FamilySpec("R", 3, c=1)).is_pisot
    with pytest.raises(NotPisot):
        build(FamilySpec("R", 3, c=2))
    R = build(FamilySpec("R", 3, c=2), allow_non_pisot=True)
    assert R.floor_beta == 2 and not R.is_pisot


def test_fractional_part():
    Q = P(2)
    digits, x = ff.fractional_part(Q, 6)
    assert digits == (2, 0)
    assert bd.expand(x).word.render() == "0.210(00112)^w"
    assert ff.fractional_part(Q, 1) == ((1,), Q.zero)


def test_beta_fractional_part_of_n_beta_plus_two():
    for n in range(2, 8):
        Q = P(n)
        x = ff.beta_fractional_part(Q.beta * n + 2)
        assert x == bd.digits_value(Q, (n - 1, 1, 1, n, n))
        assert not bd.is_fin(x)[0]


def test_scan_p2_and_gaps():
    rep = ff.scan_f1(P(2), 60)
    assert rep.non_finite[0] == 6
    assert not rep.gaps  # every N >= 6 fails up to 60
    gappy = ff.scan_f1(P(6), 40)
    assert gappy.gap_list == [37]
    data = rep.to_json()
    assert data["verdict"] == "F1 fails"
    assert ff.F1Report.from_json(json.loads(json.dumps(data))).non_finite == rep.non_finite


def test_scan_groups_by_fractional_part():
    n = 6
    rep = ff.scan_f1(P(n), n * n + 3)
    cls = next(c for c in rep.classes.values() if n * n in c)
    assert n * n + 1 in cls
    assert n * n + 2 not in cls


def test_scan_cache(tmp_path, monkeypatch):
    monkeypatch.setenv(ff.CACHE_ENV, str(tmp_path))
    first = ff.scan_f1(P(3), 50)
    files = list(tmp_path.iterdir())
    assert len(files) == 1
    again = ff.scan_f1(P(3), 50)
    assert again.to_json() == first.to_json()


@pytest.mark.parametrize(
    "n, N, finite",
    [(6, 36, False), (6, 38, True), (9, 81, False), (9, 83, True), (5, 27, False), (8, 66, False), (11, 123, True), (11, 146, False)],
)
def test_frozen_memberships(n, N, finite):
    assert bd.is_fin(P(n).from_int(N))[0] is finite


def test_residue_table_all_pass():
    claims = ff.residue_table(2, 16)
    assert claims and all(c.passed for c in claims)
    names = {c.name for c in claims if c.n == 11}
    assert "first non-finite N is n^2+2n+3 (n = 2 mod 3, n = 3 mod 4)" in names
    with pytest.raises(ValueError):
        ff.residue_table(1, 3)


def test_check_suff():
    assert ff.check_suff(P(7)).verdict is ff.Verdict.HOLDS
    assert ff.check_suff(P(6)).verdict is ff.Verdict.INCONCLUSIVE
    rep = ff.check_suff(build(FamilySpec("Q", 2, 1, 1)))
    assert rep.verdict is ff.Verdict.INCONCLUSIVE
    assert not all(rep.powers.values())
    crossed = ff.check_suff(P(4), cross_check_to=300)
    assert crossed.scan is not None and crossed.scan.non_finite == []


def test_check_suff_needs_finite_one():
    from betalab.exact_field import make_pisot

    # x^3 - 3x^2 + 2x - 1 gives [1] = 20(1)^w
    with pytest.raises(bd.InfiniteExpansionOfOne):
        ff.check_suff(make_pisot((1, -3, 2, -1)))


def test_akiyama_small():
    Q = P(2)
    rep = ff.akiyama_set(Q)
    assert len(rep.elements) == 207
    assert rep.property_f == "fails"
    assert any(e.element == Q.alpha and e.finite for e in rep.elements)
    # enlarging the box adds nothing
    assert len(ff.akiyama_set(Q, margin=10).elements) == 207
    for e in rep.elements:
        assert 0 < e.element < 1


def test_q_family_words():
    r = ff.q_family_checks(2, 1, 1)
    assert r["1-alpha"] == "0.111(00012)^w"
    assert r["n+1 not finite"]
    assert r["r1 = .c"] and r["r2 = .bc"] and r["r3 = .0bc = alpha"]
    r = ff.q_family_checks(3, 1, 2)
    assert r["1-alpha"] == "0.220(01112)^w"
    assert r["1-2alpha"] == "0.2010301012" and r["2n+1 finite"]
    r = ff.q_family_checks(6, 1, 5)
    assert r["1-alpha matches the general word"]


def test_q_family_displayed_word_fails_when_c_exceeds_b_plus_one():
    r = ff.q_family_checks(7, 2, 5)
    assert r["1-2alpha"] == "0.6201016255(44230)^w"
    assert not r["1-2alpha matches the displayed word"]
    assert not r["2n+1 finite"]


def test_r_family_words():
    r = ff.r_family_checks(3, 1)
    assert r["n"] == "10.0001(202)^w"
    assert r["1-alpha matches the displayed word"]
    r = ff.r_family_checks(4, 2)
    assert r["n not finite"] and r["1-alpha matches the displayed word"]
    with pytest.raises(ConstraintViolation):
        ff.r_family_checks(4, -1)
