import math
import random

import pytest

from cycflats import (
    HasColoops,
    TuttePolynomial,
    config_isomorphic,
    configuration,
    expand,
    popcount,
    tutte_polynomial,
    uniform,
    validate_axioms,
)
from cycflats.catalog import entries, get

from oracles import basis_count_oracle, rank_table_oracle, tutte_eval_oracle


def _terms(t: TuttePolynomial):
    return {(d["x"], d["y"]): int(d["c"]) for d in t.to_json_dict()["terms"]}


def test_hand_computed_tiny_tuttes():
    assert _terms(tutte_polynomial(uniform(1, 2))) == {(1, 0): 1, (0, 1): 1}
    assert _terms(tutte_polynomial(uniform(2, 3))) == {(2, 0): 1, (1, 0): 1,
                                                       (0, 1): 1}
    assert _terms(tutte_polynomial(uniform(2, 4))) == {(2, 0): 1, (1, 0): 2,
                                                       (0, 1): 2, (0, 2): 1}


def test_empty_and_free_matroids():
    assert _terms(tutte_polynomial(uniform(0, 0))) == {(0, 0): 1}
    assert _terms(tutte_polynomial(uniform(3, 3))) == {(3, 0): 1}
    assert _terms(tutte_polynomial(uniform(0, 2))) == {(0, 2): 1}


def test_basis_count_and_subset_count_on_catalog():
    for entry in entries().values():
        m = entry.matroid
        t = tutte_polynomial(m)
        assert t.evaluate(1, 1) == basis_count_oracle(m)
        assert t.evaluate(2, 2) == 1 << m.ground.n


def test_polynomial_matches_subset_sum_oracle_on_grid():
    for name in ("fig1_M", "fig1_N", "fig2_M", "fig2_N", "fig3_N"):
        m = get(name)
        t = tutte_polynomial(m)
        r = m.rank(m.ground.full)
        n = m.ground.n
        for x in range(-1, r + 2):
            for y in range(-1, n - r + 2):
                assert t.evaluate(x, y) == tutte_eval_oracle(m, x, y)


def test_dual_swaps_variables():
    for entry in entries().values():
        m = entry.matroid
        t = tutte_polynomial(m)
        td = tutte_polynomial(m.dual())
        assert _terms(td) == {(j, i): c for (i, j), c in _terms(t).items()}


def test_deletion_contraction_recurrence():
    rng = random.Random(19)
    for name in ("fig1_N", "fig2_M", "fig3_N"):
        m = get(name)
        g = m.ground
        # pick an element that is neither a loop nor a coloop
        candidates = [i for i in range(g.n)
                      if not (m.loops >> i & 1) and not (m.coloops >> i & 1)]
        e = 1 << rng.choice(candidates)
        t = tutte_polynomial(m)
        t_del = tutte_polynomial(m.delete(e))
        t_con = tutte_polynomial(m.contract(e))
        for x in range(-2, 4):
            for y in range(-2, 4):
                assert t.evaluate(x, y) == (t_del.evaluate(x, y)
                                            + t_con.evaluate(x, y))


def test_big_uniform_basis_count_uses_exact_integers():
    t = tutte_polynomial(uniform(9, 18))
    assert t.evaluate(1, 1) == math.comb(18, 9)
    assert t.evaluate(2, 2) == 1 << 18


def test_tutte_json_round_trip():
    t = tutte_polynomial(get("fig2_N"))
    again = TuttePolynomial.from_json_dict(t.to_json_dict())
    assert _terms(again) == _terms(t)
    assert again.evaluate(3, -2) == t.evaluate(3, -2)


def test_coefficient_accessor():
    t = tutte_polynomial(uniform(2, 4))
    assert t.coefficient(1, 0) == 2
    assert t.coefficient(0, 2) == 1
    assert t.coefficient(5, 5) == 0


def test_configuration_hand_values():
    c = configuration(get("fig1_M"))
    d = c.to_json_dict()
    sizes = sorted((node["size"], node["rank"]) for node in d["nodes"])
    assert sizes == [(0, 0), (3, 2), (3, 2), (6, 3)]
    assert len(d["covers"]) == 4  # bottom under both lines, both lines under top

    c2 = configuration(get("fig2_N"))
    d2 = c2.to_json_dict()
    sizes2 = sorted((node["size"], node["rank"]) for node in d2["nodes"])
    assert sizes2 == [(0, 0), (3, 2), (3, 2), (3, 2), (9, 3)]


def test_configuration_rejects_coloops():
    with pytest.raises(HasColoops):
        configuration(uniform(3, 3))
    with pytest.raises(HasColoops):
        configuration(uniform(2, 2))
    # loops are fine
    configuration(uniform(0, 2))


def test_config_isomorphic_pairs_and_witness():
    pairs = [("fig1_M", "fig1_N"), ("fig2_M", "fig2_N")]
    for a, b in pairs:
        ca = configuration(get(a))
        cb = configuration(get(b))
        ok, mapping = config_isomorphic(ca, cb)
        assert ok
        da = ca.to_json_dict()
        db = cb.to_json_dict()
        nodes_a = {node["id"]: (node["size"], node["rank"])
                   for node in da["nodes"]}
        nodes_b = {node["id"]: (node["size"], node["rank"])
                   for node in db["nodes"]}
        # witness is a size-and-rank preserving bijection carrying covers
        image = [mapping[str(i)] if str(i) in mapping else mapping[i]
                 for i in nodes_a]
        assert sorted(image) == sorted(nodes_b)
        for i, j in da["covers"]:
            mi = mapping[str(i)] if str(i) in mapping else mapping[i]
            mj = mapping[str(j)] if str(j) in mapping else mapping[j]
            assert [mi, mj] in db["covers"]


def test_config_isomorphic_distinguishes():
    c1 = configuration(get("fig1_M"))
    c2 = configuration(get("fig2_M"))
    ok, witness = config_isomorphic(c1, c2)
    assert not ok
    c3 = configuration(get("fig3_N"))
    ok2, _ = config_isomorphic(configuration(get("fig1_N")), c3)
    assert not ok2


def test_config_isomorphic_is_an_equivalence_spotcheck():
    cm = configuration(get("fig1_M"))
    cn = configuration(get("fig1_N"))
    assert config_isomorphic(cm, cm)[0]
    assert config_isomorphic(cm, cn)[0] == config_isomorphic(cn, cm)[0]
    # transitivity through the pair and back
    assert config_isomorphic(cn, cn)[0]


def test_same_configuration_forces_same_tutte():
    # coloop-free pairs with isomorphic configurations share the polynomial
    for a, b in (("fig1_M", "fig1_N"), ("fig2_M", "fig2_N")):
        ma, mb = get(a), get(b)
        assert config_isomorphic(configuration(ma), configuration(mb))[0]
        assert _terms(tutte_polynomial(ma)) == _terms(tutte_polynomial(mb))
    # and the property transfers to clone expansions
    ma2, _ = expand(get("fig1_M"), 2)
    mb2, _ = expand(get("fig1_N"), 2)
    assert config_isomorphic(configuration(ma2), configuration(mb2))[0]
    assert _terms(tutte_polynomial(ma2)) == _terms(tutte_polynomial(mb2))


def test_threaded_tutte_matches_serial():
    m = get("fig2_M")
    assert _terms(tutte_polynomial(m, threads=4)) == _terms(
        tutte_polynomial(m, threads=1))
