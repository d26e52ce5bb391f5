import pytest

from codsum.harness import (
    abelian_specs_of_order,
    abelian_specs_up_to,
    frobenius_metacyclic_specs,
    partitions,
    run_lemma22,
    run_lemma23,
    run_prop32,
    run_suite,
    run_thm11,
    run_thm12,
)


def test_partitions():
    assert partitions(0) == [()]
    assert partitions(1) == [(1,)]
    assert partitions(4) == [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]
    assert len(partitions(8)) == 22


def test_abelian_enumeration():
    assert len(abelian_specs_of_order(1)) == 1
    assert len(abelian_specs_of_order(8)) == 3
    assert len(abelian_specs_of_order(36)) == 4  # partitions(2)**2
    assert len(abelian_specs_of_order(256)) == 22
    labels = {s.label() for s in abelian_specs_of_order(8)}
    assert labels == {"C8", "C2xC4", "C2xC2xC2"}
    up = abelian_specs_up_to(16)
    assert len(up) == sum(len(abelian_specs_of_order(n)) for n in range(1, 17))
    orders = [s.order for s in up]
    assert orders == sorted(orders)


def test_frobenius_enumeration():
    specs = frobenius_metacyclic_specs(30)
    as_tuples = {(s.n, s.m, s.r) for s in specs}
    assert (3, 2, 2) in as_tuples  # S3
    assert (5, 4, 2) in as_tuples and (5, 4, 3) in as_tuples
    assert (5, 2, 4) in as_tuples  # dihedral of order 10
    assert all(s.is_frobenius for s in specs)
    assert all(s.n * s.m <= 30 for s in specs)
    # no duplicates, deterministic order
    assert len(as_tuples) == len(specs)
    assert specs == frobenius_metacyclic_specs(30)


def test_run_lemma22_small():
    res = run_lemma22(p_values=(2, 3), max_exp_sum=4, lower_bound_max=50)
    assert res.passed
    checks = {i["check"] for i in res.instances}
    assert checks == {
        "submultiplicativity",
        "cyclic_lower_bound",
        "primepower_vs_ordersum",
        "pgroup_congruence",
        "direct_product",
    }


def test_run_lemma23():
    res = run_lemma23()
    assert res.passed
    applicable = [i for i in res.instances if i["applicable"]]
    assert res.summary["applicable"] == len(applicable)
    # the three nonabelian p-groups of the corpus appear
    pg = [i for i in applicable if i["check"] == "pgroup_class_bound"]
    assert {i["group"] for i in pg} == {"D8", "Q8", "Heis27"}
    sylow = [i for i in applicable if i["check"] == "nonnormal_sylow_ratio"]
    assert {i["group"] for i in sylow} >= {"C3:C2(r=2)", "C5:C4(r=2)", "CE[2]"}


def test_run_thm11_small():
    res = run_thm11(max_abelian=32, oracle_max=24)
    assert res.passed
    kinds = {i.get("check", i.get("family")) for i in res.instances}
    assert "abelian_bound" in kinds and "oracle_agreement" in kinds
    sylow = [i for i in res.instances if i.get("check") == "largest_prime_sylow"]
    assert {i["group"] for i in sylow} == {"CE[2]", "CE[2]xC2", "D8", "Q8", "Heis27"}
    assert all(i["hypothesis_holds"] and i["pass"] for i in sylow)


def test_run_thm12_small():
    res = run_thm12(max_order=60)
    assert res.passed
    assert res.summary["max_ratio"] == "2/7"
    assert res.summary["max_ratio_group"] == "C3:C2(r=2)"
    assert all(i["pass"] for i in res.instances)


def test_run_thm12_parallel_matches_serial():
    serial = run_thm12(max_order=40, threads=1)
    parallel = run_thm12(max_order=40, threads=2)
    assert serial.to_json_dict() == parallel.to_json_dict()


def test_run_prop32():
    res = run_prop32()
    assert res.passed
    assert res.summary["max_t"] == 100
    assert res.summary["discrepancy"] is True
    claim = next(i for i in res.instances if i["check"] == "stated_claim_t_le_99")
    assert claim["pass"]


def test_run_suite_dispatch():
    assert run_suite("prop32")[0].suite == "prop32"
    with pytest.raises(ValueError):
        run_suite("nope")
