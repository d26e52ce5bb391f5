import json

import pytest

from codsum.errors import SizeGuardError, SpecError
from codsum.groups import (
    AbelianGroupSpec,
    CounterexampleSpec,
    MetacyclicSpec,
    Permutation,
    PermutationGroupSpec,
    build_abelian,
    build_counterexample,
    build_cyclic,
    build_direct_product,
    build_metacyclic,
    load_spec,
    pgroup_library,
    save_spec,
    semidirect_exists,
)


def test_permutation_validation():
    with pytest.raises(SpecError):
        Permutation([0, 0, 1])
    with pytest.raises(SpecError):
        Permutation([0, 3, 1])
    p = Permutation([1, 2, 0])
    assert p.order() == 3
    assert p.compose(p.inverse()).is_identity()
    assert p.inverse().images.tolist() == [2, 0, 1]


def test_permutation_compose_convention():
    # compose applies the right factor first
    a = Permutation([1, 0, 2])
    b = Permutation([0, 2, 1])
    assert a.compose(b).images.tolist() == [1, 2, 0]
    assert b.compose(a).images.tolist() == [2, 0, 1]


def test_build_cyclic():
    for n, pts in ((1, 1), (6, 6), (12, 12)):
        spec = build_cyclic(n)
        assert spec.degree == pts
        assert spec.expected_order == n
        assert spec.generators[0].order() == n
    with pytest.raises(SpecError):
        build_cyclic(0)


def test_build_abelian():
    spec = build_abelian(AbelianGroupSpec((2, 2)))
    assert spec.degree == 4 and spec.expected_order == 4
    assert len(spec.generators) == 2
    single = build_abelian(AbelianGroupSpec((4,)))
    assert single.expected_order == 4 and single.degree == 4
    coprime = build_abelian(AbelianGroupSpec((2, 3)))
    assert coprime.expected_order == 6
    with pytest.raises(SpecError):
        AbelianGroupSpec((6,))  # not a prime power
    with pytest.raises(SpecError):
        AbelianGroupSpec((1,))


def test_abelian_spec_structure():
    spec = AbelianGroupSpec((4, 2, 3))
    assert spec.factors == (2, 3, 4)  # canonical ascending
    assert spec.order == 24
    assert spec.prime_exponents() == {2: [2, 1], 3: [1]}
    assert not spec.is_cyclic
    assert AbelianGroupSpec((4, 3)).is_cyclic


def test_metacyclic_validation():
    with pytest.raises(SpecError):
        MetacyclicSpec(4, 2, 1)  # gcd(n, m) != 1
    with pytest.raises(SpecError):
        MetacyclicSpec(9, 2, 3)  # gcd(r, n) != 1
    with pytest.raises(SpecError):
        MetacyclicSpec(5, 2, 2)  # 2**2 = 4 != 1 mod 5
    s3 = MetacyclicSpec(3, 2, 2)
    assert s3.nontrivial_action and s3.is_frobenius
    f20 = MetacyclicSpec(5, 4, 2)
    assert f20.is_frobenius
    trivial = MetacyclicSpec(7, 1, 1)
    assert not trivial.nontrivial_action and not trivial.is_frobenius
    # order of r below m: valid spec but not Frobenius
    assert not MetacyclicSpec(5, 4, 4).is_frobenius


def test_build_metacyclic_shapes():
    s3 = build_metacyclic(MetacyclicSpec(3, 2, 2))
    assert s3.degree == 5 and s3.expected_order == 6
    f20 = build_metacyclic(MetacyclicSpec(5, 4, 2))
    assert f20.degree == 9 and f20.expected_order == 20
    c7 = build_metacyclic(MetacyclicSpec(7, 1, 1))
    assert c7.expected_order == 7


def test_counterexample_spec():
    with pytest.raises(SpecError):
        CounterexampleSpec((7,))  # 7 = 1 mod 3
    with pytest.raises(SpecError):
        CounterexampleSpec((3,))  # 3 = 0 mod 3
    with pytest.raises(SpecError):
        CounterexampleSpec((2, 2))
    assert CounterexampleSpec(()).order == 3
    assert CounterexampleSpec((2,)).order == 12
    assert CounterexampleSpec((2, 5)).order == 300
    assert CounterexampleSpec((5, 2)).primes == (2, 5)


def test_build_counterexample_geometry():
    empty = build_counterexample(CounterexampleSpec(()))
    assert empty.degree == 3 and empty.expected_order == 3
    a4 = build_counterexample(CounterexampleSpec((2,)))
    assert a4.degree == 7 and a4.expected_order == 12
    big = build_counterexample(CounterexampleSpec((2, 5)))
    assert big.degree == 32 and big.expected_order == 300


def test_counterexample_order3_fixed_points():
    # the order-3 generator fixes exactly the plane origins and nothing else
    spec = CounterexampleSpec((2, 5))
    built = build_counterexample(spec)
    c = built.generators[-1]
    assert c.order() == 3
    fixed = {i for i in range(built.degree) if int(c.images[i]) == i}
    origins = set()
    offset = 0
    for p in spec.primes:
        origins.add(offset)
        offset += p * p
    assert fixed == origins


def test_metacyclic_frobenius_point_action():
    # on the kernel block the action is transitive and only the identity
    # fixes two or more points
    from codsum.chartab import enumerate_group

    spec = MetacyclicSpec(5, 4, 2)
    g = enumerate_group(build_metacyclic(spec))
    n = spec.n
    for idx, perm in enumerate(g.elements):
        fixed = sum(1 for i in range(n) if int(perm.images[i]) == i)
        if idx == 0:
            assert fixed == n
        else:
            assert fixed <= 1
    reachable = {int(p.images[0]) for p in g.elements}
    assert reachable == set(range(n))


def test_direct_product():
    c2, c3 = build_cyclic(2), build_cyclic(3)
    prod = build_direct_product(c2, c3)
    assert prod.degree == 5 and prod.expected_order == 6
    assert prod.name == "C2xC3"
    s3 = build_metacyclic(MetacyclicSpec(3, 2, 2))
    assert build_direct_product(s3, build_cyclic(5)).expected_order == 30


def test_direct_product_order_multiplicativity_corpus():
    from codsum.chartab import enumerate_group

    lib = pgroup_library()
    for g1 in lib:
        for g2 in lib:
            prod = build_direct_product(g1, g2)
            expected = g1.expected_order * g2.expected_order
            assert prod.expected_order == expected
            assert enumerate_group(prod).order == expected


def test_semidirect_exists():
    assert semidirect_exists(2, 3, 2)  # 3 | 2**2 - 1
    assert semidirect_exists(7, 3, 1)  # 3 | 6
    assert not semidirect_exists(5, 3, 1)  # 3 does not divide 4
    assert semidirect_exists(5, 3, 2)  # 3 | 24
    with pytest.raises(SpecError):
        semidirect_exists(3, 3, 2)
    with pytest.raises(SpecError):
        semidirect_exists(4, 3, 1)


def test_pgroup_library_contents():
    lib = pgroup_library()
    names = [s.name for s in lib]
    assert names == [
        "C4",
        "C8",
        "C2xC2",
        "C2xC4",
        "C2xC2xC2",
        "D8",
        "Q8",
        "C9",
        "C3xC3",
        "Heis27",
        "C27",
    ]
    orders = {s.name: s.expected_order for s in lib}
    assert orders["D8"] == 8 and orders["Q8"] == 8 and orders["Heis27"] == 27


def test_size_guard(monkeypatch):
    with pytest.raises(SizeGuardError):
        build_cyclic(20001)
    monkeypatch.setenv("CODSUM_SIZE_GUARD", "100")
    with pytest.raises(SizeGuardError):
        build_cyclic(101)
    assert build_cyclic(100).expected_order == 100
    monkeypatch.setenv("CODSUM_SIZE_GUARD", "bogus")
    with pytest.raises(SpecError):
        build_cyclic(5)


def test_spec_json_roundtrip(tmp_path):
    spec = build_metacyclic(MetacyclicSpec(5, 4, 2))
    path = tmp_path / "f20.json"
    save_spec(spec, str(path))
    loaded = load_spec(str(path))
    assert loaded.degree == spec.degree
    assert loaded.expected_order == spec.expected_order
    assert [g.images.tolist() for g in loaded.generators] == [
        g.images.tolist() for g in spec.generators
    ]
    doc = json.loads(path.read_text())
    assert set(doc) == {"name", "degree", "generators", "expected_order"}
    with pytest.raises(SpecError):
        PermutationGroupSpec.from_json_dict({"degree": 3})
