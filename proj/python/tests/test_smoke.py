import pytest

import scottflat as sf

P3 = "size 3; rel E/2 {(0,1),(1,0),(1,2),(2,1)};"


def test_largest_system_of_path():
    s = sf.compute_F_infinity(sf.parse_structure(P3), 2)
    assert sorted(sorted(c) for c in s.classes(1)) == [[[0], [2]], [[1]]]


def test_flatten_two_points():
    m = sf.parse_structure("size 2;")
    b = sf.flatten(m, sf.compute_F_infinity(m, 2))
    assert b.universe_sizes() == [1, 1, 2]
    assert sf.check_flat_axioms(b)["ok"]
    assert sf.hausdorff_check(b)["hausdorff"]


def test_flat_json_round_trip():
    m = sf.parse_structure(P3)
    b = sf.flatten(m, sf.compute_F_infinity(m, 2))
    assert sf.parse_flat_json(b.to_json()) == b


def test_reconstruct_path():
    m = sf.parse_structure(P3)
    b = sf.flatten(m, sf.compute_F_infinity(m, 4))
    back, system, chain = sf.reconstruct(b)
    assert sf.is_isomorphic(back, m)
    assert len(chain) == 4
    assert sf.roundtrip_ok(b)


def test_reconstruct_needs_room():
    m = sf.parse_structure("size 2;")
    with pytest.raises(sf.TruncationTooSmall):
        sf.reconstruct(sf.flatten(m, sf.compute_F_infinity(m, 1)))


def test_cyclic_code_is_not_hausdorff():
    system = sf.code_system(sf.parse_group("(0 1 2)", 3), 2)
    b = sf.flatten(sf.parse_structure("size 3;"), system)
    result = sf.hausdorff_check(b)
    assert not result["hausdorff"] and result["pair"] is not None
    assert sf.check_flat_axioms(b)["ok"]


def test_groups():
    s3 = sf.symmetric_group(3)
    assert s3.order() == 6 and sf.exponent(s3) == 6
    delta = sf.conjugacy_test(sf.parse_group("(0 1)", 3), sf.parse_group("(1 2)", 3), s3)
    assert sf.perm_to_cycles(delta) == "(0 1 2)"
    assert sf.automorphism_group(sf.parse_structure(P3)).order() == 2
    assert len(sf.all_subgroups(s3)) == 6
    assert sf.divides(s3, sf.parse_group("(0 1)", 2))
    assert not sf.divides(sf.parse_group("(0 1),(2 3)", 4), sf.parse_group("(0 1 2)", 3))


def test_sharp_codes():
    assert sf.is_sharp_code([[0, 1, 2], [1, 2, 0], [2, 0, 1]], 3, 3)
    assert not sf.is_sharp_code([[0, 1, 2], [1, 2, 0]], 3, 3)


def test_fs_pipeline():
    k2 = sf.parse_graph("2; (0,1);")
    e2 = sf.parse_graph("2;")
    r = sf.fs_pipeline_check(k2, e2)
    assert not r["graphs_isomorphic"] and not r["codes_conjugate"] and r["agree"]
    assert sf.fs_pipeline_check(k2, k2)["codes_conjugate"]


def test_cross_cut():
    r = sf.exponent_experiment([2, 3])
    assert (r["aut_order"], r["exponent"], r["divides"], r["obstruction"]) == (12, 6, True, True)
    m = sf.build_cross_cut([2, 2], {(1, 1): 2})
    assert m.size == 5
    assert sf.quotient_coloring(m).size == 4


def test_errors():
    with pytest.raises(sf.ParseError):
        sf.parse_structure("size ;")
    with pytest.raises(ValueError):
        sf.parse_graph("2; (0,0);")


def test_corpus_hash_is_stable():
    assert sf.corpus_hash(0) == sf.corpus_hash(0)
