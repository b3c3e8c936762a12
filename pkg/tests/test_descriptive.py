import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from generators import two_color
from proxtopo import DescriptiveSpace, check_descriptive_axioms, open_descriptive_cover, product_space
from proxtopo.errors import EmptySet, InputError, InvalidPoint, InvalidSubset, MissingProbe
from proxtopo.descriptive import DescriptionSet, ProbeTable
from proxtopo.space_core import COMPARE_TOL, FiniteSpace


@st.composite
def dspaces(draw, max_points=7, eps_desc=None, eps_spatial=None):
    n = draw(st.integers(1, max_points))
    coords = draw(st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4)), min_size=n, max_size=n))
    dim = draw(st.integers(1, 2))
    feats = draw(st.lists(st.lists(st.integers(0, 3), min_size=dim, max_size=dim), min_size=n, max_size=n))
    es = draw(st.sampled_from([0.0, 1.0, 1.5])) if eps_spatial is None else eps_spatial
    ed = draw(st.sampled_from([0.0, 0.5, 1.0, 1.5])) if eps_desc is None else eps_desc
    return DescriptiveSpace.from_table(coords, feats, es, ed)


def subsets_of(space):
    return st.sets(st.sampled_from(space.ids)).map(frozenset)


def oracle_dnear(space, a, b):
    """Brute force over point pairs with numpy feature differences."""
    return any(
        np.linalg.norm(np.subtract(space.describe(x), space.describe(y))) <= space.eps_desc + COMPARE_TOL
        for x in a
        for y in b
    )


def oracle_dintersection(space, a, b):
    return frozenset(x for x in a | b if oracle_dnear(space, {x}, a) and oracle_dnear(space, {x}, b))


def vectors(ds):
    return set(ds.vectors)


# probes and description sets


def test_probe_length_checked():
    with pytest.raises(InputError):
        ProbeTable(2, {0: (1.0,)})


def test_missing_probe():
    base = FiniteSpace.from_coords([(0, 0), (1, 0)])
    with pytest.raises(MissingProbe):
        DescriptiveSpace(base, ProbeTable(1, {0: (0.0,)}))


def test_description_set_examples():
    s = two_color()
    assert vectors(s.description_set({0, 1})) == {(0.0,), (1.0,)}
    assert vectors(s.description_set({0})) == {(0.0,)}
    assert vectors(s.description_set({0, 2})) == {(0.0,)}


def test_description_set_of_empty_set():
    with pytest.raises(EmptySet):
        two_color().description_set(set())


def test_description_set_greedy_dedup():
    ds = DescriptionSet.from_vectors([(0.0,), (0.4,), (0.8,)], eps=0.5)
    assert ds.vectors == ((0.0,), (0.8,))


# nearness and intersection


def test_descriptive_near_examples():
    s = two_color()
    assert s.descriptively_near({0}, {2})
    assert not s.descriptively_near({0}, {1})
    assert not s.descriptively_near({0}, set())


def test_descriptive_near_foreign_ids():
    with pytest.raises(InvalidSubset):
        two_color().descriptively_near({0}, {17})


def test_descriptive_intersection_examples():
    s = two_color()
    assert s.descriptive_intersection({0, 1}, {2, 3}) == {0, 1, 2, 3}
    assert s.descriptive_intersection({0}, {1}) == frozenset()
    assert s.descriptive_intersection({0, 1}, {0, 1}) == {0, 1}


def test_descriptive_closure_examples():
    s = two_color()
    assert s.descriptive_closure({0}) == {0, 2}
    distinct = DescriptiveSpace.from_table([(0, 0), (1, 0), (2, 0)], [[0], [1], [2]])
    assert distinct.descriptive_closure({0, 2}) == {0, 2}
    with pytest.raises(EmptySet):
        s.descriptive_closure(set())


# balls and covers


def test_descriptive_ball_examples():
    s = two_color()
    assert s.descriptive_ball(0, 0.5) == {0, 2}
    assert s.descriptive_ball(0, 2.0) == {0, 1, 2, 3}


def test_descriptive_ball_is_strict():
    # feature distance exactly 1 is outside the radius-1 ball
    assert two_color().descriptive_ball(0, 1.0) == {0, 2}


def test_descriptive_ball_errors():
    with pytest.raises(InvalidPoint):
        two_color().descriptive_ball(9, 1.0)
    with pytest.raises(ValueError):
        two_color().descriptive_ball(0, 0.0)


def test_open_cover_two_color():
    cover = open_descriptive_cover(two_color(), 0.5)
    assert set(cover.elements) == {frozenset({0, 2}), frozenset({1, 3})}
    raw = [two_color().descriptive_ball(p, 0.5) for p in range(4)]
    assert len(raw) == 4


def test_open_cover_all_distinct_gives_singletons():
    s = DescriptiveSpace.from_table([(0, 0), (1, 0), (2, 0)], [[0], [1], [3]])
    cover = open_descriptive_cover(s, 0.9)
    assert set(cover.elements) == {frozenset({0}), frozenset({1}), frozenset({2})}


# products


def test_product_of_singletons():
    a = DescriptiveSpace.from_table([(0, 0)], [[1]])
    p = product_space([a, a])
    assert len(p) == 1
    assert p.product_near({0}, {0})


def test_product_of_two_point_spaces():
    a = DescriptiveSpace.from_table([(0, 0), (1, 0)], [[0], [1]])
    b = DescriptiveSpace.from_table([(0, 0), (0, 1)], [[5, 5], [6, 6]])
    p = product_space([a, b])
    assert len(p) == 4
    assert all(len(p.describe(pid)) == 3 for pid in p.ids)


def test_product_relation_is_projection_wise():
    a = DescriptiveSpace.from_table([(0, 0), (1, 0)], [[0], [1]])
    p = product_space([a, a])
    for x, y in itertools.product(p.ids, repeat=2):
        (x0, x1), (y0, y1) = p.components[x], p.components[y]
        expected = a.descriptively_near({x0}, {y0}) and a.descriptively_near({x1}, {y1})
        assert p.product_near({x}, {y}) == expected
    assert not p.product_near({0}, set())


def test_product_relation_breaks_union_splitting():
    # near through the union in each factor separately, but not through either part
    a = DescriptiveSpace.from_table([(0, 0), (1, 0)], [[0], [1]])
    p = product_space([a, a])
    ident = {v: k for k, v in p.components.items()}
    A, B, C = {ident[(0, 0)]}, {ident[(0, 1)]}, {ident[(1, 0)]}
    assert p.product_near(A, B | C)
    assert not p.product_near(A, B) and not p.product_near(A, C)


def test_product_empty_family():
    with pytest.raises(InputError):
        product_space([])


# axiom checks


def test_two_color_axioms_exhaustive():
    r = check_descriptive_axioms(two_color())
    assert r.passed and r.method == "exhaustive"


def test_asymmetric_threshold_caught_on_dp1():
    s = two_color()

    def lopsided(a, b):
        return bool(a and b) and min(s.describe(x)[0] for x in a) <= min(s.describe(y)[0] for y in b)

    r = check_descriptive_axioms(s, relation=lopsided)
    assert "dP.1" in r.failures()


def test_never_near_relation_caught_on_dp2():
    r = check_descriptive_axioms(two_color(), relation=lambda a, b: False)
    assert r.failures() == ["dP.2"]


# properties


@given(st.data())
def test_near_matches_oracle(data):
    s = data.draw(dspaces())
    a, b = data.draw(subsets_of(s)), data.draw(subsets_of(s))
    assert s.descriptively_near(a, b) == oracle_dnear(s, a, b)
    assert s.descriptively_near(a, b) == s.descriptively_near(b, a)


@given(st.data())
def test_intersection_properties(data):
    s = data.draw(dspaces())
    a, b = data.draw(subsets_of(s)), data.draw(subsets_of(s))
    meet = s.descriptive_intersection(a, b)
    assert meet == oracle_dintersection(s, a, b)
    assert a & b <= meet
    assert meet == s.descriptive_intersection(b, a)
    if meet:
        assert s.descriptively_near(a, b)


@given(st.data())
def test_closure_keeps_descriptions_at_eps_zero(data):
    s = data.draw(dspaces(eps_desc=0.0))
    a = data.draw(subsets_of(s).filter(bool))
    cl = s.descriptive_closure(a)
    assert vectors(s.description_set(cl)) == vectors(s.description_set(a))
    assert s.descriptive_closure(cl) == cl
    assert s.is_descriptively_closed(cl)
    # membership by description once closed
    assert all((x in cl) == (s.describe(x) in s.description_set(cl)) for x in s.ids)


@given(st.data())
def test_coordinates_as_features_recover_metric_nearness(data):
    s = data.draw(dspaces())
    same = DescriptiveSpace.from_table(s.base.coords, s.base.coords, s.eps_spatial, s.eps_spatial)
    a, b = data.draw(subsets_of(s)), data.draw(subsets_of(s))
    assert same.descriptively_near(a, b) == same.near(a, b)


@given(dspaces(), st.sampled_from([0.3, 0.7, 1.2, 2.5]))
def test_open_cover_covers(space, eps):
    cover = open_descriptive_cover(space, eps)
    assert frozenset().union(*cover.elements) == space.carrier
    assert all(p in space.descriptive_ball(p, eps) for p in space.ids)


@given(dspaces(max_points=6))
def test_descriptive_axioms_pass(space):
    assert check_descriptive_axioms(space).passed


def test_fast_tables_agree_with_direct_calls():
    rng = np.random.default_rng(5)
    for _ in range(10):
        s = DescriptiveSpace.from_table(
            rng.integers(0, 3, (5, 2)), rng.integers(0, 3, (5, 1)), float(rng.choice([0, 1])), float(rng.choice([0, 1]))
        )
        fast = check_descriptive_axioms(s).to_dict()
        slow = check_descriptive_axioms(s, relation=s.descriptively_near).to_dict()
        assert fast == slow
