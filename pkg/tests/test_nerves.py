import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from generators import cycle_graph, fan_system, square_cycle, tree_cover, two_color
from proxtopo import (
    CycleSystem,
    DescriptiveSpace,
    FiniteSpace,
    Graph,
    betti_complex,
    betti_graph,
    is_cover,
    is_good_cover,
    nerve,
    nerve_theorem_check,
    open_descriptive_cover,
)
from proxtopo.errors import EmptySet, InputError, MissingProbe, NotACover
from proxtopo.nerves import Cover, SimplicialComplex, gf2_rank


def dense_rank_gf2(matrix: np.ndarray) -> int:
    m = (np.array(matrix, dtype=np.uint8) % 2).copy()
    rank = 0
    rows, cols = m.shape if m.size else (0, 0)
    for col in range(cols):
        pivot = next((r for r in range(rank, rows) if m[r, col]), None)
        if pivot is None:
            continue
        m[[rank, pivot]] = m[[pivot, rank]]
        for r in range(rows):
            if r != rank and m[r, col]:
                m[r] ^= m[rank]
        rank += 1
    return rank


def oracle_betti(k: SimplicialComplex):
    """Betti numbers from dense boundary matrices."""
    faces = [[(v,) for v in range(k.vertex_count)]] + [k.faces(d) for d in range(1, 4)]
    ranks = [0]
    for d in range(1, 4):
        index = {f: i for i, f in enumerate(faces[d - 1])}
        mat = np.zeros((len(faces[d - 1]), len(faces[d])), dtype=np.uint8)
        for j, s in enumerate(faces[d]):
            for face in itertools.combinations(s, d):
                mat[index[face], j] = 1
        ranks.append(dense_rank_gf2(mat) if mat.size else 0)
    ranks.append(0)
    return tuple(len(faces[d]) - ranks[d] - ranks[d + 1] for d in range(3))


def oracle_nerve(c: Cover, max_dim: int):
    out = set()
    for size in range(1, max_dim + 2):
        for idx in itertools.combinations(range(len(c.elements)), size):
            if frozenset.intersection(*(c.elements[i] for i in idx)):
                out.add(idx)
    return out


def three_arcs():
    return Cover.from_graph(cycle_graph(6), [{0, 1, 2}, {2, 3, 4}, {4, 5, 0}])


def two_squares():
    return CycleSystem((square_cycle(), square_cycle(1, 1, ids=[10, 11, 12, 13])))


# covers


def test_is_cover():
    g = cycle_graph(4)
    assert is_cover(Cover.from_graph(g, [g.vertices]))
    assert not is_cover(Cover.from_graph(g, [{0, 1, 2}]))
    assert is_cover(open_descriptive_cover(two_color(), 0.5))


def test_cover_element_errors():
    g = cycle_graph(4)
    with pytest.raises(EmptySet):
        Cover.from_graph(g, [set(), {0, 1, 2, 3}])
    with pytest.raises(InputError):
        Cover.from_graph(g, [{0, 1, 2, 3, 9}])


def test_nerve_needs_cover():
    g = cycle_graph(4)
    with pytest.raises(NotACover):
        nerve(Cover.from_graph(g, [{0, 1}]))
    with pytest.raises(NotACover):
        is_good_cover(Cover.from_graph(g, [{0, 1}]))
    with pytest.raises(NotACover):
        nerve_theorem_check(Cover.from_graph(g, [{0, 1}]))


# nerves


def test_three_arc_nerve_is_hollow_triangle():
    k = nerve(three_arcs())
    assert k.faces(0) == [(0,), (1,), (2,)]
    assert k.faces(1) == [(0, 1), (0, 2), (1, 2)]
    assert k.faces(2) == []


def test_single_element_nerve():
    g = cycle_graph(4)
    k = nerve(Cover.from_graph(g, [g.vertices]))
    assert k.simplices == ((0,),)


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_system_nerve_is_full_simplex(k):
    sys = fan_system(np.random.default_rng(k), k)
    nv = nerve(Cover.from_system(sys), max_dim=k - 1)
    assert len(nv.simplices) == 2**k - 1
    assert nv.dimension == k - 1


def test_descriptive_nerve_uses_shared_descriptions():
    s = two_color(eps_spatial=0.0)
    c = Cover(({0}, {2}, {1, 3}), s.carrier, space=s)
    spatial = nerve(c, "spatial")
    descriptive = nerve(c, "descriptive")
    assert spatial.faces(1) == []
    assert descriptive.faces(1) == [(0, 1)]


def test_descriptive_nerve_needs_probes():
    s = FiniteSpace.from_coords([(0, 0), (1, 0)])
    with pytest.raises(MissingProbe):
        nerve(Cover(({0}, {1}), s.carrier, space=s), "descriptive")


# homology


def test_betti_complex_examples():
    hollow = SimplicialComplex(3, ((0,), (1,), (2,), (0, 1), (0, 2), (1, 2)))
    assert betti_complex(hollow).pair == (1, 1)
    filled = SimplicialComplex(3, hollow.simplices + ((0, 1, 2),))
    assert betti_complex(filled).pair == (1, 0)
    bow = SimplicialComplex(5, ((0,), (1,), (2,), (3,), (4,), (0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)))
    assert betti_complex(bow).pair == (1, 2)


def test_hollow_tetrahedron_has_beta2():
    tris = tuple(itertools.combinations(range(4), 3))
    edges = tuple(itertools.combinations(range(4), 2))
    k = SimplicialComplex(4, tuple((v,) for v in range(4)) + edges + tris)
    r = betti_complex(k)
    assert (r.beta0, r.beta1, r.beta2) == (1, 0, 1)


def test_betti_complex_rejects_open_family():
    with pytest.raises(InputError):
        betti_complex(SimplicialComplex(3, ((0,), (1,), (0, 1, 2))))


def test_gf2_rank_small():
    assert gf2_rank([0b011, 0b110, 0b101]) == 2
    assert gf2_rank([]) == 0


# good covers


def test_three_arcs_good():
    r = is_good_cover(three_arcs())
    assert r.good and not r.failures


def test_whole_cycle_cover_not_good():
    g = cycle_graph(5)
    r = is_good_cover(Cover.from_graph(g, [g.vertices]))
    assert not r.good
    assert r.failures == [{"subfamily": [0], "beta": [1, 1]}]


def test_system_good_only_without_singletons():
    c = Cover.from_system(two_squares())
    assert not is_good_cover(c)
    assert is_good_cover(c, include_singletons=False)


def test_degenerate_mode_accepts_monochrome_cycle():
    pts = [(0, 0), (1, 0), (1, 1), (0, 1)]
    s = DescriptiveSpace.from_table(pts, [[1]] * 4, 1.0, 0.0)
    c = Cover((s.carrier,), s.carrier, space=s)
    assert not is_good_cover(c, "spatial")
    assert is_good_cover(c, "degenerate")


def test_space_cover_realized_by_near_points():
    # four corners of a unit square with eps 1: the near-point complex is a 4-cycle
    s = FiniteSpace.from_coords([(0, 0), (1, 0), (1, 1), (0, 1)], 1.0)
    assert not is_good_cover(Cover((s.carrier,), s.carrier, space=s))
    # diagonal corners are not near, so {0, 2} is disconnected
    r = is_good_cover(Cover(({0, 1, 2}, {2, 3, 0}), s.carrier, space=s))
    assert r.failures == [{"subfamily": [0, 1], "beta": [2, 0]}]
    assert is_good_cover(Cover(({0, 1}, {1, 2, 3}), s.carrier, space=s))


# nerve theorem comparisons


def test_three_arc_comparison():
    r = nerve_theorem_check(three_arcs())
    assert r.nerve_betti == (1, 1) and r.union_betti == (1, 1)
    assert r.equal and r.good.good
    assert "necessary" in r.note


def test_overlapping_arcs_on_a_path():
    path = Graph(frozenset(range(5)), tuple((i, i + 1) for i in range(4)))
    r = nerve_theorem_check(Cover.from_graph(path, [{0, 1, 2, 3}, {2, 3, 4}]))
    assert r.nerve_betti == (1, 0) and r.union_betti == (1, 0) and r.equal


def test_wedge_cover_gap_explained():
    r = nerve_theorem_check(Cover.from_system(two_squares()))
    assert r.nerve_betti == (1, 0)
    assert r.union_betti == (1, 2)
    assert not r.equal and not r.good.good
    assert "not good" in r.explanation
    assert r.assumptions


# properties


seeds = st.integers(0, 10_000)


@given(seeds)
def test_tree_covers_satisfy_nerve_theorem(seed):
    tc = tree_cover(np.random.default_rng(seed))
    r = nerve_theorem_check(tc.cover)
    assert r.good.good
    assert r.equal
    assert r.nerve_betti == betti_graph(tc.nerve_graph)


@st.composite
def covers(draw):
    n = draw(st.integers(1, 7))
    edges = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=10))
    g = Graph(frozenset(range(n)), tuple(edges))
    elems = draw(st.lists(st.sets(st.integers(0, n - 1), min_size=1), min_size=1, max_size=6))
    elems.append(set(range(n)) - set().union(*elems) or {0})
    return Cover.from_graph(g, elems)


@given(covers())
def test_nerve_matches_brute_force(c):
    k = nerve(c, max_dim=3)
    assert set(k.simplices) == oracle_nerve(c, 3)
    assert k.is_downward_closed()


@given(covers())
def test_betti_matches_dense_oracle(c):
    k = nerve(c, max_dim=3)
    r = betti_complex(k)
    assert (r.beta0, r.beta1, r.beta2) == oracle_betti(k)


@given(covers(), st.sets(st.integers(0, 6), min_size=1))
def test_nerve_monotone(c, extra):
    extra = extra & c.universe
    if not extra:
        return
    before = set(nerve(c).simplices)
    after = set(nerve(c.with_element(extra)).simplices)
    assert before <= after


@given(seeds)
def test_one_dimensional_complex_agrees_with_graph(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 8))
    pairs = sorted({tuple(sorted(int(v) for v in rng.choice(n, 2, replace=False))) for _ in range(n + 2)} if n > 1 else set())
    k = SimplicialComplex(n, tuple((v,) for v in range(n)) + tuple(pairs))
    g = Graph(frozenset(range(n)), tuple(pairs))
    assert betti_complex(k).pair == betti_graph(g)


@given(covers())
def test_euler_characteristic_consistent(c):
    k = nerve(c, max_dim=2)
    r = betti_complex(k)
    # on complexes of dimension at most 2
    assert k.euler_characteristic() == r.beta0 - r.beta1 + r.beta2
