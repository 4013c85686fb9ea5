import itertools
import random

import networkx as nx
import pytest

from pep2gi.code import Permutation
from pep2gi.field import field_of_order
from pep2gi.graph import (
    PlainGraph,
    WeightedDigraph,
    export_layers,
    export_unweighted,
    refine,
    wdg_iso,
    wdg_iso_exhaustive,
)
from pep2gi.matrix import MatrixFq

from .conftest import random_permutation
from .test_projector import PI_C, PI_CP


def random_digraph(rng, F, n, density=0.5):
    return WeightedDigraph.from_rows(
        F, [[rng.randrange(1, F.q) if rng.random() < density else 0 for _ in range(n)] for _ in range(n)]
    )


def shuffled_entries(rng, A):
    """Same weight multiset, usually not isomorphic."""
    flat = [x for r in A.adj.tolist() for x in r]
    rng.shuffle(flat)
    n = A.n
    return WeightedDigraph.from_rows(A.field, [flat[i * n : (i + 1) * n] for i in range(n)])


def to_networkx(g: PlainGraph) -> nx.Graph:
    G = nx.Graph()
    G.add_nodes_from(range(g.num_vertices))
    G.add_edges_from(g.edges)
    return G


def test_worked_example_iso(F3):
    A1 = WeightedDigraph.from_rows(F3, PI_C)
    A2 = WeightedDigraph.from_rows(F3, PI_CP)
    assert wdg_iso(A1, A2) == Permutation.transposition(4, 0, 1)
    assert wdg_iso(A1, A1).is_identity()


def test_weight_multiset_mismatch(F3):
    A1 = WeightedDigraph(MatrixFq(F3, [[0] * 4] * 3 + [[0, 0, 0, 1]]))
    A2 = WeightedDigraph(MatrixFq.zeros(F3, 4, 4))
    assert wdg_iso(A1, A2) is None


def test_refine_examples(F3):
    assert refine(WeightedDigraph(MatrixFq.zeros(F3, 4, 4))).num_classes == 1
    diag = [[1 if i == j == 0 else 0 for j in range(4)] for i in range(4)]
    assert refine(WeightedDigraph.from_rows(F3, diag)).num_classes == 2
    colors = refine(WeightedDigraph.from_rows(F3, PI_C)).colors
    assert colors.count(colors[1]) == 1


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_iso_matches_exhaustive(n):
    rng = random.Random(n)
    F = field_of_order(3)
    for _ in range(60):
        A1 = random_digraph(rng, F, n)
        A2 = A1.permuted(random_permutation(rng, n)) if rng.random() < 0.5 else shuffled_entries(rng, A1)
        got, want = wdg_iso(A1, A2), wdg_iso_exhaustive(A1, A2)
        assert (got is None) == (want is None)
        if got is not None:
            assert A1.permuted(got).adj == A2.adj


def test_iso_on_regular_structures():
    # vertex-transitive inputs force individualization
    F = field_of_order(5)
    for n in (5, 6, 7):
        cycle = [[1 if j == (i + 1) % n else 0 for j in range(n)] for i in range(n)]
        A = WeightedDigraph.from_rows(F, cycle)
        rng = random.Random(n)
        B = A.permuted(random_permutation(rng, n))
        pi = wdg_iso(A, B)
        assert pi is not None and A.permuted(pi).adj == B.adj
    # two 3-cycles vs a 6-cycle: equal refinement, not isomorphic
    six = [[1 if j == (i + 1) % 6 else 0 for j in range(6)] for i in range(6)]
    two = [[1 if j == (i // 3) * 3 + (i + 1) % 3 else 0 for j in range(6)] for i in range(6)]
    assert wdg_iso(WeightedDigraph.from_rows(F, six), WeightedDigraph.from_rows(F, two)) is None


def test_refinement_histogram_invariant():
    rng = random.Random(5)
    F = field_of_order(5)
    for _ in range(50):
        A = random_digraph(rng, F, rng.randint(1, 8))
        B = A.permuted(random_permutation(rng, A.n))
        assert refine(A).histogram() == refine(B).histogram()


def test_export_zero_graph_is_disjoint_ladders(F3):
    g = export_unweighted(WeightedDigraph(MatrixFq.zeros(F3, 3, 3)))
    G = to_networkx(g)
    L = export_layers(3)
    assert nx.number_connected_components(G) == 3
    assert g.num_vertices == 3 * (L + 1 + 5)


def test_export_single_arc_trace(F3):
    A = WeightedDigraph.from_rows(F3, [[0, 1], [0, 0]])
    L = export_layers(3)
    g = export_unweighted(A)
    G = to_networkx(g)
    base = 2 * (L + 1 + 5)
    assert g.num_vertices == base + 3
    gv, hv, leaf = base, base + 1, base + 2
    # gadget sits on layer 0, pendant on the source side
    assert set(G[gv]) == {0, hv, leaf}
    assert set(G[hv]) == {gv, L + 1}
    assert G.degree(leaf) == 1


def test_export_preserves_and_reflects_iso():
    rng = random.Random(17)
    for _ in range(60):
        F = field_of_order(rng.choice([3, 5]))
        n = rng.randint(1, 5)
        A1 = random_digraph(rng, F, n)
        A2 = A1.permuted(random_permutation(rng, n)) if rng.random() < 0.5 else shuffled_entries(rng, A1)
        weighted = wdg_iso(A1, A2) is not None
        plain = nx.is_isomorphic(to_networkx(export_unweighted(A1)), to_networkx(export_unweighted(A2)))
        assert weighted == plain


def test_edge_list_round_trip(F3):
    g = export_unweighted(WeightedDigraph.from_rows(F3, PI_C))
    text = g.to_edge_list()
    assert PlainGraph.from_edge_list(text) == g
    assert text.splitlines()[0] == f"{g.num_vertices} {len(g.edges)}"
    with pytest.raises(ValueError):
        PlainGraph.from_edge_list("3 2\n0 1\n")


def test_graph_json_round_trip(F3):
    A = WeightedDigraph.from_rows(F3, PI_C)
    assert WeightedDigraph.from_json(A.to_json()) == A


def test_all_permutations_of_example(F3):
    A = WeightedDigraph.from_rows(F3, PI_C)
    for img in itertools.permutations(range(4)):
        B = A.permuted(Permutation(img))
        pi = wdg_iso(A, B)
        assert A.permuted(pi).adj == B.adj
