import numpy as np
import pytest

from gc2gnn import (
    ActivationSpec,
    Color,
    GnnLayer,
    GnnSpec,
    LabeledGraph,
    TOP,
    TreeParams,
    carry_forward_check,
    compile_formula,
    eval_oracle_all,
    forward,
    forward_outputs,
    initial_features,
    make_tree,
    parse,
    random_formula,
    random_graph,
    spec_from_text,
    spec_to_text,
)
from gc2gnn.compiler import SpecFormatError


def compact_q1_net():
    """The compact hand-built 4-dimensional network for the degree query:
    same matrices at every layer, input features e1, output coordinate 4."""
    A = np.array([[0, 0, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 0], [0, 0, -1, 0]], dtype=float)
    B = np.array([[1, 0, 0, 0], [0, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 0]], dtype=float)
    c = np.array([-1, 1, 0, 1], dtype=float)
    layer = GnnLayer(A, B, c)
    return GnnSpec(
        d=4,
        iterations=4,
        output_index=3,
        layers=(layer,) * 4,
        activation=ActivationSpec("sigma-star", 1),
        init_kinds=("1", "0", "0", "0"),
        palette=1,
    )


# -- structure -------------------------------------------------------------------


def test_compile_single_color():
    spec = compile_formula(Color(1), 2)
    assert spec.d == 1
    assert spec.iterations == 1
    assert spec.output_index == 0
    assert np.array_equal(spec.layers[0].A, [[1.0]])
    assert not spec.layers[0].B.any()
    assert not spec.layers[0].c.any()
    assert spec.init_kinds == ("C1",)


def test_compile_top_is_iteration_free():
    spec = compile_formula(TOP, 1)
    assert spec.iterations == 0 and spec.d == 1
    assert spec.init_kinds == ("1",)


def test_compile_q1_shape(q1_spec):
    assert q1_spec.d == 5
    assert q1_spec.iterations == 4
    assert q1_spec.output_index == q1_spec.d - 1


def test_compile_q2_shape(q2_spec):
    assert q2_spec.d == 7
    assert q2_spec.iterations == 7


def test_compile_rejects_color_beyond_palette():
    with pytest.raises(ValueError, match="beyond palette"):
        compile_formula(Color(3), 2)


def test_entry_and_sparsity_invariants():
    rng = np.random.default_rng(5)
    formulas = [random_formula(rng, 3, max_depth=6) for _ in range(30)]
    formulas += [parse("not (dia>=1 (not (dia>=2 top)))", 1)]
    for f in formulas:
        spec = compile_formula(f, 3)
        for layer in spec.layers:
            assert np.isin(layer.A, (-1.0, 0.0, 1.0)).all()
            assert np.isin(layer.B, (-1.0, 0.0, 1.0)).all()
            assert np.array_equal(layer.c, np.round(layer.c))
            assert ((layer.A != 0).sum(axis=1) <= 2).all()
            assert ((layer.B != 0).sum(axis=1) <= 1).all()


def test_compiled_size_at_most_twice_query_size():
    rng = np.random.default_rng(6)
    for _ in range(20):
        f = random_formula(rng, 3, max_depth=6)
        spec = compile_formula(f, 3)
        assert spec.d <= 2 * len(spec.coordinate_formulas)


# -- exactness -------------------------------------------------------------------


def test_q1_forward_matches_oracle_on_named_graphs(q1, q1_spec, isolated_vertex, path3, triangle):
    graphs = [isolated_vertex, path3, triangle, make_tree(TreeParams(0, 3, 4))[0],
              make_tree(TreeParams(1, 3, 4))[0]]
    for graph in graphs:
        want = eval_oracle_all(q1, graph).astype(float)
        got = forward_outputs(q1_spec, graph)
        assert np.array_equal(got, want)


def test_exactness_random_formulas_both_activations():
    rng = np.random.default_rng(77)
    for _ in range(5):
        f = random_formula(rng, 3, max_depth=5)
        spec = compile_formula(f, 3)
        for seed in range(10):
            graph = random_graph(60, 5.0, 3, seed)
            want = eval_oracle_all(f, graph).astype(float)
            for name in ("sigma-star", "crelu"):
                got = forward_outputs(spec, graph, ActivationSpec(name, 1))
                assert np.array_equal(got, want), (f, name, seed)


def test_every_coordinate_tracks_its_subformula(q1_spec, q2_spec):
    for spec, palette in ((q1_spec, 1), (q2_spec, 2)):
        graph = random_graph(80, 5.0, palette, 3)
        final = forward(spec, graph).final
        for j, sub in enumerate(spec.coordinate_formulas):
            want = eval_oracle_all(sub, graph).astype(float)
            assert np.array_equal(final[:, j], want), sub


def test_integer_preactivations_under_threshold(q2_spec):
    graph = random_graph(50, 5.0, 2, 21)
    history = forward(q2_spec, graph).history
    for t, layer in enumerate(q2_spec.layers):
        prev = history[t]
        agg = np.zeros_like(prev)
        np.add.at(agg, graph.edge_dst, prev[graph.edge_src])
        pre = layer.c + prev @ layer.A.T + agg @ layer.B.T
        assert np.array_equal(pre, np.round(pre))
        assert not (pre == 0.5).any()  # the tie branch is never exercised


def test_compact_net_matches_compiler_on_random_trees(q1, q1_spec):
    compact = compact_q1_net()
    rng = np.random.default_rng(2024)
    for _ in range(200):
        params = TreeParams(int(rng.integers(0, 4)), int(rng.integers(0, 11)), int(rng.integers(1, 11)))
        tree, root = make_tree(params)
        ours = forward_outputs(q1_spec, tree)
        compact_out = forward_outputs(compact, tree)
        assert np.array_equal(ours, compact_out), params
        assert ours[root] == float(eval_oracle_all(q1, tree)[root])


# -- carry rows -------------------------------------------------------------------


def test_carry_forward_check_accepts_compiled(q1_spec, q2_spec):
    assert carry_forward_check(q1_spec)
    assert carry_forward_check(q2_spec)
    assert carry_forward_check(compile_formula(Color(1), 2))


def test_carry_forward_check_rejects_zeroed_row(q1_spec):
    layers = list(q1_spec.layers)
    A = layers[2].A.copy()
    A[0, 0] = 0.0  # kill the always-true coordinate's carry in layer 3
    layers[2] = GnnLayer(A, layers[2].B, layers[2].c)
    broken = GnnSpec(
        d=q1_spec.d,
        iterations=q1_spec.iterations,
        output_index=q1_spec.output_index,
        layers=tuple(layers),
        activation=q1_spec.activation,
        init_kinds=q1_spec.init_kinds,
        palette=q1_spec.palette,
        coordinate_formulas=q1_spec.coordinate_formulas,
        levels=q1_spec.levels,
    )
    assert not carry_forward_check(broken)


def test_carry_forward_check_needs_levels():
    with pytest.raises(ValueError, match="compiled spec"):
        carry_forward_check(compact_q1_net())


# -- serialization ----------------------------------------------------------------


def test_spec_round_trip(q1_spec, q2_spec):
    for spec in (q1_spec, q2_spec, compact_q1_net()):
        assert spec_from_text(spec_to_text(spec)) == spec


def test_spec_text_is_integer_valued(q1_spec):
    text = spec_to_text(q1_spec)
    header, init, *rows = text.strip().splitlines()
    assert header == "5 4 4 sigma-star 1"
    assert init == "init 1 0 0 0 0"
    for row in rows:
        assert all(tok.lstrip("-").isdigit() for tok in row.split())


def test_spec_serializer_rejects_fractions():
    layer = GnnLayer(np.array([[0.5]]), np.zeros((1, 1)), np.zeros(1))
    spec = GnnSpec(1, 1, 0, (layer,), ActivationSpec("sigma-star", 1), ("0",))
    with pytest.raises(ValueError, match="non-integer"):
        spec_to_text(spec)


@pytest.mark.parametrize(
    "mutate,fragment",
    [
        (lambda lines: [lines[0], "start 1 0 0 0 0"] + lines[2:], "init line"),
        (lambda lines: lines[:1], "too short"),
        (lambda lines: [lines[0].replace("sigma-star", "swish")] + lines[1:], "unknown activation"),
        (lambda lines: lines[:-1], "matrix rows"),
        (lambda lines: [lines[0] + " 9"] + lines[1:], "malformed header"),
    ],
)
def test_spec_parser_rejects_malformed(q1_spec, mutate, fragment):
    lines = spec_to_text(q1_spec).strip().splitlines()
    with pytest.raises(SpecFormatError, match=fragment):
        spec_from_text("\n".join(mutate(lines)))


def test_initial_features_layout(q2_spec):
    graph = LabeledGraph(3, 2, np.array([1, 2, 1]), np.array([[0, 1], [1, 2]]))
    feats = initial_features(q2_spec, graph)
    # first two coordinates are the color indicators, the rest start at zero
    assert np.array_equal(feats[:, 0], [1, 0, 1])
    assert np.array_equal(feats[:, 1], [0, 1, 0])
    assert not feats[:, 2:].any()


def test_initial_features_palette_guard(q2_spec):
    graph = LabeledGraph(2, 1, np.ones(2, int), np.array([[0, 1]]))
    with pytest.raises(ValueError, match="palette"):
        initial_features(q2_spec, graph)
