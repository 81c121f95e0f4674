"""Compile graded modal logic (GC2) queries into explicit GNN weights,
evaluate them under exact-threshold and smooth activations, and measure
where bounded activations stop expressing the query."""

from .activations import (
    ACTIVATION_NAMES,
    Activation,
    ActivationSpec,
    StepLikeParams,
    apply_activation,
    convergence_bound,
    flat_tanh_constants,
    get_activation,
    get_step_params,
    iterate,
    fixed_point_contraction_check,
    make_step_arctan,
    make_step_tanh,
    make_steplike_sigmoid_eta0,
    make_steplike_tanh_eta0,
    required_composition_depth,
    sigma_star,
    verify_step_like,
)
from .compiler import (
    GnnLayer,
    GnnSpec,
    carry_forward_check,
    compile_formula,
    read_spec,
    spec_from_text,
    spec_to_text,
    write_spec,
)
from .engine import (
    EmbeddingTable,
    LayerErrorReport,
    expressivity_margin,
    forward,
    forward_outputs,
    initial_features,
    layer_errors,
)
from .formulas import (
    TOP,
    And,
    Color,
    Diamond,
    Formula,
    FormulaSyntaxError,
    Not,
    Top,
    depth,
    eval_oracle,
    eval_oracle_all,
    parse,
    random_formula,
    subformulas,
    to_text,
)
from .graphs import (
    GraphFormatError,
    LabeledGraph,
    TreeParams,
    make_tree,
    random_graph,
    read_graph,
    write_graph,
)

__version__ = "0.1.0"
