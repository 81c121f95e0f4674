"""Translate GC2 formulas into explicit per-layer integer weight matrices.

Each distinct subformula owns one embedding coordinate.  Color atoms start
as their indicator and ``top`` starts at 1, so atoms are correct before the
first layer; a connective's rule row fires exactly at its dependency level,
and identity rows carry every other coordinate forward.  Running the result
under the hard threshold (or clipped relu: pre-activations are integers)
reproduces the brute-force evaluator at every coordinate.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .activations import ActivationSpec, ACTIVATION_NAMES
from .formulas import And, Color, Diamond, Formula, Not, Top, depth, subformulas

__all__ = [
    "GnnLayer",
    "GnnSpec",
    "compile_formula",
    "carry_forward_check",
    "spec_to_text",
    "spec_from_text",
    "write_spec",
    "read_spec",
    "SpecFormatError",
]


class SpecFormatError(ValueError):
    """Raised when a serialized network cannot be parsed."""


@dataclass(frozen=True, eq=False)
class GnnLayer:
    """One iteration's affine data: self term A, aggregate term B, bias c."""

    A: np.ndarray
    B: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        a = np.ascontiguousarray(np.asarray(self.A, dtype=np.float64))
        b = np.ascontiguousarray(np.asarray(self.B, dtype=np.float64))
        c = np.ascontiguousarray(np.asarray(self.c, dtype=np.float64))
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("A must be square")
        if b.shape != a.shape or c.shape != (a.shape[0],):
            raise ValueError("A, B, c shapes disagree")
        object.__setattr__(self, "A", a)
        object.__setattr__(self, "B", b)
        object.__setattr__(self, "c", c)

    def __eq__(self, other):
        return (
            isinstance(other, GnnLayer)
            and np.array_equal(self.A, other.A)
            and np.array_equal(self.B, other.B)
            and np.array_equal(self.c, other.c)
        )


@dataclass(frozen=True, eq=False)
class GnnSpec:
    """A compiled network: square layers over one coordinate per subformula.

    ``init_kinds`` describes the iteration-0 features per coordinate:
    ``"0"``, ``"1"``, or ``"C<i>"`` (indicator of color i).
    """

    d: int
    iterations: int
    output_index: int
    layers: tuple[GnnLayer, ...]
    activation: ActivationSpec
    init_kinds: tuple[str, ...]
    palette: int | None = field(default=None, compare=False)
    coordinate_formulas: tuple[Formula, ...] | None = field(default=None, compare=False)
    levels: tuple[int, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        if len(self.layers) != self.iterations:
            raise ValueError("layer count must equal the iteration count")
        if not 0 <= self.output_index < self.d:
            raise ValueError("output index out of range")
        if len(self.init_kinds) != self.d:
            raise ValueError("need one init kind per coordinate")
        for kind in self.init_kinds:
            if kind not in ("0", "1") and not (kind.startswith("C") and kind[1:].isdigit()):
                raise ValueError(f"bad init kind {kind!r}")
        for layer in self.layers:
            if layer.A.shape != (self.d, self.d):
                raise ValueError("layer dimension disagrees with d")

    def __eq__(self, other):
        return (
            isinstance(other, GnnSpec)
            and self.d == other.d
            and self.iterations == other.iterations
            and self.output_index == other.output_index
            and self.activation == other.activation
            and self.init_kinds == other.init_kinds
            and self.layers == other.layers
        )

    def with_activation(self, name: str, m: int = 1) -> "GnnSpec":
        return replace(self, activation=ActivationSpec(name, m))


def compile_formula(
    formula: Formula,
    palette: int,
    activation: ActivationSpec | None = None,
) -> GnnSpec:
    """Compile ``formula`` over a palette of ``palette`` colors.

    Rule rows per connective: negation reads its child with weight -1 and
    bias +1; conjunction adds its two children with bias -1 (or collapses to
    an identity read when both children coincide); the graded quantifier
    reads the neighbor aggregate of its child with bias -(K-1).
    """
    if palette < 1:
        raise ValueError("palette must be >= 1")
    activation = activation or ActivationSpec("sigma-star", 1)
    subs = subformulas(formula)

    colors = sorted((g for g in subs.entries if isinstance(g, Color)), key=lambda g: g.index)
    for atom in colors:
        if atom.index > palette:
            raise ValueError(f"formula uses color C{atom.index} beyond palette {palette}")
    tops = [g for g in subs.entries if isinstance(g, Top)]
    rest = [g for g in subs.entries if not isinstance(g, (Color, Top))]
    coords: list[Formula] = [*colors, *tops, *rest]
    pos = {g: i for i, g in enumerate(coords)}

    level: dict[Formula, int] = {}
    for g in subs.entries:
        if isinstance(g, (Color, Top)):
            level[g] = 0
        elif isinstance(g, Not):
            level[g] = 1 + level[g.child]
        elif isinstance(g, Diamond):
            level[g] = 1 + level[g.child]
        else:
            level[g] = 1 + max(level[g.left], level[g.right])

    d = len(coords)
    iterations = depth(formula)
    assert iterations >= level[formula], "iteration budget below dependency height"

    layers = []
    for t in range(1, iterations + 1):
        a_t = np.zeros((d, d))
        b_t = np.zeros((d, d))
        c_t = np.zeros(d)
        for g, j in pos.items():
            if level[g] == t:
                if isinstance(g, Not):
                    a_t[j, pos[g.child]] = -1.0
                    c_t[j] = 1.0
                elif isinstance(g, And):
                    i1, i2 = pos[g.left], pos[g.right]
                    if i1 == i2:
                        a_t[j, i1] = 1.0
                    else:
                        a_t[j, i1] = 1.0
                        a_t[j, i2] = 1.0
                        c_t[j] = -1.0
                elif isinstance(g, Diamond):
                    b_t[j, pos[g.child]] = 1.0
                    c_t[j] = -(g.threshold - 1.0)
                else:  # atoms have level 0 and never fire
                    raise AssertionError("atom scheduled as a rule row")
            else:
                a_t[j, j] = 1.0
        layers.append(GnnLayer(a_t, b_t, c_t))

    init_kinds = tuple(
        f"C{g.index}" if isinstance(g, Color) else ("1" if isinstance(g, Top) else "0")
        for g in coords
    )
    return GnnSpec(
        d=d,
        iterations=iterations,
        output_index=pos[formula],
        layers=tuple(layers),
        activation=activation,
        init_kinds=init_kinds,
        palette=palette,
        coordinate_formulas=tuple(coords),
        levels=tuple(level[g] for g in coords),
    )


def carry_forward_check(spec: GnnSpec) -> bool:
    """True iff every coordinate is an exact identity row in each layer other
    than the one where its rule fires.  Requires a compiled spec (levels)."""
    if spec.levels is None:
        raise ValueError("carry check needs a compiled spec with level data")
    eye = np.eye(spec.d)
    for t, layer in enumerate(spec.layers, start=1):
        for j, lvl in enumerate(spec.levels):
            if lvl == t:
                continue
            if not (
                np.array_equal(layer.A[j], eye[j])
                and not layer.B[j].any()
                and layer.c[j] == 0.0
            ):
                return False
    return True


# --------------------------------------------------------------------------
# text serialization
#
#   line 1: d iterations output_index activation_name m
#   line 2: init <d tokens: 0 | 1 | C<i>>
#   per layer: d rows of A, d rows of B, one row c (decimal integers)


def _format_row(row) -> str:
    out = []
    for value in np.asarray(row).ravel():
        if value != round(value):
            raise ValueError(f"non-integer entry {value!r} cannot be serialized")
        out.append(str(int(round(value))))
    return " ".join(out)


def spec_to_text(spec: GnnSpec) -> str:
    lines = [
        f"{spec.d} {spec.iterations} {spec.output_index} "
        f"{spec.activation.name} {spec.activation.m}"
    ]
    lines.append("init " + " ".join(spec.init_kinds))
    for layer in spec.layers:
        for i in range(spec.d):
            lines.append(_format_row(layer.A[i]))
        for i in range(spec.d):
            lines.append(_format_row(layer.B[i]))
        lines.append(_format_row(layer.c))
    return "\n".join(lines) + "\n"


def spec_from_text(text: str) -> GnnSpec:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if len(lines) < 2:
        raise SpecFormatError("spec text too short")
    head = lines[0].split()
    if len(head) != 5:
        raise SpecFormatError(f"malformed header {lines[0]!r}")
    try:
        d, iterations, output_index, m = int(head[0]), int(head[1]), int(head[2]), int(head[4])
    except ValueError as exc:
        raise SpecFormatError(f"malformed header {lines[0]!r}") from exc
    name = head[3]
    if name not in ACTIVATION_NAMES:
        raise SpecFormatError(f"unknown activation {name!r}")
    init_toks = lines[1].split()
    if len(init_toks) != d + 1 or init_toks[0] != "init":
        raise SpecFormatError("expected an init line with one token per coordinate")
    init_kinds = tuple(init_toks[1:])
    body = lines[2:]
    per_layer = 2 * d + 1
    if len(body) != iterations * per_layer:
        raise SpecFormatError(
            f"expected {iterations * per_layer} matrix rows, found {len(body)}"
        )

    def parse_rows(rows, count, width):
        out = np.empty((count, width))
        for i, row in enumerate(rows):
            toks = row.split()
            if len(toks) != width:
                raise SpecFormatError(f"expected {width} entries, got {row!r}")
            try:
                out[i] = [int(t) for t in toks]
            except ValueError as exc:
                raise SpecFormatError(f"non-integer entry in {row!r}") from exc
        return out

    layers = []
    for t in range(iterations):
        chunk = body[t * per_layer : (t + 1) * per_layer]
        a_t = parse_rows(chunk[:d], d, d)
        b_t = parse_rows(chunk[d : 2 * d], d, d)
        c_t = parse_rows(chunk[2 * d :], 1, d)[0]
        layers.append(GnnLayer(a_t, b_t, c_t))
    try:
        return GnnSpec(
            d=d,
            iterations=iterations,
            output_index=output_index,
            layers=tuple(layers),
            activation=ActivationSpec(name, m),
            init_kinds=init_kinds,
        )
    except ValueError as exc:
        raise SpecFormatError(str(exc)) from exc


def write_spec(path, spec: GnnSpec) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(spec_to_text(spec))


def read_spec(path) -> GnnSpec:
    with open(path, "r", encoding="ascii") as fh:
        return spec_from_text(fh.read())
