"""A small language for algebra presentations and its numerical evaluator."""
from .nodes import (
    AlgebraPresentation, BinOp, Call, Const, Identity, Node, Num, Power, Product,
    Relation, Sum, Sym, is_scalar, symbols,
)
from .parser import (
    DslError, DslSyntaxError, DslTypeError, DuplicateIdentifierError, UnknownSymbolError,
    parse_expression, parse_presentation,
)
from .render import format_complex, render_expression, render_presentation
from .evaluate import (
    DEFAULT_TOLERANCE, MEASURED, BindingError, BoundAlgebra, EvaluationError, RelationRecord,
    ResidualReport, bind_representation, check_relations, eval_scalar, ladder_depth,
)
from .fold import fold_expression, fold_presentation
