"""Formulas, sequents and their finite-algebra semantics."""

from .formula import (
    BOT,
    TOP,
    And,
    Bot,
    DualNeg,
    Formula,
    Meta,
    Or,
    PseudoNeg,
    Sequent,
    Top,
    Var,
    parse,
    parse_formula,
    parse_sequent,
    render,
    signature_tag,
    variables,
)
from .semantics import (
    Valuation,
    Verdict,
    double_neg_transform,
    evaluate,
    order_valid,
    pointwise_decompose,
    pointwise_valid,
    preserve_valid,
    rs_pointwise,
    rs_valid,
)

__all__ = [
    "BOT",
    "TOP",
    "And",
    "Bot",
    "DualNeg",
    "Formula",
    "Meta",
    "Or",
    "PseudoNeg",
    "Sequent",
    "Top",
    "Var",
    "parse",
    "parse_formula",
    "parse_sequent",
    "render",
    "signature_tag",
    "variables",
    "Valuation",
    "Verdict",
    "double_neg_transform",
    "evaluate",
    "order_valid",
    "pointwise_decompose",
    "pointwise_valid",
    "preserve_valid",
    "rs_pointwise",
    "rs_valid",
]
