"""Cardinality relations definable in weak monadic second-order logic over orders."""

from ._msocard import (
    Dfa,
    Error,
    analyze_formula,
    analyze_oracle,
    check_strup,
    compile,
    decide,
    evaluate,
    normalize,
    quasieq,
    run_cli,
    template,
    template_names,
)

__all__ = [
    "Dfa",
    "Error",
    "analyze_formula",
    "analyze_oracle",
    "check_strup",
    "compile",
    "decide",
    "evaluate",
    "normalize",
    "quasieq",
    "run_cli",
    "template",
    "template_names",
]
