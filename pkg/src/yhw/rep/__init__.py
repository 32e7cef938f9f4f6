"""Explicit matrix representations used as a brute-force oracle."""
from .highest import (
    CyclicModule,
    NotEigenvectorError,
    NotSingularError,
    cyclic_highest_module,
    irreducible_quotient,
    read_weight,
    restrict_to_cyclic_span,
)
from .module import (
    DEFAULT_MAX_DIM,
    DimensionCapError,
    PolyMatrix,
    SuperVec,
    YangianRep,
    build_eval_module,
    negate_variable,
    quotient,
    relabel,
    restrict,
    tensor_all,
    tensor_modules,
)
from .relations import RelationsReport, Violation, check_defining_relations
from .verify import (
    BerezinianReport,
    KeyRelationsReport,
    OddReflectionReport,
    berezinian_action,
    verify_key_relations,
    verify_odd_reflection,
)

__all__ = [
    "BerezinianReport", "CyclicModule", "DEFAULT_MAX_DIM", "DimensionCapError",
    "KeyRelationsReport", "NotEigenvectorError", "NotSingularError",
    "OddReflectionReport", "PolyMatrix", "RelationsReport", "SuperVec", "Violation",
    "YangianRep", "berezinian_action", "build_eval_module", "check_defining_relations",
    "cyclic_highest_module", "irreducible_quotient", "negate_variable", "quotient",
    "read_weight", "relabel", "restrict", "restrict_to_cyclic_span", "tensor_all",
    "tensor_modules", "verify_key_relations", "verify_odd_reflection",
]
