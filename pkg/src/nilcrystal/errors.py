"""Exception hierarchy shared by all modules; `code` feeds the CLI error reports."""


class NilcrystalError(Exception):
    code = "error"


class ParseError(NilcrystalError):
    code = "parse-error"


class DimensionError(NilcrystalError):
    code = "dimension-error"


class DegenerateInputError(NilcrystalError):
    code = "degenerate-input"


class DomainError(NilcrystalError):
    code = "domain-error"


class ClassBoundError(NilcrystalError):
    code = "class-bound-violated"


class ClassError(NilcrystalError):
    code = "class-error"


class NotClosedError(NilcrystalError):
    code = "not-closed"


class SpanError(NilcrystalError):
    code = "span-error"


class NotAHomomorphismError(NilcrystalError):
    code = "not-a-homomorphism"


class CatalogError(NilcrystalError):
    code = "catalog-error"


class NotInGroupError(NilcrystalError):
    code = "not-in-group"


class NotFiniteError(NilcrystalError):
    code = "not-finite"


class InvalidMapError(NilcrystalError):
    code = "invalid-map"


class MalformedGradingError(NilcrystalError):
    code = "malformed-grading"
