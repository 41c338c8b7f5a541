from __future__ import annotations


class ResourceCapExceeded(RuntimeError):
    """A desk-scale search or enumeration hit its configured cap."""


class MalformedStructure(ValueError):
    """Structure data that cannot even be represented (bad path, index, overlap)."""


class ValidationError(ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        lines = "; ".join(str(v) for v in self.violations[:5])
        more = "" if len(self.violations) <= 5 else f" (+{len(self.violations) - 5} more)"
        super().__init__(f"structure violates the axioms: {lines}{more}")


class EmbeddingError(ValueError):
    """A coordinate assignment could not be built or is not an embedding."""
