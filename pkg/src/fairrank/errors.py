"""Exception types shared across the engine.

Every error carries a stable ``error_code`` (the class name) used by the CLI
and the HTTP service, plus an optional pipeline ``phase`` tag assigned by the
run orchestrator (one of ``data``, ``model``, ``outcome``).
"""

from __future__ import annotations


class FairrankError(Exception):
    """Base class for all engine errors."""

    phase: str | None = None

    @property
    def error_code(self) -> str:
        return type(self).__name__


# -- dataset / schema ------------------------------------------------------

class SchemaError(FairrankError):
    pass


class MissingColumn(FairrankError):
    pass


class UnexpectedColumn(FairrankError):
    pass


class RaggedRow(FairrankError):
    pass


class UnparseableCell(FairrankError):
    def __init__(self, row: int, col: str, value: str):
        super().__init__(f"cannot parse cell (row {row}, column {col!r}): {value!r}")
        self.row = row
        self.col = col


class UnknownCategoryLevel(FairrankError):
    pass


class MultiLevelSensitive(FairrankError):
    pass


class EmptyGroup(FairrankError):
    pass


class UnknownFeature(FairrankError):
    pass


class EmptySelection(FairrankError):
    pass


# -- metric spaces ---------------------------------------------------------

class SizeMismatch(FairrankError):
    pass


class HTooLarge(FairrankError):
    pass


# -- measures --------------------------------------------------------------

class NoPairs(FairrankError):
    pass


# -- models ----------------------------------------------------------------

class SingleClassLabels(FairrankError):
    pass


class NonFiniteLoss(FairrankError):
    pass


class DimensionMismatch(FairrankError):
    pass


class SensitiveFeatureInView(FairrankError):
    pass


# -- feature audit ---------------------------------------------------------

class KindMismatch(FairrankError):
    pass


class EmptyDistribution(FairrankError):
    pass


class IsSensitiveAttribute(FairrankError):
    pass


# -- session / service -----------------------------------------------------

class UnknownDataset(FairrankError):
    pass


class UnknownRun(FairrankError):
    pass


class UnknownInstance(FairrankError):
    pass


class DatasetTooLarge(FairrankError):
    pass


class DistortionMatrixTooLarge(FairrankError):
    pass


class ConfigError(FairrankError):
    pass
