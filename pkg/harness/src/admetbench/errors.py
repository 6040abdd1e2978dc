"""Error types shared across the harness."""


class SmilesError(ValueError):
    """A SMILES string could not be parsed."""


class DataUnavailableError(RuntimeError):
    """Benchmark data is neither cached locally nor downloadable here."""


class HarnessError(RuntimeError):
    """A benchmark run failed (bad task name, subprocess failure, ...)."""
