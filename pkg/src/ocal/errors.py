"""Exception types shared across the package."""


class CsvFormatError(ValueError):
    """A CSV file violates the dataset schema (bad header, ragged row, bad label)."""


class ConfigurationError(ValueError):
    """A run or split was configured with inconsistent or out-of-range settings."""


class UndefinedMetricError(ValueError):
    """Balanced accuracy was requested on a test set missing one of the classes."""


class OracleError(RuntimeError):
    """The label oracle failed to answer (e.g. end of input in interactive mode)."""
