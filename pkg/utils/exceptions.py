"""
Exception hierarchy shared by the models, the catalog and the experiment runner.
"""


class LandauerRateError(Exception):
    """Base class for every error raised by this project."""


class UnitError(LandauerRateError, ValueError):
    """A scalar or parameter record was constructed outside its valid range."""


class BudgetExhausted(LandauerRateError):
    """The coupled LNA heat alone reaches the thermal design power."""

    def __init__(self, coupled_lna_heat_w, p_td_w):
        self.coupled_lna_heat_w = coupled_lna_heat_w
        self.p_td_w = p_td_w
        super().__init__(
            f"coupled LNA heat {coupled_lna_heat_w:.6g} W leaves no compute budget "
            f"under P_TD = {p_td_w:.6g} W"
        )


class CrossoverOverflow(LandauerRateError, OverflowError):
    """The spectral efficiency needed for a crossover is too large to invert."""


class InvalidStep(LandauerRateError, ValueError):
    """Simulator step is non-positive or longer than the session."""


class CatalogError(LandauerRateError):
    """Base class for chip catalog problems."""


class CatalogParseError(CatalogError):
    """A catalog row could not be parsed."""

    def __init__(self, message, row=None, column=None):
        self.row = row
        self.column = column
        location = []
        if row is not None:
            location.append(f"row {row}")
        if column is not None:
            location.append(f"column '{column}'")
        prefix = f"{', '.join(location)}: " if location else ""
        super().__init__(f"{prefix}{message}")


class CatalogValidationError(CatalogError):
    """A catalog row violates the heat-density or positivity rules."""


class ZeroArea(CatalogValidationError):
    """Package area is zero or negative, heat density is undefined."""


class ConfigError(LandauerRateError):
    """An experiment configuration is malformed."""

    def __init__(self, message, field_path=None):
        self.field_path = field_path
        prefix = f"{field_path}: " if field_path else ""
        super().__init__(f"{prefix}{message}")


class ScenarioError(LandauerRateError):
    """A model error raised while a scenario was running."""

    def __init__(self, scenario, cause):
        self.scenario = scenario
        self.cause = cause
        super().__init__(f"scenario '{scenario}' failed: {cause}")
