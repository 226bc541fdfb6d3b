"""Link adaptation simulator: sigmoid BLER model, OLLA baseline, SALAD adapter,
slot-based channel simulation, and a Nelder-Mead tuner."""

from ._core import (
    BlerTable,
    FitError,
    HarqFeedback,
    IllaDecision,
    McsTable,
    OllaConfig,
    OllaState,
    SaladAdapter,
    SaladConfig,
    Scenario,
    ScenarioConfigError,
    SigmoidBlerEntry,
    TableLookupError,
    fit_sigmoid,
    nelder_mead_maximize,
    olla_estimate,
    olla_on_feedback,
    olla_sa_update,
    run_scenario,
    sa_increment,
    select_mcs_illa,
    select_mcs_maxse,
)

__all__ = [
    "BlerTable",
    "FitError",
    "HarqFeedback",
    "IllaDecision",
    "McsTable",
    "OllaConfig",
    "OllaState",
    "SaladAdapter",
    "SaladConfig",
    "Scenario",
    "ScenarioConfigError",
    "SigmoidBlerEntry",
    "TableLookupError",
    "fit_sigmoid",
    "nelder_mead_maximize",
    "olla_estimate",
    "olla_on_feedback",
    "olla_sa_update",
    "run_scenario",
    "sa_increment",
    "select_mcs_illa",
    "select_mcs_maxse",
]
