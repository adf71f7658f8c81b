from ._cbs import (
    ConfigError,
    DomainError,
    Model,
    NumericalError,
    __version__,
    acceptance_ids,
    clebsch_gordan,
    configuration_average,
    dressed_resonances,
    elastic_intensity_analytic,
    run_criterion,
    saturation,
    steady_state,
)

__all__ = [
    "ConfigError",
    "DomainError",
    "Model",
    "NumericalError",
    "__version__",
    "acceptance_ids",
    "clebsch_gordan",
    "configuration_average",
    "dressed_resonances",
    "elastic_intensity_analytic",
    "run_criterion",
    "saturation",
    "steady_state",
]
