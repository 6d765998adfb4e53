"""Input-output networks: topology statistics and shock diffusion models."""

from ._core import (
    ConfigError,
    ConvergenceError,
    DataError,
    Error,
    IOTable,
    NumericalError,
    ShockParams,
    leontief_inverse,
    load_table,
    model1,
    model2,
    model3,
    node_scores,
    parse_table,
    report,
    save_table,
    spectral_radius,
    sweep,
    synthetic_table,
    technical_coefficients,
    topology,
)

__all__ = [
    "ConfigError",
    "ConvergenceError",
    "DataError",
    "Error",
    "IOTable",
    "NumericalError",
    "ShockParams",
    "leontief_inverse",
    "load_table",
    "model1",
    "model2",
    "model3",
    "node_scores",
    "parse_table",
    "report",
    "save_table",
    "spectral_radius",
    "sweep",
    "synthetic_table",
    "technical_coefficients",
    "topology",
]
