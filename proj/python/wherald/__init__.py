"""Heralded W-state preparation simulator (native core)."""

from ._core import (
    ConfigError,
    NumericalError,
    audit_amplitudes,
    balanced_network,
    collective_apply,
    dicke_ladder_coefficient,
    dicke_product_expansion,
    evolved_state,
    mode_ladder,
    packet_coefficients,
    packet_sum_record,
    run_herald,
    run_scenario,
    standard_network,
    __version__,
)

__all__ = [
    "ConfigError",
    "NumericalError",
    "audit_amplitudes",
    "balanced_network",
    "collective_apply",
    "dicke_ladder_coefficient",
    "dicke_product_expansion",
    "evolved_state",
    "mode_ladder",
    "packet_coefficients",
    "packet_sum_record",
    "run_herald",
    "run_scenario",
    "standard_network",
    "__version__",
]
