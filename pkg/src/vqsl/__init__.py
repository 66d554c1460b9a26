"""Exact V-type atom dynamics, quantum speed limit times and BLP non-Markovianity."""
from .metrics import blp_measure, fidelity_alt, qsl_time, qsl_times, trace_distance, x_of_tau
from .states import classify_region, horodecki, negativity, swap_parties, werner, WernerVariant
from .vchannel import ChannelParams, amplitude, evolve_pair, evolve_single, kraus_set

__version__ = "0.1.0"

__all__ = [
    "ChannelParams", "amplitude", "kraus_set", "evolve_single", "evolve_pair",
    "werner", "horodecki", "WernerVariant", "negativity", "classify_region", "swap_parties",
    "fidelity_alt", "trace_distance", "x_of_tau", "qsl_time", "qsl_times", "blp_measure",
]
