"""Superconductor-coupled singlet-triplet spin qubits.

Exact reductions, anisotropic-exchange spin models and cZ gate dynamics for
two singlet-triplet qubits coupled through crossed Andreev reflection.
"""

__version__ = "0.1.0"

from .constants import HBAR
from .dynamics import cz_fidelity, fidelity_map, gate_fidelity, gate_time, leakage_trace
from .effective import (
    build_h_st,
    build_h_szero,
    gamma_parallel,
    gamma_perp,
    j_of_phi,
    second_order_corrections,
)
from .hubbard import HubbardParams, build_h_dot, exchange_couplings, gamma_ca_from_tunneling, schrieffer_wolff2
from .linalg import eigh, evolve
from .spin import Rotation3, SpinParams, UniformDevice, build_h_spin, gauge_align_zeeman

__all__ = [
    "HBAR", "HubbardParams", "Rotation3", "SpinParams", "UniformDevice",
    "build_h_dot", "build_h_spin", "build_h_st", "build_h_szero", "cz_fidelity",
    "eigh", "evolve", "exchange_couplings", "fidelity_map", "gamma_ca_from_tunneling",
    "gamma_parallel", "gamma_perp", "gate_fidelity", "gate_time", "gauge_align_zeeman",
    "j_of_phi", "leakage_trace", "schrieffer_wolff2", "second_order_corrections",
]
