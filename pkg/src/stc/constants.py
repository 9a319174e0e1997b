"""Fixed physical constants and unit conventions.

Energies are in micro-electronvolts, times in nanoseconds, angles in radians.
"""

HBAR = 0.6582119569  # ueV * ns

UNITS = {"energy": "ueV", "time": "ns", "angle": "rad"}


def constants_table() -> dict:
    return {"hbar_ueV_ns": HBAR, **{f"unit_{k}": v for k, v in UNITS.items()}}
