"""Exception types raised across the package.

Every physics-domain error derives from :class:`PhysicsDomainError` so the
command-line front end can map it to a single exit code.
"""


class StcError(Exception):
    pass


class ConfigError(StcError):
    pass


class PhysicsDomainError(StcError):
    pass


class NonHermitianInput(PhysicsDomainError, ValueError):
    pass


class NonUnitAxis(PhysicsDomainError, ValueError):
    pass


class ZeroZeemanField(PhysicsDomainError, ValueError):
    pass


class UnalignedZeeman(PhysicsDomainError, ValueError):
    pass


class OccupationWindowViolated(PhysicsDomainError, ValueError):
    pass


class DegenerateCrossing(PhysicsDomainError, ZeroDivisionError):
    pass


class ZeroCoupling(PhysicsDomainError, ValueError):
    pass


class ResonantDenominator(PhysicsDomainError, ZeroDivisionError):
    def __init__(self, factor: str, value: float = 0.0):
        self.factor = factor
        self.value = value
        super().__init__(f"resonant denominator: {factor} = {value:g}")
