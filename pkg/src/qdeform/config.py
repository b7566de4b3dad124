"""Named numerical tolerances shared by the series, lattice and spectral code."""

from __future__ import annotations

from dataclasses import dataclass, fields, replace


@dataclass(frozen=True)
class Tolerances:
    # infinite q-Pochhammer: stop once |a q^j| drops below this
    poch: float = 1e-15
    # q-exponential series: relative size of the next term
    series: float = 1e-16
    series_cap: int = 500
    # Jackson lattice sums: relative increment
    lattice: float = 1e-14
    lattice_cap: int = 1_000_000
    # bilateral lattice cutoff for q > 1
    k_cut: int = 200
    # truncation order of generating-function checks
    n_t: int = 16
    # extra x-orders kept when comparing analytic (non-polynomial) identities
    n_pad: int = 8
    # float comparison for psi-level identities
    psi: float = 1e-12

    def __post_init__(self) -> None:
        for f in fields(self):
            value = getattr(self, f.name)
            if value <= 0:
                raise ValueError(f"tolerance {f.name!r} must be positive, got {value}")

    def with_overrides(self, **overrides) -> "Tolerances":
        known = {f.name: f.type for f in fields(self)}
        cast = {}
        for name, value in overrides.items():
            if name not in known:
                raise ValueError(f"unknown tolerance {name!r}")
            cast[name] = int(value) if isinstance(getattr(self, name), int) else float(value)
        return replace(self, **cast)


DEFAULT_TOLERANCES = Tolerances()
