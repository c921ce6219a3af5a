"""Thin-wire dipole scenes and grid layouts.

All wires are straight, center-fed, and aligned with the z axis. A Scene
bundles a transmitter, a receiver, and the surface array together with
the operating frequency; pair_geometry reduces any two wires to the four
numbers the coupling formulas need.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import GeometryError

SPEED_OF_LIGHT = 299_792_458.0  # [m/s], exact by definition

# The sinusoidal-current model assumes electrically thin wires; enforce a
# hard slenderness margin instead of degrading silently.
THIN_WIRE_RATIO = 0.1  # radius must stay below this fraction of half_length


def wavelength(frequency_hz: float) -> float:
    """Free-space wavelength in meters."""
    if not frequency_hz > 0:
        raise GeometryError("frequency must be positive")
    return SPEED_OF_LIGHT / frequency_hz


def wavenumber(frequency_hz: float) -> float:
    """Free-space wavenumber 2*pi/lambda in rad/m."""
    return 2.0 * math.pi / wavelength(frequency_hz)


@dataclass(frozen=True)
class Dipole:
    """One z-aligned thin-wire dipole.

    center: (x, y, z) of the feed point [m]
    half_length: half the tip-to-tip extent [m]
    radius: wire radius [m], must stay thin relative to half_length
    """

    center: tuple[float, float, float]
    half_length: float
    radius: float

    def __post_init__(self):
        try:
            center = tuple(float(v) for v in self.center)
        except (TypeError, ValueError):
            raise GeometryError("dipole center must be three numbers") from None
        if len(center) != 3:
            raise GeometryError("dipole center must have exactly 3 coordinates")
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "half_length", float(self.half_length))
        object.__setattr__(self, "radius", float(self.radius))
        if not all(math.isfinite(v) for v in center):
            raise GeometryError("dipole center must be finite")
        if not (math.isfinite(self.half_length) and self.half_length > 0):
            raise GeometryError("dipole half_length must be positive")
        if not (math.isfinite(self.radius) and self.radius > 0):
            raise GeometryError("dipole radius must be positive")
        if self.radius >= THIN_WIRE_RATIO * self.half_length:
            raise GeometryError(
                f"dipole radius {self.radius:.6g} m violates the thin-wire "
                f"limit (must be below {THIN_WIRE_RATIO:g} * half_length = "
                f"{THIN_WIRE_RATIO * self.half_length:.6g} m)"
            )

    @property
    def z_extent(self) -> tuple[float, float]:
        """Lowest and highest z reached by the wire [m]."""
        return (self.center[2] - self.half_length,
                self.center[2] + self.half_length)


@dataclass(frozen=True)
class PairGeometry:
    """Relative geometry of a source wire p and an observer wire q.

    rho: transverse separation of the two wire axes [m]; for the self
         term this is the wire radius (observation on the wire surface).
    dz:  observer center minus source center along z [m].
    h_p, h_q: half-lengths of source and observer [m].
    """

    rho: float
    dz: float
    h_p: float
    h_q: float

    def __post_init__(self):
        if not (math.isfinite(self.rho) and self.rho >= 0):
            raise GeometryError("pair rho must be non-negative")
        if not math.isfinite(self.dz):
            raise GeometryError("pair dz must be finite")
        if not (self.h_p > 0 and self.h_q > 0):
            raise GeometryError("pair half-lengths must be positive")


def pair_geometry(source: Dipole, observer: Dipole, same: bool = False) -> PairGeometry:
    """Reduce two wires to the quantities the coupling kernels use.

    With same=True the pair is a single wire observed on its own surface:
    rho becomes the wire radius and dz is zero; the caller is expected to
    pass the same dipole in both slots.
    """
    if same:
        return PairGeometry(
            rho=observer.radius,
            dz=0.0,
            h_p=source.half_length,
            h_q=observer.half_length,
        )
    dx = observer.center[0] - source.center[0]
    dy = observer.center[1] - source.center[1]
    return PairGeometry(
        rho=math.hypot(dx, dy),
        dz=observer.center[2] - source.center[2],
        h_p=source.half_length,
        h_q=observer.half_length,
    )


def _wires_overlap(p: Dipole, q: Dipole) -> bool:
    # Two parallel wires collide when their axes come closer than the sum
    # of the radii while their z spans intersect.
    d = math.hypot(q.center[0] - p.center[0], q.center[1] - p.center[1])
    if d > p.radius + q.radius:
        return False
    return abs(q.center[2] - p.center[2]) <= p.half_length + q.half_length


@dataclass(frozen=True)
class Scene:
    """Transmitter, receiver, surface array, and operating frequency."""

    transmitter: Dipole
    receiver: Dipole
    surface: tuple[Dipole, ...]
    frequency_hz: float

    def __post_init__(self):
        object.__setattr__(self, "surface", tuple(self.surface))
        object.__setattr__(self, "frequency_hz", float(self.frequency_hz))
        if len(self.surface) < 1:
            raise GeometryError("scene needs at least one surface element")
        if not (math.isfinite(self.frequency_hz) and self.frequency_hz > 0):
            raise GeometryError("scene frequency must be positive")
        wires = [("transmitter", self.transmitter), ("receiver", self.receiver)]
        wires += [(f"surface[{i}]", d) for i, d in enumerate(self.surface)]
        for i in range(len(wires)):
            for j in range(i + 1, len(wires)):
                if _wires_overlap(wires[i][1], wires[j][1]):
                    raise GeometryError(
                        f"wires {wires[i][0]} and {wires[j][0]} overlap: "
                        "separate them transversally beyond the summed radii "
                        "or make their z extents disjoint"
                    )

    @property
    def n_elements(self) -> int:
        return len(self.surface)

    @property
    def wavelength(self) -> float:
        return wavelength(self.frequency_hz)

    @property
    def wavenumber(self) -> float:
        return wavenumber(self.frequency_hz)


def build_grid(
    rows: int,
    cols: int,
    spacing: float,
    half_length: float,
    radius: float,
    center: tuple[float, float, float] = (0.0, 0.0, 0.0),
    plane: str = "xy",
) -> tuple[Dipole, ...]:
    """Regular rows x cols lattice of identical wires, row-major order.

    plane="xy": columns advance along x, rows along y (broadside layout,
    all wires share one z span). plane="xz": rows advance along z instead,
    stacking wires vertically; the spacing must then exceed the full wire
    length or the build fails.

    The lattice is centered on the given center point. Identical inputs
    produce bit-identical output.
    """
    if not (isinstance(rows, int) and isinstance(cols, int)):
        raise GeometryError("grid rows and cols must be integers")
    if rows < 1 or cols < 1:
        raise GeometryError("grid rows and cols must be at least 1")
    if not (math.isfinite(spacing) and spacing > 0):
        raise GeometryError("grid spacing must be positive")
    if plane not in ("xy", "xz"):
        raise GeometryError(f"grid plane must be 'xy' or 'xz', got {plane!r}")

    x0, y0, z0 = (float(v) for v in center)
    elements = []
    for r in range(rows):
        row_offset = (r - 0.5 * (rows - 1)) * spacing
        for c in range(cols):
            col_offset = (c - 0.5 * (cols - 1)) * spacing
            if plane == "xy":
                pos = (x0 + col_offset, y0 + row_offset, z0)
            else:
                pos = (x0 + col_offset, y0, z0 + row_offset)
            elements.append(Dipole(pos, half_length, radius))

    for i in range(len(elements)):
        for j in range(i + 1, len(elements)):
            if _wires_overlap(elements[i], elements[j]):
                raise GeometryError(
                    f"grid elements {i} and {j} overlap at spacing "
                    f"{spacing:.6g} m; increase the spacing or shorten "
                    "the wires"
                )
    return tuple(elements)
