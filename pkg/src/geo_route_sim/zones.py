"""LAR geometric regions: where the destination may be, and who may forward.

The expected zone is the disk the destination can have reached since its
position was last heard; the request zone is the smallest axis-aligned
rectangle covering that disk plus the node anchoring the discovery.  Zone
membership gates both LAR flooding and D-LAR candidate filtering.
"""

from dataclasses import dataclass

from .geometry import Position


@dataclass(frozen=True)
class ExpectedZone:
    """Disk of possible destination locations, centered on its last fix."""

    center: Position
    radius: float

    def __post_init__(self) -> None:
        if self.radius < 0:
            raise ValueError(f"expected-zone radius must be >= 0, got {self.radius!r}")


@dataclass(frozen=True)
class RequestZone:
    """Axis-aligned rectangle restricting which nodes take part in discovery."""

    min_corner: Position
    max_corner: Position

    def __post_init__(self) -> None:
        if self.min_corner.x > self.max_corner.x or self.min_corner.y > self.max_corner.y:
            raise ValueError("request-zone corners are inverted")


def expected_zone(dest_pos_t0: Position, dest_speed: float, t0: float, t1: float) -> ExpectedZone:
    """Disk of radius ``dest_speed * (t1 - t0)`` around the last known position.

    ``t0`` is when the destination's position was recorded, ``t1`` the time
    the zone is evaluated for.
    """
    if t1 < t0:
        raise ValueError(f"t1 must be >= t0, got t0={t0!r}, t1={t1!r}")
    if dest_speed < 0:
        raise ValueError(f"dest_speed must be >= 0, got {dest_speed!r}")
    return ExpectedZone(dest_pos_t0, dest_speed * (t1 - t0))


def request_zone(source: Position, ez: ExpectedZone) -> RequestZone:
    """Smallest axis-aligned rectangle containing the expected zone and the source."""
    return RequestZone(
        Position(
            min(source.x, ez.center.x - ez.radius),
            min(source.y, ez.center.y - ez.radius),
        ),
        Position(
            max(source.x, ez.center.x + ez.radius),
            max(source.y, ez.center.y + ez.radius),
        ),
    )


def in_request_zone(p: Position, rz: RequestZone) -> bool:
    """Boundary-inclusive rectangle membership test."""
    return (
        rz.min_corner.x <= p.x <= rz.max_corner.x
        and rz.min_corner.y <= p.y <= rz.max_corner.y
    )
