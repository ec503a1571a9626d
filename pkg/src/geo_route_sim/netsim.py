"""Deterministic campaign engine.

Generates Poisson fields of vehicles, moves them in straight lines with
boundary reflection, serves routing decisions a beacon-lagged view of the
world, and aggregates per-seed delivery metrics.  Every random draw descends
from the campaign seed through purpose-split streams (placement, motion,
flows), so replays are byte-identical and adding flows never perturbs node
placement.
"""

import hashlib
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .geometry import Position, distance, wrap_angle
from .routing import (
    DEFAULT_TTL,
    DROP_OUTCOMES,
    NetworkSnapshot,
    Outcome,
    PROTOCOLS,
    RouteResult,
    Vehicle,
    route,
)

METRICS_HEADER = [
    "protocol",
    "density",
    "tx_range",
    "seed",
    "sent",
    "delivered",
    "pdr",
    "mean_hops",
    "mean_delay_ms",
    "void_drops",
    "ttl_drops",
    "loop_drops",
    "zone_unreachable",
]


@dataclass
class SimConfig:
    """Campaign parameters; every field has a usable default."""

    field_width: float = 1000.0
    field_height: float = 1000.0
    density: float = 0.0002  # nodes per square meter
    node_count: Optional[int] = None  # overrides the Poisson draw when set
    tx_range: float = 250.0
    speed_min: float = 5.0
    speed_max: float = 20.0
    beacon_interval: float = 1.0
    duration: float = 30.0
    time_step: float = 0.5
    protocol: str = "dlar"
    flows: int = 50
    seed: int = 1
    ttl: int = DEFAULT_TTL
    per_hop_latency_ms: float = 2.0

    def validate(self) -> None:
        for name in (
            "field_width",
            "field_height",
            "density",
            "tx_range",
            "speed_min",
            "speed_max",
            "beacon_interval",
            "duration",
            "time_step",
            "per_hop_latency_ms",
        ):
            value = getattr(self, name)
            if not value > 0:
                raise ValueError(f"{name} must be > 0, got {value!r}")
        if self.speed_min > self.speed_max:
            raise ValueError(
                f"speed_min must be <= speed_max, got {self.speed_min!r} > {self.speed_max!r}"
            )
        if self.time_step > self.beacon_interval:
            raise ValueError(
                f"time_step must be <= beacon_interval, got "
                f"{self.time_step!r} > {self.beacon_interval!r}"
            )
        if self.node_count is not None and self.node_count < 1:
            raise ValueError(f"node_count must be >= 1, got {self.node_count!r}")
        if self.protocol not in PROTOCOLS:
            raise ValueError(f"protocol must be one of {PROTOCOLS}, got {self.protocol!r}")
        if self.flows < 0:
            raise ValueError(f"flows must be >= 0, got {self.flows!r}")
        if self.seed < 0:
            raise ValueError(f"seed must be >= 0, got {self.seed!r}")
        if self.ttl <= 0:
            raise ValueError(f"ttl must be > 0, got {self.ttl!r}")


@dataclass(frozen=True)
class CampaignMetrics:
    """Aggregated results of one campaign; rate fields are None when sent = 0
    or nothing was delivered."""

    sent: int
    delivered: int
    pdr: Optional[float]
    mean_hop_count: Optional[float]
    mean_path_length_m: Optional[float]
    mean_delay_ms: Optional[float]
    drop_breakdown: dict


def _rng_streams(seed: int):
    placement, motion, flows = np.random.SeedSequence(seed).spawn(3)
    return (
        np.random.default_rng(placement),
        np.random.default_rng(motion),
        np.random.default_rng(flows),
    )


def generate_nodes(config: SimConfig) -> NetworkSnapshot:
    """Draw a Poisson field of vehicles, fully determined by the seed.

    The node count is Poisson(density * area) unless ``node_count`` pins it;
    positions are i.i.d. uniform over the field, headings uniform in
    (-pi, pi], speeds uniform in [speed_min, speed_max].
    """
    config.validate()
    placement_rng, motion_rng, _ = _rng_streams(config.seed)
    area = config.field_width * config.field_height
    if config.node_count is not None:
        count = config.node_count
    else:
        count = int(placement_rng.poisson(config.density * area))
    xs = placement_rng.uniform(0.0, config.field_width, size=count)
    ys = placement_rng.uniform(0.0, config.field_height, size=count)
    headings = motion_rng.uniform(-math.pi, math.pi, size=count)
    speeds = motion_rng.uniform(config.speed_min, config.speed_max, size=count)
    vehicles = [
        Vehicle(
            id=i,
            position=Position(float(xs[i]), float(ys[i])),
            speed=float(speeds[i]),
            heading=wrap_angle(float(headings[i])),
        )
        for i in range(count)
    ]
    return NetworkSnapshot(vehicles, config.tx_range)


def _advance(vehicle: Vehicle, dt: float, width: float, height: float) -> Vehicle:
    x = vehicle.position.x + vehicle.speed * dt * math.cos(vehicle.heading)
    y = vehicle.position.y + vehicle.speed * dt * math.sin(vehicle.heading)
    heading = vehicle.heading
    while not (0.0 <= x <= width and 0.0 <= y <= height):
        if x < 0.0:
            x = -x
            heading = wrap_angle(math.pi - heading)
        elif x > width:
            x = 2.0 * width - x
            heading = wrap_angle(math.pi - heading)
        if y < 0.0:
            y = -y
            heading = wrap_angle(-heading)
        elif y > height:
            y = 2.0 * height - y
            heading = wrap_angle(-heading)
    return Vehicle(vehicle.id, Position(x, y), vehicle.speed, heading)


def step_mobility(
    snapshot: NetworkSnapshot, dt: float, field_width: float, field_height: float
) -> NetworkSnapshot:
    """Advance every vehicle ``dt`` seconds along its heading.

    Vehicles crossing a field boundary reflect: the position folds back inside
    and the heading mirrors on the violated axis.  Speeds are untouched.
    """
    if not dt > 0:
        raise ValueError(f"dt must be > 0, got {dt!r}")
    moved = [
        _advance(v, dt, field_width, field_height) for v in snapshot.vehicles.values()
    ]
    return NetworkSnapshot(moved, snapshot.transmission_range)


def beacon_view(
    snapshot: NetworkSnapshot, sim_time: float, beacon_interval: float
) -> dict[int, Position]:
    """Positions as of the most recent beacon tick.

    Rewinds each vehicle's straight-line motion by the time elapsed since
    ``floor(sim_time / beacon_interval) * beacon_interval``.  Routing decisions
    consume this stale view; delivery checks stay on the snapshot's ground
    truth.  A vehicle that reflected off a boundary since the tick is rewound
    along its current heading, which can momentarily place its beacon position
    just outside the field.
    """
    if not beacon_interval > 0:
        raise ValueError(f"beacon_interval must be > 0, got {beacon_interval!r}")
    lag = sim_time - math.floor(sim_time / beacon_interval) * beacon_interval
    view: dict[int, Position] = {}
    for vid, v in snapshot.vehicles.items():
        if lag == 0.0 or v.speed == 0.0:
            view[vid] = v.position
        else:
            view[vid] = Position(
                v.position.x - v.speed * lag * math.cos(v.heading),
                v.position.y - v.speed * lag * math.sin(v.heading),
            )
    return view


def _path_length_m(path: tuple[int, ...], snapshot: NetworkSnapshot) -> float:
    pairs = zip(path, path[1:])
    return sum(
        distance(snapshot.vehicles[a].position, snapshot.vehicles[b].position)
        for a, b in pairs
    )


def run_campaign(config: SimConfig) -> CampaignMetrics:
    """Run one seeded campaign and aggregate its metrics.

    Time advances in ``time_step`` increments; each of the ``flows`` attempts
    fires at its scheduled slot (evenly spread over the duration) on the first
    grid time at or past it, routing between a uniformly drawn distinct
    source/destination pair using the beacon view current at that moment.
    Flows scheduled while fewer than two vehicles exist are skipped and do not
    count as sent.
    """
    config.validate()
    _, _, flow_rng = _rng_streams(config.seed)
    snapshot = generate_nodes(config)
    flow_times = [i * config.duration / config.flows for i in range(config.flows)]

    sent = 0
    results: list[RouteResult] = []
    path_lengths: list[float] = []
    sim_time = 0.0
    step_index = 0
    next_flow = 0
    while next_flow < len(flow_times):
        while next_flow < len(flow_times) and flow_times[next_flow] <= sim_time + 1e-9:
            ids = sorted(snapshot.vehicles)
            if len(ids) >= 2:
                si = int(flow_rng.integers(len(ids)))
                di = int(flow_rng.integers(len(ids) - 1))
                if di >= si:
                    di += 1
                tick = math.floor(sim_time / config.beacon_interval) * config.beacon_interval
                view = beacon_view(snapshot, sim_time, config.beacon_interval)
                result = route(
                    config.protocol,
                    ids[si],
                    ids[di],
                    snapshot,
                    now=sim_time,
                    ttl=config.ttl,
                    known_positions=view,
                    known_time=tick,
                )
                sent += 1
                results.append(result)
                if result.outcome is Outcome.DELIVERED:
                    path_lengths.append(_path_length_m(result.path, snapshot))
            next_flow += 1
        if next_flow >= len(flow_times):
            break
        step_index += 1
        sim_time = step_index * config.time_step
        snapshot = step_mobility(
            snapshot, config.time_step, config.field_width, config.field_height
        )

    delivered = sum(1 for r in results if r.outcome is Outcome.DELIVERED)
    drops = {o.value: 0 for o in DROP_OUTCOMES}
    for r in results:
        if r.outcome is not Outcome.DELIVERED:
            drops[r.outcome.value] += 1
    hops = [r.hop_count for r in results if r.outcome is Outcome.DELIVERED]
    mean_hops = sum(hops) / len(hops) if hops else None
    mean_path = sum(path_lengths) / len(path_lengths) if path_lengths else None
    return CampaignMetrics(
        sent=sent,
        delivered=delivered,
        pdr=delivered / sent if sent else None,
        mean_hop_count=mean_hops,
        mean_path_length_m=mean_path,
        mean_delay_ms=mean_hops * config.per_hop_latency_ms if mean_hops is not None else None,
        drop_breakdown=drops,
    )


def _fmt_real(value: Optional[float]) -> str:
    return "" if value is None else f"{value:.6f}"


def metrics_row(config: SimConfig, metrics: CampaignMetrics) -> list[str]:
    """One metrics-CSV row for a (protocol, density, seed) cell.

    Reals use fixed 6-decimal formatting; undefined rates print empty.
    """
    return [
        config.protocol,
        _fmt_real(config.density),
        _fmt_real(config.tx_range),
        str(config.seed),
        str(metrics.sent),
        str(metrics.delivered),
        _fmt_real(metrics.pdr),
        _fmt_real(metrics.mean_hop_count),
        _fmt_real(metrics.mean_delay_ms),
        str(metrics.drop_breakdown[Outcome.VOID_DROP.value]),
        str(metrics.drop_breakdown[Outcome.TTL_DROP.value]),
        str(metrics.drop_breakdown[Outcome.LOOP_DROP.value]),
        str(metrics.drop_breakdown[Outcome.ZONE_UNREACHABLE.value]),
    ]


def snapshot_digest(snapshot: NetworkSnapshot) -> str:
    """Stable digest of a snapshot, for asserting identical placements."""
    payload = repr(
        (
            snapshot.transmission_range,
            tuple(
                (v.id, v.position.x, v.position.y, v.speed, v.heading)
                for _, v in sorted(snapshot.vehicles.items())
            ),
        )
    )
    return hashlib.blake2s(payload.encode()).hexdigest()
