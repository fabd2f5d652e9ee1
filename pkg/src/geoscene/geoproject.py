"""Conversion between geodetic coordinates and the local metric scene frame.

The scene is a flat, axis-aligned rectangle: x runs east from the west edge,
y runs north from the south edge, z is metres above the ground datum. At the
sub-kilometre extents this engine targets, an equirectangular local tangent
plane (longitude scaled by the cosine of the mean latitude) keeps distortion
below a millimetre, so nothing fancier is warranted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

EARTH_RADIUS_M = 6_371_000.0

# Metres per degree of latitude on the reference sphere.
_M_PER_DEG = math.pi / 180.0 * EARTH_RADIUS_M


class OutOfBoundsError(ValueError):
    """A coordinate fell outside the rectangle it was required to be in."""


@dataclass(frozen=True)
class GeoBounds:
    """A lat/lon rectangle with min < max on both axes (closed on all edges)."""

    min_lat: float
    min_lon: float
    max_lat: float
    max_lon: float

    def __post_init__(self):
        if not (-90.0 <= self.min_lat < self.max_lat <= 90.0):
            raise ValueError(
                f"latitude bounds invalid: min {self.min_lat}, max {self.max_lat}"
            )
        if not (-180.0 <= self.min_lon < self.max_lon <= 180.0):
            raise ValueError(
                f"longitude bounds invalid: min {self.min_lon}, max {self.max_lon}"
            )

    @classmethod
    def from_corners(cls, lat1: float, lon1: float, lat2: float, lon2: float) -> "GeoBounds":
        """Build bounds from two opposite corners given in any order."""
        return cls(
            min_lat=min(lat1, lat2),
            min_lon=min(lon1, lon2),
            max_lat=max(lat1, lat2),
            max_lon=max(lon1, lon2),
        )

    def contains(self, lat: float, lon: float) -> bool:
        """True when (lat, lon) lies inside or on the rectangle boundary."""
        return (
            self.min_lat <= lat <= self.max_lat
            and self.min_lon <= lon <= self.max_lon
        )


@dataclass(frozen=True)
class ScenePoint:
    """A position in the scene frame: metres east, north, and above datum."""

    x: float
    y: float
    z: float = 0.0


@dataclass(frozen=True)
class SceneFrame:
    """Geo bounds together with the metric extents they project to."""

    bounds: GeoBounds
    width_m: float
    depth_m: float

    def __post_init__(self):
        if self.width_m <= 0 or self.depth_m <= 0:
            raise ValueError(
                f"frame extents must be positive: {self.width_m} x {self.depth_m}"
            )

    @classmethod
    def from_bounds(cls, bounds: GeoBounds) -> "SceneFrame":
        width_m, depth_m = scene_dimensions(bounds)
        return cls(bounds=bounds, width_m=width_m, depth_m=depth_m)


def scene_dimensions(bounds: GeoBounds) -> tuple[float, float]:
    """Metric (width_m, depth_m) of a lat/lon rectangle.

    Depth is the arc length of the latitude span; width is the longitude
    span's arc length scaled by cos(mean latitude).
    """
    depth_m = (bounds.max_lat - bounds.min_lat) * _M_PER_DEG
    mean_lat = math.radians((bounds.min_lat + bounds.max_lat) / 2.0)
    width_m = (bounds.max_lon - bounds.min_lon) * _M_PER_DEG * math.cos(mean_lat)
    return width_m, depth_m


def project(lat: float, lon: float, frame: SceneFrame) -> ScenePoint:
    """Map an in-bounds (lat, lon) onto the scene ground plane (z = 0).

    The mapping is affine per axis, so bound corners land exactly on frame
    corners. Raises OutOfBoundsError naming the offending coordinate.
    """
    b = frame.bounds
    if lat < b.min_lat or lat > b.max_lat:
        raise OutOfBoundsError(
            f"latitude {lat!r} outside [{b.min_lat}, {b.max_lat}]"
        )
    if lon < b.min_lon or lon > b.max_lon:
        raise OutOfBoundsError(
            f"longitude {lon!r} outside [{b.min_lon}, {b.max_lon}]"
        )
    # Ratio first: it is exactly 1.0 at the far corner and never above it,
    # so projected points cannot overshoot the frame by a rounding ulp.
    x = frame.width_m * ((lon - b.min_lon) / (b.max_lon - b.min_lon))
    y = frame.depth_m * ((lat - b.min_lat) / (b.max_lat - b.min_lat))
    return ScenePoint(x=x, y=y, z=0.0)


def unproject(x: float, y: float, frame: SceneFrame) -> tuple[float, float]:
    """Exact algebraic inverse of project: scene (x, y) back to (lat, lon)."""
    b = frame.bounds
    if x < 0.0 or x > frame.width_m:
        raise OutOfBoundsError(f"x {x!r} outside [0, {frame.width_m}]")
    if y < 0.0 or y > frame.depth_m:
        raise OutOfBoundsError(f"y {y!r} outside [0, {frame.depth_m}]")
    lat = b.min_lat + (y / frame.depth_m) * (b.max_lat - b.min_lat)
    lon = b.min_lon + (x / frame.width_m) * (b.max_lon - b.min_lon)
    return lat, lon


# Reference campus region used by fixtures and demos (~0.74 km x 0.78 km).
CAMBRIDGE_BOUNDS = GeoBounds.from_corners(42.350, -71.090, 42.357, -71.099)
