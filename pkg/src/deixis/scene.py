"""Workspace contents, object footprints, gravity-aware stability.

Stability criterion: the vertical projection of a placed shape's center of
mass must fall inside its supporting face (the table, or the top face of the
object directly beneath) shrunk by a 5 mm margin.  Shapes are symmetric with
uniform density, so the center of mass projects onto the placement position.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .errors import NoStablePlacement, UnknownSupport
from .geometry import Plane, SurfacePoint, surface_distance

SUPPORT_MARGIN = 0.005
COLLISION_TOL = 0.001
HEIGHT_TIE_TOL = 1e-6
_NUDGE = 1e-9
_CONTAIN_EPS = 1e-12  # absorbs rounding so clamp results stay contained

TABLE = "table"

_ROUND_KINDS = ("mug", "saucer")
_BOX_KINDS = ("cuboid", "cube")


@dataclass(frozen=True)
class Shape:
    """Footprint and height of a household object.

    Mugs and saucers have circular footprints (`radius`); cuboids and cubes
    have rectangular footprints (`half_extents`).
    """

    kind: str
    height: float
    radius: float | None = None
    half_extents: tuple[float, float] | None = None

    def __post_init__(self) -> None:
        if self.kind not in _ROUND_KINDS + _BOX_KINDS:
            raise ValueError(f"unknown shape kind {self.kind!r}")
        if self.height <= 0.0:
            raise ValueError("height must be positive")
        if self.kind in _ROUND_KINDS:
            if self.radius is None or self.radius <= 0.0 or self.half_extents is not None:
                raise ValueError(f"{self.kind} requires a positive radius footprint")
        else:
            if (self.half_extents is None or min(self.half_extents) <= 0.0
                    or self.radius is not None):
                raise ValueError(f"{self.kind} requires positive half extents")

    @classmethod
    def mug(cls, radius: float, height: float) -> "Shape":
        return cls("mug", height, radius=radius)

    @classmethod
    def saucer(cls, radius: float, height: float) -> "Shape":
        return cls("saucer", height, radius=radius)

    @classmethod
    def cube(cls, half: float, height: float) -> "Shape":
        return cls("cube", height, half_extents=(half, half))

    @classmethod
    def cuboid(cls, half_extents: tuple[float, float], height: float) -> "Shape":
        return cls("cuboid", height, half_extents=half_extents)

    def footprint(self, pose: "Pose2D") -> "Disk | Rect":
        if self.radius is not None:
            return Disk(pose.position.u, pose.position.v, self.radius)
        hu, hv = self.half_extents  # type: ignore[misc]
        return Rect(pose.position.u, pose.position.v, hu, hv, pose.yaw)

    def circumradius(self) -> float:
        if self.radius is not None:
            return self.radius
        return math.hypot(*self.half_extents)  # type: ignore[misc]


@dataclass(frozen=True)
class Pose2D:
    """Planar pose on the rest surface: only (u, v) and yaw vary; the object
    rests flat with its z-axis along the surface normal."""

    position: SurfacePoint
    yaw: float = 0.0

    def __post_init__(self) -> None:
        if not (-math.pi <= self.yaw < math.pi):
            object.__setattr__(self, "yaw", math.remainder(self.yaw, math.tau))
            if self.yaw >= math.pi:
                object.__setattr__(self, "yaw", self.yaw - math.tau)


@dataclass(frozen=True)
class Disk:
    cu: float
    cv: float
    radius: float

    def contains(self, p: SurfacePoint, shrink: float = 0.0) -> bool:
        return math.hypot(p.u - self.cu, p.v - self.cv) <= self.radius - shrink + _CONTAIN_EPS

    def clamp(self, p: SurfacePoint, shrink: float = 0.0) -> SurfacePoint:
        r = self.radius - shrink
        d = math.hypot(p.u - self.cu, p.v - self.cv)
        if d <= r:
            return p
        s = r / d
        return SurfacePoint(self.cu + (p.u - self.cu) * s, self.cv + (p.v - self.cv) * s)

    def push_out(self, p: SurfacePoint) -> SurfacePoint:
        d = math.hypot(p.u - self.cu, p.v - self.cv)
        if d == 0.0:
            return SurfacePoint(self.cu + self.radius + _NUDGE, self.cv)
        s = (self.radius + _NUDGE) / d
        return SurfacePoint(self.cu + (p.u - self.cu) * s, self.cv + (p.v - self.cv) * s)


@dataclass(frozen=True)
class Rect:
    cu: float
    cv: float
    half_u: float
    half_v: float
    yaw: float = 0.0

    def _local(self, p: SurfacePoint) -> tuple[float, float]:
        du, dv = p.u - self.cu, p.v - self.cv
        if self.yaw == 0.0:
            return du, dv
        c, s = math.cos(self.yaw), math.sin(self.yaw)
        return c * du + s * dv, -s * du + c * dv

    def _world(self, x: float, y: float) -> SurfacePoint:
        if self.yaw == 0.0:
            return SurfacePoint(self.cu + x, self.cv + y)
        c, s = math.cos(self.yaw), math.sin(self.yaw)
        return SurfacePoint(self.cu + c * x - s * y, self.cv + s * x + c * y)

    def contains(self, p: SurfacePoint, shrink: float = 0.0) -> bool:
        x, y = self._local(p)
        return (abs(x) <= self.half_u - shrink + _CONTAIN_EPS
                and abs(y) <= self.half_v - shrink + _CONTAIN_EPS)

    def clamp(self, p: SurfacePoint, shrink: float = 0.0) -> SurfacePoint:
        x, y = self._local(p)
        x = min(max(x, -(self.half_u - shrink)), self.half_u - shrink)
        y = min(max(y, -(self.half_v - shrink)), self.half_v - shrink)
        return self._world(x, y)

    def push_out(self, p: SurfacePoint) -> SurfacePoint:
        x, y = self._local(p)
        gaps = (self.half_u - x, self.half_u + x, self.half_v - y, self.half_v + y)
        side = gaps.index(min(gaps))
        if side == 0:
            x = self.half_u + _NUDGE
        elif side == 1:
            x = -self.half_u - _NUDGE
        elif side == 2:
            y = self.half_v + _NUDGE
        else:
            y = -self.half_v - _NUDGE
        return self._world(x, y)


def _penetration(a: Disk | Rect, b: Disk | Rect) -> float:
    """Approximate overlap depth between two footprints (meters)."""
    if isinstance(a, Disk) and isinstance(b, Disk):
        return (a.radius + b.radius) - math.hypot(a.cu - b.cu, a.cv - b.cv)
    if isinstance(a, Rect) and isinstance(b, Rect) and a.yaw == 0.0 and b.yaw == 0.0:
        du = (a.half_u + b.half_u) - abs(a.cu - b.cu)
        dv = (a.half_v + b.half_v) - abs(a.cv - b.cv)
        return min(du, dv)
    if isinstance(a, Rect):
        a, b = b, a
    # disk vs rect: distance from disk center to the clamped rect point
    q = b.clamp(SurfacePoint(a.cu, a.cv))  # type: ignore[union-attr]
    return a.radius - math.hypot(q.u - a.cu, q.v - a.cv)  # type: ignore[union-attr]


@dataclass(frozen=True)
class SceneObject:
    id: str
    shape: Shape
    pose: Pose2D
    support: str = TABLE  # TABLE or the id of the object beneath


@dataclass(frozen=True)
class Scene:
    """Immutable workspace: a rest surface, objects, and a gravity flag."""

    surface: Plane
    objects: tuple[SceneObject, ...] = ()
    gravity: bool = True

    def __post_init__(self) -> None:
        ids = [o.id for o in self.objects]
        if len(set(ids)) != len(ids):
            raise ValueError("object ids must be unique")
        by_id = {o.id: o for o in self.objects}
        for o in self.objects:
            if o.support != TABLE and o.support not in by_id:
                raise ValueError(f"{o.id} is supported by unknown object {o.support}")
            if not self.surface.contains_surface_point(o.pose.position):
                raise ValueError(f"{o.id} lies outside the surface extent")
        for o in self.objects:
            seen = {o.id}
            cur = o
            while cur.support != TABLE:
                if cur.support in seen:
                    raise ValueError(f"support cycle involving {o.id}")
                seen.add(cur.support)
                cur = by_id[cur.support]
        for a, b in itertools.combinations(self.objects, 2):
            lo_a, hi_a = self._z_span(a, by_id)
            lo_b, hi_b = self._z_span(b, by_id)
            if min(hi_a, hi_b) - max(lo_a, lo_b) <= 0.0:
                continue
            if _penetration(a.shape.footprint(a.pose), b.shape.footprint(b.pose)) > COLLISION_TOL:
                raise ValueError(f"objects {a.id} and {b.id} overlap")

    def _z_span(self, obj: SceneObject, by_id: dict[str, SceneObject] | None = None) -> tuple[float, float]:
        by_id = by_id or {o.id: o for o in self.objects}
        z = 0.0
        cur = obj
        while cur.support != TABLE:
            cur = by_id[cur.support]
            z += cur.shape.height
        return z, z + obj.shape.height

    def object_by_id(self, oid: str) -> SceneObject:
        for o in self.objects:
            if o.id == oid:
                return o
        raise KeyError(oid)

    def z_top(self, oid: str) -> float:
        return self._z_span(self.object_by_id(oid))[1]

    def support_at(self, position: SurfacePoint) -> SceneObject | None:
        """The object whose top face lies directly beneath `position`, or
        None for the bare table.  Raises UnknownSupport on a height tie
        between distinct covering objects."""
        covering = [o for o in self.objects
                    if o.shape.footprint(o.pose).contains(position)]
        if not covering:
            return None
        covering.sort(key=lambda o: self.z_top(o.id), reverse=True)
        if (len(covering) > 1
                and self.z_top(covering[0].id) - self.z_top(covering[1].id) < HEIGHT_TIE_TOL):
            raise UnknownSupport(
                f"position ({position.u:.3f}, {position.v:.3f}) is covered by "
                f"{covering[0].id} and {covering[1].id} at the same height")
        return covering[0]


@dataclass(frozen=True)
class PickAndPlaceTask:
    """The task tuple: which object moves, from where, to where."""

    object_id: str
    x_init: SurfacePoint
    x_final: SurfacePoint

    def check_against(self, scene: Scene) -> None:
        if not scene.surface.contains_surface_point(self.x_init):
            raise ValueError("x_init outside the surface extent")
        if not scene.surface.contains_surface_point(self.x_final):
            raise ValueError("x_final outside the surface extent")


def is_stable(scene: Scene, shape: Shape, position: SurfacePoint) -> bool:
    """True iff gravity is off or the center of mass is over its support face.

    A table placement must also clear every object footprint: a shape whose
    center is off a stack but whose footprint still overlaps it cannot rest
    flat and is unstable.
    """
    if not scene.gravity:
        return True
    support = scene.support_at(position)
    if support is not None:
        return support.shape.footprint(support.pose).contains(position,
                                                              shrink=SUPPORT_MARGIN)
    if not scene.surface.contains_surface_point(position, shrink=SUPPORT_MARGIN):
        return False
    fp = shape.footprint(Pose2D(position))
    return all(_penetration(fp, o.shape.footprint(o.pose)) <= COLLISION_TOL
               for o in scene.objects)


@dataclass(frozen=True)
class StableRegion:
    """Set of stable placement positions for a shape in a scene.

    Membership delegates to `is_stable`; the primitive decomposition
    (table rectangle, footprint holes, shrunk top-face islands) only guides
    the analytic nearest-point search.
    """

    scene: Scene
    shape: Shape
    base: Rect | None
    holes: tuple[Disk | Rect, ...] = ()
    islands: tuple[Disk | Rect, ...] = ()

    def contains(self, p: SurfacePoint) -> bool:
        if not self.scene.surface.contains_surface_point(p):
            return False
        return is_stable(self.scene, self.shape, p)

    def is_empty(self) -> bool:
        return self.base is None and not self.islands

    def primitives(self) -> tuple[Disk | Rect, ...]:
        parts = tuple(self.islands)
        if self.base is not None:
            parts += (self.base,)
        return parts

    def nearest(self, x: SurfacePoint) -> SurfacePoint:
        """Closest stable position to `x`; ties broken by lower u, then lower v."""
        if self.contains(x):
            return x
        candidates: list[SurfacePoint] = []
        for prim in self.islands:
            candidates.append(prim.clamp(x))
        if self.base is not None:
            q = self.base.clamp(x)
            candidates.append(q)
            for h in self.holes:
                if h.contains(q):
                    candidates.append(h.push_out(q))
                if h.contains(x):
                    candidates.append(h.push_out(x))
        viable = [c for c in candidates if self.contains(c)]
        if not viable:
            viable = self._grid_candidates(x)
        if not viable:
            raise NoStablePlacement("no stable placement exists for this shape")
        best = min(surface_distance(c, x) for c in viable)
        tied = [c for c in viable if surface_distance(c, x) <= best + 1e-9]
        tied.sort(key=lambda c: (c.u, c.v))
        return tied[0]

    def distance(self, x: SurfacePoint) -> float:
        if self.contains(x):
            return 0.0
        return surface_distance(self.nearest(x), x)

    def _grid_candidates(self, x: SurfacePoint, coarse: float = 0.01,
                         fine: float = 0.001) -> list[SurfacePoint]:
        hu = self.scene.surface.extent[0] / 2.0
        hv = self.scene.surface.extent[1] / 2.0
        best: SurfacePoint | None = None
        best_d = math.inf
        nu, nv = int(2 * hu / coarse) + 1, int(2 * hv / coarse) + 1
        for i in range(nu):
            for j in range(nv):
                p = SurfacePoint(-hu + i * coarse, -hv + j * coarse)
                if not self.contains(p):
                    continue
                d = surface_distance(p, x)
                if d < best_d:
                    best, best_d = p, d
        if best is None:
            return []
        out = [best]
        steps = int(2 * coarse / fine)
        for i in range(-steps, steps + 1):
            for j in range(-steps, steps + 1):
                p = SurfacePoint(best.u + i * fine, best.v + j * fine)
                if self.contains(p):
                    out.append(p)
        return out


def _dilate(fp: Disk | Rect, shape: Shape) -> Disk | Rect:
    """Footprint grown by the placed shape, minus the collision tolerance.

    Exact for disk/disk and axis-aligned rect/rect; rotated or mixed pairs
    fall back to the circumradius (an over-approximation, harmless because
    region membership always re-checks `is_stable`).
    """
    if isinstance(fp, Disk):
        grow = shape.radius if shape.radius is not None else shape.circumradius()
        return Disk(fp.cu, fp.cv, fp.radius + grow - COLLISION_TOL)
    if shape.radius is not None:
        grow_u = grow_v = shape.radius
    elif fp.yaw == 0.0:
        grow_u, grow_v = shape.half_extents  # type: ignore[misc]
    else:
        grow_u = grow_v = shape.circumradius()
    return Rect(fp.cu, fp.cv, fp.half_u + grow_u - COLLISION_TOL,
                fp.half_v + grow_v - COLLISION_TOL, fp.yaw)


def stable_region(scene: Scene, shape: Shape) -> StableRegion:
    """All positions where `is_stable` holds; the full extent with gravity off."""
    hu, hv = scene.surface.extent[0] / 2.0, scene.surface.extent[1] / 2.0
    if not scene.gravity:
        return StableRegion(scene, shape, base=Rect(0.0, 0.0, hu, hv))
    base = None
    if hu > SUPPORT_MARGIN and hv > SUPPORT_MARGIN:
        base = Rect(0.0, 0.0, hu - SUPPORT_MARGIN, hv - SUPPORT_MARGIN)
    holes: list[Disk | Rect] = []
    islands: list[Disk | Rect] = []
    for o in scene.objects:
        fp = o.shape.footprint(o.pose)
        holes.append(_dilate(fp, shape))
        if isinstance(fp, Disk):
            if fp.radius > SUPPORT_MARGIN:
                islands.append(Disk(fp.cu, fp.cv, fp.radius - SUPPORT_MARGIN))
        else:
            if min(fp.half_u, fp.half_v) > SUPPORT_MARGIN:
                islands.append(Rect(fp.cu, fp.cv, fp.half_u - SUPPORT_MARGIN,
                                    fp.half_v - SUPPORT_MARGIN, fp.yaw))
    return StableRegion(scene, shape, base=base, holes=tuple(holes),
                        islands=tuple(islands))


def nearest_stable(scene: Scene, shape: Shape, x: SurfacePoint) -> SurfacePoint:
    """Closest stable placement to `x` (x itself when already stable)."""
    region = stable_region(scene, shape)
    if region.is_empty():
        raise NoStablePlacement("stable region is empty")
    return region.nearest(x)
