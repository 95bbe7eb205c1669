import math

import pytest

from deixis.errors import NoStablePlacement, UnknownSupport
from deixis.geometry import Plane, SurfacePoint, surface_distance
from deixis.scene import (SUPPORT_MARGIN, Pose2D, Scene, SceneObject, Shape,
                          is_stable, nearest_stable, stable_region)

PLANE = Plane.horizontal((1.2, 0.8))
CUBE = Shape.cube(half=0.03, height=0.06)
BOX = Shape.cuboid(half_extents=(0.10, 0.10), height=0.10)


def stack_scene(gravity: bool = True) -> Scene:
    return Scene(PLANE,
                 (SceneObject("base", BOX, Pose2D(SurfacePoint(0.2, 0.0))),
                  SceneObject("top", BOX, Pose2D(SurfacePoint(0.2, 0.0)),
                              support="base")),
                 gravity=gravity)


class TestShape:
    def test_round_kinds_need_radius(self):
        with pytest.raises(ValueError):
            Shape("mug", height=0.1)
        with pytest.raises(ValueError):
            Shape("mug", height=0.1, radius=0.04, half_extents=(0.1, 0.1))

    def test_box_kinds_need_half_extents(self):
        with pytest.raises(ValueError):
            Shape("cube", height=0.1)
        with pytest.raises(ValueError):
            Shape("cuboid", height=0.1, half_extents=(0.0, 0.1))

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            Shape("sphere", height=0.1, radius=0.05)

    def test_circumradius(self):
        assert Shape.mug(0.04, 0.1).circumradius() == 0.04
        assert math.isclose(Shape.cube(0.03, 0.06).circumradius(),
                            math.hypot(0.03, 0.03))


class TestPose:
    def test_yaw_normalized(self):
        assert -math.pi <= Pose2D(SurfacePoint(0, 0), yaw=7.0).yaw < math.pi
        assert Pose2D(SurfacePoint(0, 0), yaw=math.pi).yaw == -math.pi


class TestSceneValidation:
    def test_duplicate_ids(self):
        with pytest.raises(ValueError):
            Scene(PLANE, (SceneObject("a", CUBE, Pose2D(SurfacePoint(0, 0))),
                          SceneObject("a", CUBE, Pose2D(SurfacePoint(0.3, 0)))))

    def test_unknown_support(self):
        with pytest.raises(ValueError):
            Scene(PLANE, (SceneObject("a", CUBE, Pose2D(SurfacePoint(0, 0)),
                                      support="ghost"),))

    def test_support_cycle(self):
        with pytest.raises(ValueError):
            Scene(PLANE, (SceneObject("a", CUBE, Pose2D(SurfacePoint(0, 0)),
                                      support="b"),
                          SceneObject("b", CUBE, Pose2D(SurfacePoint(0, 0)),
                                      support="a")))

    def test_outside_extent(self):
        with pytest.raises(ValueError):
            Scene(PLANE, (SceneObject("a", CUBE, Pose2D(SurfacePoint(5.0, 0))),))

    def test_overlap_rejected(self):
        with pytest.raises(ValueError):
            Scene(PLANE, (SceneObject("a", CUBE, Pose2D(SurfacePoint(0, 0))),
                          SceneObject("b", CUBE, Pose2D(SurfacePoint(0.01, 0)))))

    def test_stacked_objects_allowed(self):
        scene = stack_scene()
        assert scene.z_top("top") == pytest.approx(0.20)

    def test_support_tie_is_ambiguous(self):
        # footprints overlap by 0.5 mm, under the collision tolerance
        scene = Scene(PLANE,
                      (SceneObject("a", BOX, Pose2D(SurfacePoint(-0.1, 0))),
                       SceneObject("b", BOX, Pose2D(SurfacePoint(0.0995, 0)))))
        with pytest.raises(UnknownSupport):
            scene.support_at(SurfacePoint(-0.0003, 0.0))


class TestIsStable:
    def test_centered_on_stack_top(self):
        assert is_stable(stack_scene(), CUBE, SurfacePoint(0.2, 0.0))

    def test_com_beyond_top_face(self):
        # 1 cm past the face edge at u = 0.3
        assert not is_stable(stack_scene(), CUBE, SurfacePoint(0.31, 0.0))

    def test_inside_margin_ring_unstable(self):
        # inside the face but within the 5 mm shrink margin
        assert not is_stable(stack_scene(), CUBE, SurfacePoint(0.297, 0.0))

    def test_gravity_off_everything_stable(self):
        scene = stack_scene(gravity=False)
        assert is_stable(scene, CUBE, SurfacePoint(0.31, 0.0))
        assert is_stable(scene, CUBE, SurfacePoint(-0.59, 0.39))

    def test_bare_table(self):
        scene = Scene(PLANE)
        assert is_stable(scene, CUBE, SurfacePoint(0, 0))
        assert not is_stable(scene, CUBE, SurfacePoint(0.598, 0.0))


class TestStableRegion:
    def test_empty_table_shrunk_rect(self):
        region = stable_region(Scene(PLANE), CUBE)
        assert region.base is not None
        assert region.base.half_u == pytest.approx(0.6 - SUPPORT_MARGIN)
        assert region.base.half_v == pytest.approx(0.4 - SUPPORT_MARGIN)
        assert not region.holes and not region.islands

    def test_gravity_off_full_extent(self):
        region = stable_region(stack_scene(gravity=False), CUBE)
        assert region.base.half_u == pytest.approx(0.6)
        assert region.contains(SurfacePoint(0.6, 0.4))

    def test_grid_agreement_with_is_stable(self):
        scene = stack_scene()
        region = stable_region(scene, CUBE)

        def primitive_member(p):
            if any(i.contains(p) for i in region.islands):
                return True
            if region.base is None or not region.base.contains(p):
                return False
            return not any(h.contains(p) for h in region.holes)

        n = 0
        for i in range(-60, 61, 2):
            for j in range(-40, 41, 2):
                p = SurfacePoint(i / 100.0, j / 100.0)
                assert primitive_member(p) == is_stable(scene, CUBE, p)
                assert region.contains(p) == is_stable(scene, CUBE, p)
                n += 1
        assert n > 1000

    def test_monotone_in_objects(self):
        with_stack = stable_region(stack_scene(), CUBE)
        bare = stable_region(Scene(PLANE), CUBE)
        for i in range(-59, 60, 3):
            for j in range(-39, 40, 3):
                p = SurfacePoint(i / 100.0, j / 100.0)
                # removing the stack never shrinks the table-level region
                if with_stack.contains(p) and not any(
                        h.contains(p) for h in with_stack.holes):
                    assert bare.contains(p)

    def test_gravity_off_superset(self):
        on = stable_region(stack_scene(True), CUBE)
        off = stable_region(stack_scene(False), CUBE)
        for i in range(-59, 60, 3):
            for j in range(-39, 40, 3):
                p = SurfacePoint(i / 100.0, j / 100.0)
                if on.contains(p):
                    assert off.contains(p)


class TestNearestStable:
    def test_identity_when_stable(self):
        scene = stack_scene()
        p = SurfacePoint(0.2, 0.0)
        assert nearest_stable(scene, CUBE, p) == p

    def test_gravity_off_identity(self):
        scene = stack_scene(gravity=False)
        p = SurfacePoint(0.31, 0.0)
        assert nearest_stable(scene, CUBE, p) == p

    def grid_oracle(self, scene, shape, x, step=0.001):
        best, best_d = None, math.inf
        for i in range(-80, 81):
            for j in range(-80, 81):
                p = SurfacePoint(x.u + i * step, x.v + j * step)
                if abs(p.u) > 0.6 or abs(p.v) > 0.4:
                    continue
                if not is_stable(scene, shape, p):
                    continue
                d = surface_distance(p, x)
                if d < best_d:
                    best, best_d = p, d
        return best, best_d

    def test_stack_edge_matches_grid_oracle(self):
        scene = stack_scene()
        x = SurfacePoint(0.302, 0.0)  # just past the top face edge
        got = nearest_stable(scene, CUBE, x)
        oracle, oracle_d = self.grid_oracle(scene, CUBE, x)
        assert oracle is not None
        assert surface_distance(got, oracle) <= 0.002
        assert surface_distance(got, x) <= oracle_d + 1e-9

    def test_nearest_never_beaten_on_probe_grid(self):
        scene = stack_scene()
        x = SurfacePoint(0.305, 0.02)
        d_got = surface_distance(nearest_stable(scene, CUBE, x), x)
        for i in range(-60, 61):
            for j in range(-40, 41):
                p = SurfacePoint(i / 100.0, j / 100.0)
                if is_stable(scene, CUBE, p):
                    assert d_got <= surface_distance(p, x) + 1e-9

    def test_no_stable_placement(self):
        tiny = Plane.horizontal((0.008, 0.008))
        region = stable_region(Scene(tiny), CUBE)
        assert region.is_empty()
        with pytest.raises(NoStablePlacement):
            nearest_stable(Scene(tiny), CUBE, SurfacePoint(0, 0))
