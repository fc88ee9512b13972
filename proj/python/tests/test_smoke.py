"""End-to-end smoke tests for the python bindings."""

import json
import math
import random
from pathlib import Path

import pytest

import splatscene as ss

FIXTURES = Path(__file__).resolve().parents[2] / "fixtures"


def box_cloud(n, label, seed=0):
    rng = random.Random(seed)
    cloud = ss.GaussianCloud()
    cloud.label = label
    gaussians = []
    for _ in range(n):
        g = ss.Gaussian()
        g.mean = ss.Vec3(rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4),
                         rng.uniform(0.0, 0.8))
        g.scale = ss.Vec3(0.05, 0.05, 0.05)
        g.opacity = rng.uniform(0.3, 0.9)
        gaussians.append(g)
    cloud.gaussians = gaussians
    return cloud


@pytest.fixture(scope="module")
def plan():
    scene = ss.SceneDims.indoor(10.0, 10.0, 3.0)
    result = ss.plan_scene_fixture("a living room", "", str(FIXTURES / "living-room"),
                                   scene)
    return scene, result


def test_fixture_plan_graph(plan):
    _, result = plan
    graph = json.loads(result["graph_json"])
    assert len(graph["anchors"]) == 7
    assert len(graph["edges"]) == 5
    assert result["dialogue"]


def test_parse_scene_spec_matches_plan(plan):
    scene, result = plan
    graph = ss.parse_scene_spec(result["objects_json"], result["anchors_json"],
                                result["relations_json"], scene)
    assert json.loads(graph) == json.loads(result["graph_json"])


@pytest.fixture(scope="module")
def layout(plan):
    _, result = plan
    graph = json.loads(result["graph_json"])
    assets = {nid: box_cloud(40, nid, seed=i)
              for i, nid in enumerate(graph["anchors"])}
    layout_json = ss.solve_layout(result["graph_json"], assets, grid=0.25, seed=7)
    return assets, layout_json


def test_layout_verifies(plan, layout):
    _, result = plan
    assets, layout_json = layout
    report = ss.verify_layout(layout_json, result["graph_json"], assets)
    hard = [v for v in report["violations"] if v["kind"] != "relation"]
    assert hard == []


def test_layout_deterministic(plan, layout):
    _, result = plan
    assets, layout_json = layout
    again = ss.solve_layout(result["graph_json"], assets, grid=0.25, seed=7)
    assert again == layout_json


def test_compose_and_ply_round_trip(plan, layout, tmp_path):
    scene, _ = plan
    assets, layout_json = layout
    env = ss.init_environment(scene, spacing=0.5)
    composed = ss.compose_scene(layout_json, assets, env)
    assert len(composed) == len(env) + sum(len(c) for c in assets.values())

    path = tmp_path / "scene.ply"
    ss.save_ply(composed, str(path))
    loaded = ss.load_ply(str(path))
    assert len(loaded) == len(composed)
    ss.save_ply(loaded, str(tmp_path / "scene2.ply"))
    assert path.read_bytes() == (tmp_path / "scene2.ply").read_bytes()


def test_camera_stages(plan, layout):
    scene, _ = plan
    assets, layout_json = layout
    s1 = ss.sample_stage1(scene, 40, seed=1)
    s2 = ss.sample_stage2_indoor(scene, layout_json, per_region=2, seed=2)
    s3 = ss.assemble_stage3(s1, s2, layout_json, assets, inflation=0.2)
    n1 = len(s1.strip().splitlines())
    n2 = len(s2.strip().splitlines())
    n3 = len(s3.strip().splitlines())
    assert n1 == 40
    assert n2 == 2 * len(assets)
    assert 0 < n3 <= n1 + n2
    for line in s3.strip().splitlines():
        pose = json.loads(line)
        assert pose["stage"] == 3

    outdoor = ss.SceneDims.outdoor(8.0)
    s2o = ss.sample_stage2_outdoor(outdoor, circles=3, batches=4, seed=3)
    assert len(s2o.strip().splitlines()) == 12

    ring = ss.evaluation_trajectory(outdoor, step=1.0, azimuths=2)
    assert ring.strip().splitlines()


def test_filtering(plan, layout):
    scene, _ = plan
    assets, layout_json = layout
    env = ss.init_environment(scene, spacing=0.5)
    composed = ss.compose_scene(layout_json, assets, env)
    poses = ss.sample_stage1(scene, 4, seed=5)
    scores = ss.contribution_scores(composed, poses, height=32, width=32, threads=2)
    assert len(scores) == len(composed)
    kept = ss.filter_cloud(composed, scores, eta=0.1)
    assert len(kept) == len(composed) - math.ceil(0.1 * len(composed))


def test_schedule_math():
    sched = ss.default_schedule()
    assert sched.T == 1000
    assert ss.time_window(0, 100) == 1000
    assert ss.time_window(50, 100) == 500

    weights = sum(ss.dreamtime_weight(t, 500.0, 200.0, sched)
                  for t in range(1, sched.T + 1))
    assert abs(weights - 1.0) < 1e-9

    ts = ss.sample_timesteps(1000, 4, seed=9)
    assert len(ts) == 4 and ts == sorted(ts)

    x0 = ss.LatentState([0.3, -1.2, 2.5])
    eps = ss.LatentState([0.1, 0.4, -0.9])
    xt = ss.add_noise(x0, eps, 500, sched)
    back = ss.pseudo_ground_truth(xt, eps, 500, sched)
    assert all(abs(a - b) < 1e-12 for a, b in zip(back.values, x0.values))


def test_ddim_round_trip():
    sched = ss.default_schedule()

    def predictor(x, t, prompt):
        return ss.LatentState([math.sin(0.01 * t) for _ in x.values])

    prompt = ss.PromptId("p")
    x = ss.LatentState([0.5, -0.25, 1.0])
    up = ss.ddim_invert_step(x, 10, 800, predictor, prompt, sched, delta_t=100)
    down = ss.ddim_denoise_step(up, 800, 10, predictor, prompt, sched, delta_t=100)
    assert all(abs(a - b) < 1e-6 for a, b in zip(down.values, x.values))

    g = ss.guidance_direction(ss.LatentState([1.0, 2.0]), ss.LatentState([0.5, 0.5]),
                              2.0)
    assert g.values == [1.0, 3.0]


def test_domain_errors():
    with pytest.raises(ss.DomainError):
        ss.sample_timesteps(3, 5, seed=0)
    with pytest.raises(ss.DomainError):
        ss.time_window(101, 100)
