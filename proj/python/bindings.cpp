#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "splatscene/camera.hpp"
#include "splatscene/composer.hpp"
#include "splatscene/filter.hpp"
#include "splatscene/layout.hpp"
#include "splatscene/planner.hpp"
#include "splatscene/ply.hpp"
#include "splatscene/scene_spec.hpp"
#include "splatscene/schedule.hpp"

namespace py = pybind11;
using namespace splat;

namespace {

std::map<std::string, Box3> boxesOf(const std::map<std::string, GaussianCloud>& assets) {
    std::map<std::string, Box3> out;
    for (const auto& [id, cloud] : assets) out[id] = aabb(cloud);
    return out;
}

py::dict reportDict(const LayoutReport& report) {
    py::list violations;
    for (const auto& v : report.violations) {
        const char* kind = "collision";
        switch (v.kind) {
            case ViolationKind::Collision: kind = "collision"; break;
            case ViolationKind::RelationBroken: kind = "relation"; break;
            case ViolationKind::Anchor: kind = "anchor"; break;
            case ViolationKind::Bounds: kind = "bounds"; break;
        }
        py::dict item;
        item["kind"] = kind;
        item["instances"] = v.instances;
        item["detail"] = v.detail;
        violations.append(item);
    }
    py::dict out;
    out["ok"] = report.ok();
    out["violations"] = violations;
    return out;
}

}  // namespace

PYBIND11_MODULE(_splatscene, m) {
    m.doc() = "3D Gaussian splat scene toolkit";

    py::register_exception<FormatError>(m, "FormatError");
    py::register_exception<DomainError>(m, "DomainError");

    py::class_<Vec3>(m, "Vec3")
        .def(py::init<>())
        .def(py::init<double, double, double>())
        .def_readwrite("x", &Vec3::x)
        .def_readwrite("y", &Vec3::y)
        .def_readwrite("z", &Vec3::z)
        .def("__repr__", [](const Vec3& v) {
            return "Vec3(" + std::to_string(v.x) + ", " + std::to_string(v.y) + ", " +
                   std::to_string(v.z) + ")";
        });

    py::class_<SceneDims>(m, "SceneDims")
        .def_static("indoor", &SceneDims::indoor, py::arg("width"), py::arg("length"),
                    py::arg("height"))
        .def_static("outdoor", &SceneDims::outdoor, py::arg("radius"))
        .def_readonly("width", &SceneDims::width)
        .def_readonly("length", &SceneDims::length)
        .def_readonly("height", &SceneDims::height)
        .def_readonly("radius", &SceneDims::radius)
        .def_property_readonly("is_indoor", [](const SceneDims& s) {
            return s.kind == SceneKind::Indoor;
        });

    py::class_<Gaussian>(m, "Gaussian")
        .def(py::init<>())
        .def_readwrite("mean", &Gaussian::mean)
        .def_readwrite("scale", &Gaussian::scale)
        .def_readwrite("opacity", &Gaussian::opacity)
        .def_readwrite("sh_dc", &Gaussian::sh_dc);

    py::class_<GaussianCloud>(m, "GaussianCloud")
        .def(py::init<>())
        .def_readwrite("gaussians", &GaussianCloud::gaussians)
        .def_readwrite("label", &GaussianCloud::label)
        .def("__len__", &GaussianCloud::size);

    // persistence -----------------------------------------------------------
    m.def("load_ply", &loadPlyFile, py::arg("path"));
    m.def("save_ply", &savePlyFile, py::arg("cloud"), py::arg("path"));

    // scene spec / planning -------------------------------------------------
    m.def(
        "parse_scene_spec",
        [](const std::string& objects, const std::string& anchors,
           const std::string& relations, const SceneDims& scene) {
            return serializeGraph(parseSceneSpec(objects, anchors, relations, scene));
        },
        py::arg("objects_json"), py::arg("anchors_json"), py::arg("relations_json"),
        py::arg("scene"), "Parse the three planner documents into a graph JSON string");

    m.def(
        "plan_scene_fixture",
        [](const std::string& scene_text, const std::string& constraint,
           const std::string& fixture_dir, const SceneDims& scene) {
            PlannerConfig cfg;
            cfg.mode = PlannerMode::Fixture;
            cfg.fixture_path = fixture_dir;
            cfg.scene = scene;
            PlanResult r = planScene(scene_text, constraint, cfg);
            py::dict out;
            out["objects_json"] = r.objects_json;
            out["anchors_json"] = r.anchors_json;
            out["relations_json"] = r.relations_json;
            out["dialogue"] = r.dialogue;
            out["graph_json"] = serializeGraph(r.graph);
            return out;
        },
        py::arg("scene_text"), py::arg("constraint"), py::arg("fixture_dir"),
        py::arg("scene"));

    // layout ----------------------------------------------------------------
    m.def(
        "solve_layout",
        [](const std::string& graph_json,
           const std::map<std::string, GaussianCloud>& assets, double grid,
           std::uint64_t seed) {
            return serializeLayout(
                solveLayout(deserializeGraph(graph_json), boxesOf(assets), grid, seed));
        },
        py::arg("graph_json"), py::arg("assets"), py::arg("grid") = 0.25,
        py::arg("seed") = 0);

    m.def(
        "verify_layout",
        [](const std::string& layout_json, const std::string& graph_json,
           const std::map<std::string, GaussianCloud>& assets) {
            return reportDict(verifyLayout(deserializeLayout(layout_json),
                                           deserializeGraph(graph_json),
                                           boxesOf(assets)));
        },
        py::arg("layout_json"), py::arg("graph_json"), py::arg("assets"));

    // composition -----------------------------------------------------------
    m.def("init_environment", &initEnvironment, py::arg("scene"),
          py::arg("spacing") = 0.5);
    m.def(
        "compose_scene",
        [](const std::string& layout_json,
           const std::map<std::string, GaussianCloud>& assets,
           const GaussianCloud& environment) {
            return composeScene(deserializeLayout(layout_json), assets, environment);
        },
        py::arg("layout_json"), py::arg("assets"), py::arg("environment"));

    // cameras (poses travel as JSON-lines strings) --------------------------
    m.def(
        "sample_stage1",
        [](const SceneDims& scene, int count, std::uint64_t seed) {
            return serializePoses(sampleStage1(scene, count, seed), 1);
        },
        py::arg("scene"), py::arg("count"), py::arg("seed") = 0);
    m.def(
        "sample_stage2_indoor",
        [](const SceneDims& scene, const std::string& layout_json, int per_region,
           std::uint64_t seed) {
            return serializePoses(
                sampleStage2Indoor(scene, deserializeLayout(layout_json), per_region,
                                   seed),
                2);
        },
        py::arg("scene"), py::arg("layout_json"), py::arg("per_region") = 3,
        py::arg("seed") = 0);
    m.def(
        "sample_stage2_outdoor",
        [](const SceneDims& scene, int circles, int batches, std::uint64_t seed) {
            return serializePoses(sampleStage2Outdoor(scene, circles, batches, seed), 2);
        },
        py::arg("scene"), py::arg("circles"), py::arg("batches"), py::arg("seed") = 0);
    m.def(
        "assemble_stage3",
        [](const std::string& stage1_jsonl, const std::string& stage2_jsonl,
           const std::string& layout_json,
           const std::map<std::string, GaussianCloud>& assets, double inflation) {
            auto merged =
                assembleStage3(parsePoses(stage1_jsonl), parsePoses(stage2_jsonl));
            auto kept = rejectCollidingPoses(merged, deserializeLayout(layout_json),
                                             boxesOf(assets), inflation);
            return serializePoses(kept, 3);
        },
        py::arg("stage1_jsonl"), py::arg("stage2_jsonl"), py::arg("layout_json"),
        py::arg("assets"), py::arg("inflation") = 0.2);
    m.def(
        "evaluation_trajectory",
        [](const SceneDims& scene, double step, int azimuths) {
            return serializePoses(evaluationTrajectory(scene, step, azimuths), 0);
        },
        py::arg("scene"), py::arg("step") = 0.5, py::arg("azimuths") = 4);

    // filtering -------------------------------------------------------------
    m.def(
        "contribution_scores",
        [](const GaussianCloud& cloud, const std::string& poses_jsonl, int height,
           int width, int threads) {
            return contributionScores(cloud, parsePoses(poses_jsonl), height, width,
                                      threads)
                .scores;
        },
        py::arg("cloud"), py::arg("poses_jsonl"), py::arg("height") = 64,
        py::arg("width") = 64, py::arg("threads") = 1);
    m.def(
        "filter_cloud",
        [](const GaussianCloud& cloud, const std::vector<double>& scores, double eta,
           std::optional<double> threshold) {
            ScoreVector sv;
            sv.scores = scores;
            return filterCloud(cloud, sv, eta, threshold);
        },
        py::arg("cloud"), py::arg("scores"), py::arg("eta"),
        py::arg("threshold") = std::nullopt);

    // diffusion timestep math ----------------------------------------------
    py::class_<ScheduleTable>(m, "ScheduleTable")
        .def_readonly("T", &ScheduleTable::T)
        .def_readonly("alpha_bar", &ScheduleTable::alpha_bar)
        .def("alpha_bar_at", &ScheduleTable::alphaBar, py::arg("t"));
    m.def(
        "build_schedule",
        [](const std::string& kind, int T, double beta_start, double beta_end) {
            if (kind != "linear" && kind != "scaled-linear") {
                throw DomainError("schedule kind must be linear or scaled-linear");
            }
            return buildSchedule(
                kind == "linear" ? ScheduleKind::Linear : ScheduleKind::ScaledLinear, T,
                beta_start, beta_end);
        },
        py::arg("kind"), py::arg("T"), py::arg("beta_start"), py::arg("beta_end"));
    m.def("default_schedule", &defaultSchedule);

    py::class_<LatentState>(m, "LatentState")
        .def(py::init([](std::vector<double> values) {
                 LatentState x;
                 x.shape = {values.size()};
                 x.values = std::move(values);
                 return x;
             }),
             py::arg("values"))
        .def_readwrite("values", &LatentState::values);

    py::class_<PromptId>(m, "PromptId")
        .def(py::init([](std::string token) { return PromptId{std::move(token)}; }),
             py::arg("token") = "")
        .def_readwrite("token", &PromptId::token);

    m.def("add_noise", &addNoise, py::arg("x0"), py::arg("eps"), py::arg("t"),
          py::arg("schedule"));
    m.def("pseudo_ground_truth", &pseudoGroundTruth, py::arg("xt"), py::arg("eps_hat"),
          py::arg("t"), py::arg("schedule"));
    m.def("time_window", &timeWindow, py::arg("iteration"), py::arg("iteration_max"),
          py::arg("T") = 1000);
    m.def("sample_timesteps", &sampleTimesteps, py::arg("t_end"), py::arg("m"),
          py::arg("seed"));
    m.def("dreamtime_weight", &dreamtimeWeight, py::arg("t"), py::arg("mu"),
          py::arg("sigma"), py::arg("schedule"));
    m.def("ddim_invert_step", &ddimInvertStep, py::arg("x"), py::arg("t_from"),
          py::arg("t_to"), py::arg("predictor"), py::arg("prompt"), py::arg("schedule"),
          py::arg("delta_t") = 0);
    m.def("ddim_denoise_step", &ddimDenoiseStep, py::arg("x"), py::arg("t_from"),
          py::arg("t_to"), py::arg("predictor"), py::arg("prompt"), py::arg("schedule"),
          py::arg("delta_t") = 0);
    m.def("guidance_direction", &guidanceDirection, py::arg("eps_a"), py::arg("eps_b"),
          py::arg("w"));
}
