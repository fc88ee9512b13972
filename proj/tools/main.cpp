#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "splatscene/camera.hpp"
#include "splatscene/composer.hpp"
#include "splatscene/filter.hpp"
#include "splatscene/layout.hpp"
#include "splatscene/planner.hpp"
#include "splatscene/ply.hpp"
#include "splatscene/scene_spec.hpp"
#include "splatscene/schedule.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace splat;

namespace {

bool g_quiet = false;

void note(const std::string& line) {
    if (!g_quiet) std::cerr << line << "\n";
}

std::string readText(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// temp + rename so readers never observe a partial file
void writeAtomic(const fs::path& path, const char* data, std::size_t n) {
    if (!path.parent_path().empty()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write '" + tmp.string() + "'");
        out.write(data, std::streamsize(n));
        if (!out) throw Error("short write to '" + tmp.string() + "'");
    }
    fs::rename(tmp, path);
}

void writeAtomic(const fs::path& path, const std::string& text) {
    writeAtomic(path, text.data(), text.size());
}

void writeAtomic(const fs::path& path, const std::vector<std::uint8_t>& bytes) {
    writeAtomic(path, reinterpret_cast<const char*>(bytes.data()), bytes.size());
}

// Asset manifest: JSON object mapping instance id -> PLY path, relative to the
// manifest's own directory.
std::map<std::string, fs::path> readManifest(const fs::path& manifest) {
    json doc;
    try {
        doc = json::parse(readText(manifest));
    } catch (const json::exception& e) {
        throw FormatError("asset manifest: " + std::string(e.what()));
    }
    if (!doc.is_object()) throw FormatError("asset manifest must be a JSON object");
    std::map<std::string, fs::path> out;
    fs::path base = manifest.parent_path();
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        fs::path p = it.value().get<std::string>();
        out[it.key()] = p.is_absolute() ? p : base / p;
    }
    return out;
}

std::map<std::string, GaussianCloud> loadAssetClouds(
    const std::map<std::string, fs::path>& manifest) {
    std::map<std::string, GaussianCloud> out;
    for (const auto& [id, path] : manifest) out[id] = loadPlyFile(path.string());
    return out;
}

std::map<std::string, Box3> assetBoxes(
    const std::map<std::string, GaussianCloud>& clouds) {
    std::map<std::string, Box3> out;
    for (const auto& [id, cloud] : clouds) out[id] = aabb(cloud);
    return out;
}

AffineTransform parseAffineJson(const json& j) {
    AffineTransform a;
    if (j.contains("s")) a.s = j.at("s").get<double>();
    if (j.contains("t")) {
        auto t = j.at("t");
        a.t = {t.at(0).get<double>(), t.at(1).get<double>(), t.at(2).get<double>()};
    }
    if (j.contains("quat")) {
        auto q = j.at("quat");
        a.r = Quat{q.at(0).get<double>(), q.at(1).get<double>(), q.at(2).get<double>(),
                   q.at(3).get<double>()};
    } else if (j.contains("yaw")) {
        a.r = Quat::fromYaw(j.at("yaw").get<double>());
    }
    return a;
}

json reportJson(const LayoutReport& report) {
    json violations = json::array();
    for (const auto& v : report.violations) {
        const char* kind = "collision";
        switch (v.kind) {
            case ViolationKind::Collision: kind = "collision"; break;
            case ViolationKind::RelationBroken: kind = "relation"; break;
            case ViolationKind::Anchor: kind = "anchor"; break;
            case ViolationKind::Bounds: kind = "bounds"; break;
        }
        violations.push_back(
            {{"kind", kind}, {"instances", v.instances}, {"detail", v.detail}});
    }
    return {{"ok", report.ok()}, {"violations", violations}};
}

// Config file section for one subcommand: top-level scalars overlaid by the
// subcommand's own object. Flags given on the command line still win.
json configSection(const std::string& config_path, const std::string& sub) {
    json sec = json::object();
    if (config_path.empty()) return sec;
    json doc;
    try {
        doc = json::parse(readText(config_path));
    } catch (const json::exception& e) {
        throw FormatError("config file: " + std::string(e.what()));
    }
    if (!doc.is_object()) throw FormatError("config file must be a JSON object");
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        if (!it.value().is_object()) sec[it.key()] = it.value();
    }
    if (doc.contains(sub) && doc.at(sub).is_object()) {
        for (auto it = doc.at(sub).begin(); it != doc.at(sub).end(); ++it) {
            sec[it.key()] = it.value();
        }
    }
    return sec;
}

struct ConfigFill {
    CLI::App* cmd;
    json sec;

    template <class T>
    void operator()(const std::string& flag, const std::string& key, T& var) const {
        if (cmd->count(flag) == 0 && sec.contains(key)) var = sec.at(key).get<T>();
    }
};

struct SceneFlags {
    double width = 10, length = 10, height = 3;
    double radius = 0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--width", width, "indoor scene width in meters (x)");
        cmd->add_option("--length", length, "indoor scene length in meters (y)");
        cmd->add_option("--height", height, "indoor scene height in meters (z)");
        cmd->add_option("--radius", radius,
                        "outdoor scene radius in meters; selects outdoor mode");
    }
    void fill(const ConfigFill& cfg) {
        cfg("--width", "width", width);
        cfg("--length", "length", length);
        cfg("--height", "height", height);
        cfg("--radius", "radius", radius);
    }
    SceneDims dims() const {
        return radius > 0 ? SceneDims::outdoor(radius)
                          : SceneDims::indoor(width, length, height);
    }
};

// ---------------------------------------------------------------------------
// subcommand bodies, shared verbatim by `pipeline`

struct PlanArgs {
    std::string scene_text;
    std::string constraint;
    std::string fixture;
    std::string endpoint;
    std::string api_key_env = "PLANNER_API_KEY";
    std::string model;
    double temperature = -1;
    int max_retries = 2;
    SceneDims scene;
    fs::path out_dir;
};

ConstraintGraph doPlan(const PlanArgs& args) {
    PlannerConfig cfg;
    cfg.scene = args.scene;
    cfg.api_key_env = args.api_key_env;
    cfg.model = args.model;
    cfg.temperature = args.temperature;
    cfg.max_retries = args.max_retries;
    if (!args.fixture.empty()) {
        cfg.mode = PlannerMode::Fixture;
        cfg.fixture_path = args.fixture;
    } else {
        cfg.mode = PlannerMode::Live;
        cfg.endpoint_url = args.endpoint;
    }
    PlanResult result = planScene(args.scene_text, args.constraint, cfg);
    writeAtomic(args.out_dir / "objects.json", result.objects_json);
    writeAtomic(args.out_dir / "anchors.json", result.anchors_json);
    writeAtomic(args.out_dir / "relations.json", result.relations_json);
    writeAtomic(args.out_dir / "graph.json", serializeGraph(result.graph));
    if (!result.dialogue.empty()) {
        writeAtomic(args.out_dir / "dialogue.txt", result.dialogue);
    }
    note("plan: " + std::to_string(result.graph.nodes.size()) + " instances, " +
         std::to_string(result.graph.edges.size()) + " relations");
    return result.graph;
}

struct LayoutArgs {
    double grid = 0.25;
    std::uint64_t seed = 0;
};

Layout doLayout(const ConstraintGraph& graph, const std::map<std::string, Box3>& boxes,
                const LayoutArgs& args, const fs::path& out) {
    Layout layout = solveLayout(graph, boxes, args.grid, args.seed);
    writeAtomic(out, serializeLayout(layout));
    note("layout: placed " + std::to_string(layout.placements.size()) + " objects" +
         (layout.deferred.empty()
              ? ""
              : ", deferred " + std::to_string(layout.deferred.size()) + " relations"));
    return layout;
}

GaussianCloud doCompose(const Layout& layout,
                        const std::map<std::string, GaussianCloud>& clouds,
                        double spacing, const fs::path& out) {
    GaussianCloud env = initEnvironment(layout.scene, spacing);
    GaussianCloud composed = composeScene(layout, clouds, env);
    writeAtomic(out, savePly(composed));
    note("compose: " + std::to_string(composed.size()) + " gaussians (" +
         std::to_string(env.size()) + " environment)");
    return composed;
}

struct CameraArgs {
    int stage1 = 100;
    int per_region = 3;
    int circles = 3;
    int batches = 12;
    std::uint64_t seed = 0;
    double inflation = 0.2;
};

std::vector<CameraPose> doCameras(const Layout& layout,
                                  const std::map<std::string, Box3>& boxes,
                                  const CameraArgs& args, const fs::path& out_dir) {
    auto s1 = sampleStage1(layout.scene, args.stage1, args.seed);
    std::vector<CameraPose> s2;
    if (layout.scene.kind == SceneKind::Indoor) {
        s2 = sampleStage2Indoor(layout.scene, layout, args.per_region, args.seed + 1);
    } else {
        s2 = sampleStage2Outdoor(layout.scene, args.circles, args.batches,
                                 args.seed + 1);
    }
    auto s3 = rejectCollidingPoses(assembleStage3(s1, s2), layout, boxes,
                                   args.inflation);
    writeAtomic(out_dir / "stage1.jsonl", serializePoses(s1, 1));
    writeAtomic(out_dir / "stage2.jsonl", serializePoses(s2, 2));
    writeAtomic(out_dir / "stage3.jsonl", serializePoses(s3, 3));
    note("cameras: " + std::to_string(s1.size()) + " + " + std::to_string(s2.size()) +
         " poses, " + std::to_string(s3.size()) + " after rejection");
    return s3;
}

struct FilterArgs {
    double eta = 0.1;
    std::optional<double> threshold;
    int width = 64, height = 64;
    int threads = 1;
};

void doFilter(const GaussianCloud& cloud, const std::vector<CameraPose>& poses,
              const FilterArgs& args, const fs::path& out_ply,
              const fs::path& out_csv) {
    ScoreVector scores =
        contributionScores(cloud, poses, args.height, args.width, args.threads);
    GaussianCloud kept = filterCloud(cloud, scores, args.eta, args.threshold);
    writeAtomic(out_ply, savePly(kept));
    if (!out_csv.empty()) writeAtomic(out_csv, serializeScoresCsv(scores));
    note("filter: kept " + std::to_string(kept.size()) + " of " +
         std::to_string(cloud.size()) + " gaussians");
}

}  // namespace

int runCli(int argc, char** argv) {
    CLI::App app{"3D Gaussian splat scene toolkit"};
    app.require_subcommand(1);
    app.add_flag("--quiet", g_quiet, "suppress progress messages on stderr");
    std::string config_path;
    app.add_option("--config", config_path,
                   "JSON config file; command-line flags take precedence");

    // plan ------------------------------------------------------------------
    auto* plan = app.add_subcommand("plan", "generate scene documents");
    PlanArgs plan_args;
    SceneFlags plan_scene;
    std::string plan_out;
    plan->add_option("--scene", plan_args.scene_text, "scene description text")
        ->required();
    plan->add_option("--constraint", plan_args.constraint, "extra user constraint");
    plan->add_option("--fixture", plan_args.fixture,
                     "fixture directory (objects/anchors/relations/dialogue)");
    plan->add_option("--endpoint", plan_args.endpoint, "live planner endpoint URL");
    plan->add_option("--api-key-env", plan_args.api_key_env,
                     "environment variable holding the API key");
    plan->add_option("--model", plan_args.model, "model name passed through");
    plan->add_option("--temperature", plan_args.temperature, "sampling temperature");
    plan->add_option("--max-retries", plan_args.max_retries, "retries per document");
    plan_scene.attach(plan);
    plan->add_option("--out", plan_out, "output directory")->required();

    // layout ----------------------------------------------------------------
    auto* layout_cmd = app.add_subcommand("layout", "solve object placements");
    std::string layout_graph, layout_assets, layout_out;
    LayoutArgs layout_args;
    layout_cmd->add_option("--graph", layout_graph, "constraint graph JSON")
        ->required();
    layout_cmd->add_option("--assets", layout_assets, "asset manifest JSON")
        ->required();
    layout_cmd->add_option("--grid", layout_args.grid, "candidate grid pitch (m)");
    layout_cmd->add_option("--seed", layout_args.seed, "random seed");
    layout_cmd->add_option("--out", layout_out, "output layout JSON")->required();

    // compose ---------------------------------------------------------------
    auto* compose_cmd = app.add_subcommand("compose", "merge assets into one cloud");
    std::string compose_layout, compose_assets, compose_out, compose_package;
    double compose_spacing = 0.5;
    compose_cmd->add_option("--layout", compose_layout, "layout JSON")->required();
    compose_cmd->add_option("--assets", compose_assets, "asset manifest JSON")
        ->required();
    compose_cmd->add_option("--spacing", compose_spacing,
                            "environment gaussian spacing (m)");
    compose_cmd->add_option("--out", compose_out, "output PLY")->required();
    compose_cmd->add_option("--package", compose_package,
                            "also write a scene package JSON");

    // cameras ---------------------------------------------------------------
    auto* cameras_cmd = app.add_subcommand("cameras", "sample training poses");
    std::string cameras_layout, cameras_assets, cameras_out;
    CameraArgs camera_args;
    double eval_step = 0;
    int eval_azimuths = 4;
    cameras_cmd->add_option("--layout", cameras_layout, "layout JSON")->required();
    cameras_cmd->add_option("--assets", cameras_assets, "asset manifest JSON")
        ->required();
    cameras_cmd->add_option("--stage1", camera_args.stage1, "stage-1 pose count");
    cameras_cmd->add_option("--per-region", camera_args.per_region,
                            "indoor stage-2 poses per region");
    cameras_cmd->add_option("--circles", camera_args.circles,
                            "outdoor stage-2 concentric circles");
    cameras_cmd->add_option("--batches", camera_args.batches,
                            "outdoor stage-2 batches");
    cameras_cmd->add_option("--seed", camera_args.seed, "random seed");
    cameras_cmd->add_option("--inflation", camera_args.inflation,
                            "pose rejection margin (m)");
    cameras_cmd->add_option("--eval-step", eval_step,
                            "also write eval.jsonl with this line step (m)");
    cameras_cmd->add_option("--eval-azimuths", eval_azimuths,
                            "diametral line count for eval.jsonl");
    cameras_cmd->add_option("--out-dir", cameras_out, "output directory")->required();

    // filter ----------------------------------------------------------------
    auto* filter_cmd = app.add_subcommand("filter", "drop low-contribution gaussians");
    std::string filter_in, filter_poses, filter_out, filter_csv;
    FilterArgs filter_args;
    double filter_threshold = -1;
    filter_cmd->add_option("--in", filter_in, "input PLY")->required();
    filter_cmd->add_option("--poses", filter_poses, "pose JSON-lines file")->required();
    filter_cmd->add_option("--eta", filter_args.eta, "fraction to remove");
    filter_cmd->add_option("--threshold", filter_threshold,
                           "remove scores below this instead of a fraction");
    filter_cmd->add_option("--res-width", filter_args.width, "image width (px)");
    filter_cmd->add_option("--res-height", filter_args.height, "image height (px)");
    filter_cmd->add_option("--threads", filter_args.threads, "worker threads");
    filter_cmd->add_option("--out", filter_out, "output PLY")->required();
    filter_cmd->add_option("--scores", filter_csv, "also write a score CSV");

    // edit ------------------------------------------------------------------
    auto* edit_cmd = app.add_subcommand("edit", "relocate, add, or remove an object");
    std::string edit_package, edit_graph, edit_assets, edit_command, edit_out;
    edit_cmd->add_option("--package", edit_package, "scene package JSON")->required();
    edit_cmd->add_option("--graph", edit_graph, "constraint graph JSON")->required();
    edit_cmd->add_option("--assets", edit_assets, "asset manifest JSON")->required();
    edit_cmd->add_option("--command", edit_command, "edit command JSON")->required();
    edit_cmd->add_option("--out", edit_out, "output package JSON")->required();

    // animate ---------------------------------------------------------------
    auto* animate_cmd = app.add_subcommand("animate", "compose frames along time");
    std::string animate_package, animate_assets, animate_out;
    std::vector<double> animate_times;
    animate_cmd->add_option("--package", animate_package, "scene package JSON")
        ->required();
    animate_cmd->add_option("--assets", animate_assets, "asset manifest JSON")
        ->required();
    animate_cmd->add_option("--times", animate_times, "sample times in seconds")
        ->required();
    animate_cmd->add_option("--out-dir", animate_out, "output directory")->required();

    // verify ----------------------------------------------------------------
    auto* verify_cmd = app.add_subcommand("verify", "check a layout against its graph");
    std::string verify_graph, verify_layout, verify_assets;
    verify_cmd->add_option("--graph", verify_graph, "constraint graph JSON")
        ->required();
    verify_cmd->add_option("--layout", verify_layout, "layout JSON")->required();
    verify_cmd->add_option("--assets", verify_assets, "asset manifest JSON")
        ->required();

    // schedule-dump ---------------------------------------------------------
    auto* sched_cmd = app.add_subcommand("schedule-dump", "print a noise schedule");
    std::string sched_kind = "scaled-linear", sched_out;
    int sched_steps = 1000;
    double sched_beta_start = 0.00085, sched_beta_end = 0.012;
    sched_cmd->add_option("--kind", sched_kind, "linear or scaled-linear")
        ->check(CLI::IsMember({"linear", "scaled-linear"}));
    sched_cmd->add_option("--steps", sched_steps, "schedule length T");
    sched_cmd->add_option("--beta-start", sched_beta_start, "first beta");
    sched_cmd->add_option("--beta-end", sched_beta_end, "last beta");
    sched_cmd->add_option("--out", sched_out, "output file (default stdout)");

    // pipeline --------------------------------------------------------------
    auto* pipe_cmd = app.add_subcommand(
        "pipeline", "plan, layout, compose, cameras, and filter in one run");
    PlanArgs pipe_plan;
    SceneFlags pipe_scene;
    LayoutArgs pipe_layout;
    CameraArgs pipe_cameras;
    FilterArgs pipe_filter;
    std::string pipe_assets, pipe_out;
    double pipe_spacing = 0.5;
    pipe_cmd->add_option("--scene", pipe_plan.scene_text, "scene description text")
        ->required();
    pipe_cmd->add_option("--constraint", pipe_plan.constraint, "extra user constraint");
    pipe_cmd->add_option("--fixture", pipe_plan.fixture, "planner fixture directory");
    pipe_cmd->add_option("--endpoint", pipe_plan.endpoint, "live planner endpoint URL");
    pipe_cmd->add_option("--api-key-env", pipe_plan.api_key_env,
                         "environment variable holding the API key");
    pipe_scene.attach(pipe_cmd);
    pipe_cmd->add_option("--assets", pipe_assets, "asset manifest JSON")->required();
    pipe_cmd->add_option("--grid", pipe_layout.grid, "candidate grid pitch (m)");
    pipe_cmd->add_option("--seed", pipe_layout.seed, "random seed");
    pipe_cmd->add_option("--spacing", pipe_spacing, "environment gaussian spacing (m)");
    pipe_cmd->add_option("--stage1", pipe_cameras.stage1, "stage-1 pose count");
    pipe_cmd->add_option("--per-region", pipe_cameras.per_region,
                         "indoor stage-2 poses per region");
    pipe_cmd->add_option("--circles", pipe_cameras.circles,
                         "outdoor stage-2 concentric circles");
    pipe_cmd->add_option("--batches", pipe_cameras.batches, "outdoor stage-2 batches");
    pipe_cmd->add_option("--inflation", pipe_cameras.inflation,
                         "pose rejection margin (m)");
    pipe_cmd->add_option("--eta", pipe_filter.eta, "fraction to remove");
    pipe_cmd->add_option("--res-width", pipe_filter.width, "image width (px)");
    pipe_cmd->add_option("--res-height", pipe_filter.height, "image height (px)");
    pipe_cmd->add_option("--threads", pipe_filter.threads, "worker threads");
    pipe_cmd->add_option("--out-dir", pipe_out, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (*plan) {
            ConfigFill cfg{plan, configSection(config_path, "plan")};
            cfg("--constraint", "constraint", plan_args.constraint);
            cfg("--fixture", "fixture", plan_args.fixture);
            cfg("--endpoint", "endpoint", plan_args.endpoint);
            cfg("--api-key-env", "api_key_env", plan_args.api_key_env);
            cfg("--model", "model", plan_args.model);
            cfg("--temperature", "temperature", plan_args.temperature);
            cfg("--max-retries", "max_retries", plan_args.max_retries);
            plan_scene.fill(cfg);
            plan_args.scene = plan_scene.dims();
            plan_args.out_dir = plan_out;
            doPlan(plan_args);
        } else if (*layout_cmd) {
            ConfigFill cfg{layout_cmd, configSection(config_path, "layout")};
            cfg("--grid", "grid", layout_args.grid);
            cfg("--seed", "seed", layout_args.seed);
            ConstraintGraph graph = deserializeGraph(readText(layout_graph));
            auto boxes = assetBoxes(loadAssetClouds(readManifest(layout_assets)));
            doLayout(graph, boxes, layout_args, layout_out);
        } else if (*compose_cmd) {
            ConfigFill cfg{compose_cmd, configSection(config_path, "compose")};
            cfg("--spacing", "spacing", compose_spacing);
            Layout layout = deserializeLayout(readText(compose_layout));
            auto manifest = readManifest(compose_assets);
            auto clouds = loadAssetClouds(manifest);
            doCompose(layout, clouds, compose_spacing, compose_out);
            if (!compose_package.empty()) {
                ScenePackage pkg;
                pkg.scene = layout.scene;
                pkg.environment.spacing = compose_spacing;
                for (const auto& [id, affine] : layout.placements) {
                    pkg.objects[id] = {manifest.at(id).string(), affine};
                }
                writeAtomic(fs::path(compose_package), serializePackage(pkg));
            }
        } else if (*cameras_cmd) {
            ConfigFill cfg{cameras_cmd, configSection(config_path, "cameras")};
            cfg("--stage1", "stage1", camera_args.stage1);
            cfg("--per-region", "per_region", camera_args.per_region);
            cfg("--circles", "circles", camera_args.circles);
            cfg("--batches", "batches", camera_args.batches);
            cfg("--seed", "seed", camera_args.seed);
            cfg("--inflation", "inflation", camera_args.inflation);
            Layout layout = deserializeLayout(readText(cameras_layout));
            auto boxes = assetBoxes(loadAssetClouds(readManifest(cameras_assets)));
            doCameras(layout, boxes, camera_args, cameras_out);
            if (eval_step > 0) {
                auto eval = evaluationTrajectory(layout.scene, eval_step, eval_azimuths);
                writeAtomic(fs::path(cameras_out) / "eval.jsonl",
                            serializePoses(eval, 0));
            }
        } else if (*filter_cmd) {
            ConfigFill cfg{filter_cmd, configSection(config_path, "filter")};
            cfg("--eta", "eta", filter_args.eta);
            cfg("--res-width", "res_width", filter_args.width);
            cfg("--res-height", "res_height", filter_args.height);
            cfg("--threads", "threads", filter_args.threads);
            if (filter_cmd->count("--threshold")) {
                filter_args.threshold = filter_threshold;
            }
            GaussianCloud cloud = loadPlyFile(filter_in);
            auto poses = parsePoses(readText(filter_poses));
            doFilter(cloud, poses, filter_args, filter_out, filter_csv);
        } else if (*edit_cmd) {
            ScenePackage pkg = deserializePackage(readText(edit_package));
            ConstraintGraph graph = deserializeGraph(readText(edit_graph));
            auto boxes = assetBoxes(loadAssetClouds(readManifest(edit_assets)));
            json doc = json::parse(readText(edit_command));
            EditCommand cmd;
            std::string kind = doc.at("kind").get<std::string>();
            if (kind == "relocate") {
                cmd.kind = EditKind::Relocate;
                cmd.affine = parseAffineJson(doc.at("affine"));
            } else if (kind == "remove") {
                cmd.kind = EditKind::Remove;
            } else if (kind == "add") {
                cmd.kind = EditKind::Add;
                cmd.asset = doc.at("asset").get<std::string>();
            } else {
                throw FormatError("unknown edit kind '" + kind + "'");
            }
            cmd.instance = doc.at("instance").get<std::string>();
            auto [edited, report] = applyEdit(pkg, cmd, graph, boxes);
            writeAtomic(fs::path(edit_out), serializePackage(edited));
            std::cout << reportJson(report).dump() << "\n";
        } else if (*animate_cmd) {
            ScenePackage pkg = deserializePackage(readText(animate_package));
            auto clouds = loadAssetClouds(readManifest(animate_assets));
            GaussianCloud env = initEnvironment(pkg.scene, pkg.environment.spacing);
            for (std::size_t i = 0; i < animate_times.size(); ++i) {
                GaussianCloud frame =
                    composeSceneAtTime(pkg, clouds, env, animate_times[i]);
                char name[32];
                std::snprintf(name, sizeof(name), "frame_%03zu.ply", i);
                writeAtomic(fs::path(animate_out) / name, savePly(frame));
            }
            note("animate: wrote " + std::to_string(animate_times.size()) + " frames");
        } else if (*verify_cmd) {
            ConstraintGraph graph = deserializeGraph(readText(verify_graph));
            Layout layout = deserializeLayout(readText(verify_layout));
            auto boxes = assetBoxes(loadAssetClouds(readManifest(verify_assets)));
            LayoutReport report = verifyLayout(layout, graph, boxes);
            std::cout << reportJson(report).dump() << "\n";
            if (!report.ok()) return 1;
        } else if (*sched_cmd) {
            ScheduleKind kind = sched_kind == "linear" ? ScheduleKind::Linear
                                                       : ScheduleKind::ScaledLinear;
            ScheduleTable sched =
                buildSchedule(kind, sched_steps, sched_beta_start, sched_beta_end);
            std::string text = serializeSchedule(sched);
            if (sched_out.empty()) {
                std::cout << text << "\n";
            } else {
                writeAtomic(fs::path(sched_out), text);
            }
        } else if (*pipe_cmd) {
            ConfigFill cfg{pipe_cmd, configSection(config_path, "pipeline")};
            cfg("--grid", "grid", pipe_layout.grid);
            cfg("--seed", "seed", pipe_layout.seed);
            cfg("--spacing", "spacing", pipe_spacing);
            cfg("--eta", "eta", pipe_filter.eta);
            cfg("--threads", "threads", pipe_filter.threads);
            pipe_scene.fill(cfg);
            fs::path out = pipe_out;
            pipe_plan.scene = pipe_scene.dims();
            pipe_plan.out_dir = out;
            ConstraintGraph graph = doPlan(pipe_plan);
            auto manifest = readManifest(pipe_assets);
            auto clouds = loadAssetClouds(manifest);
            auto boxes = assetBoxes(clouds);
            pipe_cameras.seed = pipe_layout.seed;
            Layout layout = doLayout(graph, boxes, pipe_layout, out / "layout.json");
            doCompose(layout, clouds, pipe_spacing, out / "scene.ply");
            auto poses = doCameras(layout, boxes, pipe_cameras, out);
            GaussianCloud composed = loadPlyFile((out / "scene.ply").string());
            doFilter(composed, poses, pipe_filter, out / "filtered.ply",
                     out / "scores.csv");
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

int main(int argc, char** argv) { return runCli(argc, argv); }
