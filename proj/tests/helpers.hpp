#pragma once

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "splatscene/composer.hpp"
#include "splatscene/gaussian.hpp"
#include "splatscene/layout.hpp"
#include "splatscene/scene_spec.hpp"

namespace testutil {

inline std::string fixturesDir() {
    const char* env = std::getenv("SPLATSCENE_FIXTURES");
    return env ? env : "fixtures";
}

inline std::string readFile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline splat::ConstraintGraph livingRoomGraph(
    splat::SceneDims scene = splat::SceneDims::indoor(8, 8, 3)) {
    std::string dir = fixturesDir() + "/living-room";
    return splat::parseSceneSpec(readFile(dir + "/objects.json"),
                                 readFile(dir + "/anchors.json"),
                                 readFile(dir + "/relations.json"), scene);
}

// Unit cube centered at the origin; a convenient model box for any asset.
inline splat::Box3 unitBox() {
    return {{-0.5, -0.5, -0.5}, {0.5, 0.5, 0.5}};
}

inline std::map<std::string, splat::Box3> unitBoxes(
    const splat::ConstraintGraph& graph) {
    std::map<std::string, splat::Box3> boxes;
    for (const auto& id : graph.nodes) boxes[id] = unitBox();
    return boxes;
}

// n^3 isotropic Gaussians filling the unit cube; a synthetic box-shaped asset.
inline splat::GaussianCloud boxCloud(int n = 3, const std::string& label = "box") {
    splat::GaussianCloud cloud;
    cloud.label = label;
    for (int k = 0; k < n; ++k) {
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) {
                splat::Gaussian g;
                auto coord = [n](int v) {
                    return n == 1 ? 0.0 : -0.5 + double(v) / double(n - 1);
                };
                g.mean = {coord(i), coord(j), coord(k)};
                g.scale = {0.5 / n, 0.5 / n, 0.5 / n};
                g.opacity = 0.9;
                g.sh_dc = {0.2, 0.3, 0.4};
                cloud.gaussians.push_back(g);
            }
        }
    }
    return cloud;
}

}  // namespace testutil
