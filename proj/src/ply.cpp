#include "splatscene/ply.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

namespace splat {
namespace {

std::vector<std::string> expectedProperties() {
    std::vector<std::string> props = {"x", "y", "z", "nx", "ny", "nz",
                                      "f_dc_0", "f_dc_1", "f_dc_2"};
    for (int i = 0; i < kShRestCount; ++i) props.push_back("f_rest_" + std::to_string(i));
    props.push_back("opacity");
    for (int i = 0; i < 3; ++i) props.push_back("scale_" + std::to_string(i));
    for (int i = 0; i < 4; ++i) props.push_back("rot_" + std::to_string(i));
    return props;
}

constexpr std::size_t kFloatsPerVertex = 62;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

float readF32(const std::uint8_t* p) {
    float f;
    std::memcpy(&f, p, 4);
    return f;
}

void writeF32(std::vector<std::uint8_t>& out, float f) {
    std::uint8_t b[4];
    std::memcpy(b, &f, 4);
    out.insert(out.end(), b, b + 4);
}

}  // namespace

GaussianCloud loadPly(const std::vector<std::uint8_t>& bytes) {
    // Locate end_header; the header is ASCII lines.
    const std::string marker = "end_header\n";
    std::string head(bytes.begin(),
                     bytes.begin() + std::min<std::size_t>(bytes.size(), 65536));
    auto pos = head.find(marker);
    if (pos == std::string::npos) throw FormatError("PLY: missing end_header");
    std::size_t body_offset = pos + marker.size();

    std::istringstream hs(head.substr(0, pos));
    std::string line;
    if (!std::getline(hs, line) || line != "ply") {
        throw FormatError("PLY: missing magic 'ply'");
    }
    std::size_t vertex_count = 0;
    bool saw_format = false, saw_vertex = false;
    std::vector<std::string> props;
    while (std::getline(hs, line)) {
        std::istringstream ls(line);
        std::string tok;
        ls >> tok;
        if (tok == "comment") continue;
        if (tok == "format") {
            std::string fmt;
            ls >> fmt;
            if (fmt != "binary_little_endian") {
                throw FormatError("PLY: unsupported format '" + fmt + "'");
            }
            saw_format = true;
        } else if (tok == "element") {
            std::string name;
            ls >> name >> vertex_count;
            if (name != "vertex") throw FormatError("PLY: unexpected element '" + name + "'");
            saw_vertex = true;
        } else if (tok == "property") {
            std::string type, name;
            ls >> type >> name;
            if (type != "float") {
                throw FormatError("PLY: property '" + name + "' must be float");
            }
            props.push_back(name);
        }
    }
    if (!saw_format) throw FormatError("PLY: missing format line");
    if (!saw_vertex) throw FormatError("PLY: missing vertex element");

    auto expected = expectedProperties();
    if (props.size() != expected.size()) {
        for (const auto& want : expected) {
            bool found = false;
            for (const auto& have : props) {
                if (have == want) { found = true; break; }
            }
            if (!found) throw FormatError("PLY: missing required property '" + want + "'");
        }
        throw FormatError("PLY: unexpected property count");
    }
    for (std::size_t i = 0; i < expected.size(); ++i) {
        if (props[i] != expected[i]) {
            throw FormatError("PLY: property '" + props[i] + "' out of order, expected '" +
                              expected[i] + "'");
        }
    }

    std::size_t need = body_offset + vertex_count * kFloatsPerVertex * 4;
    if (bytes.size() < need) throw FormatError("PLY: truncated vertex payload");

    GaussianCloud cloud;
    cloud.gaussians.reserve(vertex_count);
    const std::uint8_t* p = bytes.data() + body_offset;
    for (std::size_t v = 0; v < vertex_count; ++v, p += kFloatsPerVertex * 4) {
        float f[kFloatsPerVertex];
        for (std::size_t i = 0; i < kFloatsPerVertex; ++i) f[i] = readF32(p + 4 * i);
        Gaussian g;
        g.mean = {f[0], f[1], f[2]};
        g.sh_dc = {f[6], f[7], f[8]};
        for (int i = 0; i < kShRestCount; ++i) g.sh_rest[i] = f[9 + i];
        g.opacity = sigmoid(f[54]);
        g.scale = {std::exp(double(f[55])), std::exp(double(f[56])), std::exp(double(f[57]))};
        Quat q{f[58], f[59], f[60], f[61]};
        if (q.norm() == 0.0) throw FormatError("PLY: zero-norm rotation quaternion");
        g.rotation = q.normalized();
        cloud.gaussians.push_back(g);
    }
    return cloud;
}

std::vector<std::uint8_t> savePly(const GaussianCloud& cloud) {
    std::ostringstream hs;
    hs << "ply\nformat binary_little_endian 1.0\nelement vertex " << cloud.size()
       << "\n";
    for (const auto& name : expectedProperties()) {
        hs << "property float " << name << "\n";
    }
    hs << "end_header\n";
    std::string header = hs.str();

    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.reserve(out.size() + cloud.size() * kFloatsPerVertex * 4);
    for (const Gaussian& g : cloud.gaussians) {
        if (!(g.scale.x > 0 && g.scale.y > 0 && g.scale.z > 0)) {
            throw DomainError("PLY encode: scale must be > 0");
        }
        if (!(g.opacity > 0.0 && g.opacity < 1.0)) {
            throw DomainError("PLY encode: opacity must be in (0, 1) exclusive");
        }
        writeF32(out, float(g.mean.x));
        writeF32(out, float(g.mean.y));
        writeF32(out, float(g.mean.z));
        for (int i = 0; i < 3; ++i) writeF32(out, 0.0f);  // normals unused
        for (int i = 0; i < 3; ++i) writeF32(out, float(g.sh_dc[i]));
        for (int i = 0; i < kShRestCount; ++i) writeF32(out, float(g.sh_rest[i]));
        writeF32(out, float(std::log(g.opacity / (1.0 - g.opacity))));
        writeF32(out, float(std::log(g.scale.x)));
        writeF32(out, float(std::log(g.scale.y)));
        writeF32(out, float(std::log(g.scale.z)));
        Quat q = g.rotation.normalized();
        writeF32(out, float(q.w));
        writeF32(out, float(q.x));
        writeF32(out, float(q.y));
        writeF32(out, float(q.z));
    }
    return out;
}

GaussianCloud loadPlyFile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return loadPly(bytes);
}

void savePlyFile(const GaussianCloud& cloud, const std::string& path) {
    auto bytes = savePly(cloud);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + path + "'");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              std::streamsize(bytes.size()));
}

}  // namespace splat
