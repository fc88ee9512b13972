#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>

#include "helpers.hpp"
#include "splatscene/ply.hpp"

using namespace splat;

namespace {

// Oracle writer, built independently of the library encoder.
std::vector<std::uint8_t> handBuiltPly(const std::vector<std::array<float, 62>>& rows) {
    std::string header = "ply\nformat binary_little_endian 1.0\nelement vertex " +
                         std::to_string(rows.size()) + "\n";
    const char* names[] = {"x", "y", "z", "nx", "ny", "nz", "f_dc_0", "f_dc_1", "f_dc_2"};
    for (const char* n : names) header += std::string("property float ") + n + "\n";
    for (int i = 0; i < 45; ++i) header += "property float f_rest_" + std::to_string(i) + "\n";
    header += "property float opacity\n";
    for (int i = 0; i < 3; ++i) header += "property float scale_" + std::to_string(i) + "\n";
    for (int i = 0; i < 4; ++i) header += "property float rot_" + std::to_string(i) + "\n";
    header += "end_header\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    for (const auto& row : rows) {
        const std::uint8_t* p = reinterpret_cast<const std::uint8_t*>(row.data());
        out.insert(out.end(), p, p + 62 * 4);
    }
    return out;
}

std::array<float, 62> makeRow(float x, float y, float z, float opacity_logit,
                              float log_scale, float qw, float qx, float qy, float qz) {
    std::array<float, 62> row{};
    row[0] = x;
    row[1] = y;
    row[2] = z;
    row[6] = 0.5f;
    row[7] = -0.25f;
    row[8] = 1.0f;
    for (int i = 0; i < 45; ++i) row[9 + i] = 0.01f * float(i);
    row[54] = opacity_logit;
    row[55] = row[56] = row[57] = log_scale;
    row[58] = qw;
    row[59] = qx;
    row[60] = qy;
    row[61] = qz;
    return row;
}

}  // namespace

TEST_CASE("load decodes a hand-built 3-vertex file") {
    std::vector<std::array<float, 62>> rows = {
        makeRow(1, 2, 3, 0.0f, 0.0f, 1, 0, 0, 0),
        makeRow(-1, 0, 4, 2.0f, std::log(0.25f), 0, 0, 0, 2),  // unnormalized quat
        makeRow(0, 0, 0, -3.0f, std::log(2.0f), 1, 1, 0, 0),
    };
    auto cloud = loadPly(handBuiltPly(rows));
    REQUIRE(cloud.size() == 3);
    CHECK(cloud.gaussians[0].mean.x == doctest::Approx(1.0));
    CHECK(cloud.gaussians[0].opacity == doctest::Approx(0.5));      // sigmoid(0)
    CHECK(cloud.gaussians[0].scale.x == doctest::Approx(1.0));      // exp(0)
    CHECK(cloud.gaussians[0].sh_dc[1] == doctest::Approx(-0.25));
    CHECK(cloud.gaussians[0].sh_rest[44] == doctest::Approx(0.44).epsilon(1e-6));
    CHECK(cloud.gaussians[1].opacity ==
          doctest::Approx(1.0 / (1.0 + std::exp(-2.0))).epsilon(1e-6));
    CHECK(cloud.gaussians[1].scale.y == doctest::Approx(0.25).epsilon(1e-6));
    CHECK(cloud.gaussians[1].rotation.z == doctest::Approx(1.0));  // normalized
    CHECK(cloud.gaussians[2].rotation.w == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("save then load round trips values; save is a fixed point") {
    auto cloud = testutil::boxCloud(2);
    cloud.gaussians[0].rotation = Quat::fromYaw(0.5);
    auto bytes = savePly(cloud);
    auto back = loadPly(bytes);
    REQUIRE(back.size() == cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        CHECK((back.gaussians[i].mean - cloud.gaussians[i].mean).norm() < 1e-6);
        CHECK(back.gaussians[i].opacity ==
              doctest::Approx(cloud.gaussians[i].opacity).epsilon(1e-6));
    }
    // byte identity on save-produced files
    CHECK(savePly(back) == bytes);
}

TEST_CASE("file round trip") {
    auto cloud = testutil::boxCloud(2, "disk");
    std::string path = "test_roundtrip.ply";
    savePlyFile(cloud, path);
    auto back = loadPlyFile(path);
    CHECK(back.size() == cloud.size());
    std::remove(path.c_str());
}

TEST_CASE("header validation errors") {
    auto cloud = testutil::boxCloud(1);
    auto bytes = savePly(cloud);

    SUBCASE("bad magic") {
        auto bad = bytes;
        bad[0] = 'q';
        CHECK_THROWS_AS(loadPly(bad), FormatError);
    }
    SUBCASE("truncated payload") {
        auto bad = bytes;
        bad.resize(bad.size() - 4);
        CHECK_THROWS_AS(loadPly(bad), FormatError);
    }
    SUBCASE("missing end_header") {
        std::vector<std::uint8_t> bad(bytes.begin(), bytes.begin() + 20);
        CHECK_THROWS_AS(loadPly(bad), FormatError);
    }
    SUBCASE("missing property is named in the error") {
        std::string text(bytes.begin(), bytes.end());
        auto pos = text.find("property float f_rest_7\n");
        REQUIRE(pos != std::string::npos);
        text.erase(pos, strlen("property float f_rest_7\n"));
        std::vector<std::uint8_t> bad(text.begin(), text.end());
        try {
            loadPly(bad);
            FAIL("expected FormatError");
        } catch (const FormatError& e) {
            CHECK(std::string(e.what()).find("f_rest_7") != std::string::npos);
        }
    }
    SUBCASE("out-of-order properties rejected") {
        std::string text(bytes.begin(), bytes.end());
        auto a = text.find("property float x\n");
        REQUIRE(a != std::string::npos);
        text.replace(a, strlen("property float x\n"), "property float y\n");
        auto b = text.find("property float y\n", a + 1);
        REQUIRE(b != std::string::npos);
        text.replace(b, strlen("property float y\n"), "property float x\n");
        std::vector<std::uint8_t> bad(text.begin(), text.end());
        CHECK_THROWS_AS(loadPly(bad), FormatError);
    }
}

TEST_CASE("save validates opacity and scale domains") {
    auto cloud = testutil::boxCloud(1);
    SUBCASE("opacity 1 is rejected (logit undefined)") {
        cloud.gaussians[0].opacity = 1.0;
        CHECK_THROWS_AS(savePly(cloud), DomainError);
    }
    SUBCASE("opacity 0 is rejected") {
        cloud.gaussians[0].opacity = 0.0;
        CHECK_THROWS_AS(savePly(cloud), DomainError);
    }
    SUBCASE("non-positive scale is rejected") {
        cloud.gaussians[0].scale.y = 0.0;
        CHECK_THROWS_AS(savePly(cloud), DomainError);
    }
}

TEST_CASE("zero-norm quaternion is rejected on load") {
    std::vector<std::array<float, 62>> rows = {makeRow(0, 0, 0, 0, 0, 0, 0, 0, 0)};
    CHECK_THROWS_AS(loadPly(handBuiltPly(rows)), FormatError);
}
