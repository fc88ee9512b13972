#include <doctest.h>

#include <cstdlib>

#include <json.hpp>

#include "helpers.hpp"
#include "splatscene/planner.hpp"

using namespace splat;
using json = nlohmann::json;

namespace {

Transport forbiddenTransport() {
    return [](const std::string&, const std::vector<std::pair<std::string, std::string>>&,
              const std::string&) -> std::string {
        throw NetworkError("transport must not be used in fixture mode");
    };
}

std::string chatReply(const std::string& content) {
    json j = {{"choices", json::array({{{"message", {{"role", "assistant"},
                                                     {"content", content}}}}})}};
    return j.dump();
}

}  // namespace

TEST_CASE("built-in prompts validate and open with their role lines") {
    auto obj = objectsPrompt();
    auto anc = anchorsPrompt();
    auto rel = relationsPrompt();
    CHECK_NOTHROW(validateTemplate(obj));
    CHECK_NOTHROW(validateTemplate(anc));
    CHECK_NOTHROW(validateTemplate(rel));
    CHECK(obj.body.rfind("You are a professional scene designer", 0) == 0);
    CHECK(anc.body.rfind("You are a scene placement expert", 0) == 0);
    CHECK(rel.body.rfind("You are an expert in scene arrangement", 0) == 0);
}

TEST_CASE("rendering substitutes each placeholder exactly once") {
    auto tpl = objectsPrompt();
    std::string out = renderPrompt(tpl, "make it cozy", "a reading nook");
    CHECK(out.find("make it cozy") != std::string::npos);
    CHECK(out.size() >= 14);
    CHECK(out.substr(out.size() - 14) == "a reading nook");
    CHECK(out.find("{input}") == std::string::npos);
    CHECK(out.find("{User Constraint}") == std::string::npos);
    // empty values are legal
    CHECK_NOTHROW(renderPrompt(tpl, "", "a barn"));

    PromptTemplate missing{"bad", "no holes here", {"input"}};
    CHECK_THROWS_AS(renderPrompt(missing, "x", "y"), TemplateError);
    PromptTemplate doubled{"bad", "{input} and {input}", {"input"}};
    CHECK_THROWS_AS(validateTemplate(doubled), TemplateError);
    CHECK_THROWS_AS(renderPrompt(tpl, {{"input", "y"}}), TemplateError);  // no constraint
}

TEST_CASE("first JSON object extraction") {
    CHECK(extractFirstJsonObject("Sure! Here you go: {\"a\": 1} hope that helps") ==
          "{\"a\": 1}");
    CHECK(extractFirstJsonObject("{\"a\": {\"b\": {\"c\": 2}}} {\"d\": 3}") ==
          "{\"a\": {\"b\": {\"c\": 2}}}");
    // braces inside strings and escaped quotes do not confuse the scanner
    std::string tricky = "x {\"k\": \"v } \\\" {\", \"n\": 1} tail";
    CHECK(extractFirstJsonObject(tricky) == "{\"k\": \"v } \\\" {\", \"n\": 1}");
    CHECK_THROWS_AS(extractFirstJsonObject("no object at all"), FormatError);
    CHECK_THROWS_AS(extractFirstJsonObject("{\"a\": 1"), FormatError);
}

TEST_CASE("fixture mode returns the stored documents with zero network use") {
    PlannerConfig cfg;
    cfg.mode = PlannerMode::Fixture;
    cfg.fixture_path = testutil::fixturesDir() + "/living-room";
    auto result = planScene("a living room", "", cfg, forbiddenTransport());
    CHECK(result.objects_json == testutil::readFile(cfg.fixture_path + "/objects.json"));
    CHECK(result.anchors_json == testutil::readFile(cfg.fixture_path + "/anchors.json"));
    CHECK(result.relations_json ==
          testutil::readFile(cfg.fixture_path + "/relations.json"));
    CHECK(!result.dialogue.empty());
    CHECK(result.graph.nodes.size() == 7);
    CHECK(result.graph.edges.size() == 5);

    PlannerConfig empty;
    empty.mode = PlannerMode::Fixture;
    CHECK_THROWS_AS(planScene("x", "", empty, forbiddenTransport()), PlannerError);
}

TEST_CASE("live mode assembles the documents through the transport") {
    setenv("PLANNER_TEST_KEY", "sekrit", 1);
    PlannerConfig cfg;
    cfg.mode = PlannerMode::Live;
    cfg.endpoint_url = "http://planner.test/v1/chat";
    cfg.api_key_env = "PLANNER_TEST_KEY";
    cfg.model = "test-model";
    cfg.temperature = 0.2;

    std::string dir = testutil::fixturesDir() + "/living-room";
    std::vector<std::string> docs = {testutil::readFile(dir + "/objects.json"),
                                     testutil::readFile(dir + "/anchors.json"),
                                     testutil::readFile(dir + "/relations.json")};
    int calls = 0;
    std::vector<std::string> seen_prompts;
    Transport mock = [&](const std::string& url,
                         const std::vector<std::pair<std::string, std::string>>& headers,
                         const std::string& body) -> std::string {
        CHECK(url == cfg.endpoint_url);
        bool has_auth = false;
        for (const auto& [k, v] : headers) {
            if (k == "Authorization") {
                has_auth = true;
                CHECK(v == "Bearer sekrit");
            }
        }
        CHECK(has_auth);
        json parsed = json::parse(body);
        CHECK(parsed.at("model") == "test-model");
        seen_prompts.push_back(parsed.at("messages").at(1).at("content"));
        REQUIRE(calls < 3);
        return chatReply("Here is the design.\n" + docs[std::size_t(calls++)] +
                         "\nLet me know if you need changes.");
    };

    auto result = planScene("a living room", "keep it cozy", cfg, mock);
    CHECK(calls == 3);
    CHECK(json::parse(result.objects_json) == json::parse(docs[0]));
    CHECK(json::parse(result.anchors_json) == json::parse(docs[1]));
    CHECK(json::parse(result.relations_json) == json::parse(docs[2]));
    auto fixture_graph = testutil::livingRoomGraph(cfg.scene);
    CHECK(serializeGraph(result.graph) == serializeGraph(fixture_graph));
    // each request carried the user constraint; later requests list the instances
    REQUIRE(seen_prompts.size() == 3);
    for (const auto& p : seen_prompts) CHECK(p.find("keep it cozy") != std::string::npos);
    CHECK(seen_prompts[0].find("a living room") != std::string::npos);
    CHECK(seen_prompts[1].find("\"objects_list\"") != std::string::npos);
    CHECK(seen_prompts[1].find("sofa1") != std::string::npos);
    CHECK(seen_prompts[2].find("\"objects_list\"") != std::string::npos);
}

TEST_CASE("live mode retries each document before giving up") {
    setenv("PLANNER_TEST_KEY", "sekrit", 1);
    PlannerConfig cfg;
    cfg.mode = PlannerMode::Live;
    cfg.endpoint_url = "http://planner.test/v1/chat";
    cfg.api_key_env = "PLANNER_TEST_KEY";
    cfg.max_retries = 2;

    int calls = 0;
    Transport garbage = [&](const std::string&,
                            const std::vector<std::pair<std::string, std::string>>&,
                            const std::string&) -> std::string {
        ++calls;
        return chatReply("I could not decide on a layout, sorry!");
    };
    CHECK_THROWS_AS(planScene("a shed", "", cfg, garbage), RetriesExhaustedError);
    CHECK(calls == 3);  // max_retries + 1 attempts on the first document

    // a reply that is JSON but fails validation also burns a retry
    calls = 0;
    Transport invalid = [&](const std::string&,
                            const std::vector<std::pair<std::string, std::string>>&,
                            const std::string&) -> std::string {
        ++calls;
        return chatReply("{\"crate\": {\"number\": 0, \"size\": [1, 1, 1], "
                         "\"description\": \"A DSLR photo of a crate\"}}");
    };
    CHECK_THROWS_AS(planScene("a shed", "", cfg, invalid), RetriesExhaustedError);
    CHECK(calls == 3);
}

TEST_CASE("live mode credential and endpoint validation") {
    PlannerConfig cfg;
    cfg.mode = PlannerMode::Live;
    cfg.endpoint_url = "http://planner.test/v1/chat";
    cfg.api_key_env = "PLANNER_TEST_KEY_ABSENT";
    unsetenv("PLANNER_TEST_KEY_ABSENT");
    CHECK_THROWS_AS(planScene("x", "", cfg, forbiddenTransport()), CredentialError);
    setenv("PLANNER_TEST_KEY_ABSENT", "", 1);  // empty value is still missing
    CHECK_THROWS_AS(planScene("x", "", cfg, forbiddenTransport()), CredentialError);

    PlannerConfig no_url;
    no_url.mode = PlannerMode::Live;
    CHECK_THROWS_AS(planScene("x", "", no_url, forbiddenTransport()), PlannerError);
}

TEST_CASE("default transport only speaks plain http") {
    auto wire = defaultHttpTransport();
    CHECK_THROWS_AS(wire("https://planner.test/v1", {}, "{}"), NetworkError);
    CHECK_THROWS_AS(wire("ftp://planner.test", {}, "{}"), NetworkError);
}
