#include "splatscene/planner.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <httplib.h>
#include <json.hpp>

namespace splat {
namespace {

using json = nlohmann::json;

const char* kObjectsBody =
    "You are a professional scene designer. Based on the user requirements "
    "{User Constraint} and your domain knowledge, your task is to generate a list of "
    "objects commonly found in the described scene. For each object, please include "
    "its frequency of appearance, typical dimensions ([x, y, z] in meters), and a "
    "brief description starting with \"A DSLR photo of\". Ensure that the object "
    "descriptions are consistent with the scene's style and reflect common human "
    "understanding. Output should be formatted as follows in JSON:\n"
    "Input:\n"
    "a living room\n"
    "Output:\n"
    "{\"sofa\": {\"number\":2, \"size\":[2.0,1.0,0.8], \"description\":\"A DSLR photo "
    "of a plush, grey sectional sofa, featuring deep cushions and soft fabric.\"}, "
    "\"coffee table\":{\"number\":1, \"size\":[1.5,1.0,0.5], \"description\": \"A DSLR "
    "photo of a round, glass-top coffee table with a modern design and a sturdy metal "
    "base.\"}, \"TV\":{\"number\":1, \"size\":[1.4, 0.8, 0.1], \"description\": \"A "
    "DSLR photo of a large flat-screen TV, featuring a wide, slim display on the TV "
    "stand.\"}, \"TV stand\": {\"number\":1, \"size\":[1.0, 0.4, 0.5], "
    "\"description\": \"A DSLR photo of a sleek, modern TV stand featuring open "
    "shelving and a minimalist design.\"}, \"potted plant\": {\"number\":2, "
    "\"size\":[0.5, 0.5, 1.0], \"description\": \"A DSLR photo of a vibrant, lush "
    "plant with broad green leaves in a decorative pot.\"}}\n"
    "Now, let's design the scene: {input}";

const char* kAnchorsBody =
    "You are a scene placement expert. Based on the user requirements "
    "{User Constraint} and your domain knowledge, your task is to determine the "
    "spatial relationship between an object and its environment based on the object's "
    "name and common human understanding. There are four relationships to choose "
    "from: 1. CENTER, the object is in the center of the scene 2. SIDE, the object is "
    "at the boundary of the scene 3. CORNER, the object is in the corner of the scene "
    "4. OTHERS, the object is in other places. When dealing with multiple similar "
    "objects, arrange their positions reasonably to prevent conflicts. Please return "
    "in the following example format in JSON format.\n"
    "Input:\n"
    "{\"scene_type\":\"indoor scene\", \"scene_text\":\"a living room\", "
    "\"objects_list\":[\"sofa1\", \"sofa2\", \"coffee table1\", \"TV1\", "
    "\"TV stand1\", \"potted plant1\", \"potted plant2\"]}\n"
    "Output:\n"
    "{\"sofa1\": \"SIDE\", \"sofa2\": \"SIDE\", \"coffee table1\": \"CENTER\", "
    "\"TV1\": \"SIDE\", \"TV stand1\": \"SIDE\", \"potted plant1\": \"CORNER\", "
    "\"potted plant2\": \"CORNER\"}\n"
    "Now, I need select for {input}";

const char* kRelationsBody =
    "You are an expert in scene arrangement. Based on the user requirements "
    "{User Constraint}, the given environment, and your domain knowledge, your task "
    "is to select objects from the provided list that are relevant to the current "
    "object based on common human usage, and describe their spatial or functional "
    "relationships. The possible relationships include: 1.LEFT, indicating the "
    "current object is at the left of the selected object. 2.RIGHT, indicating the "
    "current object is at the right of the selected object. 3.FRONT, indicating the "
    "current object is at the front of the selected object. 4.BEHIND, indicating the "
    "current object is at the behind of the selected object. 5.OVER, indicating the "
    "current object is above the selected object. 6.UNDER, indicating the current "
    "object is below the selected object. 7.NEXT, indicating the current object is "
    "near the selected object. 8.OPPOSITE, indicating the current object is opposite "
    "the selected object. Output the selected objects and their relationships in "
    "JSON format, keyed per current object. For example:\n"
    "Input:\n"
    "{\"scene_type\": \"indoor scene\", \"scene_text\": \"a living room\", "
    "\"current_object\": \"sofa1\", \"objects_list\": [\"sofa2\", \"coffee table1\", "
    "\"TV1\", \"TV stand1\", \"potted plant1\", \"potted plant2\"]}\n"
    "Output:\n"
    "{\"sofa1\": {\"sofa2\": \"NEXT\", \"coffee table1\": \"FRONT\", \"TV1\": "
    "\"OPPOSITE\", \"TV stand1\": \"OPPOSITE\"}}\n"
    "Now, I need design for {input}";

std::string readTextFile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PlannerError("cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string sceneTypeText(const SceneDims& scene) {
    return scene.kind == SceneKind::Indoor ? "indoor scene" : "outdoor scene";
}

// Objects doc alone cannot be run through the full parser, so pair it with a
// synthetic all-OTHERS anchor map.
std::vector<std::string> validateObjectsDoc(const std::string& objects_json,
                                            const SceneDims& scene) {
    json parsed = json::parse(objects_json);
    if (!parsed.is_object() || parsed.empty()) {
        throw FormatError("objects document must be a non-empty JSON object");
    }
    json synth = json::object();
    ConstraintGraph probe;
    {
        std::vector<ObjectSpec> objects;
        for (auto it = parsed.begin(); it != parsed.end(); ++it) {
            ObjectSpec o;
            o.name = it.key();
            o.count = it.value().at("number").get<int>();
            objects.push_back(o);
        }
        for (const auto& id : expandInstances(objects)) synth[id] = "OTHERS";
    }
    probe = parseSceneSpec(objects_json, synth.dump(), "{}", scene);
    return probe.nodes;
}

std::string requestDocument(const PromptTemplate& tpl, const std::string& constraint,
                            const std::string& input, const PlannerConfig& config,
                            const Transport& transport, const std::string& api_key) {
    json body;
    if (!config.model.empty()) body["model"] = config.model;
    if (config.temperature >= 0) body["temperature"] = config.temperature;
    body["messages"] = json::array(
        {{{"role", "system"},
          {"content", "You are a scene planning assistant. Reply with a single JSON "
                      "object."}},
         {{"role", "user"}, {"content", renderPrompt(tpl, constraint, input)}}});
    std::vector<std::pair<std::string, std::string>> headers;
    if (!api_key.empty()) headers.emplace_back("Authorization", "Bearer " + api_key);

    std::string reply = transport(config.endpoint_url, headers, body.dump());
    json parsed;
    try {
        parsed = json::parse(reply);
    } catch (const json::exception&) {
        throw FormatError("planner reply is not JSON");
    }
    std::string text;
    try {
        const json& choice = parsed.at("choices").at(0);
        if (choice.contains("message")) {
            text = choice.at("message").at("content").get<std::string>();
        } else {
            text = choice.at("text").get<std::string>();
        }
    } catch (const json::exception&) {
        throw FormatError("planner reply is missing choices[0] text");
    }
    return extractFirstJsonObject(text);
}

std::string withRetries(int max_retries, const std::string& what,
                        const std::function<std::string()>& attempt) {
    std::string last_error;
    for (int tries = 0; tries <= max_retries; ++tries) {
        try {
            return attempt();
        } catch (const FormatError& e) {
            last_error = e.what();
        } catch (const DomainError& e) {
            last_error = e.what();
        }
    }
    throw RetriesExhaustedError("planner could not obtain a valid " + what +
                                " document: " + last_error);
}

}  // namespace

PromptTemplate objectsPrompt() {
    return {"objects", kObjectsBody, {"User Constraint", "input"}};
}
PromptTemplate anchorsPrompt() {
    return {"anchors", kAnchorsBody, {"User Constraint", "input"}};
}
PromptTemplate relationsPrompt() {
    return {"relations", kRelationsBody, {"User Constraint", "input"}};
}

void validateTemplate(const PromptTemplate& tpl) {
    for (const auto& name : tpl.placeholders) {
        std::string token = "{" + name + "}";
        auto first = tpl.body.find(token);
        if (first == std::string::npos) {
            throw TemplateError("template '" + tpl.id + "' is missing placeholder " +
                                token);
        }
        if (tpl.body.find(token, first + 1) != std::string::npos) {
            throw TemplateError("template '" + tpl.id + "' repeats placeholder " +
                                token);
        }
    }
}

std::string renderPrompt(const PromptTemplate& tpl,
                         const std::map<std::string, std::string>& values) {
    validateTemplate(tpl);
    std::string out = tpl.body;
    for (const auto& name : tpl.placeholders) {
        auto it = values.find(name);
        if (it == values.end()) {
            throw TemplateError("no value for placeholder {" + name + "}");
        }
        std::string token = "{" + name + "}";
        out.replace(out.find(token), token.size(), it->second);
    }
    return out;
}

std::string renderPrompt(const PromptTemplate& tpl, const std::string& user_constraint,
                         const std::string& input) {
    return renderPrompt(tpl, {{"User Constraint", user_constraint}, {"input", input}});
}

std::string extractFirstJsonObject(const std::string& text) {
    std::size_t start = text.find('{');
    if (start == std::string::npos) {
        throw FormatError("no JSON object found in planner reply");
    }
    int depth = 0;
    bool in_string = false, escaped = false;
    for (std::size_t i = start; i < text.size(); ++i) {
        char c = text[i];
        if (in_string) {
            if (escaped) {
                escaped = false;
            } else if (c == '\\') {
                escaped = true;
            } else if (c == '"') {
                in_string = false;
            }
            continue;
        }
        if (c == '"') {
            in_string = true;
        } else if (c == '{') {
            ++depth;
        } else if (c == '}') {
            if (--depth == 0) return text.substr(start, i - start + 1);
        }
    }
    throw FormatError("unbalanced JSON object in planner reply");
}

Transport defaultHttpTransport() {
    return [](const std::string& url,
              const std::vector<std::pair<std::string, std::string>>& headers,
              const std::string& body) -> std::string {
        static const std::string http = "http://";
        if (url.rfind(http, 0) != 0) {
            throw NetworkError("only http:// endpoints are supported: " + url);
        }
        std::string rest = url.substr(http.size());
        std::size_t slash = rest.find('/');
        std::string host = slash == std::string::npos ? rest : rest.substr(0, slash);
        std::string path = slash == std::string::npos ? "/" : rest.substr(slash);
        httplib::Client client(http + host);
        httplib::Headers hl;
        for (const auto& [k, v] : headers) hl.emplace(k, v);
        auto res = client.Post(path, hl, body, "application/json");
        if (!res) {
            throw NetworkError("request to " + url + " failed: " +
                               httplib::to_string(res.error()));
        }
        if (res->status != 200) {
            throw NetworkError("request to " + url + " returned status " +
                               std::to_string(res->status));
        }
        return res->body;
    };
}

PlanResult planScene(const std::string& scene_text, const std::string& user_constraint,
                     const PlannerConfig& config, const Transport& transport) {
    PlanResult result;

    if (config.mode == PlannerMode::Fixture) {
        if (config.fixture_path.empty()) {
            throw PlannerError("fixture mode requires a fixture path");
        }
        result.objects_json = readTextFile(config.fixture_path + "/objects.json");
        result.anchors_json = readTextFile(config.fixture_path + "/anchors.json");
        result.relations_json = readTextFile(config.fixture_path + "/relations.json");
        std::ifstream dialogue(config.fixture_path + "/dialogue.txt", std::ios::binary);
        if (dialogue) {
            std::ostringstream buf;
            buf << dialogue.rdbuf();
            result.dialogue = buf.str();
        }
        result.graph = parseSceneSpec(result.objects_json, result.anchors_json,
                                      result.relations_json, config.scene);
        return result;
    }

    if (config.endpoint_url.empty()) {
        throw PlannerError("live mode requires an endpoint URL");
    }
    const char* key = config.api_key_env.empty()
                          ? nullptr
                          : std::getenv(config.api_key_env.c_str());
    if (key == nullptr || *key == '\0') {
        throw CredentialError("environment variable '" + config.api_key_env +
                              "' does not hold an API key");
    }
    Transport wire = transport ? transport : defaultHttpTransport();
    std::string constraint = user_constraint;
    if (!result.dialogue.empty()) constraint = result.dialogue + "\n" + constraint;

    std::vector<std::string> instances;
    result.objects_json = withRetries(config.max_retries, "objects", [&] {
        std::string doc = requestDocument(objectsPrompt(), constraint, scene_text,
                                          config, wire, key);
        instances = validateObjectsDoc(doc, config.scene);
        return doc;
    });

    json anchors_input = {{"scene_type", sceneTypeText(config.scene)},
                          {"scene_text", scene_text},
                          {"objects_list", instances}};
    result.anchors_json = withRetries(config.max_retries, "anchors", [&] {
        std::string doc = requestDocument(anchorsPrompt(), constraint,
                                          anchors_input.dump(), config, wire, key);
        parseSceneSpec(result.objects_json, doc, "{}", config.scene);
        return doc;
    });

    json relations_input = {{"scene_type", sceneTypeText(config.scene)},
                            {"scene_text", scene_text},
                            {"objects_list", instances}};
    result.relations_json = withRetries(config.max_retries, "relations", [&] {
        std::string doc = requestDocument(relationsPrompt(), constraint,
                                          relations_input.dump(), config, wire, key);
        result.graph = parseSceneSpec(result.objects_json, result.anchors_json, doc,
                                      config.scene);
        return doc;
    });
    return result;
}

}  // namespace splat
