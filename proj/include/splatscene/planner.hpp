#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "splatscene/scene_spec.hpp"

namespace splat {

struct PlannerError : Error {
    using Error::Error;
};
struct TemplateError : PlannerError {
    using PlannerError::PlannerError;
};
struct NetworkError : PlannerError {
    using PlannerError::PlannerError;
};
struct CredentialError : PlannerError {
    using PlannerError::PlannerError;
};
struct RetriesExhaustedError : PlannerError {
    using PlannerError::PlannerError;
};

struct PromptTemplate {
    std::string id;    // "objects", "anchors", "relations"
    std::string body;  // contains each declared placeholder exactly once
    std::vector<std::string> placeholders;
};

// The three built-in planning prompts.
PromptTemplate objectsPrompt();
PromptTemplate anchorsPrompt();
PromptTemplate relationsPrompt();

void validateTemplate(const PromptTemplate& tpl);

// Substitutes {name} for every declared placeholder; every declared
// placeholder must be present exactly once and have a value supplied.
std::string renderPrompt(const PromptTemplate& tpl,
                         const std::map<std::string, std::string>& values);
std::string renderPrompt(const PromptTemplate& tpl, const std::string& user_constraint,
                         const std::string& input);

enum class PlannerMode { Fixture, Live };

struct PlannerConfig {
    PlannerMode mode = PlannerMode::Fixture;
    std::string fixture_path;   // directory with objects.json, anchors.json,
                                // relations.json, dialogue.txt
    std::string endpoint_url;   // live mode
    std::string api_key_env = "PLANNER_API_KEY";  // env var holding the key
    int max_retries = 2;
    std::string model;          // pass-through, omitted when empty
    double temperature = -1;    // pass-through, omitted when < 0
    SceneDims scene = SceneDims::indoor(10, 10, 3);  // used for validation
};

// Raw HTTP hook so tests can swap the wire out entirely. Returns the response
// body; throws NetworkError on transport failure.
using Transport = std::function<std::string(
    const std::string& url,
    const std::vector<std::pair<std::string, std::string>>& headers,
    const std::string& body)>;

Transport defaultHttpTransport();

struct PlanResult {
    std::string objects_json;
    std::string anchors_json;
    std::string relations_json;
    std::string dialogue;  // recorded dialogue transcript, may be empty
    ConstraintGraph graph;
};

// Returns the substring spanning the first balanced top-level JSON object.
std::string extractFirstJsonObject(const std::string& text);

PlanResult planScene(const std::string& scene_text, const std::string& user_constraint,
                     const PlannerConfig& config, const Transport& transport = {});

}  // namespace splat
