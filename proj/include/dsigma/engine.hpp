#pragma once

#include "dsigma/model.hpp"
#include "dsigma/worldsheet.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>

namespace dsigma {

using Json = nlohmann::ordered_json;

struct RunOptions {
    std::string command;  // check | symmetries | extend | gauge | standard-extend | oracle
    std::string sub;      // for check: poisson | dirac | gjac
    int degree = -1;      // -1: use the model's degree bound
    std::string algebra = "g";
    bool assert_orbit = false;
    std::string emit = "json";
    int samples = 20;
    uint64_t seed = 1;
};

struct RunResult {
    int exit_code = 0;     // 0 pass, 1 fail/none, 2 input error, 3 inconclusive
    Json report;
    std::string latex;     // filled by gauge --emit latex
};

RunResult run_command(const ModelSpec& model, const RunOptions& opt);

// Action emission and its JSON reader (exact rational round-trip).
Json action_json(const ActionExpression& a, bool has_wz);
ActionExpression action_from_json(const Json& j);
std::string action_latex(const ActionExpression& a, bool has_wz);

}  // namespace dsigma
