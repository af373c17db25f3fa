#pragma once

#include <initializer_list>
#include <string>
#include <vector>

#include "json.hpp"
#include "plc/core.hpp"

// Small helpers shared by the JSON document formats (.ld.json, .sfc.json,
// property files). All failures surface as SyntaxError with a field path.
namespace plc::jutil {

nlohmann::json parse_document(const std::string& text);

// Reject unknown fields; typos in hand-edited documents fail loudly.
void allow_keys(const nlohmann::json& obj, std::initializer_list<const char*> keys, const char* what);

std::string req_string(const nlohmann::json& obj, const char* key, const char* what);
bool req_bool(const nlohmann::json& obj, const char* key, const char* what);
int64_t req_int(const nlohmann::json& obj, const char* key, const char* what);
const nlohmann::json& req_array(const nlohmann::json& obj, const char* key, const char* what);

// Shared declaration schema:
//   {"name": "x", "type": "BOOL"|"INT", "kind": "INPUT"|"OUTPUT"|"LOCAL", "init": true|0}
std::vector<VarDecl> decls_from_json(const nlohmann::json& arr);
nlohmann::json decls_to_json(const std::vector<VarDecl>& decls);

nlohmann::json value_to_json(const Value& v);

}  // namespace plc::jutil
