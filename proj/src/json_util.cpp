#include "plc/json_util.hpp"

#include <algorithm>

namespace plc::jutil {

using nlohmann::json;

json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::SyntaxError, e.what());
  }
}

void allow_keys(const json& obj, std::initializer_list<const char*> keys, const char* what) {
  for (const auto& item : obj.items()) {
    if (std::find_if(keys.begin(), keys.end(),
                     [&](const char* k) { return item.key() == k; }) == keys.end()) {
      throw Error(ErrorKind::SyntaxError, std::string(what) + ": unknown field '" + item.key() + "'");
    }
  }
}

namespace {

const json& req_field(const json& obj, const char* key, const char* what) {
  if (!obj.is_object() || !obj.contains(key))
    throw Error(ErrorKind::SyntaxError, std::string(what) + ": missing field '" + key + "'");
  return obj.at(key);
}

}  // namespace

std::string req_string(const json& obj, const char* key, const char* what) {
  const json& f = req_field(obj, key, what);
  if (!f.is_string())
    throw Error(ErrorKind::SyntaxError, std::string(what) + ": field '" + key + "' must be a string");
  return f.get<std::string>();
}

bool req_bool(const json& obj, const char* key, const char* what) {
  const json& f = req_field(obj, key, what);
  if (!f.is_boolean())
    throw Error(ErrorKind::SyntaxError, std::string(what) + ": field '" + key + "' must be a boolean");
  return f.get<bool>();
}

int64_t req_int(const json& obj, const char* key, const char* what) {
  const json& f = req_field(obj, key, what);
  if (!f.is_number_integer())
    throw Error(ErrorKind::SyntaxError, std::string(what) + ": field '" + key + "' must be an integer");
  return f.get<int64_t>();
}

const json& req_array(const json& obj, const char* key, const char* what) {
  const json& f = req_field(obj, key, what);
  if (!f.is_array())
    throw Error(ErrorKind::SyntaxError, std::string(what) + ": field '" + key + "' must be an array");
  return f;
}

std::vector<VarDecl> decls_from_json(const json& arr) {
  std::vector<VarDecl> decls;
  for (const json& dj : arr) {
    if (!dj.is_object()) throw Error(ErrorKind::SyntaxError, "declaration must be an object");
    allow_keys(dj, {"name", "type", "kind", "init"}, "declaration");
    VarDecl d;
    d.name = req_string(dj, "name", "declaration");
    std::string ty = req_string(dj, "type", "declaration");
    if (ty == "BOOL") d.type = Type::Bool;
    else if (ty == "INT") d.type = Type::Int;
    else throw Error(ErrorKind::SyntaxError, "declaration '" + d.name + "': unknown type '" + ty + "'");
    std::string kind = req_string(dj, "kind", "declaration");
    if (kind == "INPUT") d.kind = VarKind::Input;
    else if (kind == "OUTPUT") d.kind = VarKind::Output;
    else if (kind == "LOCAL") d.kind = VarKind::Local;
    else throw Error(ErrorKind::SyntaxError, "declaration '" + d.name + "': unknown kind '" + kind + "'");
    if (dj.contains("init")) {
      const json& init = dj.at("init");
      if (init.is_boolean()) d.init = Value::boolean(init.get<bool>());
      else if (init.is_number_integer()) {
        int64_t v = init.get<int64_t>();
        if (v < INT32_MIN || v > INT32_MAX)
          throw Error(ErrorKind::SyntaxError, "declaration '" + d.name + "': init out of 32-bit range");
        d.init = Value::integer(static_cast<int32_t>(v));
      } else {
        throw Error(ErrorKind::SyntaxError, "declaration '" + d.name + "': init must be boolean or integer");
      }
    }
    decls.push_back(std::move(d));
  }
  return decls;
}

json value_to_json(const Value& v) {
  if (v.is_bool()) return json(v.as_bool());
  return json(v.as_int());
}

json decls_to_json(const std::vector<VarDecl>& decls) {
  json arr = json::array();
  for (const VarDecl& d : decls) {
    json dj;
    dj["name"] = d.name;
    dj["type"] = to_string(d.type);
    dj["kind"] = to_string(d.kind);
    if (d.init) dj["init"] = value_to_json(*d.init);
    arr.push_back(std::move(dj));
  }
  return arr;
}

}  // namespace plc::jutil
