#pragma once

#include <string>
#include <vector>

#include "plc/core.hpp"

namespace plc::ld {

// Series/parallel contact network. Singleton Series/Parallel nodes are
// flattened at parse time; hand-built trees can be normalized via flatten().
struct Network {
  enum class Kind { Contact, Series, Parallel };

  Kind kind = Kind::Contact;
  VarId var;             // Contact only
  bool negated = false;  // Contact: NC when true
  std::vector<Network> children;

  static Network contact(VarId v, bool negated = false);
  static Network series(std::vector<Network> children);
  static Network parallel(std::vector<Network> children);

  bool operator==(const Network&) const = default;
};

enum class CoilMode { Normal, Negated, Set, Reset };

const char* to_string(CoilMode mode);

struct Coil {
  VarId var;
  CoilMode mode = CoilMode::Normal;

  bool operator==(const Coil&) const = default;
};

struct Rung {
  Network network;
  std::vector<Coil> coils;  // nonempty, applied left to right

  bool operator==(const Rung&) const = default;
};

struct Program {
  std::vector<VarDecl> decls;
  std::vector<Rung> rungs;

  bool operator==(const Program&) const = default;
};

// .ld.json document (see docs/formats.md).
Program parse(const std::string& json_text);
std::string print(const Program& prog);

void validate(const Program& prog);

// Collapse singleton Series/Parallel nodes; evaluates identically.
Network flatten(Network net);

bool eval_network(const Network& net, const Environment& env);

// Drive the rung's coils from the network value. SET/RESET only act when
// the network is true.
Environment eval_rung(const Rung& rung, Environment env);

// Rungs evaluate top to bottom; later rungs see earlier coil writes.
Environment eval(const Program& prog, Environment env);

}  // namespace plc::ld
