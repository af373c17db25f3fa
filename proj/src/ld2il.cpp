#include "plc/ld2il.hpp"

#include <algorithm>
#include <random>

namespace plc::ld2il {

namespace {

using il::Instr;
using il::Opcode;
using ld::Network;

Instr load_instr(const Network& contact) {
  Instr in;
  in.op = contact.negated ? Opcode::Ldn : Opcode::Ld;
  in.arg = il::Operand::var(contact.var);
  return in;
}

Instr combine_instr(Opcode op, const Network& contact) {
  Instr in;
  if (contact.negated) in.op = op == Opcode::And ? Opcode::Andn : Opcode::Orn;
  else in.op = op;
  in.arg = il::Operand::var(contact.var);
  return in;
}

Instr open_paren(Opcode op) {
  Instr in;
  in.op = op;
  in.paren = true;
  return in;
}

Instr close_paren() {
  Instr in;
  in.op = Opcode::CloseParen;
  return in;
}

// Emits code leaving the network value in cr. The first child of a chain
// extends the code directly (its own first contact becomes the LD);
// subsequent contact children append AND/OR, subsequent composite children
// open a deferred AND( / OR( around their own chain.
void emit(const Network& net, std::vector<Instr>& out, bool first_in_chain, Opcode combine) {
  switch (net.kind) {
    case Network::Kind::Contact:
      if (first_in_chain) out.push_back(load_instr(net));
      else out.push_back(combine_instr(combine, net));
      return;
    case Network::Kind::Series:
    case Network::Kind::Parallel: {
      const Opcode inner = net.kind == Network::Kind::Series ? Opcode::And : Opcode::Or;
      const bool deferred = !first_in_chain;
      if (deferred) out.push_back(open_paren(combine));
      for (size_t i = 0; i < net.children.size(); ++i) {
        emit(net.children[i], out, i == 0, inner);
      }
      if (deferred) out.push_back(close_paren());
      return;
    }
  }
}

il::Instr store_instr(const ld::Coil& coil) {
  Instr in;
  switch (coil.mode) {
    case ld::CoilMode::Normal: in.op = Opcode::St; break;
    case ld::CoilMode::Negated: in.op = Opcode::Stn; break;
    case ld::CoilMode::Set: in.op = Opcode::Set; break;
    case ld::CoilMode::Reset: in.op = Opcode::Reset; break;
  }
  in.arg = il::Operand::var(coil.var);
  return in;
}

std::vector<VarDecl> sorted_by_name(std::vector<VarDecl> decls) {
  std::sort(decls.begin(), decls.end(),
            [](const VarDecl& a, const VarDecl& b) { return a.name < b.name; });
  return decls;
}

}  // namespace

std::vector<Instr> compile_network(const Network& net) {
  std::vector<Instr> out;
  emit(net, out, /*first_in_chain=*/true, Opcode::And);
  return out;
}

std::vector<Instr> compile_rung(const ld::Rung& rung) {
  std::vector<Instr> out = compile_network(rung.network);
  for (const ld::Coil& coil : rung.coils) out.push_back(store_instr(coil));
  return out;
}

il::Program compile(const ld::Program& prog) {
  std::vector<il::Line> lines;
  for (const ld::Rung& rung : prog.rungs) {
    for (Instr& in : compile_rung(rung)) lines.push_back(il::Line{std::nullopt, std::move(in)});
  }
  return il::make_program(prog.decls, std::move(lines));
}

Verdict check_equivalence(const ld::Program& ld_prog, const il::Program& il_prog, const Mode& mode) {
  if (sorted_by_name(ld_prog.decls) != sorted_by_name(il_prog.decls))
    throw Error(ErrorKind::DeclarationMismatch, "programs do not share a declaration list");

  const std::vector<VarId> vars = bool_var_names(ld_prog.decls);
  const size_t k = vars.size();
  const Environment base = init_env(ld_prog.decls);

  auto try_assignment = [&](uint64_t bits) -> std::optional<Witness> {
    Environment env = base;
    assign_bool_bits(env, vars, bits);
    Environment from_ld = ld::eval(ld_prog, env);
    Environment from_il = il::run(il_prog, env);
    if (from_ld == from_il) return std::nullopt;
    return Witness{std::move(env), std::move(from_ld), std::move(from_il)};
  };

  Verdict verdict;
  if (std::holds_alternative<ExhaustiveMode>(mode)) {
    if (k > 20)
      throw Error(ErrorKind::UnsupportedDomain,
                  "exhaustive equivalence limited to 20 BOOL variables, got " + std::to_string(k));
    const uint64_t total = uint64_t{1} << k;
    for (uint64_t bits = 0; bits < total; ++bits) {
      ++verdict.envs_checked;
      if (auto w = try_assignment(bits)) {
        verdict.equivalent = false;
        verdict.witness = std::move(w);
        return verdict;
      }
    }
    return verdict;
  }

  const RandomMode& rm = std::get<RandomMode>(mode);
  std::mt19937_64 rng(rm.seed);
  for (uint64_t i = 0; i < rm.samples; ++i) {
    uint64_t bits = rng();
    if (k < 64) bits &= (uint64_t{1} << k) - 1;
    ++verdict.envs_checked;
    if (auto w = try_assignment(bits)) {
      verdict.equivalent = false;
      verdict.witness = std::move(w);
      return verdict;
    }
  }
  return verdict;
}

}  // namespace plc::ld2il
