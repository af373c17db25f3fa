#include "plc/il.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace plc::il {

namespace {

struct OpInfo {
  Opcode op;
  const char* name;
};

constexpr std::array<OpInfo, 28> kOps = {{
    {Opcode::Ld, "LD"},     {Opcode::Ldn, "LDN"},   {Opcode::St, "ST"},     {Opcode::Stn, "STN"},
    {Opcode::Set, "S"},     {Opcode::Reset, "R"},   {Opcode::And, "AND"},   {Opcode::Andn, "ANDN"},
    {Opcode::Or, "OR"},     {Opcode::Orn, "ORN"},   {Opcode::Xor, "XOR"},   {Opcode::Xorn, "XORN"},
    {Opcode::Not, "NOT"},   {Opcode::Add, "ADD"},   {Opcode::Sub, "SUB"},   {Opcode::Mul, "MUL"},
    {Opcode::Div, "DIV"},   {Opcode::Gt, "GT"},     {Opcode::Ge, "GE"},     {Opcode::Eq, "EQ"},
    {Opcode::Ne, "NE"},     {Opcode::Le, "LE"},     {Opcode::Lt, "LT"},     {Opcode::Jmp, "JMP"},
    {Opcode::Jmpc, "JMPC"}, {Opcode::Jmpcn, "JMPCN"}, {Opcode::Ret, "RET"}, {Opcode::Nop, "NOP"},
}};

const std::unordered_map<std::string, Opcode>& mnemonic_table() {
  static const auto table = [] {
    std::unordered_map<std::string, Opcode> t;
    for (const OpInfo& info : kOps) t.emplace(info.name, info.op);
    return t;
  }();
  return table;
}

bool is_binop(Opcode op) {
  switch (op) {
    case Opcode::And: case Opcode::Andn: case Opcode::Or: case Opcode::Orn:
    case Opcode::Xor: case Opcode::Xorn:
    case Opcode::Add: case Opcode::Sub: case Opcode::Mul: case Opcode::Div:
    case Opcode::Gt: case Opcode::Ge: case Opcode::Eq: case Opcode::Ne:
    case Opcode::Le: case Opcode::Lt:
      return true;
    default:
      return false;
  }
}

bool is_jump(Opcode op) {
  return op == Opcode::Jmp || op == Opcode::Jmpc || op == Opcode::Jmpcn;
}

// N-suffixed forms negate their (BOOL) operand before combining.
bool negates_operand(Opcode op) {
  return op == Opcode::Ldn || op == Opcode::Andn || op == Opcode::Orn || op == Opcode::Xorn;
}

Opcode base_binop(Opcode op) {
  switch (op) {
    case Opcode::Andn: return Opcode::And;
    case Opcode::Orn: return Opcode::Or;
    case Opcode::Xorn: return Opcode::Xor;
    default: return op;
  }
}

Value negated(const Value& v) { return Value::boolean(!v.as_bool()); }

Value apply_binop(Opcode op, const Value& a, const Value& b) {
  switch (op) {
    case Opcode::And: return Value::boolean(a.as_bool() && b.as_bool());
    case Opcode::Or: return Value::boolean(a.as_bool() || b.as_bool());
    case Opcode::Xor: return Value::boolean(a.as_bool() != b.as_bool());
    case Opcode::Add: return Value::integer(wrap_add(a.as_int(), b.as_int()));
    case Opcode::Sub: return Value::integer(wrap_sub(a.as_int(), b.as_int()));
    case Opcode::Mul: return Value::integer(wrap_mul(a.as_int(), b.as_int()));
    case Opcode::Div: return Value::integer(wrap_div(a.as_int(), b.as_int()));
    // Comparisons are defined on INT operands only.
    case Opcode::Gt: return Value::boolean(a.as_int() > b.as_int());
    case Opcode::Ge: return Value::boolean(a.as_int() >= b.as_int());
    case Opcode::Eq: return Value::boolean(a.as_int() == b.as_int());
    case Opcode::Ne: return Value::boolean(a.as_int() != b.as_int());
    case Opcode::Le: return Value::boolean(a.as_int() <= b.as_int());
    case Opcode::Lt: return Value::boolean(a.as_int() < b.as_int());
    default:
      throw Error(ErrorKind::TypeError, std::string(mnemonic(op)) + " is not a combining operation");
  }
}

Value operand_value(const Environment& env, const Operand& arg) {
  if (arg.is_var()) return env.read(arg.var_id());
  return arg.value();
}

const Operand& req_arg(const Instr& in) {
  if (!in.arg)
    throw Error(ErrorKind::SyntaxError, std::string(mnemonic(in.op)) + " is missing its operand");
  return *in.arg;
}

// ---------------------------------------------------------------- lexing

struct Token {
  std::string text;
  int line;
};

std::string strip_comments(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  size_t i = 0;
  int line = 1;
  while (i < text.size()) {
    if (text[i] == '\n') ++line;
    if (text[i] == '(' && i + 1 < text.size() && text[i + 1] == '*') {
      int open_line = line;
      size_t j = i + 2;
      while (j + 1 < text.size() && !(text[j] == '*' && text[j + 1] == ')')) {
        if (text[j] == '\n') {
          ++line;
          out.push_back('\n');  // keep line numbers stable
        }
        ++j;
      }
      if (j + 1 >= text.size()) throw Error(ErrorKind::SyntaxError, open_line, "unterminated comment");
      i = j + 2;
      out.push_back(' ');
      continue;
    }
    out.push_back(text[i]);
    ++i;
  }
  return out;
}

std::vector<Token> lex(const std::string& text) {
  std::vector<Token> tokens;
  int line = 1;
  size_t i = 0;
  auto is_ident_start = [](char c) { return c == '_' || std::isalpha(static_cast<unsigned char>(c)); };
  auto is_ident = [&](char c) { return is_ident_start(c) || std::isdigit(static_cast<unsigned char>(c)); };
  while (i < text.size()) {
    char c = text[i];
    if (c == '\n') {
      ++line;
      ++i;
    } else if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
    } else if (is_ident_start(c)) {
      size_t j = i;
      while (j < text.size() && is_ident(text[j])) ++j;
      tokens.push_back({text.substr(i, j - i), line});
      i = j;
    } else if (std::isdigit(static_cast<unsigned char>(c)) ||
               (c == '-' && i + 1 < text.size() && std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
      size_t j = i + 1;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      tokens.push_back({text.substr(i, j - i), line});
      i = j;
    } else if (c == ':' && i + 1 < text.size() && text[i + 1] == '=') {
      tokens.push_back({":=", line});
      i += 2;
    } else if (c == ':' || c == ';' || c == '(' || c == ')') {
      tokens.push_back({std::string(1, c), line});
      ++i;
    } else {
      throw Error(ErrorKind::SyntaxError, line, std::string("unexpected character '") + c + "'");
    }
  }
  return tokens;
}

const std::unordered_set<std::string>& keywords() {
  static const std::unordered_set<std::string> kw = {
      "VAR", "VAR_INPUT", "VAR_OUTPUT", "END_VAR", "BOOL", "INT", "TRUE", "FALSE"};
  return kw;
}

bool is_number(const std::string& s) {
  return !s.empty() && (std::isdigit(static_cast<unsigned char>(s[0])) || s[0] == '-');
}

int32_t parse_int_literal(const std::string& s, int line) {
  try {
    long long v = std::stoll(s);
    if (v < INT32_MIN || v > INT32_MAX) throw std::out_of_range("range");
    return static_cast<int32_t>(v);
  } catch (const std::exception&) {
    throw Error(ErrorKind::SyntaxError, line, "integer literal out of 32-bit range: " + s);
  }
}

// ---------------------------------------------------------------- parsing

struct Cursor {
  const std::vector<Token>& tokens;
  size_t pos = 0;

  bool done() const { return pos >= tokens.size(); }
  const Token& peek() const { return tokens[pos]; }
  const Token& next() { return tokens[pos++]; }
  int line() const { return done() ? (tokens.empty() ? 1 : tokens.back().line) : tokens[pos].line; }
};

std::vector<VarDecl> parse_var_sections(Cursor& cur) {
  std::vector<VarDecl> decls;
  while (!cur.done()) {
    VarKind kind;
    const std::string& head = cur.peek().text;
    if (head == "VAR") kind = VarKind::Local;
    else if (head == "VAR_INPUT") kind = VarKind::Input;
    else if (head == "VAR_OUTPUT") kind = VarKind::Output;
    else break;
    cur.next();
    while (true) {
      if (cur.done()) throw Error(ErrorKind::SyntaxError, cur.line(), "missing END_VAR");
      if (cur.peek().text == "END_VAR") {
        cur.next();
        break;
      }
      Token name = cur.next();
      if (keywords().count(name.text) || !is_valid_identifier(name.text)) {
        throw Error(ErrorKind::SyntaxError, name.line, "expected variable name, got '" + name.text + "'");
      }
      if (cur.done() || cur.next().text != ":")
        throw Error(ErrorKind::SyntaxError, name.line, "expected ':' after variable name '" + name.text + "'");
      if (cur.done()) throw Error(ErrorKind::SyntaxError, name.line, "expected type after ':'");
      Token ty = cur.next();
      VarDecl decl;
      decl.name = name.text;
      decl.kind = kind;
      if (ty.text == "BOOL") decl.type = Type::Bool;
      else if (ty.text == "INT") decl.type = Type::Int;
      else throw Error(ErrorKind::SyntaxError, ty.line, "unknown type '" + ty.text + "'");
      if (!cur.done() && cur.peek().text == ":=") {
        cur.next();
        if (cur.done()) throw Error(ErrorKind::SyntaxError, ty.line, "expected initial value after ':='");
        Token lit = cur.next();
        if (lit.text == "TRUE") decl.init = Value::boolean(true);
        else if (lit.text == "FALSE") decl.init = Value::boolean(false);
        else if (is_number(lit.text)) decl.init = Value::integer(parse_int_literal(lit.text, lit.line));
        else throw Error(ErrorKind::SyntaxError, lit.line, "bad initial value '" + lit.text + "'");
      }
      if (!cur.done() && cur.peek().text == ";") cur.next();
      decls.push_back(std::move(decl));
    }
  }
  return decls;
}

Operand parse_operand(const Token& tok) {
  if (tok.text == "TRUE") return Operand::constant(Value::boolean(true));
  if (tok.text == "FALSE") return Operand::constant(Value::boolean(false));
  if (is_number(tok.text)) return Operand::constant(Value::integer(parse_int_literal(tok.text, tok.line)));
  if (keywords().count(tok.text) || !is_valid_identifier(tok.text))
    throw Error(ErrorKind::SyntaxError, tok.line, "expected operand, got '" + tok.text + "'");
  return Operand::var(tok.text);
}

Line parse_instruction_line(Cursor& cur) {
  Line out;
  int line_no = cur.peek().line;
  auto same_line = [&] { return !cur.done() && cur.peek().line == line_no; };

  Token first = cur.next();
  if (same_line() && cur.peek().text == ":" && first.text != ")") {
    if (keywords().count(first.text) || !is_valid_identifier(first.text))
      throw Error(ErrorKind::SyntaxError, first.line, "bad label '" + first.text + "'");
    out.label = first.text;
    cur.next();  // ':'
    if (!same_line()) throw Error(ErrorKind::SyntaxError, line_no, "label without instruction");
    first = cur.next();
  }

  Instr& in = out.instr;
  if (first.text == ")") {
    in.op = Opcode::CloseParen;
  } else {
    auto it = mnemonic_table().find(first.text);
    if (it == mnemonic_table().end())
      throw Error(ErrorKind::UnknownOpcode, first.line, "'" + first.text + "'");
    in.op = it->second;
    if (same_line() && cur.peek().text == "(") {
      if (!paren_allowed(in.op))
        throw Error(ErrorKind::SyntaxError, first.line,
                    std::string(mnemonic(in.op)) + " cannot take the deferred '(' form");
      in.paren = true;
      cur.next();
    }
    if (same_line()) {
      Token arg = cur.next();
      if (is_jump(in.op)) {
        if (keywords().count(arg.text) || !is_valid_identifier(arg.text))
          throw Error(ErrorKind::SyntaxError, arg.line, "expected label after " + std::string(mnemonic(in.op)));
        in.target = arg.text;
      } else {
        in.arg = parse_operand(arg);
      }
    }
  }
  if (same_line())
    throw Error(ErrorKind::SyntaxError, line_no, "trailing tokens after instruction ('" + cur.peek().text + "')");
  return out;
}

void check_arity(const Instr& in, int line_no) {
  auto fail = [&](const std::string& msg) { throw Error(ErrorKind::SyntaxError, line_no, msg); };
  const std::string name = mnemonic(in.op);
  if (in.paren && !paren_allowed(in.op)) fail(name + " cannot take the deferred '(' form");
  if (!in.target.empty() && !is_jump(in.op)) fail(name + " does not take a label");
  switch (in.op) {
    case Opcode::Ld: case Opcode::Ldn:
      if (!in.arg) fail(name + " requires an operand");
      break;
    case Opcode::St: case Opcode::Stn: case Opcode::Set: case Opcode::Reset:
      if (!in.arg || !in.arg->is_var()) fail(name + " requires a variable operand");
      break;
    case Opcode::Jmp: case Opcode::Jmpc: case Opcode::Jmpcn:
      if (in.target.empty()) fail(name + " requires a label");
      if (in.arg) fail(name + " does not take an operand");
      break;
    case Opcode::Not: case Opcode::Ret: case Opcode::Nop: case Opcode::CloseParen:
      if (in.arg) fail(name + " does not take an operand");
      break;
    default:  // combining operations
      if (!in.arg && !in.paren) fail(name + " requires an operand");
      break;
  }
}

}  // namespace

const char* mnemonic(Opcode op) {
  for (const OpInfo& info : kOps)
    if (info.op == op) return info.name;
  return ")";
}

bool paren_allowed(Opcode op) {
  return is_binop(op);
}

Program parse(const std::string& text) {
  std::vector<Token> tokens = lex(strip_comments(text));
  Cursor cur{tokens};
  std::vector<VarDecl> decls = parse_var_sections(cur);
  std::vector<Line> lines;
  while (!cur.done()) lines.push_back(parse_instruction_line(cur));
  return make_program(std::move(decls), std::move(lines));
}

std::vector<Instr> parse_fragment(const std::string& text) {
  std::vector<Token> tokens = lex(strip_comments(text));
  Cursor cur{tokens};
  std::vector<Line> lines;
  while (!cur.done()) lines.push_back(parse_instruction_line(cur));
  std::vector<Instr> instrs;
  for (Line& l : lines) {
    if (l.label) throw Error(ErrorKind::SyntaxError, "labels are not allowed in instruction fragments");
    if (is_jump(l.instr.op))
      throw Error(ErrorKind::SyntaxError,
                  std::string(mnemonic(l.instr.op)) + " is not allowed in instruction fragments");
    instrs.push_back(std::move(l.instr));
  }
  // Reuse program validation for arity and paren balance.
  std::vector<Line> wrapped;
  wrapped.reserve(instrs.size());
  for (const Instr& in : instrs) wrapped.push_back(Line{std::nullopt, in});
  make_program({}, std::move(wrapped));
  return instrs;
}

std::string print_instr(const Instr& in) {
  std::string s;
  if (in.op == Opcode::CloseParen) return ")";
  s = mnemonic(in.op);
  if (in.paren) s += "(";
  if (in.arg) {
    s += " ";
    if (in.arg->is_var()) s += in.arg->var_id();
    else s += to_string(in.arg->value());
  }
  if (!in.target.empty()) s += " " + in.target;
  return s;
}

std::string print_fragment(const std::vector<Instr>& instrs) {
  std::string out;
  for (size_t i = 0; i < instrs.size(); ++i) {
    if (i) out += "\n";
    out += print_instr(instrs[i]);
  }
  return out;
}

std::string print(const Program& prog) {
  std::ostringstream out;
  auto section = [&](VarKind kind) {
    switch (kind) {
      case VarKind::Input: return "VAR_INPUT";
      case VarKind::Output: return "VAR_OUTPUT";
      case VarKind::Local: return "VAR";
    }
    return "VAR";
  };
  // A new section starts whenever the kind changes, so declaration order
  // survives the round-trip exactly.
  for (size_t i = 0; i < prog.decls.size(); ++i) {
    const VarDecl& d = prog.decls[i];
    if (i == 0 || prog.decls[i - 1].kind != d.kind) {
      if (i != 0) out << "END_VAR\n";
      out << section(d.kind) << "\n";
    }
    out << "  " << d.name << " : " << to_string(d.type);
    if (d.init) out << " := " << to_string(*d.init);
    out << ";\n";
  }
  if (!prog.decls.empty()) out << "END_VAR\n";
  for (const Line& l : prog.lines) {
    if (l.label) out << *l.label << ": ";
    else out << "  ";
    out << print_instr(l.instr) << "\n";
  }
  return out.str();
}

void validate(const Program& prog) {
  init_env(prog.decls);  // declaration well-formedness

  for (size_t i = 0; i < prog.lines.size(); ++i) {
    check_arity(prog.lines[i].instr, static_cast<int>(i + 1));
  }
  // Label index must match the lines.
  for (const auto& [label, idx] : prog.labels) {
    if (idx >= prog.lines.size() || !prog.lines[idx].label || *prog.lines[idx].label != label)
      throw Error(ErrorKind::SyntaxError, "label index out of sync for '" + label + "'");
  }

  // Static paren depth per instruction; jumps may not change depth.
  std::vector<int> depth_at(prog.lines.size() + 1, 0);
  int depth = 0;
  for (size_t i = 0; i < prog.lines.size(); ++i) {
    depth_at[i] = depth;
    const Instr& in = prog.lines[i].instr;
    if (in.paren) ++depth;
    if (in.op == Opcode::CloseParen) {
      if (depth == 0) throw Error(ErrorKind::UnbalancedParen, static_cast<int>(i + 1), "')' without matching '('");
      --depth;
    }
  }
  depth_at[prog.lines.size()] = depth;
  if (depth != 0) throw Error(ErrorKind::UnbalancedParen, "unclosed '(' at end of program");

  for (size_t i = 0; i < prog.lines.size(); ++i) {
    const Instr& in = prog.lines[i].instr;
    if (!is_jump(in.op)) continue;
    auto it = prog.labels.find(in.target);
    if (it == prog.labels.end())
      throw Error(ErrorKind::UnboundLabel, static_cast<int>(i + 1), "jump target '" + in.target + "' is not defined");
    if (depth_at[it->second] != depth_at[i])
      throw Error(ErrorKind::UnbalancedParen, static_cast<int>(i + 1),
                  "jump to '" + in.target + "' crosses paren nesting");
  }
}

Program make_program(std::vector<VarDecl> decls, std::vector<Line> lines) {
  Program prog;
  prog.decls = std::move(decls);
  prog.lines = std::move(lines);
  for (size_t i = 0; i < prog.lines.size(); ++i) {
    if (!prog.lines[i].label) continue;
    if (!prog.labels.emplace(*prog.lines[i].label, i).second)
      throw Error(ErrorKind::SyntaxError, static_cast<int>(i + 1), "duplicate label '" + *prog.lines[i].label + "'");
  }
  validate(prog);
  return prog;
}

bool halted(const Program& prog, const State& st) {
  return st.pc >= prog.lines.size();
}

State step(const Program& prog, State st) {
  if (halted(prog, st)) throw std::logic_error("step on halted IL state");
  const Instr& in = prog.lines[st.pc].instr;
  size_t next = st.pc + 1;

  switch (in.op) {
    case Opcode::Ld:
      st.cr = operand_value(st.env, req_arg(in));
      break;
    case Opcode::Ldn:
      st.cr = negated(operand_value(st.env, req_arg(in)));
      break;
    case Opcode::St:
      st.env.set(req_arg(in).var_id(), st.cr);
      break;
    case Opcode::Stn:
      st.env.set(req_arg(in).var_id(), negated(st.cr));
      break;
    case Opcode::Set:
      if (st.cr.as_bool()) st.env.set(req_arg(in).var_id(), Value::boolean(true));
      break;
    case Opcode::Reset:
      if (st.cr.as_bool()) st.env.set(req_arg(in).var_id(), Value::boolean(false));
      break;
    case Opcode::Not:
      st.cr = negated(st.cr);
      break;
    case Opcode::Jmp:
      next = prog.labels.at(in.target);
      break;
    case Opcode::Jmpc:
      if (st.cr.as_bool()) next = prog.labels.at(in.target);
      break;
    case Opcode::Jmpcn:
      if (!st.cr.as_bool()) next = prog.labels.at(in.target);
      break;
    case Opcode::Ret:
      next = prog.lines.size();
      break;
    case Opcode::Nop:
      break;
    case Opcode::CloseParen: {
      if (st.defer.empty())
        throw Error(ErrorKind::UnbalancedParen, static_cast<int>(st.pc + 1), "')' with empty defer stack");
      DeferFrame frame = st.defer.back();
      st.defer.pop_back();
      Value rhs = frame.negate ? negated(st.cr) : st.cr;
      st.cr = apply_binop(frame.op, frame.saved, rhs);
      break;
    }
    default: {  // combining operations, direct or deferred
      if (in.paren) {
        st.defer.push_back(DeferFrame{base_binop(in.op), negates_operand(in.op), st.cr});
        // Inner computation starts from the operand when given, else from
        // the defined entry value Bool FALSE.
        st.cr = in.arg ? operand_value(st.env, *in.arg) : Value::boolean(false);
      } else {
        Value rhs = operand_value(st.env, req_arg(in));
        if (negates_operand(in.op)) rhs = negated(rhs);
        st.cr = apply_binop(base_binop(in.op), st.cr, rhs);
      }
      break;
    }
  }
  st.pc = next;
  return st;
}

Environment run(const Program& prog, Environment env, long fuel) {
  State st;
  st.cr = Value::boolean(false);
  st.env = std::move(env);
  st.pc = 0;
  long used = 0;
  while (!halted(prog, st)) {
    if (used >= fuel)
      throw Error(ErrorKind::FuelExhausted, "no halt within " + std::to_string(fuel) + " steps");
    st = step(prog, std::move(st));
    ++used;
  }
  return std::move(st.env);
}

}  // namespace plc::il
