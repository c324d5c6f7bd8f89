#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "ergodic/rng.hpp"

namespace ergodic::cli {

std::string_view to_string(ExperimentType type) {
  switch (type) {
    case ExperimentType::trajectory: return "trajectory";
    case ExperimentType::born_sampling: return "born-sampling";
    case ExperimentType::offset_average: return "offset-average";
    case ExperimentType::sub_tau: return "sub-tau";
    case ExperimentType::sequential_measurement: return "sequential-measurement";
    case ExperimentType::qgrid: return "qgrid";
  }
  return "?";
}

std::uint64_t fnv1a(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

struct Position {
  int line = 1;
  int column = 1;
};

struct Value {
  enum class Kind { number, string, boolean, list } kind = Kind::number;
  Complex number;
  std::string text;
  bool flag = false;
  std::vector<Value> items;
  Position at;
};

struct Entry {
  std::string key;
  Value value;
  Position at;
};

struct Block {
  std::string kind;
  std::string name;
  Position at;
  std::vector<Entry> entries;
};

// ---------------------------------------------------------------- lexing

enum class Tok { ident, number, string, equals, lbrace, rbrace, lbracket, rbracket, comma, newline, end };

struct Token {
  Tok kind = Tok::end;
  std::string text;
  Position at;
};

std::optional<double> parse_real(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<Complex> parse_complex(std::string_view s) {
  if (s.empty()) return std::nullopt;
  if (s.back() != 'i') {
    const auto re = parse_real(s);
    if (!re) return std::nullopt;
    return Complex(*re, 0.0);
  }
  const std::string_view body = s.substr(0, s.size() - 1);
  std::size_t split = std::string_view::npos;
  for (std::size_t i = 1; i < body.size(); ++i) {
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') split = i;
  }
  const auto unit = [](std::string_view t) -> std::optional<double> {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return parse_real(t);
  };
  if (split == std::string_view::npos) {
    const auto im = unit(body);
    if (!im) return std::nullopt;
    return Complex(0.0, *im);
  }
  const auto re = parse_real(body.substr(0, split));
  const auto im = unit(body.substr(split));
  if (!re || !im) return std::nullopt;
  return Complex(*re, *im);
}

class Lexer {
 public:
  Lexer(std::string_view text, const std::string& source) : text_(text), source_(source) {}

  [[noreturn]] void fail(Position at, const std::string& message) const {
    throw ParseError(source_ + ":" + std::to_string(at.line) + ":" + std::to_string(at.column) + ": " + message,
                     at.line);
  }

  std::vector<Token> run() {
    std::vector<Token> out;
    while (i_ < text_.size()) {
      const char c = text_[i_];
      const Position at = pos_;
      if (c == '#') {
        while (i_ < text_.size() && text_[i_] != '\n') step();
      } else if (c == '\n') {
        out.push_back({Tok::newline, "\n", at});
        step();
      } else if (c == ' ' || c == '\t' || c == '\r') {
        step();
      } else if (c == '=' || c == '{' || c == '}' || c == '[' || c == ']' || c == ',') {
        static const std::map<char, Tok> single{{'=', Tok::equals},   {'{', Tok::lbrace},   {'}', Tok::rbrace},
                                                {'[', Tok::lbracket}, {']', Tok::rbracket}, {',', Tok::comma}};
        out.push_back({single.at(c), std::string(1, c), at});
        step();
      } else if (c == '"') {
        step();
        std::string s;
        while (i_ < text_.size() && text_[i_] != '"') {
          if (text_[i_] == '\n') fail(at, "unterminated string");
          s += text_[i_];
          step();
        }
        if (i_ >= text_.size()) fail(at, "unterminated string");
        step();
        out.push_back({Tok::string, s, at});
      } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '+' || c == '-') {
        std::string s;
        while (i_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[i_])) || text_[i_] == '.' ||
                                     text_[i_] == '+' || text_[i_] == '-')) {
          s += text_[i_];
          step();
        }
        out.push_back({Tok::number, s, at});
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::string s;
        while (i_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[i_])) || text_[i_] == '_' ||
                                     text_[i_] == '-')) {
          s += text_[i_];
          step();
        }
        out.push_back({Tok::ident, s, at});
      } else {
        fail(at, std::string("unexpected character '") + c + "'");
      }
    }
    out.push_back({Tok::end, "", pos_});
    return out;
  }

 private:
  void step() {
    if (text_[i_] == '\n') {
      ++pos_.line;
      pos_.column = 1;
    } else {
      ++pos_.column;
    }
    ++i_;
  }

  std::string_view text_;
  const std::string& source_;
  std::size_t i_ = 0;
  Position pos_;
};

// --------------------------------------------------------------- parsing

class Parser {
 public:
  Parser(std::vector<Token> tokens, const Lexer& lexer) : tokens_(std::move(tokens)), lexer_(lexer) {}

  void run(std::vector<Entry>& top, std::vector<Block>& blocks) {
    while (true) {
      skip_newlines();
      if (peek().kind == Tok::end) return;
      const Token head = expect(Tok::ident, "a key or block kind");
      if (peek().kind == Tok::equals) {
        next();
        top.push_back({head.text, value(), head.at});
        end_of_statement();
        continue;
      }
      if (head.text != "csco" && head.text != "scheduler" && head.text != "experiment") {
        lexer_.fail(head.at, "expected '=' after '" + head.text + "'");
      }
      const Token name = peek().kind == Tok::string ? next() : expect(Tok::ident, "a block name");
      Block block{head.text, name.text, head.at, {}};
      expect(Tok::lbrace, "'{'");
      while (true) {
        skip_newlines();
        if (peek().kind == Tok::rbrace) {
          next();
          break;
        }
        if (peek().kind == Tok::end) lexer_.fail(head.at, "block '" + name.text + "' is not closed");
        const Token key = expect(Tok::ident, "a key");
        expect(Tok::equals, "'='");
        block.entries.push_back({key.text, value(), key.at});
        if (peek().kind == Tok::rbrace) continue;
        end_of_statement();
      }
      blocks.push_back(std::move(block));
      end_of_statement();
    }
  }

 private:
  const Token& peek() const { return tokens_[i_]; }
  Token next() { return tokens_[i_++]; }

  Token expect(Tok kind, const std::string& what) {
    if (peek().kind != kind) {
      const auto& t = peek();
      lexer_.fail(t.at, "expected " + what + ", found " + describe(t));
    }
    return next();
  }

  static std::string describe(const Token& t) {
    if (t.kind == Tok::end) return "end of file";
    if (t.kind == Tok::newline) return "end of line";
    return "'" + t.text + "'";
  }

  void skip_newlines() {
    while (peek().kind == Tok::newline) next();
  }

  void end_of_statement() {
    if (peek().kind == Tok::end) return;
    expect(Tok::newline, "end of line");
  }

  Value value() {
    const Token t = next();
    Value v;
    v.at = t.at;
    switch (t.kind) {
      case Tok::number: {
        const auto c = parse_complex(t.text);
        if (!c) lexer_.fail(t.at, "malformed number '" + t.text + "'");
        v.number = *c;
        return v;
      }
      case Tok::string:
        v.kind = Value::Kind::string;
        v.text = t.text;
        return v;
      case Tok::ident:
        if (t.text == "true" || t.text == "false") {
          v.kind = Value::Kind::boolean;
          v.flag = t.text == "true";
          return v;
        }
        if (auto c = parse_complex(t.text)) {  // bare "i"
          v.number = *c;
          return v;
        }
        lexer_.fail(t.at, "expected a value, found '" + t.text + "' (strings need quotes)");
      case Tok::lbracket: {
        v.kind = Value::Kind::list;
        skip_newlines();
        while (peek().kind != Tok::rbracket) {
          v.items.push_back(value());
          skip_newlines();
          if (peek().kind == Tok::comma) {
            next();
            skip_newlines();
          } else if (peek().kind != Tok::rbracket) {
            lexer_.fail(peek().at, "expected ',' or ']', found " + describe(peek()));
          }
        }
        next();
        return v;
      }
      default:
        lexer_.fail(t.at, "expected a value, found " + describe(t));
    }
  }

  std::vector<Token> tokens_;
  const Lexer& lexer_;
  std::size_t i_ = 0;
};

// ---------------------------------------------------------- interpretation

class Interpreter {
 public:
  explicit Interpreter(const Lexer& lexer) : lexer_(lexer) {}

  [[noreturn]] void fail(Position at, const std::string& message) const { lexer_.fail(at, message); }

  // Key lookup with unknown/duplicate checking.
  class Fields {
   public:
    Fields(const Interpreter& in, const std::vector<Entry>& entries, std::set<std::string> allowed,
           const std::string& where)
        : in_(in) {
      for (const auto& e : entries) {
        if (!allowed.contains(e.key)) in.fail(e.at, "unknown key '" + e.key + "' in " + where);
        if (!map_.emplace(e.key, &e).second) in.fail(e.at, "duplicate key '" + e.key + "' in " + where);
      }
    }
    const Value* find(const std::string& key) const {
      const auto it = map_.find(key);
      return it == map_.end() ? nullptr : &it->second->value;
    }
    const Value& require(const std::string& key, Position at, const std::string& where) const {
      const auto* v = find(key);
      if (!v) in_.fail(at, "missing key '" + key + "' in " + where);
      return *v;
    }

   private:
    const Interpreter& in_;
    std::map<std::string, const Entry*> map_;
  };

  double real(const Value& v) const {
    if (v.kind != Value::Kind::number) fail(v.at, "expected a number");
    if (v.number.imag() != 0.0) fail(v.at, "expected a real number");
    return v.number.real();
  }

  long integer(const Value& v) const {
    const double x = real(v);
    if (x != std::floor(x) || std::abs(x) > 9.0e15) fail(v.at, "expected an integer");
    return static_cast<long>(x);
  }

  std::uint64_t count(const Value& v, long min = 0) const {
    const long x = integer(v);
    if (x < min) fail(v.at, "expected an integer >= " + std::to_string(min));
    return static_cast<std::uint64_t>(x);
  }

  // Seeds may exceed 2^53, so they are read from the literal text of the
  // number rather than through a double.
  std::uint64_t seed(const Value& v, const std::string_view raw) const {
    std::uint64_t x = 0;
    const auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), x);
    if (ec != std::errc{} || ptr != raw.data() + raw.size()) fail(v.at, "expected a non-negative integer seed");
    return x;
  }

  std::string string(const Value& v) const {
    if (v.kind != Value::Kind::string) fail(v.at, "expected a quoted string");
    return v.text;
  }

  bool boolean(const Value& v) const {
    if (v.kind != Value::Kind::boolean) fail(v.at, "expected true or false");
    return v.flag;
  }

  const std::vector<Value>& list(const Value& v, std::size_t size = 0, const char* what = "list") const {
    if (v.kind != Value::Kind::list) fail(v.at, std::string("expected a ") + what);
    if (size != 0 && v.items.size() != size) {
      fail(v.at, std::string("expected a ") + what + " of " + std::to_string(size) + " entries, found " +
                     std::to_string(v.items.size()));
    }
    return v.items;
  }

  std::vector<double> reals(const Value& v) const {
    std::vector<double> out;
    if (v.kind == Value::Kind::list) {
      for (const auto& x : v.items) out.push_back(real(x));
    } else {
      out.push_back(real(v));
    }
    if (out.empty()) fail(v.at, "expected at least one number");
    return out;
  }

  ComplexVector vector(const Value& v, std::size_t d) const {
    const auto& items = list(v, d, "vector");
    ComplexVector out(static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < d; ++i) {
      if (items[i].kind != Value::Kind::number) fail(items[i].at, "expected a number");
      out[static_cast<Eigen::Index>(i)] = items[i].number;
    }
    return out;
  }

  ComplexMatrix matrix(const Value& v, std::size_t d) const {
    const auto& rows = list(v, d, "matrix (list of rows)");
    ComplexMatrix out(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t r = 0; r < d; ++r) out.row(static_cast<Eigen::Index>(r)) = vector(rows[r], d).transpose();
    return out;
  }

 private:
  const Lexer& lexer_;
};

// Seed values keep their literal text; find it by position.
struct SeedText {
  std::map<std::pair<int, int>, std::string> raw;
  std::string_view at(Position p) const {
    const auto it = raw.find({p.line, p.column});
    return it == raw.end() ? std::string_view{} : std::string_view(it->second);
  }
};

SchedulerSpec read_scheduler(const Interpreter& in, const Block& b, const SeedText& seeds) {
  const std::string where = "scheduler '" + b.name + "'";
  const Interpreter::Fields f(in, b.entries, {"kind", "max_subintervals", "seed", "offset"}, where);
  SchedulerSpec s;
  const auto& kind = f.require("kind", b.at, where);
  try {
    s.kind = parse_scheduler_kind(in.string(kind));
  } catch (const std::invalid_argument&) {
    in.fail(kind.at, "unknown scheduler kind '" + kind.text +
                         "' (expected contiguous, paper-two-outcome or seeded-random)");
  }
  if (const auto* v = f.find("max_subintervals")) s.max_subintervals = static_cast<int>(in.count(*v, 1));
  if (const auto* v = f.find("seed")) s.seed = in.seed(*v, seeds.at(v->at));
  if (const auto* v = f.find("offset")) {
    s.offset = in.real(*v);
    if (s.offset < 0.0 || s.offset > 1.0) in.fail(v->at, "offset must lie in [0, 1]");
  }
  return s;
}

Csco read_csco(const Interpreter& in, const Block& b, std::size_t d) {
  const std::string where = "csco '" + b.name + "'";
  const Interpreter::Fields f(in, b.entries, {"basis", "eigenvalues", "labels", "scheduler"}, where);
  const ComplexMatrix basis = f.find("basis") ? in.matrix(*f.find("basis"), d)
                                              : ComplexMatrix::Identity(static_cast<Eigen::Index>(d),
                                                                        static_cast<Eigen::Index>(d));
  const auto& eig = in.list(f.require("eigenvalues", b.at, where), d, "eigenvalue list");
  std::vector<std::vector<double>> eigenvalues;
  for (const auto& e : eig) eigenvalues.push_back(in.reals(e));

  std::vector<Label> labels;
  if (const auto* v = f.find("labels")) {
    for (const auto& item : in.list(*v, d, "label list")) {
      Label label;
      if (item.kind == Value::Kind::list) {
        for (const auto& x : item.items) label.push_back(static_cast<int>(in.integer(x)));
      } else {
        label.push_back(static_cast<int>(in.integer(item)));
      }
      labels.push_back(std::move(label));
    }
  } else {
    for (std::size_t k = 0; k < d; ++k) labels.push_back({static_cast<int>(k)});
  }
  try {
    return Csco(b.name, basis, std::move(labels), std::move(eigenvalues));
  } catch (const std::invalid_argument& e) {
    in.fail(b.at, where + ": " + e.what());
  }
}

void check_steps(const Interpreter& in, const Value& v, const std::vector<MeasurementStep>& steps,
                 const Scenario& scenario) {
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const auto& s = steps[i];
    const auto& at = v.items[i].at;
    if (!std::any_of(scenario.cscos.begin(), scenario.cscos.end(), [&](const Csco& c) { return c.id() == s.csco_id; })) {
      in.fail(at, "unknown csco '" + s.csco_id + "'");
    }
    if (!(s.from >= 0.0) || !(s.from <= s.to)) in.fail(at, "measurement time range must satisfy 0 <= from <= to");
    if (i > 0) {
      const auto& prev = steps[i - 1];
      if (prev.to > s.from || (s.from == s.to && prev.to == s.from)) {
        in.fail(at, "measurement times must be strictly increasing");
      }
    }
  }
}

std::vector<MeasurementStep> read_steps(const Interpreter& in, const Value& v, const Scenario& scenario) {
  std::vector<MeasurementStep> steps;
  for (const auto& item : in.list(v, 0, "list of steps")) {
    const auto& parts = in.list(item, 0, "step [csco, from, to] or [csco, time]");
    if (parts.size() != 2 && parts.size() != 3) in.fail(item.at, "a step is [csco, from, to] or [csco, time]");
    MeasurementStep s;
    s.csco_id = in.string(parts[0]);
    s.from = in.real(parts[1]);
    s.to = parts.size() == 3 ? in.real(parts[2]) : s.from;
    steps.push_back(s);
  }
  if (steps.empty()) in.fail(v.at, "at least one step is required");
  check_steps(in, v, steps, scenario);
  return steps;
}

}  // namespace

ScenarioConfig parse_config(std::string_view text, const std::string& source, const std::filesystem::path& base_dir) {
  const Lexer lexer(text, source);
  auto tokens = Lexer(text, source).run();
  SeedText seeds;
  for (const auto& t : tokens) {
    if (t.kind == Tok::number) seeds.raw[{t.at.line, t.at.column}] = t.text;
  }
  std::vector<Entry> top;
  std::vector<Block> blocks;
  Parser(std::move(tokens), lexer).run(top, blocks);

  const Interpreter in(lexer);
  ScenarioConfig cfg;
  cfg.source = source;
  cfg.hash = fnv1a(text);

  const Interpreter::Fields f(in, top, {"dimension", "state", "hamiltonian", "seed", "output", "window_cap"},
                              "the top level");
  const auto& dim = f.require("dimension", Position{}, "the top level");
  cfg.dimension = in.count(dim, 1);
  const std::size_t d = cfg.dimension;
  if (const auto* v = f.find("seed")) cfg.seed = in.seed(*v, seeds.at(v->at));
  if (const auto* v = f.find("output")) cfg.output = in.string(*v);
  if (const auto* v = f.find("window_cap")) cfg.window_cap = static_cast<long>(in.count(*v, 1));

  const auto& state_value = f.require("state", Position{}, "the top level");
  std::optional<QuantumState> state;
  try {
    state = make_state(in.vector(state_value, d));
  } catch (const std::invalid_argument& e) {
    in.fail(state_value.at, std::string("state: ") + e.what());
  }
  std::optional<Hamiltonian> hamiltonian;
  if (const auto* v = f.find("hamiltonian")) {
    try {
      hamiltonian = Hamiltonian(in.matrix(*v, d));
    } catch (const std::invalid_argument& e) {
      in.fail(v->at, std::string("hamiltonian: ") + e.what());
    }
  } else {
    hamiltonian = Hamiltonian::zero(d);
  }

  Scenario scenario{*state, *hamiltonian, {}, {}};
  std::map<std::string, SchedulerSpec> named;
  std::set<std::string> names;
  for (const auto& b : blocks) {
    if (!names.insert(b.kind + ":" + b.name).second) in.fail(b.at, "duplicate " + b.kind + " '" + b.name + "'");
    if (b.kind == "scheduler") named[b.name] = read_scheduler(in, b, seeds);
  }
  for (const auto& b : blocks) {
    if (b.kind != "csco") continue;
    scenario.cscos.push_back(read_csco(in, b, d));
    for (const auto& e : b.entries) {
      if (e.key != "scheduler") continue;
      const auto name = in.string(e.value);
      const auto it = named.find(name);
      if (it == named.end()) in.fail(e.value.at, "unknown scheduler '" + name + "'");
      scenario.schedulers[b.name] = it->second;
    }
  }
  if (scenario.cscos.empty()) in.fail(Position{}, "at least one csco block is required");

  const auto has_csco = [&](const std::string& id) {
    return std::any_of(scenario.cscos.begin(), scenario.cscos.end(), [&](const Csco& c) { return c.id() == id; });
  };

  std::uint64_t index = 0;
  for (const auto& b : blocks) {
    if (b.kind != "experiment") continue;
    ExperimentConfig e;
    e.name = b.name;
    e.line = b.at.line;
    e.seed = mix_seed(cfg.seed, index++);
    const std::string where = "experiment '" + b.name + "'";

    const Entry* type_entry = nullptr;
    for (const auto& entry : b.entries) {
      if (entry.key == "type") type_entry = &entry;
    }
    if (!type_entry) in.fail(b.at, "missing key 'type' in " + where);
    const auto type = in.string(type_entry->value);
    std::set<std::string> allowed{"type", "seed"};
    if (type == "trajectory") {
      e.type = ExperimentType::trajectory;
      allowed.insert({"csco", "windows"});
    } else if (type == "born-sampling") {
      e.type = ExperimentType::born_sampling;
      allowed.insert({"csco", "window", "samples"});
    } else if (type == "offset-average") {
      e.type = ExperimentType::offset_average;
      allowed.insert({"csco", "alpha", "member"});
    } else if (type == "sub-tau") {
      e.type = ExperimentType::sub_tau;
      allowed.insert({"csco", "windows", "delta", "pairs"});
    } else if (type == "sequential-measurement") {
      e.type = ExperimentType::sequential_measurement;
      allowed.insert({"steps", "compare", "runs", "log"});
    } else if (type == "qgrid") {
      e.type = ExperimentType::qgrid;
      allowed.insert({"planck_step", "compton_wavelength", "origin", "center_cell", "window", "scheduler",
                      "wavefunction", "gaussian", "grid", "points_per_cell"});
    } else {
      in.fail(type_entry->value.at, "unknown experiment type '" + type + "'");
    }
    const Interpreter::Fields x(in, b.entries, allowed, where);
    if (const auto* v = x.find("seed")) e.seed = in.seed(*v, seeds.at(v->at));

    if (allowed.contains("csco")) {
      const auto& v = x.require("csco", b.at, where);
      e.csco = in.string(v);
      if (!has_csco(e.csco)) in.fail(v.at, "unknown csco '" + e.csco + "'");
    }
    if (const auto* v = x.find("windows")) {
      e.windows = static_cast<long>(in.count(*v, 1));
      if (e.windows > cfg.window_cap) in.fail(v->at, "windows exceeds window_cap " + std::to_string(cfg.window_cap));
    }
    if (const auto* v = x.find("window")) e.window = static_cast<long>(in.count(*v));
    if (const auto* v = x.find("samples")) e.samples = in.count(*v, 1);
    if (const auto* v = x.find("pairs")) e.pairs = in.count(*v, 1);
    if (const auto* v = x.find("runs")) e.runs = in.count(*v, 1);
    if (const auto* v = x.find("log")) e.log = in.boolean(*v);
    if (const auto* v = x.find("member")) e.member = static_cast<std::size_t>(in.count(*v));

    switch (e.type) {
      case ExperimentType::offset_average: {
        const auto& v = x.require("alpha", b.at, where);
        e.alphas = in.reals(v);
        for (double a : e.alphas) {
          if (a < 0.0) in.fail(v.at, "alpha must be non-negative");
        }
        const double top_alpha = *std::max_element(e.alphas.begin(), e.alphas.end());
        e.windows = static_cast<long>(std::ceil(top_alpha)) + 1;
        if (e.windows > cfg.window_cap) in.fail(v.at, "alpha exceeds window_cap");
        break;
      }
      case ExperimentType::sub_tau: {
        const auto& v = x.require("delta", b.at, where);
        e.deltas = in.reals(v);
        for (double delta : e.deltas) {
          if (delta < 0.0) in.fail(v.at, "delta must be non-negative");
          if (static_cast<double>(e.windows) - std::ceil(delta) < 1.0) {
            in.fail(v.at, "delta too large for " + std::to_string(e.windows) + " windows");
          }
        }
        break;
      }
      case ExperimentType::born_sampling:
        e.windows = e.window + 1;
        if (e.windows > cfg.window_cap) in.fail(b.at, "window exceeds window_cap");
        break;
      case ExperimentType::sequential_measurement:
        e.steps = read_steps(in, x.require("steps", b.at, where), scenario);
        if (const auto* v = x.find("compare")) e.compare = read_steps(in, *v, scenario);
        break;
      case ExperimentType::qgrid: {
        auto& q = e.qgrid;
        q.lattice.planck_step = in.real(x.require("planck_step", b.at, where));
        const auto& lambda = x.require("compton_wavelength", b.at, where);
        q.lattice.compton_wavelength = in.real(lambda);
        if (const auto* v = x.find("origin")) q.lattice.origin = in.real(*v);
        try {
          q.lattice.cells_per_window();
        } catch (const std::invalid_argument& err) {
          in.fail(lambda.at, err.what());
        }
        if (const auto* v = x.find("center_cell")) q.center_cell = in.integer(*v);
        if (const auto* v = x.find("window")) q.window = static_cast<long>(in.count(*v));
        if (const auto* v = x.find("points_per_cell")) q.points_per_cell = static_cast<long>(in.count(*v, 16));
        if (const auto* v = x.find("scheduler")) {
          const auto name = in.string(*v);
          const auto it = named.find(name);
          if (it == named.end()) in.fail(v->at, "unknown scheduler '" + name + "'");
          q.scheduler = it->second;
        }
        const auto* file = x.find("wavefunction");
        const auto* gauss = x.find("gaussian");
        if ((file == nullptr) == (gauss == nullptr)) {
          in.fail(b.at, where + ": give exactly one of 'wavefunction' and 'gaussian'");
        }
        if (file) {
          q.wavefunction_file = base_dir / in.string(*file);
        } else {
          const auto& g = in.list(*gauss, 2, "[center, width] pair");
          q.gaussian_center = in.real(g[0]);
          q.gaussian_width = in.real(g[1]);
          if (!(q.gaussian_width > 0.0)) in.fail(g[1].at, "gaussian width must be positive");
          const auto& grid = in.list(x.require("grid", b.at, where), 2, "[lo, hi] pair");
          q.grid_lo = in.real(grid[0]);
          q.grid_hi = in.real(grid[1]);
          if (!(q.grid_hi > q.grid_lo)) in.fail(grid[1].at, "grid needs lo < hi");
        }
        break;
      }
      case ExperimentType::trajectory:
        break;
    }
    cfg.experiments.push_back(std::move(e));
  }
  if (cfg.experiments.empty()) in.fail(Position{}, "at least one experiment block is required");
  cfg.scenario = std::make_shared<const Scenario>(std::move(scenario));
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read config " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path.filename().string(), path.parent_path());
}

}  // namespace ergodic::cli
