#include "turtleglyph/textio.hpp"

#include <cctype>
#include <utility>

namespace turtleglyph {

std::string Pattern::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (i) out += '/';
    out += segments[i] ? *segments[i] : "*";
  }
  return out;
}

std::string Query::to_string() const {
  std::string out = "P(" + target.to_string();
  if (condition) out += " | " + condition->to_string();
  return out + ")";
}

namespace {

bool is_name_char(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
         c == '_' || c == '~';
}

struct Line {
  int number = 0;       // 1-based
  int indent = 0;       // leading spaces
  std::string content;  // text after the indent, comments stripped
};

// Strips '# ...' comments outside of quotes and splits into lines. Lines that
// are blank after stripping are dropped.
std::vector<Line> logical_lines(const std::string& source) {
  std::vector<Line> lines;
  int line_no = 1;
  std::size_t pos = 0;
  while (pos <= source.size()) {
    std::size_t eol = source.find('\n', pos);
    std::string raw = source.substr(pos, eol == std::string::npos ? eol : eol - pos);
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();

    std::string stripped;
    bool in_string = false;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      char c = raw[i];
      if (c == '"' && (i == 0 || raw[i - 1] != '\\')) in_string = !in_string;
      if (c == '#' && !in_string) break;
      stripped += c;
    }
    while (!stripped.empty() && (stripped.back() == ' ' || stripped.back() == '\t'))
      stripped.pop_back();

    int indent = 0;
    std::size_t i = 0;
    while (i < stripped.size() && stripped[i] == ' ') {
      ++indent;
      ++i;
    }
    if (i < stripped.size() && stripped[i] == '\t')
      throw SyntaxError("tabs are not allowed in indentation", line_no,
                        static_cast<int>(i) + 1);
    if (i < stripped.size())
      lines.push_back(Line{line_no, indent, stripped.substr(i)});

    if (eol == std::string::npos) break;
    pos = eol + 1;
    ++line_no;
  }
  return lines;
}

// A probability literal: FRACTION "3/5", PERCENT "92%" / "5.52%", or
// DECIMAL "0.92" (a bare integer counts as a decimal without a point).
Prob parse_prob_token(const std::string& token, int line, int column) {
  if (token.empty()) throw SyntaxError("expected probability", line, column);

  auto digits_to_bigint = [&](std::string_view s, int at) -> BigInt {
    if (s.empty()) throw SyntaxError("expected digit", line, at);
    BigInt value = 0;
    for (char c : s) {
      if (c < '0' || c > '9')
        throw SyntaxError(std::string("unexpected character '") + c +
                              "' in probability",
                          line, at);
      value = value * 10 + (c - '0');
      ++at;
    }
    return value;
  };

  bool percent = token.back() == '%';
  std::string body = percent ? token.substr(0, token.size() - 1) : token;
  if (body.empty()) throw SyntaxError("expected digits before '%'", line, column);

  BigInt num, den;
  std::size_t slash = body.find('/');
  std::size_t dot = body.find('.');
  if (slash != std::string::npos) {
    if (dot != std::string::npos || percent)
      throw SyntaxError("fraction cannot combine with '.' or '%'", line, column);
    num = digits_to_bigint(std::string_view(body).substr(0, slash), column);
    den = digits_to_bigint(std::string_view(body).substr(slash + 1),
                           column + static_cast<int>(slash) + 1);
    if (den == 0) throw SyntaxError("zero denominator", line, column);
  } else if (dot != std::string::npos) {
    std::string_view int_part = std::string_view(body).substr(0, dot);
    std::string_view frac_part = std::string_view(body).substr(dot + 1);
    BigInt integral = digits_to_bigint(int_part, column);
    BigInt fraction = digits_to_bigint(frac_part, column + static_cast<int>(dot) + 1);
    den = 1;
    for (std::size_t i = 0; i < frac_part.size(); ++i) den *= 10;
    num = integral * den + fraction;
  } else {
    num = digits_to_bigint(body, column);
    den = 1;
  }
  if (percent) den *= 100;
  return Prob(BigRational(num, den));
}

// "name ':' prob" with optional blanks around the colon and before the value.
std::pair<EventName, Prob> parse_node_line(const Line& line) {
  const std::string& text = line.content;
  int base_col = line.indent + 1;
  std::size_t i = 0;
  while (i < text.size() && is_name_char(text[i])) ++i;
  if (i == 0)
    throw SyntaxError("expected event name", line.number, base_col);
  EventName name = text.substr(0, i);

  while (i < text.size() && text[i] == ' ') ++i;
  if (i >= text.size() || text[i] != ':')
    throw SyntaxError("expected ':' after event name", line.number,
                      base_col + static_cast<int>(i));
  ++i;
  while (i < text.size() && text[i] == ' ') ++i;
  if (i >= text.size())
    throw SyntaxError("expected probability", line.number, base_col + static_cast<int>(i));

  std::size_t value_start = i;
  while (i < text.size() && text[i] != ' ') ++i;
  std::string token = text.substr(value_start, i - value_start);
  while (i < text.size() && text[i] == ' ') ++i;
  if (i < text.size())
    throw SyntaxError("unexpected trailing text", line.number,
                      base_col + static_cast<int>(i));

  Prob prob = parse_prob_token(token, line.number, base_col + static_cast<int>(value_start));
  return {std::move(name), std::move(prob)};
}

std::string parse_header_title(const Line& line) {
  const std::string& text = line.content;
  if (line.indent != 0) throw SyntaxError("header must not be indented", line.number, 1);
  if (text.rfind("model", 0) != 0)
    throw SyntaxError("expected 'model' header", line.number, 1);
  std::size_t i = 5;
  if (i >= text.size() || text[i] != ' ')
    throw SyntaxError("expected space after 'model'", line.number, static_cast<int>(i) + 1);
  while (i < text.size() && text[i] == ' ') ++i;
  if (i >= text.size() || text[i] != '"')
    throw SyntaxError("expected '\"' to open the model title", line.number,
                      static_cast<int>(i) + 1);
  ++i;
  std::string title;
  bool closed = false;
  while (i < text.size()) {
    char c = text[i];
    if (c == '\\' && i + 1 < text.size() && (text[i + 1] == '"' || text[i + 1] == '\\')) {
      title += text[i + 1];
      i += 2;
      continue;
    }
    if (c == '"') {
      closed = true;
      ++i;
      break;
    }
    title += c;
    ++i;
  }
  if (!closed)
    throw SyntaxError("unterminated model title", line.number, static_cast<int>(i) + 1);
  while (i < text.size() && text[i] == ' ') ++i;
  if (i < text.size())
    throw SyntaxError("unexpected trailing text after title", line.number,
                      static_cast<int>(i) + 1);
  return title;
}

}  // namespace

EventTree parse_model(const std::string& source) {
  std::vector<Line> lines = logical_lines(source);
  if (lines.empty()) throw SyntaxError("expected 'model' header", 1, 1);

  EventTree tree;
  tree.title = parse_header_title(lines.front());

  // Indentation stack: stack[d] is the child list at depth d.
  std::vector<std::vector<EventNode>*> stack = {&tree.root_children};
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const Line& line = lines[li];
    if (line.indent % 2 != 0)
      throw SyntaxError("indentation must be a multiple of two spaces", line.number,
                        line.indent + 1);
    int level = line.indent / 2;
    if (level >= static_cast<int>(stack.size()))
      throw SyntaxError("indented too deep (no parent node)", line.number,
                        line.indent + 1);

    auto [name, prob] = parse_node_line(line);
    stack.resize(static_cast<std::size_t>(level) + 1);
    std::vector<EventNode>& siblings = *stack[static_cast<std::size_t>(level)];
    siblings.push_back(EventNode{std::move(name), std::move(prob), {}});
    stack.push_back(&siblings.back().children);
  }

  std::vector<Diagnostic> diagnostics = validate(tree);
  if (!diagnostics.empty()) throw ValidationError(std::move(diagnostics));
  return tree;
}

namespace {

struct QueryCursor {
  const std::string& text;
  std::size_t pos = 0;

  int column() const { return static_cast<int>(pos) + 1; }
  char peek() const { return pos < text.size() ? text[pos] : '\0'; }
  void skip_spaces() {
    while (pos < text.size() && text[pos] == ' ') ++pos;
  }
  [[noreturn]] void fail(const std::string& message) const {
    throw SyntaxError(message, 1, column());
  }
};

Pattern parse_pattern(QueryCursor& cur) {
  Pattern pattern;
  while (true) {
    cur.skip_spaces();
    if (cur.peek() == '*') {
      pattern.segments.push_back(std::nullopt);
      ++cur.pos;
    } else if (is_name_char(cur.peek())) {
      std::size_t start = cur.pos;
      while (is_name_char(cur.peek())) ++cur.pos;
      pattern.segments.emplace_back(cur.text.substr(start, cur.pos - start));
    } else {
      cur.fail(pattern.segments.empty() ? "empty pattern" : "expected pattern segment");
    }
    cur.skip_spaces();
    if (cur.peek() == '/') {
      ++cur.pos;
      continue;
    }
    break;
  }
  return pattern;
}

}  // namespace

Query parse_query(const std::string& text) {
  QueryCursor cur{text};
  cur.skip_spaces();
  if (text.compare(cur.pos, 2, "P(") != 0) cur.fail("expected 'P('");
  cur.pos += 2;

  Query query;
  query.text = text;
  query.target = parse_pattern(cur);
  cur.skip_spaces();
  if (cur.peek() == '|') {
    ++cur.pos;
    query.condition = parse_pattern(cur);
    cur.skip_spaces();
  }
  if (cur.peek() != ')') cur.fail("expected ')'");
  ++cur.pos;
  cur.skip_spaces();
  if (cur.pos != text.size()) cur.fail("unexpected trailing text after ')'");
  return query;
}

namespace {

void serialize_nodes(const std::vector<EventNode>& nodes, int level, std::string& out) {
  for (const EventNode& node : nodes) {
    out.append(static_cast<std::size_t>(level) * 2, ' ');
    out += node.name;
    out += ": ";
    out += node.cond_prob.canonical_fraction_str();
    out += '\n';
    serialize_nodes(node.children, level + 1, out);
  }
}

}  // namespace

std::string serialize_model(const EventTree& tree) {
  std::string out = "model \"";
  for (char c : tree.title) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += "\"\n";
  serialize_nodes(tree.root_children, 0, out);
  return out;
}

}  // namespace turtleglyph
