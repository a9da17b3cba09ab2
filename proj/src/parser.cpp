#include "lbk/parser.hpp"

#include <cctype>
#include <string>
#include <vector>

#include "lbk/errors.hpp"

namespace lbk {
namespace {

struct Lexer {
  std::string_view text;
  std::size_t pos = 0;
  int line = 1;
  int col = 1;

  void skip_ws() {
    while (pos < text.size()) {
      char c = text[pos];
      if (c == '\n') {
        ++line;
        col = 1;
        ++pos;
      } else if (c == ' ' || c == '\t' || c == '\r') {
        ++col;
        ++pos;
      } else {
        break;
      }
    }
  }

  bool eof() {
    skip_ws();
    return pos >= text.size();
  }

  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }

  char advance() {
    char c = text[pos++];
    ++col;
    return c;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, line, col);
  }

  bool accept(char c) {
    if (peek() == c) {
      advance();
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  std::string identifier() {
    skip_ws();
    if (pos >= text.size() || !(std::isalpha(static_cast<unsigned char>(text[pos])) ||
                                text[pos] == '_'))
      fail("expected identifier");
    std::string id;
    while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) ||
                                 text[pos] == '_'))
      id += advance();
    return id;
  }

  std::string digits() {
    skip_ws();
    if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
      fail("expected integer");
    std::string d;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
      d += advance();
    return d;
  }
};

class SeriesParser {
 public:
  SeriesParser(Context* ctx, int order, std::string_view text)
      : ctx_(ctx), order_(order), lex_{text} {}

  Series run() {
    Series out(ctx_, order_);
    bool negative = lex_.accept('-');
    parse_term(out, negative);
    while (!lex_.eof()) {
      char c = lex_.peek();
      if (c == '+' || c == '-') {
        lex_.advance();
        parse_term(out, c == '-');
      } else {
        lex_.fail("expected '+' or '-' between terms");
      }
    }
    return out;
  }

  TreeId tree() {
    TreeId t = parse_tree_node();
    if (!lex_.eof()) lex_.fail("trailing input after tree");
    return t;
  }

 private:
  // term := [rational "*"] forest
  void parse_term(Series& out, bool negative) {
    Rat coeff = 1;
    bool have_coeff = false;
    if (std::isdigit(static_cast<unsigned char>(lex_.peek()))) {
      std::string num = lex_.digits();
      std::string den = "1";
      if (lex_.accept('/')) den = lex_.digits();
      coeff = Rat(mpz_class(num), mpz_class(den));
      if (coeff.get_den() == 0) lex_.fail("zero denominator");
      coeff.canonicalize();
      have_coeff = true;
    }
    if (negative) coeff = -coeff;

    char c = lex_.peek();
    bool is_tree_start =
        std::isalpha(static_cast<unsigned char>(c)) || c == '_';
    if (have_coeff && !is_tree_start) {
      // Bare rational: only the unit forest spelling "c" with an explicit '*'
      // is not required; "2" alone is "2*1".
      if (lex_.accept('*')) {
        parse_forest(out, coeff);
        return;
      }
      out.add_term(ctx_->empty_forest(), coeff);
      return;
    }
    if (have_coeff) lex_.fail("expected '*' between coefficient and forest");
    parse_forest(out, coeff);
  }

  // forest := tree+ | "1"
  void parse_forest(Series& out, const Rat& coeff) {
    if (std::isdigit(static_cast<unsigned char>(lex_.peek()))) {
      std::string d = lex_.digits();
      if (d != "1") lex_.fail("expected forest or the unit '1'");
      out.add_term(ctx_->empty_forest(), coeff);
      return;
    }
    std::vector<TreeId> word;
    word.push_back(parse_tree_node());
    while (true) {
      char c = lex_.peek();
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
        word.push_back(parse_tree_node());
      else
        break;
    }
    ForestId f = ctx_->forest(word);
    if (ctx_->forest_grade(f) > order_)
      lex_.fail("forest grade " + std::to_string(ctx_->forest_grade(f)) +
                " above truncation order " + std::to_string(order_));
    out.add_term(f, coeff);
  }

  TreeId parse_tree_node() {
    int lin = lex_.line, c0 = lex_.col;
    std::string name = lex_.identifier();
    int color = ctx_->color_index(name);
    if (color < 0)
      throw ParseError("unknown color '" + name + "'", lin, c0);
    lex_.expect('[');
    std::vector<TreeId> kids;
    while (lex_.peek() != ']') kids.push_back(parse_tree_node());
    lex_.expect(']');
    return ctx_->tree(color, kids);
  }

  Context* ctx_;
  int order_;
  Lexer lex_;
};

}  // namespace

Series parse_series(Context* ctx, int order, std::string_view text) {
  return SeriesParser(ctx, order, text).run();
}

TreeId parse_tree(Context* ctx, std::string_view text) {
  return SeriesParser(ctx, ctx->max_order(), text).tree();
}

Rat parse_rat(std::string_view text) {
  Lexer lex{text};
  bool neg = lex.accept('-');
  std::string num = lex.digits();
  std::string den = "1";
  if (lex.accept('/')) den = lex.digits();
  if (!lex.eof()) lex.fail("trailing input after rational");
  Rat q{mpz_class(num), mpz_class(den)};
  q.canonicalize();
  return neg ? Rat(-q) : q;
}

}  // namespace lbk
