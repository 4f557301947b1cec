#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "workauth/error.hpp"

// Minimal DOM over expat. Names are kept as written (no namespace
// processing); xml:id and xml:lang are ordinary attribute names here.
namespace workauth::xml {

struct Node;

struct Element {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attrs;
  std::vector<Node> children;
  std::size_t line = 0;

  const std::string* attr(std::string_view key) const;
  std::vector<const Element*> child_elements() const;
  std::vector<const Element*> children_named(std::string_view child_name) const;
  const Element* first_child(std::string_view child_name) const;
  /// Concatenated character data of all descendants.
  std::string text() const;

  /// Line numbers are bookkeeping only and do not take part in equality.
  friend bool operator==(const Element& a, const Element& b);
};

struct Node {
  std::variant<Element, std::string> value;

  const Element* element() const { return std::get_if<Element>(&value); }
  const std::string* text() const { return std::get_if<std::string>(&value); }

  friend bool operator==(const Node&, const Node&) = default;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message);
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Parses a complete document and returns its root element. Comments and
/// processing instructions are dropped. Throws ParseError with the position
/// expat reports.
Element parse(std::string_view document);

std::string escape_text(std::string_view text);
std::string escape_attr(std::string_view text);

/// Single-line rendering of an element subtree with attributes in stored order.
std::string to_string(const Element& element);

/// Removes whitespace-only text nodes throughout the subtree.
void strip_whitespace_nodes(Element& element);

/// Indenting writer that produces the canonical layout used for records.
class Writer {
 public:
  using Attrs = std::vector<std::pair<std::string, std::string>>;

  Writer();

  void open(std::string_view name, const Attrs& attrs = {});
  void close();
  /// <name attrs>escaped text</name> on one line; omits empty text as <name/>.
  void leaf(std::string_view name, const Attrs& attrs, std::string_view text);
  void empty(std::string_view name, const Attrs& attrs = {});
  /// A full line of pre-rendered markup at the current indentation.
  void raw_line(std::string_view markup);

  const std::string& str() const { return out_; }

  static std::string start_tag(std::string_view name, const Attrs& attrs, bool self_closing);

 private:
  void indent();

  std::string out_;
  std::vector<std::string> stack_;
};

}  // namespace workauth::xml
