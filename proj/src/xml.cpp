#include "workauth/xml.hpp"

#include <expat.h>

#include <memory>

namespace workauth::xml {

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : Error("PARSE_ERROR",
            "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

const std::string* Element::attr(std::string_view key) const {
  for (const auto& [k, v] : attrs)
    if (k == key) return &v;
  return nullptr;
}

std::vector<const Element*> Element::child_elements() const {
  std::vector<const Element*> out;
  for (const auto& child : children)
    if (auto e = child.element()) out.push_back(e);
  return out;
}

std::vector<const Element*> Element::children_named(std::string_view child_name) const {
  std::vector<const Element*> out;
  for (const auto& child : children)
    if (auto e = child.element(); e && e->name == child_name) out.push_back(e);
  return out;
}

const Element* Element::first_child(std::string_view child_name) const {
  for (const auto& child : children)
    if (auto e = child.element(); e && e->name == child_name) return e;
  return nullptr;
}

std::string Element::text() const {
  std::string out;
  for (const auto& child : children) {
    if (auto t = child.text()) out += *t;
    else out += child.element()->text();
  }
  return out;
}

bool operator==(const Element& a, const Element& b) {
  return a.name == b.name && a.attrs == b.attrs && a.children == b.children;
}

namespace {

struct Builder {
  std::vector<Element> stack;
  std::optional<Element> root;
  XML_Parser parser = nullptr;
};

void on_start(void* data, const XML_Char* name, const XML_Char** atts) {
  auto* b = static_cast<Builder*>(data);
  Element e;
  e.name = name;
  e.line = XML_GetCurrentLineNumber(b->parser);
  for (int i = 0; atts[i]; i += 2) e.attrs.emplace_back(atts[i], atts[i + 1]);
  b->stack.push_back(std::move(e));
}

void on_end(void* data, const XML_Char*) {
  auto* b = static_cast<Builder*>(data);
  Element done = std::move(b->stack.back());
  b->stack.pop_back();
  if (b->stack.empty()) b->root = std::move(done);
  else b->stack.back().children.push_back(Node{std::move(done)});
}

void on_text(void* data, const XML_Char* s, int len) {
  auto* b = static_cast<Builder*>(data);
  if (b->stack.empty()) return;
  auto& children = b->stack.back().children;
  if (!children.empty())
    if (auto* last = std::get_if<std::string>(&children.back().value)) {
      last->append(s, static_cast<std::size_t>(len));
      return;
    }
  children.push_back(Node{std::string(s, static_cast<std::size_t>(len))});
}

struct ParserDeleter {
  void operator()(XML_Parser p) const { XML_ParserFree(p); }
};

}  // namespace

Element parse(std::string_view document) {
  std::unique_ptr<std::remove_pointer_t<XML_Parser>, ParserDeleter> parser(XML_ParserCreate("UTF-8"));
  Builder builder;
  builder.parser = parser.get();
  XML_SetUserData(parser.get(), &builder);
  XML_SetElementHandler(parser.get(), on_start, on_end);
  XML_SetCharacterDataHandler(parser.get(), on_text);
  XML_SetParamEntityParsing(parser.get(), XML_PARAM_ENTITY_PARSING_NEVER);

  if (XML_Parse(parser.get(), document.data(), static_cast<int>(document.size()), XML_TRUE) ==
      XML_STATUS_ERROR) {
    throw ParseError(XML_GetCurrentLineNumber(parser.get()),
                     XML_GetCurrentColumnNumber(parser.get()) + 1,
                     XML_ErrorString(XML_GetErrorCode(parser.get())));
  }
  if (!builder.root) throw ParseError(1, 1, "no root element");
  return std::move(*builder.root);
}

std::string escape_text(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '\r': out += "&#13;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string escape_attr(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\t': out += "&#9;"; break;
      case '\n': out += "&#10;"; break;
      case '\r': out += "&#13;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string to_string(const Element& element) {
  std::string out = Writer::start_tag(element.name, element.attrs, element.children.empty());
  if (element.children.empty()) return out;
  for (const auto& child : element.children) {
    if (auto t = child.text()) out += escape_text(*t);
    else out += to_string(*child.element());
  }
  out += "</" + element.name + ">";
  return out;
}

void strip_whitespace_nodes(Element& element) {
  std::erase_if(element.children, [](const Node& n) {
    auto t = n.text();
    return t && t->find_first_not_of(" \t\r\n") == std::string::npos;
  });
  for (auto& child : element.children)
    if (auto* e = std::get_if<Element>(&child.value)) strip_whitespace_nodes(*e);
}

Writer::Writer() = default;

std::string Writer::start_tag(std::string_view name, const Attrs& attrs, bool self_closing) {
  std::string out = "<";
  out += name;
  for (const auto& [k, v] : attrs) {
    out += ' ';
    out += k;
    out += "=\"";
    out += escape_attr(v);
    out += '"';
  }
  out += self_closing ? "/>" : ">";
  return out;
}

void Writer::indent() { out_.append(stack_.size() * 2, ' '); }

void Writer::open(std::string_view name, const Attrs& attrs) {
  indent();
  out_ += start_tag(name, attrs, false);
  out_ += '\n';
  stack_.emplace_back(name);
}

void Writer::close() {
  auto name = std::move(stack_.back());
  stack_.pop_back();
  indent();
  out_ += "</" + name + ">\n";
}

void Writer::leaf(std::string_view name, const Attrs& attrs, std::string_view text) {
  if (text.empty()) return empty(name, attrs);
  indent();
  out_ += start_tag(name, attrs, false);
  out_ += escape_text(text);
  out_ += "</";
  out_ += name;
  out_ += ">\n";
}

void Writer::empty(std::string_view name, const Attrs& attrs) {
  indent();
  out_ += start_tag(name, attrs, true);
  out_ += '\n';
}

void Writer::raw_line(std::string_view markup) {
  indent();
  out_ += markup;
  out_ += '\n';
}

}  // namespace workauth::xml
