#include "driftscope/xml_reader.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "driftscope/errors.hpp"

namespace driftscope {

const std::string* XmlNode::attribute(std::string_view key) const {
  for (const auto& [k, v] : attributes)
    if (k == key) return &v;
  return nullptr;
}

const XmlNode* XmlNode::first_child(std::string_view tag) const {
  for (const auto& c : children)
    if (c.name == tag) return &c;
  return nullptr;
}

std::vector<const XmlNode*> XmlNode::children_named(std::string_view tag) const {
  std::vector<const XmlNode*> out;
  for (const auto& c : children)
    if (c.name == tag) out.push_back(&c);
  return out;
}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  XmlNode parse_document() {
    skip_misc();
    if (eof()) fail("document has no root element");
    XmlNode root = parse_element();
    skip_misc();
    if (!eof()) fail("content after root element");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what, pos_);
  }

  bool eof() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  bool starts_with(std::string_view s) const {
    return text_.compare(pos_, s.size(), s) == 0;
  }

  void expect(std::string_view s) {
    if (!starts_with(s)) fail("expected '" + std::string(s) + "'");
    pos_ += s.size();
  }

  void skip_ws() {
    while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }

  void skip_until(std::string_view terminator, const char* what) {
    const auto at = text_.find(terminator, pos_);
    if (at == std::string_view::npos) fail(std::string("unterminated ") + what);
    pos_ = at + terminator.size();
  }

  // Whitespace, comments, processing instructions and DOCTYPE between
  // top-level constructs.
  void skip_misc() {
    for (;;) {
      skip_ws();
      if (starts_with("<!--")) {
        pos_ += 4;
        skip_until("-->", "comment");
      } else if (starts_with("<?")) {
        pos_ += 2;
        skip_until("?>", "processing instruction");
      } else if (starts_with("<!DOCTYPE")) {
        skip_until(">", "DOCTYPE");
      } else {
        return;
      }
    }
  }

  static bool is_name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == ':' ||
           c == '_' || c == '-' || c == '.';
  }

  std::string parse_name() {
    const std::size_t begin = pos_;
    while (!eof() && is_name_char(peek())) ++pos_;
    if (pos_ == begin) fail("expected a name");
    return std::string(text_.substr(begin, pos_ - begin));
  }

  void append_entity(std::string& out) {
    const std::size_t begin = pos_;
    expect("&");
    const auto end = text_.find(';', pos_);
    if (end == std::string_view::npos || end - pos_ > 16) {
      pos_ = begin;
      fail("unterminated entity reference");
    }
    const std::string_view body = text_.substr(pos_, end - pos_);
    pos_ = end + 1;
    if (body == "lt") out.push_back('<');
    else if (body == "gt") out.push_back('>');
    else if (body == "amp") out.push_back('&');
    else if (body == "quot") out.push_back('"');
    else if (body == "apos") out.push_back('\'');
    else if (!body.empty() && body[0] == '#') {
      long code = 0;
      try {
        code = (body.size() > 1 && (body[1] == 'x' || body[1] == 'X'))
                   ? std::stol(std::string(body.substr(2)), nullptr, 16)
                   : std::stol(std::string(body.substr(1)), nullptr, 10);
      } catch (const std::exception&) {
        pos_ = begin;
        fail("bad character reference");
      }
      append_utf8(out, code);
    } else {
      pos_ = begin;
      fail("unknown entity '&" + std::string(body) + ";'");
    }
  }

  void append_utf8(std::string& out, long code) {
    if (code < 0 || code > 0x10FFFF) fail("character reference out of range");
    if (code < 0x80) {
      out.push_back(static_cast<char>(code));
    } else if (code < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (code >> 6)));
      out.push_back(static_cast<char>(0x80 | (code & 0x3F)));
    } else if (code < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (code >> 12)));
      out.push_back(static_cast<char>(0x80 | ((code >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (code & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (code >> 18)));
      out.push_back(static_cast<char>(0x80 | ((code >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((code >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (code & 0x3F)));
    }
  }

  std::string parse_attribute_value() {
    if (eof() || (peek() != '"' && peek() != '\''))
      fail("attribute value must be quoted");
    const char quote = peek();
    ++pos_;
    std::string out;
    while (!eof() && peek() != quote) {
      if (peek() == '&') append_entity(out);
      else if (peek() == '<') fail("'<' in attribute value");
      else out.push_back(text_[pos_++]);
    }
    if (eof()) fail("unterminated attribute value");
    ++pos_;
    return out;
  }

  XmlNode parse_element() {
    expect("<");
    XmlNode node;
    node.name = parse_name();

    for (;;) {
      skip_ws();
      if (eof()) fail("unterminated start tag <" + node.name + ">");
      if (peek() == '>') {
        ++pos_;
        break;
      }
      if (starts_with("/>")) {
        pos_ += 2;
        return node;
      }
      std::string key = parse_name();
      skip_ws();
      expect("=");
      skip_ws();
      node.attributes.emplace_back(std::move(key), parse_attribute_value());
    }

    // Content until the matching end tag.
    for (;;) {
      if (eof()) fail("missing </" + node.name + ">");
      if (starts_with("</")) {
        pos_ += 2;
        const std::size_t name_at = pos_;
        std::string name = parse_name();
        if (name != node.name) {
          pos_ = name_at;
          fail("mismatched end tag </" + name + ">, expected </" + node.name + ">");
        }
        skip_ws();
        expect(">");
        return node;
      }
      if (starts_with("<!--")) {
        pos_ += 4;
        skip_until("-->", "comment");
      } else if (starts_with("<![CDATA[")) {
        pos_ += 9;
        const auto end = text_.find("]]>", pos_);
        if (end == std::string_view::npos) fail("unterminated CDATA section");
        node.text.append(text_.substr(pos_, end - pos_));
        pos_ = end + 3;
      } else if (starts_with("<?")) {
        pos_ += 2;
        skip_until("?>", "processing instruction");
      } else if (peek() == '<') {
        node.children.push_back(parse_element());
      } else if (peek() == '&') {
        append_entity(node.text);
      } else {
        node.text.push_back(text_[pos_++]);
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

XmlNode parse_xml(std::string_view content) {
  return Parser(content).parse_document();
}

XmlNode parse_xml_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_xml(buffer.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace driftscope
