#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace driftscope {

// A parsed XML element.  Attribute order and child order follow the
// document.  text holds the concatenated character data of this element,
// excluding descendants.
struct XmlNode {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<XmlNode> children;
  std::string text;

  const std::string* attribute(std::string_view key) const;
  const XmlNode* first_child(std::string_view tag) const;
  std::vector<const XmlNode*> children_named(std::string_view tag) const;
};

// Parses a standalone XML document (prolog, comments, CDATA, the five
// predefined entities plus numeric references).  Throws ParseError with
// the byte offset of the first problem.
XmlNode parse_xml(std::string_view content);
XmlNode parse_xml_file(const std::string& path);

}  // namespace driftscope
