#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bac::markup {

using NodeId = std::size_t;

enum class NodeKind { Document, Element, Text };

struct Attribute {
    std::string name;
    std::string value;
};

struct Node {
    NodeKind kind = NodeKind::Element;
    std::string name;  // element name; lowercased in HTML mode
    std::vector<Attribute> attributes;
    std::string text;  // text nodes only, entities decoded
    std::vector<NodeId> children;
    std::optional<NodeId> parent;
    int line = 0;

    const std::string* attr(std::string_view key) const;
    bool has_attr(std::string_view key) const { return attr(key) != nullptr; }
};

/// Flat node arena; node 0 is the document node. Copyable, so a simulated
/// page can be reset by copying the pristine document.
class Document {
public:
    Document();

    NodeId root() const { return 0; }
    const Node& node(NodeId id) const { return nodes_.at(id); }
    std::size_t size() const { return nodes_.size(); }

    NodeId append(NodeId parent, Node n);

    /// First element child of the document node.
    std::optional<NodeId> document_element() const;

    /// All element descendants of `scope` in document order.
    std::vector<NodeId> descendants(NodeId scope) const;
    std::vector<NodeId> elements_named(std::string_view name, NodeId scope = 0) const;
    std::vector<NodeId> element_children(NodeId id) const;

    /// Concatenated text of the subtree.
    std::string text_content(NodeId id) const;

    /// "/mockup/controls/control" style path for diagnostics.
    std::string path(NodeId id) const;

    bool is_ancestor(NodeId ancestor, NodeId node) const;

private:
    std::vector<Node> nodes_;
};

/// Strict XML: mismatched or unclosed tags, bad attributes and stray text
/// outside the root raise ParseError with the element path and line.
/// Whitespace-only text nodes are dropped.
Document parse_xml(std::string_view source, const std::string& origin);

/// Lenient HTML: void elements, unquoted/valueless attributes, implied end
/// tags for p/li/option/tr/td/th, case-insensitive names, script/style skipped.
Document parse_html(std::string_view source, const std::string& origin);

std::string serialize(const Document& doc, NodeId id);

}  // namespace bac::markup
