#include "bac/markup.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "bac/error.hpp"
#include "bac/text.hpp"

namespace bac::markup {

namespace {

constexpr std::array<std::string_view, 14> kVoidElements{"area", "base", "br",   "col",  "embed", "hr",    "img",
                                                          "input", "link", "meta", "param", "source", "track", "wbr"};

struct NamedEntity {
    std::string_view name;
    std::string_view utf8;
};

constexpr std::array<NamedEntity, 24> kEntities{{
    {"lt", "<"},          {"gt", ">"},          {"amp", "&"},         {"quot", "\""},       {"apos", "'"},
    {"nbsp", " "},        {"copy", "\xC2\xA9"}, {"laquo", "\xC2\xAB"}, {"raquo", "\xC2\xBB"}, {"agrave", "\xC3\xA0"},
    {"acirc", "\xC3\xA2"}, {"ccedil", "\xC3\xA7"}, {"egrave", "\xC3\xA8"}, {"eacute", "\xC3\xA9"}, {"ecirc", "\xC3\xAA"},
    {"icirc", "\xC3\xAE"}, {"ocirc", "\xC3\xB4"}, {"ugrave", "\xC3\xB9"}, {"Eacute", "\xC3\x89"}, {"hellip", "\xE2\x80\xA6"},
    {"ndash", "\xE2\x80\x93"}, {"mdash", "\xE2\x80\x94"}, {"rsquo", "\xE2\x80\x99"}, {"euro", "\xE2\x82\xAC"},
}};

bool is_name_char(char c) {
    auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || c == '_' || c == '-' || c == ':' || c == '.' || u >= 0x80;
}

void append_utf8(std::string& out, unsigned long cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

class Parser {
public:
    Parser(std::string_view src, std::string origin, bool html) : src_(src), origin_(std::move(origin)), html_(html) {}

    Document run() {
        while (pos_ < src_.size()) {
            if (src_[pos_] == '<') {
                if (lookahead("<!--")) {
                    skip_past("-->", "unterminated comment");
                } else if (lookahead("<![CDATA[")) {
                    pos_ += 9;
                    auto end = src_.find("]]>", pos_);
                    if (end == std::string_view::npos) fail("unterminated CDATA section");
                    add_text(std::string(src_.substr(pos_, end - pos_)));
                    advance_to(end + 3);
                } else if (lookahead("<!") || lookahead("<?")) {
                    skip_past(lookahead("<?") ? "?>" : ">", "unterminated declaration");
                } else if (lookahead("</")) {
                    end_tag();
                } else if (pos_ + 1 < src_.size() && (std::isalpha(static_cast<unsigned char>(src_[pos_ + 1])) ||
                                                      src_[pos_ + 1] == '_')) {
                    start_tag();
                } else if (html_) {
                    add_text("<");
                    ++pos_;
                } else {
                    fail("invalid '<'");
                }
            } else {
                auto end = src_.find('<', pos_);
                if (end == std::string_view::npos) end = src_.size();
                auto raw = src_.substr(pos_, end - pos_);
                add_text(decode(raw));
                advance_to(end);
            }
        }
        if (!html_) {
            if (stack_.size() > 1) fail("unclosed element <" + doc_.node(stack_.back()).name + ">");
            if (!doc_.document_element()) fail("no root element");
        }
        return std::move(doc_);
    }

private:
    std::string_view src_;
    std::string origin_;
    bool html_;
    std::size_t pos_ = 0;
    int line_ = 1;
    Document doc_;
    std::vector<NodeId> stack_{0};

    [[noreturn]] void fail(const std::string& what) const {
        std::string where = stack_.size() > 1 ? doc_.path(stack_.back()) : "/";
        throw ParseError(origin_ + ":" + std::to_string(line_) + ": " + what + " at " + where);
    }

    bool lookahead(std::string_view s) const { return src_.substr(pos_, s.size()) == s; }

    void advance_to(std::size_t p) {
        line_ += static_cast<int>(std::count(src_.begin() + static_cast<std::ptrdiff_t>(pos_),
                                             src_.begin() + static_cast<std::ptrdiff_t>(std::min(p, src_.size())), '\n'));
        pos_ = p;
    }

    void skip_past(std::string_view terminator, const char* err) {
        auto end = src_.find(terminator, pos_ + 2);
        if (end == std::string_view::npos) {
            if (html_) {
                advance_to(src_.size());
                return;
            }
            fail(err);
        }
        advance_to(end + terminator.size());
    }

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) advance_to(pos_ + 1);
    }

    std::string read_name() {
        auto start = pos_;
        while (pos_ < src_.size() && is_name_char(src_[pos_])) ++pos_;
        std::string n(src_.substr(start, pos_ - start));
        if (html_) n = text::fold_case(n);
        return n;
    }

    std::string decode(std::string_view raw) {
        std::string out;
        out.reserve(raw.size());
        for (std::size_t i = 0; i < raw.size(); ++i) {
            if (raw[i] != '&') {
                out.push_back(raw[i]);
                continue;
            }
            auto semi = raw.find(';', i);
            if (semi == std::string_view::npos || semi - i > 10) {
                if (!html_) fail("bare '&'");
                out.push_back('&');
                continue;
            }
            auto ent = raw.substr(i + 1, semi - i - 1);
            bool ok = false;
            if (!ent.empty() && ent[0] == '#') {
                bool hex = ent.size() > 1 && (ent[1] == 'x' || ent[1] == 'X');
                try {
                    auto cp = std::stoul(std::string(ent.substr(hex ? 2 : 1)), nullptr, hex ? 16 : 10);
                    append_utf8(out, cp);
                    ok = true;
                } catch (const std::exception&) {
                }
            } else {
                for (const auto& e : kEntities) {
                    if (e.name == ent && (html_ || e.name.size() <= 4)) {
                        out += e.utf8;
                        ok = true;
                        break;
                    }
                }
            }
            if (!ok) {
                if (!html_) fail("unknown entity '&" + std::string(ent) + ";'");
                out.push_back('&');
                continue;
            }
            i = semi;
        }
        return out;
    }

    void add_text(std::string t) {
        if (t.empty()) return;
        bool blank = text::trim(t).empty();
        if (stack_.size() == 1) {
            if (!html_ && !blank) fail("text outside the root element");
            if (!html_) return;
        }
        if (blank && !html_) return;
        Node n;
        n.kind = NodeKind::Text;
        n.text = std::move(t);
        n.line = line_;
        doc_.append(stack_.back(), std::move(n));
    }

    const std::string& current_name() const { return doc_.node(stack_.back()).name; }

    void close_implied(const std::string& opening) {
        auto pop_while = [&](std::initializer_list<std::string_view> names) {
            while (stack_.size() > 1 && std::find(names.begin(), names.end(), current_name()) != names.end()) {
                stack_.pop_back();
            }
        };
        if (opening == "li") pop_while({"li"});
        else if (opening == "option") pop_while({"option"});
        else if (opening == "p") pop_while({"p"});
        else if (opening == "dt" || opening == "dd") pop_while({"dt", "dd"});
        else if (opening == "td" || opening == "th") pop_while({"td", "th"});
        else if (opening == "tr") pop_while({"td", "th", "tr"});
    }

    void start_tag() {
        int start_line = line_;
        ++pos_;
        Node n;
        n.kind = NodeKind::Element;
        n.name = read_name();
        n.line = start_line;
        bool self_closing = false;
        while (true) {
            skip_ws();
            if (pos_ >= src_.size()) fail("unterminated start tag <" + n.name + ">");
            if (src_[pos_] == '>') {
                ++pos_;
                break;
            }
            if (lookahead("/>")) {
                pos_ += 2;
                self_closing = true;
                break;
            }
            if (!is_name_char(src_[pos_])) {
                if (!html_) fail("bad attribute syntax in <" + n.name + ">");
                ++pos_;
                continue;
            }
            Attribute a;
            a.name = read_name();
            skip_ws();
            if (pos_ < src_.size() && src_[pos_] == '=') {
                ++pos_;
                skip_ws();
                if (pos_ < src_.size() && (src_[pos_] == '"' || src_[pos_] == '\'')) {
                    char q = src_[pos_];
                    auto end = src_.find(q, pos_ + 1);
                    if (end == std::string_view::npos) fail("unterminated attribute value in <" + n.name + ">");
                    a.value = decode(src_.substr(pos_ + 1, end - pos_ - 1));
                    advance_to(end + 1);
                } else {
                    if (!html_) fail("unquoted attribute value in <" + n.name + ">");
                    auto start = pos_;
                    while (pos_ < src_.size() && !std::isspace(static_cast<unsigned char>(src_[pos_])) &&
                           src_[pos_] != '>')
                        ++pos_;
                    a.value = decode(src_.substr(start, pos_ - start));
                }
            } else if (!html_) {
                fail("attribute '" + a.name + "' without value in <" + n.name + ">");
            }
            if (n.has_attr(a.name)) {
                if (!html_) fail("duplicate attribute '" + a.name + "' in <" + n.name + ">");
                continue;
            }
            n.attributes.push_back(std::move(a));
        }

        if (!html_ && stack_.size() == 1 && doc_.document_element()) fail("second root element <" + n.name + ">");
        if (html_) close_implied(n.name);

        auto name = n.name;
        auto id = doc_.append(stack_.back(), std::move(n));
        bool is_void = html_ && std::find(kVoidElements.begin(), kVoidElements.end(), name) != kVoidElements.end();
        if (self_closing || is_void) return;

        if (html_ && (name == "script" || name == "style")) {
            auto end = text::fold_case(src_.substr(pos_)).find("</" + name);
            advance_to(end == std::string::npos ? src_.size() : pos_ + end);
            return;  // the matching end tag is consumed by end_tag()
        }
        stack_.push_back(id);
    }

    void end_tag() {
        pos_ += 2;
        auto name = read_name();
        skip_ws();
        if (pos_ >= src_.size() || src_[pos_] != '>') {
            if (!html_) fail("malformed end tag </" + name + ">");
            auto gt = src_.find('>', pos_);
            advance_to(gt == std::string_view::npos ? src_.size() : gt);
        }
        if (pos_ < src_.size()) ++pos_;

        if (!html_) {
            if (stack_.size() == 1) fail("unexpected end tag </" + name + ">");
            if (current_name() != name) fail("end tag </" + name + "> does not match <" + current_name() + ">");
            stack_.pop_back();
            return;
        }
        for (std::size_t i = stack_.size(); i-- > 1;) {
            if (doc_.node(stack_[i]).name == name) {
                stack_.resize(i);
                return;
            }
        }
        // stray end tag: ignored
    }
};

void serialize_into(const Document& doc, NodeId id, std::string& out) {
    const auto& n = doc.node(id);
    auto escape = [](std::string_view s, bool attr) {
        std::string r;
        for (char c : s) {
            if (c == '<') r += "&lt;";
            else if (c == '>') r += "&gt;";
            else if (c == '&') r += "&amp;";
            else if (attr && c == '"') r += "&quot;";
            else r.push_back(c);
        }
        return r;
    };
    if (n.kind == NodeKind::Text) {
        out += escape(n.text, false);
        return;
    }
    if (n.kind == NodeKind::Element) {
        out += "<" + n.name;
        for (const auto& a : n.attributes) out += " " + a.name + "=\"" + escape(a.value, true) + "\"";
        out += ">";
    }
    for (auto c : n.children) serialize_into(doc, c, out);
    if (n.kind == NodeKind::Element &&
        std::find(kVoidElements.begin(), kVoidElements.end(), n.name) == kVoidElements.end()) {
        out += "</" + n.name + ">";
    }
}

}  // namespace

const std::string* Node::attr(std::string_view key) const {
    for (const auto& a : attributes) {
        if (a.name == key) return &a.value;
    }
    return nullptr;
}

Document::Document() {
    Node root;
    root.kind = NodeKind::Document;
    nodes_.push_back(std::move(root));
}

NodeId Document::append(NodeId parent, Node n) {
    n.parent = parent;
    nodes_.push_back(std::move(n));
    auto id = nodes_.size() - 1;
    nodes_[parent].children.push_back(id);
    return id;
}

std::optional<NodeId> Document::document_element() const {
    for (auto c : nodes_[0].children) {
        if (nodes_[c].kind == NodeKind::Element) return c;
    }
    return std::nullopt;
}

std::vector<NodeId> Document::descendants(NodeId scope) const {
    std::vector<NodeId> out;
    std::vector<NodeId> work(nodes_[scope].children.rbegin(), nodes_[scope].children.rend());
    while (!work.empty()) {
        auto id = work.back();
        work.pop_back();
        if (nodes_[id].kind != NodeKind::Element) continue;
        out.push_back(id);
        const auto& ch = nodes_[id].children;
        work.insert(work.end(), ch.rbegin(), ch.rend());
    }
    return out;
}

std::vector<NodeId> Document::elements_named(std::string_view name, NodeId scope) const {
    std::vector<NodeId> out;
    for (auto id : descendants(scope)) {
        if (nodes_[id].name == name) out.push_back(id);
    }
    return out;
}

std::vector<NodeId> Document::element_children(NodeId id) const {
    std::vector<NodeId> out;
    for (auto c : nodes_[id].children) {
        if (nodes_[c].kind == NodeKind::Element) out.push_back(c);
    }
    return out;
}

std::string Document::text_content(NodeId id) const {
    const auto& n = nodes_[id];
    if (n.kind == NodeKind::Text) return n.text;
    std::string out;
    for (auto c : n.children) out += text_content(c);
    return out;
}

std::string Document::path(NodeId id) const {
    std::vector<std::string> parts;
    for (std::optional<NodeId> cur = id; cur && *cur != 0; cur = nodes_[*cur].parent) {
        parts.push_back(nodes_[*cur].name);
    }
    std::string out;
    for (auto it = parts.rbegin(); it != parts.rend(); ++it) out += "/" + *it;
    return out.empty() ? "/" : out;
}

bool Document::is_ancestor(NodeId ancestor, NodeId node) const {
    for (auto cur = nodes_[node].parent; cur; cur = nodes_[*cur].parent) {
        if (*cur == ancestor) return true;
    }
    return false;
}

Document parse_xml(std::string_view source, const std::string& origin) {
    if (source.substr(0, 3) == "\xEF\xBB\xBF") source.remove_prefix(3);
    return Parser(source, origin, false).run();
}

Document parse_html(std::string_view source, const std::string& origin) {
    if (source.substr(0, 3) == "\xEF\xBB\xBF") source.remove_prefix(3);
    return Parser(source, origin, true).run();
}

std::string serialize(const Document& doc, NodeId id) {
    std::string out;
    serialize_into(doc, id, out);
    return out;
}

}  // namespace bac::markup
