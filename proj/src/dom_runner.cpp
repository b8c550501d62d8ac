#include <algorithm>
#include <array>
#include <cctype>
#include <filesystem>

#include <json.hpp>

#include "bac/guicheck.hpp"
#include "bac/text.hpp"

namespace bac {

namespace fs = std::filesystem;

namespace {

constexpr std::array<std::string_view, 16> kKinds{"TextField", "Radio", "CheckBox", "Select",   "Button", "Link",
                                                  "Calendar",  "AutoComplete", "Grid", "Menu", "MenuItem",
                                                  "Text",      "Screen", "Dialog", "Tree", "Element"};

constexpr std::array<std::string_view, 18> kInline{"a",    "abbr", "b",  "code", "em",     "i",   "label", "mark", "q",
                                                   "s",    "small", "span", "strong", "sub", "sup", "u",    "time", "font"};

struct AttrTest {
    std::string name;
    std::optional<std::string> value;
};

struct Compound {
    std::string tag;
    std::string id;
    std::vector<std::string> classes;
    std::vector<AttrTest> attrs;
};

struct Part {
    Compound compound;
    char combinator = ' ';  // relation to the previous part
};

[[noreturn]] void bad_selector(std::string_view sel, const std::string& why) {
    throw ConfigError("invalid CSS selector '" + std::string(sel) + "': " + why);
}

bool ident_char(char c) {
    auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || c == '-' || c == '_' || u >= 0x80;
}

std::vector<Part> parse_selector(std::string_view sel) {
    std::vector<Part> parts;
    std::size_t i = 0;
    char pending = ' ';
    auto read_ident = [&]() {
        auto start = i;
        while (i < sel.size() && ident_char(sel[i])) ++i;
        if (start == i) bad_selector(sel, "identifier expected at offset " + std::to_string(start));
        return std::string(sel.substr(start, i - start));
    };
    while (i < sel.size()) {
        if (std::isspace(static_cast<unsigned char>(sel[i]))) {
            ++i;
            continue;
        }
        if (sel[i] == '>') {
            if (parts.empty()) bad_selector(sel, "leading '>'");
            pending = '>';
            ++i;
            continue;
        }
        Compound c;
        bool any = false;
        while (i < sel.size() && !std::isspace(static_cast<unsigned char>(sel[i])) && sel[i] != '>') {
            any = true;
            if (sel[i] == '#') {
                ++i;
                c.id = read_ident();
            } else if (sel[i] == '.') {
                ++i;
                c.classes.push_back(read_ident());
            } else if (sel[i] == '[') {
                ++i;
                AttrTest t;
                t.name = text::fold_case(read_ident());
                if (i < sel.size() && sel[i] == '=') {
                    ++i;
                    if (i < sel.size() && (sel[i] == '"' || sel[i] == '\'')) {
                        char q = sel[i];
                        auto end = sel.find(q, i + 1);
                        if (end == std::string_view::npos) bad_selector(sel, "unterminated quote");
                        t.value = std::string(sel.substr(i + 1, end - i - 1));
                        i = end + 1;
                    } else {
                        auto end = sel.find(']', i);
                        if (end == std::string_view::npos) bad_selector(sel, "missing ']'");
                        t.value = text::trim(sel.substr(i, end - i));
                        i = end;
                    }
                }
                if (i >= sel.size() || sel[i] != ']') bad_selector(sel, "missing ']'");
                ++i;
                c.attrs.push_back(std::move(t));
            } else if (sel[i] == '*') {
                ++i;
            } else if (ident_char(sel[i])) {
                c.tag = text::fold_case(read_ident());
            } else {
                bad_selector(sel, std::string("unsupported character '") + sel[i] + "'");
            }
        }
        if (!any) bad_selector(sel, "empty compound");
        parts.push_back(Part{std::move(c), pending});
        pending = ' ';
    }
    if (parts.empty()) bad_selector(sel, "empty selector");
    if (pending == '>') bad_selector(sel, "trailing '>'");
    return parts;
}

bool matches_compound(const markup::Document& doc, markup::NodeId id, const Compound& c) {
    const auto& n = doc.node(id);
    if (n.kind != markup::NodeKind::Element) return false;
    if (!c.tag.empty() && n.name != c.tag) return false;
    if (!c.id.empty()) {
        const auto* v = n.attr("id");
        if (!v || *v != c.id) return false;
    }
    if (!c.classes.empty()) {
        const auto* v = n.attr("class");
        if (!v) return false;
        std::vector<std::string> have;
        for (const auto& tok : text::split(text::normalize_ws(*v), ' ')) have.push_back(tok);
        for (const auto& want : c.classes) {
            if (std::find(have.begin(), have.end(), want) == have.end()) return false;
        }
    }
    for (const auto& t : c.attrs) {
        const auto* v = n.attr(t.name);
        if (!v) return false;
        if (t.value && *v != *t.value) return false;
    }
    return true;
}

bool matches(const markup::Document& doc, markup::NodeId id, const std::vector<Part>& parts, std::size_t idx) {
    if (!matches_compound(doc, id, parts[idx].compound)) return false;
    if (idx == 0) return true;
    auto parent = doc.node(id).parent;
    if (parts[idx].combinator == '>') return parent && matches(doc, *parent, parts, idx - 1);
    for (auto cur = parent; cur; cur = doc.node(*cur).parent) {
        if (matches(doc, *cur, parts, idx - 1)) return true;
    }
    return false;
}

std::vector<std::string> split_groups(std::string_view sel) {
    std::vector<std::string> out;
    std::string cur;
    char quote = 0;
    int bracket = 0;
    for (char c : sel) {
        if (quote) {
            if (c == quote) quote = 0;
        } else if (c == '"' || c == '\'') {
            quote = c;
        } else if (c == '[') {
            ++bracket;
        } else if (c == ']') {
            --bracket;
        } else if (c == ',' && bracket == 0) {
            out.push_back(cur);
            cur.clear();
            continue;
        }
        cur.push_back(c);
    }
    out.push_back(cur);
    return out;
}

std::string attr_or(const markup::Node& n, std::string_view name, std::string fallback = {}) {
    const auto* v = n.attr(name);
    return v ? *v : fallback;
}

std::string style_of(const markup::Node& n) {
    std::string s;
    for (char c : text::fold_case(attr_or(n, "style"))) {
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    }
    return s;
}

std::string strip_fragment(std::string_view href) {
    auto cut = href.find_first_of("#?");
    return text::trim(href.substr(0, cut));
}

std::string truncate_utf8(std::string s, std::size_t max) {
    if (s.size() <= max) return s;
    s.resize(max);
    while (!s.empty() && (static_cast<unsigned char>(s.back()) & 0xC0) == 0x80) s.pop_back();
    if (!s.empty() && (static_cast<unsigned char>(s.back()) & 0x80)) s.pop_back();
    return s + "...";
}

}  // namespace

// ---- page map --------------------------------------------------------------

const ScreenEntry* PageMap::screen(std::string_view name) const {
    for (const auto& s : screens) {
        if (text::same_name(s.name, name)) return &s;
    }
    return nullptr;
}

const ElementMapEntry* PageMap::element(std::string_view name, std::string_view screen_name) const {
    for (const auto& e : elements) {
        if (text::same_name(e.name, name) && text::same_name(e.screen, screen_name)) return &e;
    }
    return nullptr;
}

std::vector<std::string> PageMap::element_names(std::string_view screen_name) const {
    std::vector<std::string> out;
    for (const auto& e : elements) {
        if (text::same_name(e.screen, screen_name)) out.push_back(e.name);
    }
    return out;
}

PageMap parse_page_map(std::string_view json_text, const std::string& origin, const std::string& base_dir) {
    using json = nlohmann::json;
    if (text::trim(json_text).empty()) throw ConfigError(origin + ": no screens");
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(origin + ": " + e.what());
    }
    auto str = [&](const json& j, const char* key, const std::string& where) {
        if (!j.is_object() || !j.contains(key) || !j.at(key).is_string() ||
            text::trim(j.at(key).get<std::string>()).empty()) {
            throw ConfigError(origin + ": " + where + " needs a non-empty string '" + key + "'");
        }
        return text::trim(j.at(key).get<std::string>());
    };

    PageMap map;
    map.source_path = origin;
    if (!root.is_object() || !root.contains("screens") || !root.at("screens").is_array() ||
        root.at("screens").empty()) {
        throw ConfigError(origin + ": no screens");
    }
    for (const auto& s : root.at("screens")) {
        ScreenEntry e;
        e.name = str(s, "name", "screen");
        auto doc = str(s, "document", "screen \"" + e.name + "\"");
        fs::path p(doc);
        e.document_path = p.is_absolute() || base_dir.empty() ? p.string() : (fs::path(base_dir) / p).string();
        if (map.screen(e.name)) throw ConfigError(origin + ": duplicate screen \"" + e.name + "\"");
        map.screens.push_back(std::move(e));
    }
    if (root.contains("elements")) {
        if (!root.at("elements").is_array()) throw ConfigError(origin + ": 'elements' must be an array");
        for (const auto& j : root.at("elements")) {
            ElementMapEntry e;
            e.name = str(j, "name", "element");
            auto where = "element \"" + e.name + "\"";
            e.screen = str(j, "screen", where);
            auto type = str(j, "locatorType", where);
            if (type == "Id") e.locator_type = LocatorType::Id;
            else if (type == "Css") e.locator_type = LocatorType::Css;
            else throw ConfigError(origin + ": " + where + ": locatorType must be Id or Css");
            e.locator = str(j, "locator", where);
            if (e.locator_type == LocatorType::Css) parse_selector(e.locator);
            if (j.contains("kind")) {
                auto kind = str(j, "kind", where);
                if (!is_known_kind(kind)) throw ConfigError(origin + ": " + where + ": unknown kind " + kind);
                e.declared_kind = kind;
            }
            if (!map.screen(e.screen)) throw ConfigError(origin + ": " + where + " refers to unknown screen \"" + e.screen + "\"");
            if (map.element(e.name, e.screen)) {
                throw ConfigError(origin + ": duplicate element \"" + e.name + "\" on screen \"" + e.screen + "\"");
            }
            map.elements.push_back(std::move(e));
        }
    }
    return map;
}

PageMap load_page_map(const std::string& path) {
    std::string source;
    try {
        source = read_file(path);
    } catch (const IoError& e) {
        throw ConfigError(e.what());
    }
    auto map = parse_page_map(source, path, fs::path(path).parent_path().string());
    for (const auto& s : map.screens) {
        if (!fs::is_regular_file(s.document_path)) {
            throw ConfigError(path + ": document for screen \"" + s.name + "\" not found: " + s.document_path);
        }
    }
    return map;
}

// ---- kinds and selectors ---------------------------------------------------

bool is_known_kind(std::string_view kind) {
    return std::find(kKinds.begin(), kKinds.end(), kind) != kKinds.end();
}

std::string infer_kind(const markup::Document& doc, markup::NodeId id) {
    const auto& n = doc.node(id);
    auto role = text::fold_case(attr_or(n, "role"));
    if (role == "menu" || role == "menubar") return "Menu";
    if (role == "menuitem") return "MenuItem";
    if (role == "tree") return "Tree";
    if (role == "dialog" || role == "alertdialog") return "Dialog";
    if (n.name == "input") {
        auto type = text::fold_case(text::trim(attr_or(n, "type", "text")));
        if (type == "radio") return "Radio";
        if (type == "checkbox") return "CheckBox";
        if (type == "submit" || type == "button" || type == "reset" || type == "image") return "Button";
        if (type == "date" || type == "datetime-local" || type == "month" || type == "week") return "Calendar";
        if (type == "hidden") return "Element";
        if (n.has_attr("list")) return "AutoComplete";
        return "TextField";
    }
    if (n.name == "textarea") return "TextField";
    if (n.name == "select") return "Select";
    if (n.name == "button") return "Button";
    if (n.name == "a" && n.has_attr("href")) return "Link";
    if (n.name == "table") return "Grid";
    if (n.name == "nav" || n.name == "menu") return "Menu";
    if (n.name == "dialog") return "Dialog";
    return "Element";
}

std::vector<markup::NodeId> select_css(const markup::Document& doc, std::string_view selector, markup::NodeId scope) {
    std::vector<std::vector<Part>> groups;
    for (const auto& g : split_groups(selector)) groups.push_back(parse_selector(g));
    std::vector<markup::NodeId> out;
    for (auto id : doc.descendants(scope)) {
        for (const auto& parts : groups) {
            if (matches(doc, id, parts, parts.size() - 1)) {
                out.push_back(id);
                break;
            }
        }
    }
    return out;
}

// ---- static DOM runner -----------------------------------------------------

StaticDomRunner::StaticDomRunner(const PageMap& map) : map_(map) {}

void StaticDomRunner::reset() { state_ = DomState{}; }

bool StaticDomRunner::navigate(const std::string& screen) {
    const auto* s = map_.screen(screen);
    if (!s) return false;
    auto it = pristine_.find(s->name);
    if (it == pristine_.end()) {
        it = pristine_.emplace(s->name, markup::parse_html(read_file(s->document_path), s->document_path)).first;
    }
    state_.current_screen = s->name;
    state_.document = it->second;
    state_.field_values.clear();
    state_.checked.clear();
    state_.selected.clear();
    state_.hidden.clear();
    return true;
}

std::vector<NodeRef> StaticDomRunner::locate(const ElementMapEntry& entry) {
    if (!state_.current_screen) return {};
    if (entry.locator_type == LocatorType::Css) return select_css(doc(), entry.locator);
    std::vector<NodeRef> out;
    for (auto id : doc().descendants(0)) {
        const auto* v = doc().node(id).attr("id");
        if (v && *v == entry.locator) out.push_back(id);
    }
    return out;
}

std::vector<NodeRef> StaticDomRunner::find(std::string_view css, std::optional<NodeRef> scope) {
    if (!state_.current_screen) return {};
    return select_css(doc(), css, scope.value_or(0));
}

bool StaticDomRunner::is_visible(NodeRef node) const {
    for (std::optional<NodeRef> cur = node; cur && *cur != 0; cur = doc().node(*cur).parent) {
        const auto& n = doc().node(*cur);
        auto ov = state_.hidden.find(*cur);
        if (ov != state_.hidden.end()) {
            if (ov->second) return false;
            continue;
        }
        if (n.has_attr("hidden")) return false;
        auto style = style_of(n);
        if (style.find("display:none") != std::string::npos || style.find("visibility:hidden") != std::string::npos)
            return false;
        if (n.name == "input" && text::fold_case(attr_or(n, "type")) == "hidden") return false;
        if (n.name == "dialog" && !n.has_attr("open")) return false;
    }
    return true;
}

std::vector<NodeRef> StaticDomRunner::ancestors(NodeRef node) {
    std::vector<NodeRef> out;
    for (auto cur = doc().node(node).parent; cur && *cur != 0; cur = doc().node(*cur).parent) out.push_back(*cur);
    return out;
}

NodeInfo StaticDomRunner::describe(NodeRef node, const std::optional<std::string>& declared_kind) {
    const auto& n = doc().node(node);
    NodeInfo info;
    info.tag = n.name;
    info.inferred_kind = infer_kind(doc(), node);
    info.kind = declared_kind.value_or(info.inferred_kind);
    info.visible = is_visible(node);
    info.disabled = n.has_attr("disabled") || text::fold_case(attr_or(n, "aria-disabled")) == "true";
    for (auto a : ancestors(node)) {
        if (doc().node(a).name == "fieldset" && doc().node(a).has_attr("disabled")) info.disabled = true;
    }
    info.readonly = n.has_attr("readonly");
    if (const auto* ml = n.attr("maxlength")) {
        try {
            info.maxlength = static_cast<std::size_t>(std::stoul(*ml));
        } catch (const std::exception&) {
        }
    }
    info.text = visible_text(node);
    return info;
}

std::string StaticDomRunner::read(NodeRef node) {
    const auto& n = doc().node(node);
    if (n.name == "input" || n.name == "textarea") {
        auto it = state_.field_values.find(node);
        if (it != state_.field_values.end()) return it->second;
        return n.name == "input" ? attr_or(n, "value") : doc().text_content(node);
    }
    if (n.name == "select") {
        auto it = state_.selected.find(node);
        if (it != state_.selected.end()) return it->second;
        auto opts = select_css(doc(), "option", node);
        for (auto o : opts) {
            if (doc().node(o).has_attr("selected")) return text::normalize_ws(doc().text_content(o));
        }
        return opts.empty() ? std::string() : text::normalize_ws(doc().text_content(opts.front()));
    }
    return visible_text(node);
}

void StaticDomRunner::write(NodeRef node, const std::string& value) { state_.field_values[node] = value; }

std::optional<std::string> StaticDomRunner::screen_for_target(std::string_view href) const {
    auto target = strip_fragment(href);
    if (target.empty()) return std::nullopt;
    auto base = fs::path(target).filename().string();
    for (const auto& s : map_.screens) {
        if (fs::path(s.document_path).filename().string() == base || text::same_name(s.name, target)) return s.name;
    }
    return std::nullopt;
}

namespace {

bool submits(const markup::Node& n) {
    auto type = text::fold_case(attr_or(n, "type"));
    if (n.name == "button") return type.empty() || type == "submit";
    return n.name == "input" && (type == "submit" || type == "image");
}

}  // namespace

ClickOutcome StaticDomRunner::click(NodeRef node) {
    ClickOutcome out;
    const auto& n = doc().node(node);
    auto kind = infer_kind(doc(), node);
    if (kind == "Radio") {
        set_checked(node, true);
        return out;
    }
    if (kind == "CheckBox") {
        set_checked(node, !checked(node));
        return out;
    }
    std::string opens = attr_or(n, "data-opens");
    std::string closes = attr_or(n, "data-closes");
    std::optional<std::string> target;
    if (n.name == "a" && n.has_attr("href")) {
        target = attr_or(n, "href");
    } else if (kind == "Button" && submits(n)) {
        if (n.has_attr("formaction")) target = attr_or(n, "formaction");
        for (auto a : ancestors(node)) {
            if (!target && doc().node(a).name == "form" && doc().node(a).has_attr("action")) {
                target = attr_or(doc().node(a), "action");
            }
        }
    }
    if (!opens.empty()) {
        for (auto d : select_css(doc(), opens)) state_.hidden[d] = false;
        out.note = "opened " + opens;
    }
    if (!closes.empty()) {
        for (auto d : select_css(doc(), closes)) state_.hidden[d] = true;
        out.note = "closed " + closes;
    }
    if (target) {
        if (auto screen = screen_for_target(*target)) {
            navigate(*screen);
            out.navigated_to = *screen;
        } else if (!strip_fragment(*target).empty()) {
            out.note = "target \"" + *target + "\" is not a mapped screen";
        }
    }
    return out;
}

bool StaticDomRunner::checked(NodeRef node) {
    auto it = state_.checked.find(node);
    if (it != state_.checked.end()) return it->second;
    return doc().node(node).has_attr("checked");
}

void StaticDomRunner::set_checked(NodeRef node, bool on) {
    const auto& n = doc().node(node);
    if (on && infer_kind(doc(), node) == "Radio") {
        auto group = attr_or(n, "name");
        if (!group.empty()) {
            for (auto other : select_css(doc(), "input")) {
                const auto& o = doc().node(other);
                if (other != node && text::fold_case(attr_or(o, "type")) == "radio" && attr_or(o, "name") == group)
                    state_.checked[other] = false;
            }
        }
    }
    state_.checked[node] = on;
}

std::vector<std::string> StaticDomRunner::options(NodeRef node) {
    const auto& n = doc().node(node);
    std::vector<std::string> out;
    if (n.name == "select") {
        for (auto o : select_css(doc(), "option", node)) out.push_back(text::normalize_ws(doc().text_content(o)));
    } else if (const auto* list = n.attr("list")) {
        for (auto dl : select_css(doc(), "datalist")) {
            if (attr_or(doc().node(dl), "id") != *list) continue;
            for (auto o : select_css(doc(), "option", dl)) {
                const auto& on = doc().node(o);
                out.push_back(on.has_attr("value") ? attr_or(on, "value") : text::normalize_ws(doc().text_content(o)));
            }
        }
    }
    return out;
}

bool StaticDomRunner::select_option(NodeRef node, const std::string& option) {
    const auto& n = doc().node(node);
    if (n.name == "select") {
        for (auto o : select_css(doc(), "option", node)) {
            auto label = text::normalize_ws(doc().text_content(o));
            if (text::same_name(label, option) || text::same_name(attr_or(doc().node(o), "value"), option)) {
                state_.selected[node] = label;
                return true;
            }
        }
        return false;
    }
    for (const auto& o : options(node)) {
        if (text::same_name(o, option)) {
            state_.field_values[node] = o;
            return true;
        }
    }
    return false;
}

void StaticDomRunner::text_into(NodeRef node, std::string& out) const {
    const auto& n = doc().node(node);
    if (n.kind == markup::NodeKind::Text) {
        out += n.text;
        return;
    }
    if (n.kind == markup::NodeKind::Element && !is_visible(node)) return;
    bool block = n.kind == markup::NodeKind::Element &&
                 std::find(kInline.begin(), kInline.end(), n.name) == kInline.end();
    if (block) out.push_back(' ');
    for (auto c : n.children) text_into(c, out);
    if (block) out.push_back(' ');
}

std::string StaticDomRunner::visible_text(std::optional<NodeRef> scope) {
    if (!state_.current_screen) return {};
    std::string out;
    text_into(scope.value_or(0), out);
    return text::normalize_ws(out);
}

void StaticDomRunner::set_hidden(NodeRef node, bool hidden) { state_.hidden[node] = hidden; }

std::string StaticDomRunner::snapshot(std::optional<NodeRef> node) {
    if (!state_.current_screen) return {};
    NodeRef target = 0;
    if (node) {
        auto parent = doc().node(*node).parent;
        target = parent && *parent != 0 ? *parent : *node;
    } else if (auto body = select_css(doc(), "body"); !body.empty()) {
        target = body.front();
    }
    return truncate_utf8(markup::serialize(doc(), target), 4000);
}

}  // namespace bac
