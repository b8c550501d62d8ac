#include "bac/ontology.hpp"

#include <algorithm>
#include <array>

#include <nlohmann/json.hpp>

#include "bac/text.hpp"

namespace bac {

namespace {

using nlohmann::json;

constexpr std::array<std::pair<Category, std::string_view>, 8> kCategories{{
    {Category::CheckboxRadio, "CheckboxRadio"},
    {Category::Common, "Common"},
    {Category::DataGeneration, "DataGeneration"},
    {Category::DataProvider, "DataProvider"},
    {Category::Debug, "Debug"},
    {Category::Dialog, "Dialog"},
    {Category::MouseControl, "MouseControl"},
    {Category::Table, "Table"},
}};

Category parse_category(const std::string& name, const std::string& where) {
    for (const auto& [c, n] : kCategories) {
        if (n == name) return c;
    }
    throw CatalogError(where + ": unknown category '" + name + "'");
}

Keyword parse_keyword(const std::string& name, const std::string& where) {
    if (name == "Given") return Keyword::Given;
    if (name == "When") return Keyword::When;
    if (name == "Then") return Keyword::Then;
    throw CatalogError(where + ": keyword must be Given, When or Then, got '" + name + "'");
}

// Placeholder names that appear as <name> in a task template.
std::vector<std::string> task_placeholders(std::string_view tmpl) {
    std::vector<std::string> names;
    std::size_t pos = 0;
    while ((pos = tmpl.find('<', pos)) != std::string_view::npos) {
        auto end = tmpl.find('>', pos);
        if (end == std::string_view::npos) break;
        names.emplace_back(tmpl.substr(pos + 1, end - pos - 1));
        pos = end + 1;
    }
    return names;
}

std::optional<std::string> optional_column(const json& v) {
    auto s = v.get<std::string>();
    if (s == "-" || s.empty()) return std::nullopt;
    return s;
}

std::vector<std::string> string_list(const json& obj, const char* key) {
    std::vector<std::string> out;
    if (obj.contains(key)) {
        for (const auto& v : obj.at(key)) out.push_back(v.get<std::string>());
    }
    return out;
}

BehaviorEntry parse_entry(const json& rec, const std::string& origin, bool alias) {
    BehaviorEntry e;
    e.id = rec.at("id").get<std::string>();
    auto where = origin + ": " + (alias ? "alias '" : "behavior '") + e.id + "'";
    if (e.id.empty()) throw CatalogError(origin + ": record with empty id");

    for (const auto& s : string_list(rec, "steps")) {
        try {
            e.step_templates.push_back(StepTemplate::parse(s));
        } catch (const CatalogError& err) {
            throw CatalogError(where + ": " + err.what());
        }
    }
    if (e.step_templates.empty()) throw CatalogError(where + ": no step templates");

    e.task_templates = string_list(rec, "tasks");
    e.alt_task_templates = string_list(rec, "altTasks");
    for (const auto& k : string_list(rec, "keywords")) e.allowed_keywords.insert(parse_keyword(k, where));
    if (rec.contains("target")) e.target = rec.at("target").get<std::string>();

    if (alias) {
        e.alias_of = rec.at("aliasOf").get<std::string>();
        return e;
    }

    e.category = parse_category(rec.at("category").get<std::string>(), where);
    for (const auto& row : rec.at("elements")) {
        if (!row.is_array() || row.size() != 3) throw CatalogError(where + ": element rows need three columns");
        ElementTriple t;
        t.abstract_element = row[0].get<std::string>();
        t.prototype_control = optional_column(row[1]);
        t.final_gui_kind = optional_column(row[2]);
        if (t.abstract_element.empty()) throw CatalogError(where + ": empty abstract element");
        e.elements.push_back(std::move(t));
    }
    return e;
}

void validate(const BehaviorEntry& e, const std::string& origin) {
    auto where = origin + ": behavior '" + e.id + "'";
    if (e.task_templates.empty() || e.task_templates.size() > 2) {
        throw CatalogError(where + ": needs one or two task templates");
    }
    if (e.allowed_keywords.empty()) throw CatalogError(where + ": empty keyword set");
    std::set<std::string> step_names;
    for (const auto& t : e.step_templates) step_names.insert(t.placeholders.begin(), t.placeholders.end());
    for (const auto* list : {&e.task_templates, &e.alt_task_templates}) {
        for (const auto& task : *list) {
            for (const auto& name : task_placeholders(task)) {
                if (!step_names.count(name)) {
                    throw CatalogError(where + ": task placeholder <" + name + "> is not in any step template");
                }
            }
        }
    }
    if (e.target) {
        for (const auto& t : e.step_templates) {
            if (std::find(t.placeholders.begin(), t.placeholders.end(), *e.target) == t.placeholders.end()) {
                throw CatalogError(where + ": target <" + *e.target + "> missing from '" + t.source + "'");
            }
        }
    }
}

bool template_matches(const StepTemplate& tmpl, const std::vector<std::string>& step_literals,
                      std::size_t arg_count) {
    if (arg_count != tmpl.placeholders.size()) return false;
    for (std::size_t i = 0; i < step_literals.size(); ++i) {
        if (text::canonical(step_literals[i]) != text::canonical(tmpl.literals[i])) return false;
    }
    return true;
}

// Literal runs of a step text: the text between quoted segments.
std::vector<std::string> step_literals(std::string_view step_text) {
    auto parts = text::split(step_text, '"');
    std::vector<std::string> lits;
    for (std::size_t i = 0; i < parts.size(); i += 2) lits.push_back(parts[i]);
    return lits;
}

// Glob match where '\x01' in the pattern stands for one or more characters.
bool wildcard_match(std::string_view pattern, std::string_view s) {
    if (pattern.empty()) return s.empty();
    if (pattern[0] == '\x01') {
        for (std::size_t n = 1; n <= s.size(); ++n) {
            if (wildcard_match(pattern.substr(1), s.substr(n))) return true;
        }
        return false;
    }
    return !s.empty() && pattern[0] == s[0] && wildcard_match(pattern.substr(1), s.substr(1));
}

}  // namespace

std::string_view category_name(Category c) {
    for (const auto& [cat, n] : kCategories) {
        if (cat == c) return n;
    }
    return "?";
}

AmbiguousMatch::AmbiguousMatch(std::string step_text, std::vector<std::string> behavior_ids)
    : Error([&] {
          std::string msg = "step '" + step_text + "' matches several behaviors:";
          for (const auto& id : behavior_ids) msg += " " + id;
          return msg;
      }()),
      ids_(std::move(behavior_ids)) {}

StepTemplate StepTemplate::parse(std::string_view source) {
    StepTemplate t;
    t.source = text::straighten_quotes(source);
    auto parts = text::split(t.source, '"');
    if (parts.size() % 2 == 0) throw CatalogError("unbalanced quotes in template '" + t.source + "'");
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i % 2 == 0) {
            if (parts[i].find('<') != std::string::npos || parts[i].find('>') != std::string::npos) {
                throw CatalogError("placeholder outside quotes in template '" + t.source + "'");
            }
            t.literals.push_back(parts[i]);
            continue;
        }
        const auto& p = parts[i];
        if (p.size() < 3 || p.front() != '<' || p.back() != '>' ||
            p.find_first_of("<>", 1) != p.size() - 1) {
            throw CatalogError("quoted segment '" + p + "' is not a <placeholder> in template '" + t.source + "'");
        }
        t.placeholders.push_back(p.substr(1, p.size() - 2));
    }
    std::set<std::string> unique(t.placeholders.begin(), t.placeholders.end());
    if (unique.size() != t.placeholders.size()) {
        throw CatalogError("repeated placeholder in template '" + t.source + "'");
    }
    return t;
}

const std::string* StepBinding::value(const std::string& placeholder) const {
    auto it = bindings.find(placeholder);
    return it == bindings.end() ? nullptr : &it->second;
}

OntologyCatalog::OntologyCatalog(std::vector<BehaviorEntry> entries) : entries_(std::move(entries)) {
    for (std::size_t i = 0; i < entries_.size(); ++i) index_.emplace(entries_[i].id, i);
}

const BehaviorEntry* OntologyCatalog::find(std::string_view id) const {
    auto it = index_.find(std::string(id));
    return it == index_.end() ? nullptr : &entries_[it->second];
}

const BehaviorEntry& OntologyCatalog::at(std::string_view id) const {
    const auto* e = find(id);
    if (!e) throw UnknownBehavior("unknown behavior '" + std::string(id) + "'");
    return *e;
}

const BehaviorEntry& OntologyCatalog::canonical(std::string_view id) const {
    const auto& e = at(id);
    return e.alias_of ? at(*e.alias_of) : e;
}

std::size_t OntologyCatalog::behavior_count() const {
    return static_cast<std::size_t>(
        std::count_if(entries_.begin(), entries_.end(), [](const auto& e) { return !e.alias_of; }));
}

OntologyCatalog parse_catalog(std::string_view json_text, const std::string& origin) {
    if (text::trim(json_text).empty()) throw CatalogError(origin + ": empty catalog");
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw CatalogError(origin + ": " + e.what());
    }

    std::vector<BehaviorEntry> entries;
    std::set<std::string> ids;
    try {
        for (const auto& rec : doc.value("behaviors", json::array())) {
            auto e = parse_entry(rec, origin, false);
            validate(e, origin);
            if (!ids.insert(e.id).second) throw CatalogError(origin + ": duplicate id '" + e.id + "'");
            entries.push_back(std::move(e));
        }
        if (entries.empty()) throw CatalogError(origin + ": empty catalog");

        OntologyCatalog base(entries);
        for (const auto& rec : doc.value("aliases", json::array())) {
            auto e = parse_entry(rec, origin, true);
            if (!ids.insert(e.id).second) throw CatalogError(origin + ": duplicate id '" + e.id + "'");
            const auto* target = base.find(*e.alias_of);
            if (!target) throw CatalogError(origin + ": alias '" + e.id + "' of unknown behavior '" + *e.alias_of + "'");
            e.category = target->category;
            e.elements = target->elements;
            if (!e.target) e.target = target->target;
            if (e.task_templates.empty()) {
                e.task_templates = target->task_templates;
                e.alt_task_templates = target->alt_task_templates;
            }
            if (e.allowed_keywords.empty()) e.allowed_keywords = target->allowed_keywords;
            validate(e, origin);
            entries.push_back(std::move(e));
        }
    } catch (const json::exception& e) {
        throw CatalogError(origin + ": malformed record: " + e.what());
    }
    return OntologyCatalog(std::move(entries));
}

OntologyCatalog load_catalog(const std::string& path) { return parse_catalog(read_file(path), path); }

std::optional<StepBinding> match_step(const Step& step, const OntologyCatalog& catalog) {
    auto lits = step_literals(step.text);
    std::vector<StepBinding> found;
    for (const auto& e : catalog.entries()) {
        if (!e.allowed_keywords.count(step.resolved_keyword)) continue;
        for (const auto& t : e.step_templates) {
            if (!template_matches(t, lits, step.args.size())) continue;
            StepBinding b;
            b.behavior_id = e.id;
            b.matched_template = t;
            for (std::size_t i = 0; i < t.placeholders.size(); ++i) b.bindings[t.placeholders[i]] = step.args[i];
            found.push_back(std::move(b));
            break;
        }
    }
    if (found.empty()) return std::nullopt;
    if (found.size() > 1) {
        std::vector<std::string> ids;
        for (const auto& b : found) ids.push_back(b.behavior_id);
        throw AmbiguousMatch(step.text, std::move(ids));
    }
    return std::move(found.front());
}

std::vector<std::string> template_matches_ignoring_keyword(const Step& step, const OntologyCatalog& catalog) {
    auto lits = step_literals(step.text);
    std::vector<std::string> ids;
    for (const auto& e : catalog.entries()) {
        for (const auto& t : e.step_templates) {
            if (template_matches(t, lits, step.args.size())) {
                ids.push_back(e.id);
                break;
            }
        }
    }
    return ids;
}

std::string fill_task_template(std::string_view tmpl, const std::map<std::string, std::string>& values) {
    std::string out;
    std::size_t pos = 0;
    while (pos < tmpl.size()) {
        auto open = tmpl.find('<', pos);
        auto close = open == std::string_view::npos ? open : tmpl.find('>', open);
        if (close == std::string_view::npos) {
            out.append(tmpl.substr(pos));
            break;
        }
        out.append(tmpl.substr(pos, open - pos));
        auto it = values.find(std::string(tmpl.substr(open + 1, close - open - 1)));
        if (it != values.end()) {
            out += it->second;
        } else {
            out.append(tmpl.substr(open, close - open + 1));
        }
        pos = close + 1;
    }
    return text::normalize_ws(out);
}

std::vector<std::string> derive_task_names(const StepBinding& binding, const OntologyCatalog& catalog) {
    const auto& e = catalog.at(binding.behavior_id);
    const auto* templates = &e.task_templates;
    if (!e.alt_task_templates.empty()) {
        for (const auto& t : e.task_templates) {
            for (const auto& name : task_placeholders(t)) {
                const auto* v = binding.value(name);
                if (v && text::trim(*v).empty()) templates = &e.alt_task_templates;
            }
        }
    }
    std::vector<std::string> names;
    for (const auto& t : *templates) names.push_back(fill_task_template(t, binding.bindings));
    return names;
}

std::vector<std::string> supported_elements(std::string_view behavior_id, Platform platform,
                                            const OntologyCatalog& catalog) {
    const auto& e = catalog.canonical(behavior_id);
    std::vector<std::string> out;
    for (const auto& t : e.elements) {
        std::optional<std::string> v;
        switch (platform) {
            case Platform::Abstract: v = t.abstract_element; break;
            case Platform::Prototype: v = t.prototype_control; break;
            case Platform::FinalGui: v = t.final_gui_kind; break;
        }
        if (v && std::find(out.begin(), out.end(), *v) == out.end()) out.push_back(*v);
    }
    return out;
}

std::string render_step(const StepTemplate& tmpl, const std::vector<std::string>& values) {
    std::string out = tmpl.literals.at(0);
    for (std::size_t i = 0; i < tmpl.placeholders.size(); ++i) {
        out += '"' + values.at(i) + '"' + tmpl.literals.at(i + 1);
    }
    return text::trim(out);
}

bool is_known_task_name(std::string_view task_name, const OntologyCatalog& catalog) {
    auto name = text::canonical(task_name);
    for (const auto& e : catalog.entries()) {
        for (const auto* list : {&e.task_templates, &e.alt_task_templates}) {
            for (const auto& t : *list) {
                std::map<std::string, std::string> wild;
                for (const auto& p : task_placeholders(t)) wild[p] = "\x01";
                if (wildcard_match(text::canonical(fill_task_template(t, wild)), name)) return true;
            }
        }
    }
    return false;
}

}  // namespace bac
