#include "bac/guicheck.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

#include "bac/text.hpp"

namespace bac {

namespace {

bool contains_text(std::string_view haystack, std::string_view needle) {
    return text::canonical(haystack).find(text::canonical(needle)) != std::string::npos;
}

std::string quoted(std::string_view s) { return "\"" + std::string(s) + "\""; }

std::string join(const std::vector<std::string>& v, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? std::string(sep) : "") + v[i];
    return out;
}

std::optional<int> parse_positive(std::string_view s) {
    auto t = text::trim(s);
    if (t.empty() || t.size() > 6 || !std::all_of(t.begin(), t.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        return std::nullopt;
    return std::stoi(t);
}

struct Located {
    NodeRef node = 0;
    NodeInfo info;
    std::string name;
};

class StepExecutor {
public:
    StepExecutor(const StepBinding& binding, Runner& runner, const PageMap& map, const OntologyCatalog& catalog,
                 StepContext& ctx, StepResult& r)
        : b_(binding), runner_(runner), map_(map), catalog_(catalog), ctx_(ctx), r_(r),
          id_(catalog.canonical(binding.behavior_id).id),
          kinds_(supported_elements(binding.behavior_id, Platform::FinalGui, catalog)) {}

    void run();

private:
    const StepBinding& b_;
    Runner& runner_;
    const PageMap& map_;
    const OntologyCatalog& catalog_;
    StepContext& ctx_;
    StepResult& r_;
    std::string id_;
    std::vector<std::string> kinds_;
    std::vector<std::string> notes_;

    std::string v(const std::string& placeholder) const {
        const auto* p = b_.value(placeholder);
        return p ? *p : std::string();
    }

    // ---- outcomes ----

    void pass(std::string evidence) {
        r_.status = Status::Passed;
        r_.evidence = std::move(evidence);
    }

    void skip(std::string evidence) {
        r_.status = Status::Skipped;
        r_.evidence = std::move(evidence);
    }

    void fail(FailureSignal signal, std::string evidence, std::string subject = {},
              std::vector<std::string> candidates = {}, std::optional<NodeRef> node = std::nullopt) {
        FailureEvidence ev;
        ev.artifact = Artifact::FinalGui;
        ev.signal = signal;
        ev.subject = std::move(subject);
        ev.candidates = std::move(candidates);
        mark_failed(r_, ev);
        r_.evidence = std::move(evidence);
        r_.snapshot = runner_.snapshot(node);
    }

    bool failed() const { return r_.status == Status::Failed; }

    // ---- element resolution ----

    bool need_screen() {
        if (runner_.current_screen()) return true;
        fail(FailureSignal::GuiScreenMismatch, "no screen is open");
        return false;
    }

    std::string describe_entry(const ElementMapEntry& e) const {
        return std::string(e.locator_type == LocatorType::Id ? "Id" : "Css") + " " + quoted(e.locator);
    }

    const ElementMapEntry* entry_for(const std::string& name) {
        if (!need_screen()) return nullptr;
        const auto& screen = *runner_.current_screen();
        const auto* e = map_.element(name, screen);
        if (!e) {
            fail(FailureSignal::GuiUnmappedName, "Element not found in " + quoted(screen) + ": " + quoted(name), name,
                 map_.element_names(screen));
        }
        return e;
    }

    std::optional<Located> finish(NodeRef node, const std::string& name, const ElementMapEntry* e) {
        Located loc{node, runner_.describe(node, e ? e->declared_kind : std::nullopt), name};
        if (e && e->declared_kind && *e->declared_kind != loc.info.inferred_kind) {
            notes_.push_back("declared kind " + *e->declared_kind + " overrides inferred " + loc.info.inferred_kind);
        }
        return loc;
    }

    std::optional<Located> resolve(const std::string& name) {
        const auto* e = entry_for(name);
        if (!e) return std::nullopt;
        auto nodes = runner_.locate(*e);
        if (nodes.empty()) {
            fail(FailureSignal::GuiLocatorNone,
                 "locator " + describe_entry(*e) + " for " + quoted(name) + " matches no element on " +
                     quoted(*runner_.current_screen()));
            return std::nullopt;
        }
        if (nodes.size() > 1) {
            fail(FailureSignal::GuiLocatorMany,
                 "Element not identified: locator " + describe_entry(*e) + " for " + quoted(name) + " matches " +
                     std::to_string(nodes.size()) + " elements",
                 {}, {}, nodes.front());
            return std::nullopt;
        }
        notes_.push_back("located " + quoted(name) + " via " + describe_entry(*e));
        return finish(nodes.front(), name, e);
    }

    // Keeps candidates whose smallest ancestor showing the referent text holds
    // no other candidate.
    std::vector<NodeRef> filter_referring(const std::vector<NodeRef>& candidates, const std::string& referent) {
        std::vector<NodeRef> kept;
        for (auto c : candidates) {
            std::optional<NodeRef> scope;
            if (contains_text(runner_.visible_text(c), referent)) scope = c;
            if (!scope) {
                for (auto a : runner_.ancestors(c)) {
                    if (contains_text(runner_.visible_text(a), referent)) {
                        scope = a;
                        break;
                    }
                }
            }
            if (!scope) continue;
            int inside = 0;
            for (auto other : candidates) {
                if (other == *scope) {
                    ++inside;
                    continue;
                }
                auto anc = runner_.ancestors(other);
                if (std::find(anc.begin(), anc.end(), *scope) != anc.end()) ++inside;
            }
            if (inside == 1) kept.push_back(c);
        }
        return kept;
    }

    std::optional<Located> pick_referring(const std::vector<NodeRef>& candidates, const std::string& name,
                                          const std::string& referent, const ElementMapEntry* e) {
        auto kept = filter_referring(candidates, referent);
        if (kept.empty()) {
            fail(FailureSignal::GuiValueNotFound, "no " + quoted(name) + " referring to " + quoted(referent) + " on " +
                                                      quoted(*runner_.current_screen()));
            return std::nullopt;
        }
        if (kept.size() > 1) {
            fail(FailureSignal::GuiLocatorMany, "Element not identified: " + std::to_string(kept.size()) + " " +
                                                    quoted(name) + " elements refer to " + quoted(referent),
                 {}, {}, kept.front());
            return std::nullopt;
        }
        notes_.push_back("located " + quoted(name) + " referring to " + quoted(referent));
        return finish(kept.front(), name, e);
    }

    std::optional<Located> resolve_referring(const std::string& name, const std::string& referent) {
        if (text::trim(referent).empty()) return resolve(name);
        const auto* e = entry_for(name);
        if (!e) return std::nullopt;
        auto nodes = runner_.locate(*e);
        if (nodes.empty()) {
            fail(FailureSignal::GuiLocatorNone, "locator " + describe_entry(*e) + " for " + quoted(name) +
                                                    " matches no element on " + quoted(*runner_.current_screen()));
            return std::nullopt;
        }
        return pick_referring(nodes, name, referent, e);
    }

    bool kind_ok(const Located& loc, const std::vector<std::string>& kinds) {
        if (std::find(kinds.begin(), kinds.end(), "Element") != kinds.end()) return true;
        if (std::find(kinds.begin(), kinds.end(), loc.info.kind) != kinds.end()) return true;
        fail(FailureSignal::GuiKindMismatch,
             quoted(loc.name) + " is a " + loc.info.kind + ", which does not support " + id_ + " (expects " +
                 join(kinds, ", ") + ")",
             {}, {}, loc.node);
        return false;
    }

    bool kind_ok(const Located& loc) { return kind_ok(loc, kinds_); }

    // ---- actions ----

    bool write_value(const Located& loc, const std::string& value, bool overwrite) {
        if (loc.info.disabled || loc.info.readonly) {
            fail(FailureSignal::GuiStateMismatch, quoted(loc.name) + " does not accept input (disabled or read-only)",
                 {}, {}, loc.node);
            return false;
        }
        if (loc.info.maxlength && text::utf8_length(value) > *loc.info.maxlength) {
            fail(FailureSignal::GuiValueTooLong,
                 "Value does not fit the field: " + quoted(value) + " has " + std::to_string(text::utf8_length(value)) +
                     " characters, " + quoted(loc.name) + " accepts " + std::to_string(*loc.info.maxlength),
                 {}, {}, loc.node);
            return false;
        }
        auto current = runner_.read(loc.node);
        if (!overwrite && !text::trim(current).empty()) {
            fail(FailureSignal::GuiFieldFilled, quoted(loc.name) + " is already filled with " + quoted(current), {}, {},
                 loc.node);
            return false;
        }
        runner_.write(loc.node, value);
        r_.actual = value;
        return true;
    }

    bool set_value(const Located& loc, const std::string& value) {
        if (loc.info.kind == "Select") {
            if (!runner_.select_option(loc.node, value)) {
                fail(FailureSignal::GuiValueNotFound,
                     quoted(value) + " is not an option of " + quoted(loc.name) + " (" +
                         join(runner_.options(loc.node), ", ") + ")",
                     value, runner_.options(loc.node), loc.node);
                return false;
            }
            r_.actual = runner_.read(loc.node);
            return true;
        }
        return write_value(loc, value, false);
    }

    void choose(const Located& loc) {
        auto kind = loc.info.kind;
        if (kind == "Radio" || kind == "CheckBox") {
            runner_.set_checked(loc.node, true);
            pass("checked " + quoted(loc.name));
        } else if (kind == "Link") {
            click(loc);
        } else {
            pass("chose " + quoted(loc.name));
        }
    }

    void click(const Located& loc) {
        if (!loc.info.visible) {
            fail(FailureSignal::GuiStateMismatch, quoted(loc.name) + " is not visible", {}, {}, loc.node);
            return;
        }
        if (loc.info.disabled) {
            fail(FailureSignal::GuiStateMismatch, quoted(loc.name) + " is disabled", {}, {}, loc.node);
            return;
        }
        auto outcome = runner_.click(loc.node);
        std::string ev = "clicked " + quoted(loc.name);
        if (outcome.navigated_to) {
            ev += ", now on " + quoted(*outcome.navigated_to);
            r_.actual = *outcome.navigated_to;
        }
        if (!outcome.note.empty()) ev += " (" + outcome.note + ")";
        pass(ev);
    }

    void expect_checked(bool want) {
        auto loc = resolve(v("fieldname"));
        if (!loc || !kind_ok(*loc)) return;
        bool is = runner_.checked(loc->node);
        r_.expected = want ? "checked" : "unchecked";
        r_.actual = is ? "checked" : "unchecked";
        if (is == want) pass(quoted(loc->name) + " is " + r_.actual);
        else fail(FailureSignal::GuiStateMismatch, quoted(loc->name) + " is " + r_.actual, {}, {}, loc->node);
    }

    void assure_checked(bool want) {
        auto loc = resolve(v("fieldname"));
        if (!loc || !kind_ok(*loc)) return;
        runner_.set_checked(loc->node, want);
        pass(quoted(loc->name) + (want ? " checked" : " unchecked"));
    }

    void go_to(const std::string& address, const std::string& params) {
        r_.expected = address;
        if (!runner_.navigate(address)) {
            r_.actual = runner_.current_screen().value_or("");
            fail(FailureSignal::GuiUnknownScreen, "screen " + quoted(address) + " is not in the page map", address);
            return;
        }
        r_.actual = *runner_.current_screen();
        pass("opened " + quoted(r_.actual) + (params.empty() ? "" : " with parameters " + quoted(params)));
    }

    void is_displayed(const std::string& page) {
        r_.expected = page;
        r_.actual = runner_.current_screen().value_or("");
        if (runner_.current_screen() && text::same_name(*runner_.current_screen(), page)) {
            pass("current screen is " + quoted(r_.actual));
        } else {
            fail(FailureSignal::GuiScreenMismatch,
                 "current screen is " + (r_.actual.empty() ? std::string("none") : quoted(r_.actual)), page);
        }
    }

    void message(const std::string& content, bool want) {
        if (!need_screen()) return;
        r_.expected = want ? content : "not " + content;
        bool shown = contains_text(runner_.visible_text(), content);
        if (shown == want) {
            pass(quoted(content) + (shown ? " is displayed" : " is not displayed"));
        } else {
            fail(FailureSignal::GuiMessageNotDisplayed,
                 want ? "message " + quoted(content) + " not identified on " + quoted(*runner_.current_screen())
                      : "message " + quoted(content) + " is displayed",
                 content);
        }
    }

    void field_value(const std::optional<Located>& loc, const std::string& value, bool want) {
        if (!loc || !kind_ok(*loc)) return;
        auto current = runner_.read(loc->node);
        r_.expected = want ? value : "not " + value;
        r_.actual = current;
        bool shown = loc->info.visible && contains_text(current, value);
        if (shown == want) {
            pass(quoted(loc->name) + " shows " + quoted(current));
        } else {
            fail(want ? FailureSignal::GuiValueNotFound : FailureSignal::GuiStateMismatch,
                 quoted(loc->name) + " shows " + quoted(current), value, {}, loc->node);
        }
    }

    void not_visible(const std::string& name) {
        const auto* e = entry_for(name);
        if (!e) return;
        auto nodes = runner_.locate(*e);
        int shown = 0;
        for (auto n : nodes) shown += runner_.describe(n, e->declared_kind).visible ? 1 : 0;
        if (shown == 0) pass(quoted(name) + " is not visible");
        else fail(FailureSignal::GuiStateMismatch, quoted(name) + " is visible", {}, {}, nodes.front());
    }

    void visible_clickable_enabled(const std::optional<Located>& loc) {
        if (!loc || !kind_ok(*loc)) return;
        if (loc->info.visible && !loc->info.disabled) pass(quoted(loc->name) + " is visible and enabled");
        else fail(FailureSignal::GuiStateMismatch, quoted(loc->name) + (loc->info.visible ? " is disabled" : " is not visible"),
                  {}, {}, loc->node);
    }

    void visible_disabled(const std::optional<Located>& loc) {
        if (!loc || !kind_ok(*loc)) return;
        if (loc->info.visible && loc->info.disabled) pass(quoted(loc->name) + " is visible and disabled");
        else fail(FailureSignal::GuiStateMismatch,
                  quoted(loc->name) + (loc->info.visible ? " is enabled" : " is not visible"), {}, {}, loc->node);
    }

    void random_number(const std::string& prefix) {
        auto loc = resolve(v("fieldname"));
        if (!loc || !kind_ok(*loc)) return;
        std::size_t digits = 6;
        if (loc->info.maxlength) {
            auto room = *loc->info.maxlength > text::utf8_length(prefix) ? *loc->info.maxlength - text::utf8_length(prefix) : 0;
            digits = std::max<std::size_t>(1, std::min<std::size_t>(digits, room));
        }
        long long bound = 1;
        for (std::size_t i = 0; i < digits; ++i) bound *= 10;
        std::uniform_int_distribution<long long> dist(0, bound - 1);
        auto value = prefix + std::to_string(dist(ctx_.rng));
        if (write_value(*loc, value, false)) pass("wrote " + quoted(value) + " into " + quoted(loc->name));
    }

    // ---- dialogs ----

    std::optional<Located> visible_dialog() {
        if (!need_screen()) return std::nullopt;
        for (const auto& name : map_.element_names(*runner_.current_screen())) {
            const auto* e = map_.element(name, *runner_.current_screen());
            if (!e->declared_kind || *e->declared_kind != "Dialog") continue;
            for (auto n : runner_.locate(*e)) {
                auto info = runner_.describe(n, e->declared_kind);
                if (info.visible) return Located{n, info, name};
            }
        }
        for (auto n : runner_.find("dialog, [role=dialog], [role=alertdialog]")) {
            auto info = runner_.describe(n);
            if (info.visible) return Located{n, info, "dialog"};
        }
        fail(FailureSignal::GuiLocatorNone, "no dialog box is displayed on " + quoted(*runner_.current_screen()));
        return std::nullopt;
    }

    void close_dialog(bool confirm) {
        auto d = visible_dialog();
        if (!d) return;
        runner_.set_hidden(d->node, true);
        pass(std::string(confirm ? "confirmed" : "cancelled") + " dialog " + quoted(d->name));
    }

    // ---- tables ----

    std::optional<Located> table(const std::string& name) {
        auto loc = resolve(name);
        if (!loc || !kind_ok(*loc)) return std::nullopt;
        return loc;
    }

    std::vector<NodeRef> rows(NodeRef t) { return runner_.find("tr", t); }
    std::vector<NodeRef> cells(NodeRef row) { return runner_.find("td, th", row); }

    std::optional<NodeRef> find_cell(const Located& t, const std::string& spec) {
        auto comma = spec.find(',');
        if (comma != std::string::npos) {
            auto rr = parse_positive(spec.substr(0, comma));
            auto cc = parse_positive(spec.substr(comma + 1));
            if (rr && cc) {
                auto rs = rows(t.node);
                if (*rr >= 1 && *rr <= static_cast<int>(rs.size())) {
                    auto cs = cells(rs[*rr - 1]);
                    if (*cc >= 1 && *cc <= static_cast<int>(cs.size())) return cs[*cc - 1];
                }
                fail(FailureSignal::GuiValueNotFound, "cell " + quoted(spec) + " is outside " + quoted(t.name), spec,
                     {}, t.node);
                return std::nullopt;
            }
        }
        for (auto c : runner_.find("td, th", t.node)) {
            if (text::same_name(runner_.visible_text(c), spec)) return c;
        }
        fail(FailureSignal::GuiValueNotFound, "no cell " + quoted(spec) + " in " + quoted(t.name), spec, {}, t.node);
        return std::nullopt;
    }

    std::optional<std::pair<NodeRef, int>> find_column(const Located& t, const std::string& spec) {
        auto rs = rows(t.node);
        if (auto idx = parse_positive(spec)) {
            if (!rs.empty() && *idx >= 1 && *idx <= static_cast<int>(cells(rs.front()).size()))
                return std::make_pair(cells(rs.front())[*idx - 1], *idx - 1);
        }
        for (auto row : rs) {
            auto cs = cells(row);
            for (std::size_t i = 0; i < cs.size(); ++i) {
                if (text::same_name(runner_.visible_text(cs[i]), spec)) return std::make_pair(cs[i], static_cast<int>(i));
            }
        }
        fail(FailureSignal::GuiValueNotFound, "no column " + quoted(spec) + " in " + quoted(t.name), spec, {}, t.node);
        return std::nullopt;
    }

    std::vector<std::string> column_values(const Located& t, int col) {
        std::vector<std::string> out;
        for (auto row : rows(t.node)) {
            auto tds = runner_.find("td", row);
            if (col < static_cast<int>(tds.size())) out.push_back(runner_.visible_text(tds[col]));
        }
        return out;
    }

    void click_inside(NodeRef cell, const std::string& what) {
        auto inner = runner_.find("a, button, input", cell);
        if (!inner.empty()) {
            auto outcome = runner_.click(inner.front());
            if (outcome.navigated_to) r_.actual = *outcome.navigated_to;
            pass("clicked " + what + (outcome.navigated_to ? ", now on " + quoted(*outcome.navigated_to) : ""));
            return;
        }
        pass("clicked " + what);
    }

    void choose_in_table(const Located& t, const std::string& option) {
        for (auto s : runner_.find("select", t.node)) {
            if (runner_.select_option(s, option)) {
                pass("chose " + quoted(option) + " in " + quoted(t.name));
                return;
            }
        }
        for (auto n : runner_.find("a, button, input, label", t.node)) {
            auto info = runner_.describe(n);
            const auto& label = info.text.empty() ? runner_.read(n) : info.text;
            if (!text::same_name(label, option)) continue;
            if (info.kind == "Radio" || info.kind == "CheckBox") runner_.set_checked(n, true);
            else runner_.click(n);
            pass("chose " + quoted(option) + " in " + quoted(t.name));
            return;
        }
        fail(FailureSignal::GuiValueNotFound, "no option " + quoted(option) + " in " + quoted(t.name), option, {},
             t.node);
    }

    void type_in_table(const Located& t, const std::string& value) {
        for (auto n : runner_.find("input, textarea", t.node)) {
            auto info = runner_.describe(n);
            if (info.kind != "TextField" && info.kind != "AutoComplete") continue;
            if (!info.visible || info.disabled || !text::trim(runner_.read(n)).empty()) continue;
            Located cell{n, info, t.name};
            if (write_value(cell, value, false)) pass("typed " + quoted(value) + " in " + quoted(t.name));
            return;
        }
        fail(FailureSignal::GuiValueNotFound, "no empty text field in " + quoted(t.name), value, {}, t.node);
    }

    std::string variable_or_literal(const std::string& key) const {
        auto it = ctx_.variables.find(key);
        return it == ctx_.variables.end() ? key : it->second;
    }

    void dispatch();
};

void StepExecutor::run() {
    dispatch();
    if (!notes_.empty() && r_.status != Status::Skipped) {
        r_.evidence = join(notes_, "; ") + (r_.evidence.empty() ? "" : "; " + r_.evidence);
    }
}

void StepExecutor::dispatch() {
    const auto& id = id_;

    // Behaviors without a final-GUI element.
    if (id == "defineTheVariableWithTheValue") {
        ctx_.variables[v("variable")] = v("value");
        return skip("variable " + quoted(v("variable")) + " = " + quoted(v("value")));
    }
    if (id == "informKeyWithTheValue") {
        ctx_.variables[v("key")] = v("value");
        return skip("key " + quoted(v("key")) + " = " + quoted(v("value")));
    }
    if (id == "selectFromDataSet") {
        if (!ctx_.dataset || ctx_.dataset->empty()) return skip("dataset " + quoted(v("dataset")) + ": no dataset file given");
        for (const auto& [k, val] : *ctx_.dataset) ctx_.variables[k] = val;
        return skip("dataset " + quoted(v("dataset")) + ": " + std::to_string(ctx_.dataset->size()) + " value(s) loaded");
    }
    if (id == "printOnTheConsoleTheValueOfTheVariable") {
        auto it = ctx_.variables.find(v("variable"));
        return skip(quoted(v("variable")) + " = " + (it == ctx_.variables.end() ? std::string("(undefined)") : quoted(it->second)));
    }
    if (id == "inform") return skip("value " + quoted(v("value")) + " has no target element");
    if (kinds_.empty()) return skip("behavior has no final-GUI element");

    if (id == "goTo") return go_to(v("address"), "");
    if (id == "goToWithTheParameters") return go_to(v("address"), v("parameters"));
    if (id == "isDisplayed") return is_displayed(v("page"));

    if (id == "theFieldIsChecked") return expect_checked(true);
    if (id == "theFieldIsUnchecked") return expect_checked(false);
    if (id == "assureTheFieldIsChecked") return assure_checked(true);
    if (id == "assureTheFieldIsUnchecked") return assure_checked(false);

    if (id == "choose" || id == "select") {
        auto loc = resolve(v("option"));
        if (loc && kind_ok(*loc)) choose(*loc);
        return;
    }
    if (id == "chooseReferringTo") {
        auto loc = resolve_referring(v("fieldname"), v("option"));
        if (loc && kind_ok(*loc)) choose(*loc);
        return;
    }
    if (id == "chooseByIndexInTheField") {
        auto loc = resolve(v("fieldname"));
        if (!loc || !kind_ok(*loc)) return;
        auto opts = runner_.options(loc->node);
        auto idx = parse_positive(v("index"));
        if (!idx || *idx >= static_cast<int>(opts.size())) {
            return fail(FailureSignal::GuiValueNotFound,
                        "index " + quoted(v("index")) + " is outside the " + std::to_string(opts.size()) +
                            " options of " + quoted(loc->name),
                        v("index"), opts, loc->node);
        }
        runner_.select_option(loc->node, opts[*idx]);
        r_.actual = opts[*idx];
        return pass("selected option " + std::to_string(*idx) + " " + quoted(opts[*idx]));
    }
    if (id == "chooseTheOptionOfValueInTheField") {
        auto loc = resolve(v("fieldname"));
        if (!loc || !kind_ok(*loc)) return;
        if (set_value(*loc, v("value"))) pass("selected " + quoted(r_.actual) + " in " + quoted(loc->name));
        return;
    }
    if (id == "clickOn" || id == "moveTheMouseOver") {
        auto loc = resolve(id == "clickOn" ? v("fieldname") : v("element"));
        if (!loc || !kind_ok(*loc)) return;
        if (id == "clickOn") return click(*loc);
        if (!loc->info.visible) return fail(FailureSignal::GuiStateMismatch, quoted(loc->name) + " is not visible", {}, {}, loc->node);
        return pass("mouse over " + quoted(loc->name));
    }
    if (id == "clickOnReferringTo") {
        auto loc = resolve_referring(v("fieldname"), v("option"));
        if (loc && kind_ok(*loc)) click(*loc);
        return;
    }
    if (id == "doNotTypeAnyValueToTheField") {
        auto loc = resolve(v("fieldname"));
        if (loc && kind_ok(*loc)) pass(quoted(loc->name) + " left as " + quoted(runner_.read(loc->node)));
        return;
    }
    if (id == "resetTheValueOfTheField") {
        auto loc = resolve(v("fieldname"));
        if (loc && kind_ok(*loc) && write_value(*loc, "", true)) pass("cleared " + quoted(loc->name));
        return;
    }
    if (id == "setInTheField") {
        r_.expected = v("value");
        auto loc = resolve(v("fieldname"));
        if (loc && kind_ok(*loc) && set_value(*loc, v("value"))) pass("set " + quoted(v("value")) + " in " + quoted(loc->name));
        return;
    }
    if (id == "tryToSetInTheField") {
        auto loc = resolve(v("fieldname"));
        if (!loc || !kind_ok(*loc)) return;
        if (loc->info.disabled || loc->info.readonly || !loc->info.visible) {
            return fail(FailureSignal::GuiStateMismatch, quoted(loc->name) + " does not accept input", {}, {}, loc->node);
        }
        return pass(quoted(loc->name) + " accepts input");
    }
    if (id == "setInTheFieldReferringTo") {
        r_.expected = v("value");
        const auto& ref = v("fieldname");
        std::optional<Located> loc;
        if (!need_screen()) return;
        if (map_.element(ref, *runner_.current_screen())) {
            loc = resolve(ref);
        } else {
            std::vector<NodeRef> fields;
            for (auto n : runner_.find("input, select, textarea")) {
                auto kind = runner_.describe(n).kind;
                if (kind == "TextField" || kind == "Select" || kind == "AutoComplete" || kind == "Calendar") fields.push_back(n);
            }
            loc = pick_referring(fields, "field", ref, nullptr);
        }
        if (loc && kind_ok(*loc) && set_value(*loc, v("value"))) pass("set " + quoted(v("value")) + " in the field referring to " + quoted(ref));
        return;
    }
    if (id == "typeAndChooseInTheField" || id == "informAndChooseInTheField") {
        r_.expected = v("value 2");
        auto loc = resolve(v("fieldname"));
        if (!loc || !kind_ok(*loc) || !write_value(*loc, v("value 1"), false)) return;
        auto opts = runner_.options(loc->node);
        if (!runner_.select_option(loc->node, v("value 2"))) {
            return fail(FailureSignal::GuiValueNotFound,
                        quoted(v("value 2")) + " is not offered by " + quoted(loc->name), v("value 2"), opts, loc->node);
        }
        if (loc->info.maxlength && text::utf8_length(v("value 2")) > *loc->info.maxlength) {
            return fail(FailureSignal::GuiValueTooLong,
                        "Value does not fit the field: " + quoted(v("value 2")) + " in " + quoted(loc->name), {}, {}, loc->node);
        }
        r_.actual = runner_.read(loc->node);
        return pass("typed " + quoted(v("value 1")) + " and chose " + quoted(r_.actual) + " in " + quoted(loc->name));
    }
    if (id == "setInTheFieldAndTriggerTheEvent") {
        auto loc = resolve(v("fieldname"));
        if (!loc || !kind_ok(*loc)) return;
        if (loc->info.disabled || loc->info.readonly) {
            return fail(FailureSignal::GuiStateMismatch, quoted(loc->name) + " does not accept input", {}, {}, loc->node);
        }
        return pass("event " + quoted(v("event")) + " recorded on " + quoted(loc->name) + " (no scripting)");
    }

    if (id == "willBeDisplayed") return message(v("content"), true);
    if (id == "willNotBeDisplayed") return message(v("content"), false);
    if (id == "willBeDisplayedInTheFieldTheValue") return field_value(resolve(v("fieldname")), v("value"), true);
    if (id == "willNotBeDisplayedInTheFieldTheValue") return field_value(resolve(v("fieldname")), v("value"), false);
    if (id == "willBeDisplayedTheValueInTheFieldReferringTo")
        return field_value(resolve_referring(v("fieldname"), v("element")), v("value"), true);
    if (id == "willNotBeDisplayedTheValueInTheFieldReferringTo")
        return field_value(resolve_referring(v("fieldname"), v("element")), v("value"), false);

    if (id == "isNotVisible") return not_visible(v("fieldname"));
    if (id == "valueReferringToIsNotVisible") {
        auto loc = resolve(v("element"));
        if (!loc || !kind_ok(*loc)) return;
        if (loc->info.visible && contains_text(runner_.visible_text(loc->node), v("value"))) {
            return fail(FailureSignal::GuiStateMismatch, quoted(v("value")) + " is visible in " + quoted(loc->name), {}, {}, loc->node);
        }
        return pass(quoted(v("value")) + " is not visible in " + quoted(loc->name));
    }
    if (id == "waitTheFieldBeVisibleClickableAndEnable") return visible_clickable_enabled(resolve(v("fieldname")));
    if (id == "waitTheFieldReferringToBeVisibleClickableAndEnable")
        return visible_clickable_enabled(resolve_referring(v("fieldname"), v("element")));
    if (id == "theElementIsVisibleAndDisable") return visible_disabled(resolve(v("element")));
    if (id == "theElementReferringToIsVisibleAndDisable")
        return visible_disabled(resolve_referring(v("fieldname"), v("element")));

    if (id == "clickOnTheRowOfTheTree") {
        auto loc = resolve(v("tree"));
        if (!loc || !kind_ok(*loc)) return;
        for (auto n : runner_.find("li, [role=treeitem]", loc->node)) {
            auto own = runner_.visible_text(n);
            auto children = runner_.find("ul, ol, [role=group]", n);
            for (auto c : children) {
                auto inner = runner_.visible_text(c);
                auto pos = own.rfind(inner);
                if (!inner.empty() && pos != std::string::npos) own = text::trim(own.substr(0, pos));
            }
            if (text::same_name(own, v("row"))) {
                runner_.click(n);
                return pass("clicked row " + quoted(v("row")) + " of " + quoted(loc->name));
            }
        }
        return fail(FailureSignal::GuiValueNotFound, "no row " + quoted(v("row")) + " in " + quoted(loc->name), v("row"), {}, loc->node);
    }

    if (id == "informARandomNumberWithPrefixInTheField") return random_number(v("prefix"));
    if (id == "informARandomNumberInTheField") return random_number("");

    if (id == "informTheField" || id == "informTheFields") {
        std::vector<std::string> names = id == "informTheField" ? std::vector<std::string>{v("fieldname")} : text::split(v("fieldnames"), ',');
        std::vector<std::string> done;
        for (auto& n : names) {
            auto loc = resolve(text::trim(n));
            if (!loc || !kind_ok(*loc)) return;
            done.push_back(quoted(loc->name));
        }
        return pass("informed " + join(done, ", "));
    }
    if (id == "informTheValueOfTheField") {
        auto loc = resolve(v("fieldname"));
        if (!loc || !kind_ok(*loc)) return;
        if (ctx_.dataset) {
            auto it = ctx_.dataset->find(v("fieldname"));
            if (it != ctx_.dataset->end()) {
                if (set_value(*loc, it->second)) pass("informed " + quoted(it->second) + " from the dataset");
                return;
            }
        }
        return pass(quoted(loc->name) + " has no dataset value; left as " + quoted(runner_.read(loc->node)));
    }
    if (id == "obtainTheValueFromTheField") {
        auto loc = resolve(v("fieldname"));
        if (!loc || !kind_ok(*loc)) return;
        auto value = runner_.read(loc->node);
        ctx_.variables[v("fieldname")] = value;
        r_.actual = value;
        return pass("obtained " + quoted(value) + " from " + quoted(loc->name));
    }

    if (id == "confirmTheDialogBox") return close_dialog(true);
    if (id == "cancelTheDialogBox") return close_dialog(false);
    if (id == "informTheValueInTheDialogBox") {
        auto d = visible_dialog();
        if (!d) return;
        for (auto n : runner_.find("input, textarea", d->node)) {
            auto info = runner_.describe(n);
            if (info.kind != "TextField") continue;
            Located field{n, info, d->name};
            if (write_value(field, v("value"), false)) pass("informed " + quoted(v("value")) + " in the dialog box");
            return;
        }
        return fail(FailureSignal::GuiLocatorNone, "dialog " + quoted(d->name) + " has no text field", {}, {}, d->node);
    }
    if (id == "willBeDisplayedInTheDialogBox") {
        r_.expected = v("message");
        auto d = visible_dialog();
        if (!d) return;
        r_.actual = runner_.visible_text(d->node);
        if (contains_text(r_.actual, v("message"))) return pass("dialog shows " + quoted(v("message")));
        return fail(FailureSignal::GuiMessageNotDisplayed, "message " + quoted(v("message")) + " not identified in the dialog box",
                    v("message"), {}, d->node);
    }

    if (id == "clickOnTheRowOfTheTableReferringTo") {
        auto t = table(v("table"));
        if (!t) return;
        std::vector<NodeRef> hits;
        for (auto row : rows(t->node)) {
            auto txt = runner_.visible_text(row);
            if (contains_text(txt, v("row")) && (text::trim(v("element")).empty() || contains_text(txt, v("element"))))
                hits.push_back(row);
        }
        if (hits.empty()) return fail(FailureSignal::GuiValueNotFound, "no row " + quoted(v("row")) + " referring to " + quoted(v("element")), v("row"), {}, t->node);
        if (hits.size() > 1) return fail(FailureSignal::GuiLocatorMany, "Element not identified: " + std::to_string(hits.size()) + " rows match " + quoted(v("row")), {}, {}, t->node);
        return click_inside(hits.front(), "row " + quoted(v("row")));
    }
    if (id == "storeTheCellOfTheTableIn") {
        auto t = table(v("table"));
        if (!t) return;
        auto cell = find_cell(*t, v("cell"));
        if (!cell) return;
        ctx_.variables[v("place")] = runner_.visible_text(*cell);
        r_.actual = ctx_.variables[v("place")];
        return pass("stored " + quoted(r_.actual) + " in " + quoted(v("place")));
    }
    if (id == "storeTheColumnOfTheTableIn") {
        auto t = table(v("table"));
        if (!t) return;
        auto col = find_column(*t, v("column"));
        if (!col) return;
        ctx_.variables[v("place")] = join(column_values(*t, col->second), "\n");
        return pass("stored column " + quoted(v("column")) + " in " + quoted(v("place")));
    }
    if (id == "compareTheTextOfTheTableCellWith" || id == "compareTheTextOfTheTableColumnWith") {
        bool cell = id == "compareTheTextOfTheTableCellWith";
        auto have = variable_or_literal(v("table text"));
        r_.expected = v("text");
        r_.actual = have;
        bool ok = cell ? text::same_name(have, v("text")) : contains_text(have, v("text"));
        if (ok) return pass(quoted(have) + (cell ? " equals " : " contains ") + quoted(v("text")));
        return fail(FailureSignal::GuiValueNotFound, quoted(have) + (cell ? " differs from " : " lacks ") + quoted(v("text")), v("text"));
    }
    if (id == "clickOnTheCellOfTheTable") {
        auto t = table(v("table"));
        if (!t) return;
        auto cell = find_cell(*t, v("cell"));
        if (cell) click_inside(*cell, "cell " + quoted(v("cell")));
        return;
    }
    if (id == "clickOnTheColumnOfTheTable") {
        auto t = table(v("table"));
        if (!t) return;
        auto col = find_column(*t, v("column"));
        if (col) click_inside(col->first, "column " + quoted(v("column")));
        return;
    }
    if (id == "chooseTheOptionInTheCellOfTheTable" || id == "chooseTheOptionInTheColumnOfTheTable") {
        auto t = table(v("table"));
        if (t) choose_in_table(*t, v("option"));
        return;
    }
    if (id == "typeTheTextInTheCellOfTheTable" || id == "typeTheTextInTheColumnOfTheTable") {
        auto t = table(v("table"));
        if (t) type_in_table(*t, v("text"));
        return;
    }

    skip("behavior " + id + " has no final-GUI semantics");
}

bool is_pending(const std::vector<PendingMarker>& markers, int scenario, int step) {
    return std::any_of(markers.begin(), markers.end(), [&](const PendingMarker& m) {
        return m.scenario == scenario && (!m.step || *m.step == step);
    });
}

}  // namespace

PendingMarker parse_pending_marker(std::string_view s) {
    auto colon = s.find(':');
    if (colon == std::string_view::npos) throw ConfigError("pending marker '" + std::string(s) + "' must be S:K or S:*");
    auto sc = parse_positive(s.substr(0, colon));
    auto rest = text::trim(s.substr(colon + 1));
    PendingMarker m;
    if (!sc || *sc < 1) throw ConfigError("pending marker '" + std::string(s) + "': bad scenario number");
    m.scenario = *sc;
    if (rest != "*") {
        auto st = parse_positive(rest);
        if (!st || *st < 1) throw ConfigError("pending marker '" + std::string(s) + "': bad step number");
        m.step = *st;
    }
    return m;
}

StepResult execute_step(const Step& step, const StepBinding& binding, Runner& runner, const PageMap& map,
                        const OntologyCatalog& catalog, StepContext& context) {
    StepResult r;
    r.step_text = step_line(step);
    r.line = step.line_number;
    r.artifact = Artifact::FinalGui;
    r.artifact_path = map.source_path;
    StepExecutor(binding, runner, map, catalog, context, r).run();
    return r;
}

std::vector<StepResult> assess_final_gui(const Story& story, const PageMap& map, const OntologyCatalog& catalog,
                                         Runner& runner, const GuiCheckOptions& options) {
    std::vector<StepResult> results;
    int scenario_no = 0;
    for (const auto& scenario : story.scenarios) {
        ++scenario_no;
        runner.reset();
        StepContext ctx{std::mt19937(options.seed), {}, &options.dataset};
        bool stopped = false;
        int step_no = 0;
        for (const auto& step : scenario.steps) {
            ++step_no;
            StepResult r;
            if (stopped) {
                r.step_text = step_line(step);
                r.line = step.line_number;
                r.artifact = Artifact::FinalGui;
                r.artifact_path = map.source_path;
                r.status = Status::NotPerformed;
            } else if (is_pending(options.pending, scenario_no, step_no)) {
                r.step_text = step_line(step);
                r.line = step.line_number;
                r.artifact = Artifact::FinalGui;
                r.artifact_path = map.source_path;
                r.status = Status::Pending;
                r.evidence = "marked pending; not executed";
            } else if (auto binding = match_step(step, catalog)) {
                r = execute_step(step, *binding, runner, map, catalog, ctx);
            } else {
                r.step_text = step_line(step);
                r.line = step.line_number;
                r.artifact = Artifact::FinalGui;
                r.artifact_path = map.source_path;
                r.status = Status::Unrecognized;
                r.evidence = "no step is matching the ontology";
            }
            r.story_title = story.title;
            r.scenario_title = scenario.title;
            if (r.status == Status::Failed && options.mode == Mode::FailFast) stopped = true;
            results.push_back(std::move(r));
        }
    }
    return results;
}

std::map<std::string, std::string> load_dataset(const std::string& path) {
    std::map<std::string, std::string> out;
    int line_no = 0;
    for (const auto& raw : text::split(read_file(path), '\n')) {
        ++line_no;
        auto line = text::trim(raw);
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(path + ":" + std::to_string(line_no) + ": expected key=value");
        out[text::trim(std::string_view(line).substr(0, eq))] = text::trim(std::string_view(line).substr(eq + 1));
    }
    return out;
}

}  // namespace bac
