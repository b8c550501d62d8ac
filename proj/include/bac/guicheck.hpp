#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "bac/error.hpp"
#include "bac/markup.hpp"
#include "bac/ontology.hpp"
#include "bac/protocheck.hpp"
#include "bac/report.hpp"
#include "bac/story.hpp"

namespace bac {

enum class LocatorType { Id, Css };

struct ScreenEntry {
    std::string name;
    std::string document_path;  // resolved against the page map's directory
};

struct ElementMapEntry {
    std::string name;
    std::string screen;
    LocatorType locator_type = LocatorType::Id;
    std::string locator;
    std::optional<std::string> declared_kind;
};

struct PageMap {
    std::vector<ScreenEntry> screens;
    std::vector<ElementMapEntry> elements;
    std::string source_path;

    const ScreenEntry* screen(std::string_view name) const;
    const ElementMapEntry* element(std::string_view name, std::string_view screen) const;
    std::vector<std::string> element_names(std::string_view screen) const;
};

/// JSON: {"screens":[{"name","document"}], "elements":[{"name","screen",
/// "locatorType":"Id"|"Css","locator","kind"?}]}.
PageMap parse_page_map(std::string_view json_text, const std::string& origin, const std::string& base_dir);
PageMap load_page_map(const std::string& path);

/// Final-GUI kinds: TextField, Radio, CheckBox, Select, Button, Link, Calendar,
/// AutoComplete, Grid, Menu, MenuItem, Text, Screen, Dialog, Tree, Element.
bool is_known_kind(std::string_view kind);
std::string infer_kind(const markup::Document& doc, markup::NodeId id);

/// CSS subset: tag, #id, .class, [attr], [attr=v], descendant and `>`
/// combinators, comma-separated groups. Results are in document order.
std::vector<markup::NodeId> select_css(const markup::Document& doc, std::string_view selector,
                                       markup::NodeId scope = 0);

using NodeRef = markup::NodeId;

struct NodeInfo {
    std::string tag;
    std::string kind;  // declared kind if any, else inferred
    std::string inferred_kind;
    bool visible = true;
    bool disabled = false;
    bool readonly = false;
    std::optional<std::size_t> maxlength;
    std::string text;  // visible text of the subtree
};

struct ClickOutcome {
    std::optional<std::string> navigated_to;
    std::string note;
};

/// What the assessor needs from a GUI driver. The static-DOM simulator is
/// the shipped implementation; a browser-protocol driver can implement the
/// same contract.
class Runner {
public:
    virtual ~Runner() = default;

    virtual void reset() = 0;
    virtual bool navigate(const std::string& screen) = 0;
    virtual std::optional<std::string> current_screen() const = 0;

    virtual std::vector<NodeRef> locate(const ElementMapEntry& entry) = 0;
    virtual std::vector<NodeRef> find(std::string_view css, std::optional<NodeRef> scope = std::nullopt) = 0;
    virtual NodeInfo describe(NodeRef node, const std::optional<std::string>& declared_kind = std::nullopt) = 0;
    virtual std::vector<NodeRef> ancestors(NodeRef node) = 0;  // nearest first, elements only

    virtual std::string read(NodeRef node) = 0;
    virtual void write(NodeRef node, const std::string& value) = 0;
    virtual ClickOutcome click(NodeRef node) = 0;

    virtual bool checked(NodeRef node) = 0;
    virtual void set_checked(NodeRef node, bool on) = 0;
    virtual std::vector<std::string> options(NodeRef node) = 0;  // select options or datalist entries
    virtual bool select_option(NodeRef node, const std::string& option) = 0;

    virtual std::string visible_text(std::optional<NodeRef> scope = std::nullopt) = 0;
    virtual void set_hidden(NodeRef node, bool hidden) = 0;
    virtual std::string snapshot(std::optional<NodeRef> node = std::nullopt) = 0;
};

struct DomState {
    std::optional<std::string> current_screen;
    markup::Document document;
    std::map<NodeRef, std::string> field_values;
    std::map<NodeRef, bool> checked;
    std::map<NodeRef, std::string> selected;
    std::map<NodeRef, bool> hidden;
};

class StaticDomRunner : public Runner {
public:
    explicit StaticDomRunner(const PageMap& map);

    void reset() override;
    bool navigate(const std::string& screen) override;
    std::optional<std::string> current_screen() const override { return state_.current_screen; }

    std::vector<NodeRef> locate(const ElementMapEntry& entry) override;
    std::vector<NodeRef> find(std::string_view css, std::optional<NodeRef> scope) override;
    NodeInfo describe(NodeRef node, const std::optional<std::string>& declared_kind) override;
    std::vector<NodeRef> ancestors(NodeRef node) override;

    std::string read(NodeRef node) override;
    void write(NodeRef node, const std::string& value) override;
    ClickOutcome click(NodeRef node) override;

    bool checked(NodeRef node) override;
    void set_checked(NodeRef node, bool on) override;
    std::vector<std::string> options(NodeRef node) override;
    bool select_option(NodeRef node, const std::string& option) override;

    std::string visible_text(std::optional<NodeRef> scope) override;
    void set_hidden(NodeRef node, bool hidden) override;
    std::string snapshot(std::optional<NodeRef> node) override;

    const DomState& state() const { return state_; }

private:
    const PageMap& map_;
    std::map<std::string, markup::Document> pristine_;
    DomState state_;

    const markup::Document& doc() const { return state_.document; }
    bool is_visible(NodeRef node) const;
    std::optional<std::string> screen_for_target(std::string_view href) const;
    void text_into(NodeRef node, std::string& out) const;
};

struct PendingMarker {
    int scenario = 0;             // 1-based
    std::optional<int> step;      // 1-based; nullopt means every step
};

/// "2:3" or "2:*".
PendingMarker parse_pending_marker(std::string_view s);

struct GuiCheckOptions {
    Mode mode = Mode::FailFast;
    std::uint32_t seed = 0;
    std::vector<PendingMarker> pending;
    std::map<std::string, std::string> dataset;
};

/// Per-scenario context: random source and stored variables.
struct StepContext {
    std::mt19937 rng;
    std::map<std::string, std::string> variables;
    const std::map<std::string, std::string>* dataset = nullptr;
};

StepResult execute_step(const Step& step, const StepBinding& binding, Runner& runner, const PageMap& map,
                        const OntologyCatalog& catalog, StepContext& context);

std::vector<StepResult> assess_final_gui(const Story& story, const PageMap& map, const OntologyCatalog& catalog,
                                         Runner& runner, const GuiCheckOptions& options = {});

std::map<std::string, std::string> load_dataset(const std::string& path);

}  // namespace bac
