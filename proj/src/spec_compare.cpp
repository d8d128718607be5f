#include "tedm/economy_spec.hpp"

#include <algorithm>
#include <sstream>

namespace tedm::spec {

using nlohmann::json;

bool ComparisonReport::all_identical() const {
    return std::all_of(rows.begin(), rows.end(), [](const ComparisonRow& r) { return r.identical(); });
}

namespace {

std::string humanize(std::string_view canonical) {
    std::string out(canonical);
    for (char& c : out)
        if (c == '_') c = ' ';
    return out;
}

template <typename T, typename F>
std::string join(const std::vector<T>& items, const char* sep, F&& render) {
    std::string out;
    for (const auto& item : items) {
        if (!out.empty()) out += sep;
        out += render(item);
    }
    return out;
}

std::string with_note(std::string text, const std::string& note) {
    if (note.empty()) return text;
    if (text.empty()) return note;
    return text + "; " + note;
}

std::string percent(const Quantity& share) { return to_decimal_string(share * 100, 4) + "%"; }

/// 3030303031 -> "≈ 3.03B", 1000000 -> "1M"
std::string magnitude(const Quantity& value) {
    struct Unit {
        long long scale;
        const char* suffix;
    };
    for (Unit u : {Unit{1'000'000'000'000LL, "T"}, Unit{1'000'000'000LL, "B"}, Unit{1'000'000LL, "M"},
                   Unit{1'000LL, "K"}}) {
        if (value >= u.scale) {
            Quantity scaled = value / u.scale;
            std::string rounded = to_fixed_string(scaled, 2);
            bool exact = parse_quantity(rounded) == scaled;
            return std::string(exact ? "" : "\xE2\x89\x88 ") + rounded + u.suffix;
        }
    }
    return to_decimal_string(value, 2);
}

std::string per_token(const EconomySpec& spec, std::string (*render)(const Token&)) {
    if (spec.tokens.size() == 1) return render(spec.tokens.front());
    return join(spec.tokens, " | ", [&](const Token& t) { return t.symbol + ": " + render(t); });
}

std::string supply_model(const Token& t) {
    std::string text;
    if (t.supply_policy.kind == supply::SupplyKind::capped) {
        text = "capped supply";
        if (t.supply_policy.s_max) text += " (cap " + magnitude(*t.supply_policy.s_max) + " " + t.symbol + ")";
    } else if (t.annual_inflation) {
        text = "inflationary (" + percent(*t.annual_inflation) + " annual inflation reported)";
    } else {
        text = "uncapped supply";
    }
    return with_note(text, t.supply_note);
}

std::string distribution(const Token& t) {
    std::string text = humanize(kTimingNames.name(t.timing));
    for (char& c : text)
        if (c == ' ') c = '-';
    text += ": ";
    text += join(t.distribution, ", ", [](const Allocation& a) {
        std::string s = humanize(kChannelNames.name(a.channel)) + " " + percent(a.share);
        if (!a.label.empty()) s += " (" + a.label + ")";
        if (a.vesting) {
            s += " vested over " + std::to_string(a.vesting->duration_epochs) + " epochs";
            if (a.vesting->cliff_epochs > 0) s += " after a " + std::to_string(a.vesting->cliff_epochs) + "-epoch cliff";
        }
        return s;
    });
    return with_note(text, t.distribution_note);
}

std::string value_capture(const Token& t) {
    std::string text = join(t.value_capture, ", ", [](ValueCapture v) { return humanize(kValueCaptureNames.name(v)); });
    return with_note(text, t.value_note);
}

std::string price_management(const Token& t) {
    std::string text = t.price_management.empty()
                           ? std::string("none")
                           : join(t.price_management, ", ", [](PriceLever p) { return humanize(kPriceLeverNames.name(p)); });
    return with_note(text, t.price_note);
}

std::string voting(const Governance& g) {
    const auto& m = g.chosen_mechanism;
    std::string text(governance::display_name(m.family));
    if (m.family == governance::Family::vote_escrow)
        text += " (max lock " + std::to_string(m.params.lock_max) + " epochs)";
    else if (m.family == governance::Family::conviction)
        text += " (decay " + exact_string(m.params.conviction_alpha) + ")";
    return with_note(text, g.mechanism_note);
}

std::string decentralization(const Governance& g) {
    std::string text;
    switch (g.decentralization_target) {
        case DecentralizationTarget::private_centralized: text = "private, centralized"; break;
        case DecentralizationTarget::public_centralized: text = "public, centralized"; break;
        case DecentralizationTarget::public_decentralized: text = "public, decentralized"; break;
    }
    if (g.max_gini) text += "; target Gini <= " + to_decimal_string(*g.max_gini, 4);
    if (g.min_nakamoto) text += "; target Nakamoto >= " + std::to_string(*g.min_nakamoto);
    return with_note(text, g.decentralization_note);
}

using RowFn = std::string (*)(const EconomySpec&);

struct RowDef {
    const char* pillar;
    const char* step;
    RowFn render;
};

const RowDef kRows[] = {
    {"Incentives", "Value Proposition",
     [](const EconomySpec& s) {
         return join(s.incentives.stakeholders, "; ", [](const Stakeholder& st) {
             return st.value_proposition.empty() ? st.name : st.name + ": " + st.value_proposition;
         });
     }},
    {"Incentives", "Desirable Behaviors",
     [](const EconomySpec& s) {
         return join(s.incentives.desirable_behaviors, "; ",
                     [](const DesirableBehavior& b) { return b.stakeholder + ": " + b.behavior; });
     }},
    {"Incentives", "Incentive Mechanisms",
     [](const EconomySpec& s) {
         return join(s.incentives.mechanisms, "; ", [](const IncentiveMechanism& m) {
             std::string name = m.label.empty() ? humanize(kIncentiveTypeNames.name(m.type)) : m.label;
             return name + (m.incentive_class == IncentiveClass::monetary ? " (monetary)" : " (non-monetary)");
         });
     }},
    {"Governance", "Governance Areas",
     [](const EconomySpec& s) {
         std::string text = join(s.governance.areas, ", ", [](governance::GovernanceArea a) {
             return humanize(governance::kAreaNames.name(a));
         });
         return with_note(text, s.governance.areas_note);
     }},
    {"Governance", "Stakeholder Roles",
     [](const EconomySpec& s) {
         return join(s.governance.roles, "; ", [](const Role& r) { return r.stakeholder + ": " + r.role; });
     }},
    {"Governance", "Level of Decentralization", [](const EconomySpec& s) { return decentralization(s.governance); }},
    {"Governance", "Voting Mechanism", [](const EconomySpec& s) { return voting(s.governance); }},
    {"Tokenomics", "Token Supply Model", [](const EconomySpec& s) { return per_token(s, supply_model); }},
    {"Tokenomics", "Token Distribution", [](const EconomySpec& s) { return per_token(s, distribution); }},
    {"Tokenomics", "Value-Capture Channels", [](const EconomySpec& s) { return per_token(s, value_capture); }},
    {"Tokenomics", "Price-Management Mechanisms", [](const EconomySpec& s) { return per_token(s, price_management); }},
};

}  // namespace

ComparisonReport compare_specs(const EconomySpec& a, const EconomySpec& b) {
    ComparisonReport report;
    report.a_name = a.name;
    report.b_name = b.name;
    for (const auto& row : kRows) report.rows.push_back({row.pillar, row.step, row.render(a), row.render(b)});
    return report;
}

std::string render_text(const ComparisonReport& report) {
    std::ostringstream out;
    out << "Comparison: " << report.a_name << " vs " << report.b_name << "\n";
    std::string pillar;
    for (const auto& row : report.rows) {
        if (row.pillar != pillar) {
            pillar = row.pillar;
            out << "\n[" << pillar << "]\n";
        }
        out << row.step << (row.identical() ? " (identical)" : "") << "\n";
        out << "  " << report.a_name << ": " << row.a << "\n";
        out << "  " << report.b_name << ": " << row.b << "\n";
    }
    return out.str();
}

json to_json(const ComparisonReport& report) {
    json rows = json::array();
    for (const auto& r : report.rows)
        rows.push_back({{"pillar", r.pillar}, {"step", r.step}, {"a", r.a}, {"b", r.b}, {"identical", r.identical()}});
    return {{"a", report.a_name}, {"b", report.b_name}, {"all_identical", report.all_identical()}, {"rows", rows}};
}

}  // namespace tedm::spec
