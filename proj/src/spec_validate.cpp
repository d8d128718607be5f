#include "tedm/economy_spec.hpp"

#include <algorithm>
#include <set>

namespace tedm::spec {

bool ValidationReport::valid() const { return count(Severity::error) == 0; }

std::size_t ValidationReport::count(Severity severity) const {
    return static_cast<std::size_t>(std::count_if(findings.begin(), findings.end(),
                                                  [&](const Finding& f) { return f.severity == severity; }));
}

std::vector<Finding> ValidationReport::errors() const {
    std::vector<Finding> out;
    std::copy_if(findings.begin(), findings.end(), std::back_inserter(out),
                 [](const Finding& f) { return f.severity == Severity::error; });
    return out;
}

namespace {

std::string idx(const char* base, std::size_t i) { return std::string(base) + "/" + std::to_string(i); }

void check_references(const EconomySpec& spec, std::vector<Finding>& out) {
    const auto& inc = spec.incentives;
    std::set<std::string> declared;
    for (std::size_t i = 0; i < inc.stakeholders.size(); ++i) {
        if (!declared.insert(inc.stakeholders[i].name).second)
            out.push_back({Severity::error, "S1", "stakeholder '" + inc.stakeholders[i].name + "' declared twice",
                           idx("/incentives/stakeholders", i) + "/name"});
    }
    auto require_declared = [&](const std::string& name, const std::string& path) {
        if (!declared.count(name))
            out.push_back({Severity::error, "S1", "reference to undeclared stakeholder '" + name + "'", path});
    };
    for (std::size_t i = 0; i < inc.desirable_behaviors.size(); ++i)
        require_declared(inc.desirable_behaviors[i].stakeholder,
                         idx("/incentives/desirable_behaviors", i) + "/stakeholder");
    for (std::size_t i = 0; i < inc.mechanisms.size(); ++i)
        for (std::size_t t = 0; t < inc.mechanisms[i].targets.size(); ++t)
            require_declared(inc.mechanisms[i].targets[t], idx("/incentives/incentive_mechanisms", i) + "/targets/" +
                                                               std::to_string(t));
    for (std::size_t i = 0; i < spec.governance.roles.size(); ++i)
        require_declared(spec.governance.roles[i].stakeholder, idx("/governance/roles", i) + "/stakeholder");
}

void check_incentive_classes(const EconomySpec& spec, std::vector<Finding>& out) {
    const auto& mechs = spec.incentives.mechanisms;
    for (std::size_t i = 0; i < mechs.size(); ++i) {
        IncentiveClass expected = taxonomy_class(mechs[i].type);
        if (mechs[i].incentive_class != expected)
            out.push_back({Severity::error, "S2",
                           std::string(kIncentiveTypeNames.name(mechs[i].type)) + " is a " +
                               std::string(kIncentiveClassNames.name(expected)) + " incentive",
                           idx("/incentives/incentive_mechanisms", i) + "/class"});
    }
}

void check_tokens(const EconomySpec& spec, std::vector<Finding>& out) {
    for (std::size_t i = 0; i < spec.tokens.size(); ++i) {
        const Token& t = spec.tokens[i];
        const std::string base = idx("/tokenomics/tokens", i);

        const auto& policy = t.supply_policy;
        bool policy_ok = true;
        if (policy.kind == supply::SupplyKind::capped && !policy.s_max) {
            out.push_back({Severity::error, "S3", "capped supply requires s_max", base + "/supply_policy"});
            policy_ok = false;
        }
        if (policy.kind == supply::SupplyKind::uncapped && policy.s_max) {
            out.push_back({Severity::error, "S3", "uncapped supply must not declare s_max",
                           base + "/supply_policy/s_max"});
            policy_ok = false;
        }
        if (policy.s_max && *policy.s_max <= 0) {
            out.push_back({Severity::error, "S3", "s_max must be positive", base + "/supply_policy/s_max"});
            policy_ok = false;
        }
        if (t.annual_inflation && policy.kind == supply::SupplyKind::capped)
            out.push_back({Severity::warning, "S3", "annual inflation declared on a capped supply",
                           base + "/supply_policy/annual_inflation"});

        Quantity share_sum = 0;
        bool shares_ok = true;
        for (std::size_t a = 0; a < t.distribution.size(); ++a) {
            const auto& share = t.distribution[a].share;
            if (share <= 0 || share > 1) {
                shares_ok = false;
                out.push_back({Severity::error, "V1", "allocation share must lie in (0, 1]",
                               base + "/distribution/" + std::to_string(a) + "/share"});
            }
            share_sum += share;
        }
        if (shares_ok && share_sum != 1)
            out.push_back({Severity::error, "V1",
                           "distribution shares of " + t.symbol + " sum to " + exact_string(share_sum) + ", not 1",
                           base + "/distribution"});

        if (policy_ok && t.mint_plan && policy.kind == supply::SupplyKind::capped) {
            const auto& plan = *t.mint_plan;
            Quantity planned = plan.initial_supply + plan.per_epoch * plan.epochs;
            if (planned > *policy.s_max)
                out.push_back({Severity::error, "V2",
                               "mint plan reaches " + exact_string(planned) + " which exceeds the cap of " +
                                   exact_string(*policy.s_max),
                               base + "/mint_plan"});
        }

        if (t.value_capture == std::vector<ValueCapture>{ValueCapture::asset_claims} && t.timing == Timing::pre_launch)
            out.push_back({Severity::warning, "V6",
                           t.symbol + " captures value only through asset claims but is issued pre-launch; "
                                      "asset-backed issuance needs the assets first",
                           base + "/timing"});

        if (t.illustrative)
            out.push_back({Severity::info, "I1", t.symbol + " uses illustrative placeholder figures", base});
    }
}

void check_governance(const EconomySpec& spec, std::vector<Finding>& out) {
    const auto& gov = spec.governance;
    const auto family = gov.chosen_mechanism.family;

    std::vector<std::string> unmet;
    for (const auto& [property, level] : gov.required_properties) {
        int score = governance::property_matrix().score(family, property);
        if (score < level)
            unmet.push_back(std::string(governance::kPropertyNames.name(property)) + " " + std::to_string(score) +
                            " < " + std::to_string(level));
    }
    if (!unmet.empty()) {
        std::string message = std::string(governance::kFamilyNames.name(family)) + " does not meet required properties:";
        for (const auto& u : unmet) message += " " + u + ";";
        message.pop_back();
        out.push_back({Severity::error, "V3", message, "/governance/chosen_mechanism"});
    }

    if (gov.decentralization_target == DecentralizationTarget::public_decentralized &&
        family == governance::Family::one_token_one_vote && gov.support_mechanisms.empty())
        out.push_back({Severity::warning, "V5",
                       "public decentralized target with token-weighted voting and no support mechanisms "
                       "is exposed to vote buying and plutocracy",
                       "/governance/chosen_mechanism"});

    if (gov.max_gini && (*gov.max_gini < 0 || *gov.max_gini > 1))
        out.push_back({Severity::error, "S4", "max_gini must lie in [0, 1]", "/governance/max_gini"});
    if (gov.min_nakamoto && *gov.min_nakamoto < 1)
        out.push_back({Severity::error, "S4", "min_nakamoto must be at least 1", "/governance/min_nakamoto"});
}

void check_behaviors(const EconomySpec& spec, std::vector<Finding>& out) {
    const auto& inc = spec.incentives;
    for (std::size_t i = 0; i < inc.desirable_behaviors.size(); ++i) {
        const auto& who = inc.desirable_behaviors[i].stakeholder;
        bool targeted = std::any_of(inc.mechanisms.begin(), inc.mechanisms.end(), [&](const IncentiveMechanism& m) {
            return std::find(m.targets.begin(), m.targets.end(), who) != m.targets.end();
        });
        if (!targeted)
            out.push_back({Severity::warning, "V4",
                           "desirable behavior of '" + who + "' has no incentive mechanism targeting it",
                           idx("/incentives/desirable_behaviors", i)});
    }
}

}  // namespace

ValidationReport validate_spec(const EconomySpec& spec) {
    ValidationReport report;
    check_references(spec, report.findings);
    check_incentive_classes(spec, report.findings);
    check_tokens(spec, report.findings);
    check_governance(spec, report.findings);
    check_behaviors(spec, report.findings);
    std::sort(report.findings.begin(), report.findings.end());
    return report;
}

}  // namespace tedm::spec
